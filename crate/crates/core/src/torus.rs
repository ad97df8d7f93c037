//! The transfer fast path: `H¹(Λ¹)`, `H¹(Λ)`, `H²(ℤ)′`, `Ш²(Λ)` and `τ` from
//! a [`NormTorusDatum`] without building any lattice.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::abelian::{
    abelianization, annihilator, combine_into_sum, direct_sum, dual_group, relative_abelianization,
    subgroup_contains, subquotient, AbHom, AbelianQuotient, FinAb,
};
use crate::datum::{NormTorusDatum, SubgroupPair};
use crate::error::{Error, Result};
use crate::group::{product_components, FiniteGroup, Side, Subgroup};
use crate::transfer::relative_transfer_with;

/// Everything the fast path computes for one datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TamagawaReport {
    pub h1_lambda: FinAb,
    pub h1_lambda1: FinAb,
    pub h2z_prime_order: u128,
    pub sha2_lambda: FinAb,
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub tau: BigRational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_k: Option<u128>,
    /// `false` when `τ` is only a lower bound.
    pub exact: bool,
    pub decomposition_groups_used: usize,
}

/// `G^{ab}` with the combined relative transfer `G^{ab} → ⊕ N_i^{ab}`.
pub struct CombinedTransfer {
    pub gab: AbelianQuotient,
    pub n_ab: Vec<FinAb>,
    pub ver: AbHom,
}

pub fn combined_transfer(datum: &NormTorusDatum) -> Result<CombinedTransfer> {
    let g = datum.group();
    let gab = abelianization(g);
    let mut maps = Vec::new();
    let mut n_ab = Vec::new();
    for p in datum.pairs() {
        let nab = relative_abelianization(g, &p.ntilde, &p.h)?;
        maps.push(relative_transfer_with(g, &p.ntilde, &gab, &nab)?);
        n_ab.push(nab.group().clone());
    }
    let ver = if maps.is_empty() {
        AbHom::zero(gab.group().clone(), FinAb::trivial())
    } else {
        combine_into_sum(&direct_sum(&n_ab), &maps)?
    };
    Ok(CombinedTransfer { gab, n_ab, ver })
}

/// `⊕_i N_i^{ab∨}`.
pub fn h1_lambda1(datum: &NormTorusDatum) -> Result<FinAb> {
    let parts: Vec<FinAb> = combined_transfer(datum)?.n_ab.iter().map(dual_group).collect();
    Ok(direct_sum(&parts).group)
}

/// `ker(Σ Ver∨_{G,N_i})`.
pub fn h1_lambda(datum: &NormTorusDatum) -> Result<FinAb> {
    Ok(combined_transfer(datum)?.ver.dual().kernel().0)
}

/// `H²(ℤ)′ ⊆ G^{ab∨}` realized as `Ann(W)`.
#[derive(Clone, Debug)]
pub struct H2zPrime {
    pub group: FinAb,
    /// Inclusion into `G^{ab∨}` (canonical dual basis).
    pub inclusion: AbHom,
    /// Generators of `W ⊆ G^{ab}`.
    pub kernel_images: Vec<Vec<i64>>,
    pub dual_of_gab: FinAb,
}

impl H2zPrime {
    pub fn order(&self) -> u128 {
        self.group.order()
    }

    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.group.rank()).map(|j| self.inclusion.matrix().column(j)).collect()
    }

    /// Whether a character of `G^{ab}` (dual coordinates) is primitive.
    pub fn contains(&self, f: &[i64]) -> bool {
        subgroup_contains(&self.dual_of_gab, &self.generators(), f)
    }
}

fn require_fast_path(datum: &NormTorusDatum) -> Result<()> {
    let flags = datum.fast_path_flags()?;
    if flags.all_hold() {
        return Ok(());
    }
    let bad: Vec<String> = (0..datum.pairs().len())
        .filter_map(|i| {
            let mut why = Vec::new();
            if !flags.normal_ntilde[i] {
                why.push("Ñ not normal");
            }
            if !flags.abelian_n[i] {
                why.push("Ñ/H not an abelian quotient");
            }
            if !flags.cyclic_n[i] {
                why.push("N^ab not cyclic");
            }
            (!why.is_empty()).then(|| format!("pair {i}: {}", why.join(", ")))
        })
        .collect();
    Err(Error::fast_path("transfer formulas need normal Ñ_i and cyclic N_i; use the oracle")
        .with_context(bad.join("; ")))
}

/// `S ∩ D` as a subgroup of `D` viewed as its own group.
fn pull_back(d: &Subgroup, dg: &FiniteGroup, s: &Subgroup) -> Subgroup {
    let local: Vec<usize> = (0..d.order()).filter(|&k| s.contains(d.elements()[k])).collect();
    dg.subgroup_from_elements(&local).expect("intersection of subgroups")
}

/// Images in `G^{ab}` of `ker(Ver_{D, D̄})`, one generator list per `D`.
/// `D̄` runs over `D_i/(D_i ∩ xH_ix⁻¹)` for `D_i = D ∩ Ñ_i` and `x` over
/// `G/DÑ_i`; when `H_i ⊴ G` only `x = 1` contributes.
fn kernel_images(g: &FiniteGroup, gab: &AbelianQuotient, pairs: &[SubgroupPair], d: &Subgroup) -> Result<Vec<Vec<i64>>> {
    let dg = g.subgroup_as_group(d);
    let dab = abelianization(&dg);
    let mut maps = Vec::new();
    let mut targets = Vec::new();
    for p in pairs {
        let di = pull_back(d, &dg, &p.ntilde);
        let dn = g.join(d, &p.ntilde);
        let mut seen: Vec<Subgroup> = Vec::new();
        for coset in g.cosets(&dn, Side::Left) {
            let hx = pull_back(d, &dg, &g.conjugate(&p.h, coset[0]));
            let hx = dg.intersection(&hx, &di);
            if seen.contains(&hx) {
                continue;
            }
            let dbar = relative_abelianization(&dg, &di, &hx)?;
            maps.push(relative_transfer_with(&dg, &di, &dab, &dbar)?);
            targets.push(dbar.group().clone());
            seen.push(hx);
        }
    }
    let to_gab = dab.induced(gab, |k| d.elements()[k])?;
    let kernel_incl = if maps.is_empty() {
        AbHom::identity(dab.group().clone())
    } else {
        combine_into_sum(&direct_sum(&targets), &maps)?.kernel().1
    };
    Ok((0..kernel_incl.domain().rank())
        .map(|j| to_gab.apply(&kernel_incl.matrix().column(j)))
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect())
}

fn h2z_from(datum: &NormTorusDatum, ct: &CombinedTransfer) -> Result<H2zPrime> {
    require_fast_path(datum)?;
    let g = datum.group();
    let mut w = Vec::new();
    for d in datum.effective_decomposition_set() {
        w.extend(kernel_images(g, &ct.gab, datum.pairs(), &d)?);
    }
    let a = ct.gab.group();
    let (group, inclusion) = annihilator(a, &w);
    Ok(H2zPrime { group, inclusion, kernel_images: w, dual_of_gab: dual_group(a) })
}

/// `H²(ℤ)′ = {f ∈ G^{ab∨} : f|_{D^{ab}} ∈ Im(Ver∨_{D,D̄}) for all D ∈ 𝒟}`.
pub fn h2z_primitive(datum: &NormTorusDatum) -> Result<H2zPrime> {
    h2z_from(datum, &combined_transfer(datum)?)
}

fn sha2_from(ct: &CombinedTransfer, h2: &H2zPrime) -> Result<FinAb> {
    let dual = ct.ver.dual();
    let image: Vec<Vec<i64>> = (0..dual.domain().rank()).map(|j| dual.matrix().column(j)).collect();
    subquotient(&h2.dual_of_gab, &h2.generators(), &image)
        .map_err(|e| Error::internal("Im(Ver∨) is not contained in H²(ℤ)′").with_context(e.context().to_string()))
}

/// `H²(ℤ)′ / Im(Ver∨_{G,N})`.
pub fn sha2_lambda(datum: &NormTorusDatum) -> Result<FinAb> {
    let ct = combined_transfer(datum)?;
    let h2 = h2z_from(datum, &ct)?;
    sha2_from(&ct, &h2)
}

/// The full report; `τ = ∏|N_i| / |H²(ℤ)′|`.
pub fn tamagawa(datum: &NormTorusDatum) -> Result<TamagawaReport> {
    let ct = combined_transfer(datum)?;
    let h2 = h2z_from(datum, &ct)?;
    let sha2 = sha2_from(&ct, &h2)?;
    let h1_lambda = ct.ver.dual().kernel().0;
    let h1_lambda1 = direct_sum(&ct.n_ab.iter().map(dual_group).collect::<Vec<_>>()).group;
    let numerator = datum.n_orders().iter().fold(BigInt::one(), |acc, &n| acc * BigInt::from(n));
    let tau = BigRational::new(numerator, BigInt::from(h2.order()));
    if h1_lambda.order() * h2.order() != h1_lambda1.order() * sha2.order() {
        return Err(Error::internal("four-term sequence orders do not multiply"));
    }
    Ok(TamagawaReport {
        h1_lambda,
        h1_lambda1,
        h2z_prime_order: h2.order(),
        sha2_lambda: sha2,
        tau,
        n_k: datum.is_cm().then(|| h2.order()),
        exact: datum.declared_complete(),
        decomposition_groups_used: datum.effective_decomposition_set().len(),
    })
}

/// One CM type per pair, as left-coset indices of `G/H_i`: for every coset of
/// `Ñ_i` the `H_i`-coset of its least element.
pub fn canonical_cm_types(datum: &NormTorusDatum) -> Result<Vec<Vec<usize>>> {
    if !datum.is_cm() {
        return Err(Error::domain("CM types need a CM datum"));
    }
    let g = datum.group();
    Ok(datum
        .pairs()
        .iter()
        .map(|p| {
            let hidx = g.coset_index(&p.h, Side::Left);
            g.cosets(&p.ntilde, Side::Left).iter().map(|c| hidx[c[0]]).collect()
        })
        .collect())
}

/// `H¹(Λ)` as the subgroup of `{±1}^r` cut out by the parity of `|Φ_i(g)|`.
pub fn h1_lambda_cm_types_with(datum: &NormTorusDatum, types: &[Vec<usize>]) -> Result<FinAb> {
    let Some(iota) = datum.iota() else {
        return Err(Error::domain("CM types need a CM datum"));
    };
    let g = datum.group();
    if types.len() != datum.pairs().len() || types.len() > 64 {
        return Err(Error::domain("need one CM type per pair (at most 64 pairs)"));
    }
    let mut rows: Vec<u64> = vec![0; g.order()];
    for (i, (p, phi)) in datum.pairs().iter().zip(types).enumerate() {
        let cosets = g.cosets(&p.h, Side::Left);
        let idx = g.coset_index(&p.h, Side::Left);
        let mut in_phi = vec![false; cosets.len()];
        for &c in phi {
            if c >= cosets.len() || std::mem::replace(&mut in_phi[c], true) {
                return Err(Error::domain("CM type lists an invalid or repeated embedding").with_context(format!("pair {i}")));
            }
        }
        let disjoint = phi.iter().all(|&c| !in_phi[idx[g.mul(cosets[c][0], iota)]]);
        if phi.len() * 2 != cosets.len() || !disjoint {
            return Err(Error::domain("not a CM type").with_context(format!("pair {i}")));
        }
        for (x, row) in rows.iter_mut().enumerate() {
            let moved = phi.iter().filter(|&&c| !in_phi[idx[g.mul(x, cosets[c][0])]]).count();
            if moved % 2 == 1 {
                *row |= 1 << i;
            }
        }
    }
    let rank = f2_rank(rows);
    Ok(FinAb::from_cyclic_orders(&vec![2; datum.pairs().len() - rank]))
}

pub fn h1_lambda_cm_types(datum: &NormTorusDatum) -> Result<FinAb> {
    h1_lambda_cm_types_with(datum, &canonical_cm_types(datum)?)
}

fn f2_rank(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pos) = rows.iter().position(|&r| r >> bit & 1 == 1) else { continue };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if *r >> bit & 1 == 1 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// What a structural count says about `n_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NkBound {
    One,
    AtMostTwo,
    NoInformation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityBound {
    pub s_count: usize,
    pub group_order: usize,
    pub n_k: NkBound,
}

fn check_iota(g: &FiniteGroup, iota: usize) -> Result<()> {
    if iota >= g.order() || iota == g.identity() || g.mul(iota, iota) != g.identity() || !g.is_central(iota) {
        return Err(Error::domain("iota must be a central element of order 2"));
    }
    Ok(())
}

/// `|S|` for `S = {σ : ι ∉ ⟨σ⟩}` compared with `|G|/2`.
pub fn density_bound(g: &FiniteGroup, iota: usize) -> Result<DensityBound> {
    check_iota(g, iota)?;
    let s_count = (0..g.order())
        .filter(|&x| {
            let k = g.element_order(x);
            !(k.is_multiple_of(2) && g.pow(x, (k / 2) as i64) == iota)
        })
        .count();
    let n_k = match (2 * s_count).cmp(&g.order()) {
        std::cmp::Ordering::Greater => NkBound::One,
        std::cmp::Ordering::Equal => NkBound::AtMostTwo,
        std::cmp::Ordering::Less => NkBound::NoInformation,
    };
    Ok(DensityBound { s_count, group_order: g.order(), n_k })
}

/// Number of index-2 subgroups not containing `ι`.
pub fn imaginary_quadratic_count(g: &FiniteGroup, iota: usize) -> Result<(usize, NkBound)> {
    check_iota(g, iota)?;
    let gab = abelianization(g);
    let a = gab.group();
    let x = gab.project(iota);
    // order-2 characters are c_j ∈ {0, d_j/2}; χ(ι) ≠ 0 iff Σ_{c_j≠0} ι_j is odd
    let even: Vec<usize> = (0..a.rank()).filter(|&j| a.factors()[j] % 2 == 0).collect();
    let mut count = 0;
    for mask in 1u64..(1u64 << even.len()) {
        let s: i64 = even.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &j)| x[j]).sum();
        if s % 2 != 0 {
            count += 1;
        }
    }
    let bound = match count {
        0 => NkBound::NoInformation,
        1 => NkBound::AtMostTwo,
        _ => NkBound::One,
    };
    Ok((count, bound))
}

/// Outcome of the product pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub factors: Vec<TamagawaReport>,
    /// `∏ τ_i`, withheld when a hypothesis fails.
    #[serde(serialize_with = "crate::io::serialize_opt_rational")]
    pub product_tau: Option<BigRational>,
    pub hypothesis_failures: Vec<String>,
    /// The engine on the product datum, when requested.
    pub combined: Option<TamagawaReport>,
    /// `∏ H²(G_i,ℤ)′ ⊆ H²(ℤ)′` after inflation.
    pub inclusion_holds: Option<bool>,
}

/// Combined datum on `∏ G_i`: each pair is pulled back along the projection,
/// `ι` is the tuple of the factor involutions, and `𝒟` is every cyclic
/// subgroup plus `extra`.
pub fn product_datum(factors: &[NormTorusDatum], extra: &[Subgroup]) -> Result<NormTorusDatum> {
    let groups: Vec<&FiniteGroup> = factors.iter().map(|d| d.group()).collect();
    let g = FiniteGroup::direct_product(&groups)?;
    let orders: Vec<usize> = groups.iter().map(|x| x.order()).collect();
    let comps: Vec<Vec<usize>> = (0..g.order()).map(|x| product_components(&orders, x)).collect();
    let pull = |k: usize, s: &Subgroup| -> Result<Subgroup> {
        let el: Vec<usize> = (0..g.order()).filter(|&x| s.contains(comps[x][k])).collect();
        g.subgroup_from_elements(&el)
    };
    let mut pairs = Vec::new();
    for (k, d) in factors.iter().enumerate() {
        for p in d.pairs() {
            pairs.push(SubgroupPair { h: pull(k, &p.h)?, ntilde: pull(k, &p.ntilde)? });
        }
    }
    let iota = if factors.iter().all(|d| d.is_cm()) && !factors.is_empty() {
        let parts: Vec<usize> = factors.iter().map(|d| d.iota().unwrap()).collect();
        Some(crate::group::product_index(&orders, &parts))
    } else {
        None
    };
    NormTorusDatum::new(g, pairs, iota, extra.to_vec(), true, false)
}

/// `τ` of a product from the factors, checked against the product datum when
/// `verify` is set.
pub fn product_tamagawa(factors: &[NormTorusDatum], extra: &[Subgroup], verify: bool) -> Result<ProductReport> {
    if factors.is_empty() {
        return Err(Error::domain("product of zero factors"));
    }
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for (k, d) in factors.iter().enumerate() {
        if d.pairs().iter().any(|p| p.h.order() != 1) {
            failures.push(format!("factor {k}: K_i/k is not Galois (H_i nontrivial)"));
        }
        let flags = d.fast_path_flags()?;
        if !flags.cyclic_n.iter().all(|&b| b) {
            failures.push(format!("factor {k}: N_i not cyclic"));
        }
        if let Some(bad) = d.effective_decomposition_set().iter().find(|s| !d.group().is_cyclic(s)) {
            failures.push(format!("factor {k}: non-cyclic decomposition group of order {}", bad.order()));
        }
        reports.push(tamagawa(d)?);
    }
    let product_tau = failures
        .is_empty()
        .then(|| reports.iter().fold(BigRational::one(), |acc, r| acc * r.tau.clone()));
    let (combined, inclusion_holds) = if verify {
        let pd = product_datum(factors, extra)?;
        let report = tamagawa(&pd)?;
        let incl = inflation_inclusion(factors, &pd)?;
        (Some(report), Some(incl))
    } else {
        (None, None)
    };
    Ok(ProductReport { factors: reports, product_tau, hypothesis_failures: failures, combined, inclusion_holds })
}

fn inflation_inclusion(factors: &[NormTorusDatum], pd: &NormTorusDatum) -> Result<bool> {
    let g = pd.group();
    let orders: Vec<usize> = factors.iter().map(|d| d.group().order()).collect();
    let gab = abelianization(g);
    let total = h2z_primitive(pd)?;
    for (k, d) in factors.iter().enumerate() {
        let fab = abelianization(d.group());
        let proj = gab.induced(&fab, |x| product_components(&orders, x)[k])?;
        let inflate = proj.dual();
        for f in h2z_primitive(d)?.generators() {
            if !total.contains(&inflate.apply(&f)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cm(g: FiniteGroup, iota: usize, extra: Vec<Subgroup>) -> NormTorusDatum {
        let h = g.trivial_subgroup();
        NormTorusDatum::cm_field(g, h, iota, extra, true, true).unwrap()
    }

    #[test]
    fn imaginary_quadratic() {
        let d = cm(FiniteGroup::cyclic(2).unwrap(), 1, vec![]);
        let r = tamagawa(&d).unwrap();
        assert_eq!(r.h1_lambda1.factors(), &[2]);
        assert!(r.h1_lambda.is_trivial());
        assert_eq!(r.tau, rat(1, 1));
        assert_eq!(r.n_k, Some(2));
        assert!(h1_lambda_cm_types(&d).unwrap().is_trivial());
    }

    #[test]
    fn quaternion_values() {
        let q8 = FiniteGroup::quaternion8();
        let d = cm(q8.clone(), 1, vec![]);
        let r = tamagawa(&d).unwrap();
        assert_eq!(r.h1_lambda.factors(), &[2]);
        assert_eq!(r.sha2_lambda.factors(), &[2, 2]);
        assert_eq!(r.h2z_prime_order, 4);
        assert_eq!(r.tau, rat(1, 2));
        assert_eq!(h1_lambda_cm_types(&d).unwrap().factors(), &[2]);
        let d = cm(q8.clone(), 1, vec![q8.whole()]);
        let r = tamagawa(&d).unwrap();
        assert!(r.sha2_lambda.is_trivial());
        assert_eq!(r.tau, rat(2, 1));
    }

    #[test]
    fn abelian_cases() {
        let v4 = FiniteGroup::units_mod(8).unwrap();
        let r = tamagawa(&cm(v4.clone(), 3, vec![])).unwrap();
        assert_eq!(r.h2z_prime_order, 1);
        assert_eq!(r.tau, rat(2, 1));
        assert_eq!(r.h1_lambda.factors(), &[2]);
        assert_eq!(imaginary_quadratic_count(&v4, 3).unwrap(), (2, NkBound::One));
        let z5 = FiniteGroup::units_mod(5).unwrap();
        let r = tamagawa(&cm(z5.clone(), 3, vec![])).unwrap();
        assert_eq!(r.h2z_prime_order, 2);
        assert!(r.sha2_lambda.is_trivial());
        assert_eq!(r.tau, rat(1, 1));
        assert_eq!(imaginary_quadratic_count(&z5, 3).unwrap().0, 0);
    }

    #[test]
    fn doubled_field() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let p = SubgroupPair { h: g.trivial_subgroup(), ntilde: g.whole() };
        let d = NormTorusDatum::new(g, vec![p.clone(), p], Some(1), vec![], true, true).unwrap();
        let r = tamagawa(&d).unwrap();
        assert_eq!(r.tau, rat(2, 1));
        assert_eq!(r.h1_lambda1.factors(), &[2, 2]);
        assert_eq!(h1_lambda_cm_types(&d).unwrap().factors(), &[2]);
        assert_eq!(r.h1_lambda.factors(), &[2]);
    }

    #[test]
    fn density() {
        let q8 = FiniteGroup::quaternion8();
        assert_eq!(density_bound(&q8, 1).unwrap().n_k, NkBound::NoInformation);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let b = density_bound(&z2, 1).unwrap();
        assert_eq!((b.s_count, b.n_k), (1, NkBound::AtMostTwo));
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let b = density_bound(&d4, 2).unwrap();
        assert_eq!((b.s_count, b.n_k), (5, NkBound::One));
        assert!(density_bound(&d4, 1).is_err());
    }

    #[test]
    fn fast_path_refuses_noncyclic_n() {
        let v4 = FiniteGroup::units_mod(8).unwrap();
        let p = SubgroupPair { h: v4.trivial_subgroup(), ntilde: v4.whole() };
        let d = NormTorusDatum::new(v4, vec![p], None, vec![], true, false).unwrap();
        assert_eq!(tamagawa(&d).unwrap_err().code(), "fast_path_unavailable");
        assert_eq!(h1_lambda1(&d).unwrap().factors(), &[2, 2]);
    }
}
