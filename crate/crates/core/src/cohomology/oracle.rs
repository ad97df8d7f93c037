//! Brute-force cohomology of the character lattices, used to cross-check the
//! transfer engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::bar::{cohomology, conjugate_cochain, push_cochain, restrict_cochain, Budget, Cohomology};
use super::lattice::{build_character_lattices, CharacterLattices, GLattice};
use crate::abelian::{combine_into_sum, direct_sum, subgroup_abelianization, AbHom, FinAb, IntMatrix};
use crate::datum::NormTorusDatum;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::fields::classify::{involution_splits, plus_abelianization_order};
use crate::torus;

/// `H^q(G, M) → H^q(D, M)` on canonical generators.
pub fn restriction(g: &FiniteGroup, m: &GLattice, d: &Subgroup, from: &Cohomology, to: &Cohomology) -> Result<AbHom> {
    let q = from.degree();
    let images = (0..from.group().rank())
        .map(|j| to.class_of(&restrict_cochain(g, d, q, m.rank(), &from.representative(j))))
        .collect::<Result<Vec<_>>>()?;
    AbHom::from_images(from.group().clone(), to.group().clone(), &images)
}

/// `H^q(G, M) → H^q(G, N)` induced by an equivariant map.
pub fn induced(map: &IntMatrix, from: &Cohomology, to: &Cohomology) -> Result<AbHom> {
    let images = (0..from.group().rank())
        .map(|j| to.class_of(&push_cochain(map, &from.representative(j))))
        .collect::<Result<Vec<_>>>()?;
    AbHom::from_images(from.group().clone(), to.group().clone(), &images)
}

/// The subgroup of `A` killed by every map, with its inclusion.
fn common_kernel(domain: &FinAb, maps: &[AbHom]) -> Result<(FinAb, AbHom)> {
    if maps.is_empty() {
        return Ok((domain.clone(), AbHom::identity(domain.clone())));
    }
    let targets: Vec<FinAb> = maps.iter().map(|f| f.codomain().clone()).collect();
    Ok(combine_into_sum(&direct_sum(&targets), maps)?.kernel())
}

/// `H^q` of `M` restricted to every `D`, computed once.
struct Local {
    subgroups: Vec<Subgroup>,
    groups: Vec<Cohomology>,
    restricted: Vec<GLattice>,
}

impl Local {
    fn new(g: &FiniteGroup, m: &GLattice, q: usize, decomposition: &[Subgroup], budget: &Budget) -> Result<Self> {
        let mut groups = Vec::new();
        let mut restricted = Vec::new();
        for d in decomposition {
            let dg = g.subgroup_as_group(d);
            let md = m.restrict(d);
            groups.push(cohomology(&dg, &md, q, budget)?);
            restricted.push(md);
        }
        Ok(Local { subgroups: decomposition.to_vec(), groups, restricted })
    }

    fn restrictions(&self, g: &FiniteGroup, m: &GLattice, global: &Cohomology) -> Result<Vec<AbHom>> {
        self.subgroups.iter().zip(&self.groups).map(|(d, hd)| restriction(g, m, d, global, hd)).collect()
    }
}

/// `Ш^q_𝒟(G, M) = ker(H^q(G, M) → ∏_{D ∈ 𝒟} H^q(D, M))`.
pub fn sha(g: &FiniteGroup, m: &GLattice, q: usize, decomposition: &[Subgroup], budget: &Budget) -> Result<FinAb> {
    let global = cohomology(g, m, q, budget)?;
    let local = Local::new(g, m, q, decomposition, budget)?;
    Ok(common_kernel(global.group(), &local.restrictions(g, m, &global)?)?.0)
}

/// Everything the oracle measures on one datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub h0_lambda1_rank: usize,
    pub h1_lambda: FinAb,
    pub h1_lambda1: FinAb,
    pub h2_lambda: FinAb,
    pub h2_lambda1: FinAb,
    pub h2z_prime_order: u128,
    pub sha2_lambda: FinAb,
    pub sha2_lambda1: FinAb,
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub tau: BigRational,
    pub decomposition_groups_used: usize,
}

/// The lattices together with the degree-2 data the checks reuse.
struct Measured {
    lattices: CharacterLattices,
    report: OracleReport,
    h2_lambda: Cohomology,
    local_lambda: Local,
}

fn measure(datum: &NormTorusDatum, budget: &Budget) -> Result<Measured> {
    let g = datum.group();
    let lat = build_character_lattices(datum)?;
    let dec = datum.effective_decomposition_set();
    let h0 = cohomology(g, &lat.lambda1, 0, budget)?;
    let h1_lambda = cohomology(g, &lat.lambda, 1, budget)?;
    let h1_lambda1 = cohomology(g, &lat.lambda1, 1, budget)?;
    let h2_lambda = cohomology(g, &lat.lambda, 2, budget)?;
    let h2_lambda1 = cohomology(g, &lat.lambda1, 2, budget)?;
    let local_lambda = Local::new(g, &lat.lambda, 2, &dec, budget)?;
    let local_lambda1 = Local::new(g, &lat.lambda1, 2, &dec, budget)?;
    let sha2_lambda = common_kernel(h2_lambda.group(), &local_lambda.restrictions(g, &lat.lambda, &h2_lambda)?)?.0;
    let sha2_lambda1 = common_kernel(h2_lambda1.group(), &local_lambda1.restrictions(g, &lat.lambda1, &h2_lambda1)?)?.0;

    // H²(ℤ)′: classes whose image in H²(Λ) dies on every D
    let z = GLattice::trivial(g, 1);
    let h2z = cohomology(g, &z, 2, budget)?;
    let unit = IntMatrix::from_columns(lat.lambda.rank(), std::slice::from_ref(&lat.unit_in_lambda));
    let mut maps = Vec::new();
    for ((d, hd), md) in local_lambda.subgroups.iter().zip(&local_lambda.groups).zip(&local_lambda.restricted) {
        let images = (0..h2z.group().rank())
            .map(|j| {
                let pushed = push_cochain(&unit, &h2z.representative(j));
                hd.class_of(&restrict_cochain(g, d, 2, md.rank(), &pushed))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(AbHom::from_images(h2z.group().clone(), hd.group().clone(), &images)?);
    }
    let h2z_prime = common_kernel(h2z.group(), &maps)?.0;

    let tau = BigRational::new(
        BigInt::from(h1_lambda.group().order()),
        BigInt::from(sha2_lambda.order()),
    );
    let report = OracleReport {
        h0_lambda1_rank: h0.invariants_rank(),
        h1_lambda: h1_lambda.group().clone(),
        h1_lambda1: h1_lambda1.group().clone(),
        h2_lambda: h2_lambda.group().clone(),
        h2_lambda1: h2_lambda1.group().clone(),
        h2z_prime_order: h2z_prime.order(),
        sha2_lambda,
        sha2_lambda1,
        tau,
        decomposition_groups_used: dec.len(),
    };
    Ok(Measured { lattices: lat, report, h2_lambda, local_lambda })
}

/// Cohomology of `Λ` and `Λ¹` computed from cochains.
pub fn oracle(datum: &NormTorusDatum, budget: &Budget) -> Result<OracleReport> {
    Ok(measure(datum, budget)?.report)
}

/// `|H¹(G, Λ)| / |Ш²_𝒟(G, Λ)|`.
pub fn ono_tamagawa_oracle(datum: &NormTorusDatum, budget: &Budget) -> Result<BigRational> {
    Ok(oracle(datum, budget)?.tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        Check { name, status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail }
    }

    fn skip(name: &'static str, detail: impl Into<String>) -> Self {
        Check { name, status: CheckStatus::NotApplicable, detail: detail.into() }
    }
}

/// For a Galois product, `ker d_i = H²(G, Λ¹_i)` inside
/// `H²(H_i, Λ¹_i)^{Ñ_i}`; equal orders mean `d_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentialProbe {
    pub pair: usize,
    pub kernel_order: u128,
    /// `|H²(H_i, Λ¹_i)^{Ñ_i}|`
    pub domain_order: u128,
    /// `|Hom(H_i, ℚ/ℤ)|^{[Ñ_i : H_i] − 1}`, the domain if `Ñ_i` acted trivially.
    pub untwisted_order: u128,
    pub vanishes: bool,
}

/// `H^q(H, M)^{Ñ}` under conjugation, for `H ⊴ Ñ`.
pub fn invariants_under_conjugation(
    g: &FiniteGroup,
    m: &GLattice,
    h: &Subgroup,
    ntilde: &Subgroup,
    q: usize,
    budget: &Budget,
) -> Result<FinAb> {
    let hg = g.subgroup_as_group(h);
    let mh = m.restrict(h);
    let coh = cohomology(&hg, &mh, q, budget)?;
    let a = coh.group().clone();
    let mut maps = Vec::new();
    for &x in ntilde.elements() {
        let images = (0..a.rank())
            .map(|j| {
                let moved = coh.class_of(&conjugate_cochain(g, h, x, m, q, &coh.representative(j)))?;
                Ok(a.add(&moved, &a.scale(&a.generator(j), -1)))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(AbHom::from_images(a.clone(), a.clone(), &images)?);
    }
    Ok(common_kernel(&a, &maps)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub oracle: OracleReport,
    pub checks: Vec<Check>,
    pub differential_probes: Vec<DifferentialProbe>,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

/// Whether `G → ∏ G/H_i` is an isomorphism with every `H_i` normal.
fn is_galois_product(datum: &NormTorusDatum) -> bool {
    let g = datum.group();
    let pairs = datum.pairs();
    pairs.len() >= 2
        && pairs.iter().all(|p| g.is_normal(&p.h))
        && pairs.iter().map(|p| g.index_of(&p.h)).product::<usize>() == g.order()
        && pairs.iter().fold(g.whole(), |acc, p| g.intersection(&acc, &p.h)).order() == 1
}

/// `Hom(H_i, ℚ/ℤ)^{a}` as an abstract group.
fn hom_power(g: &FiniteGroup, h: &Subgroup, a: usize) -> FinAb {
    let hab = subgroup_abelianization(g, h).group().clone();
    direct_sum(&vec![hab; a]).group
}

/// Runs every structural identity the datum's shape admits.
pub fn verify_structure(datum: &NormTorusDatum, budget: &Budget) -> Result<StructureReport> {
    let g = datum.group();
    let m = measure(datum, budget)?;
    let r = &m.report;
    let mut checks = Vec::new();

    let n_ab_orders = datum
        .pairs()
        .iter()
        .map(|p| Ok(crate::abelian::relative_abelianization(g, &p.ntilde, &p.h)?.group().order()))
        .collect::<Result<Vec<u128>>>()?;
    let prod: u128 = n_ab_orders.iter().product();
    checks.push(Check::new(
        "h1_lambda1_order",
        r.h1_lambda1.order() == prod,
        format!("|H¹(Λ¹)| = {}, ∏|N_i^ab| = {prod}", r.h1_lambda1.order()),
    ));

    checks.push(match torus::h1_lambda(datum) {
        Ok(e) => Check::new("h1_lambda_engine", e == r.h1_lambda, format!("oracle {:?}, engine {:?}", r.h1_lambda.factors(), e.factors())),
        Err(e) => Check::skip("h1_lambda_engine", e.to_string()),
    });
    checks.push(match torus::tamagawa(datum) {
        Ok(e) => Check::new(
            "engine_agreement",
            e.h1_lambda == r.h1_lambda && e.sha2_lambda == r.sha2_lambda && e.tau == r.tau && e.h2z_prime_order == r.h2z_prime_order,
            format!(
                "oracle (H¹ {:?}, Ш² {:?}, H²(ℤ)′ {}, τ {}), engine (H¹ {:?}, Ш² {:?}, H²(ℤ)′ {}, τ {})",
                r.h1_lambda.factors(),
                r.sha2_lambda.factors(),
                r.h2z_prime_order,
                r.tau,
                e.h1_lambda.factors(),
                e.sha2_lambda.factors(),
                e.h2z_prime_order,
                e.tau
            ),
        ),
        Err(e) => Check::skip("engine_agreement", e.to_string()),
    });

    let lhs = r.h1_lambda.order() * r.h2z_prime_order;
    let rhs = r.h1_lambda1.order() * r.sha2_lambda.order();
    checks.push(if r.sha2_lambda1.is_trivial() {
        Check::new("four_term_orders", lhs == rhs, format!("|H¹(Λ)|·|H²(ℤ)′| = {lhs}, |H¹(Λ¹)|·|Ш²(Λ)| = {rhs}"))
    } else {
        Check::skip("four_term_orders", format!("Ш²(Λ¹) = {:?} is nonzero", r.sha2_lambda1.factors()))
    });
    checks.push(Check::new("h0_lambda1_zero", r.h0_lambda1_rank == 0, format!("rank H⁰(Λ¹) = {}", r.h0_lambda1_rank)));

    // G must be Gal(K/k) itself; for normal H ≠ 1 inflation leaves Hom(H, Λ¹ ⊗ ℚ/ℤ)^G behind
    let single_galois = datum.pairs().len() == 1 && datum.pairs()[0].h.order() == 1;
    checks.push(if single_galois {
        Check::new("h2_lambda1_galois", r.h2_lambda1.is_trivial(), format!("H²(Λ¹) = {:?}", r.h2_lambda1.factors()))
    } else {
        Check::skip("h2_lambda1_galois", "needs one pair with H = 1")
    });

    let product = is_galois_product(datum);
    let coprime = product && {
        let idx: Vec<usize> = datum.pairs().iter().map(|p| g.index_of(&p.h)).collect();
        idx.iter().enumerate().all(|(i, &a)| idx[i + 1..].iter().all(|&b| num_integer::gcd(a, b) == 1))
    };
    let untwisted = |p: &crate::datum::SubgroupPair| hom_power(g, &p.h, p.ntilde.order() / p.h.order() - 1);
    let mut differential_probes = Vec::new();
    let mut twisted = Vec::new();
    if product {
        for (i, (p, block)) in datum.pairs().iter().zip(&m.lattices.lambda1_blocks).enumerate() {
            let kernel_order = cohomology(g, block, 2, budget)?.group().order();
            let domain = invariants_under_conjugation(g, block, &p.h, &p.ntilde, 2, budget)?;
            differential_probes.push(DifferentialProbe {
                pair: i,
                kernel_order,
                domain_order: domain.order(),
                untwisted_order: untwisted(p).order(),
                vanishes: kernel_order == domain.order(),
            });
            twisted.push(domain);
        }
    }
    if coprime {
        let literal = direct_sum(&datum.pairs().iter().map(untwisted).collect::<Vec<_>>()).group;
        checks.push(Check::new(
            "h2_lambda1_coprime_product",
            literal == r.h2_lambda1,
            format!("H²(Λ¹) = {:?}, ⊕ Hom(H_i, ℚ/ℤ)^(a_i) = {:?}", r.h2_lambda1.factors(), literal.factors()),
        ));
        let want = direct_sum(&twisted).group;
        checks.push(Check::new(
            "h2_lambda1_coprime_product_invariants",
            want == r.h2_lambda1,
            format!("H²(Λ¹) = {:?}, ⊕ H²(H_i, Λ¹_i)^(Ñ_i) = {:?}", r.h2_lambda1.factors(), want.factors()),
        ));
    } else {
        checks.push(Check::skip("h2_lambda1_coprime_product", "needs a product of Galois factors of coprime degrees"));
        checks.push(Check::skip("h2_lambda1_coprime_product_invariants", "needs a product of Galois factors of coprime degrees"));
    }

    checks.push(xi_check(datum, &m)?);
    Ok(StructureReport { oracle: m.report, checks, differential_probes })
}

/// Why the ξ test does not apply, or `None` when it does.
fn xi_hypotheses(datum: &NormTorusDatum) -> Option<String> {
    let g = datum.group();
    let Some(iota) = datum.iota() else {
        return Some("not a CM datum".into());
    };
    if datum.pairs().len() != 1 || datum.pairs()[0].h.order() != 1 {
        return Some("needs a single Galois CM field".into());
    }
    let half = g.order() / 2;
    let plus_ab = plus_abelianization_order(g, iota);
    if !involution_splits(g, iota) || !half.is_multiple_of(2) || plus_ab.is_multiple_of(2) {
        return Some(format!("needs a split extension, |G⁺| even and |G⁺ab| odd; |G⁺| = {half}, |G⁺ab| = {plus_ab}"));
    }
    None
}

/// Outcome of the ξ test: `ξ` is the nonzero element of `H²(Λ)[2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiOutcome {
    pub restricts_to_zero: bool,
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub tau: BigRational,
}

fn xi_from(g: &FiniteGroup, lambda: &GLattice, h2: &Cohomology, local: &Local) -> Result<std::result::Result<XiOutcome, String>> {
    let a = h2.group();
    let two_torsion: Vec<usize> = (0..a.rank()).filter(|&j| a.factors()[j] % 2 == 0).collect();
    if two_torsion.len() != 1 {
        return Ok(Err(format!("H²(Λ)[2] has rank {}", two_torsion.len())));
    }
    let j = two_torsion[0];
    let mut xi = a.zero();
    xi[j] = a.factors()[j] / 2;
    let dies = local.restrictions(g, lambda, h2)?.iter().all(|f| f.apply(&xi).iter().all(|&x| x == 0));
    let tau = BigRational::from_integer(BigInt::from(if dies { 1 } else { 2 }));
    Ok(Ok(XiOutcome { restricts_to_zero: dies, tau }))
}

/// In the split CM case with `|G|/2` even and `|G^{+ab}|` odd, `H²(Λ)[2]` is
/// `ℤ/2` and `τ = 1` exactly when its generator restricts to zero on every
/// `D`. Domain error when the hypotheses fail.
pub fn xi_test(datum: &NormTorusDatum, budget: &Budget) -> Result<XiOutcome> {
    if let Some(why) = xi_hypotheses(datum) {
        return Err(Error::domain("ξ test does not apply").with_context(why));
    }
    let g = datum.group();
    let lat = build_character_lattices(datum)?;
    let h2 = cohomology(g, &lat.lambda, 2, budget)?;
    let local = Local::new(g, &lat.lambda, 2, &datum.effective_decomposition_set(), budget)?;
    xi_from(g, &lat.lambda, &h2, &local)?
        .map_err(|why| Error::internal("H²(Λ)[2] is not cyclic of order 2").with_context(why))
}

fn xi_check(datum: &NormTorusDatum, m: &Measured) -> Result<Check> {
    const NAME: &str = "xi_obstruction";
    if let Some(why) = xi_hypotheses(datum) {
        return Ok(Check::skip(NAME, why));
    }
    Ok(match xi_from(datum.group(), &m.lattices.lambda, &m.h2_lambda, &m.local_lambda)? {
        Err(why) => Check::new(NAME, false, why),
        Ok(x) => Check::new(
            NAME,
            x.tau == m.report.tau,
            format!("ξ restricts to zero everywhere: {}; τ = {}", x.restricts_to_zero, m.report.tau),
        ),
    })
}
