//! The transfer `Ver_{G,H}: G^{ab} → H^{ab}` and its relative version.

use crate::abelian::{
    abelianization, relative_abelianization, subgroup_abelianization, AbHom, AbelianQuotient,
};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Side, Subgroup};

/// A coset section: for each left coset of `H` (in [`FiniteGroup::cosets`]
/// order) one representative.
pub fn canonical_section(g: &FiniteGroup, h: &Subgroup, side: Side) -> Vec<usize> {
    g.cosets(h, side).iter().map(|c| c[0]).collect()
}

/// `∏_x h_{g,x}` for left cosets, where `g·φ(x) = φ(gx)·h_{g,x}`, multiplied
/// in coset order. The product lies in `H` and is well defined modulo `D(H)`.
pub fn transfer_element(g: &FiniteGroup, h: &Subgroup, section: &[usize], x: usize) -> usize {
    let idx = g.coset_index(h, Side::Left);
    transfer_element_indexed(g, &idx, section, x)
}

fn transfer_element_indexed(g: &FiniteGroup, idx: &[usize], section: &[usize], x: usize) -> usize {
    let mut acc = g.identity();
    for &rep in section {
        let y = g.mul(x, rep);
        let target = section[idx[y]];
        // x·rep = target·corr
        let corr = g.mul(g.inv(target), y);
        acc = g.mul(acc, corr);
    }
    acc
}

/// Right-coset variant: `φ′(x′)·g = h·φ′(x′g)` with `φ′` a section of `H\G`.
pub fn transfer_element_right(g: &FiniteGroup, h: &Subgroup, section: &[usize], x: usize) -> usize {
    let idx = g.coset_index(h, Side::Right);
    let mut acc = g.identity();
    for &rep in section {
        let y = g.mul(rep, x);
        let target = section[idx[y]];
        let corr = g.mul(y, g.inv(target));
        acc = g.mul(acc, corr);
    }
    acc
}

/// Matrix form of the transfer on canonical bases, evaluated with an arbitrary
/// left-coset section.
pub fn transfer_with_section(
    g: &FiniteGroup,
    h: &Subgroup,
    section: &[usize],
    gab: &AbelianQuotient,
    target: &AbelianQuotient,
) -> Result<AbHom> {
    let idx = g.coset_index(h, Side::Left);
    if section.len() != g.index_of(h) || section.iter().enumerate().any(|(k, &s)| idx[s] != k) {
        return Err(Error::domain("not a section of the left cosets"));
    }
    let images: Vec<Vec<i64>> = (0..gab.group().rank())
        .map(|j| {
            let e = transfer_element_indexed(g, &idx, section, gab.lift(j));
            target.project(e)
        })
        .collect();
    AbHom::from_images(gab.group().clone(), target.group().clone(), &images)
}

/// `Ver_{G,H}: G^{ab} → H^{ab}` using the least-index section.
pub fn transfer(g: &FiniteGroup, h: &Subgroup) -> Result<AbHom> {
    let gab = abelianization(g);
    let hab = subgroup_abelianization(g, h);
    transfer_with_section(g, h, &canonical_section(g, h, Side::Left), &gab, &hab)
}

/// `Ver_{G,Ñ/H}: G^{ab} → Ñ/D(Ñ)H`, i.e. `π_H ∘ Ver_{G,Ñ}`.
pub fn relative_transfer(g: &FiniteGroup, ntilde: &Subgroup, h: &Subgroup) -> Result<AbHom> {
    let gab = abelianization(g);
    let nab = relative_abelianization(g, ntilde, h)?;
    relative_transfer_with(g, ntilde, &gab, &nab)
}

/// Relative transfer with precomputed quotients.
pub fn relative_transfer_with(
    g: &FiniteGroup,
    ntilde: &Subgroup,
    gab: &AbelianQuotient,
    nab: &AbelianQuotient,
) -> Result<AbHom> {
    transfer_with_section(g, ntilde, &canonical_section(g, ntilde, Side::Left), gab, nab)
}

/// The relative transfer evaluated through the double cosets `⟨g⟩\G/Ñ`:
/// `σ^{Σ m(g,x_i)}` where `g^{f_i}x_i ∈ x_i σ̃^{m} H` and `f_i` is the
/// length of the `⟨g⟩`-orbit of `x_iÑ`. Returns coordinates in the canonical
/// basis of `Ñ/H` (cyclic, so at most one coordinate).
pub fn transfer_cyclic_double_coset(
    grp: &FiniteGroup,
    ntilde: &Subgroup,
    h: &Subgroup,
    x: usize,
) -> Result<Vec<i64>> {
    let nab = relative_abelianization(grp, ntilde, h)?;
    if nab.group().order() as usize * h.order() != ntilde.order() || !nab.group().is_cyclic() {
        return Err(Error::domain("Ñ/H must be cyclic with H normal in Ñ"));
    }
    let idx = grp.coset_index(ntilde, Side::Left);
    let n_cosets = grp.index_of(ntilde);
    let mut seen = vec![false; n_cosets];
    let mut exponent = 0i64;
    for y in 0..grp.order() {
        // y ranges over elements; the first element hit in each orbit is x_i
        if seen[idx[y]] {
            continue;
        }
        let mut z = y;
        loop {
            seen[idx[z]] = true;
            z = grp.mul(x, z);
            if idx[z] == idx[y] {
                break;
            }
        }
        // z = g^f·x_i lies in x_i·Ñ, f the orbit length
        let in_n = grp.mul(grp.inv(y), z);
        let c = nab.project(in_n);
        exponent += c.first().copied().unwrap_or(0);
    }
    Ok(nab.group().reduce(&[exponent][..nab.group().rank()]))
}

/// For `N ⊴ G` of prime order `p`, whether `Ver_{G,N}` is onto.
///
/// For central `N` the answer is cross-checked against cyclicity of a Sylow
/// `p`-subgroup. For non-central `N` the image of `Ver` lies in `N^G = 1`,
/// whatever the Sylow subgroup looks like (`S_3 ⊳ A_3`).
pub fn transfer_surjectivity_check(g: &FiniteGroup, n: &Subgroup) -> Result<bool> {
    let p = n.order();
    if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) || !g.is_normal(n) {
        return Err(Error::domain("N must be a normal subgroup of prime order"));
    }
    let surjective = transfer(g, n)?.is_surjective();
    let central = n.elements().iter().all(|&x| g.is_central(x));
    if central && surjective != g.is_cyclic(&g.sylow(p)?) {
        return Err(Error::internal("transfer surjectivity disagrees with Sylow cyclicity"));
    }
    Ok(surjective)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four_into_squares() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let h = z4.subgroup_generated(&[2]);
        let v = transfer(&z4, &h).unwrap();
        assert!(v.is_surjective());
        let sec = canonical_section(&z4, &h, Side::Left);
        assert_eq!(transfer_element(&z4, &h, &sec, 1), 2);
        assert!(transfer_surjectivity_check(&z4, &h).unwrap());
    }

    #[test]
    fn zero_transfers() {
        let q8 = FiniteGroup::quaternion8();
        let v = transfer(&q8, &q8.center()).unwrap();
        assert!(v.is_zero());
        assert!(!transfer_surjectivity_check(&q8, &q8.center()).unwrap());
        let s3 = FiniteGroup::dihedral(3).unwrap();
        let rot = s3.subgroup_generated(&[1]);
        assert!(transfer(&s3, &rot).unwrap().is_zero());
        assert!(!transfer_surjectivity_check(&s3, &rot).unwrap());
        let v4 = FiniteGroup::units_mod(8).unwrap();
        for s in v4.cyclic_subgroups().iter().filter(|s| s.order() == 2) {
            assert!(transfer(&v4, s).unwrap().is_zero());
            assert!(!transfer_surjectivity_check(&v4, s).unwrap());
        }
    }

    #[test]
    fn relative_degenerate_cases() {
        let q8 = FiniteGroup::quaternion8();
        let c = q8.center();
        let r = relative_transfer(&q8, &c, &c).unwrap();
        assert!(r.codomain().is_trivial());
        let r = relative_transfer(&q8, &c, &q8.trivial_subgroup()).unwrap();
        assert_eq!(r, transfer(&q8, &c).unwrap());
        assert!(relative_transfer(&q8, &c, &q8.subgroup_generated(&[2])).is_err());
    }

    #[test]
    fn relative_transfer_through_q8_factor() {
        let q8 = FiniteGroup::quaternion8();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroup::direct_product(&[&q8, &z2]).unwrap();
        // elements (a, b) ↦ 2a + b
        let ntilde = g.subgroup_generated(&[2, 1]);
        let h = g.subgroup_generated(&[1]);
        assert_eq!(ntilde.order(), 4);
        let r = relative_transfer(&g, &ntilde, &h).unwrap();
        assert_eq!(r.codomain().factors(), &[2]);
        assert!(r.is_zero());
    }

    #[test]
    fn double_coset_examples() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let n = z4.subgroup_generated(&[2]);
        let t = z4.trivial_subgroup();
        assert_eq!(transfer_cyclic_double_coset(&z4, &n, &t, 0).unwrap(), vec![0]);
        assert_eq!(transfer_cyclic_double_coset(&z4, &n, &t, 1).unwrap(), vec![1]);
        let q8 = FiniteGroup::quaternion8();
        let c = q8.center();
        assert_eq!(transfer_cyclic_double_coset(&q8, &c, &q8.trivial_subgroup(), 2).unwrap(), vec![0]);
        let v4 = FiniteGroup::units_mod(8).unwrap();
        assert!(transfer_cyclic_double_coset(&v4, &v4.whole(), &v4.trivial_subgroup(), 1).is_err());
    }
}
