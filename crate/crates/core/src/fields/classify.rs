//! Structural predictions of `τ` from the shape of `G` and `ι` alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::cohomology::{xi_test, Budget};
use crate::datum::NormTorusDatum;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::torus::tamagawa;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prediction {
    Exact {
        #[serde(serialize_with = "crate::io::serialize_rational")]
        tau: BigRational,
    },
    /// `τ ∈ {1, 2}`, with the engine value on the cyclic floor of `𝒟`.
    OneOrTwo {
        #[serde(serialize_with = "crate::io::serialize_rational")]
        engine: BigRational,
    },
}

fn check_iota(g: &FiniteGroup, iota: usize) -> Result<()> {
    if iota >= g.order() || iota == g.identity() || g.mul(iota, iota) != g.identity() || !g.is_central(iota) {
        return Err(Error::domain("iota must be a central element of order 2"));
    }
    Ok(())
}

/// Whether `⟨ι⟩` has a complement: `ι` avoids the subgroup generated by
/// squares and commutators.
pub fn involution_splits(g: &FiniteGroup, iota: usize) -> bool {
    let mut gens: Vec<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
    gens.extend(g.commutator_subgroup().elements());
    !g.subgroup_generated(&gens).contains(iota)
}

/// `|G⁺^{ab}|` for `G⁺ = G/⟨ι⟩`.
pub fn plus_abelianization_order(g: &FiniteGroup, iota: usize) -> usize {
    g.order() / g.join(&g.commutator_subgroup(), &g.subgroup_generated(&[iota])).order()
}

fn galois_cm(g: &FiniteGroup, iota: usize) -> Result<NormTorusDatum> {
    NormTorusDatum::cm_field(g.clone(), g.trivial_subgroup(), iota, vec![], true, false)
}

/// Abelian `G`: `1` when `|G|/2` is odd, `2` when `ι` has a complement and
/// `|G|/2` is even, and `{1, 2}` otherwise.
pub fn abelian_classifier(g: &FiniteGroup, iota: usize) -> Result<Prediction> {
    check_iota(g, iota)?;
    if !g.is_abelian() {
        return Err(Error::domain("abelian classifier needs an abelian group"));
    }
    let half = g.order() / 2;
    if half % 2 == 1 {
        return Ok(Prediction::Exact { tau: int(1) });
    }
    if involution_splits(g, iota) {
        return Ok(Prediction::Exact { tau: int(2) });
    }
    Ok(Prediction::OneOrTwo { engine: tamagawa(&galois_cm(g, iota)?)?.tau })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitVerdict {
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub tau: BigRational,
    /// Whether the answer came from restricting `ξ ∈ H²(Λ)[2]`.
    pub via_xi: bool,
}

/// Split `1 → ⟨ι⟩ → G → G⁺ → 1` for a Galois CM datum: `1` when `|G⁺|` is
/// odd, `2` when `|G⁺|` and `|G⁺^{ab}|` are even, else the ξ test on the
/// datum's `𝒟`.
pub fn split_classifier(datum: &NormTorusDatum, budget: &Budget) -> Result<SplitVerdict> {
    let g = datum.group();
    let iota = datum.iota().ok_or_else(|| Error::domain("split classifier needs a CM datum"))?;
    if !involution_splits(g, iota) {
        return Err(Error::domain("⟨ι⟩ has no complement in G"));
    }
    let half = g.order() / 2;
    if half % 2 == 1 {
        return Ok(SplitVerdict { tau: int(1), via_xi: false });
    }
    if plus_abelianization_order(g, iota).is_multiple_of(2) {
        return Ok(SplitVerdict { tau: int(2), via_xi: false });
    }
    Ok(SplitVerdict { tau: xi_test(datum, budget)?.tau, via_xi: true })
}

/// `n` when `G ≅ D_n` (order `2n`, `n ≥ 3`): a cyclic subgroup of index 2
/// and an involution outside it that inverts its generator.
pub fn dihedral_degree(g: &FiniteGroup) -> Option<usize> {
    let n = g.order() / 2;
    if n < 3 || g.order() % 2 == 1 {
        return None;
    }
    let r = (0..g.order()).find(|&x| g.element_order(x) == n)?;
    let rot = g.subgroup_generated(&[r]);
    let inverts = |s: usize| !rot.contains(s) && g.mul(s, s) == g.identity() && g.conj(s, r) == g.inv(r);
    (0..g.order()).any(inverts).then_some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_times(h: &FiniteGroup) -> (FiniteGroup, usize) {
        let g = FiniteGroup::direct_product(&[&FiniteGroup::cyclic(2).unwrap(), h]).unwrap();
        let iota = h.order();
        (g, iota)
    }

    #[test]
    fn abelian_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(abelian_classifier(&z2, 1).unwrap(), Prediction::Exact { tau: int(1) });
        let (v4, iota) = c2_times(&z2);
        assert_eq!(abelian_classifier(&v4, iota).unwrap(), Prediction::Exact { tau: int(2) });
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(abelian_classifier(&z4, 2).unwrap(), Prediction::OneOrTwo { engine: int(1) });
    }

    #[test]
    fn split_examples() {
        let (g, iota) = c2_times(&FiniteGroup::cyclic(3).unwrap());
        let d = galois_cm(&g, iota).unwrap();
        assert_eq!(split_classifier(&d, &Budget::default()).unwrap().tau, int(1));
        let v4 = FiniteGroup::direct_product(&[&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap()]).unwrap();
        let (g, iota) = c2_times(&v4);
        let d = galois_cm(&g, iota).unwrap();
        assert_eq!(split_classifier(&d, &Budget::default()).unwrap(), SplitVerdict { tau: int(2), via_xi: false });
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert!(split_classifier(&galois_cm(&z4, 2).unwrap(), &Budget::default()).is_err());
    }

    #[test]
    fn dihedral_recognition() {
        for n in 3..=8 {
            assert_eq!(dihedral_degree(&FiniteGroup::dihedral(n).unwrap()), Some(n));
        }
        assert_eq!(dihedral_degree(&FiniteGroup::quaternion8()), None);
        assert_eq!(dihedral_degree(&FiniteGroup::cyclic(8).unwrap()), None);
    }
}
