//! Finite abelian groups, Smith normal form, and abelian quotients of tabled
//! groups.

pub mod finab;
pub mod matrix;
pub mod snf;

use std::collections::VecDeque;

use num_bigint::BigInt;

pub use finab::{
    annihilator, combine_into_sum, direct_sum, dual_group, quotient, subgroup, subgroup_contains,
    subquotient, sum_from_sum, AbHom, DirectSum, FinAb, LatticeQuotient,
};
pub use matrix::{BigMatrix, IntMatrix, Matrix};
pub use snf::smith_normal_form;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Side, Subgroup};

/// An abelian quotient `S/K` of a subgroup `S ≤ G`, with the projection on
/// elements of `S` and one lift in `S` per canonical generator.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    group: FinAb,
    proj: Vec<Option<Vec<i64>>>,
    lifts: Vec<usize>,
}

impl AbelianQuotient {
    /// `S/K` for `K ⊴ S` with abelian quotient.
    pub fn new(g: &FiniteGroup, s: &Subgroup, k: &Subgroup) -> Result<Self> {
        if !k.is_subset_of(s) {
            return Err(Error::domain("kernel is not contained in the subgroup"));
        }
        let coset = g.coset_index(k, Side::Left);
        let n_cosets = g.order() / k.order();
        // greedy generators, with exponent vectors found by breadth-first search
        let mut gens: Vec<usize> = Vec::new();
        let mut vecs: Vec<Option<Vec<i64>>> = vec![None; n_cosets];
        let mut rep: Vec<usize> = vec![usize::MAX; n_cosets];
        vecs[coset[g.identity()]] = Some(Vec::new());
        rep[coset[g.identity()]] = g.identity();
        for &x in s.elements() {
            if vecs[coset[x]].is_some() {
                continue;
            }
            gens.push(x);
            let r = gens.len();
            for v in vecs.iter_mut().flatten() {
                v.push(0);
            }
            let mut queue: VecDeque<usize> = (0..n_cosets).filter(|&c| vecs[c].is_some()).collect();
            while let Some(c) = queue.pop_front() {
                for (i, &h) in gens.iter().enumerate() {
                    let y = g.mul(rep[c], h);
                    let cy = coset[y];
                    if vecs[cy].is_none() {
                        let mut v = vecs[c].clone().unwrap();
                        v[i] += 1;
                        debug_assert_eq!(v.len(), r);
                        vecs[cy] = Some(v);
                        rep[cy] = y;
                        queue.push_back(cy);
                    }
                }
            }
        }
        let r = gens.len();
        let reached: Vec<usize> = (0..n_cosets).filter(|&c| vecs[c].is_some()).collect();
        if reached.len() * k.order() != s.order() {
            return Err(Error::internal("abelian quotient enumeration lost cosets"));
        }
        for &h1 in &gens {
            for &h2 in &gens {
                if coset[g.mul(h1, h2)] != coset[g.mul(h2, h1)] {
                    return Err(Error::domain("quotient is not abelian"));
                }
            }
        }
        // Schreier relations v(c) + e_i − v(c·g_i); these generate all relations
        let mut rels: Vec<Vec<BigInt>> = Vec::new();
        for &c in &reached {
            for (i, &h) in gens.iter().enumerate() {
                let cy = coset[g.mul(rep[c], h)];
                let vc = vecs[c].as_ref().unwrap();
                let vy = vecs[cy].as_ref().ok_or_else(|| {
                    Error::domain("subgroup is not closed modulo the kernel")
                })?;
                let rel: Vec<BigInt> = (0..r)
                    .map(|j| BigInt::from(vc[j] + i64::from(i == j) - vy[j]))
                    .collect();
                if rel.iter().any(|x| x != &BigInt::from(0)) {
                    rels.push(rel);
                }
            }
        }
        for (i, &h) in gens.iter().enumerate() {
            let mut v = vec![BigInt::from(0); r];
            v[i] = BigInt::from(g.element_order(h) as i64);
            rels.push(v);
        }
        let id: Vec<Vec<BigInt>> = (0..r)
            .map(|j| (0..r).map(|i| BigInt::from(i64::from(i == j))).collect())
            .collect();
        let lq = LatticeQuotient::new(r, &id, &rels);
        let group = lq.group.clone();
        let mut proj = vec![None; g.order()];
        for &x in s.elements() {
            let v: Vec<BigInt> = vecs[coset[x]].as_ref().unwrap().iter().map(|&a| BigInt::from(a)).collect();
            proj[x] = Some(lq.coords(&v)?);
        }
        let lifts = lq
            .generators()
            .iter()
            .map(|gv| {
                gv.iter().zip(&gens).fold(g.identity(), |acc, (e, &h)| {
                    let e = (e % BigInt::from(g.element_order(h) as i64)).try_into().unwrap_or(0i64);
                    g.mul(acc, g.pow(h, e))
                })
            })
            .collect();
        Ok(AbelianQuotient { group, proj, lifts })
    }

    pub fn group(&self) -> &FinAb {
        &self.group
    }

    /// Image of `x`; panics if `x` lies outside the subgroup.
    pub fn project(&self, x: usize) -> Vec<i64> {
        self.proj[x].clone().expect("element outside the quotiented subgroup")
    }

    pub fn try_project(&self, x: usize) -> Option<Vec<i64>> {
        self.proj[x].clone()
    }

    /// An element of `S` mapping to canonical generator `j`.
    pub fn lift(&self, j: usize) -> usize {
        self.lifts[j]
    }

    /// The homomorphism induced by a group map `f` defined on `S`.
    pub fn induced(&self, target: &AbelianQuotient, f: impl Fn(usize) -> usize) -> Result<AbHom> {
        let images: Vec<Vec<i64>> = (0..self.group.rank())
            .map(|j| {
                target
                    .try_project(f(self.lifts[j]))
                    .ok_or_else(|| Error::internal("induced map leaves the target subgroup"))
            })
            .collect::<Result<_>>()?;
        AbHom::from_images(self.group.clone(), target.group.clone(), &images)
    }
}

/// `G^{ab} = G/[G,G]`.
pub fn abelianization(g: &FiniteGroup) -> AbelianQuotient {
    AbelianQuotient::new(g, &g.whole(), &g.commutator_subgroup()).expect("G/[G,G] is abelian")
}

/// `S^{ab}` for a subgroup `S ≤ G`, projected on elements of `S`.
pub fn subgroup_abelianization(g: &FiniteGroup, s: &Subgroup) -> AbelianQuotient {
    AbelianQuotient::new(g, s, &g.commutator_of(s)).expect("S/[S,S] is abelian")
}

/// `Ñ/D(Ñ)H`, the target of the relative transfer.
pub fn relative_abelianization(g: &FiniteGroup, ntilde: &Subgroup, h: &Subgroup) -> Result<AbelianQuotient> {
    if !h.is_subset_of(ntilde) {
        return Err(Error::domain("H is not contained in Ñ"));
    }
    let k = g.join(&g.commutator_of(ntilde), h);
    AbelianQuotient::new(g, ntilde, &k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_projection(g: &FiniteGroup, q: &AbelianQuotient) {
        for a in 0..g.order() {
            for b in 0..g.order() {
                let lhs = q.project(g.mul(a, b));
                let rhs = q.group().add(&q.project(a), &q.project(b));
                assert_eq!(lhs, rhs);
            }
        }
        for j in 0..q.group().rank() {
            assert_eq!(q.project(q.lift(j)), q.group().generator(j));
        }
    }

    #[test]
    fn abelianizations() {
        let q8 = FiniteGroup::quaternion8();
        let a = abelianization(&q8);
        assert_eq!(a.group().factors(), &[2, 2]);
        check_projection(&q8, &a);
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let a = abelianization(&d4);
        assert_eq!(a.group().factors(), &[2, 2]);
        check_projection(&d4, &a);
        let z12 = FiniteGroup::cyclic(12).unwrap();
        let a = abelianization(&z12);
        assert_eq!(a.group().factors(), &[12]);
        // bijective on abelian groups
        let images: std::collections::BTreeSet<Vec<i64>> = (0..12).map(|x| a.project(x)).collect();
        assert_eq!(images.len(), 12);
        let u15 = FiniteGroup::units_mod(15).unwrap();
        assert_eq!(abelianization(&u15).group().factors(), &[2, 4]);
        let s3 = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(abelianization(&s3).group().factors(), &[2]);
    }

    #[test]
    fn abelianization_order_times_derived_order() {
        for g in [
            FiniteGroup::quaternion8(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::dihedral(6).unwrap(),
            FiniteGroup::units_mod(24).unwrap(),
        ] {
            let a = abelianization(&g);
            assert_eq!(a.group().order() as usize * g.commutator_subgroup().order(), g.order());
        }
    }

    #[test]
    fn relative_quotients() {
        let q8 = FiniteGroup::quaternion8();
        let c = q8.center();
        let n = relative_abelianization(&q8, &c, &q8.trivial_subgroup()).unwrap();
        assert_eq!(n.group().factors(), &[2]);
        let i4 = q8.subgroup_generated(&[2]);
        let n = relative_abelianization(&q8, &i4, &c).unwrap();
        assert_eq!(n.group().factors(), &[2]);
        assert!(relative_abelianization(&q8, &c, &i4).is_err());
    }
}
