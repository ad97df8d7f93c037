//! `G`-lattices and the character lattices `X(T^K)`, `X(T^E)`, `Λ`, `Λ¹`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::abelian::snf::{smith, Track};
use crate::abelian::{BigMatrix, IntMatrix};
use crate::datum::NormTorusDatum;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Side, Subgroup};

/// A free `ℤ`-module with `G` acting through `action[g]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    rank: usize,
    action: Vec<IntMatrix>,
}

impl GLattice {
    /// Checks the homomorphism law on every pair of elements.
    pub fn new(g: &FiniteGroup, rank: usize, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != g.order() || action.iter().any(|a| a.rows() != rank || a.cols() != rank) {
            return Err(Error::domain("action matrices have the wrong count or shape"));
        }
        if action[g.identity()] != IntMatrix::identity(rank) {
            return Err(Error::domain("identity does not act trivially"));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if action[a].mul(&action[b]) != action[g.mul(a, b)] {
                    return Err(Error::domain("action is not a homomorphism").with_context(format!("elements {a}, {b}")));
                }
            }
        }
        Ok(GLattice { rank, action })
    }

    pub fn trivial(g: &FiniteGroup, rank: usize) -> Self {
        GLattice { rank, action: vec![IntMatrix::identity(rank); g.order()] }
    }

    /// `ℤ` with `g` acting by `sign(g)`; `sign` must be a character to `±1`.
    pub fn sign(g: &FiniteGroup, sign: impl Fn(usize) -> i64) -> Result<Self> {
        let action = (0..g.order()).map(|x| IntMatrix::from_rows(1, 1, vec![sign(x)])).collect();
        Self::new(g, 1, action)
    }

    /// `Ind_S^G ℤ = ℤ[G/S]` on the left cosets in [`FiniteGroup::cosets`] order.
    pub fn permutation(g: &FiniteGroup, s: &Subgroup) -> Self {
        let cosets = g.cosets(s, Side::Left);
        let idx = g.coset_index(s, Side::Left);
        let n = cosets.len();
        let action = (0..g.order())
            .map(|x| {
                let mut m = IntMatrix::zeros(n, n);
                for (c, coset) in cosets.iter().enumerate() {
                    m.set(idx[g.mul(x, coset[0])], c, 1);
                }
                m
            })
            .collect();
        GLattice { rank: n, action }
    }

    /// `Ind_S^G M` for an `S`-lattice `m` indexed like
    /// [`FiniteGroup::subgroup_as_group`]: one copy of `M` per left coset.
    pub fn induce(g: &FiniteGroup, s: &Subgroup, m: &GLattice) -> Self {
        let reps: Vec<usize> = g.cosets(s, Side::Left).iter().map(|c| c[0]).collect();
        let idx = g.coset_index(s, Side::Left);
        let local: std::collections::HashMap<usize, usize> = s.elements().iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let r = m.rank;
        let n = reps.len() * r;
        let action = (0..g.order())
            .map(|x| {
                let mut out = IntMatrix::zeros(n, n);
                for (i, &xi) in reps.iter().enumerate() {
                    let j = idx[g.mul(x, xi)];
                    let h = g.mul(g.inv(reps[j]), g.mul(x, xi));
                    let a = &m.action[local[&h]];
                    for u in 0..r {
                        for v in 0..r {
                            out.set(j * r + u, i * r + v, *a.get(u, v));
                        }
                    }
                }
                out
            })
            .collect();
        GLattice { rank: n, action }
    }

    pub fn direct_sum(g: &FiniteGroup, parts: &[GLattice]) -> Self {
        let rank = parts.iter().map(|p| p.rank).sum();
        let action = (0..g.order())
            .map(|x| {
                let mut m = IntMatrix::zeros(rank, rank);
                let mut off = 0;
                for p in parts {
                    for i in 0..p.rank {
                        for j in 0..p.rank {
                            m.set(off + i, off + j, *p.action[x].get(i, j));
                        }
                    }
                    off += p.rank;
                }
                m
            })
            .collect();
        GLattice { rank, action }
    }

    /// Restriction to `d`, indexed like [`FiniteGroup::subgroup_as_group`].
    pub fn restrict(&self, d: &Subgroup) -> Self {
        GLattice { rank: self.rank, action: d.elements().iter().map(|&x| self.action[x].clone()).collect() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    /// Whether `m: self → target` commutes with the actions.
    pub fn is_equivariant(&self, target: &GLattice, m: &IntMatrix) -> bool {
        m.rows() == target.rank
            && m.cols() == self.rank
            && self.action.iter().zip(&target.action).all(|(a, b)| m.mul(a) == b.mul(m))
    }

    /// `self / S` for the saturated sublattice `S` spanned by the columns of
    /// `sub`, returning the quotient and the projection matrix.
    pub fn quotient(&self, sub: &IntMatrix) -> Result<(GLattice, IntMatrix)> {
        let n = self.rank;
        let b: BigMatrix = sub.to_big();
        let s = smith(&b, Track { u: true, u_inv: true, ..Track::none() }).expect("BigInt never overflows");
        let k = s.rank;
        if s.diag[..k].iter().any(|d| d != &BigInt::from(1)) {
            return Err(Error::internal("sublattice is not saturated"));
        }
        let u = to_int(s.u.as_ref().unwrap())?;
        let u_inv = to_int(s.u_inv.as_ref().unwrap())?;
        let q = n - k;
        let mut proj = IntMatrix::zeros(q, n);
        for i in 0..q {
            for j in 0..n {
                proj.set(i, j, *u.get(k + i, j));
            }
        }
        let mut lift = IntMatrix::zeros(n, q);
        for i in 0..n {
            for j in 0..q {
                lift.set(i, j, *u_inv.get(i, k + j));
            }
        }
        let action: Vec<IntMatrix> = self.action.iter().map(|a| proj.mul(a).mul(&lift)).collect();
        for (x, a) in self.action.iter().enumerate() {
            let moved = proj.mul(a).mul(sub);
            if !moved.is_zero() {
                return Err(Error::internal("sublattice is not G-stable").with_context(format!("element {x}")));
            }
        }
        Ok((GLattice { rank: q, action }, proj))
    }
}

fn to_int(m: &BigMatrix) -> Result<IntMatrix> {
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j).to_i64().ok_or_else(|| Error::overflow("lattice basis change leaves i64"))?;
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// The lattices attached to a datum and the maps between them.
#[derive(Clone, Debug)]
pub struct CharacterLattices {
    /// `⊕ ℤ[G/H_i]`
    pub xt_k: GLattice,
    /// `⊕ ℤ[G/Ñ_i]`
    pub xt_e: GLattice,
    /// `X(T^E) → X(T^K)`: a coset of `Ñ_i` goes to the sum of its `H_i`-cosets.
    pub norm: IntMatrix,
    /// Per-pair blocks `ℤ[G/H_i] / N̂ ℤ[G/Ñ_i]`; `Λ¹` is their sum.
    pub lambda1_blocks: Vec<GLattice>,
    pub lambda1: GLattice,
    pub lambda: GLattice,
    pub to_lambda: IntMatrix,
    pub to_lambda1: IntMatrix,
    /// `Λ → Λ¹`
    pub lambda_to_lambda1: IntMatrix,
    /// Image of `1` under `ℤ → Λ`.
    pub unit_in_lambda: Vec<i64>,
}

/// Builds `X(T^K)`, `X(T^E)`, `Λ¹ = X(T^K)/N̂ X(T^E)` and
/// `Λ = X(T^K)/N̂(ker Δ̂)`, where `Δ̂` sums all coordinates.
pub fn build_character_lattices(datum: &NormTorusDatum) -> Result<CharacterLattices> {
    let g = datum.group();
    if datum.pairs().is_empty() {
        return Err(Error::domain("the oracle needs at least one pair"));
    }
    let k_parts: Vec<GLattice> = datum.pairs().iter().map(|p| GLattice::permutation(g, &p.h)).collect();
    let e_parts: Vec<GLattice> = datum.pairs().iter().map(|p| GLattice::permutation(g, &p.ntilde)).collect();
    let xt_k = GLattice::direct_sum(g, &k_parts);
    let xt_e = GLattice::direct_sum(g, &e_parts);
    let mut norm = IntMatrix::zeros(xt_k.rank, xt_e.rank);
    let mut blocks_norm = Vec::new();
    let (mut ko, mut eo) = (0, 0);
    for (p, (kp, ep)) in datum.pairs().iter().zip(k_parts.iter().zip(&e_parts)) {
        let hidx = g.coset_index(&p.h, Side::Left);
        let mut block = IntMatrix::zeros(kp.rank, ep.rank);
        for (c, coset) in g.cosets(&p.ntilde, Side::Left).iter().enumerate() {
            for &x in coset {
                block.set(hidx[x], c, 1);
            }
        }
        for i in 0..kp.rank {
            for j in 0..ep.rank {
                norm.set(ko + i, eo + j, *block.get(i, j));
            }
        }
        blocks_norm.push(block);
        ko += kp.rank;
        eo += ep.rank;
    }
    if !xt_e.is_equivariant(&xt_k, &norm) {
        return Err(Error::internal("norm map is not equivariant"));
    }
    let mut lambda1_blocks = Vec::new();
    let mut block_proj = Vec::new();
    for (kp, nb) in k_parts.iter().zip(&blocks_norm) {
        let (l, p) = kp.quotient(nb)?;
        lambda1_blocks.push(l);
        block_proj.push(p);
    }
    let lambda1 = GLattice::direct_sum(g, &lambda1_blocks);
    let mut to_lambda1 = IntMatrix::zeros(lambda1.rank, xt_k.rank);
    let (mut ro, mut co) = (0, 0);
    for p in &block_proj {
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                to_lambda1.set(ro + i, co + j, *p.get(i, j));
            }
        }
        ro += p.rows();
        co += p.cols();
    }
    // ker Δ̂ is spanned by e_0 − e_j
    let ne = xt_e.rank;
    let mut ker_delta = IntMatrix::zeros(ne, ne.saturating_sub(1));
    for j in 1..ne {
        ker_delta.set(0, j - 1, 1);
        ker_delta.set(j, j - 1, -1);
    }
    let (lambda, to_lambda) = xt_k.quotient(&norm.mul(&ker_delta))?;
    let unit_in_lambda = to_lambda.mul_vec(&norm.column(0));
    let lambda_to_lambda1 = factor_through(&to_lambda, &to_lambda1)?;
    let out = CharacterLattices {
        xt_k,
        xt_e,
        norm,
        lambda1_blocks,
        lambda1,
        lambda,
        to_lambda,
        to_lambda1,
        lambda_to_lambda1,
        unit_in_lambda,
    };
    out.check_exact_sequence()?;
    Ok(out)
}

/// The unique `M` with `M·p = q` for a surjection `p`.
fn factor_through(p: &IntMatrix, q: &IntMatrix) -> Result<IntMatrix> {
    let s = smith(&p.to_big(), Track { u: true, v: true, ..Track::none() }).expect("BigInt never overflows");
    if s.rank != p.rows() || s.diag.iter().any(|d| d != &BigInt::from(1)) {
        return Err(Error::internal("projection is not surjective"));
    }
    // U·p·V = [I | 0], so M = (q·V)[:, ..rows]·U
    let qv = q.to_big().mul(s.v.as_ref().unwrap());
    let mut first = BigMatrix::zeros(q.rows(), p.rows());
    for i in 0..q.rows() {
        for j in 0..p.rows() {
            first.set(i, j, qv.get(i, j).clone());
        }
    }
    let m = to_int(&first.mul(s.u.as_ref().unwrap()))?;
    if m.mul(p) != *q {
        return Err(Error::internal("map does not factor through the projection"));
    }
    Ok(m)
}

impl CharacterLattices {
    /// `0 → ℤ → Λ → Λ¹ → 0` at the matrix level.
    fn check_exact_sequence(&self) -> Result<()> {
        if self.lambda.rank != self.lambda1.rank + 1 {
            return Err(Error::internal("rank(Λ) ≠ rank(Λ¹) + 1"));
        }
        if self.lambda_to_lambda1.mul_vec(&self.unit_in_lambda).iter().any(|&x| x != 0) {
            return Err(Error::internal("ℤ → Λ → Λ¹ is not zero"));
        }
        let content = self.unit_in_lambda.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        if content != 1 {
            return Err(Error::internal("ℤ → Λ is not a primitive embedding"));
        }
        for x in 0..self.lambda.action.len() {
            if self.lambda.action[x].mul_vec(&self.unit_in_lambda) != self.unit_in_lambda {
                return Err(Error::internal("image of ℤ is not fixed").with_context(format!("element {x}")));
            }
        }
        if !self.lambda.is_equivariant(&self.lambda1, &self.lambda_to_lambda1) {
            return Err(Error::internal("Λ → Λ¹ is not equivariant"));
        }
        Ok(())
    }
}
