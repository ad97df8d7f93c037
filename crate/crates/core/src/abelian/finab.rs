//! Finite abelian groups in invariant-factor form and homomorphisms between
//! them.
//!
//! Every construction (kernel, image, cokernel, subgroup, quotient, direct
//! sum) reduces to one primitive: the quotient `L/L'` of two full-rank
//! sublattices `L' ⊆ L ⊆ ℤ^a`, put in invariant-factor form by a Smith normal
//! form over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{BigMatrix, IntMatrix, Matrix};
use super::snf::{smith, Track};
use crate::error::{Error, Result};

/// `ℤ/d_1 ⊕ … ⊕ ℤ/d_k` with `d_1 | d_2 | … | d_k`, every `d_j ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinAb {
    factors: Vec<i64>,
}

impl FinAb {
    pub fn new(factors: Vec<i64>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::domain("invariant factors must be at least 2"));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::domain("invariant factors must form a divisibility chain"));
        }
        Ok(FinAb { factors })
    }

    pub fn trivial() -> Self {
        FinAb { factors: Vec::new() }
    }

    pub fn cyclic(n: i64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            FinAb { factors: vec![n] }
        }
    }

    /// `⊕ ℤ/c_j` for arbitrary positive orders, normalized.
    pub fn from_cyclic_orders(orders: &[i64]) -> Self {
        Presentation::cyclic(orders).quotient.group
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    /// Number of canonical generators.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &d| acc.checked_mul(d as u128).expect("group order fits in u128"))
    }

    pub fn exponent(&self) -> i64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(&self.factors).map(|(x, d)| x.mod_floor(d)).collect()
    }

    pub fn reduce_big(&self, v: &[BigInt]) -> Vec<i64> {
        v.iter()
            .zip(&self.factors)
            .map(|(x, d)| x.mod_floor(&BigInt::from(*d)).to_i64().unwrap())
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        a.iter()
            .zip(&self.factors)
            .map(|(x, d)| ((*x as i128 * k as i128).rem_euclid(*d as i128)) as i64)
            .collect()
    }

    /// `j`-th canonical generator.
    pub fn generator(&self, j: usize) -> Vec<i64> {
        let mut e = self.zero();
        e[j] = 1;
        e
    }

    pub fn element_order(&self, a: &[i64]) -> i64 {
        a.iter().zip(&self.factors).fold(1, |acc, (x, d)| acc.lcm(&(d / x.gcd(d))))
    }

    /// All elements in lexicographic coordinate order. Only for small groups.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// `ℤ^a ⊇ diag(d)ℤ^a` generators of the relation lattice.
    fn relation_vectors(&self) -> Vec<Vec<BigInt>> {
        let a = self.rank();
        (0..a)
            .map(|j| {
                let mut v = vec![BigInt::zero(); a];
                v[j] = BigInt::from(self.factors[j]);
                v
            })
            .collect()
    }
}

impl std::fmt::Display for FinAb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The Pontryagin dual; same invariant factors, dual basis `χ_j(e_k) = δ_jk/d_j`.
pub fn dual_group(a: &FinAb) -> FinAb {
    a.clone()
}

/// Homomorphism stored as a codomain-rank × domain-rank matrix whose column
/// `j` is the image of the `j`-th canonical generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    domain: FinAb,
    codomain: FinAb,
    matrix: IntMatrix,
}

impl AbHom {
    /// Reduces entries and checks that generator orders are respected.
    pub fn new(domain: FinAb, codomain: FinAb, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return Err(Error::domain("homomorphism matrix has the wrong shape"));
        }
        let mut m = matrix;
        for i in 0..codomain.rank() {
            let d = codomain.factors[i];
            for j in 0..domain.rank() {
                let x = m.get(i, j).mod_floor(&d);
                m.set(i, j, x);
                if (x as i128 * domain.factors[j] as i128) % d as i128 != 0 {
                    return Err(Error::domain("matrix does not define a homomorphism")
                        .with_context(format!("generator {j} of order {} maps to order-incompatible entry", domain.factors[j])));
                }
            }
        }
        Ok(AbHom { domain, codomain, matrix: m })
    }

    /// From the images of the canonical generators.
    pub fn from_images(domain: FinAb, codomain: FinAb, images: &[Vec<i64>]) -> Result<Self> {
        let m = Matrix::from_columns(codomain.rank(), images);
        Self::new(domain, codomain, m)
    }

    pub fn zero(domain: FinAb, codomain: FinAb) -> Self {
        let m = IntMatrix::zeros(codomain.rank(), domain.rank());
        AbHom { domain, codomain, matrix: m }
    }

    pub fn identity(a: FinAb) -> Self {
        let m = IntMatrix::identity(a.rank());
        AbHom { domain: a.clone(), codomain: a, matrix: m }
    }

    pub fn domain(&self) -> &FinAb {
        &self.domain
    }

    pub fn codomain(&self) -> &FinAb {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let out: Vec<i64> = (0..self.codomain.rank())
            .map(|i| {
                let d = self.codomain.factors[i] as i128;
                let s = self
                    .matrix
                    .row(i)
                    .iter()
                    .zip(x)
                    .fold(0i128, |acc, (a, b)| (acc + *a as i128 * *b as i128).rem_euclid(d));
                s as i64
            })
            .collect();
        out
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &AbHom) -> Result<AbHom> {
        if inner.codomain != self.domain {
            return Err(Error::internal("composition of incompatible homomorphisms"));
        }
        let images: Vec<Vec<i64>> =
            (0..inner.domain.rank()).map(|j| self.apply(&inner.matrix.column(j))).collect();
        AbHom::from_images(inner.domain.clone(), self.codomain.clone(), &images)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// The dual map `B∨ → A∨` in the dual bases:
    /// entry `(k, l)` is `M[l][k]·d_k/d′_l mod d_k`.
    pub fn dual(&self) -> AbHom {
        let (a, b) = (&self.domain, &self.codomain);
        let mut m = IntMatrix::zeros(a.rank(), b.rank());
        for k in 0..a.rank() {
            for l in 0..b.rank() {
                let x = *self.matrix.get(l, k) as i128 * a.factors[k] as i128;
                debug_assert_eq!(x % b.factors[l] as i128, 0);
                let v = (x / b.factors[l] as i128).rem_euclid(a.factors[k] as i128);
                m.set(k, l, v as i64);
            }
        }
        AbHom { domain: b.clone(), codomain: a.clone(), matrix: m }
    }

    fn column_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.domain.rank())
            .map(|j| self.matrix.column(j).into_iter().map(BigInt::from).collect())
            .collect()
    }

    /// Kernel with its inclusion into the domain.
    pub fn kernel(&self) -> (FinAb, AbHom) {
        let (a, b) = (self.domain.rank(), self.codomain.rank());
        // x ∈ ker  ⇔  M·x + diag(d′)·y = 0 for some y
        let mut big = BigMatrix::zeros(b, a + b);
        for i in 0..b {
            for j in 0..a {
                big.set(i, j, BigInt::from(*self.matrix.get(i, j)));
            }
            big.set(i, a + i, BigInt::from(self.codomain.factors[i]));
        }
        let mut gens: Vec<Vec<BigInt>> = integer_kernel(&big).into_iter().map(|v| v[..a].to_vec()).collect();
        gens.extend(self.domain.relation_vectors());
        let q = LatticeQuotient::new(a, &gens, &self.domain.relation_vectors());
        let incl = q.inclusion_into(&self.domain);
        (q.group, incl)
    }

    /// Image with its inclusion into the codomain.
    pub fn image(&self) -> (FinAb, AbHom) {
        subgroup_lattice(&self.codomain, &self.column_vectors())
    }

    /// Cokernel with the projection from the codomain.
    pub fn cokernel(&self) -> (FinAb, AbHom) {
        quotient_lattice(&self.codomain, &self.column_vectors())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().0.order() == self.codomain.order()
    }
}

/// Basis of the integer kernel of `m` (columns of `V` past the rank).
pub fn integer_kernel(m: &BigMatrix) -> Vec<Vec<BigInt>> {
    let s = smith(m, Track { v: true, ..Track::none() }).expect("BigInt never overflows");
    let v = s.v.unwrap();
    (s.rank..m.cols()).map(|j| v.column(j)).collect()
}

/// `L/L′` for full-rank lattices `L′ ⊆ L ⊆ ℤ^a`, in invariant-factor form.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub group: FinAb,
    dim: usize,
    /// ambient vectors representing the canonical generators
    gens: Vec<Vec<BigInt>>,
    /// `L = U⁻¹·diag(basis_diag)`: solving `B·y = x` is `y = diag⁻¹·U·x`
    basis_u: BigMatrix,
    basis_diag: Vec<BigInt>,
    rel_u: BigMatrix,
    keep: Vec<usize>,
}

impl LatticeQuotient {
    /// `l_gens` must span a full-rank lattice containing every `sub_gens`
    /// vector, and `sub_gens` must span a full-rank lattice.
    pub fn new(dim: usize, l_gens: &[Vec<BigInt>], sub_gens: &[Vec<BigInt>]) -> Self {
        let lm = columns_matrix(dim, l_gens);
        let s = smith(&lm, Track { u: true, u_inv: true, ..Track::none() }).expect("BigInt");
        assert_eq!(s.rank, dim, "lattice L is not of full rank");
        let basis_u = s.u.unwrap();
        let u_inv = s.u_inv.unwrap();
        let basis_diag: Vec<BigInt> = s.diag[..dim].to_vec();
        let basis: Vec<Vec<BigInt>> = (0..dim)
            .map(|j| u_inv.column(j).into_iter().map(|x| x * &basis_diag[j]).collect())
            .collect();
        let solve = |x: &[BigInt]| -> Option<Vec<BigInt>> {
            let ux = basis_u.mul_vec(x);
            ux.iter()
                .zip(&basis_diag)
                .map(|(v, d)| if v.is_multiple_of(d) { Some(v / d) } else { None })
                .collect()
        };
        let rel_cols: Vec<Vec<BigInt>> = sub_gens
            .iter()
            .map(|g| solve(g).expect("sub-lattice generator lies outside L"))
            .collect();
        let rm = columns_matrix(dim, &rel_cols);
        let s2 = smith(&rm, Track { u: true, u_inv: true, ..Track::none() }).expect("BigInt");
        assert_eq!(s2.rank, dim, "sub-lattice is not of full rank");
        let rel_u = s2.u.unwrap();
        let rel_u_inv = s2.u_inv.unwrap();
        let keep: Vec<usize> = (0..dim).filter(|&i| !s2.diag[i].is_one()).collect();
        let factors: Vec<i64> = keep.iter().map(|&i| s2.diag[i].to_i64().expect("factor fits in i64")).collect();
        let bmat = columns_matrix(dim, &basis);
        let gens = keep.iter().map(|&i| bmat.mul_vec(&rel_u_inv.column(i))).collect();
        LatticeQuotient {
            group: FinAb::new(factors).expect("SNF yields a divisibility chain"),
            dim,
            gens,
            basis_u,
            basis_diag,
            rel_u,
            keep,
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        let ux = self.basis_u.mul_vec(x);
        ux.iter().zip(&self.basis_diag).all(|(v, d)| v.is_multiple_of(d))
    }

    /// Canonical coordinates of the class of `x ∈ L`.
    pub fn coords(&self, x: &[BigInt]) -> Result<Vec<i64>> {
        assert_eq!(x.len(), self.dim);
        let ux = self.basis_u.mul_vec(x);
        let mut y = Vec::with_capacity(self.dim);
        for (v, d) in ux.iter().zip(&self.basis_diag) {
            if !v.is_multiple_of(d) {
                return Err(Error::internal("vector is not in the lattice"));
            }
            y.push(v / d);
        }
        let z = self.rel_u.mul_vec(&y);
        Ok(self.group.reduce_big(&self.keep.iter().map(|&i| z[i].clone()).collect::<Vec<_>>()))
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.gens
    }

    /// The map `L/L′ → ℤ^a/diag(d)` when `L′ ⊇ diag(d)ℤ^a` is the ambient
    /// relation lattice of `ambient`.
    pub fn inclusion_into(&self, ambient: &FinAb) -> AbHom {
        let images: Vec<Vec<i64>> = self.gens.iter().map(|g| ambient.reduce_big(g)).collect();
        AbHom::from_images(self.group.clone(), ambient.clone(), &images).expect("inclusion is a homomorphism")
    }
}

fn columns_matrix(dim: usize, cols: &[Vec<BigInt>]) -> BigMatrix {
    if cols.is_empty() {
        BigMatrix::zeros(dim, 0)
    } else {
        Matrix::from_columns(dim, cols)
    }
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn subgroup_lattice(a: &FinAb, gens: &[Vec<BigInt>]) -> (FinAb, AbHom) {
    let mut l = gens.to_vec();
    l.extend(a.relation_vectors());
    let q = LatticeQuotient::new(a.rank(), &l, &a.relation_vectors());
    let incl = q.inclusion_into(a);
    (q.group, incl)
}

fn quotient_lattice(a: &FinAb, gens: &[Vec<BigInt>]) -> (FinAb, AbHom) {
    let mut sub = gens.to_vec();
    sub.extend(a.relation_vectors());
    let id: Vec<Vec<BigInt>> = (0..a.rank())
        .map(|j| {
            let mut v = vec![BigInt::zero(); a.rank()];
            v[j] = BigInt::one();
            v
        })
        .collect();
    let q = LatticeQuotient::new(a.rank(), &id, &sub);
    let images: Vec<Vec<i64>> = id.iter().map(|e| q.coords(e).unwrap()).collect();
    let proj = AbHom::from_images(a.clone(), q.group.clone(), &images).expect("projection is a homomorphism");
    (q.group, proj)
}

/// Subgroup generated by `gens`, with its inclusion.
pub fn subgroup(a: &FinAb, gens: &[Vec<i64>]) -> (FinAb, AbHom) {
    subgroup_lattice(a, &gens.iter().map(|g| to_big(g)).collect::<Vec<_>>())
}

/// `A/⟨gens⟩` with the projection.
pub fn quotient(a: &FinAb, gens: &[Vec<i64>]) -> (FinAb, AbHom) {
    quotient_lattice(a, &gens.iter().map(|g| to_big(g)).collect::<Vec<_>>())
}

/// `⟨big⟩/⟨small⟩` inside `A`, failing if `⟨small⟩ ⊄ ⟨big⟩`.
pub fn subquotient(a: &FinAb, big: &[Vec<i64>], small: &[Vec<i64>]) -> Result<FinAb> {
    let mut l: Vec<Vec<BigInt>> = big.iter().map(|g| to_big(g)).collect();
    l.extend(a.relation_vectors());
    let mut s: Vec<Vec<BigInt>> = small.iter().map(|g| to_big(g)).collect();
    s.extend(a.relation_vectors());
    let probe = LatticeQuotient::new(a.rank(), &l, &a.relation_vectors());
    if let Some(bad) = s.iter().find(|v| !probe.contains(v)) {
        return Err(Error::internal("subgroup containment fails").with_context(format!("{bad:?}")));
    }
    Ok(LatticeQuotient::new(a.rank(), &l, &s).group)
}

/// Whether `x` lies in `⟨gens⟩`.
pub fn subgroup_contains(a: &FinAb, gens: &[Vec<i64>], x: &[i64]) -> bool {
    let mut l: Vec<Vec<BigInt>> = gens.iter().map(|g| to_big(g)).collect();
    l.extend(a.relation_vectors());
    LatticeQuotient::new(a.rank(), &l, &a.relation_vectors()).contains(&to_big(x))
}

/// `{χ ∈ A∨ : χ(w) = 0 for all w ∈ W}` with its inclusion into `A∨`.
pub fn annihilator(a: &FinAb, w: &[Vec<i64>]) -> (FinAb, AbHom) {
    let e = a.exponent();
    // χ = Σ c_j χ_j vanishes on w  ⇔  Σ c_j·w_j·(e/d_j) ≡ 0 mod e
    let target = FinAb::from_cyclic_orders(&vec![e; w.len()]);
    if e == 1 || w.is_empty() {
        return (a.clone(), AbHom::identity(a.clone()));
    }
    let mut m = IntMatrix::zeros(w.len(), a.rank());
    for (i, wi) in w.iter().enumerate() {
        for (j, (&x, &d)) in wi.iter().zip(a.factors()).enumerate() {
            m.set(i, j, (x as i128 * (e / d) as i128).rem_euclid(e as i128) as i64);
        }
    }
    debug_assert_eq!(target.factors(), &vec![e; w.len()][..]);
    let hom = AbHom::new(dual_group(a), target, m).expect("evaluation map is a homomorphism");
    hom.kernel()
}

/// A cyclic presentation `⊕ ℤ/c_j` normalized to invariant factors.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub orders: Vec<i64>,
    pub quotient: LatticeQuotient,
}

impl Presentation {
    pub fn cyclic(orders: &[i64]) -> Self {
        let n = orders.len();
        let id: Vec<Vec<BigInt>> = (0..n)
            .map(|j| {
                let mut v = vec![BigInt::zero(); n];
                v[j] = BigInt::one();
                v
            })
            .collect();
        let rel: Vec<Vec<BigInt>> = (0..n)
            .map(|j| {
                let mut v = vec![BigInt::zero(); n];
                v[j] = BigInt::from(orders[j]);
                v
            })
            .collect();
        Presentation { orders: orders.to_vec(), quotient: LatticeQuotient::new(n, &id, &rel) }
    }

    /// Canonical coordinates of the presented vector `x` (entries mod `c_j`).
    pub fn coords(&self, x: &[i64]) -> Vec<i64> {
        self.quotient.coords(&to_big(x)).expect("every vector lies in ℤ^n")
    }

    /// Presented vector (one representative) of a canonical generator.
    pub fn generator_vector(&self, j: usize) -> Vec<i64> {
        self.quotient.generators()[j]
            .iter()
            .zip(&self.orders)
            .map(|(x, c)| x.mod_floor(&BigInt::from(*c)).to_i64().unwrap())
            .collect()
    }
}

/// `A_1 ⊕ … ⊕ A_r` with injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FinAb,
    pub injections: Vec<AbHom>,
    pub projections: Vec<AbHom>,
}

pub fn direct_sum(parts: &[FinAb]) -> DirectSum {
    let orders: Vec<i64> = parts.iter().flat_map(|p| p.factors().iter().copied()).collect();
    let pres = Presentation::cyclic(&orders);
    let group = pres.quotient.group.clone();
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for p in parts {
        let images: Vec<Vec<i64>> = (0..p.rank())
            .map(|j| {
                let mut v = vec![0; orders.len()];
                v[offset + j] = 1;
                pres.coords(&v)
            })
            .collect();
        injections.push(AbHom::from_images(p.clone(), group.clone(), &images).expect("injection"));
        let images: Vec<Vec<i64>> = (0..group.rank())
            .map(|k| p.reduce(&pres.generator_vector(k)[offset..offset + p.rank()]))
            .collect();
        projections.push(AbHom::from_images(group.clone(), p.clone(), &images).expect("projection"));
        offset += p.rank();
    }
    DirectSum { group, injections, projections }
}

/// Assembles `(f_1, …, f_r): A → B_1 ⊕ … ⊕ B_r`.
pub fn combine_into_sum(sum: &DirectSum, maps: &[AbHom]) -> Result<AbHom> {
    let Some(first) = maps.first() else {
        return Err(Error::internal("empty family of maps"));
    };
    let domain = first.domain().clone();
    let images: Vec<Vec<i64>> = (0..domain.rank())
        .map(|j| {
            let e = domain.generator(j);
            maps.iter().zip(&sum.injections).fold(sum.group.zero(), |acc, (f, inj)| {
                sum.group.add(&acc, &inj.apply(&f.apply(&e)))
            })
        })
        .collect();
    AbHom::from_images(domain, sum.group.clone(), &images)
}

/// Assembles `Σ f_i: B_1 ⊕ … ⊕ B_r → A`.
pub fn sum_from_sum(sum: &DirectSum, maps: &[AbHom], codomain: &FinAb) -> Result<AbHom> {
    let images: Vec<Vec<i64>> = (0..sum.group.rank())
        .map(|k| {
            let e = sum.group.generator(k);
            maps.iter().zip(&sum.projections).fold(codomain.zero(), |acc, (f, pr)| {
                codomain.add(&acc, &f.apply(&pr.apply(&e)))
            })
        })
        .collect();
    AbHom::from_images(sum.group.clone(), codomain.clone(), &images)
}
