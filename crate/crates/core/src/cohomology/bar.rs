//! Normalized bar-resolution cochains and `H^q(G, M)` for `q ≤ 3`.
//!
//! A `q`-cochain is stored as a flat vector indexed by
//! `tuple_index · rank + component`, where tuples run over non-identity
//! elements written in base `|G| − 1`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::lattice::GLattice;
use crate::abelian::snf::{apply_row_log, apply_row_log_inverse, smith, RowOp, Track};
use crate::abelian::{FinAb, IntMatrix};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// Largest group order allowed in each degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_order: [usize; 4],
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_order: [usize::MAX, 512, 16, 12] }
    }
}

impl Budget {
    /// Cap for degree 2; degree 3 keeps the smaller of `order` and 12.
    pub fn with_max_order(order: usize) -> Self {
        let mut b = Budget::default();
        b.max_order[2] = order;
        b.max_order[3] = order.min(12);
        b
    }

    fn check(&self, q: usize, g: &FiniteGroup, m: &GLattice) -> Result<()> {
        if q > 3 {
            return Err(Error::domain(format!("degree {q} is not supported")));
        }
        if g.order() > self.max_order[q] {
            let dim = cochain_dim(g.order(), q, m.rank());
            return Err(Error::budget(format!("H^{q} needs |G| ≤ {}", self.max_order[q])).with_context(format!(
                "|G| = {}, rank = {}, cochain dimension {dim}",
                g.order(),
                m.rank()
            )));
        }
        Ok(())
    }
}

pub fn cochain_dim(order: usize, q: usize, rank: usize) -> usize {
    (order - 1).pow(q as u32) * rank
}

/// Non-identity elements in a fixed order, and the inverse lookup.
struct Labels {
    elems: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl Labels {
    fn new(g: &FiniteGroup) -> Self {
        let elems: Vec<usize> = (0..g.order()).filter(|&x| x != g.identity()).collect();
        let mut pos = vec![None; g.order()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = Some(i);
        }
        Labels { elems, pos }
    }

    fn tuple(&self, mut idx: usize, q: usize) -> Vec<usize> {
        let b = self.elems.len();
        let mut t = vec![0; q];
        for slot in t.iter_mut().rev() {
            *slot = self.elems[idx % b];
            idx /= b;
        }
        t
    }

    /// `None` when some entry is the identity, where normalized cochains vanish.
    fn index(&self, t: &[usize]) -> Option<usize> {
        let b = self.elems.len();
        t.iter().try_fold(0usize, |acc, &x| self.pos[x].map(|p| acc * b + p))
    }
}

/// The matrix of `d^q: C^q → C^{q+1}`.
pub fn coboundary_matrix(g: &FiniteGroup, m: &GLattice, q: usize) -> IntMatrix {
    let labels = Labels::new(g);
    let r = m.rank();
    let b = labels.elems.len();
    let src = b.pow(q as u32);
    let dst = b.pow(q as u32 + 1);
    let mut d = IntMatrix::zeros(dst * r, src * r);
    for t in 0..dst {
        let args = labels.tuple(t, q + 1);
        let row0 = t * r;
        // g1 · f(g2, …)
        if let Some(s) = labels.index(&args[1..]) {
            let a = m.action(args[0]);
            for i in 0..r {
                for j in 0..r {
                    let v = *a.get(i, j);
                    if v != 0 {
                        let cell = d.get(row0 + i, s * r + j) + v;
                        d.set(row0 + i, s * r + j, cell);
                    }
                }
            }
        }
        let mut add = |s: usize, sign: i64| {
            for i in 0..r {
                let cell = d.get(row0 + i, s * r + i) + sign;
                d.set(row0 + i, s * r + i, cell);
            }
        };
        for i in 0..q {
            let mut merged = args.clone();
            let prod = g.mul(args[i], args[i + 1]);
            merged.splice(i..i + 2, [prod]);
            if let Some(s) = labels.index(&merged) {
                add(s, if i % 2 == 0 { -1 } else { 1 });
            }
        }
        if let Some(s) = labels.index(&args[..q]) {
            add(s, if (q + 1).is_multiple_of(2) { 1 } else { -1 });
        }
    }
    d
}

enum Log {
    Small(Vec<RowOp<i64>>),
    Big(Vec<RowOp<BigInt>>),
}

/// `U` for the Smith form of a coboundary matrix, with zero rows dropped.
struct Reduction {
    kept: Vec<usize>,
    full_dim: usize,
    diag: Vec<BigInt>,
    rank: usize,
    log: Log,
}

impl Reduction {
    fn new(m: &IntMatrix) -> Self {
        let kept: Vec<usize> = (0..m.rows()).filter(|&i| m.row(i).iter().any(|&x| x != 0)).collect();
        let mut pruned = IntMatrix::zeros(kept.len(), m.cols());
        for (k, &i) in kept.iter().enumerate() {
            pruned.row_mut(k).copy_from_slice(m.row(i));
        }
        let track = Track { row_log: true, ..Track::none() };
        let (diag, rank, log) = match smith(&pruned, track) {
            Ok(s) => (s.diag.iter().map(|&x| BigInt::from(x)).collect(), s.rank, Log::Small(s.row_log.unwrap())),
            Err(_) => {
                let s = smith(&pruned.to_big(), track).expect("BigInt never overflows");
                (s.diag, s.rank, Log::Big(s.row_log.unwrap()))
            }
        };
        Reduction { kept, full_dim: m.rows(), diag, rank, log }
    }

    /// `U·x` on the kept coordinates; `None` if `x` is nonzero on a dropped one.
    fn transform(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut mask = vec![false; self.full_dim];
        for &i in &self.kept {
            mask[i] = true;
        }
        if x.iter().zip(&mask).any(|(v, &k)| !k && !v.is_zero()) {
            return None;
        }
        let v: Vec<BigInt> = self.kept.iter().map(|&i| x[i].clone()).collect();
        Some(self.run(v, false))
    }

    /// `U⁻¹·y`, embedded back into the full coordinate space.
    fn inverse_transform(&self, y: Vec<BigInt>) -> Vec<BigInt> {
        let v = self.run(y, true);
        let mut out = vec![BigInt::zero(); self.full_dim];
        for (k, &i) in self.kept.iter().enumerate() {
            out[i] = v[k].clone();
        }
        out
    }

    fn run(&self, v: Vec<BigInt>, inverse: bool) -> Vec<BigInt> {
        match &self.log {
            Log::Small(log) => {
                if let Some(mut small) = v.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>() {
                    let ok = if inverse { apply_row_log_inverse(log, &mut small) } else { apply_row_log(log, &mut small) };
                    if ok.is_ok() {
                        return small.into_iter().map(BigInt::from).collect();
                    }
                }
                let big: Vec<RowOp<BigInt>> = log.iter().map(widen).collect();
                run_big(&big, v, inverse)
            }
            Log::Big(log) => run_big(log, v, inverse),
        }
    }
}

fn widen(op: &RowOp<i64>) -> RowOp<BigInt> {
    match *op {
        RowOp::Swap(a, b) => RowOp::Swap(a, b),
        RowOp::Negate(a) => RowOp::Negate(a),
        RowOp::SubMul { target, source, factor } => RowOp::SubMul { target, source, factor: BigInt::from(factor) },
    }
}

fn run_big(log: &[RowOp<BigInt>], mut v: Vec<BigInt>, inverse: bool) -> Vec<BigInt> {
    let r = if inverse { apply_row_log_inverse(log, &mut v) } else { apply_row_log(log, &mut v) };
    r.expect("BigInt never overflows");
    v
}

/// `H^q(G, M)` together with what is needed to name classes.
pub struct Cohomology {
    q: usize,
    rank: usize,
    order: usize,
    group: FinAb,
    /// Rank of `H^0 = M^G`; only meaningful for `q = 0`.
    invariants_rank: usize,
    reduction: Option<Reduction>,
    /// Positions `i < rank(d^{q−1})` with `d_i > 1`, matching the factors of `group`.
    torsion: Vec<usize>,
}

/// `H^q(G, M)`. For `q ≥ 1` this is the torsion of `coker d^{q−1}` on
/// cocycles; `H^0` is reported by rank.
pub fn cohomology(g: &FiniteGroup, m: &GLattice, q: usize, budget: &Budget) -> Result<Cohomology> {
    budget.check(q, g, m)?;
    if q == 0 {
        let d0 = coboundary_matrix(g, m, 0);
        let s = smith(&d0.to_big(), Track::none()).expect("BigInt never overflows");
        return Ok(Cohomology {
            q,
            rank: m.rank(),
            order: g.order(),
            group: FinAb::trivial(),
            invariants_rank: m.rank() - s.rank,
            reduction: None,
            torsion: vec![],
        });
    }
    let d = coboundary_matrix(g, m, q - 1);
    let red = Reduction::new(&d);
    let one = BigInt::one();
    let torsion: Vec<usize> = (0..red.rank).filter(|&i| red.diag[i] > one).collect();
    let factors = torsion
        .iter()
        .map(|&i| red.diag[i].to_i64().ok_or_else(|| Error::overflow("cohomology exponent leaves i64")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cohomology {
        q,
        rank: m.rank(),
        order: g.order(),
        group: FinAb::from_cyclic_orders(&factors),
        invariants_rank: 0,
        reduction: Some(red),
        torsion,
    })
}

impl Cohomology {
    pub fn group(&self) -> &FinAb {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn invariants_rank(&self) -> usize {
        self.invariants_rank
    }

    pub fn cochain_dim(&self) -> usize {
        cochain_dim(self.order, self.q, self.rank)
    }

    /// Coordinates of the class of a cocycle in [`Cohomology::group`].
    pub fn class_of(&self, cocycle: &[BigInt]) -> Result<Vec<i64>> {
        let red = self.reduction.as_ref().ok_or_else(|| Error::domain("classes are only named for q ≥ 1"))?;
        if cocycle.len() != self.cochain_dim() {
            return Err(Error::internal("cochain has the wrong length"));
        }
        let y = red.transform(cocycle).ok_or_else(|| Error::internal("cochain is not a cocycle"))?;
        if y[red.rank..].iter().any(|x| !x.is_zero()) {
            return Err(Error::internal("cochain is not a cocycle"));
        }
        let coords: Vec<BigInt> = self.torsion.iter().map(|&i| y[i].clone()).collect();
        Ok(self.group.reduce_big(&coords))
    }

    /// A cocycle representing the `j`-th generator.
    pub fn representative(&self, j: usize) -> Vec<BigInt> {
        let red = self.reduction.as_ref().expect("representatives exist for q ≥ 1");
        let mut e = vec![BigInt::zero(); red.kept.len()];
        e[self.torsion[j]] = BigInt::one();
        red.inverse_transform(e)
    }

    /// Representative of an arbitrary class.
    pub fn representative_of(&self, class: &[i64]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.cochain_dim()];
        for (j, &c) in class.iter().enumerate() {
            if c != 0 {
                for (o, r) in out.iter_mut().zip(self.representative(j)) {
                    *o += r * c;
                }
            }
        }
        out
    }
}

/// Restricts a `q`-cochain on `G` to the subgroup `d`, indexed like
/// [`FiniteGroup::subgroup_as_group`].
pub fn restrict_cochain(g: &FiniteGroup, d: &Subgroup, q: usize, rank: usize, c: &[BigInt]) -> Vec<BigInt> {
    let dg = g.subgroup_as_group(d);
    let big = Labels::new(g);
    let small = Labels::new(&dg);
    let n = small.elems.len().pow(q as u32);
    let mut out = Vec::with_capacity(n * rank);
    for t in 0..n {
        let args: Vec<usize> = small.tuple(t, q).into_iter().map(|k| d.elements()[k]).collect();
        let s = big.index(&args).expect("non-identity elements of D are non-identity in G");
        out.extend_from_slice(&c[s * rank..(s + 1) * rank]);
    }
    out
}

/// `(x·c)(h_1, …) = x·c(x⁻¹h_1x, …)` for `x` normalizing `h`; `m` is the
/// `G`-lattice and `c` a cochain on `h` indexed like
/// [`FiniteGroup::subgroup_as_group`].
pub fn conjugate_cochain(g: &FiniteGroup, h: &Subgroup, x: usize, m: &GLattice, q: usize, c: &[BigInt]) -> Vec<BigInt> {
    let hg = g.subgroup_as_group(h);
    let labels = Labels::new(&hg);
    let local: std::collections::HashMap<usize, usize> = h.elements().iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let xi = g.inv(x);
    let r = m.rank();
    let a = m.action(x);
    let n = labels.elems.len().pow(q as u32);
    let mut out = Vec::with_capacity(n * r);
    for t in 0..n {
        let args: Vec<usize> = labels
            .tuple(t, q)
            .into_iter()
            .map(|k| local[&g.mul(xi, g.mul(h.elements()[k], x))])
            .collect();
        let s = labels.index(&args).expect("conjugation fixes the identity only");
        let v = &c[s * r..(s + 1) * r];
        for i in 0..r {
            out.push((0..r).fold(BigInt::zero(), |acc, j| {
                let e = *a.get(i, j);
                if e == 0 { acc } else { acc + &v[j] * e }
            }));
        }
    }
    out
}

/// Applies a lattice map `M → N` to a `q`-cochain with values in `M`.
pub fn push_cochain(map: &IntMatrix, c: &[BigInt]) -> Vec<BigInt> {
    let (r_out, r_in) = (map.rows(), map.cols());
    let mut out = Vec::with_capacity(c.len() / r_in.max(1) * r_out);
    for chunk in c.chunks(r_in) {
        for i in 0..r_out {
            let mut acc = BigInt::zero();
            for (j, x) in chunk.iter().enumerate() {
                let a = *map.get(i, j);
                if a != 0 && !x.is_zero() {
                    acc += x * a;
                }
            }
            out.push(acc);
        }
    }
    out
}

/// `d^q` applied to a cochain.
pub fn apply_coboundary(g: &FiniteGroup, m: &GLattice, q: usize, c: &[BigInt]) -> Vec<BigInt> {
    let d = coboundary_matrix(g, m, q);
    (0..d.rows())
        .map(|i| {
            d.row(i).iter().zip(c).fold(BigInt::zero(), |acc, (&a, x)| if a == 0 { acc } else { acc + x * a })
        })
        .collect()
}
