//! Smith normal form over `i64` (overflow-checked) or `BigInt`.
//!
//! Pivoting always picks the smallest-magnitude nonzero entry of the remaining
//! block. Row operations can be recorded as a log instead of an explicit `U`,
//! which keeps memory linear when the matrix has thousands of rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

use super::matrix::Matrix;

/// Arithmetic needed by the elimination. `i64` reports overflow through the
/// checked operations; `BigInt` never does.
pub trait Scalar:
    Clone
    + std::fmt::Debug
    + PartialEq
    + Eq
    + Zero
    + One
    + Signed
    + Integer
    + CheckedMul
    + CheckedSub
    + CheckedAdd
    + Send
    + Sync
{
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Marker for an `i64` elimination that left the representable range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// One elementary row operation, as applied to the matrix.
#[derive(Clone, Debug)]
pub enum RowOp<T> {
    Swap(usize, usize),
    /// `row[target] -= factor · row[source]`
    SubMul { target: usize, source: usize, factor: T },
    Negate(usize),
}

/// Which transforms to accumulate.
#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
    pub row_log: bool,
}

impl Track {
    pub fn all() -> Self {
        Track { u: true, u_inv: true, v: true, v_inv: true, row_log: false }
    }

    pub fn none() -> Self {
        Track::default()
    }
}

/// Result of `U·M·V = D`.
#[derive(Clone, Debug)]
pub struct Snf<T> {
    /// Diagonal of `D`, length `min(rows, cols)`, nonnegative, each entry
    /// dividing the next; zeros come last.
    pub diag: Vec<T>,
    pub rank: usize,
    pub u: Option<Matrix<T>>,
    pub u_inv: Option<Matrix<T>>,
    pub v: Option<Matrix<T>>,
    pub v_inv: Option<Matrix<T>>,
    pub row_log: Option<Vec<RowOp<T>>>,
}

impl<T: Scalar> Snf<T> {
    /// The diagonal matrix `D` in the original shape.
    pub fn d_matrix(&self, rows: usize, cols: usize) -> Matrix<T> {
        let mut d = Matrix::zeros(rows, cols);
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

fn sub_mul<T: Scalar>(x: &T, q: &T, y: &T) -> Result<T, Overflow> {
    if y.is_zero() {
        return Ok(x.clone());
    }
    let p = q.checked_mul(y).ok_or(Overflow)?;
    x.checked_sub(&p).ok_or(Overflow)
}

/// `q` with `|a − q·b| ≤ |b|/2`.
fn nearest_quotient<T: Scalar>(a: &T, b: &T) -> T {
    let (q, r) = a.div_mod_floor(b);
    let two_r = r.clone() + r;
    if two_r.abs() > b.abs() {
        q + T::one()
    } else {
        q
    }
}

/// Computes `U·x` from a recorded row log.
pub fn apply_row_log<T: Scalar>(log: &[RowOp<T>], x: &mut [T]) -> Result<(), Overflow> {
    for op in log {
        match op {
            RowOp::Swap(a, b) => x.swap(*a, *b),
            RowOp::Negate(a) => x[*a] = -x[*a].clone(),
            RowOp::SubMul { target, source, factor } => {
                x[*target] = sub_mul(&x[*target], factor, &x[*source])?;
            }
        }
    }
    Ok(())
}

/// Computes `U⁻¹·x` from a recorded row log.
pub fn apply_row_log_inverse<T: Scalar>(log: &[RowOp<T>], x: &mut [T]) -> Result<(), Overflow> {
    for op in log.iter().rev() {
        match op {
            RowOp::Swap(a, b) => x.swap(*a, *b),
            RowOp::Negate(a) => x[*a] = -x[*a].clone(),
            RowOp::SubMul { target, source, factor } => {
                x[*target] = sub_mul(&x[*target], &-factor.clone(), &x[*source])?;
            }
        }
    }
    Ok(())
}

struct Elim<T> {
    a: Matrix<T>,
    start: usize,
    u: Option<Matrix<T>>,
    u_inv: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
    v_inv: Option<Matrix<T>>,
    log: Option<Vec<RowOp<T>>>,
}

impl<T: Scalar> Elim<T> {
    /// `row[t] -= q·row[s]`
    fn row_sub(&mut self, t: usize, s: usize, q: &T) -> Result<(), Overflow> {
        let cols = self.a.cols();
        for c in self.start..cols {
            let y = self.a.get(s, c).clone();
            if !y.is_zero() {
                let v = sub_mul(self.a.get(t, c), q, &y)?;
                self.a.set(t, c, v);
            }
        }
        if let Some(u) = self.u.as_mut() {
            for c in 0..u.cols() {
                let v = sub_mul(u.get(t, c), q, &u.get(s, c).clone())?;
                u.set(t, c, v);
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            // column s += q·column t
            let mq = -q.clone();
            for r in 0..ui.rows() {
                let v = sub_mul(ui.get(r, s), &mq, &ui.get(r, t).clone())?;
                ui.set(r, s, v);
            }
        }
        if let Some(log) = self.log.as_mut() {
            log.push(RowOp::SubMul { target: t, source: s, factor: q.clone() });
        }
        Ok(())
    }

    /// `col[t] -= q·col[s]`
    fn col_sub(&mut self, t: usize, s: usize, q: &T) -> Result<(), Overflow> {
        let rows = self.a.rows();
        for r in self.start..rows {
            let y = self.a.get(r, s).clone();
            if !y.is_zero() {
                let v = sub_mul(self.a.get(r, t), q, &y)?;
                self.a.set(r, t, v);
            }
        }
        if let Some(v) = self.v.as_mut() {
            for r in 0..v.rows() {
                let x = sub_mul(v.get(r, t), q, &v.get(r, s).clone())?;
                v.set(r, t, x);
            }
        }
        if let Some(vi) = self.v_inv.as_mut() {
            // row s += q·row t
            let mq = -q.clone();
            for c in 0..vi.cols() {
                let x = sub_mul(vi.get(s, c), &mq, &vi.get(t, c).clone())?;
                vi.set(s, c, x);
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.a.swap_rows(a, b);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(a, b);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            ui.swap_cols(a, b);
        }
        if let Some(log) = self.log.as_mut() {
            log.push(RowOp::Swap(a, b));
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.a.swap_cols(a, b);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(a, b);
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.swap_rows(a, b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.a.cols() {
            let x = -self.a.get(r, c).clone();
            self.a.set(r, c, x);
        }
        if let Some(u) = self.u.as_mut() {
            for c in 0..u.cols() {
                let x = -u.get(r, c).clone();
                u.set(r, c, x);
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for i in 0..ui.rows() {
                let x = -ui.get(i, r).clone();
                ui.set(i, r, x);
            }
        }
        if let Some(log) = self.log.as_mut() {
            log.push(RowOp::Negate(r));
        }
    }

    /// Row `i ≥ t` holding the smallest nonzero entry of column `t`, if the
    /// column below the pivot is not yet clear.
    fn min_in_column(&self, t: usize) -> Option<usize> {
        if (t + 1..self.a.rows()).all(|i| self.a.get(i, t).is_zero()) {
            return None;
        }
        (t..self.a.rows())
            .filter(|&i| !self.a.get(i, t).is_zero())
            .min_by(|&x, &y| self.a.get(x, t).abs().cmp(&self.a.get(y, t).abs()))
    }

    fn min_in_row(&self, t: usize) -> Option<usize> {
        if (t + 1..self.a.cols()).all(|j| self.a.get(t, j).is_zero()) {
            return None;
        }
        (t..self.a.cols())
            .filter(|&j| !self.a.get(t, j).is_zero())
            .min_by(|&x, &y| self.a.get(t, x).abs().cmp(&self.a.get(t, y).abs()))
    }

    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for r in t..self.a.rows() {
            for (c, x) in self.a.row(r).iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    let unit = ax.is_one();
                    best = Some((r, c, ax));
                    if unit {
                        return best.map(|b| (b.0, b.1));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    fn run(&mut self) -> Result<Vec<T>, Overflow> {
        let (m, n) = (self.a.rows(), self.a.cols());
        let k = m.min(n);
        let mut t = 0;
        while t < k {
            self.start = t;
            let Some((pi, pj)) = self.smallest(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Euclid on column t, always pivoting on the smallest entry
                if let Some(i) = self.min_in_column(t) {
                    self.swap_rows(t, i);
                    for i in t + 1..m {
                        if !self.a.get(i, t).is_zero() {
                            let q = nearest_quotient(self.a.get(i, t), self.a.get(t, t));
                            self.row_sub(i, t, &q)?;
                        }
                    }
                    continue;
                }
                if let Some(j) = self.min_in_row(t) {
                    self.swap_cols(t, j);
                    for j in t + 1..n {
                        if !self.a.get(t, j).is_zero() {
                            let q = nearest_quotient(self.a.get(t, j), self.a.get(t, t));
                            self.col_sub(j, t, &q)?;
                        }
                    }
                    continue;
                }
                let p = self.a.get(t, t).abs();
                if !p.is_one() {
                    let bad = (t + 1..m).find(|&i| {
                        self.a.row(i)[t + 1..].iter().any(|x| !x.is_multiple_of(&p))
                    });
                    if let Some(i) = bad {
                        // row t += row i brings the offending entry into the pivot row
                        self.row_sub(t, i, &-T::one())?;
                        continue;
                    }
                }
                break;
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        Ok((0..k).map(|i| self.a.get(i, i).clone()).collect())
    }
}

/// Smith normal form of `m`, accumulating the requested transforms.
pub fn smith<T: Scalar>(m: &Matrix<T>, track: Track) -> Result<Snf<T>, Overflow> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut e = Elim {
        a: m.clone(),
        start: 0,
        u: track.u.then(|| Matrix::identity(rows)),
        u_inv: track.u_inv.then(|| Matrix::identity(rows)),
        v: track.v.then(|| Matrix::identity(cols)),
        v_inv: track.v_inv.then(|| Matrix::identity(cols)),
        log: track.row_log.then(Vec::new),
    };
    let diag = e.run()?;
    let rank = diag.iter().take_while(|d| !d.is_zero()).count();
    Ok(Snf { diag, rank, u: e.u, u_inv: e.u_inv, v: e.v, v_inv: e.v_inv, row_log: e.log })
}

/// Arbitrary-precision Smith normal form: returns `(U, D, V)` with
/// `U·M·V = D`.
pub fn smith_normal_form(m: &Matrix<BigInt>) -> (Matrix<BigInt>, Matrix<BigInt>, Matrix<BigInt>) {
    let s = smith(m, Track { u: true, v: true, ..Track::none() }).expect("BigInt never overflows");
    let d = s.d_matrix(m.rows(), m.cols());
    (s.u.unwrap(), d, s.v.unwrap())
}
