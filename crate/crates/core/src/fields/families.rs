//! Cyclotomic, quaternion and dihedral CM fields as data.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::arith::{factorize, legendre};
use crate::datum::NormTorusDatum;
use crate::error::{Error, Result};
use crate::group::{unit_residues, FiniteGroup};
use crate::landau::exact_sqrt;
use crate::torus::{density_bound, tamagawa, DensityBound, NkBound};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A datum together with the value theory predicts for it.
#[derive(Clone, Debug)]
pub struct Constructed {
    pub datum: NormTorusDatum,
    pub predicted_tau: BigRational,
}

/// `ℚ(ζ_n)` over `ℚ` with `G = (ℤ/n)^×`, `ι = −1`.
///
/// `𝒟` holds every cyclic subgroup (the unramified Frobenius groups) and, for
/// each `p | n`, the inertia group `ker((ℤ/n)^× → (ℤ/m)^×)` with `n = p^a·m`,
/// extended by one lift of `p mod m`. Declared complete.
pub fn cyclotomic(n: u64) -> Result<Constructed> {
    if n <= 2 || n % 4 == 2 {
        return Err(Error::domain("cyclotomic field needs n > 2 with n odd or 4 | n").with_context(format!("n = {n}")));
    }
    let g = FiniteGroup::units_mod(n)?;
    let res = unit_residues(n);
    let index = |r: u64| res.binary_search(&(r % n)).expect("unit residue");
    let iota = index(n - 1);
    let mut dec = Vec::new();
    for (p, e) in factorize(n) {
        let pa = p.pow(e);
        let m = n / pa;
        let mut gens: Vec<usize> = res.iter().filter(|&&r| r % m == 1 % m).map(|&r| index(r)).collect();
        if m > 1 {
            let lift = res.iter().find(|&&r| r % m == p % m && r % pa == 1).expect("CRT lift exists");
            gens.push(index(*lift));
        }
        dec.push(g.subgroup_generated(&gens));
    }
    let odd_prime_power = n % 2 == 1 && factorize(n).len() == 1;
    let predicted = if odd_prime_power || n == 4 { rat(1, 1) } else { rat(2, 1) };
    let h = g.trivial_subgroup();
    let datum = NormTorusDatum::cm_field(g, h, iota, dec, true, true)?;
    Ok(Constructed { datum, predicted_tau: predicted })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreEntry {
    pub q: u64,
    pub symbol: i8,
}

#[derive(Clone, Debug)]
pub struct Q8Construction {
    pub datum: NormTorusDatum,
    pub predicted_tau: BigRational,
    pub b: u64,
    /// `(P/q)` for every prime `q | Q`.
    pub legendre: Vec<LegendreEntry>,
}

/// Element indices of `i` and `j` in [`FiniteGroup::quaternion8`].
pub const Q8_GENERATORS: (usize, usize) = (2, 4);
/// `−1` in [`FiniteGroup::quaternion8`].
pub const Q8_CENTER: usize = 1;

/// The quaternion field attached to `(P, Q)` with `P − 1` a square and
/// `Q − 1 = P·b²`. `𝒟` is every cyclic subgroup, plus `G` itself when some
/// prime `q | Q` has `(P/q) = −1`; then `τ = 2`, otherwise `1/2`.
pub fn q8_landau(big_p: u64, big_q: u64) -> Result<Q8Construction> {
    let mut failed = Vec::new();
    if big_p.is_multiple_of(2) {
        failed.push("P is not odd and positive");
    }
    if big_q.is_multiple_of(2) {
        failed.push("Q is not odd and positive");
    }
    if big_p == 0 || exact_sqrt(big_p - 1).is_none() {
        failed.push("P − 1 is not a perfect square");
    }
    let b = (big_p > 0 && big_q > 0 && (big_q - 1).is_multiple_of(big_p))
        .then(|| exact_sqrt((big_q - 1) / big_p))
        .flatten()
        .filter(|&b| b > 0);
    if b.is_none() {
        failed.push("Q − 1 is not P·b² with b ≥ 1");
    }
    if exact_sqrt(big_q).is_some() {
        failed.push("Q is a perfect square");
    }
    if !failed.is_empty() {
        return Err(Error::domain("(P, Q) violates the quaternion-field conditions")
            .with_context(format!("P = {big_p}, Q = {big_q}: {}", failed.join("; "))));
    }
    let legendre_table = factorize(big_q)
        .into_iter()
        .map(|(q, _)| Ok(LegendreEntry { q, symbol: legendre(big_p as i64, q)? }))
        .collect::<Result<Vec<_>>>()?;
    let obstructed = legendre_table.iter().any(|e| e.symbol == -1);
    let g = FiniteGroup::quaternion8();
    let dec = if obstructed { vec![g.whole()] } else { vec![] };
    let h = g.trivial_subgroup();
    let datum = NormTorusDatum::cm_field(g, h, Q8_CENTER, dec, true, true)?;
    Ok(Q8Construction {
        datum,
        predicted_tau: if obstructed { rat(2, 1) } else { rat(1, 2) },
        b: b.expect("checked above"),
        legendre: legendre_table,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DihedralReport {
    pub n: usize,
    pub density: DensityBound,
    /// `2` when the density count forces `n_K = 1`.
    #[serde(serialize_with = "crate::io::serialize_opt_rational")]
    pub structural_tau: Option<BigRational>,
    /// Engine value with only cyclic decomposition groups.
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub engine_lower_bound: BigRational,
}

/// A Galois CM field with group `D_n` (order `2n`) and `ι = r^{n/2}`.
pub fn dihedral_cm(n: usize) -> Result<DihedralReport> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::domain("dihedral CM field needs n even: for odd n the center of D_n has no involution")
            .with_context(format!("n = {n}")));
    }
    let g = FiniteGroup::dihedral(n)?;
    let iota = n / 2;
    let density = density_bound(&g, iota)?;
    let structural_tau = (density.n_k == NkBound::One).then(|| rat(2, 1));
    let h = g.trivial_subgroup();
    let datum = NormTorusDatum::cm_field(g, h, iota, vec![], true, false)?;
    Ok(DihedralReport { n, density, structural_tau, engine_lower_bound: tamagawa(&datum)?.tau })
}
