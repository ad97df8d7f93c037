//! Landau pairs `(p, q)`: primes with `p = 1 + a²` and `q = 1 + p·b²`.
//!
//! The search runs over even roots, `p = 1 + 4a²`, since an odd root gives an
//! even `p`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`, with the seven-base witness set
/// of Sinclair.
pub fn is_prime_u64(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    const BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `⌊√n⌋`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// The `r` with `r² = n`, if any.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// `p` is the square-free part of `q − 1` for a Landau pair, because
/// `q − 1 = p·b²` with `p` prime. Returns `(p, b)` when that shape holds.
pub fn split_square_part(m: u64) -> Option<(u64, u64)> {
    if m == 0 {
        return None;
    }
    let (mut core, mut root) = (1u64, 1u64);
    for (prime, e) in crate::fields::arith::factorize(m) {
        root *= prime.pow(e / 2);
        if e % 2 == 1 {
            core *= prime;
        }
    }
    Some((core, root))
}

/// Both primes, `p − 1` a square, and `q − 1 = p·b²` with `b ≥ 1`.
pub fn is_landau_pair(p: u64, q: u64) -> bool {
    p != q
        && p > 2
        && exact_sqrt(p - 1).is_some_and(|a| a > 0)
        && q > 1
        && (q - 1).is_multiple_of(p)
        && exact_sqrt((q - 1) / p).is_some_and(|b| b > 0)
        && is_prime_u64(p)
        && is_prime_u64(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LandauPair {
    pub p: u64,
    pub q: u64,
    /// `p = 1 + a²`
    pub a: u64,
    /// `q = 1 + p·b²`
    pub b: u64,
}

impl LandauPair {
    /// The search parameter `a/2`, so that `p = 1 + 4·(a/2)²`.
    pub fn half_root(&self) -> u64 {
        self.a / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub pairs: Vec<LandauPair>,
    pub pair_count: usize,
    pub distinct_p_count: usize,
}

fn pairs_for(a: u64, b_max: u64) -> Result<Vec<LandauPair>> {
    let p = 4u64
        .checked_mul(a)
        .and_then(|x| x.checked_mul(a))
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::overflow("p = 1 + 4a² leaves u64").with_context(format!("a = {a}")))?;
    if !is_prime_u64(p) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for b in 1..=b_max {
        let q = p.checked_mul(b * b).and_then(|x| x.checked_add(1)).filter(|&q| q < 1 << 63);
        let Some(q) = q else {
            return Err(Error::overflow("q = 1 + p·b² reaches 2^63").with_context(format!("a = {a}, b = {b}")));
        };
        if is_prime_u64(q) {
            out.push(LandauPair { p, q, a: 2 * a, b });
        }
    }
    Ok(out)
}

/// All Landau pairs with `p = 1 + 4a²`, `1 ≤ a ≤ a_max`, `1 ≤ b ≤ b_max`,
/// sorted by `(p, q)`. Runs on the current rayon pool.
pub fn search(a_max: u64, b_max: u64) -> Result<SearchResult> {
    const CHUNK: u64 = 4096;
    if a_max > 0 && b_max > 0 {
        let (a, b) = (a_max as u128, b_max as u128);
        let q_max = (4 * a)
            .checked_mul(a)
            .and_then(|x| x.checked_add(1))
            .and_then(|p| p.checked_mul(b * b))
            .and_then(|x| x.checked_add(1));
        if q_max.is_none_or(|q| q >= 1 << 63) {
            return Err(Error::overflow("largest q = 1 + (1 + 4a²)·b² reaches 2^63")
                .with_context(format!("a_max = {a_max}, b_max = {b_max}")));
        }
    }
    let chunks: Vec<(u64, u64)> = (0..a_max.div_ceil(CHUNK))
        .map(|c| (c * CHUNK + 1, ((c + 1) * CHUNK).min(a_max)))
        .collect();
    let parts = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut v = Vec::new();
            for a in lo..=hi {
                v.extend(pairs_for(a, b_max)?);
            }
            Ok(v)
        })
        .collect::<Result<Vec<Vec<LandauPair>>>>()?;
    let mut pairs: Vec<LandauPair> = parts.into_iter().flatten().collect();
    pairs.sort_unstable_by_key(|x| (x.p, x.q));
    let distinct_p_count = pairs.iter().map(|x| x.p).collect::<BTreeSet<_>>().len();
    Ok(SearchResult { pair_count: pairs.len(), distinct_p_count, pairs })
}

/// [`search`] on a dedicated pool with `threads` workers.
pub fn search_with_threads(a_max: u64, b_max: u64, threads: usize) -> Result<SearchResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::domain("cannot build worker pool").with_context(e.to_string()))?;
    pool.install(|| search(a_max, b_max))
}

/// `r` pairs with pairwise distinct `p`, taking the first pair of each `p` in
/// sorted order.
pub fn disjoint_family(pairs: &[LandauPair], r: usize) -> Result<Vec<LandauPair>> {
    let mut seen = BTreeSet::new();
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable_by_key(|x| (x.p, x.q));
    let family: Vec<LandauPair> = sorted.into_iter().filter(|x| seen.insert(x.p)).take(r).collect();
    if family.len() < r {
        return Err(Error::domain(format!("only {} disjoint pairs are available", family.len()))
            .with_context(format!("requested {r}")));
    }
    Ok(family)
}

/// `gcd(pq, p′q′) = 1`.
pub fn are_disjoint(x: &LandauPair, y: &LandauPair) -> bool {
    num_integer::gcd(x.p as u128 * x.q as u128, y.p as u128 * y.q as u128) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_examples() {
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(999_983));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn landau_examples() {
        assert!(is_landau_pair(5, 181));
        assert!(!is_landau_pair(5, 41));
        assert!(!is_landau_pair(3, 7));
        assert_eq!(split_square_part(180), Some((5, 6)));
    }

    #[test]
    fn small_search() {
        let r = search(2, 6).unwrap();
        assert!(r.pairs.contains(&LandauPair { p: 5, q: 181, a: 2, b: 6 }));
        assert!(r.pairs.contains(&LandauPair { p: 17, q: 613, a: 4, b: 6 }));
        assert_eq!(search(0, 100).unwrap().pair_count, 0);
    }

    #[test]
    fn overflow_is_reported_before_searching() {
        let e = search(1, 2_000_000_000).unwrap_err();
        assert_eq!(e.code(), "overflow");
        assert_eq!(search(u64::MAX, u64::MAX).unwrap_err().code(), "overflow");
    }

    #[test]
    fn shortage() {
        let pairs = [LandauPair { p: 5, q: 181, a: 2, b: 6 }, LandauPair { p: 5, q: 1621, a: 2, b: 18 }];
        assert!(disjoint_family(&pairs, 2).is_err());
        assert_eq!(disjoint_family(&pairs, 1).unwrap().len(), 1);
    }
}
