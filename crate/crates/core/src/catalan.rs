//! Catalan numbers as big integers.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Rational;

static CACHE: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

/// `C_k` from the closed form `binom(2k, k) / (k + 1)`.
pub fn catalan_number(k: usize) -> BigInt {
    // binom(2k, k) built incrementally; each partial product is an integer.
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(2 * k - i) / BigInt::from(i + 1);
    }
    b / BigInt::from(k + 1)
}

/// `C_0..=C_k` from `C_m = sum_{j=1}^{m} C_{j-1} C_{m-j}`.
///
/// Quadratic; used as an independent check on [`catalan_number`].
pub fn catalan_by_recurrence(k: usize) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=k {
        let mut s = BigInt::zero();
        for j in 1..=m {
            s += &c[j - 1] * &c[m - j];
        }
        c.push(s);
    }
    c
}

/// Cached `C_k`. Negative-index callers should clamp before calling.
pub fn catalan(k: usize) -> BigInt {
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(BigInt::one());
    }
    while cache.len() <= k {
        // C_{m+1} = C_m * 2(2m+1) / (m+2)
        let m = cache.len() - 1;
        let next = &cache[m] * BigInt::from(2 * (2 * m + 1)) / BigInt::from(m + 2);
        cache.push(next);
    }
    cache[k].clone()
}

/// `C_k / C_{k+1}` as an exact rational.
pub fn catalan_ratio(k: usize) -> Rational {
    Rational::new(catalan(k), catalan(k + 1))
}

/// Checks `C_k/C_{k+1} > C_l/C_{l+1}` for all `0 <= k < l <= max`.
///
/// Returns `(cases, violations)`.
pub fn check_catalan_mono(max: usize) -> (usize, Vec<(usize, usize)>) {
    let ratios: Vec<Rational> = (0..=max).map(catalan_ratio).collect();
    let mut cases = 0;
    let mut bad = Vec::new();
    for k in 0..=max {
        for l in k + 1..=max {
            cases += 1;
            if ratios[k] <= ratios[l] {
                bad.push((k, l));
            }
        }
    }
    (cases, bad)
}
