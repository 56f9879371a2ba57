//! Exact Bernoulli numbers (`B_1 = -1/2`) and the tanh-family Taylor
//! coefficients built from them.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Largest index served by [`bernoulli`].
pub const BERNOULLI_MAX: u32 = 64;

/// Internal table size, enough for the `tanh^2` coefficients of the longest
/// supported expansion.
const TABLE_MAX: usize = 130;

fn table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_recurrence(TABLE_MAX))
}

/// `B_0..=B_n` from `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
fn bernoulli_recurrence(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    // binom holds C(m+1, k) for the current m
    let mut binom: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for m in 1..=n {
        // advance binom from row m to row m+1
        let mut next = vec![BigInt::one(); m + 2];
        for k in 1..=m {
            next[k] = &binom[k - 1] + &binom[k];
        }
        binom = next;
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(binom[k].clone());
            }
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Exact `B_n` for `n <= 64`.
pub fn bernoulli(n: u32) -> Result<BigRational> {
    if n > BERNOULLI_MAX {
        return Err(Error::Range(format!(
            "Bernoulli numbers are provided up to n = {BERNOULLI_MAX}, got {n}"
        )));
    }
    Ok(table()[n as usize].clone())
}

pub(crate) fn bernoulli_internal(n: usize) -> &'static BigRational {
    &table()[n]
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// Coefficient of `x^{2j}` in `sech^2 x = (tanh x)'`:
/// `2^{2j+2} (2^{2j+2} - 1) B_{2j+2} / ((2j)! (2j+2))`.
pub fn sech2_coefficient(j: u32) -> BigRational {
    let e = 2 * j + 2;
    let num = pow2(e) * (pow2(e) - BigInt::one());
    let den = factorial(2 * j) * BigInt::from(e);
    bernoulli_internal(e as usize) * BigRational::new(num, den)
}

/// Coefficient of `x^{2n+1}` in `tanh x`:
/// `2^{2n+2} (2^{2n+2} - 1) B_{2n+2} / (2n+2)!`.
pub fn tanh_coefficient(n: u32) -> BigRational {
    let e = 2 * n + 2;
    let num = pow2(e) * (pow2(e) - BigInt::one());
    bernoulli_internal(e as usize) * BigRational::new(num, factorial(e))
}

/// Coefficient of `x^{2n+2}` in `tanh^2 x`:
/// `2^{2n+4} (1 - 2^{2n+4}) B_{2n+4} / ((2n+2)! (2n+4))`.
pub fn tanh_squared_coefficient(n: u32) -> BigRational {
    let e = 2 * n + 4;
    let num = pow2(e) * (BigInt::one() - pow2(e));
    let den = factorial(2 * n + 2) * BigInt::from(e);
    bernoulli_internal(e as usize) * BigRational::new(num, den)
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `sech2_coefficient(j)` as `f64`, cached. Past the exact table the
/// zeta form `(-1)^j 2 (2j+1) (2/pi)^{2j+2} (1 - 4^{-j-1}) zeta(2j+2)` is used.
pub(crate) fn sech2_coefficient_f64(j: usize) -> f64 {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    let c = CACHE.get_or_init(|| {
        (0..SECH2_TERMS)
            .map(|j| {
                if 2 * j + 2 <= TABLE_MAX {
                    to_f64(&sech2_coefficient(j as u32))
                } else {
                    let s = (2 * j + 2) as i32;
                    let zeta: f64 = (1..=8).map(|k| f64::from(k).powi(-s)).sum();
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign * 2.0
                        * (2 * j + 1) as f64
                        * std::f64::consts::FRAC_2_PI.powi(s)
                        * (1.0 - 0.25f64.powi(j as i32 + 1))
                        * zeta
                }
            })
            .collect()
    });
    c[j]
}

/// Number of cached `sech^2` coefficients.
pub(crate) const SECH2_TERMS: usize = 400;

/// Partial sum of the tanh Taylor series with `n_terms` odd powers.
pub fn tanh_series(x: f64, n_terms: u32) -> f64 {
    (0..n_terms)
        .map(|n| to_f64(&tanh_coefficient(n)) * x.powi(2 * n as i32 + 1))
        .sum()
}
