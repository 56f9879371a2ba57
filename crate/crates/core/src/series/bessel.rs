//! Spherical Bessel functions of the first kind, `j_n(x)` for `n >= -1`.

use crate::{Error, Result};

/// Below this `x`, `j_n` (n >= 1) uses its leading small-argument behaviour.
const SMALL_X: f64 = 1e-4;

/// `j_n(x)` for integer `n >= -1` and `x >= 0`.
///
/// `j_{-1} = cos x / x`, `j_0 = sin x / x`. Higher orders use upward
/// recurrence when `x > n` and a downward ratio recurrence otherwise.
pub fn spherical_bessel_j(n: i32, x: f64) -> Result<f64> {
    if n < -1 {
        return Err(Error::domain(format!(
            "spherical Bessel order must be >= -1, got {n}"
        )));
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!(
            "spherical Bessel argument must be finite and >= 0, got {x}"
        )));
    }
    if n == -1 {
        if x == 0.0 {
            return Err(Error::domain("j_{-1}(x) = cos(x)/x has a pole at x = 0"));
        }
        return Ok(x.cos() / x);
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    if n == 0 {
        return Ok(j0(x));
    }
    let n = n as u32;
    if x < SMALL_X {
        return Ok(small_argument(n, x));
    }
    if x > f64::from(n) {
        return Ok(upward(n, x));
    }
    Ok(downward(n, x))
}

fn j0(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn j1(x: f64) -> f64 {
    (x.sin() / x - x.cos()) / x
}

/// `x^n / (2n+1)!! * (1 - x^2 / (2(2n+3)))`.
fn small_argument(n: u32, x: f64) -> f64 {
    let lead: f64 = (1..=n).map(|k| x / f64::from(2 * k + 1)).product();
    lead * (1.0 - x * x / (2.0 * f64::from(2 * n + 3)))
}

fn upward(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (j0(x), j1(x));
    for k in 1..n {
        let next = f64::from(2 * k + 1) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Ratios `r_k = j_k / j_{k-1}` from `r_k = x / (2k + 1 - x r_{k+1})`,
/// started far above `n` with `r = 0`, then anchored on `j_0` or `j_1`.
fn downward(n: u32, x: f64) -> f64 {
    let start = n + 40 + (2.0 * x) as u32;
    let mut r = 0.0;
    let mut ratios = vec![0.0; n as usize + 1];
    for k in (1..=start).rev() {
        r = x / (f64::from(2 * k + 1) - x * r);
        if k <= n {
            ratios[k as usize] = r;
        }
    }
    let (a0, a1) = (j0(x), j1(x));
    if a0.abs() >= a1.abs() {
        a0 * ratios[1..=n as usize].iter().product::<f64>()
    } else {
        a1 * ratios[2..=n as usize].iter().product::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn low_orders() {
        assert_eq!(spherical_bessel_j(0, 0.0).unwrap(), 1.0);
        assert!((spherical_bessel_j(0, 1e-9).unwrap() - 1.0).abs() < 1e-15);
        assert!(spherical_bessel_j(0, PI).unwrap().abs() < 1e-15);
        assert!(spherical_bessel_j(-1, 0.0).is_err());
        assert!(spherical_bessel_j(-2, 1.0).is_err());
        assert!(spherical_bessel_j(1, -1.0).is_err());
        assert!((spherical_bessel_j(-1, 0.7).unwrap() - 0.7f64.cos() / 0.7).abs() < 1e-16);
    }

    #[test]
    fn order_two_at_small_x() {
        // closed form (3/x^2 - 1) sin x / x - 3 cos x / x^2 evaluated in mpmath
        let v = spherical_bessel_j(2, 0.1).unwrap();
        assert!(rel(v, 6.661_906_084_455_688e-4) < 1e-13, "{v}");
        let lead = 0.1f64.powi(2) / 15.0;
        assert!(rel(v, lead) < 0.01);
    }

    #[test]
    fn reference_values() {
        // mpmath: sqrt(pi/(2x)) besselj(n + 1/2, x)
        let cases = [
            (1, 0.5, 0.162_537_030_636_066_57),
            (3, 0.01742, 5.034_401_304_796_769e-8),
            (5, 2.0, 2.635_169_770_244_117_3e-3),
            (10, 0.3, 4.286_292_970_560_096_5e-16),
            (4, 10.0, -0.105_589_285_117_691_67),
            (7, PI, 1.109_484_461_197_624_1e-3),
            (40, 0.5, 1.405_329_805_395_128_5e-73),
        ];
        for (n, x, want) in cases {
            let got = spherical_bessel_j(n, x).unwrap();
            assert!(rel(got, want) < 1e-12, "j_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn small_argument_branch_matches_asymptote() {
        for n in 1..10 {
            let x = 5e-5;
            let v = spherical_bessel_j(n, x).unwrap();
            let lead: f64 = (1..=n as u32).map(|k| x / f64::from(2 * k + 1)).product();
            assert!(rel(v, lead) < 1e-9);
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        // x just above and below n should give continuous values
        for n in 2..20 {
            let x = f64::from(n);
            let a = downward(n as u32, x);
            let b = upward(n as u32, x);
            assert!(rel(a, b) < 1e-10, "n={n}: {a} vs {b}");
        }
    }
}
