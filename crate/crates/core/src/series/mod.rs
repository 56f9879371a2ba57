//! Power series of the deformed spectra in `x = l(l+1)`.
//!
//! The su_q(2) spectrum (phase `q`) expands with spherical Bessel
//! coefficients; the ITO spectrum (real `q`) expands through the Taylor
//! series of `sech^2`, i.e. Bernoulli numbers. Lowest-order truncations give
//! the sinus and hyperbolic tangent formulae.

mod bernoulli;
mod bessel;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

pub use bernoulli::{
    bernoulli, sech2_coefficient, tanh_coefficient, tanh_series, tanh_squared_coefficient,
    BERNOULLI_MAX,
};
pub use bessel::spherical_bessel_j;

use crate::{Error, Result};

/// Hard cap on stored coefficients.
pub const MAX_TERMS: usize = 64;

/// Relative size below which a series term ends the summation.
const TRUNCATION: f64 = 1e-15;

/// Largest `tau` accepted by the expansion constructors.
const TAU_MAX: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExpansionModel {
    Suq2Exact,
    Suq2Approx,
    ItoExact,
    ItoApprox,
}

/// `E / A = prefactor * sum_n coeffs[n] * (l(l+1))^{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionCoefficients {
    pub model: ExpansionModel,
    pub tau: f64,
    pub coeffs: Vec<f64>,
    pub prefactor: f64,
}

impl ExpansionCoefficients {
    /// Energy at `ell` for rotational constant `a`, summing until a term
    /// drops below `1e-15` of the partial sum.
    pub fn evaluate(&self, a: f64, ell: f64) -> Result<f64> {
        if self.model == ExpansionModel::ItoExact
            && (2.0 * ell + 1.0) * 2.0 * self.tau >= std::f64::consts::FRAC_PI_2
        {
            return Err(Error::Range(format!(
                "ITO expansion at tau = {} is outside its convergence radius for l = {ell}",
                self.tau
            )));
        }
        let x = ell * (ell + 1.0);
        let mut sum = 0.0;
        let mut power = x;
        for &c in &self.coeffs {
            let term = c * power;
            sum += term;
            if term.abs() < TRUNCATION * sum.abs() {
                break;
            }
            power *= x;
        }
        Ok(a * self.prefactor * sum)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// CSV with columns `n,coefficient`; the coefficient includes the prefactor.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,coefficient\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{n},{:e}\n", c * self.prefactor));
        }
        out
    }
}

fn check_args(tau: f64, n_terms: usize) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0 && tau <= TAU_MAX) {
        return Err(Error::Range(format!(
            "expansion needs tau in (0, {TAU_MAX}], got {tau}"
        )));
    }
    if n_terms == 0 || n_terms > MAX_TERMS {
        return Err(Error::Range(format!(
            "number of terms must be in 1..={MAX_TERMS}, got {n_terms}"
        )));
    }
    Ok(())
}

fn factorial_f64(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Exact su_q(2) (phase `q`) expansion:
/// `coeffs[n] = (-1)^n (2 tau)^n j_n(tau) / (n+1)!`, prefactor `1 / j_0(tau)^2`.
pub fn suq2_exact_expansion(tau: f64, n_terms: usize) -> Result<ExpansionCoefficients> {
    check_args(tau, n_terms)?;
    let mut coeffs = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let j = spherical_bessel_j(n as i32, tau)?;
        coeffs.push(sign * (2.0 * tau).powi(n as i32) * j / factorial_f64(n as u32 + 1));
    }
    let j0 = spherical_bessel_j(0, tau)?;
    Ok(ExpansionCoefficients {
        model: ExpansionModel::Suq2Exact,
        tau,
        coeffs,
        prefactor: 1.0 / (j0 * j0),
    })
}

/// Small-`tau` su_q(2) series, the Taylor series of `sin^2(tau xi) / tau^2`:
/// `coeffs[n] = (-1)^n (2 tau)^{2n} / ((n+1) (2n+1)!)`.
pub fn suq2_approx_expansion(tau: f64, n_terms: usize) -> Result<ExpansionCoefficients> {
    check_args(tau, n_terms)?;
    let coeffs = (0..n_terms as u32)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * (2.0 * tau).powi(2 * n as i32) / (f64::from(n + 1) * factorial_f64(2 * n + 1))
        })
        .collect();
    Ok(ExpansionCoefficients {
        model: ExpansionModel::Suq2Approx,
        tau,
        coeffs,
        prefactor: 1.0,
    })
}

/// Exact rational multiplying `tau^{2n} (l(l+1))^{n+1}` in the small-`tau` su_q(2) series.
pub fn suq2_approx_rational(n: u32) -> BigRational {
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let num = BigInt::from(sign) * (BigInt::from(1) << (2 * n) as usize);
    let den = BigInt::from(n + 1) * bernoulli::factorial(2 * n + 1);
    BigRational::new(num, den)
}

/// Exact rational multiplying `(2 tau)^{2n} (l(l+1))^{n+1}` in the small-`tau` ITO series.
pub fn ito_approx_rational(n: u32) -> BigRational {
    tanh_squared_coefficient(n)
}

/// `sum_k sech2[n+1+k] C(n+1+k, n+1) tau^{2k}`, the inner sum shared by
/// `d_n` and `f_n`.
fn ito_inner_sum(n: usize, tau: f64) -> f64 {
    let t2 = tau * tau;
    let mut sum = 0.0;
    let mut binom = 1.0; // C(n+1+k, n+1)
    let mut power = 1.0;
    let mut last = f64::INFINITY;
    for k in 0.. {
        let j = n + 1 + k;
        if j >= bernoulli::SECH2_TERMS {
            break;
        }
        let term = bernoulli::sech2_coefficient_f64(j) * binom * power;
        sum += term;
        if k > 0 && term.abs() < 1e-17 * sum.abs() && term.abs() <= last {
            break;
        }
        last = term.abs();
        binom *= (n + 2 + k) as f64 / (k + 1) as f64;
        power *= t2;
    }
    sum
}

/// `f_n(tau)` of the ITO expansion; `f_0 = sinh(tau) / (tau cosh^3 tau)`.
pub fn ito_f(n: usize, tau: f64) -> f64 {
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    sign * (2.0 * tau).powi(n as i32) * factorial_f64(n as u32 + 1) * ito_inner_sum(n, tau)
}

/// Exact ITO (real `q`) expansion:
/// `coeffs[n] = d_n = (-1)^n (2 tau)^n f_n(tau) / (n+1)!`,
/// prefactor `tau^2 cosh^2 tau / sinh^2 tau`.
pub fn ito_exact_expansion(tau: f64, n_terms: usize) -> Result<ExpansionCoefficients> {
    check_args(tau, n_terms)?;
    let coeffs = (0..n_terms)
        .map(|n| -(2.0 * tau).powi(2 * n as i32) * ito_inner_sum(n, tau))
        .collect();
    let ratio = tau * tau.cosh() / tau.sinh();
    Ok(ExpansionCoefficients {
        model: ExpansionModel::ItoExact,
        tau,
        coeffs,
        prefactor: ratio * ratio,
    })
}

/// Small-`tau` ITO series, the Taylor series of `tanh^2(2 tau xi) / (2 tau)^2`.
pub fn ito_approx_expansion(tau: f64, n_terms: usize) -> Result<ExpansionCoefficients> {
    check_args(tau, n_terms)?;
    let coeffs = (0..n_terms as u32)
        .map(|n| bernoulli::to_f64(&ito_approx_rational(n)) * (2.0 * tau).powi(2 * n as i32))
        .collect();
    Ok(ExpansionCoefficients {
        model: ExpansionModel::ItoApprox,
        tau,
        coeffs,
        prefactor: 1.0,
    })
}

/// Sinus formula `A sin^2(tau sqrt(l(l+1))) / tau^2`.
pub fn sinus_formula(a: f64, tau: f64, ell: f64) -> f64 {
    let xi = (ell * (ell + 1.0)).sqrt();
    a * (tau * xi).sin().powi(2) / (tau * tau)
}

/// `(epsilon_0, N)` with `epsilon_0 = A / tau^2` and `tau = pi / N`.
pub fn amalsky_parameters(a: f64, tau: f64) -> (f64, f64) {
    (a / (tau * tau), std::f64::consts::PI / tau)
}

/// `epsilon_0 sin^2((pi / N) sqrt(l(l+1)))`.
pub fn amalsky_energy(epsilon0: f64, n: f64, ell: f64) -> f64 {
    let xi = (ell * (ell + 1.0)).sqrt();
    epsilon0 * (std::f64::consts::PI / n * xi).sin().powi(2)
}

/// Hyperbolic tangent formula `A tanh^2(2 tau sqrt(l(l+1))) / (2 tau)^2`.
pub fn tanh_formula(a: f64, tau: f64, ell: f64) -> f64 {
    let xi = (ell * (ell + 1.0)).sqrt();
    a * (2.0 * tau * xi).tanh().powi(2) / (2.0 * tau).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra;
    use approx::assert_relative_eq;

    #[test]
    fn bandhead_is_zero() {
        for tau in [0.01, 0.3] {
            for e in [
                suq2_exact_expansion(tau, 20).unwrap(),
                suq2_approx_expansion(tau, 20).unwrap(),
                ito_exact_expansion(tau, 20).unwrap(),
                ito_approx_expansion(tau, 20).unwrap(),
            ] {
                assert_eq!(e.evaluate(5.0, 0.0).unwrap(), 0.0);
            }
        }
        assert_eq!(sinus_formula(20.0, 0.1, 0.0), 0.0);
        assert_eq!(tanh_formula(20.0, 0.1, 0.0), 0.0);
    }

    #[test]
    fn suq2_series_matches_model_one() {
        let e = suq2_exact_expansion(0.01742, 40).unwrap();
        let series = e.evaluate(20.553, 18.0).unwrap();
        let closed = spectra::suq2_phase_energy(20.553, 0.01742, 18.0);
        assert!((series - closed).abs() < 1e-5, "{series} vs {closed}");
        assert!((closed - 6789.5).abs() < 0.15);
    }

    #[test]
    fn suq2_series_small_argument_accuracy() {
        for tau in [0.01, 0.05, 0.2, 0.5] {
            let e = suq2_exact_expansion(tau, 64).unwrap();
            let mut ell = 0.0;
            while (2.0 * ell + 1.0) * tau <= 1.0 {
                let s = e.evaluate(1.0, ell).unwrap();
                let c = spectra::suq2_phase_energy(1.0, tau, ell);
                assert!(
                    (s - c).abs() <= 1e-8 * c.abs().max(1e-300),
                    "tau={tau} l={ell}"
                );
                ell += 1.0;
            }
        }
    }

    #[test]
    fn ito_series_matches_model_two() {
        let e = ito_exact_expansion(0.00623, 40).unwrap();
        let series = e.evaluate(20.559, 18.0).unwrap();
        let closed = spectra::ito_energy(20.559, 0.00623, 18.0);
        assert!((series - closed).abs() < 1e-5, "{series} vs {closed}");
        assert!((closed - 6789.6).abs() < 0.25);
    }

    #[test]
    fn ito_series_radius() {
        let e = ito_exact_expansion(0.05, 30).unwrap();
        assert!(e.evaluate(1.0, 7.0).is_ok());
        assert!(matches!(e.evaluate(1.0, 8.0), Err(Error::Range(_))));
    }

    #[test]
    fn f0_closed_form() {
        assert_relative_eq!(ito_f(0, 0.1), 0.986_779_217_545_325_7, max_relative = 1e-14);
        for tau in [0.01f64, 0.2, 0.5] {
            let closed = tau.sinh() / (tau * tau.cosh().powi(3));
            assert_relative_eq!(ito_f(0, tau), closed, max_relative = 1e-14);
        }
    }

    #[test]
    fn f_derivative_identity() {
        // f_n = (-1)^n tau^n (1/tau d/dtau)^n f_0
        let f0 = |t: f64| t.sinh() / (t * t.cosh().powi(3));
        let tau = 0.2;
        let h = 1e-4;
        let d1 = (f0(tau + h) - f0(tau - h)) / (2.0 * h);
        let d2 = (f0(tau + h) - 2.0 * f0(tau) + f0(tau - h)) / (h * h);
        assert!((ito_f(1, tau) - (-d1)).abs() < 1e-7);
        assert!((ito_f(2, tau) - (d2 - d1 / tau)).abs() < 1e-5);
    }

    #[test]
    fn c0_resums_to_sech2() {
        for tau in [0.05f64, 0.1, 0.2, 0.3] {
            let c0: f64 = (0..30)
                .map(|k| bernoulli::sech2_coefficient_f64(k) * tau.powi(2 * k as i32))
                .sum();
            assert!((c0 - 1.0 / tau.cosh().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn approximate_series_leading_coefficients() {
        let tau = 0.01742;
        let e = suq2_approx_expansion(tau, 4).unwrap();
        let expect = [
            1.0,
            -tau.powi(2) / 3.0,
            2.0 * tau.powi(4) / 45.0,
            -tau.powi(6) / 315.0,
        ];
        for (c, x) in e.coeffs.iter().zip(expect) {
            assert_relative_eq!(*c, x, max_relative = 1e-14);
        }
        let t2 = 2.0f64 * 0.00623;
        let e = ito_approx_expansion(0.00623, 4).unwrap();
        let expect = [
            1.0,
            -2.0 / 3.0 * t2.powi(2),
            17.0 / 45.0 * t2.powi(4),
            -62.0 / 315.0 * t2.powi(6),
        ];
        for (c, x) in e.coeffs.iter().zip(expect) {
            assert_relative_eq!(*c, x, max_relative = 1e-14);
        }
    }

    #[test]
    fn exact_series_tend_to_approximate_ones() {
        // As tau -> 0 the ratio of leading coefficients approaches the printed rationals.
        let tau = 1e-3;
        let ex = suq2_exact_expansion(tau, 3).unwrap();
        assert_relative_eq!(ex.coeffs[0] * ex.prefactor, 1.0, max_relative = 1e-6);
        assert_relative_eq!(
            ex.coeffs[1] / ex.coeffs[0] / tau.powi(2),
            -1.0 / 3.0,
            max_relative = 1e-5
        );
        let ex = ito_exact_expansion(tau, 3).unwrap();
        assert_relative_eq!(ex.coeffs[0] * ex.prefactor, 1.0, max_relative = 1e-6);
        assert_relative_eq!(
            ex.coeffs[1] / ex.coeffs[0] / (2.0 * tau).powi(2),
            -2.0 / 3.0,
            max_relative = 1e-5
        );
    }

    #[test]
    fn sinus_and_tanh_examples() {
        assert!((sinus_formula(20.554, 0.01742, 2.0) - 123.25).abs() < 0.01);
        assert!((sinus_formula(20.554, 0.01742, 12.0) - 3156.1).abs() < 0.1);
        assert!((tanh_formula(20.559, 0.00623, 2.0) - 123.27).abs() < 0.01);
        let (eps0, n) = amalsky_parameters(20.554, 0.01742);
        for ell in [2.0, 8.0, 18.0] {
            assert_relative_eq!(
                amalsky_energy(eps0, n, ell),
                sinus_formula(20.554, 0.01742, ell),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn tanh_truncation_gap() {
        for ell in 0..=13 {
            let l = f64::from(ell);
            let gap =
                (spectra::ito_energy(20.559, 0.00623, l) - tanh_formula(20.559, 0.00623, l)).abs();
            assert!(gap <= 0.1, "l={ell}: {gap}");
        }
        let gap = spectra::ito_energy(20.559, 0.00623, 18.0) - tanh_formula(20.559, 0.00623, 18.0);
        assert!((gap + 0.172_346_459_836_262_5).abs() < 1e-9, "{gap}");
    }

    #[test]
    fn double_factorial_identity() {
        // 2^n (n+1)! (2n+1)!! = (n+1) (2n+1)!
        for n in 0..=15u32 {
            let dfact: BigInt =
                (0..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(2 * k + 1));
            let lhs = (BigInt::from(1) << n as usize) * bernoulli::factorial(n + 1) * dfact;
            let rhs = BigInt::from(n + 1) * bernoulli::factorial(2 * n + 1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bessel_generating_function() {
        let (x, t) = (0.3f64, 0.1f64);
        let lhs = (x * x - 2.0 * x * t).sqrt().cos() / x;
        let mut rhs = 0.0;
        let mut tn_over_fact = 1.0;
        for n in 0..25 {
            rhs += spherical_bessel_j(n - 1, x).unwrap() * tn_over_fact;
            tn_over_fact *= t / f64::from(n + 1);
        }
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn argument_checks() {
        assert!(suq2_exact_expansion(0.0, 10).is_err());
        assert!(suq2_exact_expansion(0.6, 10).is_err());
        assert!(ito_exact_expansion(0.1, 0).is_err());
        assert!(ito_exact_expansion(0.1, 65).is_err());
    }

    #[test]
    fn csv_layout() {
        let e = ito_approx_expansion(0.1, 3).unwrap();
        let csv = e.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "n,coefficient");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,"));
    }
}
