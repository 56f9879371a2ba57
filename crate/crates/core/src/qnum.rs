//! q-numbers `[x] = (q^x - q^-x) / (q - q^-1)` and the deformation parameter.
//!
//! Three regimes are supported: the classical point `q = 1`, real `q = e^tau`
//! (hyperbolic q-numbers) and a phase `q = e^{i tau}` (trigonometric
//! q-numbers). `tau = 0` is only reachable through [`Regime::Classical`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Highest angular momentum covered by the root-of-unity guard when the
/// caller does not declare one.
pub const DEFAULT_ELL_MAX: u32 = 64;

/// Closest approach of `n tau` to a multiple of `2 pi` that still counts as
/// "not a root of unity".
const ROOT_OF_UNITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Classical,
    Real,
    Phase,
}

/// Deformation parameter `q`, stored as its regime and `tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationParameter {
    regime: Regime,
    tau: f64,
    ell_max: u32,
}

impl DeformationParameter {
    pub fn classical() -> Self {
        Self {
            regime: Regime::Classical,
            tau: 0.0,
            ell_max: u32::MAX,
        }
    }

    /// `q = e^tau`. Negative `tau` is allowed and describes `q < 1`.
    pub fn real(tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau == 0.0 {
            return Err(Error::domain(format!(
                "real deformation needs finite non-zero tau, got {tau}"
            )));
        }
        Ok(Self {
            regime: Regime::Real,
            tau,
            ell_max: u32::MAX,
        })
    }

    /// `q = e^{i tau}` with the guard sized for irreps up to [`DEFAULT_ELL_MAX`].
    pub fn phase(tau: f64) -> Result<Self> {
        Self::phase_with_ell_max(tau, DEFAULT_ELL_MAX)
    }

    /// `q = e^{i tau}`, rejecting `tau` for which `q^n = 1` with
    /// `n <= 4 ell_max + 4`.
    pub fn phase_with_ell_max(tau: f64, ell_max: u32) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0 && tau < PI) {
            return Err(Error::domain(format!(
                "phase deformation needs tau in (0, pi), got {tau}"
            )));
        }
        let n_max = 4 * u64::from(ell_max) + 4;
        for n in 1..=n_max {
            let r = (n as f64 * tau).rem_euclid(TAU);
            if r.min(TAU - r) < ROOT_OF_UNITY_TOL {
                return Err(Error::domain(format!(
                    "q = exp(i*{tau}) is a root of unity: q^{n} = 1"
                )));
            }
        }
        Ok(Self {
            regime: Regime::Phase,
            tau,
            ell_max,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Largest `l` the root-of-unity guard was checked for.
    pub fn ell_max(&self) -> u32 {
        self.ell_max
    }

    pub fn is_classical(&self) -> bool {
        self.regime == Regime::Classical
    }

    /// `q -> 1/q`. Only meaningful where `q` is real.
    pub fn inverse(&self) -> Result<Self> {
        match self.regime {
            Regime::Classical => Ok(*self),
            Regime::Real => Self::real(-self.tau),
            Regime::Phase => Err(Error::UnsupportedRegime(
                "inverse deformation is only provided for real q".into(),
            )),
        }
    }

    /// Errors when an irrep of spin `two_ell / 2` lies outside the declared guard range.
    pub fn check_spin(&self, two_ell: u32) -> Result<()> {
        if self.regime == Regime::Phase && u64::from(two_ell) > 2 * u64::from(self.ell_max) {
            return Err(Error::domain(format!(
                "spin {}/2 exceeds the declared ell_max = {} of the root-of-unity guard",
                two_ell, self.ell_max
            )));
        }
        Ok(())
    }

    /// `[x]` without argument checks.
    #[inline]
    pub fn bracket(&self, x: f64) -> f64 {
        match self.regime {
            Regime::Classical => x,
            Regime::Real => (self.tau * x).sinh() / self.tau.sinh(),
            Regime::Phase => (self.tau * x).sin() / self.tau.sin(),
        }
    }

    /// `[x]_{q^2}`, the q-number with `tau` doubled.
    #[inline]
    pub fn bracket_q2(&self, x: f64) -> f64 {
        let t = 2.0 * self.tau;
        match self.regime {
            Regime::Classical => x,
            Regime::Real => (t * x).sinh() / t.sinh(),
            Regime::Phase => (t * x).sin() / t.sin(),
        }
    }

    /// `q^s` as a complex number.
    pub fn q_pow(&self, s: f64) -> Complex64 {
        match self.regime {
            Regime::Classical => Complex64::new(1.0, 0.0),
            Regime::Real => Complex64::new((self.tau * s).exp(), 0.0),
            Regime::Phase => Complex64::from_polar(1.0, self.tau * s),
        }
    }
}

impl Default for DeformationParameter {
    fn default() -> Self {
        Self::classical()
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "q-number argument must be finite, got {x}"
        )))
    }
}

/// `[x]`: `sinh(tau x)/sinh(tau)`, `sin(tau x)/sin(tau)` or `x`.
pub fn q_number(x: f64, p: &DeformationParameter) -> Result<f64> {
    check_finite(x)?;
    Ok(p.bracket(x))
}

/// `[x]_{q^2} = (q^{2x} - q^{-2x}) / (q^2 - q^{-2})`.
pub fn q_number_base_q2(x: f64, p: &DeformationParameter) -> Result<f64> {
    check_finite(x)?;
    Ok(p.bracket_q2(x))
}

/// `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
pub fn q_factorial(n: i64, p: &DeformationParameter) -> Result<f64> {
    if n < 0 {
        return Err(Error::domain(format!("q-factorial of negative n = {n}")));
    }
    Ok((1..=n).map(|k| p.bracket(k as f64)).product())
}
