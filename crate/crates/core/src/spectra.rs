//! Closed-form rotational energies for the six comparison models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::series::{sinus_formula, tanh_formula};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    I,
    Iprime,
    II,
    IIprime,
    III,
    IV,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::I,
        ModelKind::Iprime,
        ModelKind::II,
        ModelKind::IIprime,
        ModelKind::III,
        ModelKind::IV,
    ];

    /// Short name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            ModelKind::I => "I",
            ModelKind::Iprime => "Ip",
            ModelKind::II => "II",
            ModelKind::IIprime => "IIp",
            ModelKind::III => "III",
            ModelKind::IV => "IV",
        }
    }

    /// Label used in printed tables.
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::I => "I",
            ModelKind::Iprime => "I'",
            ModelKind::II => "II",
            ModelKind::IIprime => "II'",
            ModelKind::III => "III",
            ModelKind::IV => "IV",
        }
    }

    pub fn is_deformed(self) -> bool {
        matches!(
            self,
            ModelKind::I | ModelKind::Iprime | ModelKind::II | ModelKind::IIprime
        )
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "I" => ModelKind::I,
            "Ip" | "I'" | "Iprime" => ModelKind::Iprime,
            "II" => ModelKind::II,
            "IIp" | "II'" | "IIprime" => ModelKind::IIprime,
            "III" => ModelKind::III,
            "IV" => ModelKind::IV,
            other => return Err(Error::domain(format!("unknown model '{other}'"))),
        })
    }
}

/// Two free parameters per model. `c` and `d` would be the higher terms
/// of the rotational expansion; they are always zero here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelParams {
    Deformed {
        a: f64,
        tau: f64,
    },
    Expansion {
        a: f64,
        b: f64,
        #[serde(default, skip_serializing)]
        c: f64,
        #[serde(default, skip_serializing)]
        d: f64,
    },
    HolmbergLipas {
        a: f64,
        b: f64,
    },
}

impl ModelParams {
    pub fn deformed(a: f64, tau: f64) -> Self {
        ModelParams::Deformed { a, tau }
    }

    pub fn expansion(a: f64, b: f64) -> Self {
        ModelParams::Expansion {
            a,
            b,
            c: 0.0,
            d: 0.0,
        }
    }

    pub fn holmberg_lipas(a: f64, b: f64) -> Self {
        ModelParams::HolmbergLipas { a, b }
    }

    /// Build the parameter set for `kind` from its two values in natural order.
    pub fn for_kind(kind: ModelKind, p0: f64, p1: f64) -> Self {
        match kind {
            ModelKind::III => Self::expansion(p0, p1),
            ModelKind::IV => Self::holmberg_lipas(p0, p1),
            _ => Self::deformed(p0, p1),
        }
    }

    /// The two free parameters in natural order.
    pub fn values(&self) -> (f64, f64) {
        match *self {
            ModelParams::Deformed { a, tau } => (a, tau),
            ModelParams::Expansion { a, b, .. } => (a, b),
            ModelParams::HolmbergLipas { a, b } => (a, b),
        }
    }

    /// Overall linear scale (A or a).
    pub fn scale(&self) -> f64 {
        self.values().0
    }

    fn check(&self, kind: ModelKind) -> Result<()> {
        let ok_family = matches!(
            (kind.is_deformed(), kind, self),
            (true, _, ModelParams::Deformed { .. })
                | (false, ModelKind::III, ModelParams::Expansion { .. })
                | (false, ModelKind::IV, ModelParams::HolmbergLipas { .. })
        );
        if !ok_family {
            return Err(Error::domain(format!(
                "parameters {self:?} do not belong to model {kind}"
            )));
        }
        let (p0, p1) = self.values();
        if !(p0.is_finite() && p1.is_finite()) {
            return Err(Error::domain("model parameters must be finite"));
        }
        match *self {
            ModelParams::Deformed { a, tau } if a <= 0.0 || tau <= 0.0 => Err(Error::domain(
                format!("deformed models need A > 0 and tau > 0, got A = {a}, tau = {tau}"),
            )),
            ModelParams::Expansion { a, .. } if a <= 0.0 => {
                Err(Error::domain(format!("A must be positive, got {a}")))
            }
            ModelParams::HolmbergLipas { a, .. } if a <= 0.0 => {
                Err(Error::domain(format!("a must be positive, got {a}")))
            }
            _ => Ok(()),
        }
    }
}

/// `A sin(l tau) sin((l+1) tau) / sin^2 tau`.
pub fn suq2_phase_energy(a: f64, tau: f64, ell: f64) -> f64 {
    a * (ell * tau).sin() * ((ell + 1.0) * tau).sin() / tau.sin().powi(2)
}

/// `A / (4 sinh^2 tau) (1 - cosh^2 tau / cosh^2((2l+1) tau))`.
pub fn ito_energy(a: f64, tau: f64, ell: f64) -> f64 {
    // 1 - c^2/C^2 = (C - c)(C + c) / C^2, and C - c = 2 sinh((l+1)tau) sinh(l tau)
    let big = ((2.0 * ell + 1.0) * tau).cosh();
    let small = tau.cosh();
    let diff = 2.0 * ((ell + 1.0) * tau).sinh() * (ell * tau).sinh();
    a * diff * (big + small) / (big * big * 4.0 * tau.sinh().powi(2))
}

/// Energy of level `ell` in model `kind`; zero at the bandhead.
pub fn energy(kind: ModelKind, params: &ModelParams, ell: u32) -> Result<f64> {
    energy_at(kind, params, f64::from(ell))
}

pub(crate) fn energy_at(kind: ModelKind, params: &ModelParams, ell: f64) -> Result<f64> {
    params.check(kind)?;
    let x = ell * (ell + 1.0);
    let e = match (kind, *params) {
        (ModelKind::I, ModelParams::Deformed { a, tau }) => suq2_phase_energy(a, tau, ell),
        (ModelKind::Iprime, ModelParams::Deformed { a, tau }) => sinus_formula(a, tau, ell),
        (ModelKind::II, ModelParams::Deformed { a, tau }) => ito_energy(a, tau, ell),
        (ModelKind::IIprime, ModelParams::Deformed { a, tau }) => tanh_formula(a, tau, ell),
        (ModelKind::III, ModelParams::Expansion { a, b, .. }) => a * x + b * x * x,
        (ModelKind::IV, ModelParams::HolmbergLipas { a, b }) => {
            let arg = 1.0 + b * x;
            if arg < 0.0 {
                return Err(Error::domain(format!(
                    "1 + b l(l+1) = {arg} is negative at l = {ell}"
                )));
            }
            a * (arg.sqrt() - 1.0)
        }
        _ => unreachable!("checked above"),
    };
    Ok(e)
}

pub fn spectrum_table(
    kind: ModelKind,
    params: &ModelParams,
    ells: &[u32],
) -> Result<Vec<(u32, f64)>> {
    ells.iter()
        .map(|&l| Ok((l, energy(kind, params, l)?)))
        .collect()
}
