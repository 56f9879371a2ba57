//! Band reduction from R/P line lists, the sigma quality measure, and
//! least-squares fits of the six rotational models.

use std::collections::BTreeMap;
use std::fmt;

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::brent::BrentOpt;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::spectra::{energy, ModelKind, ModelParams};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    R,
    P,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::R => "R",
            Branch::P => "P",
        })
    }
}

/// One rovibrational line, labelled by the lower-state `l`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchLine {
    branch: Branch,
    ell: u32,
    wavenumber: f64,
}

impl BranchLine {
    pub fn new(branch: Branch, ell: u32, wavenumber: f64) -> Result<Self> {
        if !(wavenumber.is_finite() && wavenumber > 0.0) {
            return Err(Error::data(format!(
                "{branch}({ell}) wavenumber must be positive, got {wavenumber}"
            )));
        }
        if branch == Branch::P && ell == 0 {
            return Err(Error::data("P branch starts at l = 1"));
        }
        Ok(BranchLine {
            branch,
            ell,
            wavenumber,
        })
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }
}

/// Which vibrational level the combination differences probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Band {
    /// Lower level: `R(l) - P(l+2) = E(l+2) - E(l)`.
    V0,
    /// Upper level: `R(l) - P(l) = E(l+1) - E(l-1)`.
    V1,
}

impl Band {
    pub fn label(self) -> &'static str {
        match self {
            Band::V0 => "v=0",
            Band::V1 => "v=1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub ell: u32,
    pub energy: f64,
}

/// Rotational levels of one band, zeroed at `l = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDataset {
    pub band: String,
    pub levels: Vec<Level>,
}

impl LevelDataset {
    pub fn new(band: impl Into<String>, levels: Vec<Level>) -> Result<Self> {
        for w in levels.windows(2) {
            if w[1].ell <= w[0].ell {
                return Err(Error::data(format!(
                    "levels must have increasing l ({} then {})",
                    w[0].ell, w[1].ell
                )));
            }
            if w[1].energy <= w[0].energy {
                return Err(Error::data(format!(
                    "level energies must increase (l = {}: {}, l = {}: {})",
                    w[0].ell, w[0].energy, w[1].ell, w[1].energy
                )));
            }
        }
        Ok(LevelDataset {
            band: band.into(),
            levels,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn ell_max(&self) -> Option<u32> {
        self.levels.last().map(|l| l.ell)
    }

    pub fn ells(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.ell).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Every energy multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let levels = self
            .levels
            .iter()
            .map(|l| Level {
                ell: l.ell,
                energy: l.energy * s,
            })
            .collect();
        LevelDataset {
            band: self.band.clone(),
            levels,
        }
    }
}

/// Chain combination differences into absolute level energies, starting
/// from `E(0) = 0`. Lines of the other parity are ignored, as are unpaired
/// lines above the last complete pair.
pub fn reduce_branches(lines: &[BranchLine], band: Band) -> Result<LevelDataset> {
    let mut r = BTreeMap::new();
    let mut p = BTreeMap::new();
    for line in lines {
        let map = if line.branch == Branch::R {
            &mut r
        } else {
            &mut p
        };
        if map.insert(line.ell, line.wavenumber).is_some() {
            return Err(Error::data(format!(
                "duplicate line {}({})",
                line.branch, line.ell
            )));
        }
    }
    // pair k links E(2k) to E(2k + 2)
    let pair = |k: u32| match band {
        Band::V0 => (2 * k, 2 * k + 2),
        Band::V1 => (2 * k + 1, 2 * k + 1),
    };
    let k_of_r = |l: u32| match band {
        Band::V0 => l.is_multiple_of(2).then_some(l / 2),
        Band::V1 => (l % 2 == 1).then_some(l / 2),
    };
    let k_of_p = |l: u32| match band {
        Band::V0 => (l.is_multiple_of(2) && l >= 2).then(|| l / 2 - 1),
        Band::V1 => (l % 2 == 1).then_some(l / 2),
    };
    let k_max = r
        .keys()
        .filter_map(|&l| k_of_r(l))
        .chain(p.keys().filter_map(|&l| k_of_p(l)))
        .max();
    let mut levels = Vec::new();
    let Some(k_max) = k_max else {
        return LevelDataset::new(band.label(), levels);
    };
    let mut e = 0.0;
    let mut gap: Option<String> = None;
    for k in 0..=k_max {
        let (lr, lp) = pair(k);
        match (r.get(&lr), p.get(&lp)) {
            (Some(&rv), Some(&pv)) => {
                if let Some(gap) = gap {
                    return Err(Error::data(format!(
                        "missing line {gap} needed before R({lr})/P({lp})"
                    )));
                }
                let spacing = rv - pv;
                if spacing.is_nan() || spacing <= 0.0 {
                    return Err(Error::data(format!(
                        "non-positive spacing R({lr}) - P({lp}) = {spacing}"
                    )));
                }
                e += spacing;
                levels.push(Level {
                    ell: 2 * k + 2,
                    energy: e,
                });
            }
            (Some(_), None) => {
                gap.get_or_insert(format!("P({lp})"));
            }
            (None, Some(_)) => {
                gap.get_or_insert(format!("R({lr})"));
            }
            (None, None) => {
                gap.get_or_insert(format!("R({lr}), P({lp})"));
            }
        }
    }
    LevelDataset::new(band.label(), levels)
}

/// R and P lines for `l = 0..=ell_top` of a band with origin `nu0`, lower
/// level energies `lower` and upper level energies `upper`.
pub fn synthesize_branches(
    nu0: f64,
    lower: impl Fn(u32) -> Result<f64>,
    upper: impl Fn(u32) -> Result<f64>,
    ell_top: u32,
) -> Result<Vec<BranchLine>> {
    let mut lines = Vec::new();
    for l in 0..=ell_top {
        let el = lower(l)?;
        lines.push(BranchLine::new(Branch::R, l, nu0 + upper(l + 1)? - el)?);
        if l >= 1 {
            lines.push(BranchLine::new(Branch::P, l, nu0 + upper(l - 1)? - el)?);
        }
    }
    Ok(lines)
}

/// `sqrt((2 / l_max) sum (E_exp - E_th)^2)` over the levels of `data`.
pub fn quality_sigma(data: &LevelDataset, model_energies: &[f64]) -> Result<f64> {
    if data.levels.len() != model_energies.len() {
        return Err(Error::domain(format!(
            "{} levels but {} model energies",
            data.levels.len(),
            model_energies.len()
        )));
    }
    let ell_max = match data.ell_max() {
        None | Some(0) => return Err(Error::domain("sigma needs at least one level above l = 0")),
        Some(l) => l,
    };
    let ssr: f64 = data
        .levels
        .iter()
        .zip(model_energies)
        .map(|(l, e)| (l.energy - e).powi(2))
        .sum();
    Ok((2.0 / f64::from(ell_max) * ssr).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub ell: u32,
    pub energy_exp: f64,
    pub energy_th: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(rename = "model")]
    pub kind: ModelKind,
    pub params: ModelParams,
    pub sigma_cm1: f64,
    pub residuals: Vec<ResidualPoint>,
    pub iterations: u64,
    pub converged: bool,
}

impl FitResult {
    /// Pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit results serialize")
    }

    /// Residual table as CSV `ell,energy_exp,energy_th,residual`.
    pub fn residuals_csv(&self) -> String {
        let mut out = String::from("ell,energy_exp,energy_th,residual\n");
        for r in &self.residuals {
            out.push_str(&format!(
                "{},{},{:.10},{:.10}\n",
                r.ell, r.energy_exp, r.energy_th, r.residual
            ));
        }
        out
    }
}

const GRID_POINTS: usize = 161;
const SHAPE_LO: f64 = 1e-4;
const SHAPE_HI: f64 = 2e-1;
const PARAM_TOL: f64 = 1e-10;
const MAX_ITERS: u64 = 500;

/// Sum of squared residuals with the linear scale projected out.
struct Profile<'a> {
    kind: ModelKind,
    ells: &'a [u32],
    energies: &'a [f64],
}

impl Profile<'_> {
    /// Best scale and residual sum of squares for shape parameter `s`.
    fn solve(&self, s: f64) -> Result<(f64, f64)> {
        let unit = ModelParams::for_kind(self.kind, 1.0, s);
        let g = self
            .ells
            .iter()
            .map(|&l| energy(self.kind, &unit, l))
            .collect::<Result<Vec<_>>>()?;
        let gg: f64 = g.iter().map(|x| x * x).sum();
        let eg: f64 = g.iter().zip(self.energies).map(|(x, e)| x * e).sum();
        if gg.is_nan() || gg <= 0.0 {
            return Ok((0.0, f64::INFINITY));
        }
        let a = eg / gg;
        let ssr = g
            .iter()
            .zip(self.energies)
            .map(|(x, e)| (e - a * x).powi(2))
            .sum();
        Ok((a, ssr))
    }
}

impl CostFunction for Profile<'_> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, s: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.solve(*s).map_or(
            f64::INFINITY,
            |(a, ssr)| if a > 0.0 { ssr } else { f64::INFINITY },
        ))
    }
}

struct Refined {
    shape: f64,
    cost: f64,
    iterations: u64,
    converged: bool,
}

fn refine(profile: &Profile<'_>, lo: f64, hi: f64) -> Result<Refined> {
    let solver = BrentOpt::new(lo, hi).set_tolerance(PARAM_TOL, 1e-15);
    let res = Executor::new(Profile { ..*profile }, solver)
        .configure(|s| s.max_iters(MAX_ITERS))
        .run()
        .map_err(|e| Error::domain(format!("optimizer failed: {e}")))?;
    let state = res.state();
    let converged = matches!(
        state.get_termination_status(),
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    Ok(Refined {
        shape: *state.get_best_param().unwrap_or(&lo),
        cost: state.get_best_cost(),
        iterations: state.get_iter(),
        converged,
    })
}

/// Least-squares fit of `kind` to `data`.
///
/// The scale (A or a) enters linearly and is eliminated in closed form; the
/// shape parameter (tau or b) is scanned on a fixed logarithmic grid and every
/// local minimum of the grid is polished with Brent's method. Model III is
/// linear in both parameters and is solved directly.
pub fn fit(kind: ModelKind, data: &LevelDataset) -> Result<FitResult> {
    if data.levels.len() < 3 {
        return Err(Error::domain(format!(
            "fitting needs at least 3 levels, got {}",
            data.levels.len()
        )));
    }
    let ells = data.ells();
    let energies = data.energies();
    let (params, iterations, converged) = if kind == ModelKind::III {
        (fit_linear(&ells, &energies)?, 0, true)
    } else {
        let profile = Profile {
            kind,
            ells: &ells,
            energies: &energies,
        };
        let ratio = (SHAPE_HI / SHAPE_LO).powf(1.0 / (GRID_POINTS - 1) as f64);
        let grid: Vec<f64> = (0..GRID_POINTS)
            .map(|i| SHAPE_LO * ratio.powi(i as i32))
            .collect();
        let costs: Vec<f64> = grid
            .iter()
            .map(|s| profile.cost(s).unwrap_or(f64::INFINITY))
            .collect();
        let mut best: Option<(Refined, usize)> = None;
        for i in 0..GRID_POINTS {
            let left = if i == 0 { f64::INFINITY } else { costs[i - 1] };
            let right = if i + 1 == GRID_POINTS {
                f64::INFINITY
            } else {
                costs[i + 1]
            };
            if !(costs[i].is_finite() && costs[i] <= left && costs[i] <= right) {
                continue;
            }
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(GRID_POINTS - 1)];
            let mut r = refine(&profile, lo, hi)?;
            if costs[i] < r.cost {
                r.shape = grid[i];
                r.cost = costs[i];
            }
            if best.as_ref().is_none_or(|(b, _)| r.cost < b.cost) {
                best = Some((r, i));
            }
        }
        let Some((r, i)) = best else {
            return Err(Error::domain(format!(
                "model {kind} has no finite least-squares cost on the grid"
            )));
        };
        let at_edge = i == 0 || i + 1 == GRID_POINTS;
        let (a, _) = profile.solve(r.shape)?;
        (
            ModelParams::for_kind(kind, a, r.shape),
            r.iterations,
            r.converged && !at_edge,
        )
    };
    let mut residuals = Vec::with_capacity(ells.len());
    let mut th = Vec::with_capacity(ells.len());
    for lvl in &data.levels {
        let e = energy(kind, &params, lvl.ell)?;
        th.push(e);
        residuals.push(ResidualPoint {
            ell: lvl.ell,
            energy_exp: lvl.energy,
            energy_th: e,
            residual: lvl.energy - e,
        });
    }
    let sigma_cm1 = quality_sigma(data, &th)?;
    Ok(FitResult {
        kind,
        params,
        sigma_cm1,
        residuals,
        iterations,
        converged,
    })
}

/// `E = A x + B x^2` by QR least squares.
fn fit_linear(ells: &[u32], energies: &[f64]) -> Result<ModelParams> {
    let n = ells.len();
    let design = DMatrix::from_fn(n, 2, |i, j| {
        let l = f64::from(ells[i]);
        let x = l * (l + 1.0);
        if j == 0 {
            x
        } else {
            x * x
        }
    });
    let rhs = DVector::from_column_slice(energies);
    let qr = design.qr();
    let qtb = qr.q().transpose() * rhs;
    let sol = qr
        .r()
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::domain("Model III design matrix is singular"))?;
    Ok(ModelParams::expansion(sol[0], sol[1]))
}

/// Fitted parameters with the shape parameter scaled by a power of ten, and sigma.
pub fn parameter_report(results: &[FitResult]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<6}{:>14}{:>16}{:>10}{:>11}\n",
        "model", "A or a", "shape", "sigma", "converged"
    ));
    for r in results {
        let (p0, p1) = r.params.values();
        let shape = match r.kind {
            ModelKind::III => format!("10^2 B = {:.3}", 100.0 * p1),
            ModelKind::IV => format!("10^3 b = {:.3}", 1000.0 * p1),
            _ => format!("10^2 t = {:.3}", 100.0 * p1),
        };
        let scale = if r.kind == ModelKind::IV {
            format!("{p0:.0}")
        } else {
            format!("{p0:.3}")
        };
        out.push_str(&format!(
            "{:<6}{:>14}{:>16}{:>10.3}{:>11}\n",
            r.kind.label(),
            scale,
            shape,
            r.sigma_cm1,
            if r.converged { "yes" } else { "no" }
        ));
    }
    out
}
