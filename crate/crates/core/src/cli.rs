//! Command-line front end of the `qrotor` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 non-convergence.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{commutator_residuals, expects_non_commuting, ResidualReport, SpinLabel};
use crate::data;
use crate::fitting::{self, Band, FitResult, LevelDataset};
use crate::ito::ito_residuals;
use crate::qnum::DeformationParameter;
use crate::series;
use crate::spectra::{self, ModelKind, ModelParams};
use crate::{Error, Regime};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Largest identity residual `verify` accepts.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Smallest magnitude a mandated non-commutator may have.
pub const NON_COMMUTING_FLOOR: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "qrotor", version, about = "q-deformed rotational spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check commutation relations and tensor-operator identities numerically.
    Verify {
        #[arg(long)]
        ell_max: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        tau: Vec<f64>,
        #[arg(long, value_enum, default_value_t = RegimeArg::Real)]
        regime: RegimeArg,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print model energies as CSV (or JSON).
    Spectrum {
        #[arg(long)]
        model: ModelKind,
        #[arg(long = "A")]
        big_a: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long = "B", allow_negative_numbers = true)]
        big_b: Option<f64>,
        #[arg(long = "a")]
        small_a: Option<f64>,
        #[arg(long = "b", allow_negative_numbers = true)]
        small_b: Option<f64>,
        /// `start:stop:step` or a comma list.
        #[arg(long, default_value = "0:18:1")]
        ells: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the power-series coefficients of a deformed spectrum.
    Expand {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        terms: usize,
        /// Small-tau series instead of the exact one.
        #[arg(long)]
        approx: bool,
    },
    /// Reduce an R/P line list to band levels.
    Ingest {
        #[arg(long)]
        branches: PathBuf,
        #[arg(long, value_enum)]
        band: BandArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-squares fit of one model, or all six.
    Fit {
        /// Level CSV; the bundled HF band when omitted.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        model: String,
        /// JSON output file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Residual CSV output file.
        #[arg(long)]
        residuals: Option<PathBuf>,
    },
    /// Level table of all fitted models next to the data.
    Report {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Real,
    Phase,
    Classical,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Suq2,
    Ito,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BandArg {
    V0,
    V1,
}

enum Failure {
    /// Output closed by the reader, e.g. a pipe into `head`.
    BrokenPipe,
    Input(String),
    Verify(String),
    NotConverged(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::BrokenPipe
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Run with the process arguments and standard streams.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parse `args` (including the program name) and execute; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let res = match cli.command {
        Command::Verify {
            ell_max,
            tau,
            regime,
            out: path,
        } => verify(ell_max, &tau, regime, path.as_deref(), out),
        Command::Spectrum {
            model,
            big_a,
            tau,
            big_b,
            small_a,
            small_b,
            ells,
            json,
        } => spectrum(
            model,
            [big_a, tau, big_b, small_a, small_b],
            &ells,
            json,
            out,
        ),
        Command::Expand {
            family,
            tau,
            terms,
            approx,
        } => expand(family, tau, terms, approx, out),
        Command::Ingest {
            branches,
            band,
            out: path,
        } => ingest(&branches, band, path.as_deref(), out),
        Command::Fit {
            data,
            model,
            out: path,
            residuals,
        } => fit(
            data.as_deref(),
            &model,
            path.as_deref(),
            residuals.as_deref(),
            out,
        ),
        Command::Report { data, csv } => report(data.as_deref(), csv, out),
    };
    match res {
        Ok(()) | Err(Failure::BrokenPipe) => EXIT_OK,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Verify(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            EXIT_VERIFY
        }
        Err(Failure::NotConverged(m)) => {
            let _ = writeln!(err, "not converged: {m}");
            EXIT_NOT_CONVERGED
        }
    }
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    std::fs::write(path, contents).map_err(|source| {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
        .into()
    })
}

fn load_levels(path: Option<&Path>) -> std::result::Result<LevelDataset, Failure> {
    Ok(match path {
        Some(p) => data::read_levels(p, "v=0")?,
        None => data::bundled_hf_levels()?,
    })
}

#[derive(Serialize)]
struct VerifyCase {
    regime: Regime,
    tau: f64,
    two_ell: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
    identities: std::collections::BTreeMap<String, f64>,
    non_commuting: std::collections::BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct VerifyReport {
    identity_tolerance: f64,
    non_commuting_floor: f64,
    passed: bool,
    failures: Vec<String>,
    cases: Vec<VerifyCase>,
}

fn verify(
    ell_max: u32,
    taus: &[f64],
    regime: RegimeArg,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    if ell_max > crate::qnum::DEFAULT_ELL_MAX {
        return Err(Failure::Input(format!(
            "--ell-max must be at most {}",
            crate::qnum::DEFAULT_ELL_MAX
        )));
    }
    let params = taus
        .iter()
        .map(|&t| match regime {
            RegimeArg::Real => DeformationParameter::real(t),
            RegimeArg::Phase => DeformationParameter::phase_with_ell_max(t, ell_max),
            RegimeArg::Classical => Ok(DeformationParameter::classical()),
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for p in &params {
        for two_ell in 0..=2 * ell_max {
            let spin = SpinLabel::from_two_ell(two_ell);
            let mut case = VerifyCase {
                regime: p.regime(),
                tau: p.tau(),
                two_ell,
                skipped: None,
                identities: Default::default(),
                non_commuting: Default::default(),
            };
            let report = match checks(spin, p) {
                Ok(r) => r,
                Err(Error::Domain(m)) if p.regime() == Regime::Phase => {
                    case.skipped = Some(m);
                    cases.push(case);
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let tag = format!("{:?} tau={} 2l={two_ell}", p.regime(), p.tau());
            for (name, v) in report.violations(IDENTITY_TOL) {
                failures.push(format!("{tag}: {name} residual {v:e}"));
            }
            if expects_non_commuting(spin, p) {
                for (name, v) in &report.non_commuting {
                    if v.is_nan() || *v <= NON_COMMUTING_FLOOR {
                        failures.push(format!("{tag}: {name} = {v:e} should not vanish"));
                    }
                }
            }
            case.identities = report.identities;
            case.non_commuting = report.non_commuting;
            cases.push(case);
        }
    }
    let rep = VerifyReport {
        identity_tolerance: IDENTITY_TOL,
        non_commuting_floor: NON_COMMUTING_FLOOR,
        passed: failures.is_empty(),
        failures: failures.clone(),
        cases,
    };
    let json =
        serde_json::to_string_pretty(&rep).map_err(|e| Failure::Input(e.to_string()))? + "\n";
    out.write_all(json.as_bytes())?;
    if let Some(path) = path {
        write_file(path, &json)?;
    }
    match failures.first() {
        None => Ok(()),
        Some(first) => Err(Failure::Verify(format!(
            "{first} ({} failures)",
            failures.len()
        ))),
    }
}

fn checks(spin: SpinLabel, p: &DeformationParameter) -> crate::Result<ResidualReport> {
    let mut rep = commutator_residuals(spin, p)?;
    if p.regime() != Regime::Phase {
        rep.merge(ito_residuals(spin, p)?);
    }
    Ok(rep)
}

/// `a:b:step` (inclusive) or `l1,l2,...`.
fn parse_ells(s: &str) -> std::result::Result<Vec<u32>, Failure> {
    let bad = || Failure::Input(format!("cannot parse --ells '{s}'"));
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<u32> = s
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let (start, stop, step) = match parts.as_slice() {
            [a, b] => (*a, *b, 1),
            [a, b, c] if *c > 0 => (*a, *b, *c),
            _ => return Err(bad()),
        };
        return Ok((start..=stop).step_by(step as usize).collect());
    }
    let ells: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if ells.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Input("--ells must be increasing".into()));
    }
    Ok(ells)
}

fn spectrum(
    kind: ModelKind,
    args: [Option<f64>; 5],
    ells: &str,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let [big_a, tau, big_b, small_a, small_b] = args;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Failure::Input(format!("model {kind} needs --{name}")))
    };
    let params = match kind {
        ModelKind::III => ModelParams::expansion(need(big_a, "A")?, need(big_b, "B")?),
        ModelKind::IV => ModelParams::holmberg_lipas(need(small_a, "a")?, need(small_b, "b")?),
        _ => ModelParams::deformed(need(big_a, "A")?, need(tau, "tau")?),
    };
    let table = spectra::spectrum_table(kind, &params, &parse_ells(ells)?)?;
    if json {
        #[derive(Serialize)]
        struct Row {
            ell: u32,
            energy_cm1: f64,
        }
        #[derive(Serialize)]
        struct Doc {
            model: ModelKind,
            params: ModelParams,
            levels: Vec<Row>,
        }
        let doc = Doc {
            model: kind,
            params,
            levels: table
                .into_iter()
                .map(|(ell, energy_cm1)| Row { ell, energy_cm1 })
                .collect(),
        };
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Input(e.to_string()))?;
        writeln!(out, "{text}")?;
    } else {
        writeln!(out, "ell,energy_cm1")?;
        for (l, e) in table {
            writeln!(out, "{l},{e}")?;
        }
    }
    Ok(())
}

fn expand(family: Family, tau: f64, terms: usize, approx: bool, out: &mut dyn Write) -> CmdResult {
    let e = match (family, approx) {
        (Family::Suq2, false) => series::suq2_exact_expansion(tau, terms)?,
        (Family::Suq2, true) => series::suq2_approx_expansion(tau, terms)?,
        (Family::Ito, false) => series::ito_exact_expansion(tau, terms)?,
        (Family::Ito, true) => series::ito_approx_expansion(tau, terms)?,
    };
    out.write_all(e.to_csv().as_bytes())?;
    Ok(())
}

fn ingest(branches: &Path, band: BandArg, path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let lines = data::read_branches(branches)?;
    let band = match band {
        BandArg::V0 => Band::V0,
        BandArg::V1 => Band::V1,
    };
    let levels = fitting::reduce_branches(&lines, band)?;
    let csv = data::levels_to_csv(&levels);
    match path {
        Some(p) => write_file(p, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn parse_models(s: &str) -> std::result::Result<Vec<ModelKind>, Failure> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(ModelKind::ALL.to_vec());
    }
    Ok(vec![s.parse::<ModelKind>()?])
}

fn fit_all(
    data: &LevelDataset,
    kinds: &[ModelKind],
) -> std::result::Result<Vec<FitResult>, Failure> {
    Ok(kinds
        .iter()
        .map(|&k| fitting::fit(k, data))
        .collect::<crate::Result<Vec<_>>>()?)
}

fn not_converged(results: &[FitResult]) -> CmdResult {
    let bad: Vec<String> = results
        .iter()
        .filter(|r| !r.converged)
        .map(|r| {
            format!(
                "model {} after {} iterations (sigma {})",
                r.kind, r.iterations, r.sigma_cm1
            )
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::NotConverged(bad.join("; ")))
    }
}

fn fit(
    data_path: Option<&Path>,
    model: &str,
    json_path: Option<&Path>,
    residual_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let kinds = parse_models(model)?;
    let data = load_levels(data_path)?;
    let results = fit_all(&data, &kinds)?;
    let json = if results.len() == 1 {
        serde_json::to_string_pretty(&results[0])
    } else {
        serde_json::to_string_pretty(&results)
    }
    .map_err(|e| Failure::Input(e.to_string()))?
        + "\n";
    if results.len() == 1 {
        out.write_all(json.as_bytes())?;
    } else {
        out.write_all(fitting::parameter_report(&results).as_bytes())?;
    }
    if let Some(p) = json_path {
        write_file(p, &json)?;
    }
    if let Some(p) = residual_path {
        let csv = if results.len() == 1 {
            results[0].residuals_csv()
        } else {
            let mut s = String::from("model,ell,energy_exp,energy_th,residual\n");
            for r in &results {
                for line in r.residuals_csv().lines().skip(1) {
                    s.push_str(&format!("{},{line}\n", r.kind));
                }
            }
            s
        };
        write_file(p, &csv)?;
    }
    not_converged(&results)
}

/// Two decimals below 1000, one above.
pub fn level_cell(e: f64) -> String {
    if e.abs() >= 1000.0 {
        format!("{e:.1}")
    } else {
        format!("{e:.2}")
    }
}

fn report(data_path: Option<&Path>, csv: bool, out: &mut dyn Write) -> CmdResult {
    let data = load_levels(data_path)?;
    let results = fit_all(&data, &ModelKind::ALL)?;
    let mut header = vec!["l".to_string(), "exp.".to_string()];
    header.extend(results.iter().map(|r| r.kind.label().to_string()));
    let rows: Vec<Vec<String>> = data
        .levels
        .iter()
        .enumerate()
        .map(|(i, lvl)| {
            let mut row = vec![lvl.ell.to_string(), level_cell(lvl.energy)];
            row.extend(results.iter().map(|r| level_cell(r.residuals[i].energy_th)));
            row
        })
        .collect();
    if csv {
        header[0] = "ell".into();
        writeln!(out, "{}", header.join(","))?;
        for row in rows {
            writeln!(out, "{}", row.join(","))?;
        }
    } else {
        let line = |cells: &[String]| {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == 0 {
                        format!("{c:>3}")
                    } else {
                        format!("{c:>9}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(out, "{}", line(&header))?;
        for row in &rows {
            writeln!(out, "{}", line(row))?;
        }
    }
    not_converged(&results)
}
