//! su(2) and su_q(2) irreps as dense matrices on the common `|l, m>` basis.
//!
//! Row and column `i` of every matrix stand for `m = l - i`, so index 0 is
//! the highest weight. Both algebras act on the same basis vectors; only the
//! ladder matrix elements differ.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::qnum::{DeformationParameter, Regime};
use crate::{Error, Result};

/// Spin label, stored as `2l` so half-integer spins are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinLabel {
    two_ell: u32,
}

impl SpinLabel {
    pub fn from_two_ell(two_ell: u32) -> Self {
        Self { two_ell }
    }

    /// Integer spin `l`.
    pub fn integer(ell: u32) -> Self {
        Self { two_ell: 2 * ell }
    }

    pub fn two_ell(&self) -> u32 {
        self.two_ell
    }

    pub fn ell(&self) -> f64 {
        f64::from(self.two_ell) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_ell as usize + 1
    }

    /// `m` belonging to basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        self.ell() - i as f64
    }

    /// `m = l, l-1, ..., -l` in basis order.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(|i| self.m(i))
    }
}

impl std::fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.two_ell.is_multiple_of(2) {
            write!(f, "{}", self.two_ell / 2)
        } else {
            write!(f, "{}/2", self.two_ell)
        }
    }
}

/// Dense complex square matrix on one irrep.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix(DMatrix<Complex64>);

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::domain(format!(
                "operator matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    /// Diagonal operator with entries `f(m)` for the weights of `spin`.
    pub fn diagonal_in(spin: SpinLabel, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let d = spin.dim();
        Self(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                f(spin.m(i))
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.0.diagonal().iter().copied().collect()
    }

    /// Largest modulus of any entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of an off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.0[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// `f` applied to each diagonal entry; errors unless the matrix is diagonal.
    pub fn map_diagonal(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Result<Self> {
        if self.max_off_diagonal() != 0.0 {
            return Err(Error::domain(
                "functional calculus needs a diagonal operator",
            ));
        }
        let d = self.dim();
        Ok(Self(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                f(self.0[(i, i)])
            } else {
                Complex64::new(0.0, 0.0)
            }
        })))
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    /// `[self, other]_k = self*other - k*other*self`.
    pub fn q_commutator(&self, other: &Self, k: Complex64) -> Self {
        &(self * other) - &(other * self).scale(k)
    }

    /// Row-major text dump, one row per line, entries as `re,im` separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if j > 0 {
                    out.push(' ');
                }
                let z = self.0[(i, j)];
                let _ = write!(out, "{},{}", z.re, z.im);
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`OperatorMatrix::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(n, line)| {
                line.split_whitespace()
                    .map(|cell| {
                        parse_cell(cell).ok_or_else(|| Error::Parse {
                            source_name: "matrix dump".into(),
                            line: n + 1,
                            message: format!("bad entry {cell:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Parse {
                source_name: "matrix dump".into(),
                line: 0,
                message: "matrix dump is not square".into(),
            });
        }
        Ok(Self(DMatrix::from_fn(d, d, |i, j| rows[i][j])))
    }
}

fn parse_cell(cell: &str) -> Option<Complex64> {
    let (re, im) = cell.split_once(',')?;
    Some(Complex64::new(re.parse().ok()?, im.parse().ok()?))
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(self.0 * rhs.0)
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl Add for OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(self.0 + rhs.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(self.0 - rhs.0)
    }
}

impl Neg for OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix(-self.0)
    }
}

/// Raising, lowering and weight operators of one irrep.
#[derive(Clone, Debug)]
pub struct Generators {
    pub spin: SpinLabel,
    pub raise: OperatorMatrix,
    pub lower: OperatorMatrix,
    pub weight: OperatorMatrix,
}

fn ladder_pair(
    spin: SpinLabel,
    mut coeff: impl FnMut(f64, f64) -> Result<f64>,
) -> Result<Generators> {
    let d = spin.dim();
    let ell = spin.ell();
    let mut raise = DMatrix::zeros(d, d);
    // <l, m+1| raise |l, m> at (i-1, i) where m = l - i
    for i in 1..d {
        let m = spin.m(i);
        let prod = coeff(ell - m, ell + m + 1.0)?;
        if prod < 0.0 {
            return Err(Error::domain(format!(
                "ladder coefficient squared is negative ({prod}) at l = {spin}, m = {m}"
            )));
        }
        raise[(i - 1, i)] = Complex64::new(prod.sqrt(), 0.0);
    }
    let raise = OperatorMatrix(raise);
    // Both coefficient sets are real, so the lowering operator is the transpose.
    let lower = OperatorMatrix(raise.0.transpose());
    let weight = OperatorMatrix::diagonal_in(spin, |m| Complex64::new(m, 0.0));
    Ok(Generators {
        spin,
        raise,
        lower,
        weight,
    })
}

/// su_q(2) generators: `<l,m+-1|L+-|l,m> = sqrt([l-+m][l+-m+1])`, `L0 = diag(m)`.
pub fn suq2_generators(spin: SpinLabel, p: &DeformationParameter) -> Result<Generators> {
    p.check_spin(spin.two_ell())?;
    ladder_pair(spin, |a, b| Ok(p.bracket(a) * p.bracket(b)))
}

/// Classical su(2) generators with `sqrt((l-+m)(l+-m+1))` ladder elements.
pub fn su2_generators(spin: SpinLabel) -> Generators {
    ladder_pair(spin, |a, b| Ok(a * b)).expect("classical ladder coefficients are non-negative")
}

/// `[f(L0)]` for a diagonal weight operator.
pub(crate) fn weight_function(spin: SpinLabel, f: impl Fn(f64) -> f64) -> OperatorMatrix {
    OperatorMatrix::diagonal_in(spin, |m| Complex64::new(f(m), 0.0))
}

/// `C2^(q) = L- L+ + [L0][L0+1]`.
pub fn casimir_q(spin: SpinLabel, p: &DeformationParameter) -> Result<OperatorMatrix> {
    let g = suq2_generators(spin, p)?;
    Ok(casimir_from(&g, p))
}

pub(crate) fn casimir_from(g: &Generators, p: &DeformationParameter) -> OperatorMatrix {
    &g.lower * &g.raise + weight_function(g.spin, |m| p.bracket(m) * p.bracket(m + 1.0))
}

/// `C2 = l- l+ + l0(l0+1)`.
pub fn casimir_classical(spin: SpinLabel) -> OperatorMatrix {
    casimir_from(&su2_generators(spin), &DeformationParameter::classical())
}

/// `max|lhs - rhs|` relative to the magnitude of the terms that produced it.
pub fn residual(diff: &OperatorMatrix, scale: f64) -> f64 {
    diff.max_abs() / scale.max(1.0)
}

/// Named residuals of operator identities that should vanish, and norms of
/// commutators that should not.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ResidualReport {
    pub identities: BTreeMap<String, f64>,
    pub non_commuting: BTreeMap<String, f64>,
}

impl ResidualReport {
    pub fn worst_identity(&self) -> Option<(&str, f64)> {
        self.identities
            .iter()
            .map(|(k, v)| (k.as_str(), *v))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Identities with residual above `tol`.
    pub fn violations(&self, tol: f64) -> Vec<(&str, f64)> {
        self.identities
            .iter()
            .filter(|(_, v)| v.is_nan() || **v > tol)
            .map(|(k, v)| (k.as_str(), *v))
            .collect()
    }

    pub fn merge(&mut self, other: ResidualReport) {
        self.identities.extend(other.identities);
        self.non_commuting.extend(other.non_commuting);
    }

    pub(crate) fn identity(&mut self, name: &str, value: f64) {
        self.identities.insert(name.to_string(), value);
    }
}

/// Whether `[L+, l+]` and `[L-, l-]` are expected to be non-zero.
///
/// Off the classical point they vanish only for `2l <= 2`, where the
/// reflection symmetry of the ladder coefficients cancels the single entry.
pub fn expects_non_commuting(spin: SpinLabel, p: &DeformationParameter) -> bool {
    p.regime() != Regime::Classical && spin.two_ell() >= 3
}

/// Commutation relations of su_q(2), invariance of `C2^(q)` under both
/// algebras, and the su_q(2)/su(2) non-commutators.
pub fn commutator_residuals(spin: SpinLabel, p: &DeformationParameter) -> Result<ResidualReport> {
    let q = suq2_generators(spin, p)?;
    let c = su2_generators(spin);
    let cq = casimir_from(&q, p);
    let mut report = ResidualReport::default();

    let (np, nm, n0) = (q.raise.max_abs(), q.lower.max_abs(), q.weight.max_abs());
    let r = q.weight.commutator(&q.raise) - q.raise.clone();
    report.identity("[L0,L+]-L+", residual(&r, 2.0 * n0 * np));
    let r = q.weight.commutator(&q.lower) + q.lower.clone();
    report.identity("[L0,L-]+L-", residual(&r, 2.0 * n0 * nm));
    let two_l0 = weight_function(spin, |m| p.bracket(2.0 * m));
    let r = q.raise.commutator(&q.lower) - two_l0;
    report.identity("[L+,L-]-[2L0]", residual(&r, 2.0 * np * nm));

    let nc = cq.max_abs();
    for (name, x) in [
        ("L+", &q.raise),
        ("L-", &q.lower),
        ("L0", &q.weight),
        ("l+", &c.raise),
        ("l-", &c.lower),
        ("l0", &c.weight),
    ] {
        let r = cq.commutator(x);
        report.identity(
            &format!("[C2q,{name}]"),
            residual(&r, 2.0 * nc * x.max_abs()),
        );
    }

    report
        .non_commuting
        .insert("[L+,l+]".into(), q.raise.commutator(&c.raise).max_abs());
    report
        .non_commuting
        .insert("[L-,l-]".into(), q.lower.commutator(&c.lower).max_abs());
    Ok(report)
}
