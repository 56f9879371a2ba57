//! Rank-1 irreducible tensor operator under su_q(2) and the Hamiltonian
//! built from its scalar square. Real `q = e^tau` (and the classical point)
//! only.

use num_complex::Complex64;

use crate::algebra::{
    casimir_from, residual, su2_generators, suq2_generators, weight_function, Generators,
    OperatorMatrix, ResidualReport, SpinLabel,
};
use crate::qnum::{DeformationParameter, Regime};
use crate::{Error, Result};

fn require_real_q(p: &DeformationParameter) -> Result<()> {
    match p.regime() {
        Regime::Real | Regime::Classical => Ok(()),
        Regime::Phase => Err(Error::UnsupportedRegime(
            "tensor operators are built for real q only".into(),
        )),
    }
}

/// `q` for a real or classical parameter.
fn q_real(p: &DeformationParameter) -> f64 {
    p.tau().exp()
}

/// `q - 1/q = 2 sinh(tau)`.
fn q_diff(p: &DeformationParameter) -> f64 {
    2.0 * p.tau().sinh()
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Spherical components `m = +1, 0, -1` of a rank-1 tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1 {
    pub plus: OperatorMatrix,
    pub zero: OperatorMatrix,
    pub minus: OperatorMatrix,
}

impl Rank1 {
    pub fn component(&self, m: i32) -> Option<&OperatorMatrix> {
        match m {
            1 => Some(&self.plus),
            0 => Some(&self.zero),
            -1 => Some(&self.minus),
            _ => None,
        }
    }

    fn map(&self, mut f: impl FnMut(&OperatorMatrix) -> OperatorMatrix) -> Rank1 {
        Rank1 {
            plus: f(&self.plus),
            zero: f(&self.zero),
            minus: f(&self.minus),
        }
    }
}

/// `J_{+1}, J_0, J_{-1}` on one irrep together with the generators they came from.
#[derive(Clone, Debug)]
pub struct ItoTriple {
    pub spin: SpinLabel,
    pub param: DeformationParameter,
    pub generators: Generators,
    pub j: Rank1,
}

/// q-Clebsch-Gordan coefficient `<1 m1 1 m2 | 1 m>_q`.
///
/// Only the seven non-vanishing `1 x 1 -> 1` values are tabulated; any other
/// combination with `m = m1 + m2` is zero.
pub fn qcg_1x1_to_1(m1: i32, m2: i32, m: i32, p: &DeformationParameter) -> Result<f64> {
    require_real_q(p)?;
    if [m1, m2, m].iter().any(|v| v.abs() > 1) {
        return Err(Error::domain(format!(
            "projections must lie in {{-1, 0, 1}}, got ({m1}, {m2}, {m})"
        )));
    }
    if m1 + m2 != m {
        return Ok(0.0);
    }
    let q = q_real(p);
    let r = (p.bracket(2.0) / p.bracket(4.0)).sqrt();
    Ok(match (m1, m2) {
        (1, 0) | (0, -1) => q * r,
        (0, 1) | (-1, 0) => -r / q,
        (1, -1) => r,
        (-1, 1) => -r,
        (0, 0) => (q - 1.0 / q) * r,
        _ => 0.0,
    })
}

/// `q^{s L0}` on `spin`.
fn q_l0(spin: SpinLabel, p: &DeformationParameter, s: f64) -> OperatorMatrix {
    let tau = p.tau();
    weight_function(spin, |m| (s * tau * m).exp())
}

/// `J_{+1} = -q^{-L0} L+ / sqrt([2])`, `J_{-1} = q^{-L0} L- / sqrt([2])`,
/// `J_0 = (q L+ L- - q^{-1} L- L+) / [2]`.
pub fn build_ito(spin: SpinLabel, p: &DeformationParameter) -> Result<ItoTriple> {
    require_real_q(p)?;
    let g = suq2_generators(spin, p)?;
    let q = q_real(p);
    let two = p.bracket(2.0);
    let shift = q_l0(spin, p, -1.0);
    let plus = (&shift * &g.raise).scale_re(-1.0 / two.sqrt());
    let minus = (&shift * &g.lower).scale_re(1.0 / two.sqrt());
    let zero = ((&g.raise * &g.lower).scale_re(q) - (&g.lower * &g.raise).scale_re(1.0 / q))
        .scale_re(1.0 / two);
    Ok(ItoTriple {
        spin,
        param: *p,
        generators: g,
        j: Rank1 { plus, zero, minus },
    })
}

fn z_from(t: &ItoTriple) -> OperatorMatrix {
    q_l0(t.spin, &t.param, -2.0) + t.j.zero.scale_re(q_diff(&t.param))
}

/// `Z = q^{-2 L0} + (q - 1/q) J_0`.
pub fn z_operator(spin: SpinLabel, p: &DeformationParameter) -> Result<OperatorMatrix> {
    Ok(z_from(&build_ito(spin, p)?))
}

/// Eigenvalue of `Z` on the irrep `l`: `cosh((2l+1) tau) / cosh(tau)`.
pub fn z_eigenvalue(ell: f64, p: &DeformationParameter) -> f64 {
    let tau = p.tau();
    ((2.0 * ell + 1.0) * tau).cosh() / tau.cosh()
}

fn tensor_product_with(t: &ItoTriple, a: &Rank1, b: &Rank1) -> Result<Rank1> {
    let inv = t.param.inverse()?;
    let d = t.spin.dim();
    let mut out = [
        OperatorMatrix::zeros(d),
        OperatorMatrix::zeros(d),
        OperatorMatrix::zeros(d),
    ];
    for (slot, m) in [1i32, 0, -1].into_iter().enumerate() {
        for m1 in -1..=1 {
            let m2 = m - m1;
            if m2.abs() > 1 {
                continue;
            }
            let cg = qcg_1x1_to_1(m1, m2, m, &inv)?;
            if cg == 0.0 {
                continue;
            }
            let term = a.component(m1).unwrap() * b.component(m2).unwrap();
            out[slot] = &out[slot] + &term.scale_re(cg);
        }
    }
    let [plus, zero, minus] = out;
    Ok(Rank1 { plus, zero, minus })
}

/// `[J x J]^{(1/q)}_{1,m}` for `m = +1, 0, -1`, coupled with the `1/q` table.
pub fn tensor_product_rank1(t: &ItoTriple) -> Result<Rank1> {
    tensor_product_with(t, &t.j, &t.j)
}

fn scalar_product_with(t: &ItoTriple, a: &Rank1) -> OperatorMatrix {
    let q = q_real(&t.param);
    // sum_m (-q)^{-m} A_m A_{-m}
    (&a.plus * &a.minus).scale_re(-1.0 / q) + &a.zero * &a.zero + (&a.minus * &a.plus).scale_re(-q)
}

/// `(J . J)^{(1/q)} = sum_m (-q)^{-m} J_m J_{-m}`.
pub fn scalar_product(t: &ItoTriple) -> OperatorMatrix {
    scalar_product_with(t, &t.j)
}

/// `Z^{-1}`; `Z` is diagonal in the `|l, m>` basis.
fn z_inverse(z: &OperatorMatrix) -> Result<OperatorMatrix> {
    z.map_diagonal(|v| 1.0 / v)
}

/// `H = A (1 - Z^{-2}) / (q - 1/q)^2`.
pub fn ito_hamiltonian_matrix(
    spin: SpinLabel,
    p: &DeformationParameter,
    a: f64,
) -> Result<OperatorMatrix> {
    let t = build_ito(spin, p)?;
    hamiltonian_from(&t, a)
}

fn hamiltonian_from(t: &ItoTriple, a: f64) -> Result<OperatorMatrix> {
    if t.param.regime() != Regime::Real {
        return Err(Error::domain(
            "the ITO Hamiltonian divides by (q - 1/q)^2 and needs q != 1",
        ));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!(
            "rotational constant must be positive, got {a}"
        )));
    }
    let z = z_from(t);
    let dq = q_diff(&t.param);
    z.map_diagonal(|v| c(a) * (1.0 - 1.0 / (v * v)) / (dq * dq))
}

/// Residuals of the tensor-operator identities on one irrep.
///
/// Every entry is `max|lhs - rhs|` divided by the magnitude of the products
/// involved, so the numbers are comparable across spins and deformations.
pub fn ito_residuals(spin: SpinLabel, p: &DeformationParameter) -> Result<ResidualReport> {
    let t = build_ito(spin, p)?;
    let g = &t.generators;
    let j = &t.j;
    let d = spin.dim();
    let l = spin.ell();
    let q = q_real(p);
    let dq = q_diff(p);
    let two = p.bracket(2.0);
    let eye = OperatorMatrix::identity(d);
    let mut rep = ResidualReport::default();

    // [L0, J_m] = m J_m and [L+-, J_m]_{q^m} = sqrt([1-+m][2+-m]) J_{m+-1} q^{-L0}
    let shift = q_l0(spin, p, -1.0);
    for m in [1, 0, -1] {
        let jm = j.component(m).unwrap();
        let r = g.weight.commutator(jm) - jm.scale_re(f64::from(m));
        rep.identity(
            &format!("ito:[L0,J{m:+}]"),
            residual(&r, 2.0 * g.weight.max_abs() * jm.max_abs()),
        );
        for (sign, name, ladder) in [(1, "L+", &g.raise), (-1, "L-", &g.lower)] {
            let mf = f64::from(m);
            let sf = f64::from(sign);
            let coeff = p.bracket(1.0 - sf * mf) * p.bracket(2.0 + sf * mf);
            let lhs = ladder.q_commutator(jm, c(q.powf(mf)));
            let rhs = match j.component(m + sign) {
                Some(next) if coeff.abs() > 0.0 => (next * &shift).scale_re(coeff.sqrt()),
                _ => OperatorMatrix::zeros(d),
            };
            let scale = (1.0 + q.powf(mf)) * ladder.max_abs() * jm.max_abs();
            rep.identity(
                &format!("ito:[{name},J{m:+}]_q^m"),
                residual(&(lhs - rhs), scale),
            );
        }
    }

    // Hermitian conjugates
    let r = j.plus.adjoint() + j.minus.scale_re(1.0 / q);
    rep.identity("ito:J+^H=-J-/q", residual(&r, j.plus.max_abs()));
    let r = j.minus.adjoint() + j.plus.scale_re(q);
    rep.identity("ito:J-^H=-qJ+", residual(&r, j.minus.max_abs()));
    let r = j.zero.adjoint() - j.zero.clone();
    rep.identity("ito:J0^H=J0", residual(&r, j.zero.max_abs()));

    // [J+,J0] = -q^{-2L0+1} J+, [J-,J0] = q^{-2L0-1} J-, [J+,J-] = -q^{-2L0} J0
    let q2 = q_l0(spin, p, -2.0);
    let r = j.plus.commutator(&j.zero) + (&q2 * &j.plus).scale_re(q);
    rep.identity(
        "ito:[J+,J0]",
        residual(&r, 2.0 * j.plus.max_abs() * j.zero.max_abs()),
    );
    let r = j.minus.commutator(&j.zero) - (&q2 * &j.minus).scale_re(1.0 / q);
    rep.identity(
        "ito:[J-,J0]",
        residual(&r, 2.0 * j.minus.max_abs() * j.zero.max_abs()),
    );
    let r = j.plus.commutator(&j.minus) + &q2 * &j.zero;
    rep.identity(
        "ito:[J+,J-]",
        residual(&r, 2.0 * j.plus.max_abs() * j.minus.max_abs()),
    );

    // Z in both forms
    let z = z_from(&t);
    let cq = casimir_from(g, p);
    let kappa = dq * dq / two;
    let z_casimir = &eye + &cq.scale_re(kappa);
    let zs = z.max_abs();
    rep.identity("ito:Z=1+kappa*C2q", residual(&(&z - &z_casimir), zs));

    // J0 through the Casimir
    let j0_alt = (weight_function(spin, |m| q * p.bracket(2.0 * m))
        + (&cq - &weight_function(spin, |m| p.bracket(m) * p.bracket(m + 1.0))).scale_re(dq))
    .scale_re(1.0 / two);
    rep.identity(
        "ito:J0_casimir_form",
        residual(&(&j.zero - &j0_alt), j.zero.max_abs() + cq.max_abs()),
    );

    // [J x J]_{1,m} = -sqrt([2]/[4]) Z J_m
    let r24 = (two / p.bracket(4.0)).sqrt();
    let tp = tensor_product_rank1(&t)?;
    for m in [1, 0, -1] {
        let jm = j.component(m).unwrap();
        let lhs = tp.component(m).unwrap();
        let r = lhs + &(&z * jm).scale_re(r24);
        let scale = (1.0 + q.max(1.0 / q)) * 3.0 * j.plus.max_abs().max(j.zero.max_abs()).powi(2);
        rep.identity(&format!("ito:[JxJ]_1,{m:+}=-rZJ"), residual(&r, scale));
    }

    // Normalised J' = J / Z
    let zi = z_inverse(&z)?;
    let jp = j.map(|x| &zi * x);
    let tpp = tensor_product_with(&t, &jp, &jp)?;
    for m in [1, 0, -1] {
        let lhs = tpp.component(m).unwrap();
        let rhs = jp.component(m).unwrap().scale_re(-r24);
        let scale = (1.0 + q.max(1.0 / q)) * 3.0 * jp.plus.max_abs().max(jp.zero.max_abs()).powi(2);
        rep.identity(
            &format!("ito:[J'xJ']_1,{m:+}"),
            residual(&(lhs - &rhs), scale),
        );
    }

    // Scalar product and its eigenvalue
    let sp = scalar_product(&t);
    let sp_scale = (q + 1.0 / q + 1.0) * j.plus.max_abs().max(j.zero.max_abs()).powi(2);
    let ev_q2 = p.bracket_q2(l) * p.bracket_q2(l + 1.0);
    let r = &sp - &eye.scale_re(ev_q2);
    rep.identity("ito:(J.J)=[l]_q2[l+1]_q2", residual(&r, sp_scale));
    let ev_brackets = p.bracket(2.0 * l) * p.bracket(2.0 * l + 2.0) / (two * two);
    rep.identity(
        "ito:[2l][2l+2]/[2]^2",
        (ev_q2 - ev_brackets).abs() / ev_q2.abs().max(1.0),
    );
    let ev_casimir = 2.0 / two * p.bracket(l) * p.bracket(l + 1.0)
        + kappa / two * (p.bracket(l) * p.bracket(l + 1.0)).powi(2);
    rep.identity(
        "ito:(J.J)_casimir_form",
        (ev_q2 - ev_casimir).abs() / ev_q2.abs().max(1.0),
    );

    // <Z> closed forms
    let zev = z_eigenvalue(l, p);
    let z_brackets = (p.bracket(2.0 * l + 2.0) - p.bracket(2.0 * l)) / two;
    let z_kappa = 1.0 + kappa * p.bracket(l) * p.bracket(l + 1.0);
    let r = &z - &eye.scale_re(zev);
    rep.identity("ito:<Z>=cosh((2l+1)t)/cosh(t)", residual(&r, zs));
    rep.identity("ito:<Z>=([2l+2]-[2l])/[2]", (zev - z_brackets).abs() / zev);
    rep.identity("ito:<Z>=1+kappa[l][l+1]", (zev - z_kappa).abs() / zev);

    if p.regime() == Regime::Real {
        let z2m1 = (&z * &z) - eye.clone();
        rep.identity(
            "ito:(J.J)=(Z^2-1)/dq^2",
            residual(&(&sp - &z2m1.scale_re(1.0 / (dq * dq))), sp_scale),
        );
        let kc = cq.scale_re(kappa);
        let rhs = &kc * &(&eye.scale_re(2.0) + &kc);
        let lhs = (&z - &eye) * (&z + &eye);
        rep.identity("ito:(Z-1)(Z+1)", residual(&(lhs - rhs), (zs + 1.0).powi(2)));

        let spp = scalar_product_with(&t, &jp);
        let rhs = (&eye - &(&zi * &zi)).scale_re(1.0 / (dq * dq));
        let scale = (q + 1.0 / q + 1.0) * jp.plus.max_abs().max(jp.zero.max_abs()).powi(2);
        rep.identity(
            "ito:(J'.J')=(1-Z^-2)/dq^2",
            residual(&(&spp - &rhs), scale.max(rhs.max_abs())),
        );

        // H commutes with both algebras and with J, J'
        let h = hamiltonian_from(&t, 1.0)?;
        let hs = h.max_abs();
        let cl = su2_generators(spin);
        let ops: [(&str, &OperatorMatrix); 12] = [
            ("l+", &cl.raise),
            ("l-", &cl.lower),
            ("l0", &cl.weight),
            ("L+", &g.raise),
            ("L-", &g.lower),
            ("L0", &g.weight),
            ("J+", &j.plus),
            ("J-", &j.minus),
            ("J0", &j.zero),
            ("J'+", &jp.plus),
            ("J'-", &jp.minus),
            ("J'0", &jp.zero),
        ];
        for (name, x) in ops {
            let r = h.commutator(x);
            rep.identity(
                &format!("ito:[H,{name}]"),
                residual(&r, 2.0 * hs * x.max_abs()),
            );
        }
    }
    Ok(rep)
}
