//! Contour-integral residues and the residue identities behind the
//! `t`-independence of the resolved conifold genus.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::RangeInclusive;

use num_complex::Complex64;

use super::{genus_numeric, GenusError};
use crate::theta::{self, a_numeric, b_numeric, ComplexParams};
use crate::toric;

/// Quadrature nodes on the first pass; the convergence check doubles them.
pub const DEFAULT_NODES: usize = 64;

/// Radius of the integration circle relative to the nearest other pole.
const RADIUS_FRACTION: f64 = 0.05;

/// `(1 / 2 pi i) \oint f` over the circle `|t - center| = radius` by the
/// trapezoid rule, which converges geometrically for integrands analytic on
/// an annulus around the circle.
///
/// The rule is applied with `nodes` and `2 * nodes` points; if the two
/// differ by more than `tol * max(1, |result|)` the integral is reported as
/// unconverged.
pub fn residue_numeric<F>(mut f: F, center: Complex64, radius: f64, nodes: usize, tol: f64) -> Result<Complex64, GenusError>
where
    F: FnMut(Complex64) -> Result<Complex64, GenusError>,
{
    let mut rule = |n: usize| -> Result<Complex64, GenusError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let step = Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64);
            acc += f(center + step)? * step;
        }
        Ok(acc / n as f64)
    };
    let nodes = nodes.max(4);
    let coarse = rule(nodes)?;
    let fine = rule(2 * nodes)?;
    if (fine - coarse).norm() > tol * fine.norm().max(1.0) {
        return Err(GenusError::QuadratureNonconvergence { coarse, fine });
    }
    Ok(fine)
}

/// The eight residue and specialization identities for `A(q, y, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueIdentity {
    /// `res_{u=q^m} A(u) du = -q^m y^-m B`
    ResAAtQm,
    /// `res_{u=q^m} A(1/u) du = q^m y^m B`
    ResAInvAtQm,
    /// `A(uv)|_{u=q^m} = y^-m A(v)`
    AUvAtQm,
    /// `A(1/(uv))|_{u=q^m} = y^m A(1/v)`
    AUvInvAtQm,
    /// `A(u)|_{u=q^m/v} = y^-m A(1/v)`
    AAtQmOverV,
    /// `A(1/u)|_{u=q^m/v} = y^m A(v)`
    AInvAtQmOverV,
    /// `res_{u=q^m/v} A(uv) du = -(q^m/v) y^-m B`
    ResAUvAtQmOverV,
    /// `res_{u=q^m/v} A(1/(uv)) du = (q^m/v) y^m B`
    ResAUvInvAtQmOverV,
}

impl ResidueIdentity {
    pub const ALL: [ResidueIdentity; 8] = [
        ResidueIdentity::ResAAtQm,
        ResidueIdentity::ResAInvAtQm,
        ResidueIdentity::AUvAtQm,
        ResidueIdentity::AUvInvAtQm,
        ResidueIdentity::AAtQmOverV,
        ResidueIdentity::AInvAtQmOverV,
        ResidueIdentity::ResAUvAtQmOverV,
        ResidueIdentity::ResAUvInvAtQmOverV,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ResidueIdentity::ResAAtQm => "res_A_u_at_q^m",
            ResidueIdentity::ResAInvAtQm => "res_A_u^-1_at_q^m",
            ResidueIdentity::AUvAtQm => "A_uv_at_q^m",
            ResidueIdentity::AUvInvAtQm => "A_(uv)^-1_at_q^m",
            ResidueIdentity::AAtQmOverV => "A_u_at_q^m/v",
            ResidueIdentity::AInvAtQmOverV => "A_u^-1_at_q^m/v",
            ResidueIdentity::ResAUvAtQmOverV => "res_A_uv_at_q^m/v",
            ResidueIdentity::ResAUvInvAtQmOverV => "res_A_(uv)^-1_at_q^m/v",
        }
    }
}

impl fmt::Display for ResidueIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One verified identity. `deviation` is `|lhs - rhs| / max(1, |rhs|)`;
/// residues at `u = q^m` scale like `|q|^m`, so an absolute gap would not be
/// comparable across `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueCheck {
    pub label: &'static str,
    pub m: i32,
    pub n: i32,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
}

impl ResidueCheck {
    fn new(label: &'static str, m: i32, n: i32, lhs: Complex64, rhs: Complex64) -> Self {
        let deviation = (lhs - rhs).norm() / rhs.norm().max(1.0);
        Self { label, m, n, lhs, rhs, deviation }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.deviation < tol
    }
}

fn qpow(q: Complex64, m: i32) -> Complex64 {
    q.powi(m)
}

/// `RADIUS_FRACTION` times the distance from `center` to the nearest other
/// point of the geometric pole family `base * q^k`.
fn u_radius(base: Complex64, q: Complex64, m: i32) -> f64 {
    let center = base * qpow(q, m);
    let nearest = [-2, -1, 1, 2]
        .iter()
        .map(|d| (base * qpow(q, m + d) - center).norm())
        .fold(f64::INFINITY, f64::min);
    RADIUS_FRACTION * nearest.min(center.norm())
}

/// Checks all eight identities for each `m` in `ms` at the given point.
pub fn conifold_residue_report(
    tau: Complex64,
    z: Complex64,
    t2: Complex64,
    ms: RangeInclusive<i32>,
    tol: f64,
) -> Result<Vec<ResidueCheck>, GenusError> {
    theta::check_tau(tau)?;
    let ttol = theta::DEFAULT_TOL;
    let q = theta::nome(tau);
    let y = theta::e2pi(z);
    let v = theta::e2pi(t2);
    let one = Complex64::new(1.0, 0.0);
    let a = |u: Complex64| -> Result<Complex64, GenusError> { Ok(a_numeric(q, y, u, ttol)?) };
    let b = b_numeric(q, y, ttol)?;

    let mut out = Vec::new();
    for m in ms {
        let qm = qpow(q, m);
        let ym = y.powi(m);
        let at_qm = u_radius(one, q, m);
        let at_qm_v = u_radius(v.inv(), q, m);
        let center_v = qm / v;
        for id in ResidueIdentity::ALL {
            let (lhs, rhs) = match id {
                ResidueIdentity::ResAAtQm => (
                    residue_numeric(a, qm, at_qm, DEFAULT_NODES, tol)?,
                    -qm / ym * b,
                ),
                ResidueIdentity::ResAInvAtQm => (
                    residue_numeric(|u| a(u.inv()), qm, at_qm, DEFAULT_NODES, tol)?,
                    qm * ym * b,
                ),
                ResidueIdentity::AUvAtQm => (a(qm * v)?, a(v)? / ym),
                ResidueIdentity::AUvInvAtQm => (a((qm * v).inv())?, a(v.inv())? * ym),
                ResidueIdentity::AAtQmOverV => (a(center_v)?, a(v.inv())? / ym),
                ResidueIdentity::AInvAtQmOverV => (a(center_v.inv())?, a(v)? * ym),
                ResidueIdentity::ResAUvAtQmOverV => (
                    residue_numeric(|u| a(u * v), center_v, at_qm_v, DEFAULT_NODES, tol)?,
                    -center_v / ym * b,
                ),
                ResidueIdentity::ResAUvInvAtQmOverV => (
                    residue_numeric(|u| a((u * v).inv()), center_v, at_qm_v, DEFAULT_NODES, tol)?,
                    center_v * ym * b,
                ),
            };
            out.push(ResidueCheck::new(id.name(), m, 0, lhs, rhs));
        }
    }
    Ok(out)
}

/// Residues in `t1` of the resolved conifold genus at `t1 = m tau + n` and
/// `t1 = -t2 + m tau + n`; each should vanish.
pub fn conifold_genus_residues(
    tau: Complex64,
    z: Complex64,
    t2: Complex64,
    ms: RangeInclusive<i32>,
    ns: RangeInclusive<i32>,
    tol: f64,
) -> Result<Vec<ResidueCheck>, GenusError> {
    theta::check_tau(tau)?;
    let d = toric::builtin("resolved_conifold")?;
    let ttol = theta::DEFAULT_TOL;
    let lattice = |m: i32, n: i32| tau * m as f64 + n as f64;

    let mut out = Vec::new();
    for m in ms {
        for n in ns.clone() {
            for (label, center) in [("res_Z_at_m*tau+n", lattice(m, n)), ("res_Z_at_-t2+m*tau+n", -t2 + lattice(m, n))] {
                // nearest other pole among both families
                let mut nearest = f64::INFINITY;
                for dm in -2..=2 {
                    for dn in -2..=2 {
                        for cand in [lattice(m + dm, n + dn), -t2 + lattice(m + dm, n + dn)] {
                            let dist = (cand - center).norm();
                            if dist > 1e-12 {
                                nearest = nearest.min(dist);
                            }
                        }
                    }
                }
                let f = |t1: Complex64| -> Result<Complex64, GenusError> {
                    let p = ComplexParams { tau, z, t1, t2 };
                    Ok(genus_numeric(&d, &p, ttol)?.value)
                };
                let res = residue_numeric(f, center, RADIUS_FRACTION * nearest, DEFAULT_NODES, tol)?;
                out.push(ResidueCheck::new(label, m, n, res, Complex64::new(0.0, 0.0)));
            }
        }
    }
    Ok(out)
}
