//! Equivariant elliptic genus of a toric diagram.
//!
//! `Z(tau, z; t1, t2) = sum_v prod_j theta1(tau, z + w_j) / theta1(tau, w_j)`
//! where `w_j = a_j t1 + b_j t2` runs over the three weights at each trivalent
//! vertex. Univalent ends do not contribute.

mod exact;
mod residue;

pub use exact::{
    averaged_genus_qexp, first_mismatch, genus_qexp, reference_genus_qexp, uv_inverted,
    vertex_term_qexp, ExactGenus,
};
pub use residue::{
    conifold_genus_residues, conifold_residue_report, residue_numeric, ResidueCheck,
    ResidueIdentity, DEFAULT_NODES,
};

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::theta::{self, ComplexParams, ThetaError};
use crate::toric::{self, ModelError, ToricDiagram, WeightVector};

/// Evaluation refuses when a denominator theta is smaller than this.
pub const POLE_THRESHOLD: f64 = 1e-6;

/// Default tolerance for genus-level comparisons.
pub const GENUS_TOL: f64 = 1e-9;

/// Default seed for generated sample points.
pub const DEFAULT_SEED: u64 = 20_140_101;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenusError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("theta1 denominator {magnitude:e} below pole threshold at vertex {vertex:?}, slot {slot}")]
    PoleProximity {
        vertex: Option<String>,
        slot: usize,
        magnitude: f64,
    },
    #[error("trapezoid rule did not settle: {coarse} vs {fine} after doubling nodes")]
    QuadratureNonconvergence { coarse: Complex64, fine: Complex64 },
}

impl GenusError {
    fn at_vertex(self, id: &str) -> Self {
        match self {
            GenusError::PoleProximity { slot, magnitude, .. } => GenusError::PoleProximity {
                vertex: Some(id.to_string()),
                slot,
                magnitude,
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericGenus {
    pub diagram: String,
    pub params: ComplexParams,
    pub value: Complex64,
}

/// `prod_j theta1(tau, z + w_j) / theta1(tau, w_j)`.
pub fn vertex_term_numeric(
    weights: &[WeightVector; 3],
    p: &ComplexParams,
    tol: f64,
) -> Result<Complex64, GenusError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, w) in weights.iter().enumerate() {
        let wt = p.pair(*w);
        let den = theta::theta1(p.tau, wt, tol)?;
        if den.norm() < POLE_THRESHOLD {
            return Err(GenusError::PoleProximity {
                vertex: None,
                slot: j + 1,
                magnitude: den.norm(),
            });
        }
        acc *= theta::theta1(p.tau, p.z + wt, tol)? / den;
    }
    Ok(acc)
}

fn sum_vertex_terms(d: &ToricDiagram, p: &ComplexParams, tol: f64) -> Result<Complex64, GenusError> {
    d.trivalent().iter().try_fold(Complex64::new(0.0, 0.0), |acc, v| {
        Ok(acc + vertex_term_numeric(&v.weights, p, tol).map_err(|e| e.at_vertex(&v.id))?)
    })
}

pub fn genus_numeric(d: &ToricDiagram, p: &ComplexParams, tol: f64) -> Result<NumericGenus, GenusError> {
    toric::require_valid(d)?;
    theta::check_tau(p.tau)?;
    Ok(NumericGenus {
        diagram: d.name().to_string(),
        params: *p,
        value: sum_vertex_terms(d, p, tol)?,
    })
}

/// `(Z(t1, t2) + Z(-t1, -t2)) / 2`, computed on the weight-negated diagram.
pub fn averaged_genus_numeric(
    d: &ToricDiagram,
    p: &ComplexParams,
    tol: f64,
) -> Result<NumericGenus, GenusError> {
    let plain = genus_numeric(d, p, tol)?;
    let flipped = sum_vertex_terms(&toric::negate_weights(d), p, tol)?;
    Ok(NumericGenus {
        value: (plain.value + flipped) * 0.5,
        ..plain
    })
}

/// `(chi / 2) theta1(tau, 2z) / theta1(tau, z)`.
pub fn reference_genus_numeric(chi: i64, tau: Complex64, z: Complex64, tol: f64) -> Result<Complex64, GenusError> {
    let den = theta::theta1(tau, z, tol)?;
    if den.norm() < POLE_THRESHOLD {
        return Err(GenusError::PoleProximity {
            vertex: None,
            slot: 0,
            magnitude: den.norm(),
        });
    }
    let num = theta::theta1(tau, z * 2.0, tol)?;
    Ok(num / den * (chi as f64 / 2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub diagram: String,
    pub tau: Complex64,
    pub z: Complex64,
    pub samples: Vec<(Complex64, Complex64)>,
    /// One entry per sample; failed samples are kept and skipped in the maximum.
    pub values: Vec<Result<Complex64, GenusError>>,
    pub max_deviation: f64,
}

impl IndependenceReport {
    pub fn evaluated(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.values.iter().filter_map(|v| v.as_ref().ok().copied())
    }
}

/// Evaluates the genus at each `(t1, t2)` and records the largest pairwise gap.
pub fn independence_scan(
    d: &ToricDiagram,
    tau: Complex64,
    z: Complex64,
    samples: &[(Complex64, Complex64)],
    tol: f64,
) -> Result<IndependenceReport, GenusError> {
    toric::require_valid(d)?;
    theta::check_tau(tau)?;
    let values: Vec<_> = samples
        .iter()
        .map(|&(t1, t2)| {
            let p = ComplexParams { tau, z, t1, t2 };
            sum_vertex_terms(d, &p, tol)
        })
        .collect();
    let ok: Vec<Complex64> = values.iter().filter_map(|v| v.as_ref().ok().copied()).collect();
    let mut max_deviation = 0.0f64;
    for (i, a) in ok.iter().enumerate() {
        for b in &ok[i + 1..] {
            max_deviation = max_deviation.max((a - b).norm());
        }
    }
    Ok(IndependenceReport {
        diagram: d.name().to_string(),
        tau,
        z,
        samples: samples.to_vec(),
        values,
        max_deviation,
    })
}

/// Distance from `x` to the lattice `Z + tau Z`.
pub fn lattice_distance(x: Complex64, tau: Complex64) -> f64 {
    let m0 = Float::round(x.im / tau.im) as i64;
    let mut best = f64::INFINITY;
    for m in (m0 - 1)..=(m0 + 1) {
        let r = x - tau * m as f64;
        let n0 = Float::round(r.re) as i64;
        for n in (n0 - 1)..=(n0 + 1) {
            best = best.min((r - n as f64).norm());
        }
    }
    best
}

/// Smallest distance from any `w . t` (weights of `d`) to the pole lattice.
pub fn pole_clearance(d: &ToricDiagram, tau: Complex64, t1: Complex64, t2: Complex64) -> f64 {
    let p = ComplexParams { tau, z: Complex64::new(0.0, 0.0), t1, t2 };
    d.trivalent()
        .iter()
        .flat_map(|v| v.weights.iter())
        .map(|w| lattice_distance(p.pair(*w), tau))
        .fold(f64::INFINITY, f64::min)
}

/// Minimum clearance demanded of generated sample points.
pub const SAMPLE_CLEARANCE: f64 = 0.05;

/// Seeded `(t1, t2)` points with `|Re| <= 1/2`, `|Im| <= Im(tau)/2`, each at
/// least [`SAMPLE_CLEARANCE`] away from every pole locus of `d`.
pub fn default_t_samples(d: &ToricDiagram, tau: Complex64, count: usize, seed: u64) -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half_im = 0.5 * tau.im;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut draw = || Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-half_im..half_im));
        let (t1, t2) = (draw(), draw());
        if pole_clearance(d, tau, t1, t2) >= SAMPLE_CLEARANCE {
            out.push((t1, t2));
        }
    }
    out
}

/// Seeded full evaluation points for transformation-law checks.
///
/// `Im tau` lies in `[0.8, 1.25]` and `Re tau` in `[-0.2, 0.2]`, so `-1/tau`
/// stays well inside the upper half-plane; `Im z` sits near `-Im(tau)/2`,
/// which keeps the `z -> z + tau` multiplier of modulus about one.
pub fn default_law_samples(d: &ToricDiagram, count: usize, seed: u64) -> Vec<ComplexParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let tau = Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(0.8..1.25));
        let z = Complex64::new(rng.gen_range(-0.5..0.5), -0.5 * tau.im + rng.gen_range(-0.1..0.1));
        let half_im = 0.5 * tau.im;
        let t1 = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-half_im..half_im));
        let t2 = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-half_im..half_im));
        // the t-shifted and S-transformed points must stay clear as well
        let clear = [
            (t1, t2),
            (t1 + 1.0, t2),
            (t1 + tau, t2),
            (t1, t2 + 1.0),
            (t1, t2 + tau),
        ]
        .iter()
        .all(|&(a, b)| pole_clearance(d, tau, a, b) >= SAMPLE_CLEARANCE)
            && pole_clearance(d, -tau.inv(), t1 / tau, t2 / tau) >= SAMPLE_CLEARANCE;
        if clear {
            out.push(ComplexParams { tau, z, t1, t2 });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::DEFAULT_TOL;
    use crate::toric::builtin;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn acceptance_point() -> ComplexParams {
        ComplexParams::new(c(0.0, 2.0), c(0.3, 0.0), c(0.17, 0.11), c(-0.40, 0.23)).unwrap()
    }

    #[test]
    fn vertex_term_at_zero_z_is_one() {
        let w = [WeightVector::new(1, 0), WeightVector::new(0, 1), WeightVector::new(-1, -1)];
        let mut p = acceptance_point();
        p.z = c(0.0, 0.0);
        assert!((vertex_term_numeric(&w, &p, DEFAULT_TOL).unwrap() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn vertex_term_symmetries() {
        let w = [WeightVector::new(1, 0), WeightVector::new(0, 1), WeightVector::new(-1, -1)];
        let p = acceptance_point();
        let base = vertex_term_numeric(&w, &p, DEFAULT_TOL).unwrap();
        let perm = [w[2], w[0], w[1]];
        assert!((vertex_term_numeric(&perm, &p, DEFAULT_TOL).unwrap() - base).norm() < 1e-12);
        let neg = [-w[0], -w[1], -w[2]];
        let q = ComplexParams { t1: -p.t1, t2: -p.t2, ..p };
        assert!((vertex_term_numeric(&neg, &q, DEFAULT_TOL).unwrap() - base).norm() < 1e-12);
    }

    #[test]
    fn conifold_matches_reference() {
        let d = builtin("resolved_conifold").unwrap();
        let p = acceptance_point();
        let z = genus_numeric(&d, &p, DEFAULT_TOL).unwrap().value;
        let r = reference_genus_numeric(2, p.tau, p.z, DEFAULT_TOL).unwrap();
        assert!((z - r).norm() < GENUS_TOL, "{z} vs {r}");
    }

    #[test]
    fn pole_proximity_is_refused() {
        let d = builtin("resolved_conifold").unwrap();
        let mut p = acceptance_point();
        p.t1 = c(1e-9, 0.0);
        match genus_numeric(&d, &p, DEFAULT_TOL) {
            Err(GenusError::PoleProximity { vertex: Some(v), .. }) => assert_eq!(v, "v1"),
            other => panic!("expected pole refusal, got {other:?}"),
        }
        assert!(reference_genus_numeric(2, p.tau, c(0.0, 0.0), DEFAULT_TOL).is_err());
    }

    #[test]
    fn reference_with_zero_chi_vanishes() {
        assert_eq!(reference_genus_numeric(0, c(0.0, 1.0), c(0.3, 0.1), DEFAULT_TOL).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn local_p2_depends_on_t() {
        let d = builtin("local_p2").unwrap();
        let tau = c(0.0, 2.0);
        let s = default_t_samples(&d, tau, 6, DEFAULT_SEED);
        let rep = independence_scan(&d, tau, c(0.3, 0.0), &s, DEFAULT_TOL).unwrap();
        assert!(rep.max_deviation > 1e-3, "{}", rep.max_deviation);
        let avg = averaged_genus_numeric(&d, &ComplexParams { tau, z: c(0.3, 0.0), t1: s[0].0, t2: s[0].1 }, DEFAULT_TOL)
            .unwrap()
            .value;
        let r = reference_genus_numeric(3, tau, c(0.3, 0.0), DEFAULT_TOL).unwrap();
        assert!((avg - r).norm() < GENUS_TOL);
    }

    #[test]
    fn samples_are_reproducible_and_clear() {
        let d = builtin("local_p2").unwrap();
        let tau = c(0.1, 1.0);
        let a = default_t_samples(&d, tau, 6, 7);
        assert_eq!(a, default_t_samples(&d, tau, 6, 7));
        assert_ne!(a, default_t_samples(&d, tau, 6, 8));
        for (t1, t2) in a {
            assert!(pole_clearance(&d, tau, t1, t2) >= SAMPLE_CLEARANCE);
            assert!(t1.im.abs() <= 0.5 && t2.re.abs() <= 0.5);
        }
    }

    #[test]
    fn lattice_distance_basics() {
        let tau = c(0.2, 1.1);
        assert!(lattice_distance(tau * 2.0 - 3.0, tau) < 1e-12);
        assert!((lattice_distance(c(0.5, 0.0), tau) - 0.5).abs() < 1e-12);
    }
}
