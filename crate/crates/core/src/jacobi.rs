//! Transformation laws of generalized weak Jacobi forms of weight 0 and
//! index `r`, with extra elliptic variables `t1`, `t2`:
//!
//! | law            | argument change                          | multiplier                      |
//! |----------------|------------------------------------------|---------------------------------|
//! | `Z_PLUS_1`     | `z -> z + 1`                             | `(-1)^{2r}`                     |
//! | `Z_PLUS_TAU`   | `z -> z + tau`                           | `(-e^{-2 pi i z - pi i tau})^{2r}` |
//! | `T1_PLUS_1` .. | `t_j -> t_j + 1`, `t_j -> t_j + tau`     | `1`                             |
//! | `TAU_PLUS_1`   | `tau -> tau + 1`                         | `1`                             |
//! | `S_TRANSFORM`  | `(-1/tau, z/tau; t1/tau, t2/tau)`        | `e^{2r pi i z^2 / tau}`         |

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::genus::GenusError;
use crate::series::{QSeries, Ring};
use crate::theta::ComplexParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    ZPlus1,
    ZPlusTau,
    T1Plus1,
    T1PlusTau,
    T2Plus1,
    T2PlusTau,
    TauPlus1,
    STransform,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::ZPlus1,
        Law::ZPlusTau,
        Law::T1Plus1,
        Law::T1PlusTau,
        Law::T2Plus1,
        Law::T2PlusTau,
        Law::TauPlus1,
        Law::STransform,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Law::ZPlus1 => "Z_PLUS_1",
            Law::ZPlusTau => "Z_PLUS_TAU",
            Law::T1Plus1 => "T1_PLUS_1",
            Law::T1PlusTau => "T1_PLUS_TAU",
            Law::T2Plus1 => "T2_PLUS_1",
            Law::T2PlusTau => "T2_PLUS_TAU",
            Law::TauPlus1 => "TAU_PLUS_1",
            Law::STransform => "S_TRANSFORM",
        }
    }

    /// The transformed evaluation point.
    pub fn transform(&self, p: &ComplexParams) -> ComplexParams {
        let ComplexParams { tau, z, t1, t2 } = *p;
        let one = Complex64::new(1.0, 0.0);
        match self {
            Law::ZPlus1 => ComplexParams { z: z + one, ..*p },
            Law::ZPlusTau => ComplexParams { z: z + tau, ..*p },
            Law::T1Plus1 => ComplexParams { t1: t1 + one, ..*p },
            Law::T1PlusTau => ComplexParams { t1: t1 + tau, ..*p },
            Law::T2Plus1 => ComplexParams { t2: t2 + one, ..*p },
            Law::T2PlusTau => ComplexParams { t2: t2 + tau, ..*p },
            Law::TauPlus1 => ComplexParams { tau: tau + one, ..*p },
            Law::STransform => ComplexParams {
                tau: -tau.inv(),
                z: z / tau,
                t1: t1 / tau,
                t2: t2 / tau,
            },
        }
    }

    /// Factor `m` in `f(transformed) = m * f(p)` for index `index2r / 2`.
    pub fn multiplier(&self, p: &ComplexParams, index2r: i32) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        match self {
            Law::ZPlus1 => Complex64::new(if index2r.rem_euclid(2) == 0 { 1.0 } else { -1.0 }, 0.0),
            Law::ZPlusTau => (-(-i * 2.0 * PI * p.z - i * PI * p.tau).exp()).powi(index2r),
            Law::STransform => (i * PI * p.z * p.z / p.tau * f64::from(index2r)).exp(),
            _ => Complex64::new(1.0, 0.0),
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LawOutcome {
    Evaluated { lhs: Complex64, rhs: Complex64, deviation: f64 },
    /// Evaluation failed at this sample, typically near a pole.
    Flagged(GenusError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawReport {
    pub law: Law,
    pub sample: ComplexParams,
    pub outcome: LawOutcome,
}

impl LawReport {
    pub fn deviation(&self) -> Option<f64> {
        match self.outcome {
            LawOutcome::Evaluated { deviation, .. } => Some(deviation),
            LawOutcome::Flagged(_) => None,
        }
    }

    /// Flagged reports do not pass.
    pub fn passes(&self, tol: f64) -> bool {
        self.deviation().is_some_and(|d| d < tol)
    }
}

/// Evaluates every law at every sample: `lhs = f(transformed)`,
/// `rhs = multiplier * f(sample)`, `deviation = |lhs - rhs|`.
pub fn check_laws<F>(f: F, index2r: i32, samples: &[ComplexParams]) -> Vec<LawReport>
where
    F: Fn(&ComplexParams) -> Result<Complex64, GenusError>,
{
    let mut out = Vec::with_capacity(samples.len() * Law::ALL.len());
    for sample in samples {
        let base = f(sample);
        for law in Law::ALL {
            let moved = f(&law.transform(sample));
            let outcome = match (&base, &moved) {
                (Ok(b), Ok(lhs)) => {
                    let rhs = law.multiplier(sample, index2r) * b;
                    let lhs = *lhs;
                    LawOutcome::Evaluated {
                        lhs,
                        rhs,
                        deviation: (lhs - rhs).norm(),
                    }
                }
                (Err(e), _) | (_, Err(e)) => LawOutcome::Flagged(e.clone()),
            };
            out.push(LawReport {
                law,
                sample: *sample,
                outcome,
            });
        }
    }
    out
}

/// The expansion only involves non-negative powers of `q`.
pub fn fourier_nonnegative<R: Ring>(s: &QSeries<R>) -> bool {
    s.offset() >= num_rational::Rational64::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SparseLaurent;
    use num_rational::Rational64;

    fn sample() -> ComplexParams {
        ComplexParams::new(
            Complex64::new(0.1, 1.0),
            Complex64::new(0.2, -0.5),
            Complex64::new(0.13, 0.07),
            Complex64::new(-0.31, 0.2),
        )
        .unwrap()
    }

    #[test]
    fn constant_function_index_zero() {
        let reports = check_laws(|_| Ok(Complex64::new(1.0, 0.0)), 0, &[sample()]);
        assert_eq!(reports.len(), 8);
        assert!(reports.iter().all(|r| r.passes(1e-15)));
    }

    #[test]
    fn constant_function_fails_odd_index() {
        let reports = check_laws(|_| Ok(Complex64::new(1.0, 0.0)), 3, &[sample()]);
        let z1 = reports.iter().find(|r| r.law == Law::ZPlus1).unwrap();
        assert!(!z1.passes(1e-9));
    }

    #[test]
    fn errors_are_flagged_not_fatal() {
        let reports = check_laws(
            |p| {
                if p.tau.re > 0.5 {
                    Err(GenusError::PoleProximity { vertex: None, slot: 1, magnitude: 0.0 })
                } else {
                    Ok(Complex64::new(1.0, 0.0))
                }
            },
            0,
            &[sample()],
        );
        let flagged: Vec<_> = reports.iter().filter(|r| matches!(r.outcome, LawOutcome::Flagged(_))).collect();
        assert_eq!(flagged.len(), 1);
        assert_eq!(flagged[0].law, Law::TauPlus1);
        assert!(!flagged[0].passes(1.0));
    }

    #[test]
    fn nonnegative_offsets() {
        let s = QSeries::<SparseLaurent>::one(3);
        assert!(fourier_nonnegative(&s));
        assert!(!fourier_nonnegative(&s.clone().with_offset(Rational64::from_integer(-1))));
        assert!(fourier_nonnegative(&s.with_offset(Rational64::new(1, 8))));
    }
}
