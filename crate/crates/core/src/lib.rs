//! Equivariant elliptic genera of toric Calabi-Yau 3-folds.
//!
//! The genus of a toric diagram is the fixed-point sum
//! `Z = sum_v prod_j theta1(tau, z + w_j) / theta1(tau, w_j)` over trivalent
//! vertices. This crate evaluates it two ways: numerically over `Complex64`,
//! and exactly as a truncated q-series with rational-function coefficients in
//! `y^{1/2}`, `u = e^{2 pi i t1}` and `v = e^{2 pi i t2}`. It also checks the
//! transformation laws of generalized weak Jacobi forms, the collapse of
//! balanced and averaged genera to `(chi/2) theta1(2z)/theta1(z)`, and the
//! residue identities behind that collapse.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod series;
pub mod theta;
pub mod toric;
pub mod genus;
pub mod jacobi;

pub use genus::GenusError;
pub use series::{QSeries, RatFunc, SparseLaurent};
pub use theta::ComplexParams;
pub use toric::{ToricDiagram, WeightVector};
