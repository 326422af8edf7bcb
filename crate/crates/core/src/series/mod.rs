//! Exact arithmetic kernel.
//!
//! - [`SparseLaurent`]: Laurent polynomials in `Yh = y^{1/2}`, `U`, `V` with
//!   arbitrary-precision integer coefficients.
//! - [`RatFunc`]: quotients of two [`SparseLaurent`] values, compared by
//!   cross-multiplication (no GCD normal form).
//! - [`QSeries`]: truncated power series in `q` with a rational exponent
//!   offset, generic over a [`Ring`] of coefficients.

mod laurent;
mod qseries;
mod ratfunc;
mod ring;

pub use laurent::{Exponent, SparseLaurent};
pub use qseries::QSeries;
pub use ratfunc::RatFunc;
pub use ring::{Ring, UnitInverse};

/// Default number of retained q-coefficients.
pub const DEFAULT_TRUNC: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("leading q-coefficient is not a unit of the coefficient ring")]
    NonUnitLeadingCoefficient,
    #[error("q-offsets {0} and {1} differ by a non-integer")]
    OffsetMismatch(num_rational::Rational64, num_rational::Rational64),
    #[error("a q-series needs at least one coefficient")]
    EmptySeries,
}
