//! The odd Jacobi theta function `theta1(tau, z)`.
//!
//! Branch conventions: `q^{1/8} = e^{pi i tau / 4}`, `y^{±1/2} = e^{±pi i z}`.
//! With these the classical quasi-periodicity and modular laws hold exactly
//! as usually written, including `theta1(-1/tau, z/tau) =
//! -i sqrt(tau/i) e^{pi i z^2/tau} theta1(tau, z)` with the principal root.
//!
//! Exact expansions live in `Z[Yh^±1, U^±1, V^±1]` with `Yh = y^{1/2}`. The
//! scalar `i`, the `q^{1/8}` and the `Yh^{-1}` prefactor of a single theta
//! are carried as metadata in [`ThetaQExp`], so quotients of thetas never see
//! fractional exponents.

use core::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Float;


use crate::series::{QSeries, RatFunc, SparseLaurent};
use crate::toric::WeightVector;

/// Truncation tolerance used when callers have no better idea.
pub const DEFAULT_TOL: f64 = 1e-15;

/// Minimum number of product factors in numeric evaluation.
const MIN_FACTORS: usize = 8;
const MAX_FACTORS: usize = 1_000_000;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ThetaError {
    #[error("Im tau = {0} is not positive; the q-series does not converge")]
    NonconvergentDomain(f64),
    #[error("weight vector (0,0) has no theta ratio")]
    ZeroWeight,
}

/// Evaluation point `(tau, z, t1, t2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParams {
    pub tau: Complex64,
    pub z: Complex64,
    pub t1: Complex64,
    pub t2: Complex64,
}

impl ComplexParams {
    pub fn new(tau: Complex64, z: Complex64, t1: Complex64, t2: Complex64) -> Result<Self, ThetaError> {
        check_tau(tau)?;
        Ok(Self { tau, z, t1, t2 })
    }

    /// `a t1 + b t2`.
    pub fn pair(&self, w: WeightVector) -> Complex64 {
        self.t1 * f64::from(w.a) + self.t2 * f64::from(w.b)
    }

    pub fn q(&self) -> Complex64 {
        nome(self.tau)
    }
}

pub(crate) fn check_tau(tau: Complex64) -> Result<(), ThetaError> {
    if tau.im > 0.0 && tau.im.is_finite() {
        Ok(())
    } else {
        Err(ThetaError::NonconvergentDomain(tau.im))
    }
}

/// `e^{2 pi i x}`.
pub fn e2pi(x: Complex64) -> Complex64 {
    (I * 2.0 * PI * x).exp()
}

pub fn nome(tau: Complex64) -> Complex64 {
    e2pi(tau)
}

/// `theta1` from the triple product, with the number of factors chosen so the
/// omitted ones differ from 1 by less than `tol / 10`.
pub fn theta1(tau: Complex64, z: Complex64, tol: f64) -> Result<Complex64, ThetaError> {
    check_tau(tau)?;
    let q = nome(tau);
    let y = e2pi(z);
    let y_inv = y.inv();
    let qn = q.norm();
    let spread = y.norm().max(y_inv.norm()).max(1.0);

    let mut prod = Complex64::new(1.0, 0.0);
    let mut q_pow = Complex64::new(1.0, 0.0); // q^{m-1}
    let mut m = 1usize;
    loop {
        let q_next = q_pow * q; // q^m
        prod *= (Complex64::new(1.0, 0.0) - q_next)
            * (Complex64::new(1.0, 0.0) - y * q_pow)
            * (Complex64::new(1.0, 0.0) - y_inv * q_next);
        q_pow = q_next;
        if m >= MIN_FACTORS && Float::powi(qn, m as i32) * spread < tol / 10.0 {
            break;
        }
        if m >= MAX_FACTORS {
            return Err(ThetaError::NonconvergentDomain(tau.im));
        }
        m += 1;
    }
    let prefactor = I * (I * PI * tau / 4.0).exp() * (-I * PI * z).exp();
    Ok(prefactor * prod)
}

/// `theta1` from its bilateral sum `i sum_n (-1)^n q^{(n-1/2)^2/2} y^{n-1/2}`.
pub fn theta1_sum(tau: Complex64, z: Complex64, tol: f64) -> Result<Complex64, ThetaError> {
    check_tau(tau)?;
    let term = |n: i64| -> Complex64 {
        let h = n as f64 - 0.5;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        (I * PI * tau * h * h + I * 2.0 * PI * z * h).exp() * sign
    };
    // |term| is a Gaussian in n peaking near 1/2 - Im z / Im tau.
    let peak = Float::round(0.5 - z.im / tau.im) as i64;
    let mut sum = term(peak);
    let mut step = 1i64;
    loop {
        let hi = term(peak + step);
        let lo = term(peak - step);
        sum += hi + lo;
        let scale = sum.norm().max(1.0);
        if step >= 4 && hi.norm() < tol * scale / 10.0 && lo.norm() < tol * scale / 10.0 {
            break;
        }
        if step as usize >= MAX_FACTORS {
            return Err(ThetaError::NonconvergentDomain(tau.im));
        }
        step += 1;
    }
    Ok(I * sum)
}

/// Exact expansion `theta1 = i * q^{1/8} * Yh^{-1} * body`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaQExp {
    pub scalar_i: bool,
    pub q_offset: Rational64,
    pub yh_offset: i32,
    pub body: QSeries<SparseLaurent>,
}

impl ThetaQExp {
    /// `Yh^{-1} * body` with offset `1/8`: the q-expansion of `theta1 / i`.
    pub fn without_i(&self) -> QSeries<SparseLaurent> {
        self.body
            .map(|c| c.shift([self.yh_offset, 0, 0], 1))
            .with_offset(self.q_offset)
    }
}

/// `prod_{m>=1} (1 - q^m)(1 - Yh^2 q^{m-1})(1 - Yh^{-2} q^m)` to `trunc` coefficients.
pub fn theta1_qexp(trunc: usize) -> ThetaQExp {
    let trunc = trunc.max(1);
    let mut body = QSeries::<SparseLaurent>::one(trunc);
    let one = SparseLaurent::one();
    let y = SparseLaurent::yh(2);
    let y_inv = SparseLaurent::yh(-2);
    for m in 1..=trunc {
        if m < trunc {
            body.mul_one_minus(&one, m);
            body.mul_one_minus(&y_inv, m);
        }
        body.mul_one_minus(&y, m - 1);
    }
    ThetaQExp {
        scalar_i: true,
        q_offset: Rational64::new(1, 8),
        yh_offset: -1,
        body,
    }
}

/// `theta1(tau, z + w) / theta1(tau, w) = numer / (1 - U^a V^b)`, with
/// `numer` a series over Laurent polynomials.
#[derive(Debug, Clone)]
pub(crate) struct RatioParts {
    pub numer: QSeries<SparseLaurent>,
    /// Exponents `(a, b)` of the pole factor `1 - U^a V^b`.
    pub pole: [i32; 2],
}

pub(crate) fn ratio_parts(w: WeightVector, trunc: usize) -> Result<RatioParts, ThetaError> {
    if w.is_zero() {
        return Err(ThetaError::ZeroWeight);
    }
    let trunc = trunc.max(1);
    let x = SparseLaurent::uv(w.a, w.b);
    let x_inv = SparseLaurent::uv(-w.a, -w.b);
    let yx = &SparseLaurent::yh(2) * &x;
    let yx_inv = &SparseLaurent::yh(-2) * &x_inv;

    // The i, q^{1/8} and (1 - q^m) factors cancel; the y^{-1/2} survives.
    let mut numer = QSeries::constant(SparseLaurent::yh(-1), trunc);
    let mut denom = QSeries::<SparseLaurent>::one(trunc);
    for m in 1..trunc {
        numer.mul_one_minus(&yx_inv, m);
        denom.mul_one_minus(&x_inv, m);
        numer.mul_one_minus(&yx, m);
        denom.mul_one_minus(&x, m);
    }
    numer.mul_one_minus(&yx, 0);
    // denom now has constant term 1 and is a unit; (1 - X) stays symbolic.
    let inv = denom
        .invert()
        .expect("constant term of the reduced theta denominator is 1");
    Ok(RatioParts {
        numer: numer.mul(&inv),
        pole: [w.a, w.b],
    })
}

/// Exact q-expansion of `theta1(tau, z + a t1 + b t2) / theta1(tau, a t1 + b t2)`.
///
/// The `y^{-1/2}` prefactor is folded into the coefficients, so the q⁰
/// coefficient for `w = (1,0)` is `Yh^{-1} (1 - Yh^2 U) / (1 - U)`.
pub fn theta_ratio_qexp(w: WeightVector, trunc: usize) -> Result<QSeries<RatFunc>, ThetaError> {
    let parts = ratio_parts(w, trunc)?;
    let den = &SparseLaurent::one() - &SparseLaurent::uv(parts.pole[0], parts.pole[1]);
    Ok(parts.numer.map(|c| {
        RatFunc::new(c.clone(), den.clone()).expect("1 - U^a V^b is nonzero for w != 0")
    }))
}

/// `A(q, y, X) = prod_{n>=1} (1 - yX q^{n-1})(1 - (yX)^{-1} q^n) / ((1 - X q^{n-1})(1 - X^{-1} q^n))`
/// with `X = U^a V^b`, expanded factor by factor as geometric series.
pub fn a_series_at(a: i32, b: i32, trunc: usize) -> QSeries<RatFunc> {
    let trunc = trunc.max(1);
    let lift = |p: SparseLaurent| RatFunc::from_poly(p);
    let x = SparseLaurent::uv(a, b);
    let x_inv = SparseLaurent::uv(-a, -b);
    let yx = lift(&SparseLaurent::yh(2) * &x);
    let yx_inv = lift(&SparseLaurent::yh(-2) * &x_inv);
    let x_r = lift(x.clone());
    let x_inv_r = lift(x_inv);

    let mut s = QSeries::<RatFunc>::one(trunc);
    for n in 1..=trunc {
        s.mul_one_minus(&yx, n - 1);
        if n < trunc {
            s.mul_one_minus(&yx_inv, n);
            s.div_one_minus(&x_inv_r, n);
        }
        if n >= 2 {
            s.div_one_minus(&x_r, n - 1);
        }
    }
    let pole = &SparseLaurent::one() - &x;
    s.map(|c| c.div_poly(&pole).expect("pole factor is nonzero"))
}

/// `A(q, y, u)` over `RatFunc` in `(Yh, U)`.
pub fn a_series(trunc: usize) -> QSeries<RatFunc> {
    a_series_at(1, 0, trunc)
}

/// `B(q, y) = prod_{n>=1} (1 - y q^{n-1})(1 - y^{-1} q^n) / (1 - q^n)^2`.
pub fn b_series(trunc: usize) -> QSeries<SparseLaurent> {
    let trunc = trunc.max(1);
    let one = SparseLaurent::one();
    let mut numer = QSeries::<SparseLaurent>::one(trunc);
    let mut euler = QSeries::<SparseLaurent>::one(trunc);
    for n in 1..=trunc {
        numer.mul_one_minus(&SparseLaurent::yh(2), n - 1);
        if n < trunc {
            numer.mul_one_minus(&SparseLaurent::yh(-2), n);
            euler.mul_one_minus(&one, n);
        }
    }
    let inv = euler.invert().expect("Euler product has constant term 1");
    numer.mul(&inv).mul(&inv)
}

/// Exact expansion of `theta1(tau, 2z) / theta1(tau, z)` over `Z[Yh^±1]`.
///
/// The q-free factors give `(1 - y^2)/(1 - y) = 1 + y`; what remains of the
/// denominator has constant term 1.
pub fn theta_quotient_qexp(trunc: usize) -> QSeries<SparseLaurent> {
    let trunc = trunc.max(1);
    let lead = &SparseLaurent::yh(-1) + &SparseLaurent::yh(1);
    let mut numer = QSeries::constant(lead, trunc);
    let mut denom = QSeries::<SparseLaurent>::one(trunc);
    for m in 1..trunc {
        numer.mul_one_minus(&SparseLaurent::yh(4), m);
        numer.mul_one_minus(&SparseLaurent::yh(-4), m);
        denom.mul_one_minus(&SparseLaurent::yh(2), m);
        denom.mul_one_minus(&SparseLaurent::yh(-2), m);
    }
    let inv = denom.invert().expect("reduced theta denominator has constant term 1");
    numer.mul(&inv)
}

/// Numeric `A(q, y, u)` in multiplicative variables.
pub fn a_numeric(q: Complex64, y: Complex64, u: Complex64, tol: f64) -> Result<Complex64, ThetaError> {
    let qn = q.norm();
    if qn.is_nan() || qn >= 1.0 {
        return Err(ThetaError::NonconvergentDomain(-Float::ln(qn) / (2.0 * PI)));
    }
    let one = Complex64::new(1.0, 0.0);
    let yu = y * u;
    let spread = [yu.norm(), yu.inv().norm(), u.norm(), u.inv().norm(), 1.0]
        .into_iter()
        .fold(0.0, f64::max);
    let mut acc = one;
    let mut q_prev = one; // q^{n-1}
    let mut n = 1usize;
    loop {
        let q_n = q_prev * q;
        acc *= (one - yu * q_prev) * (one - q_n / yu) / ((one - u * q_prev) * (one - q_n / u));
        q_prev = q_n;
        if n >= MIN_FACTORS && Float::powi(qn, n as i32) * spread < tol / 10.0 {
            return Ok(acc);
        }
        if n >= MAX_FACTORS {
            return Err(ThetaError::NonconvergentDomain(-Float::ln(qn) / (2.0 * PI)));
        }
        n += 1;
    }
}

/// Numeric `B(q, y)`.
pub fn b_numeric(q: Complex64, y: Complex64, tol: f64) -> Result<Complex64, ThetaError> {
    let qn = q.norm();
    if qn.is_nan() || qn >= 1.0 {
        return Err(ThetaError::NonconvergentDomain(-Float::ln(qn) / (2.0 * PI)));
    }
    let one = Complex64::new(1.0, 0.0);
    let spread = y.norm().max(y.inv().norm()).max(1.0);
    let mut acc = one;
    let mut q_prev = one;
    let mut n = 1usize;
    loop {
        let q_n = q_prev * q;
        let e = one - q_n;
        acc *= (one - y * q_prev) * (one - q_n / y) / (e * e);
        q_prev = q_n;
        if n >= MIN_FACTORS && Float::powi(qn, n as i32) * spread < tol / 10.0 {
            return Ok(acc);
        }
        if n >= MAX_FACTORS {
            return Err(ThetaError::NonconvergentDomain(-Float::ln(qn) / (2.0 * PI)));
        }
        n += 1;
    }
}

/// Numeric value of a q-series with rational-function coefficients at a point.
///
/// `Yh = e^{pi i z}`, `U = e^{2 pi i t1}`, `V = e^{2 pi i t2}`.
pub fn specialize(series: &QSeries<RatFunc>, p: &ComplexParams) -> Complex64 {
    let (yh, u, v) = multiplicative(p);
    let q = p.q();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut q_pow = Complex64::new(1.0, 0.0);
    for c in series.coeffs() {
        if !c.is_zero() {
            acc += c.eval(yh, u, v) * q_pow;
        }
        q_pow *= q;
    }
    acc * offset_factor(series.offset(), p.tau)
}

/// Same as [`specialize`] for Laurent-polynomial coefficients.
pub fn specialize_poly(series: &QSeries<SparseLaurent>, p: &ComplexParams) -> Complex64 {
    let (yh, u, v) = multiplicative(p);
    let q = p.q();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut q_pow = Complex64::new(1.0, 0.0);
    for c in series.coeffs() {
        acc += c.eval(yh, u, v) * q_pow;
        q_pow *= q;
    }
    acc * offset_factor(series.offset(), p.tau)
}

fn multiplicative(p: &ComplexParams) -> (Complex64, Complex64, Complex64) {
    ((I * PI * p.z).exp(), e2pi(p.t1), e2pi(p.t2))
}

fn offset_factor(offset: Rational64, tau: Complex64) -> Complex64 {
    let r = *offset.numer() as f64 / *offset.denom() as f64;
    e2pi(tau * r)
}
