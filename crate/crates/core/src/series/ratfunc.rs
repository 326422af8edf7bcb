use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;

use super::laurent::SparseLaurent;
use super::ring::{Ring, UnitInverse};
use super::SeriesError;

/// Quotient `num / den` of two Laurent polynomials.
///
/// No GCD reduction is ever performed. Equality is decided by
/// cross-multiplication, which is a decision procedure over the integral
/// domain `Z[Yh^±1, U^±1, V^±1]`. Sums of fractions that share a
/// structurally identical denominator keep it, which is what keeps q-series
/// products from blowing up.
#[derive(Clone)]
pub struct RatFunc {
    num: SparseLaurent,
    den: SparseLaurent,
}

impl RatFunc {
    pub fn new(num: SparseLaurent, den: SparseLaurent) -> Result<Self, SeriesError> {
        if den.is_zero() {
            return Err(SeriesError::ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(num: SparseLaurent) -> Self {
        Self {
            num,
            den: SparseLaurent::one(),
        }
    }

    /// `1 / n`.
    pub fn reciprocal_of_integer(n: i64) -> Result<Self, SeriesError> {
        Self::new(SparseLaurent::one(), SparseLaurent::constant(n))
    }

    pub fn num(&self) -> &SparseLaurent {
        &self.num
    }

    pub fn den(&self) -> &SparseLaurent {
        &self.den
    }

    pub fn into_parts(self) -> (SparseLaurent, SparseLaurent) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies the numerator only.
    pub fn mul_poly(&self, p: &SparseLaurent) -> Self {
        Self {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    /// Divides by a nonzero polynomial.
    pub fn div_poly(&self, p: &SparseLaurent) -> Result<Self, SeriesError> {
        if p.is_zero() {
            return Err(SeriesError::ZeroDenominator);
        }
        Ok(Self {
            num: self.num.clone(),
            den: &self.den * p,
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Applies the same exponent substitution to numerator and denominator.
    pub fn map_exponents<F>(&self, f: F) -> Self
    where
        F: Fn([i32; 3]) -> [i32; 3],
    {
        Self {
            num: self.num.map_exponents(&f),
            den: self.den.map_exponents(&f),
        }
    }

    /// Value at numeric `(Yh, U, V)`; the caller must avoid zeros of the denominator.
    pub fn eval(&self, yh: Complex64, u: Complex64, v: Complex64) -> Complex64 {
        self.num.eval(yh, u, v) / self.den.eval(yh, u, v)
    }

    /// Odd `Yh`-parity: odd numerator over even denominator (or a zero numerator).
    pub fn has_odd_yh_parity(&self) -> bool {
        self.num.yh_parity_is(true) && self.den.yh_parity_is(false)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        Self::from_poly(SparseLaurent::zero())
    }
    fn one() -> Self {
        Self::from_poly(SparseLaurent::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        if other.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return Self {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        Self {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }
    fn times(&self, other: &Self) -> Self {
        Self {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }
    fn negated(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl UnitInverse for RatFunc {
    fn unit_inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self {
                num: self.den.clone(),
                den: self.num.clone(),
            })
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == SparseLaurent::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_u(k: i32) -> SparseLaurent {
        &SparseLaurent::one() - &SparseLaurent::uv(k, 0)
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatFunc::new(SparseLaurent::one(), SparseLaurent::zero()).unwrap_err(),
            SeriesError::ZeroDenominator
        );
    }

    #[test]
    fn additive_identity() {
        let a = RatFunc::new(SparseLaurent::one(), one_minus_u(1)).unwrap();
        assert_eq!(a.plus(&RatFunc::zero()), a);
    }

    #[test]
    fn partial_fractions_sum_to_one() {
        // 1/(1-U) + 1/(1-U^-1) = (2-U-U^-1)/(2-U-U^-1)
        let a = RatFunc::new(SparseLaurent::one(), one_minus_u(1)).unwrap();
        let b = RatFunc::new(SparseLaurent::one(), one_minus_u(-1)).unwrap();
        let s = a.plus(&b);
        assert_eq!(s, RatFunc::one());
        assert_eq!(s.num(), s.den());
    }

    #[test]
    fn equal_denominators_are_kept() {
        let d = one_minus_u(1);
        let a = RatFunc::new(SparseLaurent::yh(1), d.clone()).unwrap();
        let b = RatFunc::new(SparseLaurent::yh(3), d.clone()).unwrap();
        assert_eq!(a.plus(&b).den(), &d);
    }

    #[test]
    fn parity_check() {
        let a = RatFunc::new(SparseLaurent::yh(1), one_minus_u(1)).unwrap();
        assert!(a.has_odd_yh_parity());
        let b = RatFunc::new(SparseLaurent::yh(2), one_minus_u(1)).unwrap();
        assert!(!b.has_odd_yh_parity());
        assert!(RatFunc::zero().has_odd_yh_parity());
    }
}
