use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ring::{Ring, UnitInverse};

/// Exponents of `(Yh, U, V)` where `Yh = y^{1/2}`.
pub type Exponent = [i32; 3];

const ZERO_EXP: Exponent = [0, 0, 0];

fn exp_add(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Sparse Laurent polynomial in `Yh`, `U`, `V` over the integers.
///
/// Terms are kept in a `BTreeMap`, so iteration (and display) follows the
/// lexicographic order of the exponent triple. Zero coefficients are never
/// stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseLaurent {
    terms: BTreeMap<Exponent, BigInt>,
}

impl SparseLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(ZERO_EXP, BigInt::from(c))
    }

    pub fn monomial(exp: Exponent, coeff: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// `Yh^e`.
    pub fn yh(e: i32) -> Self {
        Self::monomial([e, 0, 0], BigInt::one())
    }

    /// `U^a V^b`.
    pub fn uv(a: i32, b: i32) -> Self {
        Self::monomial([0, a, b], BigInt::one())
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut terms: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in iter {
            *terms.entry(e).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// Returns `(exponent, ±1)` when `self` is a signed monomial, the units
    /// of this ring.
    pub fn as_unit(&self) -> Option<(Exponent, i32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((*e, 1))
        } else if (-c).is_one() {
            Some((*e, -1))
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Multiplies by `sign * Yh^e0 U^e1 V^e2`.
    pub fn shift(&self, exp: Exponent, sign: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (exp_add(e, &exp), if sign < 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Applies an exponent substitution term by term, e.g. `(U, V) -> (U^-1, V^-1)`.
    pub fn map_exponents<F>(&self, f: F) -> Self
    where
        F: Fn(Exponent) -> Exponent,
    {
        Self::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// True when every stored term has a `Yh`-exponent of the given parity.
    pub fn yh_parity_is(&self, odd: bool) -> bool {
        self.terms.keys().all(|e| (e[0].rem_euclid(2) == 1) == odd)
    }

    /// Evaluates at numeric `(Yh, U, V)`.
    pub fn eval(&self, yh: Complex64, u: Complex64, v: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                yh.powi(e[0]) * u.powi(e[1]) * v.powi(e[2]) * c
            })
            .sum()
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(*e).or_default();
            if negate_other {
                *slot -= c;
            } else {
                *slot += c;
            }
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        Self { terms }
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut raw: Vec<(Exponent, BigInt)> = Vec::with_capacity(self.len() * other.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                raw.push((exp_add(ea, eb), ca * cb));
            }
        }
        raw.sort_unstable_by_key(|t| t.0);
        let mut terms = BTreeMap::new();
        let mut iter = raw.into_iter();
        if let Some((mut cur_e, mut cur_c)) = iter.next() {
            for (e, c) in iter {
                if e == cur_e {
                    cur_c += c;
                } else {
                    if !cur_c.is_zero() {
                        terms.insert(cur_e, cur_c);
                    }
                    cur_e = e;
                    cur_c = c;
                }
            }
            if !cur_c.is_zero() {
                terms.insert(cur_e, cur_c);
            }
        }
        Self { terms }
    }
}

impl Add for &SparseLaurent {
    type Output = SparseLaurent;
    fn add(self, rhs: &SparseLaurent) -> SparseLaurent {
        self.combine(rhs, false)
    }
}

impl Sub for &SparseLaurent {
    type Output = SparseLaurent;
    fn sub(self, rhs: &SparseLaurent) -> SparseLaurent {
        self.combine(rhs, true)
    }
}

impl Mul for &SparseLaurent {
    type Output = SparseLaurent;
    fn mul(self, rhs: &SparseLaurent) -> SparseLaurent {
        self.product(rhs)
    }
}

impl Neg for &SparseLaurent {
    type Output = SparseLaurent;
    fn neg(self) -> SparseLaurent {
        SparseLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Ring for SparseLaurent {
    fn zero() -> Self {
        SparseLaurent::zero()
    }
    fn one() -> Self {
        SparseLaurent::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl UnitInverse for SparseLaurent {
    fn unit_inverse(&self) -> Option<Self> {
        let (e, sign) = self.as_unit()?;
        Some(Self::monomial(
            [-e[0], -e[1], -e[2]],
            BigInt::from(sign),
        ))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &Exponent) -> fmt::Result {
    let mut first = true;
    for (name, k) in [("Yh", e[0]), ("U", e[1]), ("V", e[2])] {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if k == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for SparseLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *e == ZERO_EXP {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparseLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseLaurent({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(terms: &[(Exponent, i64)]) -> SparseLaurent {
        SparseLaurent::from_terms(terms.iter().map(|(e, c)| (*e, BigInt::from(*c))))
    }

    #[test]
    fn inverse_monomials_multiply_to_one() {
        assert_eq!(&SparseLaurent::yh(1) * &SparseLaurent::yh(-1), SparseLaurent::one());
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[([0, 0, 0], 1), ([0, 1, 0], -1)]);
        let b = p(&[([0, 0, 0], 1), ([0, 1, 0], 1)]);
        assert_eq!(&a * &b, p(&[([0, 0, 0], 1), ([0, 2, 0], -1)]));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let a = p(&[([1, 0, 0], 2), ([1, 0, 0], -2), ([0, 0, 0], 0)]);
        assert!(a.is_zero());
        let b = p(&[([0, 1, 0], 1)]);
        assert!((&b - &b).is_zero());
    }

    #[test]
    fn units_are_signed_monomials() {
        assert_eq!(p(&[([1, 2, -3], -1)]).as_unit(), Some(([1, 2, -3], -1)));
        assert_eq!(p(&[([1, 2, -3], 2)]).as_unit(), None);
        assert_eq!(p(&[([0, 0, 0], 1), ([0, 1, 0], 1)]).as_unit(), None);
        let u = p(&[([1, -1, 0], -1)]);
        assert_eq!(&u * &u.unit_inverse().unwrap(), SparseLaurent::one());
    }

    #[test]
    fn display_is_lexicographic() {
        let a = p(&[([1, 0, 0], -1), ([-1, 0, 0], 1), ([0, 2, -1], 3), ([0, 0, 0], -4)]);
        assert_eq!(a.to_string(), "Yh^-1 - 4 + 3*U^2*V^-1 - Yh");
        assert_eq!(SparseLaurent::zero().to_string(), "0");
    }

    #[test]
    fn eval_matches_hand_computation() {
        let a = p(&[([1, 0, 0], 1), ([0, 1, -1], -2)]);
        let yh = Complex64::new(0.5, 0.25);
        let u = Complex64::new(1.5, -0.5);
        let v = Complex64::new(-0.3, 0.9);
        let expect = yh - u / v * 2.0;
        assert!((a.eval(yh, u, v) - expect).norm() < 1e-14);
    }
}
