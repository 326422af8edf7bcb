use alloc::vec;
use alloc::vec::Vec;

use num_rational::Rational64;

use super::ring::{Ring, UnitInverse};
use super::SeriesError;

/// Truncated series `q^offset * sum_{k < trunc} c_k q^k + O(q^{offset + trunc})`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<R> {
    offset: Rational64,
    coeffs: Vec<R>,
}

impl<R: Ring> QSeries<R> {
    pub fn new(offset: Rational64, coeffs: Vec<R>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::EmptySeries);
        }
        Ok(Self { offset, coeffs })
    }

    /// The constant `c + O(q^trunc)`.
    pub fn constant(c: R, trunc: usize) -> Self {
        let trunc = trunc.max(1);
        let mut coeffs = vec![R::zero(); trunc];
        coeffs[0] = c;
        Self {
            offset: Rational64::from_integer(0),
            coeffs,
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(R::one(), trunc)
    }

    pub fn zero(trunc: usize) -> Self {
        Self::constant(R::zero(), trunc)
    }

    pub fn offset(&self) -> Rational64 {
        self.offset
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&R> {
        self.coeffs.get(k)
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn with_offset(mut self, offset: Rational64) -> Self {
        self.offset = offset;
        self
    }

    pub fn truncated(&self, trunc: usize) -> Self {
        let trunc = trunc.clamp(1, self.coeffs.len());
        Self {
            offset: self.offset,
            coeffs: self.coeffs[..trunc].to_vec(),
        }
    }

    pub fn map<S: Ring, F: FnMut(&R) -> S>(&self, f: F) -> QSeries<S> {
        QSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::negated)
    }

    /// Cauchy product; offsets add, truncation is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = R::zero();
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.plus(&a.times(b));
            }
            coeffs.push(acc);
        }
        Self {
            offset: self.offset + other.offset,
            coeffs,
        }
    }

    /// Sum of two series whose offsets differ by an integer.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let diff = self.offset - other.offset;
        if !diff.is_integer() {
            return Err(SeriesError::OffsetMismatch(self.offset, other.offset));
        }
        let offset = self.offset.min(other.offset);
        let shift_a = (self.offset - offset).to_integer() as usize;
        let shift_b = (other.offset - offset).to_integer() as usize;
        let trunc = (shift_a + self.trunc()).min(shift_b + other.trunc());
        let pick = |s: &Self, shift: usize, k: usize| -> Option<R> {
            k.checked_sub(shift).and_then(|j| s.coeffs.get(j).cloned())
        };
        let coeffs = (0..trunc)
            .map(|k| match (pick(self, shift_a, k), pick(other, shift_b, k)) {
                (Some(a), Some(b)) => a.plus(&b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => R::zero(),
            })
            .collect();
        Ok(Self { offset, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    /// In-place multiplication by `(1 - c q^power)`.
    pub fn mul_one_minus(&mut self, c: &R, power: usize) {
        if power == 0 {
            let f = R::one().minus(c);
            for x in &mut self.coeffs {
                *x = x.times(&f);
            }
            return;
        }
        for k in (power..self.coeffs.len()).rev() {
            let t = self.coeffs[k - power].times(c);
            if !t.is_zero() {
                self.coeffs[k] = self.coeffs[k].minus(&t);
            }
        }
    }

    /// In-place division by `(1 - c q^power)` for `power >= 1`, expanding the
    /// geometric series.
    pub fn div_one_minus(&mut self, c: &R, power: usize) {
        assert!(power >= 1, "(1 - c) is not a q-series unit in general");
        for k in power..self.coeffs.len() {
            let t = self.coeffs[k - power].times(c);
            if !t.is_zero() {
                self.coeffs[k] = self.coeffs[k].plus(&t);
            }
        }
    }
}

impl<R: UnitInverse> QSeries<R> {
    /// Multiplicative inverse to the same truncation; the offset is negated.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let inv0 = self.coeffs[0]
            .unit_inverse()
            .ok_or(SeriesError::NonUnitLeadingCoefficient)?;
        let n = self.trunc();
        let mut out: Vec<R> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = R::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if a.is_zero() {
                    continue;
                }
                acc = acc.plus(&a.times(&out[k - j]));
            }
            out.push(acc.times(&inv0).negated());
        }
        Ok(Self {
            offset: -self.offset,
            coeffs: out,
        })
    }
}
