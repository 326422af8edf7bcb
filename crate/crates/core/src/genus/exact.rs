use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::GenusError;
use crate::series::{QSeries, RatFunc, Ring, SparseLaurent};
use crate::theta::{self, ratio_parts};
use crate::toric::{self, ToricDiagram, WeightVector};

#[derive(Debug, Clone, PartialEq)]
pub struct ExactGenus {
    pub diagram: String,
    pub trunc: usize,
    pub series: QSeries<RatFunc>,
}

/// `numer / prod (1 - U^a V^b)^mult` with every pole key `(a, b)`
/// lexicographically positive.
struct FactoredTerm {
    numer: QSeries<SparseLaurent>,
    poles: BTreeMap<[i32; 2], u32>,
}

fn is_positive(k: [i32; 2]) -> bool {
    k[0] > 0 || (k[0] == 0 && k[1] > 0)
}

fn one_minus(k: [i32; 2]) -> SparseLaurent {
    &SparseLaurent::one() - &SparseLaurent::uv(k[0], k[1])
}

fn vertex_factored(weights: &[WeightVector; 3], trunc: usize) -> Result<FactoredTerm, GenusError> {
    let mut numer: Option<QSeries<SparseLaurent>> = None;
    let mut poles = BTreeMap::new();
    for w in weights {
        let parts = ratio_parts(*w, trunc)?;
        let mut n = parts.numer;
        let mut key = parts.pole;
        if !is_positive(key) {
            // 1/(1 - X) = -X^{-1} / (1 - X^{-1})
            n = n.map(|c| c.shift([0, -key[0], -key[1]], -1));
            key = [-key[0], -key[1]];
        }
        *poles.entry(key).or_insert(0) += 1;
        numer = Some(match numer {
            None => n,
            Some(acc) => acc.mul(&n),
        });
    }
    Ok(FactoredTerm {
        numer: numer.expect("three weights per vertex"),
        poles,
    })
}

/// Sums factored terms over the least common multiple of their pole
/// factors, then multiplies the denominator by `den_scale`.
fn sum_factored(terms: &[FactoredTerm], trunc: usize, den_scale: i64) -> QSeries<RatFunc> {
    let mut lcm: BTreeMap<[i32; 2], u32> = BTreeMap::new();
    for t in terms {
        for (k, m) in &t.poles {
            let e = lcm.entry(*k).or_insert(0);
            *e = (*e).max(*m);
        }
    }
    let mut total = QSeries::<SparseLaurent>::zero(trunc);
    for t in terms {
        let mut cofactor = SparseLaurent::one();
        for (k, m) in &lcm {
            let have = t.poles.get(k).copied().unwrap_or(0);
            cofactor = &cofactor * &one_minus(*k).pow(m - have);
        }
        let lifted = t.numer.map(|c| c * &cofactor);
        total = total.add(&lifted).expect("all vertex terms have offset 0");
    }
    let mut den = SparseLaurent::constant(den_scale);
    for (k, m) in &lcm {
        den = &den * &one_minus(*k).pow(*m);
    }
    total.map(|c| RatFunc::new(c.clone(), den.clone()).expect("product of nonzero binomials"))
}

/// Exact q-expansion of one vertex term `prod_j theta1(z + w_j)/theta1(w_j)`.
pub fn vertex_term_qexp(weights: &[WeightVector; 3], trunc: usize) -> Result<QSeries<RatFunc>, GenusError> {
    let t = vertex_factored(weights, trunc)?;
    Ok(sum_factored(&[t], trunc, 1))
}

fn vertex_terms(d: &ToricDiagram, trunc: usize) -> Result<Vec<FactoredTerm>, GenusError> {
    d.trivalent()
        .iter()
        .map(|v| vertex_factored(&v.weights, trunc))
        .collect()
}

/// Genus as a q-series over `RatFunc`, `trunc` coefficients.
pub fn genus_qexp(d: &ToricDiagram, trunc: usize) -> Result<ExactGenus, GenusError> {
    toric::require_valid(d)?;
    let trunc = trunc.max(1);
    let terms = vertex_terms(d, trunc)?;
    Ok(ExactGenus {
        diagram: d.name().to_string(),
        trunc,
        series: sum_factored(&terms, trunc, 1),
    })
}

/// `(Z(t) + Z(-t)) / 2` where `Z(-t)` is the genus of the weight-negated diagram.
pub fn averaged_genus_qexp(d: &ToricDiagram, trunc: usize) -> Result<ExactGenus, GenusError> {
    toric::require_valid(d)?;
    let trunc = trunc.max(1);
    let mut terms = vertex_terms(d, trunc)?;
    terms.extend(vertex_terms(&toric::negate_weights(d), trunc)?);
    Ok(ExactGenus {
        diagram: d.name().to_string(),
        trunc,
        series: sum_factored(&terms, trunc, 2),
    })
}

/// `(chi / 2) theta1(tau, 2z) / theta1(tau, z)` with coefficients over `2`.
pub fn reference_genus_qexp(chi: i64, trunc: usize) -> QSeries<RatFunc> {
    let chi = BigInt::from(chi);
    let two = SparseLaurent::constant(2);
    theta::theta_quotient_qexp(trunc)
        .map(|c| RatFunc::new(c.scale(&chi), two.clone()).expect("2 is nonzero"))
}

/// Substitutes `(U, V) -> (U^-1, V^-1)` in every coefficient.
pub fn uv_inverted(s: &QSeries<RatFunc>) -> QSeries<RatFunc> {
    s.map(|c| c.map_exponents(|e| [e[0], -e[1], -e[2]]))
}

/// Index of the first q-coefficient where two series differ under
/// cross-multiplied equality, comparing up to the shorter truncation.
/// Offsets must agree.
pub fn first_mismatch<R: Ring>(a: &QSeries<R>, b: &QSeries<R>) -> Option<usize> {
    if a.offset() != b.offset() {
        return Some(0);
    }
    a.coeffs().iter().zip(b.coeffs()).position(|(x, y)| x != y)
}
