//! Complex literals on the command line and in reports.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a complex literal (expected a, bi, a+bi or a-bi)")]
pub struct ComplexParseError(pub String);

fn parse_real(s: &str) -> Option<f64> {
    if s.is_empty() || s.contains(|c: char| c.is_alphabetic() && c != 'e' && c != 'E') {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Imaginary part of `bi`, `i`, `+i`, `-i`.
fn parse_imag(s: &str) -> Option<f64> {
    let body = s.strip_suffix('i')?;
    match body {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(body),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` with decimal reals.
pub fn parse_complex(input: &str) -> Result<Complex64, ComplexParseError> {
    let err = || ComplexParseError(input.to_string());
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    if !s.ends_with('i') {
        return parse_real(&s).map(|re| Complex64::new(re, 0.0)).ok_or_else(err);
    }
    // split before the last sign that is not a leading sign or an exponent sign
    let bytes = s.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = parse_real(&s[..k]).ok_or_else(err)?;
            let im = parse_imag(&s[k..]).ok_or_else(err)?;
            Ok(Complex64::new(re, im))
        }
        None => parse_imag(&s).map(|im| Complex64::new(0.0, im)).ok_or_else(err),
    }
}

/// Fixed-width rendering, stable across runs.
pub fn format_complex(z: Complex64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{re:.15e}{sign}{:.15e}i", im.abs())
}

pub fn format_real(x: f64) -> String {
    format!("{x:.3e}")
}
