//! Complex numbers on the command line.
//!
//! Accepted forms: `3`, `-2.5e-3`, `2i`, `-i`, `1.5-2i`, `-1e3+4.25e-1i`.
//! Whitespace is ignored. [`format_complex`] writes the shortest form that
//! parses back to the identical value.

use std::fmt;

use moc_core::Complex64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexParseError(pub String);

impl fmt::Display for ComplexParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid complex number {:?} (expected e.g. 1.5-2i)", self.0)
    }
}

impl std::error::Error for ComplexParseError {}

pub fn parse_complex(input: &str) -> Result<Complex64, ComplexParseError> {
    let err = || ComplexParseError(input.to_string());
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(&s).ok_or_else(err)?, 0.0));
    };
    // the imaginary part starts at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k]).ok_or_else(err)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => real(other).ok_or_else(err)?,
    };
    Ok(Complex64::new(re, im))
}

fn real(s: &str) -> Option<f64> {
    // rejects inf/nan spellings
    if !s.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-')) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{}{:?}i", z.re, sign, z.im.abs())
}
