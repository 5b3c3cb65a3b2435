//! Exact rational helpers shared by the constraint and LP code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 gives up on huge numerators/denominators.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact conversion of a finite binary64 value.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Parses `"p/q"`, an integer, or a decimal such as `"0.125"` / `"-1.5e-2"`
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let fail = || Error::ParseFailure { what: "rational", input: text.to_string() };
    let s = text.trim();
    if s.is_empty() {
        return Err(fail());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| fail())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| fail())?;
        if q.is_zero() {
            return Err(fail());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(idx) => (&s[..idx], s[idx + 1..].parse::<i32>().map_err(|_| fail())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fractional) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fractional.is_empty() {
        return Err(fail());
    }
    if !whole.chars().chain(fractional.chars()).all(|c| c.is_ascii_digit()) {
        return Err(fail());
    }
    let all_digits = format!("{whole}{fractional}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).map_err(|_| fail())?;
    let scale = exponent - fractional.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn to_i64(r: &Rational) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Formats as `p` or `p/q`.
pub fn display(r: &Rational) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reads a JSON number or `"p/q"` string exactly.
pub fn from_json(value: &serde_json::Value) -> Result<Rational> {
    match value {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::ParseFailure { what: "rational", input: other.to_string() }),
    }
}

/// Writes integers as JSON integers and everything else as a `"p/q"` string.
pub fn to_json(r: &Rational) -> serde_json::Value {
    match to_i64(r) {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(display(r)),
    }
}
