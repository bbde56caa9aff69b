//! Exact rational arithmetic used throughout the crate.
//!
//! All thresholds, expectations and competitive ratios are exact rationals;
//! no floating point enters any decision path. Floats appear only in
//! human-facing decimal columns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rat = BigRational;

/// Rational from a non-negative integer.
pub fn rat_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics when `den` is zero.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p/q`, or just `p` when it is an integer.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    BadInt(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p/q`, a plain integer, or a decimal literal.
///
/// Decimals convert exactly with a power-of-ten denominator, so `1.1`
/// means 11/10, not the nearest double.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| RatParseError::BadInt(num.into()))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| RatParseError::BadInt(den.into()))?;
        if d.is_zero() {
            return Err(RatParseError::ZeroDenominator(s.into()));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part =
            BigInt::from_str(if int.is_empty() { "0" } else { int }).map_err(|_| RatParseError::BadInt(int.into()))?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RatParseError::BadInt(frac.into()));
        }
        let frac_num = BigInt::from_str(frac).map_err(|_| RatParseError::BadInt(frac.into()))?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_rat = Rat::new(frac_num, den);
        let int_rat = Rat::from_integer(int_part);
        return Ok(if negative { int_rat - frac_rat } else { int_rat + frac_rat });
    }
    let n = BigInt::from_str(s).map_err(|_| RatParseError::BadInt(s.into()))?;
    Ok(Rat::from_integer(n))
}

/// True when `r` is a non-negative integer (used for `R*k` integrality checks).
pub fn is_non_negative(r: &Rat) -> bool {
    !r.is_negative()
}
