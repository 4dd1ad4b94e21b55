//! Exact rational parsing, formatting, and small construction helpers.
//!
//! All probabilities and scores in this crate are `BigRational`. Text input
//! accepts `"a/b"`, plain integers, and decimal literals; decimals are read
//! as exact decimal fractions (`"0.4375"` becomes `7/16`), never via
//! floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand constructor from machine integers.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The constant 1/2, used as the default degenerate-outcome convention.
pub fn half() -> BigRational {
    ratio(1, 2)
}

/// Parses `"a/b"`, an integer, or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    let (negative, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    let magnitude = if let Some((numer, denom)) = body.split_once('/') {
        let numer = parse_bigint(numer)?;
        let denom = parse_bigint(denom)?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {trimmed:?}")));
        }
        BigRational::new(numer, denom)
    } else if let Some((int_part, frac_part)) = body.split_once('.') {
        if frac_part.is_empty() {
            return Err(Error::Parse(format!(
                "missing digits after '.' in {trimmed:?}"
            )));
        }
        let int_part = if int_part.is_empty() {
            BigInt::zero()
        } else {
            parse_bigint(int_part)?
        };
        let frac = parse_bigint(frac_part)?;
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        BigRational::new(int_part * &scale + frac, scale)
    } else {
        BigRational::from_integer(parse_bigint(body)?)
    };
    Ok(if negative { -magnitude } else { magnitude })
}

fn parse_bigint(text: &str) -> Result<BigInt> {
    let trimmed = text.trim();
    if trimmed.is_empty() || !trimmed.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!(
            "expected unsigned integer, found {trimmed:?}"
        )));
    }
    trimmed
        .parse()
        .map_err(|e| Error::Parse(format!("bad integer {trimmed:?}: {e}")))
}

/// Renders a rational as `"a/b"`, or `"a"` when the denominator is one.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

/// Nearest-`f64` rendering for reports; the exact value stays rational.
pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Lossless conversion from a finite float (binary expansion, no rounding).
pub fn from_f64(value: f64) -> Result<BigRational> {
    BigRational::from_float(value)
        .ok_or_else(|| Error::InvalidInput(format!("non-finite value {value}")))
}

/// True when `value` lies in the closed unit interval.
pub fn is_probability(value: &BigRational) -> bool {
    *value >= BigRational::zero() && *value <= BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_forms() {
        assert_eq!(parse_rational("7/16").unwrap(), ratio(7, 16));
        assert_eq!(parse_rational(" -3/4 ").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("5").unwrap(), ratio(5, 1));
        assert_eq!(parse_rational("+2/6").unwrap(), ratio(1, 3));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.4375").unwrap(), ratio(7, 16));
        assert_eq!(parse_rational("0.0625").unwrap(), ratio(1, 16));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("2.").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&ratio(31, 48)), "31/48");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
    }

    #[test]
    fn float_round_trip_is_lossless() {
        let v = from_f64(0.1).unwrap();
        assert_eq!(to_f64(&v), 0.1);
        assert_ne!(v, ratio(1, 10)); // 0.1 is not exactly 1/10 in binary
        assert!(from_f64(f64::NAN).is_err());
    }
}
