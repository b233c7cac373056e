//! Exact rational numbers and their textual form.
//!
//! Rationals are written as `p` or `p/q` in lowest terms with a positive
//! denominator. The same syntax is accepted back, along with finite
//! decimals such as `-1.25`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty input")]
    Empty,
    #[error("`{0}` is not an integer, decimal, or fraction")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}

/// Returns the value as an `i64` when it is an integer that fits.
pub fn to_i64(value: &Rational) -> Option<i64> {
    if is_integer(value) {
        value.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn format_rational(value: &Rational) -> String {
    if is_integer(value) {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses an optionally signed integer, finite decimal, or fraction `p/q`.
///
/// Surrounding whitespace is ignored. Both ASCII `-` and the Unicode minus
/// sign are accepted.
pub fn parse_rational(raw: &str) -> Result<Rational, RationalParseError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let malformed = || RationalParseError::Malformed(trimmed.to_string());

    let (negative, body) = if let Some(rest) = trimmed.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = trimmed.strip_prefix('\u{2212}') {
        (true, rest)
    } else if let Some(rest) = trimmed.strip_prefix('+') {
        (false, rest)
    } else {
        (false, trimmed)
    };

    let magnitude = if let Some((numer, denom)) = body.split_once('/') {
        if !all_digits(numer) || !all_digits(denom) {
            return Err(malformed());
        }
        let denom: BigInt = denom.parse().map_err(|_| malformed())?;
        if denom.is_zero() {
            return Err(RationalParseError::ZeroDenominator(trimmed.to_string()));
        }
        let numer: BigInt = numer.parse().map_err(|_| malformed())?;
        Rational::new(numer, denom)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err(malformed());
        }
        if !(whole.is_empty() || all_digits(whole)) || !(frac.is_empty() || all_digits(frac)) {
            return Err(malformed());
        }
        let digits = format!("{whole}{frac}");
        let numer: BigInt = digits.parse().map_err(|_| malformed())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        Rational::new(numer, denom)
    } else {
        if !all_digits(body) {
            return Err(malformed());
        }
        Rational::from_integer(body.parse().map_err(|_| malformed())?)
    };

    Ok(if negative { -magnitude } else { magnitude })
}

/// Serde adapter writing rationals as strings (`"-3"`, `"3/2"`).
///
/// Deserialization also accepts JSON integers.
pub mod serde_rational {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(int(v)),
            Repr::Text(s) => parse_rational(&s).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_decimals_and_fractions() {
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 4/2 ").unwrap(), int(2));
        assert_eq!(parse_rational("1.5").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("+.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("\u{2212}7").unwrap(), int(-7));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("2.").unwrap(), int(2));
    }

    #[test]
    fn rejects_malformed_input() {
        for raw in ["", "  ", "x", "1/0", "1/-2", "--1", "1.2.3", ".", "1e3", "1 / 2", "-", "3/"] {
            assert!(parse_rational(raw).is_err(), "accepted {raw:?}");
        }
        assert_eq!(
            parse_rational("5/0"),
            Err(RationalParseError::ZeroDenominator("5/0".into()))
        );
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(parse_rational(&format_rational(&ratio(-22, 7))).unwrap(), ratio(-22, 7));
    }
}
