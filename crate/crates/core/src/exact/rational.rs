//! Exact rational scalars.
//!
//! All quantities in this crate (edge lengths, distances, exponents) are
//! arbitrary-precision rationals kept in lowest terms with a positive
//! denominator. Nothing is ever rounded.

use num_bigint::BigInt;

pub use num_rational::BigRational as Rational;

use super::ExactError;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"`, or an exact decimal like `"3.25"` (the wire
/// formats accepted everywhere in this crate).
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let trimmed = s.trim();
    let bad = || ExactError::ParseRational {
        input: s.trim().to_string(),
    };
    let (negative, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    if let Some((int_part, frac_part)) = body.split_once('.') {
        let digits_ok =
            |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(frac_part) || !(int_part.is_empty() || digits_ok(int_part)) {
            return Err(bad());
        }
        let numerator: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .map_err(|_| bad())?;
        let denominator = BigInt::from(10u32).pow(frac_part.len() as u32);
        let value = Rational::new(numerator, denominator);
        return Ok(if negative { -value } else { value });
    }
    trimmed.parse().map_err(|_| bad())
}

/// Serde adapter: rationals serialize as `"p/q"` strings (or `"p"` when the
/// denominator is one), never as floats.
pub mod rational_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for optional rationals (`None` encodes as JSON `null`).
pub mod rational_opt_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        match s {
            Some(s) => super::parse_rational(&s)
                .map(Some)
                .map_err(serde::de::Error::custom),
            None => Ok(None),
        }
    }
}

/// Serde adapter for slices and fixed arrays of rationals: each element
/// serializes as a `"p/q"` string.
pub mod rational_seq {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        assert_eq!(ratio(3, 6).to_string(), "1/2");
        assert_eq!(rat(5).to_string(), "5");
        assert_eq!(parse_rational("-7/2").unwrap(), ratio(-7, 2));
        assert_eq!(parse_rational("42").unwrap(), rat(42));
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("3.25").unwrap(), ratio(13, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("10.0").unwrap(), rat(10));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn lowest_terms_and_sign() {
        let r = ratio(4, -8);
        assert_eq!(r, ratio(-1, 2));
        assert!(r.denom() > &num_bigint::BigInt::from(0));
    }
}
