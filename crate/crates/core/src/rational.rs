//! Exact rational arithmetic helpers.
//!
//! Every numeric quantity in this crate is a [`Rational`]. Decimal literals are
//! read exactly, so `0.2` becomes `1/5` rather than the nearest binary float.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"3"`, `"-0.25"`, `"1/5"`, `"2.5/3"` or `"1e-3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    match s.split_once('/') {
        Some((num, den)) => {
            let num = parse_decimal(num.trim()).ok_or_else(err)?;
            let den = parse_decimal(den.trim()).ok_or_else(err)?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(num / den)
        }
        None => parse_decimal(s).ok_or_else(err),
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{whole}{frac}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(value: &Rational) -> String {
    value.to_string()
}

/// Display adapter rendering a rational as a terminating decimal when it has
/// one, falling back to `p/q`. Used for human-facing formula output.
pub struct Decimalish<'a>(pub &'a Rational);

impl fmt::Display for Decimalish<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        if v.is_integer() {
            return write!(f, "{}", v.numer());
        }
        let mut den = v.denom().clone();
        for factor in [2, 5] {
            let factor = BigInt::from(factor);
            while (&den % &factor).is_zero() {
                den /= &factor;
            }
        }
        if !den.is_one() {
            return write!(f, "{}", v);
        }
        let ten = Rational::from_integer(BigInt::from(10));
        let mut places = 1usize;
        let mut scaled = v.abs() * ten.clone();
        while !scaled.is_integer() {
            scaled *= ten.clone();
            places += 1;
        }
        let digits = scaled.to_integer().to_string();
        let digits = format!("{digits:0>width$}", width = places + 1);
        let (whole, frac) = digits.split_at(digits.len() - places);
        let sign = if v.is_negative() { "-" } else { "" };
        write!(f, "{sign}{whole}.{frac}")
    }
}

/// Reads a JSON number or string as an exact rational.
///
/// Numbers are taken from their literal text, which requires serde_json's
/// `arbitrary_precision` feature.
pub fn from_json(value: &serde_json::Value) -> Result<Rational, ParseRationalError> {
    match value {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(ParseRationalError(other.to_string())),
    }
}

pub fn to_json(value: &Rational) -> serde_json::Value {
    serde_json::Value::String(fmt_rational(value))
}

/// Least common multiple of the denominators, if every scaled numerator fits
/// in an `i64`. Returns the scaled numerators alongside.
pub(crate) fn common_scale(values: &[&Rational]) -> Option<Vec<i64>> {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = num_integer::Integer::lcm(&lcm, v.denom());
    }
    values
        .iter()
        .map(|v| {
            let scaled = v.numer() * (&lcm / v.denom());
            i64::try_from(scaled).ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.2").unwrap(), ratio(1, 5));
        assert_eq!(parse_rational("0.23").unwrap(), ratio(23, 100));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1e-2").unwrap(), ratio(1, 100));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -7/3 ").unwrap(), ratio(-7, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("-").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn json_numbers_keep_their_literal() {
        let v: serde_json::Value = serde_json::from_str("[0.1, \"9/10\", 3]").unwrap();
        let parsed: Vec<_> = v.as_array().unwrap().iter().map(|x| from_json(x).unwrap()).collect();
        assert_eq!(parsed, vec![ratio(1, 10), ratio(9, 10), int(3)]);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Decimalish(&ratio(9, 50)).to_string(), "0.18");
        assert_eq!(Decimalish(&ratio(-1, 4)).to_string(), "-0.25");
        assert_eq!(Decimalish(&ratio(1, 3)).to_string(), "1/3");
        assert_eq!(Decimalish(&int(2)).to_string(), "2");
        assert_eq!(Decimalish(&ratio(1, 100)).to_string(), "0.01");
    }

    #[test]
    fn scale_to_integers() {
        let a = ratio(1, 5);
        let b = ratio(1, 2);
        assert_eq!(common_scale(&[&a, &b]), Some(vec![2, 5]));
    }
}
