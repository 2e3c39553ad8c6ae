//! Text forms of exact rationals: `p/q` strings, fixed decimals, parsing.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Rational, Result, Scalar};

/// Digits after the point in decimal renderings.
pub const DECIMAL_DIGITS: usize = 12;

/// Always `p/q`, including integers (`3/1`).
pub fn ratio_str<I: Scalar>(r: &Ratio<I>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serializes a rational as its `p/q` string.
pub struct RatioStr<'a, I>(pub &'a Ratio<I>);

impl<I: Scalar> Serialize for RatioStr<'_, I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<I: Scalar> fmt::Display for RatioStr<'_, I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

fn to_big<I: Scalar>(x: &I) -> BigInt {
    x.to_string().parse().expect("integer display parses back")
}

/// Fixed-point rendering with [`DECIMAL_DIGITS`] digits, rounding half to even.
pub fn decimal<I: Scalar>(r: &Ratio<I>) -> String {
    decimal_digits(r, DECIMAL_DIGITS)
}

pub fn decimal_digits<I: Scalar>(r: &Ratio<I>, digits: usize) -> String {
    let num = to_big(r.numer());
    let den = to_big(r.denom());
    let scale = num_traits::pow(BigInt::from(10), digits);
    let (mut quo, rem) = (num.abs() * scale).div_rem(&den);
    let twice = rem * 2;
    if twice > den || (twice == den && quo.is_odd()) {
        quo += 1;
    }
    let neg = num.is_negative() && !quo.is_zero();
    let s = quo.to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Accepts `p/q`, integers, decimals and scientific notation (`1e-9`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Ratio::new(p, q));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| err())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if shift >= 0 {
        Ratio::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        Ratio::new(digits, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Ratio::new(p.into(), d.into())
    }

    #[test]
    fn ratio_strings() {
        assert_eq!(ratio_str(&q(6, 4)), "3/2");
        assert_eq!(ratio_str(&q(3, 1)), "3/1");
        assert_eq!(ratio_str(&q(-1, 3)), "-1/3");
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&q(14, 11)), "1.272727272727");
        assert_eq!(decimal(&q(-1, 3)), "-0.333333333333");
        assert_eq!(decimal(&q(2, 3)), "0.666666666667");
        assert_eq!(decimal(&q(0, 1)), "0.000000000000");
        assert_eq!(decimal_digits(&q(5, 2), 0), "2");
        assert_eq!(decimal_digits(&q(7, 2), 0), "4");
        assert_eq!(decimal_digits(&q(-1, 4), 1), "-0.2");
        assert_eq!(decimal_digits(&q(-1, 100), 1), "0.0");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), q(-4, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1e-9").unwrap(), q(1, 1_000_000_000));
        assert_eq!(parse_rational("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }
}
