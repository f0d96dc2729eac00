//! Scalar weights.
//!
//! Everything that only needs field arithmetic (subdistributions, transition
//! systems, word probabilities, linear equivalence) is generic over
//! [`Weight`]. Syntax-level code works with the exact [`Prob`] type.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::ProbError;

/// Exact rational probability.
pub type Prob = BigRational;

/// Scalar type usable as a transition weight.
///
/// Implemented for [`Prob`] (exact) and for `f32`/`f64` (approximate, with a
/// fixed tolerance in [`Weight::is_negligible`]).
pub trait Weight: Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// Whether the value should be treated as zero.
    fn is_negligible(&self) -> bool;

    /// Converts an exact probability into this scalar type.
    fn from_prob(p: &Prob) -> Self;

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible()
    }
}

impl Weight for BigRational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_prob(p: &Prob) -> Self {
        p.clone()
    }
}

impl Weight for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-12
    }

    fn from_prob(p: &Prob) -> Self {
        p.to_f64().unwrap_or(f64::NAN)
    }
}

impl Weight for f32 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-6
    }

    fn from_prob(p: &Prob) -> Self {
        p.to_f32().unwrap_or(f32::NAN)
    }
}

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Prob {
    Prob::new(BigInt::from(n), BigInt::from(d))
}

pub fn complement(p: &Prob) -> Prob {
    Prob::one() - p
}

pub fn is_probability(p: &Prob) -> bool {
    !p.is_negative() && *p <= Prob::one()
}

/// Parses `n/d`, a decimal such as `0.25`, or an integer. Decimals are
/// converted exactly. The result is not range-checked.
pub fn parse_rational(text: &str) -> Result<Prob, ProbError> {
    let s = text.trim();
    let bad = || ProbError::Malformed(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_int(n.trim()).ok_or_else(bad)?;
        let d = parse_int(d.trim()).ok_or_else(bad)?;
        if d.is_zero() || d.is_negative() {
            return Err(ProbError::ZeroDenominator(text.to_string()));
        }
        return Ok(Prob::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            parse_int(int).ok_or_else(bad)?.abs()
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let value = Prob::new(int * &scale + frac, scale);
        return Ok(if negative { -value } else { value });
    }
    parse_int(s).map(Prob::from_integer).ok_or_else(bad)
}

/// Parses a rational and checks it lies in `[0, 1]`.
pub fn parse_prob(text: &str) -> Result<Prob, ProbError> {
    let p = parse_rational(text)?;
    if is_probability(&p) {
        Ok(p)
    } else {
        Err(ProbError::OutOfRange(p.to_string()))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Decimal rendering with `digits` fractional digits, rounded half away
/// from zero.
pub fn to_decimal(p: &Prob, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = p * Prob::from_integer(scale.clone());
    let half = Prob::new(BigInt::one(), BigInt::from(2u32));
    let rounded = if scaled.is_negative() {
        -((-scaled + half).floor())
    } else {
        (scaled + half).floor()
    }
    .to_integer();
    let negative = rounded.is_negative();
    let magnitude = rounded.abs().to_string();
    let body = if digits == 0 {
        magnitude
    } else {
        let padded = format!("{:0>width$}", magnitude, width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        format!("{int}.{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_prob("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse_prob("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_prob(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_prob("1").unwrap(), ratio(1, 1));
        assert_eq!(parse_prob("0").unwrap(), ratio(0, 1));
        assert_eq!(parse_prob("2/4").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(parse_prob("7/4"), Err(ProbError::OutOfRange(_))));
        assert!(matches!(parse_prob("1.5"), Err(ProbError::OutOfRange(_))));
        assert!(matches!(parse_prob("1/0"), Err(ProbError::ZeroDenominator(_))));
        assert!(matches!(parse_prob("a/b"), Err(ProbError::Malformed(_))));
        assert!(matches!(parse_prob("0.5e3"), Err(ProbError::Malformed(_))));
        assert!(parse_prob("").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(3, 64), 4), "0.0469");
        assert_eq!(to_decimal(&ratio(1, 3), 3), "0.333");
        assert_eq!(to_decimal(&ratio(2, 3), 0), "1");
        assert_eq!(to_decimal(&ratio(1, 1), 2), "1.00");
    }

    #[test]
    fn float_weights_convert() {
        assert_eq!(f64::from_prob(&ratio(1, 4)), 0.25);
        assert!(1e-14f64.is_negligible());
        assert!(!ratio(1, 1_000_000_000).is_negligible());
    }
}
