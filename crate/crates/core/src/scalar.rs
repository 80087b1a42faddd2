//! Exact rational scalars.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficient field element. Always reduced with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ScalarParseError(pub String);

/// Parses `p`, `-p`, `p/q` (whitespace tolerant).
pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarParseError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || ScalarParseError(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t.as_str(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Scalar::new(n, d))
}

/// Parses a comma separated list of rationals.
pub fn parse_scalar_list(s: &str) -> Result<Vec<Scalar>, ScalarParseError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_scalar).collect()
}

/// `p` or `p/q`.
pub fn format_scalar(q: &Scalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Display adapter for scalars.
pub struct Show<'a>(pub &'a Scalar);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scalar(self.0))
    }
}

pub(crate) fn is_integer(q: &Scalar) -> bool {
    q.denom().is_one()
}

/// Binomial coefficient as a scalar.
pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial n (n-1) ... (n-k+1).
pub(crate) fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("-5/6").unwrap(), ratio(-5, 6));
        assert_eq!(parse_scalar(" 4/2 ").unwrap(), int(2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("a").is_err());
        assert_eq!(format_scalar(&ratio(3, -6)), "-1/2");
        assert_eq!(
            parse_scalar_list("-5/6,1/4,5/12").unwrap(),
            vec![ratio(-5, 6), ratio(1, 4), ratio(5, 12)]
        );
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(3, 0), BigInt::one());
    }
}
