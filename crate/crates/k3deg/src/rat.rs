//! Exact rational scalars.
//!
//! Everything in this crate computes over arbitrary-precision rationals;
//! floating point is not used anywhere. Rationals render as decimal-free
//! fraction strings (`"p/q"`, or `"p"` when the denominator is one) and
//! parse back bit-exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// The scalar type used throughout: an arbitrary-precision rational.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as a fraction string: `"p/q"`, or `"p"` when `q == 1`.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid fraction string {0:?}: expected an integer or \"p/q\"")]
pub struct ParseRatError(pub String);

/// Parses a decimal-free fraction string. Accepts `"p"` and `"p/q"`;
/// rejects decimals, exponents, and empty input.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRatError(s.to_string()));
    }
    Rat::from_str(t).map_err(|_| ParseRatError(s.to_string()))
}

/// `|r|`.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

/// Least common multiple of two positive integers.
pub fn lcm_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::lcm(a, b)
}

/// Smallest positive integer `d` such that `d * r` is an integer for every
/// entry of `rs`. Returns 1 for an empty slice.
pub fn common_denominator<'a>(rs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    let mut d = BigInt::one();
    for r in rs {
        d = lcm_bigint(&d, r.denom());
    }
    d
}

/// True if every entry is an integer.
pub fn all_integral<'a>(rs: impl IntoIterator<Item = &'a Rat>) -> bool {
    rs.into_iter().all(|r| r.is_integer())
}

/// Sum of absolute values.
pub fn l1_norm<'a>(rs: impl IntoIterator<Item = &'a Rat>) -> Rat {
    let mut acc = Rat::zero();
    for r in rs {
        acc += r.abs();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings_round_trip() {
        for s in ["0", "7", "-5", "2/3", "-22/7", "100000000000000000001/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-6/-4").unwrap(), rat(3, 2));
    }

    #[test]
    fn parse_rejects_decimals() {
        assert!(parse_rat("1.5").is_err());
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1e3").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn common_denominator_is_lcm() {
        let rs = [rat(1, 6), rat(3, 4), rat_i(2)];
        assert_eq!(common_denominator(rs.iter()), BigInt::from(12));
    }
}
