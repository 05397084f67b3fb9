//! Exact rational numbers backed by arbitrary-precision integers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `numer / denom`; panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"`, `"-p"` or `"p/q"` literals.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if text.ends_with("/0") || text.contains("/-") {
        return Err(Error::Parse(format!("invalid rational literal {text:?}")));
    }
    Rational::from_str(text).map_err(|_| Error::Parse(format!("invalid rational literal {text:?}")))
}

/// Comma-separated list of rational literals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect()
}

pub(crate) fn ensure_nonnegative(what: &str, values: &[Rational]) -> Result<()> {
    match values.iter().position(|x| x.is_negative()) {
        Some(i) => Err(Error::InvalidValuation(format!(
            "{what}[{}] = {} is negative",
            i + 1,
            values[i]
        ))),
        None => Ok(()),
    }
}

/// `max(x, 0)`.
pub fn positive_part(x: &Rational) -> Rational {
    if x.is_positive() {
        x.clone()
    } else {
        Rational::zero()
    }
}
