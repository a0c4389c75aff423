//! Exact rational scalars.
//!
//! All coefficients in this crate are `BigRational`s: always in lowest terms
//! with a positive denominator, so equality is structural and printing is
//! canonical (`p/q`, integers without the `/1`).

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer scalar.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` (lowest terms are restored on construction).
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}
