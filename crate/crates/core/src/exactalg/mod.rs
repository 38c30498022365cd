//! Exact dense linear algebra over the rationals, with prime-field rank
//! screening.

mod elim;
mod fp;
mod matrix;
mod poly;
mod ring;
mod subspace;

pub use elim::{bareiss_rank, independent_columns, kernel, rank, rank_in, rank_mod_p, rref, solve};
pub use fp::{is_prime, Fp, DEFAULT_PRIME};
pub use matrix::{ExactMatrix, Matrix};
pub use poly::Poly;
pub use ring::{Field as FieldOps, IntegralDomain, Ring};
pub use subspace::{random_in_span, solve_membership, span_sum, Subspace};

use crate::error::{Error, Result};
use num::{BigInt, One, Zero};
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num::BigRational;

/// A column vector over the rationals.
pub type Vector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a plain JSON-style integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r = Rational::from_str(s).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    if Zero::is_zero(r.denom()) {
        return Err(Error::Parse(format!("zero denominator: {s:?}")));
    }
    Ok(r)
}

/// Canonical `"p/q"` (or `"p"` when integral) rendering.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Field in which a rank computation is carried out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// `q` for the rationals, `p:P` for the prime field of order `P`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("p:") {
            let p: u64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad prime in {s:?}")))?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            return Ok(Field::Prime(p));
        }
        if s.eq_ignore_ascii_case("p") {
            return Ok(Field::Prime(DEFAULT_PRIME));
        }
        Err(Error::Parse(format!("unknown field {s:?}; expected q or p:P")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn field_parsing() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("p:101".parse::<Field>().unwrap(), Field::Prime(101));
        assert_eq!("p".parse::<Field>().unwrap(), Field::Prime(DEFAULT_PRIME));
        assert_eq!("p:100".parse::<Field>(), Err(Error::NotPrime(100)));
        assert!("r".parse::<Field>().is_err());
    }
}
