//! Exact scalars: rationals, angles over `{1, λ, 2π}` and symbols, cyclotomic
//! numbers, and phase-valued scalars.

pub mod angle;
pub mod cyclotomic;
pub mod lattice;
pub mod scalar;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;

pub use angle::Angle;
pub use cyclotomic::Cyclotomic;
pub use lattice::angle_congruent;
pub use scalar::{Phase, Scalar};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
