//! Exact arithmetic: big rationals, linear forms in the torus parameters,
//! multivariate polynomials and rational functions, truncated q-series.

mod linform;
mod mpoly;
mod qseries;
mod ratfunc;
mod univariate;

pub use linform::LinForm;
pub use mpoly::{grlex, MPoly};
pub use qseries::{xi_pow, QSeries};
pub use ratfunc::{rf_specialize, rf_value_at_zero, RatFunc};
pub use univariate::UPoly;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_traits::{One, Zero};

/// Shorthand for building a rational from machine integers.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Prints `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p` into a reduced rational.
pub fn parse_q(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Returns the integer value of `x`, if it has one and fits in an `i64`.
pub fn to_i64(x: &BigRational) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}
