//! Coefficient field abstraction.
//!
//! The polynomial and rational-function types are generic over [`Scalar`].
//! Every identity check in the crate runs over [`Q`], the exact rationals;
//! `f64` also satisfies the bound and is handy for quick numerical
//! evaluation of exact data.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use crate::error::Error;

/// A field usable as polynomial coefficients.
///
/// Algorithms that depend on exact cancellation (gcd, exact division,
/// canonical forms) are only meaningful for exact fields such as [`Q`].
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Signed + FromPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Num + Signed + FromPrimitive + Send + Sync + 'static
{
}

/// Exact rationals over arbitrary-precision integers.
pub type Q = BigRational;

/// Builds `num/den` as an exact rational. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Parses `"p"`, `"p/q"`, `"-p/q"` or a plain decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac);
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Q::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn rational_to_string(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Lossy conversion used for diagnostics and sampling.
pub fn rational_to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// `true` when the rational is an integer.
pub fn is_integer(v: &Q) -> bool {
    v.denom().is_one()
}

pub(crate) fn pow_int<T: Scalar>(base: &T, exp: usize) -> T {
    let mut acc = T::one();
    for _ in 0..exp {
        acc = acc * base.clone();
    }
    acc
}
