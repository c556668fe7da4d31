//! Numeric cross-checks: Gauss rules built from the exact recurrences,
//! inner products over the Koornwinder domain, orthogonality residuals and
//! the `det⟨1, Φ⟩ ≠ 0` condition.

pub mod bigfloat;
pub mod gauss;
pub mod inner;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use bigfloat::BigFloat;
pub use gauss::{gauss_rule, gauss_rule_with, mass, GaussRule};
pub use inner::{inner_product, moment_matrix, moment_matrix_check, orthocheck_polys, orthocheck, InnerProduct, MomentMatrixVerdict, OrthoReport};

use crate::error::{Error, Result};
use crate::scalar::Q;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 34;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < 15 {
            return Err(Error::Config(format!("precision must be >= 15 digits, got {digits}")));
        }
        Ok(Precision { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        bigfloat::bits_for_digits(self.digits)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.digits)
    }
}

/// Floating point type usable for Gauss rules.
pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(v: &Q, bits: u32) -> Self;
    fn from_big(v: &BigFloat) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// A few units in the last place at `bits`.
    fn eps(bits: u32) -> Self;
    fn is_zero(&self) -> bool;

    fn from_i64(v: i64, bits: u32) -> Self {
        Self::from_q(&crate::scalar::qi(v), bits)
    }
}

impl Real for f64 {
    fn from_q(v: &Q, _bits: u32) -> Self {
        crate::scalar::rational_to_f64(v)
    }
    fn from_big(v: &BigFloat) -> Self {
        v.to_f64()
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn eps(_bits: u32) -> Self {
        4.0 * f64::EPSILON
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Real for BigFloat {
    fn from_q(v: &Q, bits: u32) -> Self {
        BigFloat::from_q(v, bits)
    }
    fn from_big(v: &BigFloat) -> Self {
        v.clone()
    }
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }
    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    fn eps(bits: u32) -> Self {
        BigFloat::from_i64(1, bits).ldexp(-(bits as i64) + 4)
    }
    fn is_zero(&self) -> bool {
        BigFloat::is_zero(self)
    }
}
