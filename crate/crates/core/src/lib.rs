//! Bivariate orthogonal polynomials of Koornwinder type, their matrix
//! Pearson equations and the second-order operators they induce.
//!
//! Everything symbolic runs over exact rationals ([`Q`]); the
//! [`quadrature`] module adds a high-precision numeric cross-check.

pub mod algebra;
pub mod error;
pub mod families;
pub mod koornwinder;
pub mod operator;
pub mod pearson;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Q;

/// Univariate polynomial over `Q`.
pub type UniPoly = algebra::Poly1<Q>;
/// Bivariate polynomial over `Q`.
pub type BivariatePoly = algebra::Poly2<Q>;
/// Rational function in `x, y` over `Q`.
pub type RationalFunction2 = algebra::RatFn2<Q>;
/// 2×2 matrix of rational functions.
pub type Mat2RF = algebra::Mat2<Q>;
/// Column vector of rational functions.
pub type Vec2RF = algebra::Vec2<Q>;
/// High-precision float used by the quadrature checks.
pub type HpFloat = quadrature::BigFloat;
