//! Exact polynomial algebra in one and two variables.

pub mod gcd;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod poly1;
pub mod poly2;
pub mod ratfn;
pub mod serial;

use std::fmt;

use crate::scalar::Scalar;

pub use matrix::{Mat2, Vec2};
pub use poly1::Poly1;
pub use poly2::{Monomial, Poly2};
pub use ratfn::RatFn2;

/// Variable selector for partial derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

// Terms arrive highest first as (coefficient, x-power, y-power).
pub(crate) fn fmt_terms<T: Scalar + fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: &[(T, u32, u32)],
    xname: &str,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (idx, (c, i, j)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let unit = mag.is_one();
        let is_const = *i == 0 && *j == 0;
        if !unit || is_const {
            let s = mag.to_string();
            if s.contains('/') && !is_const {
                write!(f, "({s})")?;
            } else {
                write!(f, "{s}")?;
            }
            if !is_const {
                write!(f, "*")?;
            }
        }
        let mut first = true;
        for (name, p) in [(xname, *i), ("y", *j)] {
            if p == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if p == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{p}")?;
            }
        }
    }
    Ok(())
}
