use std::fmt;

use super::{Poly2, RatFn2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// 2-vector of rational functions.
#[derive(Clone, PartialEq, Debug)]
pub struct Vec2<T> {
    pub v: [RatFn2<T>; 2],
}

/// 2x2 matrix of rational functions, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat2<T> {
    pub m: [[RatFn2<T>; 2]; 2],
}

impl<T: Scalar> Vec2<T> {
    pub fn new(a: RatFn2<T>, b: RatFn2<T>) -> Self {
        Vec2 { v: [a, b] }
    }

    pub fn from_polys(a: Poly2<T>, b: Poly2<T>) -> Self {
        Self::new(a.into(), b.into())
    }

    pub fn zero() -> Self {
        Self::new(RatFn2::zero(), RatFn2::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.v[0] + &o.v[0], &self.v[1] + &o.v[1])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.v[0] - &o.v[0], &self.v[1] - &o.v[1])
    }

    pub fn scale(&self, c: &RatFn2<T>) -> Self {
        Self::new(&self.v[0] * c, &self.v[1] * c)
    }

    /// `∂x v₁ + ∂y v₂`.
    pub fn divergence(&self) -> RatFn2<T> {
        &self.v[0].dx() + &self.v[1].dy()
    }

    pub fn dot(&self, o: &Self) -> RatFn2<T> {
        &(&self.v[0] * &o.v[0]) + &(&self.v[1] * &o.v[1])
    }

    /// Polynomial entries, or the indices of the entries that are not.
    pub fn to_polys(&self) -> std::result::Result<[Poly2<T>; 2], Vec<usize>> {
        let bad: Vec<usize> = (0..2).filter(|&i| !self.v[i].is_polynomial()).collect();
        if !bad.is_empty() {
            return Err(bad);
        }
        Ok([self.v[0].numer().clone(), self.v[1].numer().clone()])
    }
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: RatFn2<T>, b: RatFn2<T>, c: RatFn2<T>, d: RatFn2<T>) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn from_polys(a: Poly2<T>, b: Poly2<T>, c: Poly2<T>, d: Poly2<T>) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::new(RatFn2::one(), RatFn2::zero(), RatFn2::zero(), RatFn2::one())
    }

    pub fn diagonal(a: RatFn2<T>, d: RatFn2<T>) -> Self {
        Self::new(a, RatFn2::zero(), RatFn2::zero(), d)
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFn2<T> {
        &self.m[i][j]
    }

    pub fn row(&self, i: usize) -> Vec2<T> {
        Vec2::new(self.m[i][0].clone(), self.m[i][1].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.m[0][0].clone(),
            self.m[1][0].clone(),
            self.m[0][1].clone(),
            self.m[1][1].clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| &(&self.m[i][0] * &o.m[0][j]) + &(&self.m[i][1] * &o.m[1][j]);
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn mul_vec(&self, v: &Vec2<T>) -> Vec2<T> {
        Vec2::new(self.row(0).dot(v), self.row(1).dot(v))
    }

    pub fn scale(&self, c: &RatFn2<T>) -> Self {
        Self::new(
            &self.m[0][0] * c,
            &self.m[0][1] * c,
            &self.m[1][0] * c,
            &self.m[1][1] * c,
        )
    }

    pub fn det(&self) -> RatFn2<T> {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let di = d.inv()?;
        Ok(Self::new(
            &self.m[1][1] * &di,
            &(-&self.m[0][1]) * &di,
            &(-&self.m[1][0]) * &di,
            &self.m[0][0] * &di,
        ))
    }

    pub fn is_symmetric(&self) -> bool {
        (&self.m[0][1] - &self.m[1][0]).is_zero()
    }

    /// Row-wise divergence, `(div row₁, div row₂)`.
    pub fn divergence(&self) -> Vec2<T> {
        Vec2::new(self.row(0).divergence(), self.row(1).divergence())
    }

    pub fn is_polynomial(&self) -> bool {
        self.m.iter().flatten().all(|e| e.is_polynomial())
    }

    /// Labels (`"(1,2)"` style) of the entries that are not polynomials.
    pub fn non_polynomial_entries(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                if !self.m[i][j].is_polynomial() {
                    out.push(format!("({},{})", i + 1, j + 1));
                }
            }
        }
        out
    }
}

/// Divergence of a vector field.
pub fn divergence<T: Scalar>(v: &Vec2<T>) -> RatFn2<T> {
    v.divergence()
}

/// `true` iff `M₁₂ - M₂₁` canonicalizes to zero.
pub fn mat_is_symmetric<T: Scalar>(m: &Mat2<T>) -> bool {
    m.is_symmetric()
}

impl<T: Scalar + fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Vec2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.v[0], self.v[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn p(terms: &[(u32, u32, i64)]) -> Poly2<Q> {
        Poly2::from_terms(terms.iter().map(|&(i, j, c)| (i, j, qi(c))))
    }

    #[test]
    fn divergence_examples() {
        let v = Vec2::from_polys(Poly2::<Q>::x(), Poly2::y());
        assert_eq!(v.divergence(), RatFn2::constant(qi(2)));
        let row = Vec2::from_polys(p(&[(0, 0, 1), (2, 0, -1)]), p(&[(1, 1, -1)]));
        assert_eq!(divergence(&row), RatFn2::from_poly(p(&[(1, 0, -3)])));
        assert!(Vec2::<Q>::zero().divergence().is_zero());
    }

    #[test]
    fn symmetry() {
        let ball = Mat2::from_polys(
            p(&[(0, 0, 1), (2, 0, -1)]),
            p(&[(1, 1, -1)]),
            p(&[(1, 1, -1)]),
            p(&[(0, 0, 1), (0, 2, -1)]),
        );
        assert!(mat_is_symmetric(&ball));
        let raw = Mat2::from_polys(
            p(&[(0, 0, 1), (2, 0, -1)]),
            p(&[(1, 1, -1)]),
            Poly2::zero(),
            p(&[(0, 0, 1), (2, 0, -1), (0, 2, -1)]),
        );
        assert!(!mat_is_symmetric(&raw));
        assert!(mat_is_symmetric(&Mat2::<Q>::identity()));
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat2::from_polys(p(&[(1, 0, 1)]), p(&[(0, 1, 1)]), Poly2::zero(), p(&[(1, 1, 1)]));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat2::identity());
    }
}
