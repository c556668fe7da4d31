use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gcd::gcd;
use super::{Poly2, Var};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Quotient of bivariate polynomials, always stored in canonical form:
/// numerator and denominator coprime, denominator with leading coefficient one.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFn2<T> {
    num: Poly2<T>,
    den: Poly2<T>,
}

impl<T: Scalar> RatFn2<T> {
    pub fn new(num: Poly2<T>, den: Poly2<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly2<T>, den: Poly2<T>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = T::one() / den.leading_coeff();
        RatFn2 {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn zero() -> Self {
        RatFn2 {
            num: Poly2::zero(),
            den: Poly2::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::one())
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    pub fn from_poly(p: Poly2<T>) -> Self {
        RatFn2 {
            num: p,
            den: Poly2::one(),
        }
    }

    pub fn numer(&self) -> &Poly2<T> {
        &self.num
    }

    pub fn denom(&self) -> &Poly2<T> {
        &self.den
    }

    /// Re-runs canonicalization. A no-op on values built through the public API.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.num.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn to_poly(&self) -> Option<Poly2<T>> {
        self.is_polynomial().then(|| self.num.clone())
    }

    pub fn as_constant(&self) -> Option<T> {
        self.to_poly().and_then(|p| p.as_constant())
    }

    /// Value at a point, `None` where the denominator vanishes.
    pub fn eval(&self, x: &T, y: &T) -> Option<T> {
        let d = self.den.eval(x, y);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x, y) / d)
        }
    }

    pub fn partial(&self, var: Var) -> Self {
        let n1 = self.num.partial(var);
        if self.is_polynomial() {
            return Self::canonical(n1, self.den.clone());
        }
        let d1 = self.den.partial(var);
        let top = &(&n1 * &self.den) - &(&self.num * &d1);
        Self::canonical(top, &self.den * &self.den)
    }

    pub fn dx(&self) -> Self {
        self.partial(Var::X)
    }

    pub fn dy(&self) -> Self {
        self.partial(Var::Y)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    pub fn mul_poly(&self, p: &Poly2<T>) -> Self {
        Self::canonical(&self.num * p, self.den.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        RatFn2 {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RatFn2<U> {
        RatFn2::canonical(self.num.map(&f), self.den.map(&f))
    }
}

impl<'a, T: Scalar> Add<&'a RatFn2<T>> for &'a RatFn2<T> {
    type Output = RatFn2<T>;
    fn add(self, rhs: &RatFn2<T>) -> RatFn2<T> {
        if self.den == rhs.den {
            return RatFn2::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RatFn2::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a, T: Scalar> Sub<&'a RatFn2<T>> for &'a RatFn2<T> {
    type Output = RatFn2<T>;
    fn sub(self, rhs: &RatFn2<T>) -> RatFn2<T> {
        self + &(-rhs)
    }
}

impl<'a, T: Scalar> Mul<&'a RatFn2<T>> for &'a RatFn2<T> {
    type Output = RatFn2<T>;
    fn mul(self, rhs: &RatFn2<T>) -> RatFn2<T> {
        if self.is_zero() || rhs.is_zero() {
            return RatFn2::zero();
        }
        RatFn2::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<T: Scalar> Neg for &RatFn2<T> {
    type Output = RatFn2<T>;
    fn neg(self) -> RatFn2<T> {
        RatFn2 {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<T: Scalar> Add for RatFn2<T> {
    type Output = RatFn2<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for RatFn2<T> {
    type Output = RatFn2<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for RatFn2<T> {
    type Output = RatFn2<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for RatFn2<T> {
    type Output = RatFn2<T>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<T: Scalar> From<Poly2<T>> for RatFn2<T> {
    fn from(p: Poly2<T>) -> Self {
        Self::from_poly(p)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for RatFn2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            let c = self.den.leading_coeff();
            if c.is_one() {
                return write!(f, "{}", self.num);
            }
            return write!(f, "{}", self.num.scale(&(T::one() / c)));
        }
        let wrap = |p: &Poly2<T>| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}
