use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{pow_int, Scalar};

/// Dense univariate polynomial, coefficients indexed by power.
///
/// The highest stored coefficient is nonzero unless the polynomial is zero,
/// in which case the coefficient vector is empty.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly1<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly1<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `c * x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `slope * x + intercept`.
    pub fn linear(slope: T, intercept: T) -> Self {
        Self::new(vec![intercept, slope])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_usize(k).expect("small integer"))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `p(a*x + b)`.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let inner = Self::linear(a.clone(), b.clone());
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * &inner) + &Self::constant(c.clone())
        })
    }

    /// `true` if every odd-power coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    /// `true` if every even-power coefficient vanishes.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| c.is_zero())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&(T::one() / lc))
    }

    /// Euclidean division over a field.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); n - dd];
        for k in (dd..n).rev() {
            let c = rem[k].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + i] = rem[k - dd + i].clone() - c.clone() * dc.clone();
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly1<U> {
        Poly1::new(self.coeffs.iter().map(f).collect())
    }

    /// Evaluates through integer powers, for callers that only hold `x` by value.
    pub fn eval_pow(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (k, c)| acc + c.clone() * pow_int(x, k))
    }
}

impl<'a, T: Scalar> Add<&'a Poly1<T>> for &'a Poly1<T> {
    type Output = Poly1<T>;
    fn add(self, rhs: &Poly1<T>) -> Poly1<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Sub<&'a Poly1<T>> for &'a Poly1<T> {
    type Output = Poly1<T>;
    fn sub(self, rhs: &Poly1<T>) -> Poly1<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Mul<&'a Poly1<T>> for &'a Poly1<T> {
    type Output = Poly1<T>;
    fn mul(self, rhs: &Poly1<T>) -> Poly1<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly1::new(out)
    }
}

impl<T: Scalar> Neg for &Poly1<T> {
    type Output = Poly1<T>;
    fn neg(self) -> Poly1<T> {
        Poly1::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Add for Poly1<T> {
    type Output = Poly1<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Poly1<T> {
    type Output = Poly1<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Poly1<T> {
    type Output = Poly1<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Poly1<T> {
    type Output = Poly1<T>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly1<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(T, u32, u32)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), k as u32, 0))
            .collect();
        super::fmt_terms(f, &terms, "x")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    fn p(c: &[i64]) -> Poly1<Q> {
        Poly1::new(c.iter().map(|&v| qi(v)).collect())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (quot, r) = a.div_rem(&b).unwrap();
        assert_eq!(quot, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-2, 2])), p(&[-1, 1]));
        assert!(a.div_exact(&p(&[2, 1])).is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let a = p(&[1, -3, 0, 2]);
        assert_eq!(a.derivative(), p(&[-3, 0, 6]));
        assert_eq!(a.eval(&q(1, 2)), q(-1, 4));
        assert_eq!(a.eval(&qi(2)), a.eval_pow(&qi(2)));
    }

    #[test]
    fn reflect_and_affine() {
        let a = p(&[1, 1]);
        assert_eq!(a.reflect(), p(&[1, -1]));
        // (x)(2x - 1) composed: p(t) = t, p(2x-1) = 2x - 1
        assert_eq!(Poly1::<Q>::x().compose_affine(&qi(2), &qi(-1)), p(&[-1, 2]));
        assert!(p(&[1, 0, -1]).is_even());
        assert!(p(&[0, 3, 0, 1]).is_odd());
    }
}
