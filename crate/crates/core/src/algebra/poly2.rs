use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Poly1, Var};
use crate::error::{Error, Result};
use crate::scalar::{pow_int, Scalar};

/// Exponent pair `x^i y^j`.
///
/// Ordered by total degree, then by the power of `y`. Within a fixed total
/// degree this puts `x^{n-m} y^m` above every monomial with a smaller
/// `y`-power, which is what makes the Koornwinder basis unitriangular in
/// both construction cases.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.i <= other.i && self.j <= other.j
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.j.cmp(&other.j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `x` and `y`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly2<T> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> Poly2<T> {
    pub fn zero() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    pub fn monomial(c: T, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(i, j), c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, T)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    /// Embeds a univariate polynomial as a polynomial in `x`.
    pub fn from_x(p: &Poly1<T>) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (k as u32, 0, c.clone())),
        )
    }

    /// Embeds a univariate polynomial as a polynomial in `y`.
    pub fn from_y(p: &Poly1<T>) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (0, k as u32, c.clone())),
        )
    }

    /// `Σ_k c_k(x) y^k` from the coefficient list `c_k`.
    pub fn from_y_coeffs(cs: &[Poly1<T>]) -> Self {
        let mut p = Self::zero();
        for (k, c) in cs.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                p.add_term(Monomial::new(i as u32, k as u32), a.clone());
            }
        }
        p
    }

    /// Coefficients of `y^k` as polynomials in `x`, indexed by `k`.
    pub fn y_coeffs(&self) -> Vec<Poly1<T>> {
        let dy = self.degree_y().map_or(0, |d| d as usize + 1);
        let mut raw = vec![Vec::<T>::new(); dy];
        for (m, c) in &self.terms {
            let v = &mut raw[m.j as usize];
            if v.len() <= m.i as usize {
                v.resize(m.i as usize + 1, T::zero());
            }
            v[m.i as usize] = c.clone();
        }
        raw.into_iter().map(Poly1::new).collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> T {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<T> {
        if self.is_constant() {
            Some(self.coeff(0, 0))
        } else {
            None
        }
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.j).max()
    }

    pub fn leading(&self) -> Option<(Monomial, T)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c.clone()))
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> T {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// `true` if no term carries `y`.
    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|m| m.j == 0)
    }

    pub fn to_poly1_x(&self) -> Option<Poly1<T>> {
        if !self.is_x_only() {
            return None;
        }
        Some(self.y_coeffs().into_iter().next().unwrap_or_else(Poly1::zero))
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.terms.iter().fold(T::zero(), |acc, (m, c)| {
            acc + c.clone() * pow_int(x, m.i as usize) * pow_int(y, m.j as usize)
        })
    }

    pub fn partial(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (k, dm) = match var {
                Var::X if m.i > 0 => (m.i, Monomial::new(m.i - 1, m.j)),
                Var::Y if m.j > 0 => (m.j, Monomial::new(m.i, m.j - 1)),
                _ => continue,
            };
            out.add_term(dm, c.clone() * T::from_u32(k).expect("small integer"));
        }
        out
    }

    pub fn dx(&self) -> Self {
        self.partial(Var::X)
    }

    pub fn dy(&self) -> Self {
        self.partial(Var::Y)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `x^i y^j`.
    pub fn shift(&self, i: u32, j: u32) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (Monomial::new(m.i + i, m.j + j), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(T::one() / self.leading_coeff()))
    }

    /// Substitutes `x -> px`, `y -> py`.
    pub fn compose(&self, px: &Self, py: &Self) -> Self {
        let dx = self.degree_x().unwrap_or(0) as usize;
        let dy = self.degree_y().unwrap_or(0) as usize;
        let mut xp = vec![Self::one()];
        for k in 0..dx {
            let next = &xp[k] * px;
            xp.push(next);
        }
        let mut yp = vec![Self::one()];
        for k in 0..dy {
            let next = &yp[k] * py;
            yp.push(next);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let t = (&xp[m.i as usize] * &yp[m.j as usize]).scale(c);
            out = &out + &t;
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly2<U> {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    // self -= c * x^i y^j * d
    fn sub_scaled_shift(&mut self, c: &T, i: u32, j: u32, d: &Self) {
        for (m, a) in &d.terms {
            self.add_term(Monomial::new(m.i + i, m.j + j), -(c.clone() * a.clone()));
        }
    }

    /// Multivariate division by a single divisor in the graded order.
    ///
    /// The remainder is zero exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let (lm, lc) = divisor.leading().ok_or(Error::DivisionByZero)?;
        let mut p = self.clone();
        let mut quot = Self::zero();
        let mut rem = Self::zero();
        while let Some((m, c)) = p.leading() {
            if lm.divides(&m) {
                let t = c / lc.clone();
                let (i, j) = (m.i - lm.i, m.j - lm.j);
                p.sub_scaled_shift(&t, i, j, divisor);
                // Guard against inexact fields leaving a residue on the leading term.
                p.terms.remove(&m);
                quot.add_term(Monomial::new(i, j), t);
            } else {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        Ok((quot, rem))
    }

    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        matches!(other.div_rem(self), Ok((_, r)) if r.is_zero())
    }

    /// `true` if `p(x, -y) = p(x, y)`.
    pub fn is_even_in_y(&self) -> bool {
        self.terms.keys().all(|m| m.j % 2 == 0)
    }
}

impl<'a, T: Scalar> Add<&'a Poly2<T>> for &'a Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Sub<&'a Poly2<T>> for &'a Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Mul<&'a Poly2<T>> for &'a Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = Poly2::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(Monomial::new(ma.i + mb.i, ma.j + mb.j), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl<T: Scalar> Add for Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(T, u32, u32)> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| (c.clone(), m.i, m.j))
            .collect();
        super::fmt_terms(f, &terms, "x")
    }
}
