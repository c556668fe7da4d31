//! Binary floating point with a `BigInt` mantissa: `m · 2^e`, `|m| < 2^prec`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Q;

#[derive(Clone, Debug)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
    prec: u32,
}

/// Mantissa bits for a decimal precision, with guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 24
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            m: BigInt::zero(),
            e: 0,
            prec,
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::normalized(BigInt::from(v), 0, prec)
    }

    pub fn from_q(v: &Q, prec: u32) -> Self {
        let n = Self::normalized(v.numer().clone(), 0, prec);
        let d = Self::normalized(v.denom().clone(), 0, prec);
        n / d
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        if v == 0.0 {
            return Self::zero(prec);
        }
        let q = Q::from_float(v).expect("finite");
        Self::from_q(&q, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::normalized(self.m.clone(), self.e, prec)
    }

    fn normalized(m: BigInt, e: i64, prec: u32) -> Self {
        if m.is_zero() {
            return Self::zero(prec);
        }
        let bits = m.bits() as i64;
        let excess = bits - prec as i64;
        if excess <= 0 {
            return BigFloat { m, e, prec };
        }
        // Round half away from zero.
        let sign = m.sign();
        let mut mag = m.magnitude().clone();
        let half_bit = (&mag >> (excess - 1) as usize) & num_bigint::BigUint::one();
        mag >>= excess as usize;
        if half_bit.is_one() {
            mag += 1u32;
        }
        let mut out = BigFloat {
            m: BigInt::from_biguint(sign, mag),
            e: e + excess,
            prec,
        };
        if out.m.bits() as i64 > prec as i64 {
            out.m >>= 1usize;
            out.e += 1;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            m: self.m.abs(),
            e: self.e,
            prec: self.prec,
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            m: self.m.clone(),
            e: self.e + k,
            prec: self.prec,
        }
    }

    // Position of the leading bit: value in [2^(t-1), 2^t).
    fn top(&self) -> i64 {
        self.e + self.m.bits() as i64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits() as i64;
        let shift = (bits - 60).max(0);
        let head = (&self.m >> shift as usize).to_f64().expect("fits");
        let exp = self.e + shift;
        if exp > 1023 {
            return head * f64::INFINITY;
        }
        if exp < -1100 {
            return 0.0;
        }
        head * 2f64.powi(exp as i32)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        // Scale to 2·prec + 2 bits with an even exponent.
        let want = 2 * self.prec as i64 + 2;
        let mut shift = want - self.m.bits() as i64;
        if (self.e - shift).is_odd() {
            shift += 1;
        }
        let m = if shift >= 0 {
            &self.m << shift as usize
        } else {
            &self.m >> (-shift) as usize
        };
        Self::normalized(m.sqrt(), (self.e - shift) / 2, self.prec)
    }

    fn ln2(prec: u32) -> Self {
        // ln 2 = 2 atanh(1/3)
        let third = Self::from_i64(1, prec) / Self::from_i64(3, prec);
        atanh_series(&third).ldexp(1)
    }

    pub fn pi(prec: u32) -> Self {
        let p = prec + 16;
        let a = atan_inv(5, p) * Self::from_i64(16, p);
        let b = atan_inv(239, p) * Self::from_i64(4, p);
        (a - b).with_precision(prec)
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.is_zero() {
            return Self::from_i64(1, prec);
        }
        let wp = prec + 32;
        let x = self.with_precision(wp);
        let ln2 = Self::ln2(wp);
        let k = (x.clone() / ln2.clone()).to_f64().round() as i64;
        let r = x - ln2 * Self::from_i64(k, wp);
        // Halve s times so the series converges fast, then square back.
        let s = ((wp as f64).sqrt() as i64).max(4);
        let r = r.ldexp(-s);
        let mut term = Self::from_i64(1, wp);
        let mut sum = term.clone();
        let eps_top = -(wp as i64) - 4;
        for i in 1..1000 {
            term = term * r.clone() / Self::from_i64(i, wp);
            if term.is_zero() || term.top() < eps_top {
                break;
            }
            sum = sum + term.clone();
        }
        for _ in 0..s {
            sum = sum.clone() * sum;
        }
        sum.ldexp(k).with_precision(prec)
    }

    pub fn ln(&self) -> Self {
        assert!(!self.is_negative() && !self.is_zero(), "ln of a nonpositive number");
        let prec = self.prec;
        let wp = prec + 32;
        // self = y · 2^k with y in [1, 2)
        let k = self.top() - 1;
        let y = self.with_precision(wp).ldexp(-k);
        let one = Self::from_i64(1, wp);
        let z = (y.clone() - one.clone()) / (y + one);
        let ly = atanh_series(&z).ldexp(1);
        (ly + Self::ln2(wp) * Self::from_i64(k, wp)).with_precision(prec)
    }

    /// `self^p` for positive `self`.
    pub fn powf(&self, p: &Self) -> Self {
        if p.is_zero() {
            return Self::from_i64(1, self.prec);
        }
        (self.ln() * p.clone()).exp()
    }

    /// Gamma function for positive rational arguments.
    pub fn gamma(x: &Q, prec: u32) -> Self {
        assert!(x.is_positive(), "gamma needs a positive argument");
        let wp = prec + 32;
        let digits = (wp as f64 / std::f64::consts::LOG2_10) as i64;
        // Shift into the range where the asymptotic series is accurate.
        let target = Q::from_integer(BigInt::from(digits + 10));
        let mut shift = 0i64;
        let mut z = x.clone();
        let mut prod = Self::from_i64(1, wp);
        while z < target {
            prod = prod * Self::from_q(&z, wp);
            z += Q::one();
            shift += 1;
        }
        let _ = shift;
        let lg = ln_gamma_large(&z, wp, digits as usize);
        (lg.exp() / prod).with_precision(prec)
    }
}

// Σ z^(2k+1)/(2k+1)
fn atanh_series(z: &BigFloat) -> BigFloat {
    let wp = z.prec;
    let z2 = z.clone() * z.clone();
    let mut pw = z.clone();
    let mut sum = z.clone();
    let eps_top = -(wp as i64) - 4;
    for k in 1..100_000 {
        pw = pw * z2.clone();
        let term = pw.clone() / BigFloat::from_i64(2 * k + 1, wp);
        if term.is_zero() || term.top() < eps_top + sum.top() {
            break;
        }
        sum = sum + term;
    }
    sum
}

// atan(1/n) = Σ (-1)^k / ((2k+1) n^(2k+1))
fn atan_inv(n: i64, wp: u32) -> BigFloat {
    let inv = BigFloat::from_i64(1, wp) / BigFloat::from_i64(n, wp);
    let inv2 = inv.clone() * inv.clone();
    let mut pw = inv.clone();
    let mut sum = inv;
    let eps_top = -(wp as i64) - 4;
    for k in 1..100_000 {
        pw = pw * inv2.clone();
        let term = pw.clone() / BigFloat::from_i64(2 * k + 1, wp);
        if term.is_zero() || term.top() < eps_top {
            break;
        }
        if k % 2 == 1 {
            sum = sum - term;
        } else {
            sum = sum + term;
        }
    }
    sum
}

/// Bernoulli numbers `B_0..B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); n + 1];
    b[0] = Q::one();
    for m in 1..=n {
        // Σ_{k<m+1} C(m+1, k) B_k = 0
        let mut acc = Q::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from((m + 1 - k) as i64) / BigInt::from((k + 1) as i64);
        }
        b[m] = -acc / Q::from_integer(BigInt::from((m + 1) as i64));
    }
    b
}

// Stirling series for ln Γ(z), z large.
fn ln_gamma_large(z: &Q, wp: u32, terms: usize) -> BigFloat {
    let zf = BigFloat::from_q(z, wp);
    let half = BigFloat::from_q(&Q::new(BigInt::from(1), BigInt::from(2)), wp);
    let two_pi = BigFloat::pi(wp).ldexp(1);
    let mut out = (zf.clone() - half.clone()) * zf.ln() - zf.clone() + half * two_pi.ln();
    let b = bernoulli(2 * terms);
    let z2 = zf.clone() * zf.clone();
    let mut zpow = zf;
    let eps_top = -(wp as i64) - 4;
    for k in 1..=terms {
        let c = b[2 * k].clone() / Q::from_integer(BigInt::from((2 * k * (2 * k - 1)) as i64));
        let term = BigFloat::from_q(&c, wp) / zpow.clone();
        if term.is_zero() || term.top() < eps_top {
            break;
        }
        out = out + term;
        zpow = zpow * z2.clone();
    }
    out
}

fn align(a: &BigFloat, b: &BigFloat) -> (BigInt, BigInt, i64) {
    let e = a.e.min(b.e);
    let am = &a.m << (a.e - e) as usize;
    let bm = &b.m << (b.e - e) as usize;
    (am, bm, e)
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, o: BigFloat) -> BigFloat {
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return o.with_precision(prec);
        }
        if o.is_zero() {
            return self.with_precision(prec);
        }
        // A term far below the other's last bit cannot change the result.
        let gap = prec as i64 + 4;
        if self.top() - o.top() > gap {
            return self.with_precision(prec);
        }
        if o.top() - self.top() > gap {
            return o.with_precision(prec);
        }
        let (a, b, e) = align(&self, &o);
        BigFloat::normalized(a + b, e, prec)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            m: -self.m,
            e: self.e,
            prec: self.prec,
        }
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, o: BigFloat) -> BigFloat {
        self + (-o)
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, o: BigFloat) -> BigFloat {
        let prec = self.prec.max(o.prec);
        BigFloat::normalized(self.m * o.m, self.e + o.e, prec)
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, o: BigFloat) -> BigFloat {
        assert!(!o.is_zero(), "division by zero");
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift = prec as i64 + o.m.bits() as i64 - self.m.bits() as i64 + 2;
        let shift = shift.max(0);
        let num = &self.m << shift as usize;
        BigFloat::normalized(num / &o.m, self.e - o.e - shift, prec)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, o: &Self) -> bool {
        self.partial_cmp(o) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        let (a, b, _) = align(self, o);
        Some(a.cmp(&b))
    }
}

impl fmt::Display for BigFloat {
    /// Scientific notation with the working number of decimal digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let digits = ((self.prec.saturating_sub(24)) as f64 / std::f64::consts::LOG2_10).floor().max(1.0) as usize;
        let digits = f.precision().unwrap_or(digits);
        let neg = self.is_negative();
        let a = self.abs();
        // Decimal exponent estimate, corrected below.
        let mut d10 = (a.top() as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = |k: i64| -> BigFloat {
            let p = BigFloat::from_q(&Q::from_integer(BigInt::from(10).pow(k.unsigned_abs() as u32)), a.prec + 8);
            if k >= 0 {
                p
            } else {
                BigFloat::from_i64(1, a.prec + 8) / p
            }
        };
        let mut scaled = a.with_precision(a.prec + 8) / ten(d10 - digits as i64 + 1);
        let limit = BigFloat::from_q(&Q::from_integer(BigInt::from(10).pow(digits as u32)), a.prec + 8);
        while scaled >= limit {
            d10 += 1;
            scaled = a.with_precision(a.prec + 8) / ten(d10 - digits as i64 + 1);
        }
        let lower = BigFloat::from_q(&Q::from_integer(BigInt::from(10).pow(digits as u32 - 1)), a.prec + 8);
        while scaled < lower {
            d10 -= 1;
            scaled = a.with_precision(a.prec + 8) / ten(d10 - digits as i64 + 1);
        }
        let int = if scaled.e >= 0 {
            &scaled.m << scaled.e as usize
        } else {
            let sh = (-scaled.e) as usize;
            let q = &scaled.m >> sh;
            let rem_bit = (&scaled.m >> (sh - 1)) & BigInt::one();
            if rem_bit.is_one() {
                q + 1
            } else {
                q
            }
        };
        let mut s = int.to_string();
        if s.len() > digits {
            s.truncate(digits);
            d10 += 1;
        }
        let (head, tail) = s.split_at(1);
        if neg {
            write!(f, "-")?;
        }
        if tail.is_empty() {
            write!(f, "{head}e{d10}")
        } else {
            write!(f, "{head}.{tail}e{d10}")
        }
    }
}

impl From<BigFloat> for f64 {
    fn from(v: BigFloat) -> f64 {
        v.to_f64()
    }
}
