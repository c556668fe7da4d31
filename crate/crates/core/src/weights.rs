//! Univariate weights: factored densities, Pearson data, normalized moments
//! and monic three-term recurrences.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{Poly1, Poly2, RatFn2};
use crate::error::{Error, Result};
use crate::koornwinder::{RhoCase, RhoFunction};
use crate::scalar::{is_integer, q, qi, rational_sqrt, rational_to_string, Q};

type UniPoly = Poly1<Q>;

/// Open interval `(lo, hi)`; `None` stands for an infinite endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Option<Q>,
    pub hi: Option<Q>,
}

impl Interval {
    pub fn finite(lo: Q, hi: Q) -> Self {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn half_line(lo: Q) -> Self {
        Interval {
            lo: Some(lo),
            hi: None,
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lo.as_ref().map_or(true, |lo| x > lo) && self.hi.as_ref().map_or(true, |hi| x < hi)
    }

    /// `true` for `(-d, d)` with finite `d`.
    pub fn is_symmetric(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if *a == -b.clone())
    }

    /// Five interior rational points.
    pub fn sample_points(&self) -> Vec<Q> {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => (1..=5)
                .map(|k| a.clone() + (b.clone() - a.clone()) * q(k, 6))
                .collect(),
            (Some(a), None) => (1..=5).map(|k| a.clone() + q(k, 2)).collect(),
            (None, Some(b)) => (1..=5).map(|k| b.clone() - q(k, 2)).collect(),
            (None, None) => (-2..=2).map(qi).collect(),
        }
    }

    pub fn midpoint(&self) -> Q {
        self.sample_points()[2].clone()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), rational_to_string);
        let hi = self.hi.as_ref().map_or("inf".to_string(), rational_to_string);
        write!(f, "({lo}, {hi})")
    }
}

/// `Π base_i(x)^{e_i} · exp(arg(x))`, up to a positive constant.
///
/// Bases are kept pairwise coprime and sign-normalized to be positive at a
/// probe point inside the interval. Linear factors with rational roots are
/// split out of quadratic bases on insertion.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredDensity {
    factors: Vec<(UniPoly, Q)>,
    exp_arg: UniPoly,
    probe: Q,
}

fn rational_roots_quadratic(p: &UniPoly) -> Option<(Q, Q)> {
    if p.degree() != Some(2) {
        return None;
    }
    let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
    let disc = b.clone() * b.clone() - qi(4) * a.clone() * c;
    let s = rational_sqrt(&disc)?;
    let two_a = qi(2) * a;
    Some(((-b.clone() - s.clone()) / two_a.clone(), (-b + s) / two_a))
}

impl FactoredDensity {
    pub fn new(probe: Q) -> Self {
        FactoredDensity {
            factors: Vec::new(),
            exp_arg: UniPoly::zero(),
            probe,
        }
    }

    pub fn factors(&self) -> &[(UniPoly, Q)] {
        &self.factors
    }

    pub fn exp_arg(&self) -> &UniPoly {
        &self.exp_arg
    }

    pub fn probe(&self) -> &Q {
        &self.probe
    }

    pub fn with_factor(mut self, base: UniPoly, e: Q) -> Self {
        self.insert(base, e);
        self
    }

    pub fn with_exp(mut self, arg: UniPoly) -> Self {
        self.exp_arg = &self.exp_arg + &arg;
        self
    }

    fn normalize_sign(&self, p: UniPoly) -> UniPoly {
        let p = p.monic();
        if p.eval(&self.probe).is_negative() {
            -p
        } else {
            p
        }
    }

    /// Multiplies the density by `base^e`, keeping bases coprime.
    pub fn insert(&mut self, base: UniPoly, e: Q) {
        if e.is_zero() || base.is_constant() {
            return;
        }
        if let Some((r1, r2)) = rational_roots_quadratic(&base) {
            self.insert(UniPoly::linear(Q::one(), -r1), e.clone());
            self.insert(UniPoly::linear(Q::one(), -r2), e);
            return;
        }
        let base = self.normalize_sign(base);
        for idx in 0..self.factors.len() {
            let g = base.gcd(&self.factors[idx].0);
            if g.is_constant() {
                continue;
            }
            let (b, eb) = self.factors.remove(idx);
            let g = self.normalize_sign(g);
            let rest_b = b.div_exact(&g).expect("gcd divides");
            let rest_p = base.div_exact(&g).expect("gcd divides");
            self.insert(g, eb.clone() + e.clone());
            self.insert(rest_b, eb);
            self.insert(rest_p, e);
            return;
        }
        self.factors.push((base, e));
        self.factors.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| format!("{:?}", a.0.coeffs()).cmp(&format!("{:?}", b.0.coeffs())))
        });
    }

    /// Logarithmic derivative as a rational function of `x`.
    pub fn log_derivative(&self) -> RatFn2<Q> {
        let mut acc = RatFn2::from_poly(Poly2::from_x(&self.exp_arg.derivative()));
        for (b, e) in &self.factors {
            let t = RatFn2::new(Poly2::from_x(&b.derivative()), Poly2::from_x(b))
                .expect("nonzero base")
                .scale(e);
            acc = &acc + &t;
        }
        acc
    }

    /// Sign of the density at `x`, `None` if a fractional power hits a
    /// nonpositive base or a negative power hits a zero.
    pub fn sign_at(&self, x: &Q) -> Option<i8> {
        let mut s = 1i8;
        for (b, e) in &self.factors {
            let v = b.eval(x);
            if v.is_zero() {
                return None;
            }
            if v.is_negative() {
                if !is_integer(e) {
                    return None;
                }
                if e.to_integer() % 2 != num_bigint::BigInt::zero() {
                    s = -s;
                }
            }
        }
        Some(s)
    }
}

/// Exact normalized moment oracle, `k -> μ_k / μ_0`.
pub type MomentOracle = Arc<dyn Fn(usize) -> Q + Send + Sync>;

/// Univariate weight descriptor with its Pearson pair `(φ w)' = ψ w`.
#[derive(Clone)]
pub struct UnivariateWeight {
    pub name: String,
    pub interval: Interval,
    pub density: FactoredDensity,
    pub phi: UniPoly,
    pub psi: UniPoly,
    pub params: BTreeMap<String, Q>,
    moments: Option<MomentOracle>,
}

impl fmt::Debug for UnivariateWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnivariateWeight")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .field("density", &self.density)
            .field("phi", &self.phi)
            .field("psi", &self.psi)
            .field("params", &self.params)
            .field("custom_moments", &self.moments.is_some())
            .finish()
    }
}

impl UnivariateWeight {
    /// Validates the descriptor: `deg ψ ≥ 1` and a positive density at five
    /// interior sample points.
    pub fn new(
        name: impl Into<String>,
        interval: Interval,
        density: FactoredDensity,
        phi: UniPoly,
        psi: UniPoly,
        params: BTreeMap<String, Q>,
    ) -> Result<Self> {
        if psi.degree().unwrap_or(0) < 1 {
            return Err(Error::ConstantPsi);
        }
        if phi.is_zero() {
            return Err(Error::InvalidParameter("phi must be nonzero".into()));
        }
        for x in interval.sample_points() {
            if density.sign_at(&x) != Some(1) {
                return Err(Error::InvalidParameter(format!(
                    "density not positive at x = {}",
                    rational_to_string(&x)
                )));
            }
        }
        Ok(UnivariateWeight {
            name: name.into(),
            interval,
            density,
            phi,
            psi,
            params,
            moments: None,
        })
    }

    /// Attaches an exact normalized moment oracle, used by the generic
    /// recurrence route in place of the built-in Beta/Gamma moments.
    pub fn with_moments(mut self, oracle: MomentOracle) -> Self {
        self.moments = Some(oracle);
        self
    }

    pub fn param(&self, name: &str) -> Option<&Q> {
        self.params.get(name)
    }

    /// `true` if `w(-x) = w(x)` on a symmetric interval.
    pub fn is_even(&self) -> bool {
        self.interval.is_symmetric()
            && self.density.exp_arg.is_even()
            && {
                // The multiset of bases must be closed under x -> -x.
                let reflected: Vec<(UniPoly, Q)> = self
                    .density
                    .factors
                    .iter()
                    .map(|(b, e)| (self.density.normalize_sign(b.reflect()), e.clone()))
                    .collect();
                reflected.iter().all(|f| self.density.factors.contains(f))
            }
    }
}

/// Pearson data `(φ, ψ, ψ̃ = ψ - φ', s)` for one representation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PearsonData1 {
    #[serde(serialize_with = "ser_uni")]
    pub phi: UniPoly,
    #[serde(serialize_with = "ser_uni")]
    pub psi: UniPoly,
    #[serde(serialize_with = "ser_uni")]
    pub psi_tilde: UniPoly,
    pub class_s: usize,
}

fn ser_uni<S: serde::Serializer>(p: &UniPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// `max(deg φ - 2, deg ψ - 1)` floored at zero, for the given pair.
pub fn class_of(phi: &UniPoly, psi: &UniPoly) -> Result<usize> {
    let dpsi = psi.degree().unwrap_or(0);
    if dpsi < 1 {
        return Err(Error::ConstantPsi);
    }
    let dphi = phi.degree().unwrap_or(0) as i64;
    Ok((dphi - 2).max(dpsi as i64 - 1).max(0) as usize)
}

pub fn pearson_tilde(w: &UnivariateWeight) -> PearsonData1 {
    PearsonData1 {
        phi: w.phi.clone(),
        psi: w.psi.clone(),
        psi_tilde: &w.psi - &w.phi.derivative(),
        class_s: class_of(&w.phi, &w.psi).expect("validated at construction"),
    }
}

/// Checks `φ' + φ·(ln w)' - ψ = 0` exactly.
pub fn pearson_identity_holds(w: &UnivariateWeight) -> bool {
    let phi = RatFn2::from_poly(Poly2::from_x(&w.phi));
    let lhs = &phi.dx() + &(&phi * &w.density.log_derivative());
    (&lhs - &RatFn2::from_poly(Poly2::from_x(&w.psi))).is_zero()
}

fn check_gt_minus_one(name: &str, v: &Q) -> Result<()> {
    if *v > qi(-1) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} > -1 (got {})", rational_to_string(v))))
    }
}

fn params(pairs: &[(&str, &Q)]) -> BTreeMap<String, Q> {
    pairs.iter().map(|(k, v)| (k.to_string(), (*v).clone())).collect()
}

/// `(1-x)^α (1+x)^β` on `(-1, 1)`.
pub fn jacobi_sym(alpha: &Q, beta: &Q) -> Result<UnivariateWeight> {
    check_gt_minus_one("alpha", alpha)?;
    check_gt_minus_one("beta", beta)?;
    let density = FactoredDensity::new(Q::zero())
        .with_factor(UniPoly::linear(qi(-1), qi(1)), alpha.clone())
        .with_factor(UniPoly::linear(qi(1), qi(1)), beta.clone());
    let two = qi(2);
    UnivariateWeight::new(
        "jacobi_sym",
        Interval::finite(qi(-1), qi(1)),
        density,
        UniPoly::new(vec![qi(1), qi(0), qi(-1)]),
        UniPoly::linear(-(alpha + beta + two), beta - alpha),
        params(&[("alpha", alpha), ("beta", beta)]),
    )
}

/// `(1-x)^α x^β` on `(0, 1)`.
pub fn jacobi01(alpha: &Q, beta: &Q) -> Result<UnivariateWeight> {
    check_gt_minus_one("alpha", alpha)?;
    check_gt_minus_one("beta", beta)?;
    let density = FactoredDensity::new(q(1, 2))
        .with_factor(UniPoly::linear(qi(-1), qi(1)), alpha.clone())
        .with_factor(UniPoly::x(), beta.clone());
    UnivariateWeight::new(
        "jacobi01",
        Interval::finite(qi(0), qi(1)),
        density,
        UniPoly::new(vec![qi(0), qi(1), qi(-1)]),
        UniPoly::linear(-(alpha + beta + qi(2)), beta + qi(1)),
        params(&[("alpha", alpha), ("beta", beta)]),
    )
}

/// `x^α e^{-x}` on `(0, ∞)`.
pub fn laguerre(alpha: &Q) -> Result<UnivariateWeight> {
    check_gt_minus_one("alpha", alpha)?;
    let density = FactoredDensity::new(qi(1))
        .with_factor(UniPoly::x(), alpha.clone())
        .with_exp(UniPoly::linear(qi(-1), qi(0)));
    UnivariateWeight::new(
        "laguerre",
        Interval::half_line(qi(0)),
        density,
        UniPoly::x(),
        UniPoly::linear(qi(-1), alpha + qi(1)),
        params(&[("alpha", alpha)]),
    )
}

/// Builds a built-in univariate family by name.
pub fn make_family(name: &str, p: &BTreeMap<String, Q>) -> Result<UnivariateWeight> {
    let get = |k: &str| {
        p.get(k)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter '{k}'")))
    };
    match name {
        "jacobi_sym" => jacobi_sym(&get("alpha")?, &get("beta")?),
        "jacobi01" => jacobi01(&get("alpha")?, &get("beta")?),
        "laguerre" => laguerre(&get("alpha")?),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

/// The ρ-modified weight `u_m = ρ^{2m+1} w₁` with its Pearson pair.
///
/// When `η = φ₁ρ'/ρ` is not a polynomial the pair is multiplied through by
/// `ρ` (Case I) or `ρ²` (Case II), which may raise the class.
pub fn rho_modified(w1: &UnivariateWeight, rho: &RhoFunction, m: usize) -> Result<UnivariateWeight> {
    let mut density = w1.density.clone();
    let power = qi(2 * m as i64 + 1);
    let (g, eta) = match rho.case {
        RhoCase::I => {
            let r = rho.linear.clone().expect("Case I carries its linear form");
            density.insert(r.clone(), power.clone());
            let eta = RatFn2::new(
                Poly2::from_x(&w1.phi.scale(&r.coeff(1))),
                Poly2::from_x(&r),
            )?;
            (r, eta)
        }
        RhoCase::II => {
            density.insert(rho.rho_sq.clone(), power.clone() / qi(2));
            let eta = RatFn2::new(
                Poly2::from_x(&(&w1.phi * &rho.rho_sq.derivative())),
                Poly2::from_x(&rho.rho_sq.scale(&qi(2))),
            )?;
            (rho.rho_sq.clone(), eta)
        }
    };
    let (phi, psi) = match eta.to_poly() {
        Some(e) => {
            let e = e.to_poly1_x().expect("x-only");
            (w1.phi.clone(), &w1.psi + &e.scale(&power))
        }
        None => {
            let ge = eta
                .mul_poly(&Poly2::from_x(&g))
                .to_poly()
                .and_then(|p| p.to_poly1_x())
                .ok_or_else(|| Error::Internal("g * eta not polynomial".into()))?;
            let phi = &g * &w1.phi;
            let psi = &(&(&g * &w1.psi) + &ge.scale(&power)) + &(&g.derivative() * &w1.phi);
            (phi, psi)
        }
    };
    let mut params = w1.params.clone();
    params.insert("m".into(), qi(m as i64));
    // A custom moment oracle on w1 does not carry over; u_m uses its density.
    UnivariateWeight::new(
        format!("{}*rho^{}", w1.name, 2 * m + 1),
        w1.interval.clone(),
        density,
        phi,
        psi,
        params,
    )
}

/// Monic recurrence `p_{k+1} = (x - b_k) p_k - c_k p_{k-1}`, with
/// `c_0 = 1` standing for the normalized `μ₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence {
    pub b: Vec<Q>,
    pub c: Vec<Q>,
}

impl Recurrence {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Monic polynomials `p_0 ..= p_n`, requiring `n ≤ len`.
    pub fn polys(&self, n: usize) -> Vec<UniPoly> {
        assert!(n <= self.len(), "recurrence too short");
        let mut out = vec![UniPoly::one()];
        let mut prev = UniPoly::zero();
        for k in 0..n {
            let cur = out[k].clone();
            let next = &(&UniPoly::linear(qi(1), -self.b[k].clone()) * &cur) - &prev.scale(&self.c[k]);
            prev = cur;
            out.push(next);
        }
        out
    }

    /// Squared norms `h_k = c_1 ⋯ c_k` relative to `μ₀`.
    pub fn norms(&self) -> Vec<Q> {
        let mut h = Vec::with_capacity(self.len());
        let mut acc = Q::one();
        for k in 0..self.len() {
            if k > 0 {
                acc = acc * self.c[k].clone();
            }
            h.push(acc.clone());
        }
        h
    }
}

enum Shape {
    // (hi - x)^p (x - lo)^q · mult
    Beta { lo: Q, hi: Q, p: Q, q: Q, mult: UniPoly },
    // (x - lo)^a e^{-c x} · mult
    Gamma { lo: Q, c: Q, a: Q, mult: UniPoly },
}

fn root_of_linear(b: &UniPoly) -> Option<Q> {
    (b.degree() == Some(1)).then(|| -b.coeff(0) / b.coeff(1))
}

fn shape(w: &UnivariateWeight) -> Result<Shape> {
    let unavailable = |why: &str| Error::MomentsUnavailable(format!("{}: {why}", w.name));
    let mut mult = UniPoly::one();
    let absorb = |b: &UniPoly, e: &Q, mult: &mut UniPoly| -> Result<()> {
        if is_integer(e) && !e.is_negative() {
            let k: usize = e.to_integer().try_into().map_err(|_| unavailable("huge exponent"))?;
            *mult = &*mult * &b.pow(k);
            Ok(())
        } else {
            Err(unavailable("non-polynomial interior factor"))
        }
    };
    match (&w.interval.lo, &w.interval.hi) {
        (Some(lo), Some(hi)) => {
            if !w.density.exp_arg.is_constant() {
                return Err(unavailable("exponential factor on a finite interval"));
            }
            let (mut p, mut qq) = (Q::zero(), Q::zero());
            for (b, e) in &w.density.factors {
                match root_of_linear(b) {
                    Some(r) if r == *lo => qq = qq + e.clone(),
                    Some(r) if r == *hi => p = p + e.clone(),
                    _ => absorb(b, e, &mut mult)?,
                }
            }
            if p <= qi(-1) || qq <= qi(-1) {
                return Err(unavailable("endpoint exponent <= -1"));
            }
            Ok(Shape::Beta { lo: lo.clone(), hi: hi.clone(), p, q: qq, mult })
        }
        (Some(lo), None) => {
            let ea = &w.density.exp_arg;
            if ea.degree() != Some(1) || !ea.coeff(1).is_negative() {
                return Err(unavailable("half-line weight needs exp(-c x), c > 0"));
            }
            let mut a = Q::zero();
            for (b, e) in &w.density.factors {
                match root_of_linear(b) {
                    Some(r) if r == *lo => a = a + e.clone(),
                    _ => absorb(b, e, &mut mult)?,
                }
            }
            if a <= qi(-1) {
                return Err(unavailable("endpoint exponent <= -1"));
            }
            Ok(Shape::Gamma { lo: lo.clone(), c: -ea.coeff(1), a, mult })
        }
        _ => Err(unavailable("unsupported interval")),
    }
}

fn binomial_row(k: usize) -> Vec<Q> {
    let mut row = vec![Q::one()];
    for i in 0..k {
        let next = row[i].clone() * qi((k - i) as i64) / qi(i as i64 + 1);
        row.push(next);
    }
    row
}

// Moments of x = shift + scale*t given normalized t-moments.
fn affine_moments(tm: &[Q], shift: &Q, scale: &Q, count: usize) -> Vec<Q> {
    (0..count)
        .map(|k| {
            let row = binomial_row(k);
            (0..=k).fold(Q::zero(), |acc, i| {
                acc + row[i].clone()
                    * crate::scalar::pow_int(shift, k - i)
                    * crate::scalar::pow_int(scale, i)
                    * tm[i].clone()
            })
        })
        .collect()
}

// Normalized moments of the pure Beta/Gamma part, `k < total`.
fn base_moments(sh: &Shape, total: usize) -> Vec<Q> {
    match sh {
        Shape::Beta { lo, hi, p, q: qq, .. } => {
            let mut tm = vec![Q::one()];
            for j in 0..total.saturating_sub(1) {
                let jj = qi(j as i64);
                let next = tm[j].clone() * (qq.clone() + qi(1) + jj.clone())
                    / (p.clone() + qq.clone() + qi(2) + jj);
                tm.push(next);
            }
            affine_moments(&tm, lo, &(hi.clone() - lo.clone()), total)
        }
        Shape::Gamma { lo, c, a, .. } => {
            let mut sm = vec![Q::one()];
            for j in 0..total.saturating_sub(1) {
                let next = sm[j].clone() * (a.clone() + qi(1) + qi(j as i64));
                sm.push(next);
            }
            affine_moments(&sm, lo, &(Q::one() / c.clone()), total)
        }
    }
}

fn shape_mult(sh: &Shape) -> &UniPoly {
    match sh {
        Shape::Beta { mult, .. } | Shape::Gamma { mult, .. } => mult,
    }
}

// Σ_j r_j m_{k+j} for the multiplier r.
fn mult_moment(mult: &UniPoly, base: &[Q], k: usize) -> Q {
    mult.coeffs()
        .iter()
        .enumerate()
        .fold(Q::zero(), |acc, (j, r)| acc + r.clone() * base[k + j].clone())
}

/// Normalized moments `μ_k / μ₀`, `k < count`.
pub fn moments(w: &UnivariateWeight, count: usize) -> Result<Vec<Q>> {
    if let Some(oracle) = &w.moments {
        return Ok((0..count).map(|k| oracle(k)).collect());
    }
    let sh = shape(w)?;
    let mult = shape_mult(&sh);
    let base = base_moments(&sh, count + mult.degree().unwrap_or(0));
    if mult.is_constant() {
        return Ok(base[..count].to_vec());
    }
    let raw: Vec<Q> = (0..count).map(|k| mult_moment(mult, &base, k)).collect();
    let m0 = raw[0].clone();
    if !m0.is_positive() {
        return Err(Error::DegenerateFunctional { step: 0 });
    }
    Ok(raw.into_iter().map(|v| v / m0.clone()).collect())
}

/// Closed form of the absolute mass `μ₀ = ∫ w`.
#[derive(Clone, Debug, PartialEq)]
pub enum MassFormula {
    /// `factor · width^(p+q+1) Γ(p+1) Γ(q+1) / Γ(p+q+2)`
    Beta { width: Q, p: Q, q: Q, factor: Q },
    /// `factor · e^shift Γ(a+1) / c^(a+1)`
    Gamma { c: Q, a: Q, shift: Q, factor: Q },
}

pub fn mass_formula(w: &UnivariateWeight) -> Result<MassFormula> {
    if w.moments.is_some() {
        return Err(Error::MomentsUnavailable(format!("{}: custom moments carry no mass", w.name)));
    }
    let sh = shape(w)?;
    let mult = shape_mult(&sh);
    let base = base_moments(&sh, 1 + mult.degree().unwrap_or(0));
    let factor = mult_moment(mult, &base, 0);
    if !factor.is_positive() {
        return Err(Error::DegenerateFunctional { step: 0 });
    }
    Ok(match sh {
        Shape::Beta { lo, hi, p, q: qq, .. } => MassFormula::Beta { width: hi - lo, p, q: qq, factor },
        Shape::Gamma { lo, c, a, .. } => {
            let shift = w.density.exp_arg.eval(&lo);
            MassFormula::Gamma { c, a, shift, factor }
        }
    })
}

/// Chebyshev algorithm: recurrence coefficients from `2n` normalized moments.
pub fn recurrence_from_moments(mom: &[Q], n: usize) -> Result<Recurrence> {
    if n == 0 {
        return Ok(Recurrence { b: vec![], c: vec![] });
    }
    if mom.len() < 2 * n {
        return Err(Error::MomentsUnavailable(format!(
            "need {} moments, got {}",
            2 * n,
            mom.len()
        )));
    }
    if !mom[0].is_positive() {
        return Err(Error::DegenerateFunctional { step: 0 });
    }
    let len = 2 * n;
    let mut prev2 = vec![Q::zero(); len];
    let mut prev = mom[..len].to_vec();
    let mut b = vec![mom[1].clone() / mom[0].clone()];
    let mut c = vec![mom[0].clone()];
    for k in 1..n {
        let mut cur = vec![Q::zero(); len];
        for l in k..(len - k) {
            cur[l] = prev[l + 1].clone()
                - b[k - 1].clone() * prev[l].clone()
                - c[k - 1].clone() * prev2[l].clone();
        }
        if !cur[k].is_positive() {
            return Err(Error::DegenerateFunctional { step: k });
        }
        b.push(cur[k + 1].clone() / cur[k].clone() - prev[k].clone() / prev[k - 1].clone());
        c.push(cur[k].clone() / prev[k - 1].clone());
        prev2 = prev;
        prev = cur;
    }
    Ok(Recurrence { b, c })
}

fn jacobi_recurrence(lo: &Q, hi: &Q, p: &Q, qq: &Q, n: usize) -> Recurrence {
    let half = (hi.clone() - lo.clone()) / qi(2);
    let s = p.clone() + qq.clone();
    let mut b = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for k in 0..n {
        let kk = qi(k as i64);
        let bt = if k == 0 {
            (qq.clone() - p.clone()) / (s.clone() + qi(2))
        } else {
            let t = qi(2) * kk.clone() + s.clone();
            (qq.clone() * qq.clone() - p.clone() * p.clone()) / (t.clone() * (t + qi(2)))
        };
        b.push(lo.clone() + half.clone() * (bt + qi(1)));
        let ct = match k {
            0 => Q::one(),
            1 => {
                let t = s.clone() + qi(2);
                qi(4) * (p.clone() + qi(1)) * (qq.clone() + qi(1))
                    / (t.clone() * t * (s.clone() + qi(3)))
            }
            _ => {
                let t = qi(2) * kk.clone() + s.clone();
                qi(4) * kk.clone()
                    * (kk.clone() + p.clone())
                    * (kk.clone() + qq.clone())
                    * (kk.clone() + s.clone())
                    / (t.clone() * t.clone() * (t.clone() + qi(1)) * (t - qi(1)))
            }
        };
        c.push(if k == 0 { ct } else { half.clone() * half.clone() * ct });
    }
    Recurrence { b, c }
}

fn laguerre_recurrence(lo: &Q, rate: &Q, a: &Q, n: usize) -> Recurrence {
    let inv = Q::one() / rate.clone();
    let b = (0..n)
        .map(|k| lo.clone() + inv.clone() * (qi(2 * k as i64 + 1) + a.clone()))
        .collect();
    let c = (0..n)
        .map(|k| {
            if k == 0 {
                Q::one()
            } else {
                let kk = qi(k as i64);
                inv.clone() * inv.clone() * kk.clone() * (kk + a.clone())
            }
        })
        .collect();
    Recurrence { b, c }
}

/// First `n` recurrence coefficients. Pure Jacobi- and Laguerre-shaped
/// densities use closed forms; everything else goes through exact moments.
pub fn monic_recurrence(w: &UnivariateWeight, n: usize) -> Result<Recurrence> {
    if w.moments.is_none() {
        match shape(w) {
            Ok(Shape::Beta { lo, hi, p, q: qq, mult }) if mult.is_constant() => {
                return Ok(jacobi_recurrence(&lo, &hi, &p, &qq, n))
            }
            Ok(Shape::Gamma { lo, c, a, mult }) if mult.is_constant() => {
                return Ok(laguerre_recurrence(&lo, &c, &a, n))
            }
            _ => {}
        }
    }
    recurrence_from_moments(&moments(w, 2 * n)?, n)
}

/// Monic orthogonal polynomial of degree `n`.
pub fn monic_poly(w: &UnivariateWeight, n: usize) -> Result<UniPoly> {
    let r = monic_recurrence(w, n)?;
    Ok(r.polys(n).pop().expect("nonempty"))
}

/// Expansion of `φ p_n'' + ψ p_n'` in the monic basis `{p_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandReport {
    pub n: usize,
    pub coefficients: BTreeMap<usize, Q>,
}

impl BandReport {
    pub fn band(&self) -> Vec<usize> {
        self.coefficients.keys().copied().collect()
    }
}

pub fn univariate_structure_check(w: &UnivariateWeight, n: usize) -> Result<BandReport> {
    let s = class_of(&w.phi, &w.psi)?;
    let top = n + s;
    let rec = monic_recurrence(w, top + 1)?;
    let basis = rec.polys(top);
    let p = &basis[n];
    let image = &(&w.phi * &p.derivative().derivative()) + &(&w.psi * &p.derivative());
    let mut residual = image;
    let mut coefficients = BTreeMap::new();
    while let Some(d) = residual.degree() {
        if d > top {
            return Err(Error::ExpansionResidual(top));
        }
        let c = residual.leading_coeff();
        residual = &residual - &basis[d].scale(&c);
        coefficients.insert(d, c);
    }
    Ok(BandReport { n, coefficients })
}
