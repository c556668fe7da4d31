//! Koornwinder construction: `P_{n,m} = p_{n-m}(x; m) ρ(x)^m q_m(y/ρ(x))`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::algebra::{gcd::gcd, Monomial, Poly1, Poly2, RatFn2, Vec2};
use crate::error::{Error, Result};
use crate::scalar::{q, qi, Q};
use crate::weights::{monic_recurrence, rho_modified, Interval, UnivariateWeight};

type UniPoly = Poly1<Q>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RhoCase {
    /// `ρ = r₁x + r₀`.
    I,
    /// `ρ = sqrt(a₂x² + a₁x + a₀)`, paired with an even `w₂`.
    II,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoFunction {
    pub case: RhoCase,
    pub rho_sq: UniPoly,
    /// `r₁x + r₀`, Case I only.
    pub linear: Option<UniPoly>,
}

impl RhoFunction {
    pub fn case_one(r1: Q, r0: Q) -> Result<Self> {
        if r1.is_zero() && r0.is_zero() {
            return Err(Error::InvalidRho("|r1| + |r0| must be positive".into()));
        }
        let lin = UniPoly::linear(r1, r0);
        Ok(RhoFunction {
            case: RhoCase::I,
            rho_sq: &lin * &lin,
            linear: Some(lin),
        })
    }

    pub fn case_two(rho_sq: UniPoly) -> Result<Self> {
        if rho_sq.is_zero() || rho_sq.degree().unwrap_or(0) > 2 {
            return Err(Error::InvalidRho("rho^2 must be a nonzero polynomial of degree <= 2".into()));
        }
        Ok(RhoFunction {
            case: RhoCase::II,
            rho_sq,
            linear: None,
        })
    }

    /// `ρ = 1`, the tensor-product case.
    pub fn one() -> Self {
        Self::case_one(Q::zero(), Q::one()).expect("nonzero")
    }

    pub fn is_constant(&self) -> bool {
        self.rho_sq.is_constant()
    }

    /// `ρ(x)^e` as a rational function; odd `e` in Case II has no such form.
    pub fn power(&self, e: i64) -> Result<RatFn2<Q>> {
        let (base, k) = match self.case {
            RhoCase::I => (self.linear.clone().expect("linear form"), e),
            RhoCase::II => {
                if e % 2 != 0 {
                    return Err(Error::NonPolynomialLift {
                        power: e.unsigned_abs() as usize,
                        m: e.unsigned_abs() as usize,
                    });
                }
                (self.rho_sq.clone(), e / 2)
            }
        };
        let p = Poly2::from_x(&base.pow(k.unsigned_abs() as usize));
        if k >= 0 {
            Ok(p.into())
        } else {
            RatFn2::new(Poly2::one(), p)
        }
    }

    /// Exact value of `ρ(x)²`.
    pub fn rho_sq_at(&self, x: &Q) -> Q {
        self.rho_sq.eval(x)
    }

    fn validate_on(&self, interval: &Interval) -> Result<()> {
        for x in interval.sample_points() {
            let ok = match self.case {
                RhoCase::I => self.linear.as_ref().expect("linear").eval(&x).is_positive(),
                RhoCase::II => self.rho_sq.eval(&x).is_positive(),
            };
            if !ok {
                return Err(Error::InvalidRho(format!("rho not positive at x = {x}")));
            }
        }
        if self.case == RhoCase::II {
            let mut checks: Vec<Q> = [&interval.lo, &interval.hi].into_iter().flatten().cloned().collect();
            let a2 = self.rho_sq.coeff(2);
            if !a2.is_zero() {
                let v = -self.rho_sq.coeff(1) / (qi(2) * a2);
                if interval.contains(&v) {
                    checks.push(v);
                }
            }
            if checks.iter().any(|x| self.rho_sq.eval(x).is_negative()) {
                return Err(Error::InvalidRho("rho^2 negative on [a, b]".into()));
            }
        }
        Ok(())
    }
}

/// `ρ^k q(y/ρ) = Σ_j c_j y^j ρ^{k-j}`, exact when every needed power of ρ
/// has a rational form.
pub fn compose_scaled(qp: &UniPoly, rho: &RhoFunction, k: i64) -> Result<RatFn2<Q>> {
    let mut acc = RatFn2::zero();
    for (j, c) in qp.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let rp = rho.power(k - j as i64).map_err(|_| Error::NonPolynomialLift {
            power: j,
            m: k.max(0) as usize,
        })?;
        let term = rp.mul_poly(&Poly2::monomial(c.clone(), 0, j as u32));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `ρ(x)^m q(y/ρ(x))` as a polynomial.
pub fn lift(qp: &UniPoly, rho: &RhoFunction, m: usize) -> Result<Poly2<Q>> {
    if qp.degree().unwrap_or(0) > m {
        return Err(Error::NonPolynomialLift {
            power: qp.degree().unwrap_or(0),
            m,
        });
    }
    compose_scaled(qp, rho, m as i64)?
        .to_poly()
        .ok_or(Error::NonPolynomialLift { power: m, m })
}

/// `Ω = {a < x < b, c ρ(x) < y < d ρ(x)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainDescriptor {
    pub x_range: Interval,
    /// `(c, d)`; `None` for an infinite side.
    pub y_scale: Interval,
    pub rho: RhoFunction,
    pub boundary_polynomials: Vec<Poly2<Q>>,
}

fn sqrt_floor(v: &Q) -> Q {
    // Rational lower bound for sqrt(v), accurate to about 1e-6.
    let k = num_bigint::BigInt::from(1_000_000);
    let scaled = (v.clone() * Q::from_integer(&k * &k)).floor().to_integer();
    Q::new(scaled.sqrt(), k)
}

impl DomainDescriptor {
    fn new(x_range: Interval, y_scale: Interval, rho: RhoFunction) -> Self {
        let mut bounds = Vec::new();
        for (end, sign) in [(&x_range.lo, 1), (&x_range.hi, -1)] {
            if let Some(e) = end {
                // Skip endpoints where ρ vanishes; Ω pinches to a point there.
                if !rho.rho_sq.eval(e).is_zero() {
                    bounds.push(Poly2::from_x(&UniPoly::linear(qi(sign), -e.clone() * qi(sign))));
                }
            }
        }
        match rho.case {
            RhoCase::I => {
                let r = Poly2::from_x(rho.linear.as_ref().expect("linear"));
                if let Some(c) = &y_scale.lo {
                    bounds.push(&Poly2::y() - &r.scale(c));
                }
                if let Some(d) = &y_scale.hi {
                    bounds.push(&r.scale(d) - &Poly2::y());
                }
            }
            RhoCase::II => {
                let d = y_scale.hi.clone().expect("Case II is bounded");
                bounds.push(&Poly2::from_x(&rho.rho_sq).scale(&(d.clone() * d)) - &Poly2::y().pow(2));
            }
        }
        let bounds = bounds
            .into_iter()
            .filter(|b| !b.is_constant())
            .map(|b| {
                let lc = b.leading_coeff().abs();
                b.scale(&(Q::one() / lc))
            })
            .collect();
        DomainDescriptor {
            x_range,
            y_scale,
            rho,
            boundary_polynomials: bounds,
        }
    }

    pub fn contains(&self, x: &Q, y: &Q) -> bool {
        if !self.x_range.contains(x) {
            return false;
        }
        match self.rho.case {
            RhoCase::I => {
                let r = self.rho.linear.as_ref().expect("linear").eval(x);
                let t = y.clone() / r;
                self.y_scale.contains(&t)
            }
            RhoCase::II => {
                let d = self.y_scale.hi.clone().expect("bounded");
                y.clone() * y.clone() < d.clone() * d * self.rho.rho_sq.eval(x)
            }
        }
    }

    /// A handful of rational points strictly inside Ω.
    pub fn interior_points(&self) -> Vec<(Q, Q)> {
        let fracs = [q(1, 4), q(1, 2), q(5, 7)];
        let mut out = Vec::new();
        for x in self.x_range.sample_points() {
            let r = match self.rho.case {
                RhoCase::I => self.rho.linear.as_ref().expect("linear").eval(&x),
                RhoCase::II => sqrt_floor(&self.rho.rho_sq.eval(&x)),
            };
            for t in &fracs {
                let s = match (&self.y_scale.lo, &self.y_scale.hi) {
                    (Some(c), Some(d)) => c.clone() + (d.clone() - c.clone()) * t.clone(),
                    (Some(c), None) => c.clone() + t.clone() * qi(2),
                    (None, Some(d)) => d.clone() - t.clone() * qi(2),
                    (None, None) => t.clone(),
                };
                let y = s * r.clone();
                if self.contains(&x, &y) {
                    out.push((x.clone(), y));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct KoornwinderSystem {
    pub w1: UnivariateWeight,
    pub w2: UnivariateWeight,
    pub rho: RhoFunction,
    pub domain: DomainDescriptor,
}

/// Validates the Case I/II conditions and assembles the system.
pub fn make_system(w1: UnivariateWeight, w2: UnivariateWeight, rho: RhoFunction) -> Result<KoornwinderSystem> {
    if rho.case == RhoCase::II {
        if !w2.interval.is_symmetric() {
            return Err(Error::CaseTwoRequiresSymmetricInterval);
        }
        if !w2.is_even() {
            return Err(Error::CaseTwoRequiresEven);
        }
    }
    rho.validate_on(&w1.interval)?;
    let domain = DomainDescriptor::new(w1.interval.clone(), w2.interval.clone(), rho.clone());
    Ok(KoornwinderSystem { w1, w2, rho, domain })
}

/// Single `P_{n,m}`; prefer [`KoornwinderBasis`] for tables.
pub fn build_polynomial(sys: &KoornwinderSystem, n: usize, m: usize) -> Result<Poly2<Q>> {
    if m > n {
        return Err(Error::InvalidParameter(format!("need m <= n, got ({n}, {m})")));
    }
    let um = rho_modified(&sys.w1, &sys.rho, m)?;
    let p = monic_recurrence(&um, n - m)?.polys(n - m).pop().expect("nonempty");
    let qm = monic_recurrence(&sys.w2, m)?.polys(m).pop().expect("nonempty");
    Ok(&Poly2::from_x(&p) * &lift(&qm, &sys.rho, m)?)
}

/// All `P_{n,m}` with `n ≤ N`, indexed for leading-term elimination.
#[derive(Clone, Debug)]
pub struct KoornwinderBasis {
    pub nmax: usize,
    polys: BTreeMap<(usize, usize), Poly2<Q>>,
    by_leading: HashMap<Monomial, (usize, usize)>,
}

impl KoornwinderBasis {
    pub fn new(sys: &KoornwinderSystem, nmax: usize) -> Result<Self> {
        let qrec = monic_recurrence(&sys.w2, nmax)?;
        let qs = qrec.polys(nmax);
        let mut polys = BTreeMap::new();
        let mut by_leading = HashMap::new();
        for m in 0..=nmax {
            let um = rho_modified(&sys.w1, &sys.rho, m)?;
            let ps = monic_recurrence(&um, nmax - m)?.polys(nmax - m);
            let lifted = lift(&qs[m], &sys.rho, m)?;
            for (k, p) in ps.iter().enumerate() {
                let pnm = &Poly2::from_x(p) * &lifted;
                let lm = pnm.leading_monomial().expect("nonzero");
                if lm != Monomial::new(k as u32, m as u32) || !pnm.leading_coeff().is_one() {
                    return Err(Error::Internal(format!("P_({},{m}) is not unitriangular", k + m)));
                }
                by_leading.insert(lm, (k + m, m));
                polys.insert((k + m, m), pnm);
            }
        }
        Ok(KoornwinderBasis {
            nmax,
            polys,
            by_leading,
        })
    }

    pub fn get(&self, n: usize, m: usize) -> Option<&Poly2<Q>> {
        self.polys.get(&(n, m))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Poly2<Q>)> {
        self.polys.iter()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Unique coefficients of `p` in the basis.
    pub fn expand(&self, p: &Poly2<Q>) -> Result<BTreeMap<(usize, usize), Q>> {
        let mut residual = p.clone();
        let mut out = BTreeMap::new();
        while let Some((lm, c)) = residual.leading() {
            let idx = *self
                .by_leading
                .get(&lm)
                .ok_or(Error::ExpansionResidual(self.nmax))?;
            residual = &residual - &self.polys[&idx].scale(&c);
            out.insert(idx, c);
        }
        Ok(out)
    }
}

/// `Π base_i^{e_i} · exp(arg)`, bases pairwise coprime and positive on Ω.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredWeight2 {
    pub factors: Vec<(Poly2<Q>, Q)>,
    pub exp_arg: RatFn2<Q>,
}

impl FactoredWeight2 {
    fn insert(&mut self, base: Poly2<Q>, e: Q, probe: &(Q, Q)) {
        if e.is_zero() || base.is_constant() {
            return;
        }
        let norm = |p: Poly2<Q>| {
            let p = p.monic();
            if p.eval(&probe.0, &probe.1).is_negative() {
                -p
            } else {
                p
            }
        };
        let base = norm(base);
        for idx in 0..self.factors.len() {
            let g = gcd(&base, &self.factors[idx].0);
            if g.is_constant() {
                continue;
            }
            let (b, eb) = self.factors.remove(idx);
            let g = norm(g);
            let rest_b = b.div_exact(&g).expect("gcd divides");
            let rest_p = base.div_exact(&g).expect("gcd divides");
            self.insert(g, eb.clone() + e.clone(), probe);
            self.insert(rest_b, eb, probe);
            self.insert(rest_p, e, probe);
            return;
        }
        self.factors.push((base, e));
    }

    /// `∇ ln w`.
    pub fn grad_log(&self) -> Vec2<Q> {
        let mut gx = self.exp_arg.dx();
        let mut gy = self.exp_arg.dy();
        for (b, e) in &self.factors {
            let bx = RatFn2::new(b.dx(), b.clone()).expect("nonzero").scale(e);
            let by = RatFn2::new(b.dy(), b.clone()).expect("nonzero").scale(e);
            gx = &gx + &bx;
            gy = &gy + &by;
        }
        Vec2::new(gx, gy)
    }

    /// Numeric value at a point, for cross-checks.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let xq = |p: &Poly2<Q>| p.map(crate::scalar::rational_to_f64).eval(&x, &y);
        let mut v = 1.0f64;
        for (b, e) in &self.factors {
            v *= xq(b).powf(crate::scalar::rational_to_f64(e));
        }
        let n = xq(self.exp_arg.numer());
        let d = xq(self.exp_arg.denom());
        v * (n / d).exp()
    }
}

/// Merges each non-even base of an even density with its reflection.
fn even_grouped(w2: &UnivariateWeight) -> Vec<(UniPoly, Q)> {
    let fs = w2.density.factors();
    let mut used = vec![false; fs.len()];
    let mut out = Vec::new();
    for i in 0..fs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (b, e) = &fs[i];
        if b.is_even() {
            out.push((b.clone(), e.clone()));
            continue;
        }
        let refl = b.reflect();
        let partner = (0..fs.len()).find(|&j| {
            !used[j] && fs[j].1 == *e && (fs[j].0.monic() == refl.monic())
        });
        match partner {
            Some(j) => {
                used[j] = true;
                out.push((b * &fs[j].0, e.clone()));
            }
            None => out.push((b.clone(), e.clone())),
        }
    }
    out
}

/// `w(x, y) = w₁(x) w₂(y/ρ(x))` in factored polynomial form.
pub fn factored_weight(sys: &KoornwinderSystem) -> Result<FactoredWeight2> {
    let probe = sys
        .domain
        .interior_points()
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("empty domain".into()))?;
    let mut fw = FactoredWeight2 {
        factors: Vec::new(),
        exp_arg: RatFn2::from_poly(Poly2::from_x(sys.w1.density.exp_arg())),
    };
    for (b, e) in sys.w1.density.factors() {
        fw.insert(Poly2::from_x(b), e.clone(), &probe);
    }
    let groups = match sys.rho.case {
        RhoCase::I => sys.w2.density.factors().to_vec(),
        RhoCase::II => even_grouped(&sys.w2),
    };
    for (b, e) in groups {
        let d = b.degree().unwrap_or(0) as i64;
        let lifted = compose_scaled(&b, &sys.rho, d)
            .ok()
            .and_then(|r| r.to_poly())
            .ok_or_else(|| Error::NotFactorable(format!("base {b} of w2 composed with y/rho")))?;
        fw.insert(lifted, e.clone(), &probe);
        let residual = -(qi(d) * e);
        match sys.rho.case {
            RhoCase::I => {
                let r = sys.rho.linear.clone().expect("linear");
                fw.insert(Poly2::from_x(&r), residual, &probe);
            }
            RhoCase::II => fw.insert(Poly2::from_x(&sys.rho.rho_sq), residual / qi(2), &probe),
        }
    }
    let e2 = sys.w2.density.exp_arg();
    if !e2.is_zero() {
        let composed = compose_scaled(e2, &sys.rho, 0)
            .map_err(|_| Error::NotFactorable("odd exponential argument with Case II rho".into()))?;
        fw.exp_arg = &fw.exp_arg + &composed;
    }
    fw.factors.sort_by(|a, b| {
        a.0.leading_monomial()
            .cmp(&b.0.leading_monomial())
            .then_with(|| a.0.to_string().cmp(&b.0.to_string()))
    });
    Ok(fw)
}

pub fn grad_log_weight(sys: &KoornwinderSystem) -> Result<Vec2<Q>> {
    Ok(factored_weight(sys)?.grad_log())
}
