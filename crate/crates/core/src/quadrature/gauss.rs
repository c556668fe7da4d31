//! Gauss rules from the exact monic recurrence.

use num_traits::One;
use serde::Serialize;

use super::{BigFloat, Precision, Real};
use crate::algebra::Poly1;
use crate::error::{Error, Result};
use crate::scalar::{is_integer, Q};
use crate::weights::{mass_formula, monic_recurrence, MassFormula, UnivariateWeight};

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "R: Real"))]
pub struct GaussRule<R = BigFloat> {
    #[serde(serialize_with = "ser_reals")]
    pub nodes: Vec<R>,
    #[serde(serialize_with = "ser_reals")]
    pub weights: Vec<R>,
    pub source: String,
    pub n: usize,
    pub digits: u32,
}

fn ser_reals<R: Real, S: serde::Serializer>(v: &[R], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl<R: Real> GaussRule<R> {
    pub fn integrate(&self, f: impl Fn(&R) -> R) -> R {
        let mut it = self.nodes.iter().zip(&self.weights).map(|(x, w)| w.clone() * f(x));
        let first = it.next().expect("rule has nodes");
        it.fold(first, |acc, v| acc + v)
    }

    pub fn integrate_poly(&self, p: &Poly1<Q>, bits: u32) -> R {
        let cs: Vec<R> = p.coeffs().iter().map(|c| R::from_q(c, bits)).collect();
        self.integrate(|x| horner(&cs, x, bits))
    }
}

pub(crate) fn horner<R: Real>(cs: &[R], x: &R, bits: u32) -> R {
    let mut acc = R::from_i64(0, bits);
    for c in cs.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

/// Absolute mass `μ₀ = ∫ w` from the Beta/Gamma closed form.
pub fn mass(w: &UnivariateWeight, bits: u32) -> Result<BigFloat> {
    let pow = |base: &Q, e: &Q| -> BigFloat {
        if is_integer(e) {
            let k = e.to_integer();
            let k: i32 = k.try_into().expect("small exponent");
            BigFloat::from_q(&num_traits::pow::Pow::pow(base, k), bits)
        } else {
            BigFloat::from_q(base, bits).powf(&BigFloat::from_q(e, bits))
        }
    };
    let g = |v: &Q| BigFloat::gamma(v, bits);
    let one = Q::one();
    Ok(match mass_formula(w)? {
        MassFormula::Beta { width, p, q, factor } => {
            let s = p.clone() + q.clone() + one.clone();
            BigFloat::from_q(&factor, bits) * pow(&width, &s) * g(&(p + one.clone())) * g(&(q + one.clone()))
                / g(&(s + one))
        }
        MassFormula::Gamma { c, a, shift, factor } => {
            let a1 = a + one;
            BigFloat::from_q(&factor, bits) * BigFloat::from_q(&shift, bits).exp() * g(&a1) / pow(&c, &a1)
        }
    })
}

/// `n`-point rule for `w` with absolute weights at the given precision.
pub fn gauss_rule(w: &UnivariateWeight, n: usize, prec: Precision) -> Result<GaussRule<BigFloat>> {
    let bits = prec.bits();
    let mu0 = mass(w, bits)?;
    let mut rule = gauss_rule_with(w, n, bits, mu0)?;
    rule.digits = prec.digits();
    Ok(rule)
}

struct Rec<R> {
    b: Vec<R>,
    c: Vec<R>,
}

impl<R: Real> Rec<R> {
    // (p_k(x), p_k'(x))
    fn eval(&self, k: usize, x: &R, bits: u32) -> (R, R) {
        let zero = R::from_i64(0, bits);
        let (mut p0, mut p1) = (zero.clone(), R::from_i64(1, bits));
        let (mut d0, mut d1) = (zero.clone(), zero);
        for j in 0..k {
            let t = x.clone() - self.b[j].clone();
            let p2 = t.clone() * p1.clone() - self.c[j].clone() * p0;
            let d2 = p1.clone() + t * d1.clone() - self.c[j].clone() * d0;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        (p1, d1)
    }
}

fn sign<R: Real>(v: &R, bits: u32) -> i8 {
    let z = R::from_i64(0, bits);
    if *v > z {
        1
    } else if *v < z {
        -1
    } else {
        0
    }
}

// Safeguarded Newton inside a sign-changing bracket.
fn refine<R: Real>(rec: &Rec<R>, k: usize, mut a: R, mut b: R, bits: u32) -> Option<R> {
    let sa = sign(&rec.eval(k, &a, bits).0, bits);
    let sb = sign(&rec.eval(k, &b, bits).0, bits);
    if sa == 0 || sb == 0 || sa == sb {
        return None;
    }
    let two = R::from_i64(2, bits);
    let one = R::from_i64(1, bits);
    let eps = R::eps(bits);
    let mut x = (a.clone() + b.clone()) / two.clone();
    for _ in 0..(4 * bits as usize + 64) {
        let (f, df) = rec.eval(k, &x, bits);
        let sf = sign(&f, bits);
        if sf == 0 {
            return Some(x);
        }
        if sf == sa {
            a = x.clone();
        } else {
            b = x.clone();
        }
        let mid = (a.clone() + b.clone()) / two.clone();
        let next = if df.is_zero() {
            mid
        } else {
            let nx = x.clone() - f / df;
            if nx > a && nx < b {
                nx
            } else {
                mid
            }
        };
        let scale = if x.abs() > one { x.abs() } else { one.clone() };
        let step = (next.clone() - x.clone()).abs();
        x = next;
        if step <= eps.clone() * scale {
            return Some(x);
        }
    }
    Some(x)
}

/// `n`-point rule with a caller-supplied mass; `mu0 = 1` gives the
/// normalized rule.
pub fn gauss_rule_with<R: Real>(w: &UnivariateWeight, n: usize, bits: u32, mu0: R) -> Result<GaussRule<R>> {
    if n == 0 {
        return Err(Error::InvalidParameter("Gauss rule needs n >= 1".into()));
    }
    let exact = monic_recurrence(w, n)?;
    let rec = Rec {
        b: exact.b.iter().map(|v| R::from_q(v, bits)).collect(),
        c: exact.c.iter().map(|v| R::from_q(v, bits)).collect(),
    };
    // Gershgorin disks of the Jacobi matrix enclose every zero of p_1..p_n.
    let zero = R::from_i64(0, bits);
    let one = R::from_i64(1, bits);
    let sq: Vec<R> = (0..n).map(|i| if i == 0 { zero.clone() } else { rec.c[i].sqrt() }).collect();
    let mut lo = rec.b[0].clone();
    let mut hi = rec.b[0].clone();
    for i in 0..n {
        let r = sq[i].clone() + if i + 1 < n { sq[i + 1].clone() } else { zero.clone() };
        let l = rec.b[i].clone() - r.clone();
        let h = rec.b[i].clone() + r;
        if l < lo {
            lo = l;
        }
        if h > hi {
            hi = h;
        }
    }
    lo = lo - one.clone();
    hi = hi + one;
    if let Some(a) = &w.interval.lo {
        let a = R::from_q(a, bits);
        if a > lo {
            lo = a;
        }
    }
    if let Some(b) = &w.interval.hi {
        let b = R::from_q(b, bits);
        if b < hi {
            hi = b;
        }
    }
    let mut roots: Vec<R> = Vec::new();
    for k in 1..=n {
        let mut fences = vec![lo.clone()];
        fences.extend(roots.iter().cloned());
        fences.push(hi.clone());
        let mut next = Vec::with_capacity(k);
        for pair in fences.windows(2) {
            let r = refine(&rec, k, pair[0].clone(), pair[1].clone(), bits)
                .ok_or_else(|| Error::RootBracketing(format!("{} (zero {} of p_{k})", w.name, next.len() + 1)))?;
            next.push(r);
        }
        roots = next;
    }
    let h: Vec<R> = exact.norms().iter().map(|v| R::from_q(v, bits)).collect();
    let mut weights = Vec::with_capacity(n);
    for x in &roots {
        let mut sum = zero.clone();
        let (mut p0, mut p1) = (zero.clone(), R::from_i64(1, bits));
        for k in 0..n {
            sum = sum + p1.clone() * p1.clone() / h[k].clone();
            let p2 = (x.clone() - rec.b[k].clone()) * p1.clone() - rec.c[k].clone() * p0;
            p0 = p1;
            p1 = p2;
        }
        weights.push(mu0.clone() / sum);
    }
    let digits = ((bits.saturating_sub(24)) as f64 / std::f64::consts::LOG2_10) as u32;
    Ok(GaussRule {
        nodes: roots,
        weights,
        source: w.name.clone(),
        n,
        digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use crate::weights::{jacobi01, jacobi_sym, laguerre, moments};

    fn prec() -> Precision {
        Precision::default()
    }

    fn rel(a: &BigFloat, b: &BigFloat) -> f64 {
        let d = (a.clone() - b.clone()).abs();
        if b.is_zero() {
            d.to_f64()
        } else {
            (d / b.abs()).to_f64()
        }
    }

    #[test]
    fn one_point_legendre() {
        let r = gauss_rule(&jacobi_sym(&qi(0), &qi(0)).unwrap(), 1, prec()).unwrap();
        assert!(r.nodes[0].abs().to_f64() < 1e-40);
        assert!(rel(&r.weights[0], &BigFloat::from_i64(2, prec().bits())) < 1e-33);
    }

    #[test]
    fn one_point_laguerre() {
        let r = gauss_rule(&laguerre(&qi(0)).unwrap(), 1, prec()).unwrap();
        let one = BigFloat::from_i64(1, prec().bits());
        assert!(rel(&r.nodes[0], &one) < 1e-33);
        assert!(rel(&r.weights[0], &one) < 1e-33);
    }

    #[test]
    fn five_point_rule_matches_exact_moments() {
        let w = jacobi_sym(&q(3, 2), &q(3, 2)).unwrap();
        let bits = prec().bits();
        let r = gauss_rule_with(&w, 5, bits, BigFloat::from_i64(1, bits)).unwrap();
        let mom = moments(&w, 10).unwrap();
        for (k, m) in mom.iter().enumerate() {
            let got = r.integrate_poly(&Poly1::monomial(qi(1), k), bits);
            let want = BigFloat::from_q(m, bits);
            let err = (got - want.clone()).abs().to_f64();
            assert!(err <= 1e-30 * want.abs().to_f64().max(1e-300) || err < 1e-32, "k = {k}");
        }
    }

    #[test]
    fn nodes_increase_inside_interval_and_weights_positive() {
        for w in [
            jacobi01(&q(1, 2), &q(-1, 3)).unwrap(),
            laguerre(&q(5, 2)).unwrap(),
            jacobi_sym(&q(-1, 2), &q(2, 1)).unwrap(),
        ] {
            let r = gauss_rule(&w, 8, prec()).unwrap();
            for pair in r.nodes.windows(2) {
                assert!(pair[0] < pair[1]);
            }
            let lo = w.interval.lo.as_ref().map(|v| v.clone());
            if let Some(lo) = lo {
                assert!(r.nodes[0] > BigFloat::from_q(&lo, prec().bits()));
            }
            assert!(r.weights.iter().all(|v| !v.is_negative() && !v.is_zero()));
        }
    }

    #[test]
    fn masses_have_closed_forms() {
        let bits = prec().bits();
        // ∫_{-1}^{1} (1 - x²)^{1/2} dx = π/2
        let w = jacobi_sym(&q(1, 2), &q(1, 2)).unwrap();
        let want = BigFloat::pi(bits).ldexp(-1);
        assert!(rel(&mass(&w, bits).unwrap(), &want) < 1e-33);
        // ∫_0^∞ x² e^{-x} dx = 2
        let w = laguerre(&qi(2)).unwrap();
        assert!(rel(&mass(&w, bits).unwrap(), &BigFloat::from_i64(2, bits)) < 1e-33);
    }

    #[test]
    fn f64_rule_agrees_with_high_precision() {
        let w = laguerre(&q(1, 3)).unwrap();
        let bits = prec().bits();
        let lo = gauss_rule_with(&w, 6, 53, 1.0f64).unwrap();
        let hp = gauss_rule_with(&w, 6, bits, BigFloat::from_i64(1, bits)).unwrap();
        for (a, b) in lo.nodes.iter().zip(&hp.nodes) {
            assert!((a - b.to_f64()).abs() < 1e-12 * b.to_f64().abs().max(1.0));
        }
    }
}
