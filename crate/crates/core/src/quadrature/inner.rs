//! Inner products over `Ω` via `y = ρ(x) t`, orthogonality residuals and
//! the moment-matrix check.

use num_traits::Zero;
use serde::Serialize;

use super::gauss::{gauss_rule, mass, GaussRule};
use super::{BigFloat, Precision};
use crate::algebra::{Poly1, Poly2};
use crate::error::{Error, Result};
use crate::koornwinder::{KoornwinderBasis, KoornwinderSystem};
use crate::pearson::PearsonPair;
use crate::scalar::Q;
use crate::weights::{moments, rho_modified};

/// Precomputed rules for `⟨p, q⟩ = ∬ p q w₁(x) w₂(y/ρ) dy dx` with
/// `deg p + deg q ≤ max_degree`.
///
/// After `y = ρt` a term `r_j(x) y^j` contributes
/// `∫ t^j w₂ · ∫ r_j ρ^{j+1} w₁ dx`. Even powers of `ρ` are polynomials in
/// `ρ²` and go to the `w₁` rule; odd powers keep one `ρ` in the weight and
/// go to the rule of `ρ w₁`.
#[derive(Clone, Debug)]
pub struct InnerProduct {
    pub max_degree: usize,
    pub precision: Precision,
    even_rule: GaussRule<BigFloat>,
    odd_rule: GaussRule<BigFloat>,
    t_exact: Vec<Q>,
    t_moments: Vec<BigFloat>,
    rho_sq: Poly1<Q>,
}

impl InnerProduct {
    pub fn new(sys: &KoornwinderSystem, max_degree: usize, precision: Precision) -> Result<Self> {
        let bits = precision.bits();
        // x-degree of every integrand is at most max_degree + 1.
        let n = max_degree / 2 + 1;
        let even_rule = gauss_rule(&sys.w1, n, precision)?;
        let odd_rule = gauss_rule(&rho_modified(&sys.w1, &sys.rho, 0)?, n, precision)?;
        let t_exact = moments(&sys.w2, max_degree + 1)?;
        let m0 = mass(&sys.w2, bits)?;
        let t_moments = t_exact.iter().map(|m| m0.clone() * BigFloat::from_q(m, bits)).collect();
        Ok(InnerProduct {
            max_degree,
            precision,
            even_rule,
            odd_rule,
            t_exact,
            t_moments,
            rho_sq: sys.rho.rho_sq.clone(),
        })
    }

    /// `∬ r w dx dy`.
    pub fn integrate(&self, r: &Poly2<Q>) -> Result<BigFloat> {
        let bits = self.precision.bits();
        if let Some(d) = r.degree() {
            if d as usize > self.max_degree {
                return Err(Error::InvalidParameter(format!(
                    "integrand degree {d} exceeds the prepared bound {}",
                    self.max_degree
                )));
            }
        }
        let mut total = BigFloat::zero(bits);
        for (j, rj) in r.y_coeffs().iter().enumerate() {
            if rj.is_zero() || self.t_exact[j].is_zero() {
                continue;
            }
            let e = j + 1;
            let (rule, k) = if e % 2 == 0 {
                (&self.even_rule, e / 2)
            } else {
                (&self.odd_rule, (e - 1) / 2)
            };
            let integrand = rj * &self.rho_sq.pow(k);
            total = total + self.t_moments[j].clone() * rule.integrate_poly(&integrand, bits);
        }
        Ok(total)
    }

    pub fn eval(&self, p: &Poly2<Q>, q: &Poly2<Q>) -> Result<BigFloat> {
        self.integrate(&(p * q))
    }
}

/// One-shot `⟨p, q⟩`.
pub fn inner_product(sys: &KoornwinderSystem, p: &Poly2<Q>, q: &Poly2<Q>, prec: Precision) -> Result<BigFloat> {
    let d = p.degree().unwrap_or(0) + q.degree().unwrap_or(0);
    InnerProduct::new(sys, d as usize, prec)?.eval(p, q)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthoReport {
    pub nmax: usize,
    pub precision: u32,
    pub tolerance: f64,
    /// `max |⟨P, Q⟩| / (‖P‖ ‖Q‖)` over distinct pairs.
    pub max_residual: f64,
    pub worst_pair: Option<((usize, usize), (usize, usize))>,
    /// First index with `‖P‖² ≤ 0`, if any.
    pub nonpositive_norm: Option<(usize, usize)>,
    pub passed: bool,
}

/// Orthogonality residual of `P_{n,m}`, `n ≤ nmax`.
pub fn orthocheck(sys: &KoornwinderSystem, nmax: usize, prec: Precision, tol: f64) -> Result<OrthoReport> {
    if nmax < 1 {
        return Err(Error::InvalidParameter("orthocheck needs N >= 1".into()));
    }
    let basis = KoornwinderBasis::new(sys, nmax)?;
    let polys: Vec<((usize, usize), Poly2<Q>)> = basis.iter().map(|(k, p)| (*k, p.clone())).collect();
    orthocheck_polys(sys, &polys, nmax, prec, tol)
}

/// Same check for an arbitrary indexed family of total degree `≤ nmax`.
pub fn orthocheck_polys(
    sys: &KoornwinderSystem,
    polys: &[((usize, usize), Poly2<Q>)],
    nmax: usize,
    prec: Precision,
    tol: f64,
) -> Result<OrthoReport> {
    let ip = InnerProduct::new(sys, 2 * nmax, prec)?;
    let count = polys.len();
    let pairs: Vec<(usize, usize)> = (0..count).flat_map(|i| (i..count).map(move |j| (i, j))).collect();
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(pairs.len().max(1));
    let chunk = pairs.len().div_ceil(threads.max(1)).max(1);
    let results: Vec<Result<Vec<((usize, usize), BigFloat)>>> = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                let ip = &ip;
                s.spawn(move || {
                    part.iter()
                        .map(|&(i, j)| Ok(((i, j), ip.eval(&polys[i].1, &polys[j].1)?)))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut gram = vec![vec![BigFloat::zero(prec.bits()); count]; count];
    for part in results {
        for ((i, j), v) in part? {
            gram[i][j] = v.clone();
            gram[j][i] = v;
        }
    }
    let mut report = OrthoReport {
        nmax,
        precision: prec.digits(),
        tolerance: tol,
        max_residual: 0.0,
        worst_pair: None,
        nonpositive_norm: None,
        passed: false,
    };
    for (i, row) in gram.iter().enumerate() {
        if row[i].is_negative() || row[i].is_zero() {
            report.nonpositive_norm = Some(polys[i].0);
            return Ok(report);
        }
    }
    for i in 0..count {
        for j in (i + 1)..count {
            let r = (gram[i][j].abs() / (gram[i][i].clone() * gram[j][j].clone()).sqrt()).to_f64();
            if r > report.max_residual || report.worst_pair.is_none() {
                report.max_residual = r;
                report.worst_pair = Some((polys[i].0, polys[j].0));
            }
        }
    }
    report.passed = report.max_residual <= tol;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentMatrixVerdict {
    /// `⟨1, Φ₁₁⟩, ⟨1, Φ₁₂⟩, ⟨1, Φ₂₂⟩` in scientific notation.
    pub entries: [String; 3],
    pub det: String,
    /// `|det| / max|entry|²`.
    pub relative_det: f64,
    pub passed: bool,
}

/// `det⟨1, Φ⟩ ≠ 0` up to the working precision.
pub fn moment_matrix_check(pair: &PearsonPair, sys: &KoornwinderSystem, prec: Precision) -> Result<MomentMatrixVerdict> {
    if !pair.is_verified() {
        return Err(Error::UnverifiedPair);
    }
    moment_matrix(&pair.phi11, &pair.phi12, &pair.phi22, sys, prec)
}

/// The numeric part of [`moment_matrix_check`] for any symmetric `Φ`.
pub fn moment_matrix(
    phi11: &Poly2<Q>,
    phi12: &Poly2<Q>,
    phi22: &Poly2<Q>,
    sys: &KoornwinderSystem,
    prec: Precision,
) -> Result<MomentMatrixVerdict> {
    let d = [phi11, phi12, phi22]
        .iter()
        .map(|p| p.degree().unwrap_or(0) as usize)
        .max()
        .unwrap_or(0);
    let ip = InnerProduct::new(sys, d, prec)?;
    let a = ip.integrate(phi11)?;
    let b = ip.integrate(phi12)?;
    let c = ip.integrate(phi22)?;
    let det = a.clone() * c.clone() - b.clone() * b.clone();
    let scale = [&a, &b, &c]
        .iter()
        .map(|v| v.abs())
        .fold(BigFloat::zero(prec.bits()), |m, v| if v > m { v } else { m });
    let (relative_det, passed) = if scale.is_zero() {
        (0.0, false)
    } else {
        let rel = det.abs() / (scale.clone() * scale);
        let threshold = 10f64.powf(-(prec.digits() as f64) / 2.0);
        (rel.to_f64(), rel.to_f64() > threshold)
    };
    Ok(MomentMatrixVerdict {
        entries: [format!("{:.20}", a), format!("{:.20}", b), format!("{:.20}", c)],
        det: format!("{:.20}", det),
        relative_det,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;
    use crate::scalar::{q, qi};

    fn sys(f: Family, params: &[(&str, Q)]) -> KoornwinderSystem {
        f.system(&f.params_from(params).unwrap()).unwrap()
    }

    fn rel(a: &BigFloat, b: &BigFloat) -> f64 {
        ((a.clone() - b.clone()).abs() / b.abs()).to_f64()
    }

    #[test]
    fn disk_area() {
        let s = sys(Family::Ball, &[("alpha", qi(0))]);
        let p = Precision::default();
        let v = inner_product(&s, &Poly2::one(), &Poly2::one(), p).unwrap();
        assert!(rel(&v, &BigFloat::pi(p.bits())) < 1e-29);
    }

    #[test]
    fn odd_in_y_vanishes_on_the_disk() {
        let s = sys(Family::Ball, &[("alpha", qi(1))]);
        let v = inner_product(&s, &Poly2::x(), &Poly2::y(), Precision::default()).unwrap();
        assert!(v.is_zero() || v.abs().to_f64() < 1e-40);
    }

    #[test]
    fn triangle_area() {
        let s = sys(Family::Triangle, &[("alpha", qi(0)), ("beta", qi(0)), ("gamma", qi(0))]);
        let p = Precision::default();
        let v = inner_product(&s, &Poly2::one(), &Poly2::one(), p).unwrap();
        assert!(rel(&v, &BigFloat::from_q(&q(1, 2), p.bits())) < 1e-29);
    }

    #[test]
    fn ball_orthocheck_passes() {
        let s = sys(Family::Ball, &[("alpha", qi(1))]);
        let r = orthocheck(&s, 5, Precision::default(), 1e-10).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn corrupted_polynomial_fails() {
        let s = sys(Family::Ball, &[("alpha", qi(1))]);
        let basis = KoornwinderBasis::new(&s, 3).unwrap();
        let mut polys: Vec<_> = basis.iter().map(|(k, p)| (*k, p.clone())).collect();
        for (k, p) in polys.iter_mut() {
            if *k == (2, 1) {
                *p = &*p + &Poly2::x();
            }
        }
        let r = orthocheck_polys(&s, &polys, 3, Precision::default(), 1e-10).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn odd_phi_has_singular_moment_matrix() {
        let s = sys(Family::Ball, &[("alpha", qi(1))]);
        let y = Poly2::y();
        let v = moment_matrix(&y, &Poly2::zero(), &-&y, &s, Precision::default()).unwrap();
        assert!(!v.passed);
    }
}
