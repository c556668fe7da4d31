//! The second-order operator attached to a Pearson pair and its action on
//! the Koornwinder basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{Poly2, Var};
use crate::error::{Error, Result};
use crate::koornwinder::{KoornwinderBasis, KoornwinderSystem};
use crate::pearson::PearsonPair;
use crate::scalar::{qi, Q};

/// `L = c_xx ∂xx + 2 c_xy ∂xy + c_yy ∂yy + c_x ∂x + c_y ∂y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiffOperator2 {
    pub c_xx: Poly2<Q>,
    pub c_xy: Poly2<Q>,
    pub c_yy: Poly2<Q>,
    pub c_x: Poly2<Q>,
    pub c_y: Poly2<Q>,
}

pub fn build_operator(p: &PearsonPair) -> Result<DiffOperator2> {
    if !p.is_verified() {
        return Err(Error::UnverifiedPair);
    }
    Ok(DiffOperator2 {
        c_xx: p.phi11.clone(),
        c_xy: p.phi12.clone(),
        c_yy: p.phi22.clone(),
        c_x: p.psi1.clone(),
        c_y: p.psi2.clone(),
    })
}

impl DiffOperator2 {
    pub fn apply(&self, p: &Poly2<Q>) -> Poly2<Q> {
        let px = p.partial(Var::X);
        let py = p.partial(Var::Y);
        let mut out = &self.c_xx * &px.partial(Var::X);
        out = &out + &(&self.c_xy * &px.partial(Var::Y)).scale(&qi(2));
        out = &out + &(&self.c_yy * &py.partial(Var::Y));
        out = &out + &(&self.c_x * &px);
        &out + &(&self.c_y * &py)
    }

    /// `max(deg Φ - 2, deg Ψ - 1)` read off the coefficients.
    pub fn degree_excess(&self) -> u32 {
        let d = |p: &Poly2<Q>| p.degree().unwrap_or(0) as i64;
        let phi = d(&self.c_xx).max(d(&self.c_xy)).max(d(&self.c_yy));
        let psi = d(&self.c_x).max(d(&self.c_y));
        (phi - 2).max(psi - 1).max(0) as u32
    }
}

impl fmt::Display for DiffOperator2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xy = self.c_xy.scale(&qi(2));
        let parts = [
            (&self.c_xx, "d_xx"),
            (&xy, "d_xy"),
            (&self.c_yy, "d_yy"),
            (&self.c_x, "d_x"),
            (&self.c_y, "d_y"),
        ];
        let mut first = true;
        for (c, d) in parts {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) {d}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn expand_in_basis(basis: &KoornwinderBasis, q: &Poly2<Q>) -> Result<BTreeMap<(usize, usize), Q>> {
    basis.expand(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "s")]
pub enum Classification {
    /// `L[P] = λ P`.
    Eigenfunction,
    /// `L[P] ∈ V_n`.
    Classical,
    /// Eigenfunction for every `P` with `λ` depending on `n` only.
    KrallSheffer,
    /// Expansion reaches degrees `n ± s`.
    Semiclassical(u32),
}

impl Classification {
    /// `L` preserves every `V_n`.
    pub fn is_classical(&self) -> bool {
        !matches!(self, Classification::Semiclassical(_))
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Eigenfunction => write!(f, "eigenfunction"),
            Classification::Classical => write!(f, "classical"),
            Classification::KrallSheffer => write!(f, "krall_sheffer"),
            Classification::Semiclassical(s) => write!(f, "semiclassical({s})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub n: usize,
    pub m: usize,
    #[serde(serialize_with = "ser_coeffs")]
    pub coefficients: BTreeMap<(usize, usize), Q>,
    pub band: BTreeSet<usize>,
    pub classification: Classification,
}

fn ser_coeffs<S: serde::Serializer>(c: &BTreeMap<(usize, usize), Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(c.len()))?;
    for ((n, m), v) in c {
        map.serialize_entry(&format!("{n},{m}"), &crate::scalar::rational_to_string(v))?;
    }
    map.end()
}

impl ExpansionReport {
    /// `λ` when `L[P_{n,m}] = λ P_{n,m}`.
    pub fn eigenvalue(&self) -> Option<Q> {
        match self.classification {
            Classification::Eigenfunction => Some(self.coefficients.get(&(self.n, self.m)).cloned().unwrap_or_else(Q::zero)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub nmax: usize,
    pub reports: Vec<ExpansionReport>,
    pub overall: Classification,
    /// Smallest `s` with every band inside `[n - s, n + s]`.
    pub band_s: u32,
    /// The a-priori value from the degrees of `Φ` and `Ψ`.
    pub s_value: u32,
}

impl ClassifyReport {
    pub fn get(&self, n: usize, m: usize) -> Option<&ExpansionReport> {
        self.reports.iter().find(|r| r.n == n && r.m == m)
    }

    /// `λ_n` when the family is Krall–Sheffer.
    pub fn eigenvalues_by_degree(&self) -> Option<BTreeMap<usize, Q>> {
        if self.overall != Classification::KrallSheffer {
            return None;
        }
        let mut out = BTreeMap::new();
        for r in &self.reports {
            out.entry(r.n).or_insert_with(|| r.eigenvalue().expect("eigenfunction"));
        }
        Some(out)
    }
}

fn classify_one(n: usize, m: usize, coefficients: BTreeMap<(usize, usize), Q>) -> ExpansionReport {
    let band: BTreeSet<usize> = coefficients.keys().map(|k| k.0).collect();
    let classification = if coefficients.keys().all(|k| *k == (n, m)) {
        Classification::Eigenfunction
    } else if band.iter().all(|&d| d == n) {
        Classification::Classical
    } else {
        let s = band.iter().map(|&d| d.abs_diff(n)).max().unwrap_or(0);
        Classification::Semiclassical(s as u32)
    };
    ExpansionReport {
        n,
        m,
        coefficients,
        band,
        classification,
    }
}

/// Expands `L[P_{n,m}]` for every `n ≤ nmax` and classifies the family.
///
/// The basis is built one degree beyond `nmax` plus the operator's degree
/// excess so that images of degree `n + s` always have an expansion.
pub fn classify(sys: &KoornwinderSystem, op: &DiffOperator2, nmax: usize) -> Result<ClassifyReport> {
    let s_value = op.degree_excess();
    let basis = KoornwinderBasis::new(sys, nmax + s_value as usize)?;
    classify_with_basis(&basis, op, nmax)
}

pub fn classify_with_basis(basis: &KoornwinderBasis, op: &DiffOperator2, nmax: usize) -> Result<ClassifyReport> {
    let s_value = op.degree_excess();
    if basis.nmax < nmax + s_value as usize {
        return Err(Error::ExpansionResidual(basis.nmax));
    }
    let mut reports = Vec::new();
    for n in 0..=nmax {
        for m in 0..=n {
            let p = basis.get(n, m).expect("basis covers nmax");
            let coeffs = basis.expand(&op.apply(p))?;
            reports.push(classify_one(n, m, coeffs));
        }
    }
    let band_s = reports
        .iter()
        .filter_map(|r| match r.classification {
            Classification::Semiclassical(s) => Some(s),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let overall = if band_s > 0 {
        Classification::Semiclassical(band_s)
    } else if reports.iter().all(|r| r.classification == Classification::Eigenfunction) {
        let mut by_n: BTreeMap<usize, Q> = BTreeMap::new();
        let mut ks = true;
        for r in &reports {
            let l = r.eigenvalue().expect("eigenfunction");
            if let Some(prev) = by_n.insert(r.n, l.clone()) {
                ks &= prev == l;
            }
        }
        if ks {
            Classification::KrallSheffer
        } else {
            Classification::Eigenfunction
        }
    } else {
        Classification::Classical
    };
    Ok(ClassifyReport {
        nmax,
        reports,
        overall,
        band_s,
        s_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::families::{parse_reference_operator, Family, Params};
    use crate::scalar::q;

    fn ball(alpha: Q) -> (Params, KoornwinderSystem, DiffOperator2) {
        let f = Family::Ball;
        let pr = f.params_from(&[("alpha", alpha)]).unwrap();
        let sys = f.system(&pr).unwrap();
        let op = build_operator(&f.operator_pair(&sys, &pr).unwrap()).unwrap();
        (pr, sys, op)
    }

    #[test]
    fn constants_are_annihilated() {
        let (_, _, op) = ball(qi(1));
        assert!(op.apply(&Poly2::one()).is_zero());
    }

    #[test]
    fn ball_image_of_x() {
        let (pr, _, op) = ball(q(3, 2));
        assert_eq!(op.apply(&Poly2::x()), parse_poly("-(2alpha+3)x", &pr).unwrap());
    }

    #[test]
    fn ball_eigenvalues() {
        let a = q(1, 2);
        let (_, sys, op) = ball(a.clone());
        let basis = KoornwinderBasis::new(&sys, 3).unwrap();
        let p22 = basis.get(2, 2).unwrap();
        assert_eq!(op.apply(p22), p22.scale(&(qi(-2) * (qi(2) * a.clone() + qi(4)))));
        let e = expand_in_basis(&basis, &op.apply(basis.get(3, 1).unwrap())).unwrap();
        assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![((3, 1), qi(-3) * (qi(2) * a + qi(5)))]);
    }

    #[test]
    fn expansion_of_basis_elements_and_zero() {
        let (_, sys, _) = ball(qi(2));
        let basis = KoornwinderBasis::new(&sys, 4).unwrap();
        assert!(expand_in_basis(&basis, &Poly2::zero()).unwrap().is_empty());
        let e = expand_in_basis(&basis, basis.get(4, 2).unwrap()).unwrap();
        assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![((4, 2), qi(1))]);
    }

    #[test]
    fn ball_operator_matches_reference() {
        let (pr, _, op) = ball(qi(1));
        let want = parse_reference_operator(&Family::Ball.reference_operator(), &pr).unwrap();
        assert_eq!([op.c_xx.clone(), op.c_xy.clone(), op.c_yy.clone(), op.c_x.clone(), op.c_y.clone()], want);
        assert_eq!(op.degree_excess(), 0);
    }

    #[test]
    fn unverified_pair_is_rejected() {
        let pr = Family::Ball.params_from(&[]).unwrap();
        let d = Family::Ball.final_display();
        let (m, v) = d.parse(&pr).unwrap();
        let pair = PearsonPair::from_gradient_form(&m, &v, crate::pearson::Provenance::Manual).unwrap();
        assert!(matches!(build_operator(&pair), Err(Error::UnverifiedPair)));
    }

    #[test]
    fn apply_is_linear() {
        let (pr, _, op) = ball(q(2, 3));
        let p = parse_poly("x^3 - 2x*y + 5", &pr).unwrap();
        let r = parse_poly("y^4 + x^2*y - x", &pr).unwrap();
        let (a, b) = (q(-3, 7), q(5, 2));
        let lhs = op.apply(&(&p.scale(&a) + &r.scale(&b)));
        assert_eq!(lhs, &op.apply(&p).scale(&a) + &op.apply(&r).scale(&b));
    }

    #[test]
    fn classification_of_ball_and_triangle() {
        for f in [Family::Ball, Family::Triangle] {
            let pr = f.params_from(&[]).unwrap();
            let sys = f.system(&pr).unwrap();
            let op = build_operator(&f.operator_pair(&sys, &pr).unwrap()).unwrap();
            let rep = classify(&sys, &op, 4).unwrap();
            assert_eq!(rep.overall, Classification::KrallSheffer, "{f}");
            assert_eq!(rep.band_s, 0);
        }
    }

    #[test]
    fn laguerre_laguerre_raises_degree() {
        let f = Family::LaguerreLaguerre;
        let pr = f.params_from(&[]).unwrap();
        let sys = f.system(&pr).unwrap();
        let op = build_operator(&f.operator_pair(&sys, &pr).unwrap()).unwrap();
        let rep = classify(&sys, &op, 3).unwrap();
        assert_eq!(rep.overall, Classification::Semiclassical(1));
        assert!(rep.get(2, 0).unwrap().band.contains(&3));
    }
}
