//! Matrix Pearson equations: the raw first-order system, its two
//! symmetrizations, and exact verification in gradient and divergence form.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::gcd::lcm;
use crate::algebra::linalg::nullspace;
use crate::algebra::{Mat2, Monomial, Poly2, RatFn2, Vec2};
use crate::error::{Error, Result};
use crate::koornwinder::{compose_scaled, grad_log_weight, KoornwinderSystem, RhoCase};
use crate::scalar::{qi, Q};

/// `φ ∇w = δ w` with `φ` upper triangular and polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSystem {
    pub phi: Mat2<Q>,
    pub delta: Vec2<Q>,
    /// Power of ρ each row was multiplied by.
    pub row_scaling: (i64, i64),
}

/// Outcome of an identity check. Failure carries the residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub passed: bool,
    pub residual: Vec2<Q>,
}

impl Verdict {
    fn from_residual(residual: Vec2<Q>) -> Self {
        Verdict {
            passed: residual.is_zero(),
            residual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    RawSymmetrizer,
    Decomposition,
    Manual,
}

/// Symmetric `Φ` and `Ψ` with `div(Φ w) = Ψᵗ w`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PearsonPair {
    pub phi11: Poly2<Q>,
    pub phi12: Poly2<Q>,
    pub phi22: Poly2<Q>,
    pub psi1: Poly2<Q>,
    pub psi2: Poly2<Q>,
    pub provenance: Provenance,
    verified: bool,
}

fn deg(p: &Poly2<Q>) -> u32 {
    p.degree().unwrap_or(0)
}

impl PearsonPair {
    pub fn new(
        phi11: Poly2<Q>,
        phi12: Poly2<Q>,
        phi22: Poly2<Q>,
        psi1: Poly2<Q>,
        psi2: Poly2<Q>,
        provenance: Provenance,
    ) -> Result<Self> {
        if deg(&psi1).max(deg(&psi2)) < 1 {
            return Err(Error::InvalidPair("deg Psi must be at least 1".into()));
        }
        Ok(PearsonPair {
            phi11,
            phi12,
            phi22,
            psi1,
            psi2,
            provenance,
            verified: false,
        })
    }

    /// From `M ∇w = v w` with symmetric polynomial `M`: `Ψ = v + (div M)ᵗ`.
    pub fn from_gradient_form(m: &Mat2<Q>, v: &Vec2<Q>, provenance: Provenance) -> Result<Self> {
        let mut bad = m.non_polynomial_entries();
        bad.extend(
            (0..2)
                .filter(|&i| !v.v[i].is_polynomial())
                .map(|i| format!("rhs({})", i + 1)),
        );
        if !bad.is_empty() {
            return Err(Error::NonPolynomialEntries(bad));
        }
        if !m.is_symmetric() {
            return Err(Error::InvalidPair("Phi is not symmetric".into()));
        }
        let psi = v.add(&m.divergence());
        let p = |r: &RatFn2<Q>| r.to_poly().expect("checked polynomial");
        Self::new(
            p(m.get(0, 0)),
            p(m.get(0, 1)),
            p(m.get(1, 1)),
            p(&psi.v[0]),
            p(&psi.v[1]),
            provenance,
        )
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn phi(&self) -> Mat2<Q> {
        Mat2::from_polys(
            self.phi11.clone(),
            self.phi12.clone(),
            self.phi12.clone(),
            self.phi22.clone(),
        )
    }

    pub fn psi(&self) -> Vec2<Q> {
        Vec2::from_polys(self.psi1.clone(), self.psi2.clone())
    }

    /// `Ψ̃ = Ψ - (div Φ)ᵗ`, the right-hand side of `Φ ∇w = Ψ̃ w`.
    pub fn gradient_rhs(&self) -> Vec2<Q> {
        self.psi().sub(&self.phi().divergence())
    }

    pub fn deg_phi(&self) -> u32 {
        deg(&self.phi11).max(deg(&self.phi12)).max(deg(&self.phi22))
    }

    pub fn deg_psi(&self) -> u32 {
        deg(&self.psi1).max(deg(&self.psi2))
    }

    /// `max(deg Φ - 2, deg Ψ - 1)`.
    pub fn s_value(&self) -> u32 {
        (self.deg_phi() as i64 - 2).max(self.deg_psi() as i64 - 1).max(0) as u32
    }

    /// Multiplies `Φ` and `Ψ` by a positive rational.
    pub fn scaled(&self, c: &Q) -> Self {
        assert!(c.is_positive(), "scaling must be positive");
        PearsonPair {
            phi11: self.phi11.scale(c),
            phi12: self.phi12.scale(c),
            phi22: self.phi22.scale(c),
            psi1: self.psi1.scale(c),
            psi2: self.psi2.scale(c),
            provenance: self.provenance,
            verified: self.verified,
        }
    }

    /// `true` if the two pairs agree up to a positive rational factor.
    pub fn same_up_to_scaling(&self, other: &Self) -> bool {
        let k = |p: &Self| normalization(&[&p.phi11, &p.phi12, &p.phi22]);
        match (k(self), k(other)) {
            (Some(a), Some(b)) => {
                let (x, y) = (self.scaled(&a), other.scaled(&b));
                x.phi11 == y.phi11
                    && x.phi12 == y.phi12
                    && x.phi22 == y.phi22
                    && x.psi1 == y.psi1
                    && x.psi2 == y.psi2
            }
            _ => false,
        }
    }
}

// Positive factor making the leading coefficient of the first nonzero entry ±1.
fn normalization(entries: &[&Poly2<Q>]) -> Option<Q> {
    entries
        .iter()
        .find(|p| !p.is_zero())
        .map(|p| Q::one() / p.leading_coeff().abs())
}

/// Checks `M ∇ln w - v = 0` exactly.
pub fn verify_gradient_form(m: &Mat2<Q>, v: &Vec2<Q>, sys: &KoornwinderSystem) -> Result<Verdict> {
    let g = grad_log_weight(sys)?;
    Ok(Verdict::from_residual(m.mul_vec(&g).sub(v)))
}

/// Checks `∂xΦ_{i1} + ∂yΦ_{i2} + Φ_{i1} ∂x ln w + Φ_{i2} ∂y ln w - Ψ_i = 0`
/// for both rows and records the outcome on the pair.
pub fn verify_divergence_form(p: &mut PearsonPair, sys: &KoornwinderSystem) -> Result<Verdict> {
    let g = grad_log_weight(sys)?;
    let phi = p.phi();
    let lhs = phi.divergence().add(&phi.mul_vec(&g));
    let verdict = Verdict::from_residual(lhs.sub(&p.psi()));
    p.verified = verdict.passed;
    Ok(verdict)
}

fn uni_to_rat(p: &crate::algebra::Poly1<Q>) -> RatFn2<Q> {
    RatFn2::from_poly(Poly2::from_x(p))
}

/// `η = φ₁ ρ'/ρ`.
pub fn eta(sys: &KoornwinderSystem) -> Result<RatFn2<Q>> {
    let phi1 = uni_to_rat(&sys.w1.phi);
    match sys.rho.case {
        RhoCase::I => {
            let r = sys.rho.linear.clone().expect("linear");
            Ok(&phi1 * &RatFn2::new(Poly2::constant(r.coeff(1)), Poly2::from_x(&r))?)
        }
        RhoCase::II => {
            let s = &sys.rho.rho_sq;
            Ok(&phi1 * &RatFn2::new(Poly2::from_x(&s.derivative()), Poly2::from_x(&s.scale(&qi(2))))?)
        }
    }
}

/// Builds `φ ∇w = δ w` from the univariate Pearson data, clearing
/// ρ-denominators row by row with the smallest admissible power.
pub fn raw_system(sys: &KoornwinderSystem) -> Result<RawSystem> {
    let step = match sys.rho.case {
        RhoCase::I => 1,
        RhoCase::II => 2,
    };
    let limit = 8;
    let w1 = crate::weights::pearson_tilde(&sys.w1);
    let w2 = crate::weights::pearson_tilde(&sys.w2);
    let eta_y = eta(sys)?.mul_poly(&Poly2::y());

    let mut row1 = None;
    let mut k = 0;
    while k <= limit {
        let rk = sys.rho.power(k)?;
        let entries = [uni_to_rat(&w1.phi), eta_y.clone(), uni_to_rat(&w1.psi_tilde)].map(|e| &e * &rk);
        if entries.iter().all(|e| e.is_polynomial()) {
            row1 = Some((entries, k));
            break;
        }
        k += step;
    }
    let ([p1, p2, d1], k1) = row1.ok_or_else(|| {
        Error::EtaNotClearable(format!(
            "eta = {} stays rational under rho^k, k <= {limit}",
            eta(sys).map(|e| e.to_string()).unwrap_or_default()
        ))
    })?;

    let mut row2 = None;
    let mut k = 0;
    while k <= limit {
        if let (Ok(p3), Ok(d2)) = (
            compose_scaled(&w2.phi, &sys.rho, k),
            compose_scaled(&w2.psi_tilde, &sys.rho, k - 1),
        ) {
            if p3.is_polynomial() && d2.is_polynomial() {
                row2 = Some((p3, d2, k));
                break;
            }
        }
        k += step;
    }
    let (p3, d2, k2) = row2.ok_or_else(|| {
        Error::EtaNotClearable("second row not clearable by powers of rho".into())
    })?;

    let phi = Mat2::new(p1, p2, RatFn2::zero(), p3);
    if phi.det().is_zero() {
        return Err(Error::Internal("raw phi is singular".into()));
    }
    Ok(RawSystem {
        phi,
        delta: Vec2::new(d1, d2),
        row_scaling: (k1, k2),
    })
}

/// `S = [[A, B], [C, D]]` with `A φ₂ + B φ₃ - C φ₁ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetrizer {
    pub s: Mat2<Q>,
}

impl Symmetrizer {
    pub fn new(a: RatFn2<Q>, b: RatFn2<Q>, c: RatFn2<Q>, d: RatFn2<Q>) -> Result<Self> {
        let s = Mat2::new(a, b, c, d);
        if s.det().is_zero() {
            return Err(Error::InvalidSymmetrizer("AD - BC vanishes identically".into()));
        }
        Ok(Symmetrizer { s })
    }

    pub fn identity() -> Self {
        Symmetrizer { s: Mat2::identity() }
    }

    pub fn satisfies_constraint(&self, raw: &RawSystem) -> bool {
        let [[a, b], [c, _]] = &self.s.m;
        let (f1, f2, f3) = (raw.phi.get(0, 0), raw.phi.get(0, 1), raw.phi.get(1, 1));
        (&(&(a * f2) + &(b * f3)) - &(c * f1)).is_zero()
    }
}

/// `Φ = Sφ`, `Ψ = Sδ + (div Φ)ᵗ`, verified before returning.
pub fn symmetrize_with(s: &Symmetrizer, raw: &RawSystem, sys: &KoornwinderSystem) -> Result<PearsonPair> {
    if !s.satisfies_constraint(raw) {
        return Err(Error::InvalidSymmetrizer("A*phi2 + B*phi3 - C*phi1 != 0".into()));
    }
    let phi = s.s.mul(&raw.phi);
    let rhs = s.s.mul_vec(&raw.delta);
    let mut pair = PearsonPair::from_gradient_form(&phi, &rhs, Provenance::RawSymmetrizer)?;
    let v = verify_divergence_form(&mut pair, sys)?;
    if !v.passed {
        return Err(Error::Internal(format!("symmetrized pair fails verification: {}", v.residual)));
    }
    Ok(pair)
}

/// A symmetrizer found by [`search_symmetrizer`] with the pair it yields.
#[derive(Clone, Debug)]
pub struct SearchCandidate {
    pub symmetrizer: Symmetrizer,
    pub pair: PearsonPair,
    /// `Φ` is positive definite at every interior sample point.
    pub definite: bool,
}

fn is_definite(p: &PearsonPair, pts: &[(Q, Q)]) -> bool {
    pts.iter().all(|(x, y)| {
        let a = p.phi11.eval(x, y);
        let b = p.phi12.eval(x, y);
        let c = p.phi22.eval(x, y);
        a.is_positive() && (a * c - b.clone() * b).is_positive()
    })
}

// Positive factor turning the coefficients into coprime integers.
fn primitive_content(entries: &[&Poly2<Q>]) -> Q {
    use num_integer::Integer;
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for p in entries {
        for (_, c) in p.terms() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    if num.is_zero() {
        return Q::one();
    }
    Q::new(den, num)
}

fn monomials_upto(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for t in 0..=d {
        for j in 0..=t {
            out.push(Monomial::new(t - j, j));
        }
    }
    out
}

// Small integer combinations of a kernel basis: every vector with entries
// in `-r..=r`, where `r` shrinks as the dimension grows, then singles and
// signed pairs once the full grid is too large.
fn combos(dim: usize) -> Vec<Vec<i64>> {
    let r = match dim {
        0..=4 => 2,
        5..=7 => 1,
        _ => 0,
    };
    let mut out = Vec::new();
    if r > 0 {
        let mut cur = vec![-r; dim];
        loop {
            if cur.iter().any(|&c| c != 0) {
                out.push(cur.clone());
            }
            let mut i = 0;
            while i < dim {
                cur[i] += 1;
                if cur[i] <= r {
                    break;
                }
                cur[i] = -r;
                i += 1;
            }
            if i == dim {
                break;
            }
        }
    } else {
        for i in 0..dim {
            let mut v = vec![0; dim];
            v[i] = 1;
            out.push(v.clone());
            for j in (i + 1)..dim {
                for s in [1, -1] {
                    let mut w = v.clone();
                    w[j] = s;
                    out.push(w);
                }
            }
        }
    }
    out
}

fn pair_key(p: &PearsonPair) -> String {
    let k = normalization(&[&p.phi11, &p.phi12, &p.phi22]).unwrap_or_else(Q::one);
    let s = p.scaled(&k);
    format!("{}|{}|{}|{}|{}", s.phi11, s.phi12, s.phi22, s.psi1, s.psi2)
}

/// Longest candidate list [`search_symmetrizer`] returns.
pub const SEARCH_LIMIT: usize = 64;

/// Searches for symmetrizers `S = Φ φ⁻¹` whose `Φ` is symmetric polynomial
/// of degree at most `deg φ + deg_bound` and makes `Φ ∇ln w` polynomial.
///
/// The conditions are linear in the coefficients of `Φ`: with
/// `∇ln w = (A₁, A₂)/L`, both `Φ_{i1}A₁ + Φ_{i2}A₂` must vanish modulo `L`.
/// Candidates are small-integer combinations of a kernel basis, kept when
/// `det Φ ≢ 0` and `deg Ψ ≥ 1`, deduplicated up to positive scaling and
/// sorted with positive-definite `Φ` first, then by `(deg Φ, deg Ψ)` and size.
pub fn search_symmetrizer(raw: &RawSystem, sys: &KoornwinderSystem, deg_bound: u32) -> Result<Vec<SearchCandidate>> {
    let g = grad_log_weight(sys)?;
    let l = lcm(g.v[0].denom(), g.v[1].denom());
    let a1 = g.v[0].numer() * &l.div_exact(g.v[0].denom())?;
    let a2 = g.v[1].numer() * &l.div_exact(g.v[1].denom())?;
    let raw_deg = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .filter_map(|(i, j)| raw.phi.get(i, j).numer().degree())
        .max()
        .unwrap_or(0);
    let dmax = raw_deg + deg_bound;

    let mut seen = BTreeSet::new();
    let mut out: Vec<SearchCandidate> = Vec::new();

    let interior = sys.domain.interior_points();
    let mut head = 0;
    if raw.phi.is_symmetric() {
        if let Ok(p) = symmetrize_with(&Symmetrizer::identity(), raw, sys) {
            seen.insert(pair_key(&p));
            let definite = is_definite(&p, &interior);
            out.push(SearchCandidate {
                symmetrizer: Symmetrizer::identity(),
                pair: p,
                definite,
            });
            head = 1;
        }
    }

    let raw_inv = raw.phi.inverse()?;
    for d in 0..=dmax {
        let monos = monomials_upto(d);
        let nm = monos.len();
        // Unknowns: Φ11 coefficients, then Φ12, then Φ22.
        let nvars = 3 * nm;
        let mut cols: Vec<[Poly2<Q>; 2]> = Vec::with_capacity(nvars);
        for entry in 0..3 {
            for m in &monos {
                let e = Poly2::monomial(Q::one(), m.i, m.j);
                let (r1, r2) = match entry {
                    0 => (&e * &a1, Poly2::zero()),
                    1 => (&e * &a2, &e * &a1),
                    _ => (Poly2::zero(), &e * &a2),
                };
                cols.push([r1.div_rem(&l)?.1, r2.div_rem(&l)?.1]);
            }
        }
        let mut row_keys: BTreeSet<(usize, Monomial)> = BTreeSet::new();
        for c in &cols {
            for (r, p) in c.iter().enumerate() {
                for (m, _) in p.terms() {
                    row_keys.insert((r, *m));
                }
            }
        }
        let rows: Vec<Vec<Q>> = row_keys
            .iter()
            .map(|(r, m)| cols.iter().map(|c| c[*r].coeff(m.i, m.j)).collect())
            .collect();
        let basis = nullspace(&rows, nvars);
        if basis.is_empty() {
            continue;
        }
        for coeffs in combos(basis.len()) {
            let mut v = vec![Q::zero(); nvars];
            for (b, &c) in basis.iter().zip(&coeffs) {
                if c == 0 {
                    continue;
                }
                for (acc, x) in v.iter_mut().zip(b) {
                    *acc = acc.clone() + x.clone() * qi(c);
                }
            }
            let entry = |k: usize| {
                Poly2::from_terms(
                    monos
                        .iter()
                        .enumerate()
                        .map(|(i, m)| (m.i, m.j, v[k * nm + i].clone())),
                )
            };
            let (f11, f12, f22) = (entry(0), entry(1), entry(2));
            let top = deg(&f11).max(deg(&f12)).max(deg(&f22));
            if top < d || (f11.is_zero() && f12.is_zero() && f22.is_zero()) {
                continue;
            }
            let c = primitive_content(&[&f11, &f12, &f22]);
            let (f11, f12, f22) = (f11.scale(&c), f12.scale(&c), f22.scale(&c));
            let phi = Mat2::from_polys(f11, f12.clone(), f12, f22);
            if phi.det().is_zero() {
                continue;
            }
            let rhs = phi.mul_vec(&g);
            let Ok(mut pair) = PearsonPair::from_gradient_form(&phi, &rhs, Provenance::RawSymmetrizer) else {
                continue;
            };
            let key = pair_key(&pair);
            if seen.contains(&key) {
                continue;
            }
            if !verify_divergence_form(&mut pair, sys)?.passed {
                return Err(Error::Internal("search produced an unverifiable pair".into()));
            }
            let s = phi.mul(&raw_inv);
            let sym = Symmetrizer { s };
            if !sym.satisfies_constraint(raw) {
                return Err(Error::Internal("search symmetrizer violates the constraint".into()));
            }
            seen.insert(key);
            let definite = is_definite(&pair, &interior);
            out.push(SearchCandidate {
                symmetrizer: sym,
                pair,
                definite,
            });
        }
    }
    let weight = |c: &SearchCandidate| {
        let p = &c.pair;
        let terms: usize = [&p.phi11, &p.phi12, &p.phi22, &p.psi1, &p.psi2]
            .iter()
            .map(|e| e.num_terms())
            .sum();
        (!c.definite, p.deg_phi(), p.deg_psi(), terms)
    };
    // The identity, when admissible, stays in front.
    out[head..].sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| pair_key(&a.pair).cmp(&pair_key(&b.pair))));
    out.truncate(SEARCH_LIMIT);
    if out.is_empty() {
        return Err(Error::NoSymmetrizer(deg_bound));
    }
    Ok(out)
}

/// Factor split `E = a₀ a₁ c₁` and the chosen `a₂, b₁, c₂` with
/// `a₀ = a₂ c₂ - a₁ b₁² c₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionInput {
    pub a0: Poly2<Q>,
    pub a1: Poly2<Q>,
    pub c1: Poly2<Q>,
    pub a2: Poly2<Q>,
    pub b1: Poly2<Q>,
    pub c2: Poly2<Q>,
}

impl DecompositionInput {
    pub fn e(&self) -> Poly2<Q> {
        &(&self.a0 * &self.a1) * &self.c1
    }

    pub fn satisfies_split_identity(&self) -> bool {
        let rhs = &(&self.a2 * &self.c2) - &(&(&self.a1 * &self.b1.pow(2)) * &self.c1);
        rhs == self.a0
    }

    /// The auxiliary functions `(a, b, c)`.
    pub fn auxiliary(&self) -> Result<(RatFn2<Q>, RatFn2<Q>, RatFn2<Q>)> {
        Ok((
            RatFn2::new(self.a2.clone(), &self.a0 * &self.c1)?,
            RatFn2::new(self.b1.clone(), self.a0.clone())?,
            RatFn2::new(self.c2.clone(), &self.a0 * &self.a1)?,
        ))
    }

    /// `(ac - b²) E`, which must be one.
    pub fn determinant_product(&self) -> Result<RatFn2<Q>> {
        let (a, b, c) = self.auxiliary()?;
        Ok((&(&a * &c) - &(&b * &b)).mul_poly(&self.e()))
    }
}

fn decomposition_pair(
    a: &RatFn2<Q>,
    b: &RatFn2<Q>,
    c: &RatFn2<Q>,
    e: &Poly2<Q>,
    sys: &KoornwinderSystem,
) -> Result<PearsonPair> {
    let g = grad_log_weight(sys)?;
    let ef = g.v[0].mul_poly(e);
    let eh = g.v[1].mul_poly(e);
    let phi = Mat2::new(a.mul_poly(e), b.mul_poly(e), b.mul_poly(e), c.mul_poly(e));
    let rhs = Vec2::new(&(a * &ef) + &(b * &eh), &(b * &ef) + &(c * &eh));
    let mut pair = PearsonPair::from_gradient_form(&phi, &rhs, Provenance::Decomposition)?;
    let v = verify_divergence_form(&mut pair, sys)?;
    if !v.passed {
        return Err(Error::Internal(format!("decomposition pair fails verification: {}", v.residual)));
    }
    Ok(pair)
}

/// The decomposition method: `Φ = E [[a, b], [b, c]]`, `Ψ̃ = (aF + bH, bF + cH)`.
pub fn decomposition_method(inp: &DecompositionInput, sys: &KoornwinderSystem) -> Result<PearsonPair> {
    if !inp.satisfies_split_identity() {
        return Err(Error::InvalidDecomposition("a0 != a2*c2 - a1*b1^2*c1".into()));
    }
    let e = inp.e();
    if e.is_zero() {
        return Err(Error::InvalidDecomposition("E vanishes identically".into()));
    }
    for (x, y) in sys.domain.interior_points() {
        if e.eval(&x, &y).is_zero() {
            return Err(Error::InvalidDecomposition(format!("E vanishes at interior point ({x}, {y})")));
        }
    }
    let g = grad_log_weight(sys)?;
    let f = g.v[0].mul_poly(&e);
    let h = g.v[1].mul_poly(&e);
    let (Some(f), Some(h)) = (f.to_poly(), h.to_poly()) else {
        return Err(Error::InvalidDecomposition("E is not a common denominator of grad ln w".into()));
    };
    if !inp.c1.divides(&f) || !inp.a1.divides(&h) {
        return Err(Error::InvalidDecomposition("c1 must divide F and a1 must divide H".into()));
    }
    let (a, b, c) = inp.auxiliary()?;
    let det = &(&a * &c) - &(&b * &b);
    let e_rf = RatFn2::from_poly(e.clone());
    if &(&e_rf * &e_rf) * &det != e_rf {
        return Err(Error::DecompositionIdentity);
    }
    decomposition_pair(&a, &b, &c, &e, sys)
}

/// Least common denominator of `∇ ln w`, signed to be positive on the interior.
pub fn weight_denominator(sys: &KoornwinderSystem) -> Result<Poly2<Q>> {
    let g = grad_log_weight(sys)?;
    let e = lcm(g.v[0].denom(), g.v[1].denom());
    let negative = sys
        .domain
        .interior_points()
        .first()
        .is_some_and(|(x, y)| e.eval(x, y).is_negative());
    Ok(if negative { -&e } else { e })
}

/// Decomposition with auxiliary functions given directly, without the
/// determinant identity. `E` starts at [`weight_denominator`] and absorbs
/// whatever denominators `aE, bE, cE, aF + bH, bF + cH` still carry.
pub fn decomposition_from_auxiliary(
    a: &RatFn2<Q>,
    b: &RatFn2<Q>,
    c: &RatFn2<Q>,
    sys: &KoornwinderSystem,
) -> Result<PearsonPair> {
    let g = grad_log_weight(sys)?;
    let mut e = weight_denominator(sys)?;
    for _ in 0..4 {
        let (f, h) = (g.v[0].mul_poly(&e), g.v[1].mul_poly(&e));
        let entries = [
            a.mul_poly(&e),
            b.mul_poly(&e),
            c.mul_poly(&e),
            &(a * &f) + &(b * &h),
            &(b * &f) + &(c * &h),
        ];
        let extra = entries.iter().fold(Poly2::one(), |acc, r| lcm(&acc, r.denom()));
        if extra.degree() == Some(0) {
            return decomposition_pair(a, b, c, &e, sys);
        }
        e = &e * &extra;
    }
    Err(Error::InvalidDecomposition("auxiliary functions leave rational entries".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::{parse_poly, parse_ratfn};
    use crate::families::{Family, Params};
    use crate::scalar::q;

    fn setup(f: Family, vals: &[(&str, Q)]) -> (Params, KoornwinderSystem) {
        let pr = f.params_from(vals).unwrap();
        let sys = f.system(&pr).unwrap();
        (pr, sys)
    }

    fn poly(s: &str, pr: &Params) -> Poly2<Q> {
        parse_poly(s, pr).unwrap()
    }

    fn rat(s: &str, pr: &Params) -> RatFn2<Q> {
        parse_ratfn(s, pr).unwrap()
    }

    fn display_pair(f: Family, label: &str, pr: &Params) -> PearsonPair {
        let d = f.reference_displays().into_iter().find(|d| d.label == label).unwrap();
        let (m, v) = d.parse(pr).unwrap();
        PearsonPair::from_gradient_form(&m, &v, Provenance::Manual).unwrap()
    }

    #[test]
    fn ball_raw_system() {
        let (pr, sys) = setup(Family::Ball, &[("alpha", q(3, 2))]);
        let raw = raw_system(&sys).unwrap();
        assert_eq!(raw.phi, Mat2::new(rat("1-x^2", &pr), rat("-x*y", &pr), RatFn2::zero(), rat("1-x^2-y^2", &pr)));
        assert_eq!(raw.delta, Vec2::new(rat("-2alpha*x", &pr), rat("-2alpha*y", &pr)));
        assert!(verify_gradient_form(&raw.phi, &raw.delta, &sys).unwrap().passed);
    }

    #[test]
    fn triangle_raw_system() {
        let (pr, sys) = setup(Family::Triangle, &[("alpha", q(1, 2)), ("beta", q(1, 3)), ("gamma", qi(2))]);
        let raw = raw_system(&sys).unwrap();
        assert_eq!(raw.phi.get(0, 0), &rat("(1-x)x", &pr));
        assert_eq!(raw.phi.get(0, 1), &rat("(1-x)y", &pr));
        assert_eq!(raw.phi.get(1, 1), &rat("(x-y)y", &pr));
        assert_eq!(raw.delta.v[0], rat("beta+gamma-(alpha+beta+gamma)x", &pr));
        assert_eq!(raw.delta.v[1], rat("gamma*x-(beta+gamma)y", &pr));
        assert_eq!(raw.row_scaling, (0, 2));
    }

    #[test]
    fn laguerre_laguerre_raw_delta() {
        let (pr, sys) = setup(Family::LaguerreLaguerre, &[("alpha", qi(3)), ("beta", qi(1))]);
        let raw = raw_system(&sys).unwrap();
        assert_eq!(raw.phi.get(1, 1), &rat("x*y", &pr));
        assert_eq!(raw.delta.v[0], rat("alpha-x", &pr));
        assert_eq!(raw.delta.v[1], rat("beta*x-y", &pr));
    }

    #[test]
    fn perturbed_ball_fails_with_unit_residual() {
        let (pr, sys) = setup(Family::Ball, &[("alpha", qi(1))]);
        let raw = raw_system(&sys).unwrap();
        let v = Vec2::new(rat("-2alpha*x+1", &pr), raw.delta.v[1].clone());
        let out = verify_gradient_form(&raw.phi, &v, &sys).unwrap();
        assert!(!out.passed);
        assert_eq!(out.residual, Vec2::new(RatFn2::constant(qi(-1)), RatFn2::zero()));
    }

    #[test]
    fn intermediate_laguerre_laguerre_residual_is_x() {
        let (pr, sys) = setup(Family::LaguerreLaguerre, &[("alpha", qi(2)), ("beta", q(1, 2))]);
        let raw = raw_system(&sys).unwrap();
        let v = Vec2::new(rat("alpha-x", &pr), rat("(beta+1)x-y", &pr));
        let out = verify_gradient_form(&raw.phi, &v, &sys).unwrap();
        assert!(!out.passed);
        assert!(out.residual.v[0].is_zero());
        assert_eq!(out.residual.v[1], rat("-x", &pr));
    }

    #[test]
    fn zero_psi_is_rejected() {
        let z = Poly2::zero;
        assert!(matches!(
            PearsonPair::new(z(), z(), z(), z(), z(), Provenance::Manual),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn registered_symmetrizers_reproduce_final_pairs() {
        let cases: [(Family, &[(&str, Q)]); 3] = [
            (Family::Ball, &[("alpha", q(5, 2))]),
            (Family::Triangle, &[("alpha", qi(1)), ("beta", q(1, 2)), ("gamma", qi(3))]),
            (Family::LaguerreLaguerre, &[("alpha", qi(3)), ("beta", q(1, 2))]),
        ];
        for (f, vals) in cases {
            let (pr, sys) = setup(f, vals);
            let pair = f.symmetrizer_pair(&sys, &pr).unwrap();
            assert!(pair.is_verified());
            assert!(pair.phi().is_symmetric());
            assert!(pair.same_up_to_scaling(&display_pair(f, "final", &pr)), "{f}");
        }
    }

    #[test]
    fn triangle_symmetrized_phi() {
        let (pr, sys) = setup(Family::Triangle, &[]);
        let pair = f_pair(Family::Triangle, &pr, &sys);
        assert_eq!(pair.phi22, poly("(1-y)y", &pr));
        assert_eq!(pair.phi12, poly("(1-x)y", &pr));
    }

    fn f_pair(f: Family, pr: &Params, sys: &KoornwinderSystem) -> PearsonPair {
        f.symmetrizer_pair(sys, pr).unwrap()
    }

    #[test]
    fn reference_biangle_symmetrizer_does_not_symmetrize() {
        let (pr, sys) = setup(Family::Biangle, &[]);
        let raw = raw_system(&sys).unwrap();
        let s = Family::symmetrizer_from(&Family::Biangle.reference_symmetrizer(), &pr).unwrap();
        assert!(symmetrize_with(&s, &raw, &sys).is_err());
        assert!(f_pair(Family::Biangle, &pr, &sys).is_verified());
    }

    #[test]
    fn ball_auxiliary_choices() {
        let (pr, sys) = setup(Family::Ball, &[("alpha", qi(2))]);
        let aux = Family::Ball.reference_auxiliaries();
        let first = Family::auxiliary_pair(&aux[0], &sys, &pr).unwrap();
        assert!(first.same_up_to_scaling(&display_pair(Family::Ball, "final", &pr)));
        let diag = Family::auxiliary_pair(&aux[1], &sys, &pr).unwrap();
        let rho = poly("1-x^2-y^2", &pr);
        assert_eq!((diag.phi11.clone(), diag.phi12.clone(), diag.phi22.clone()), (rho.clone(), Poly2::zero(), rho));
        assert!(diag.is_verified());
    }

    #[test]
    fn laguerre_laguerre_auxiliary_gives_final_phi() {
        let (pr, sys) = setup(Family::LaguerreLaguerre, &[]);
        let aux = Family::LaguerreLaguerre.reference_auxiliaries();
        let pair = Family::auxiliary_pair(&aux[0], &sys, &pr).unwrap();
        assert!(pair.same_up_to_scaling(&display_pair(Family::LaguerreLaguerre, "final", &pr)));
    }

    #[test]
    fn decomposition_inputs_satisfy_determinant_identity() {
        for &f in Family::all() {
            let pr = f.params_from(&[]).unwrap();
            let inp = f.decomposition_input(&pr).unwrap();
            assert!(inp.satisfies_split_identity(), "{f}");
            assert_eq!(inp.determinant_product().unwrap(), RatFn2::one(), "{f}");
        }
    }

    #[test]
    fn broken_split_is_rejected() {
        let (pr, sys) = setup(Family::Ball, &[]);
        let mut inp = Family::Ball.decomposition_input(&pr).unwrap();
        inp.c2 = poly("1", &pr);
        assert!(matches!(decomposition_method(&inp, &sys), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn search_finds_ball_and_triangle_pairs() {
        for f in [Family::Ball, Family::Triangle] {
            let (pr, sys) = setup(f, &[]);
            let raw = raw_system(&sys).unwrap();
            let found = search_symmetrizer(&raw, &sys, 1).unwrap();
            let want = display_pair(f, "final", &pr);
            assert!(found.iter().any(|c| c.pair.same_up_to_scaling(&want)), "{f}");
            assert!(found.iter().all(|c| c.pair.is_verified() && c.pair.phi().is_symmetric()));
        }
    }

    #[test]
    fn tensor_search_starts_with_identity() {
        let (_, sys) = setup(Family::Tensor, &[("alpha", q(1, 2)), ("beta", qi(2))]);
        let raw = raw_system(&sys).unwrap();
        let found = search_symmetrizer(&raw, &sys, 0).unwrap();
        assert_eq!(found[0].symmetrizer, Symmetrizer::identity());
        assert!(found[0].pair.phi12.is_zero());
    }

    #[test]
    fn gradient_and_divergence_forms_round_trip() {
        let (pr, sys) = setup(Family::Ball, &[("alpha", q(1, 3))]);
        let mut pair = display_pair(Family::Ball, "final", &pr);
        assert!(verify_divergence_form(&mut pair, &sys).unwrap().passed);
        let back = PearsonPair::from_gradient_form(&pair.phi(), &pair.gradient_rhs(), Provenance::Manual).unwrap();
        assert_eq!((back.psi1, back.psi2), (pair.psi1.clone(), pair.psi2.clone()));
        assert_eq!(pair.psi1, poly("-(2alpha+3)x", &pr));
        assert_eq!(pair.s_value(), 0);
    }
}
