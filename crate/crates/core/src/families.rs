//! Registry of the worked families: weights, symmetrizers, decomposition
//! splits, reference displays and eigenvalue formulas.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::parse::{parse_poly, parse_ratfn};
use crate::algebra::{Mat2, Poly1, Poly2, RatFn2, Vec2};
use crate::error::{Error, Result};
use crate::koornwinder::{make_system, KoornwinderSystem, RhoFunction};
use crate::pearson::{
    decomposition_from_auxiliary, decomposition_method, raw_system, symmetrize_with, DecompositionInput,
    PearsonPair, Symmetrizer,
};
use crate::scalar::{parse_rational, q, qi, Q};
use crate::weights::{jacobi01, jacobi_sym, laguerre};

pub type Params = BTreeMap<String, Q>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ball,
    Biangle,
    Triangle,
    LaguerreJacobi,
    LaguerreLaguerre,
    Tensor,
}

/// A matrix equation `M ∇w = v w` as it appears in the reference tables,
/// kept as expression strings in `x`, `y` and the parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceDisplay {
    pub label: &'static str,
    pub matrix: [&'static str; 4],
    pub rhs: [&'static str; 2],
    /// Whether the display is an exact identity for the weight.
    pub holds: bool,
}

impl ReferenceDisplay {
    pub fn parse(&self, p: &Params) -> Result<(Mat2<Q>, Vec2<Q>)> {
        let r = |s: &str| parse_ratfn(s, p);
        Ok((
            Mat2::new(r(self.matrix[0])?, r(self.matrix[1])?, r(self.matrix[2])?, r(self.matrix[3])?),
            Vec2::new(r(self.rhs[0])?, r(self.rhs[1])?),
        ))
    }
}

/// A reference value that is not an exact identity, with the corrected form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub id: &'static str,
    pub summary: &'static str,
}

/// Nonzero coefficients of `L[P_{n,m}]` predicted by a closed formula.
pub type Prediction = BTreeMap<(usize, usize), Q>;

#[derive(Clone, Copy, Debug)]
pub struct EigenFormula {
    pub name: &'static str,
    /// `true` for the reference formula, `false` for the corrected one.
    pub reference: bool,
    pub eval: fn(usize, usize, &Params) -> Prediction,
}

/// Operator coefficients `(c_xx, 2 c_xy, c_yy, c_x, c_y)` as displayed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceOperator {
    pub coeffs: [&'static str; 5],
}

const ALL: [Family; 6] = [
    Family::Ball,
    Family::Biangle,
    Family::Triangle,
    Family::LaguerreJacobi,
    Family::LaguerreLaguerre,
    Family::Tensor,
];

fn p(params: &Params, k: &str) -> Q {
    params.get(k).cloned().expect("validated parameter")
}

fn single(n: usize, m: usize, v: Q) -> Prediction {
    let mut out = Prediction::new();
    if !v.is_zero() {
        out.insert((n, m), v);
    }
    out
}

// Inserts only coefficients that sit on an existing basis index.
fn put(out: &mut Prediction, n: i64, m: i64, v: Q) {
    if m >= 0 && m <= n && !v.is_zero() {
        out.insert((n as usize, m as usize), v);
    }
}

fn ball_eigen(n: usize, m: usize, pr: &Params) -> Prediction {
    let (nq, a) = (qi(n as i64), p(pr, "alpha"));
    single(n, m, -(nq.clone() * (nq + qi(2) * a + qi(2))))
}

fn biangle_eigen_ref(n: usize, m: usize, pr: &Params) -> Prediction {
    let (a, b) = (p(pr, "alpha"), p(pr, "beta"));
    let (nq, mq) = (qi(n as i64), qi(m as i64));
    let t1 = (nq.clone() - mq.clone()) * (qi(2) * nq + qi(2) * (a.clone() + b.clone()) + qi(5));
    let t2 = q(1, 2) * mq.clone() * (mq + qi(2) * (a + b) + qi(3));
    single(n, m, -(t1 + t2))
}

fn biangle_eigen_fixed(n: usize, m: usize, pr: &Params) -> Prediction {
    let (a, b) = (p(pr, "alpha"), p(pr, "beta"));
    let (nq, mq) = (qi(n as i64), qi(m as i64));
    let t1 = (nq.clone() - mq.clone()) * (qi(2) * nq + qi(2) * (a.clone() + b.clone()) + qi(3));
    let t2 = q(1, 2) * mq.clone() * (mq + qi(2) * (a + b) + qi(3));
    single(n, m, -(t1 + t2))
}

fn triangle_eigen(n: usize, m: usize, pr: &Params) -> Prediction {
    let s = p(pr, "alpha") + p(pr, "beta") + p(pr, "gamma");
    let nq = qi(n as i64);
    single(n, m, -(nq.clone() * (nq + s + qi(2))))
}

fn lj_eigen_ref(n: usize, m: usize, pr: &Params) -> Prediction {
    let b = p(pr, "beta");
    let (ni, mi) = (n as i64, m as i64);
    let (nq, mq) = (qi(ni), qi(mi));
    let mut out = Prediction::new();
    put(&mut out, ni, mi, -nq - mq.clone() * (mq.clone() + b.clone()));
    put(&mut out, ni, mi - 1, -(mq.clone() - qi(1)) * (b + qi(1)));
    put(&mut out, ni, mi - 2, mq.clone() * (mq - qi(1)));
    out
}

fn ll_eigen_ref(n: usize, m: usize, pr: &Params) -> Prediction {
    let (a, b) = (p(pr, "alpha"), p(pr, "beta"));
    let (ni, mi) = (n as i64, m as i64);
    let (nq, mq) = (qi(ni), qi(mi));
    let k = nq.clone() - mq.clone();
    let mut out = Prediction::new();
    put(&mut out, ni + 1, mi, -k.clone());
    put(&mut out, ni, mi + 1, k.clone() + mq.clone() * (mq.clone() - qi(1)));
    put(&mut out, ni, mi, k.clone() * (k + a + b.clone()) - mq.clone());
    put(&mut out, ni, mi - 1, (mq - qi(1)) * (b + qi(2)));
    out
}

fn tensor_eigen(n: usize, m: usize, pr: &Params) -> Prediction {
    let (a, b) = (p(pr, "alpha"), p(pr, "beta"));
    let k = qi((n - m) as i64);
    let mq = qi(m as i64);
    let v = -(k.clone() * (k + qi(2) * a + qi(1))) - mq.clone() * (mq + qi(2) * b + qi(1));
    single(n, m, v)
}

impl Family {
    pub fn all() -> &'static [Family] {
        &ALL
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Ball => "ball",
            Family::Biangle => "biangle",
            Family::Triangle => "triangle",
            Family::LaguerreJacobi => "laguerre_jacobi",
            Family::LaguerreLaguerre => "laguerre_laguerre",
            Family::Tensor => "tensor",
        }
    }

    pub fn from_name(s: &str) -> Result<Family> {
        ALL.iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }

    pub fn title(&self) -> &'static str {
        match self {
            Family::Ball => "Ball polynomials on the unit disk",
            Family::Biangle => "Koornwinder polynomials on the parabolic biangle",
            Family::Triangle => "Koornwinder polynomials on the triangle",
            Family::LaguerreJacobi => "Laguerre-Jacobi Koornwinder polynomials",
            Family::LaguerreLaguerre => "Laguerre-Laguerre Koornwinder polynomials",
            Family::Tensor => "Tensor product of symmetric Jacobi weights",
        }
    }

    pub fn weight_formula(&self) -> &'static str {
        match self {
            Family::Ball => "(1-x^2-y^2)^alpha on x^2+y^2<1",
            Family::Biangle => "(1-x)^alpha (x-y^2)^beta on y^2<x<1",
            Family::Triangle => "(1-x)^alpha (x-y)^beta y^gamma on 0<y<x<1",
            Family::LaguerreJacobi => "x^(alpha-beta) e^(-x) (x-y)^beta on -x<y<x, x>0",
            Family::LaguerreLaguerre => "x^(alpha-beta) y^beta e^(-(x+y/x)) on x>0, y>0",
            Family::Tensor => "(1-x^2)^alpha (1-y^2)^beta on the square",
        }
    }

    /// Parameter names with default values.
    pub fn defaults(&self) -> Vec<(&'static str, Q)> {
        match self {
            Family::Ball => vec![("alpha", qi(1))],
            Family::Biangle => vec![("alpha", qi(1)), ("beta", qi(1))],
            Family::Triangle => vec![("alpha", qi(1)), ("beta", qi(1)), ("gamma", qi(1))],
            Family::LaguerreJacobi => vec![("alpha", qi(1)), ("beta", qi(1))],
            Family::LaguerreLaguerre => vec![("alpha", qi(2)), ("beta", q(1, 2))],
            Family::Tensor => vec![("alpha", qi(0)), ("beta", qi(1))],
        }
    }

    /// Merges user values over the defaults and checks the constraints.
    pub fn params(&self, given: &BTreeMap<String, String>) -> Result<Params> {
        let mut out: Params = self.defaults().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        for (k, v) in given {
            if !out.contains_key(k) {
                return Err(Error::InvalidParameter(format!("unknown parameter '{k}' for {}", self.name())));
            }
            out.insert(k.clone(), parse_rational(v)?);
        }
        self.validate(&out)?;
        Ok(out)
    }

    pub fn params_from(&self, values: &[(&str, Q)]) -> Result<Params> {
        let given = values.iter().map(|(k, v)| (k.to_string(), crate::scalar::rational_to_string(v))).collect();
        self.params(&given)
    }

    pub fn validate(&self, pr: &Params) -> Result<()> {
        for (k, _) in self.defaults() {
            let v = pr
                .get(k)
                .ok_or_else(|| Error::InvalidParameter(format!("missing parameter '{k}'")))?;
            if *v <= qi(-1) {
                return Err(Error::InvalidParameter(format!(
                    "{k} > -1 (got {})",
                    crate::scalar::rational_to_string(v)
                )));
            }
        }
        if *self == Family::LaguerreLaguerre && p(pr, "alpha") - p(pr, "beta") <= qi(-1) {
            return Err(Error::InvalidParameter("alpha - beta > -1".into()));
        }
        Ok(())
    }

    pub fn system(&self, pr: &Params) -> Result<KoornwinderSystem> {
        self.validate(pr)?;
        let a = p(pr, "alpha");
        match self {
            Family::Ball => make_system(
                jacobi_sym(&a, &a)?,
                jacobi_sym(&a, &a)?,
                RhoFunction::case_two(Poly1::new(vec![qi(1), qi(0), qi(-1)]))?,
            ),
            Family::Biangle => {
                let b = p(pr, "beta");
                make_system(jacobi01(&a, &b)?, jacobi_sym(&b, &b)?, RhoFunction::case_two(Poly1::x())?)
            }
            Family::Triangle => {
                let (b, g) = (p(pr, "beta"), p(pr, "gamma"));
                make_system(
                    jacobi01(&a, &(b.clone() + g.clone()))?,
                    jacobi01(&b, &g)?,
                    RhoFunction::case_one(qi(1), qi(0))?,
                )
            }
            Family::LaguerreJacobi => make_system(
                laguerre(&a)?,
                jacobi_sym(&p(pr, "beta"), &qi(0))?,
                RhoFunction::case_one(qi(1), qi(0))?,
            ),
            Family::LaguerreLaguerre => {
                make_system(laguerre(&a)?, laguerre(&p(pr, "beta"))?, RhoFunction::case_one(qi(1), qi(0))?)
            }
            Family::Tensor => {
                let b = p(pr, "beta");
                make_system(jacobi_sym(&a, &a)?, jacobi_sym(&b, &b)?, RhoFunction::one())
            }
        }
    }

    fn rf(src: &str, pr: &Params) -> Result<RatFn2<Q>> {
        parse_ratfn(src, pr)
    }

    /// Registered symmetrizer entries `[A, B, C, D]`.
    pub fn symmetrizer_source(&self) -> [&'static str; 4] {
        match self {
            Family::Ball => ["1", "0", "-x*y/(1-x^2)", "1/(1-x^2)"],
            Family::Biangle => ["1", "0", "y/(2x)", "1/(4x)"],
            Family::Triangle => ["1", "0", "y/x", "1/x"],
            Family::LaguerreJacobi => ["1", "1/(x+y)", "1", "1 + 1/(x+y)"],
            Family::LaguerreLaguerre => ["x", "0", "y", "1"],
            Family::Tensor => ["1", "0", "0", "1"],
        }
    }

    /// Symmetrizer entries as displayed in the reference, when they differ.
    pub fn reference_symmetrizer(&self) -> [&'static str; 4] {
        match self {
            Family::Biangle => ["1", "0", "y/(2x)", "-1/(4x)"],
            _ => self.symmetrizer_source(),
        }
    }

    pub fn symmetrizer(&self, pr: &Params) -> Result<Symmetrizer> {
        Self::symmetrizer_from(&self.symmetrizer_source(), pr)
    }

    pub fn symmetrizer_from(src: &[&str; 4], pr: &Params) -> Result<Symmetrizer> {
        Symmetrizer::new(
            Self::rf(src[0], pr)?,
            Self::rf(src[1], pr)?,
            Self::rf(src[2], pr)?,
            Self::rf(src[3], pr)?,
        )
    }

    /// Factor split `[a0, a1, c1, a2, b1, c2]` for the decomposition method.
    pub fn decomposition_source(&self) -> [&'static str; 6] {
        match self {
            Family::Ball => ["1-x^2-y^2", "1", "1", "1-x^2", "-x*y", "1-y^2"],
            Family::Biangle => ["x-y^2", "1-x", "1", "2x", "y", "(1-y^2)/2"],
            Family::Triangle => ["x-y", "1-x", "y", "x", "1", "1-y"],
            Family::LaguerreJacobi => ["x^2-y^2", "x", "1", "1", "1", "x^2-y^2+x"],
            Family::LaguerreLaguerre => ["x^2", "x", "y", "x", "1", "x+y"],
            Family::Tensor => ["1", "1-x^2", "1-y^2", "1", "0", "1"],
        }
    }

    pub fn decomposition_input(&self, pr: &Params) -> Result<DecompositionInput> {
        let s = self.decomposition_source();
        let g = |i: usize| parse_poly(s[i], pr);
        Ok(DecompositionInput {
            a0: g(0)?,
            a1: g(1)?,
            c1: g(2)?,
            a2: g(3)?,
            b1: g(4)?,
            c2: g(5)?,
        })
    }

    /// Auxiliary functions `(a, b, c)` as displayed in the reference; the
    /// first entry is the primary choice.
    pub fn reference_auxiliaries(&self) -> Vec<[&'static str; 3]> {
        match self {
            Family::Ball => vec![
                ["(1-x^2)/(1-x^2-y^2)", "-x*y/(1-x^2-y^2)", "(1-y^2)/(1-x^2-y^2)"],
                ["1", "0", "1"],
            ],
            Family::Biangle => vec![["2x/(x-y^2)", "y/(x-y^2)", "(1-y^2)/(2(1-x)(x-y^2))"]],
            Family::Triangle => vec![["x/((x-y)y)", "1/(x-y)", "(1-y)/((1-x)(x-y))"]],
            Family::LaguerreJacobi => vec![["1/(x^2-y^2)", "1/(x^2-y^2)", "(x^2-y^2+y)/(x(x^2-y^2))"]],
            Family::LaguerreLaguerre => vec![["1/(x*y)", "1/x^2", "(x+y)/x^3"]],
            Family::Tensor => vec![],
        }
    }

    pub fn auxiliary_pair(src: &[&str; 3], sys: &KoornwinderSystem, pr: &Params) -> Result<PearsonPair> {
        decomposition_from_auxiliary(
            &Self::rf(src[0], pr)?,
            &Self::rf(src[1], pr)?,
            &Self::rf(src[2], pr)?,
            sys,
        )
    }

    /// Matrix equations displayed in the reference, each with whether it
    /// is an exact identity.
    pub fn reference_displays(&self) -> Vec<ReferenceDisplay> {
        let d = |label, matrix, rhs, holds| ReferenceDisplay {
            label,
            matrix,
            rhs,
            holds,
        };
        match self {
            Family::Ball => vec![
                d("raw", ["1-x^2", "-x*y", "0", "1-x^2-y^2"], ["-2alpha*x", "-2alpha*y"], true),
                d("final", ["1-x^2", "-x*y", "-x*y", "1-y^2"], ["-2alpha*x", "-2alpha*y"], true),
                d("diagonal", ["1-x^2-y^2", "0", "0", "1-x^2-y^2"], ["-2alpha*x", "-2alpha*y"], true),
            ],
            Family::Biangle => vec![
                d("raw", ["(1-x)x", "(1-x)y/2", "0", "x-y^2"], ["beta-(alpha+beta)x", "-2beta*y"], true),
                d(
                    "final",
                    ["(1-x)x", "(1-x)y/2", "(1-x)y/2", "(1-y^2)/4"],
                    ["beta-(alpha+beta)x", "-(alpha+beta)y/2"],
                    true,
                ),
            ],
            Family::Triangle => vec![
                d(
                    "raw",
                    ["(1-x)x", "(1-x)y", "0", "(x-y)y"],
                    ["beta+gamma-(alpha+beta+gamma)x", "gamma*x-(beta+gamma)y"],
                    true,
                ),
                d(
                    "final",
                    ["(1-x)x", "(1-x)y", "(1-x)y", "(1-y)y"],
                    ["beta+gamma-(alpha+beta+gamma)x", "gamma-(alpha+beta+gamma)y"],
                    true,
                ),
            ],
            Family::LaguerreJacobi => vec![
                d("raw", ["x", "y", "0", "x^2-y^2"], ["alpha-x", "-beta(x+y)"], true),
                d(
                    "final",
                    ["x", "x", "x", "x^2-y^2+x"],
                    ["alpha-beta-x", "-beta(x+y)+(alpha-beta-x)"],
                    true,
                ),
                d(
                    "auxiliary",
                    ["x", "x", "x", "x^2-y^2+y"],
                    ["alpha-beta-x", "-beta(x+y)+alpha-x"],
                    true,
                ),
            ],
            Family::LaguerreLaguerre => vec![
                d("raw", ["x", "y", "0", "x*y"], ["alpha-x", "(beta+1)x-y"], false),
                d("raw_corrected", ["x", "y", "0", "x*y"], ["alpha-x", "beta*x-y"], true),
                d(
                    "final",
                    ["x^2", "x*y", "x*y", "(x+y)y"],
                    ["(alpha-x)x", "(alpha-1)y+beta*x-x*y"],
                    true,
                ),
                d("diagonal", ["x^2", "0", "0", "x*y"], ["(alpha-beta-1-x)x+y", "(beta+1)x-y"], false),
                d("diagonal_corrected", ["x^2", "0", "0", "x*y"], ["(alpha-beta-x)x+y", "beta*x-y"], true),
            ],
            Family::Tensor => vec![d("raw", ["1-x^2", "0", "0", "1-y^2"], ["-2alpha*x", "-2beta*y"], true)],
        }
    }

    /// The display the operator is built from.
    pub fn final_display(&self) -> ReferenceDisplay {
        let label = match self {
            Family::Tensor => "raw",
            _ => "final",
        };
        self.reference_displays()
            .into_iter()
            .find(|d| d.label == label)
            .expect("registered")
    }

    /// Operator as displayed: `(c_xx, 2 c_xy, c_yy, c_x, c_y)`.
    pub fn reference_operator(&self) -> ReferenceOperator {
        let coeffs = match self {
            Family::Ball => ["1-x^2", "-2x*y", "1-y^2", "-(2alpha+3)x", "-(2alpha+3)y"],
            Family::Biangle => [
                "2(1-x)x",
                "2(1-x)y",
                "(1-y^2)/2",
                "2beta+3-(2alpha+2beta+5)x",
                "-(alpha+beta+2)y",
            ],
            Family::Triangle => [
                "(1-x)x",
                "2(1-x)y",
                "(1-y)y",
                "beta+gamma+2-(alpha+beta+gamma+3)x",
                "gamma+1-(alpha+beta+gamma+3)y",
            ],
            Family::LaguerreJacobi => [
                "x",
                "2x",
                "x^2-y^2+x",
                "1+alpha-beta-x",
                "alpha-beta+1-(1+beta)x-(2+beta)y",
            ],
            Family::LaguerreLaguerre => ["x^2", "0", "x*y", "(alpha-beta+1-x)x+y", "(beta+2)x-y"],
            Family::Tensor => ["1-x^2", "0", "1-y^2", "-(2alpha+2)x", "-(2beta+2)y"],
        };
        ReferenceOperator { coeffs }
    }

    /// Closed-form predictions for `L[P_{n,m}]`.
    pub fn eigen_formulas(&self) -> Vec<EigenFormula> {
        let f = |name, reference, eval| EigenFormula { name, reference, eval };
        match self {
            Family::Ball => vec![f("-n(n+2alpha+2)", true, ball_eigen)],
            Family::Biangle => vec![
                f("-[(n-m)(2n+2alpha+2beta+5)+m(m+2alpha+2beta+3)/2]", true, biangle_eigen_ref),
                f("-[(n-m)(2n+2alpha+2beta+3)+m(m+2alpha+2beta+3)/2]", false, biangle_eigen_fixed),
            ],
            Family::Triangle => vec![f("-n(n+alpha+beta+gamma+2)", true, triangle_eigen)],
            Family::LaguerreJacobi => vec![f(
                "(n,m): -n-m(m+beta); (n,m-1): -(m-1)(beta+1); (n,m-2): m(m-1)",
                true,
                lj_eigen_ref,
            )],
            Family::LaguerreLaguerre => vec![f(
                "(n+1,m): -(n-m); (n,m+1): n-m+m(m-1); (n,m): (n-m)(n-m+alpha+beta)-m; (n,m-1): (m-1)(beta+2)",
                true,
                ll_eigen_ref,
            )],
            Family::Tensor => vec![f("-(n-m)(n-m+2alpha+1)-m(m+2beta+1)", false, tensor_eigen)],
        }
    }

    pub fn discrepancies(&self) -> Vec<Discrepancy> {
        let d = |id, summary| Discrepancy { id, summary };
        match self {
            Family::Ball => vec![d(
                "ball.auxiliary_identity",
                "auxiliary choice a=1, b=0, c=1 gives a valid pair but (ac-b^2)E = E, not 1",
            )],
            Family::Biangle => vec![
                d(
                    "biangle.symmetrizer_sign",
                    "displayed S_22 = -1/(4x) does not symmetrize; +1/(4x) does",
                ),
                d(
                    "biangle.operator_scale",
                    "displayed operator is twice the operator of the displayed Pearson pair",
                ),
                d(
                    "biangle.eigenvalue",
                    "eigenvalue constant 2n+2alpha+2beta+5 should read 2n+2alpha+2beta+3",
                ),
            ],
            Family::Triangle => vec![],
            Family::LaguerreJacobi => vec![
                d(
                    "laguerre_jacobi.auxiliary_identity",
                    "displayed auxiliary c gives (ac-b^2)E != 1; c2 = x^2-y^2+x restores it",
                ),
                d(
                    "laguerre_jacobi.expansion",
                    "displayed three-term coefficients do not match the expansion of L[P_{n,m}]",
                ),
            ],
            Family::LaguerreLaguerre => vec![
                d("laguerre_laguerre.delta2", "raw delta_2 = (beta+1)x-y should read beta*x-y"),
                d(
                    "laguerre_laguerre.diagonal",
                    "diagonal pair right-hand side should read ((alpha-beta-x)x+y, beta*x-y)",
                ),
                d(
                    "laguerre_laguerre.expansion",
                    "displayed four-term coefficients do not match the expansion of L[P_{n,m}]",
                ),
            ],
            Family::Tensor => vec![],
        }
    }

    /// The Pearson pair the family's operator is built from: the
    /// decomposition method with the registered split.
    pub fn operator_pair(&self, sys: &KoornwinderSystem, pr: &Params) -> Result<PearsonPair> {
        decomposition_method(&self.decomposition_input(pr)?, sys)
    }

    /// The pair from the registered symmetrizer.
    pub fn symmetrizer_pair(&self, sys: &KoornwinderSystem, pr: &Params) -> Result<PearsonPair> {
        symmetrize_with(&self.symmetrizer(pr)?, &raw_system(sys)?, sys)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses the reference operator coefficients, halving the mixed term.
pub fn parse_reference_operator(op: &ReferenceOperator, pr: &Params) -> Result<[Poly2<Q>; 5]> {
    let mut out: Vec<Poly2<Q>> = Vec::with_capacity(5);
    for (i, s) in op.coeffs.iter().enumerate() {
        let v = parse_poly(s, pr)?;
        out.push(if i == 1 { v.scale(&q(1, 2)) } else { v });
    }
    Ok(out.try_into().expect("five entries"))
}
