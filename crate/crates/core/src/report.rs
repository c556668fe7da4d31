//! Run configuration and deterministic JSON / Markdown reports.
//!
//! Every Pearson pair in a report carries its verdict, every eigenvalue
//! names the formula it matched (or `empirical`), and every registered
//! discrepancy is re-checked rather than copied.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::parse::{parse_poly, parse_ratfn};
use crate::algebra::{Mat2, Poly2, RatFn2, Vec2};
use crate::error::{Error, Result};
use crate::families::{parse_reference_operator, Family, Params};
use crate::koornwinder::{KoornwinderBasis, KoornwinderSystem};
use crate::operator::{build_operator, classify, ClassifyReport, Classification};
use crate::pearson::{
    raw_system, search_symmetrizer, symmetrize_with, verify_divergence_form, verify_gradient_form, PearsonPair, Provenance,
    RawSystem, Verdict,
};
use crate::quadrature::{moment_matrix_check, orthocheck, MomentMatrixVerdict, OrthoReport, Precision};
use crate::scalar::{rational_to_string, Q};

pub const NMAX_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

/// Settings shared by every command. A config file uses the same keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub nmax: usize,
    pub precision: u32,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: "ball".into(),
            params: BTreeMap::new(),
            nmax: 6,
            precision: Precision::DEFAULT_DIGITS,
            tolerance: 1e-10,
            out: None,
            format: Format::Json,
        }
    }
}

/// A checked configuration.
#[derive(Clone, Debug)]
pub struct Run {
    pub family: Family,
    pub params: Params,
    pub nmax: usize,
    pub precision: Precision,
    pub tolerance: f64,
    pub config: RunConfig,
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Run> {
        let family = Family::from_name(&self.family)?;
        let params = family.params(&self.params)?;
        if self.nmax > NMAX_LIMIT {
            return Err(Error::Config(format!("nmax must be <= {NMAX_LIMIT}, got {}", self.nmax)));
        }
        let precision = Precision::new(self.precision)?;
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(Run {
            family,
            params,
            nmax: self.nmax,
            precision,
            tolerance: self.tolerance,
            config: self.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub nmax: usize,
    pub precision: u32,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightSection {
    pub title: &'static str,
    pub weight: &'static str,
    pub w1: String,
    pub w2: String,
    pub rho_squared: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyEntry {
    pub n: usize,
    pub m: usize,
    pub text: String,
    pub poly: Poly2<Q>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RawSection {
    /// `[φ₁₁, φ₁₂, φ₂₁, φ₂₂]`.
    pub phi: [String; 4],
    pub delta: [String; 2],
    pub row_scaling: (i64, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        if b {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairEntry {
    pub label: String,
    pub provenance: Provenance,
    /// `[Φ₁₁, Φ₁₂, Φ₂₂]`.
    pub phi: [String; 3],
    pub psi: [String; 2],
    pub deg_phi: u32,
    pub deg_psi: u32,
    pub s_value: u32,
    pub verdict: Outcome,
    pub residual: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definite: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_matrix: Option<MomentMatrixVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisplayEntry {
    pub label: &'static str,
    pub matrix: [&'static str; 4],
    pub rhs: [&'static str; 2],
    pub expected: Outcome,
    pub verdict: Outcome,
    pub residual: [String; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct PearsonSection {
    pub symmetrizer: [String; 4],
    pub candidates: Vec<PairEntry>,
    pub search_candidates: usize,
    pub reference_displays: Vec<DisplayEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySection {
    pub form: &'static str,
    pub verdict: Outcome,
    pub residual: [String; 2],
    /// Registered discrepancy the supplied display reproduces, if any.
    pub erratum: Option<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OperatorEntry {
    pub n: usize,
    pub m: usize,
    pub classification: Classification,
    pub coefficients: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<String>,
    /// Name of the closed formula reproducing the expansion, or `empirical`.
    pub formula: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaCheck {
    pub name: &'static str,
    pub reference: bool,
    pub verdict: Outcome,
    pub first_mismatch: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OperatorSection {
    pub pair: PairEntry,
    pub operator: String,
    pub reference_operator: [&'static str; 5],
    /// `c` with reference operator `= c · L`, if such a constant exists.
    pub reference_scale: Option<String>,
    pub overall: Classification,
    pub band_s: u32,
    pub s_value: u32,
    pub formulas: Vec<FormulaCheck>,
    pub entries: Vec<OperatorEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErratumFlag {
    pub id: &'static str,
    pub summary: &'static str,
    /// Whether the discrepancy reproduces for these parameters.
    pub observed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Sections {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomials: Option<Vec<PolyEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_system: Option<RawSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pearson: Option<PearsonSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthocheck: Option<OrthoReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errata: Option<Vec<ErratumFlag>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub metadata: Metadata,
    pub sections: Sections,
}

fn s<T: std::fmt::Display>(v: &T) -> String {
    v.to_string()
}

fn residual_strings(v: &Vec2<Q>) -> [String; 2] {
    [s(&v.v[0]), s(&v.v[1])]
}

impl Report {
    pub fn new(run: &Run) -> Self {
        Report {
            metadata: Metadata {
                tool: "koornwinder",
                version: env!("CARGO_PKG_VERSION"),
                family: run.family.name().to_string(),
                params: run.params.iter().map(|(k, v)| (k.clone(), rational_to_string(v))).collect(),
                nmax: run.nmax,
                precision: run.precision.digits(),
                tolerance: run.tolerance,
            },
            sections: Sections::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Markdown => self.to_markdown(),
        }
    }
}

pub fn weight_section(family: Family, sys: &KoornwinderSystem) -> WeightSection {
    WeightSection {
        title: family.title(),
        weight: family.weight_formula(),
        w1: format!("{} on {}", sys.w1.name, sys.w1.interval),
        w2: format!("{} on {}", sys.w2.name, sys.w2.interval),
        rho_squared: s(&sys.rho.rho_sq),
    }
}

pub fn polynomials(sys: &KoornwinderSystem, nmax: usize) -> Result<Vec<PolyEntry>> {
    let basis = KoornwinderBasis::new(sys, nmax)?;
    Ok(basis
        .iter()
        .map(|(&(n, m), p)| PolyEntry {
            n,
            m,
            text: s(p),
            poly: p.clone(),
        })
        .collect())
}

pub fn raw_section(raw: &RawSystem) -> RawSection {
    let g = |i, j| s(raw.phi.get(i, j));
    RawSection {
        phi: [g(0, 0), g(0, 1), g(1, 0), g(1, 1)],
        delta: [s(&raw.delta.v[0]), s(&raw.delta.v[1])],
        row_scaling: raw.row_scaling,
    }
}

fn pair_entry(label: &str, pair: &PearsonPair, verdict: &Verdict) -> PairEntry {
    PairEntry {
        label: label.to_string(),
        provenance: pair.provenance,
        phi: [s(&pair.phi11), s(&pair.phi12), s(&pair.phi22)],
        psi: [s(&pair.psi1), s(&pair.psi2)],
        deg_phi: pair.deg_phi(),
        deg_psi: pair.deg_psi(),
        s_value: pair.s_value(),
        verdict: verdict.passed.into(),
        residual: residual_strings(&verdict.residual),
        definite: None,
        moment_matrix: None,
    }
}

// Re-verifies from scratch so the verdict in the report is never inherited.
fn checked_entry(label: &str, pair: &PearsonPair, sys: &KoornwinderSystem, prec: Option<Precision>) -> Result<PairEntry> {
    let mut fresh = PearsonPair::new(
        pair.phi11.clone(),
        pair.phi12.clone(),
        pair.phi22.clone(),
        pair.psi1.clone(),
        pair.psi2.clone(),
        pair.provenance,
    )?;
    let v = verify_divergence_form(&mut fresh, sys)?;
    let mut e = pair_entry(label, &fresh, &v);
    if let (Some(p), true) = (prec, v.passed) {
        e.moment_matrix = Some(moment_matrix_check(&fresh, sys, p)?);
    }
    Ok(e)
}

pub fn display_entries(family: Family, params: &Params, sys: &KoornwinderSystem) -> Result<Vec<DisplayEntry>> {
    family
        .reference_displays()
        .into_iter()
        .map(|d| {
            let (m, v) = d.parse(params)?;
            let verdict = verify_gradient_form(&m, &v, sys)?;
            Ok(DisplayEntry {
                label: d.label,
                matrix: d.matrix,
                rhs: d.rhs,
                expected: d.holds.into(),
                verdict: verdict.passed.into(),
                residual: residual_strings(&verdict.residual),
            })
        })
        .collect()
}

/// Number of search candidates listed in a report.
pub const REPORTED_SEARCH_CANDIDATES: usize = 6;

pub fn pearson_derive(family: Family, params: &Params, sys: &KoornwinderSystem, prec: Precision) -> Result<PearsonSection> {
    let raw = raw_system(sys)?;
    let sym = family.symmetrizer(params)?;
    let mut candidates = vec![checked_entry("symmetrizer", &family.symmetrizer_pair(sys, params)?, sys, Some(prec))?];
    candidates.push(checked_entry("decomposition", &family.operator_pair(sys, params)?, sys, Some(prec))?);
    for (i, src) in family.reference_auxiliaries().iter().enumerate() {
        let label = format!("auxiliary_{}", i + 1);
        match Family::auxiliary_pair(src, sys, params) {
            Ok(p) => candidates.push(checked_entry(&label, &p, sys, None)?),
            Err(Error::NonPolynomialEntries(_)) | Err(Error::InvalidPair(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let found = match search_symmetrizer(&raw, sys, 1) {
        Ok(v) => v,
        Err(Error::NoSymmetrizer(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    for (i, c) in found.iter().take(REPORTED_SEARCH_CANDIDATES).enumerate() {
        let mut e = checked_entry(&format!("search_{}", i + 1), &c.pair, sys, None)?;
        e.definite = Some(c.definite);
        candidates.push(e);
    }
    let g = |i, j| s(sym.s.get(i, j));
    Ok(PearsonSection {
        symmetrizer: [g(0, 0), g(0, 1), g(1, 0), g(1, 1)],
        candidates,
        search_candidates: found.len(),
        reference_displays: display_entries(family, params, sys)?,
    })
}

/// A Pearson pair supplied by the user; entries are expressions in `x`,
/// `y` and the family parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairFile {
    /// `M ∇w = v w` with `M` given row by row.
    Gradient { matrix: [String; 4], rhs: [String; 2] },
    /// `div(Φ w) = Ψᵗ w`.
    Divergence { phi: [String; 3], psi: [String; 2] },
}

pub fn pearson_verify(family: Family, params: &Params, sys: &KoornwinderSystem, file: &PairFile) -> Result<VerifySection> {
    match file {
        PairFile::Gradient { matrix, rhs } => {
            let r = |t: &str| parse_ratfn(t, params);
            let m = Mat2::new(r(&matrix[0])?, r(&matrix[1])?, r(&matrix[2])?, r(&matrix[3])?);
            let v = Vec2::new(r(&rhs[0])?, r(&rhs[1])?);
            let verdict = verify_gradient_form(&m, &v, sys)?;
            let mut erratum = None;
            if !verdict.passed {
                for d in family.reference_displays() {
                    if d.holds {
                        continue;
                    }
                    if d.parse(params)? == (m.clone(), v.clone()) {
                        erratum = display_erratum(family, d.label);
                    }
                }
            }
            Ok(VerifySection {
                form: "gradient",
                verdict: verdict.passed.into(),
                residual: residual_strings(&verdict.residual),
                erratum,
            })
        }
        PairFile::Divergence { phi, psi } => {
            let p = |t: &str| parse_poly(t, params);
            let mut pair = PearsonPair::new(p(&phi[0])?, p(&phi[1])?, p(&phi[2])?, p(&psi[0])?, p(&psi[1])?, Provenance::Manual)?;
            let verdict = verify_divergence_form(&mut pair, sys)?;
            Ok(VerifySection {
                form: "divergence",
                verdict: verdict.passed.into(),
                residual: residual_strings(&verdict.residual),
                erratum: None,
            })
        }
    }
}

fn display_erratum(family: Family, label: &str) -> Option<&'static str> {
    match (family, label) {
        (Family::LaguerreLaguerre, "raw") => Some("laguerre_laguerre.delta2"),
        (Family::LaguerreLaguerre, "diagonal") => Some("laguerre_laguerre.diagonal"),
        _ => None,
    }
}

fn coefficient_map(c: &BTreeMap<(usize, usize), Q>) -> BTreeMap<String, String> {
    c.iter().map(|((n, m), v)| (format!("{n},{m}"), rational_to_string(v))).collect()
}

// `c` with `a = c·b` entrywise, if it exists.
fn common_ratio(a: &[Poly2<Q>], b: &[Poly2<Q>]) -> Option<Q> {
    let mut ratio: Option<Q> = None;
    for (x, y) in a.iter().zip(b) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => continue,
            (false, false) => {}
            _ => return None,
        }
        let c = x.leading_coeff() / y.leading_coeff();
        if y.scale(&c) != *x {
            return None;
        }
        match &ratio {
            Some(r) if *r != c => return None,
            _ => ratio = Some(c),
        }
    }
    ratio
}

pub fn operator_section(family: Family, params: &Params, sys: &KoornwinderSystem, nmax: usize) -> Result<(OperatorSection, ClassifyReport)> {
    let pair = family.operator_pair(sys, params)?;
    let entry = checked_entry("decomposition", &pair, sys, None)?;
    let op = build_operator(&pair)?;
    let rep = classify(sys, &op, nmax)?;
    let reference = parse_reference_operator(&family.reference_operator(), params)?;
    let ours = [op.c_xx.clone(), op.c_xy.clone(), op.c_yy.clone(), op.c_x.clone(), op.c_y.clone()];
    let reference_scale = common_ratio(&reference, &ours).map(|c| rational_to_string(&c));
    let formulas_all = family.eigen_formulas();
    let mut formulas = Vec::new();
    for f in &formulas_all {
        let mismatch = rep
            .reports
            .iter()
            .find(|r| (f.eval)(r.n, r.m, params) != r.coefficients)
            .map(|r| (r.n, r.m));
        formulas.push(FormulaCheck {
            name: f.name,
            reference: f.reference,
            verdict: mismatch.is_none().into(),
            first_mismatch: mismatch,
        });
    }
    let entries = rep
        .reports
        .iter()
        .map(|r| {
            let formula = formulas_all
                .iter()
                .find(|f| (f.eval)(r.n, r.m, params) == r.coefficients)
                .map(|f| f.name.to_string())
                .unwrap_or_else(|| "empirical".to_string());
            OperatorEntry {
                n: r.n,
                m: r.m,
                classification: r.classification,
                coefficients: coefficient_map(&r.coefficients),
                eigenvalue: r.eigenvalue().map(|v| rational_to_string(&v)),
                formula,
            }
        })
        .collect();
    let section = OperatorSection {
        pair: entry,
        operator: s(&op),
        reference_operator: family.reference_operator().coeffs,
        reference_scale,
        overall: rep.overall,
        band_s: rep.band_s,
        s_value: rep.s_value,
        formulas,
        entries,
    };
    Ok((section, rep))
}

/// Re-checks each registered discrepancy for the given parameters.
pub fn errata(
    family: Family,
    params: &Params,
    sys: &KoornwinderSystem,
    op: &OperatorSection,
    displays: &[DisplayEntry],
) -> Result<Vec<ErratumFlag>> {
    let raw = raw_system(sys)?;
    let mut out = Vec::new();
    for d in family.discrepancies() {
        let kind = d.id.split('.').nth(1).unwrap_or("");
        let observed = match kind {
            "symmetrizer_sign" => {
                let shown = Family::symmetrizer_from(&family.reference_symmetrizer(), params)?;
                symmetrize_with(&shown, &raw, sys).is_err()
            }
            "operator_scale" => {
                // Compared with the operator of the displayed final pair.
                let (m, v) = family.final_display().parse(params)?;
                let p = PearsonPair::from_gradient_form(&m, &v, Provenance::Manual)?;
                let ours = [p.phi11, p.phi12, p.phi22, p.psi1, p.psi2];
                let shown = parse_reference_operator(&family.reference_operator(), params)?;
                common_ratio(&shown, &ours) != Some(crate::scalar::qi(1))
            }
            "eigenvalue" | "expansion" => op.formulas.iter().any(|f| f.reference && f.verdict == Outcome::Fail),
            "delta2" | "diagonal" => displays
                .iter()
                .any(|e| display_erratum(family, e.label) == Some(d.id) && e.verdict == Outcome::Fail),
            "auxiliary_identity" => {
                let e = RatFn2::from_poly(family.decomposition_input(params)?.e());
                let mut any = false;
                for src in family.reference_auxiliaries() {
                    let r = |t: &str| parse_ratfn(t, params);
                    let (a, b, c) = (r(src[0])?, r(src[1])?, r(src[2])?);
                    let det = &(&a * &c) - &(&b * &b);
                    any |= &det * &e != RatFn2::one();
                }
                any
            }
            _ => false,
        };
        out.push(ErratumFlag {
            id: d.id,
            summary: d.summary,
            observed,
        });
    }
    Ok(out)
}

/// Every section for one family.
pub fn report_all(run: &Run) -> Result<Report> {
    let sys = run.family.system(&run.params)?;
    let mut rep = Report::new(run);
    let pearson = pearson_derive(run.family, &run.params, &sys, run.precision)?;
    let (op, _) = operator_section(run.family, &run.params, &sys, run.nmax)?;
    let flags = errata(run.family, &run.params, &sys, &op, &pearson.reference_displays)?;
    rep.sections = Sections {
        weight: Some(weight_section(run.family, &sys)),
        polynomials: Some(polynomials(&sys, run.nmax)?),
        raw_system: Some(raw_section(&raw_system(&sys)?)),
        pearson: Some(pearson),
        verify: None,
        operator: Some(op),
        orthocheck: Some(orthocheck(&sys, run.nmax.max(1), run.precision, run.tolerance)?),
        errata: Some(flags),
    };
    Ok(rep)
}

impl Report {
    /// Markdown in the order weight, raw system, symmetrizer, Pearson
    /// pairs, operator, eigenvalues.
    pub fn to_markdown(&self) -> String {
        let mut o = String::new();
        let md = &self.metadata;
        let params: Vec<String> = md.params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        let _ = writeln!(o, "# {} ({})\n", md.family, params.join(", "));
        let _ = writeln!(o, "{} {}, nmax = {}, precision = {} digits, tolerance = {:e}\n", md.tool, md.version, md.nmax, md.precision, md.tolerance);
        let sec = &self.sections;
        if let Some(w) = &sec.weight {
            let _ = writeln!(o, "## Weight\n\n{}\n\n`w = {}`\n\n- w1: `{}`\n- w2: `{}`\n- rho^2: `{}`\n", w.title, w.weight, w.w1, w.w2, w.rho_squared);
        }
        if let Some(ps) = &sec.polynomials {
            let _ = writeln!(o, "## Polynomials\n\n| n | m | P(n,m) |\n|---|---|---|");
            for p in ps {
                let _ = writeln!(o, "| {} | {} | `{}` |", p.n, p.m, p.text);
            }
            o.push('\n');
        }
        if let Some(r) = &sec.raw_system {
            let _ = writeln!(o, "## Raw system\n\n`phi = [[{}, {}], [{}, {}]]`\n\n`delta = ({}, {})`\n\nrow scaling: rho^{} and rho^{}\n", r.phi[0], r.phi[1], r.phi[2], r.phi[3], r.delta[0], r.delta[1], r.row_scaling.0, r.row_scaling.1);
        }
        if let Some(p) = &sec.pearson {
            let _ = writeln!(o, "## Symmetrizer\n\n`S = [[{}, {}], [{}, {}]]`\n", p.symmetrizer[0], p.symmetrizer[1], p.symmetrizer[2], p.symmetrizer[3]);
            let _ = writeln!(o, "## Pearson pairs\n\n| label | Phi11 | Phi12 | Phi22 | Psi1 | Psi2 | s | verdict | det<1,Phi> |\n|---|---|---|---|---|---|---|---|---|");
            for c in &p.candidates {
                pair_row(&mut o, c);
            }
            let _ = writeln!(o, "\nsearch returned {} candidate(s)\n", p.search_candidates);
            let _ = writeln!(o, "### Reference displays\n\n| label | matrix | rhs | expected | verdict |\n|---|---|---|---|---|");
            for d in &p.reference_displays {
                let _ = writeln!(o, "| {} | `[[{}, {}], [{}, {}]]` | `({}, {})` | {:?} | {:?} |", d.label, d.matrix[0], d.matrix[1], d.matrix[2], d.matrix[3], d.rhs[0], d.rhs[1], d.expected, d.verdict);
            }
            o.push('\n');
        }
        if let Some(v) = &sec.verify {
            let _ = writeln!(o, "## Verification\n\nform: {}, verdict: {:?}\n\nresidual: `({}, {})`\n", v.form, v.verdict, v.residual[0], v.residual[1]);
            if let Some(e) = v.erratum {
                let _ = writeln!(o, "erratum: {e}\n");
            }
        }
        if let Some(op) = &sec.operator {
            let _ = writeln!(o, "## Operator\n\n`L = {}`\n", op.operator);
            let _ = writeln!(o, "reference operator: `{}`, scale relative to L: {}\n", op.reference_operator.join(" | "), op.reference_scale.as_deref().unwrap_or("none"));
            let _ = writeln!(o, "classification: {} (band s = {}, s_value = {})\n", op.overall, op.band_s, op.s_value);
            let _ = writeln!(o, "| formula | reference | verdict | first mismatch |\n|---|---|---|---|");
            for f in &op.formulas {
                let mm = f.first_mismatch.map(|(n, m)| format!("({n},{m})")).unwrap_or_default();
                let _ = writeln!(o, "| `{}` | {} | {:?} | {} |", f.name, f.reference, f.verdict, mm);
            }
            let _ = writeln!(o, "\n## Eigenvalues\n\n| n | m | class | coefficients | formula |\n|---|---|---|---|---|");
            for e in &op.entries {
                let cs: Vec<String> = e.coefficients.iter().map(|(k, v)| format!("({k}): {v}")).collect();
                let _ = writeln!(o, "| {} | {} | {} | {} | `{}` |", e.n, e.m, e.classification, cs.join("; "), e.formula);
            }
            o.push('\n');
        }
        if let Some(r) = &sec.orthocheck {
            let worst = r
                .worst_pair
                .map(|((a, b), (c, d))| format!("P({a},{b}) vs P({c},{d})"))
                .unwrap_or_else(|| "none".into());
            let _ = writeln!(o, "## Orthogonality\n\nmax residual {:e} ({}), tolerance {:e}: {}\n", r.max_residual, worst, r.tolerance, if r.passed { "pass" } else { "fail" });
        }
        if let Some(fl) = &sec.errata {
            let _ = writeln!(o, "## Discrepancies\n");
            if fl.is_empty() {
                let _ = writeln!(o, "none registered\n");
            }
            for f in fl {
                let _ = writeln!(o, "- `{}` ({}): {}", f.id, if f.observed { "observed" } else { "not observed" }, f.summary);
            }
            if !fl.is_empty() {
                o.push('\n');
            }
        }
        o
    }
}

fn pair_row(o: &mut String, c: &PairEntry) {
    let det = c
        .moment_matrix
        .as_ref()
        .map(|m| format!("{:?} ({:.3e})", Outcome::from(m.passed), m.relative_det))
        .unwrap_or_default();
    let _ = writeln!(
        o,
        "| {} | `{}` | `{}` | `{}` | `{}` | `{}` | {} | {:?} | {} |",
        c.label, c.phi[0], c.phi[1], c.phi[2], c.psi[0], c.psi[1], c.s_value, c.verdict, det
    );
}

/// A summary line for `family list`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub title: &'static str,
    pub weight: &'static str,
    pub defaults: BTreeMap<String, String>,
}

pub fn family_list() -> Vec<FamilyInfo> {
    Family::all()
        .iter()
        .map(|f| FamilyInfo {
            name: f.name(),
            title: f.title(),
            weight: f.weight_formula(),
            defaults: f.defaults().into_iter().map(|(k, v)| (k.to_string(), rational_to_string(&v))).collect(),
        })
        .collect()
}
