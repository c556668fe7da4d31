//! Pinned outcomes for reference values that are not exact identities.

use std::collections::BTreeMap;

use koornwinder::algebra::parse::{parse_poly, parse_ratfn};
use koornwinder::families::{parse_reference_operator, Family, Params};
use koornwinder::koornwinder::{KoornwinderBasis, KoornwinderSystem};
use koornwinder::operator::{build_operator, DiffOperator2};
use koornwinder::pearson::{raw_system, symmetrize_with, verify_divergence_form, verify_gradient_form, PearsonPair, Provenance};
use koornwinder::report::{report_all, RunConfig};
use koornwinder::scalar::{q, qi};
use koornwinder::{RationalFunction2, Q};

fn setup(f: Family, vals: &[(&str, Q)]) -> (Params, KoornwinderSystem) {
    let pr = f.params_from(vals).unwrap();
    let sys = f.system(&pr).unwrap();
    (pr, sys)
}

fn reference_op(f: Family, pr: &Params) -> DiffOperator2 {
    let [c_xx, c_xy, c_yy, c_x, c_y] = parse_reference_operator(&f.reference_operator(), pr).unwrap();
    DiffOperator2 { c_xx, c_xy, c_yy, c_x, c_y }
}

fn pair_op(f: Family, pr: &Params, sys: &KoornwinderSystem) -> DiffOperator2 {
    build_operator(&f.operator_pair(sys, pr).unwrap()).unwrap()
}

fn display_verdict(f: Family, label: &str, pr: &Params, sys: &KoornwinderSystem) -> bool {
    let d = f.reference_displays().into_iter().find(|d| d.label == label).unwrap();
    let (m, v) = d.parse(pr).unwrap();
    verify_gradient_form(&m, &v, sys).unwrap().passed
}

#[test]
fn biangle_displayed_symmetrizer_does_not_symmetrize() {
    let (pr, sys) = setup(Family::Biangle, &[("alpha", q(1, 2)), ("beta", qi(2))]);
    let raw = raw_system(&sys).unwrap();
    let shown = Family::symmetrizer_from(&Family::Biangle.reference_symmetrizer(), &pr).unwrap();
    // The linear constraint holds; S φ is not polynomial.
    assert!(shown.satisfies_constraint(&raw));
    assert!(symmetrize_with(&shown, &raw, &sys).is_err());
    assert!(symmetrize_with(&Family::Biangle.symmetrizer(&pr).unwrap(), &raw, &sys).is_ok());
}

#[test]
fn biangle_displayed_operator_is_twice_the_final_pair_operator() {
    let (pr, sys) = setup(Family::Biangle, &[("alpha", qi(3)), ("beta", q(1, 3))]);
    let (m, v) = Family::Biangle.final_display().parse(&pr).unwrap();
    let mut pair = PearsonPair::from_gradient_form(&m, &v, Provenance::Manual).unwrap();
    assert!(verify_divergence_form(&mut pair, &sys).unwrap().passed);
    let op = build_operator(&pair).unwrap();
    let shown = reference_op(Family::Biangle, &pr);
    let two = qi(2);
    assert_eq!(shown.c_xx, op.c_xx.scale(&two));
    assert_eq!(shown.c_xy, op.c_xy.scale(&two));
    assert_eq!(shown.c_yy, op.c_yy.scale(&two));
    assert_eq!(shown.c_x, op.c_x.scale(&two));
    assert_eq!(shown.c_y, op.c_y.scale(&two));
    // The registered decomposition already sits at the displayed scale.
    assert_eq!(pair_op(Family::Biangle, &pr, &sys), shown);
}

#[test]
fn biangle_eigenvalue_constant_is_three_not_five() {
    let (pr, sys) = setup(Family::Biangle, &[("alpha", qi(1)), ("beta", qi(1))]);
    let op = pair_op(Family::Biangle, &pr, &sys);
    let basis = KoornwinderBasis::new(&sys, 5).unwrap();
    let formulas = Family::Biangle.eigen_formulas();
    let shown = formulas.iter().find(|f| f.reference).unwrap();
    let fixed = formulas.iter().find(|f| !f.reference).unwrap();
    let mut shown_hits = 0;
    for n in 0..=5usize {
        for m in 0..=n {
            let got = basis.expand(&op.apply(basis.get(n, m).unwrap())).unwrap();
            assert_eq!(got, (fixed.eval)(n, m, &pr), "({n}, {m})");
            shown_hits += usize::from(got == (shown.eval)(n, m, &pr));
        }
    }
    // The two formulas agree only when n = m.
    assert_eq!(shown_hits, 6);
}

#[test]
fn laguerre_laguerre_raw_and_diagonal_errata() {
    let (pr, sys) = setup(Family::LaguerreLaguerre, &[("alpha", qi(3)), ("beta", qi(1))]);
    assert!(!display_verdict(Family::LaguerreLaguerre, "raw", &pr, &sys));
    assert!(display_verdict(Family::LaguerreLaguerre, "raw_corrected", &pr, &sys));
    assert!(!display_verdict(Family::LaguerreLaguerre, "diagonal", &pr, &sys));
    assert!(display_verdict(Family::LaguerreLaguerre, "diagonal_corrected", &pr, &sys));
}

#[test]
fn laguerre_laguerre_displayed_operator_comes_from_unverified_diagonal_pair() {
    let (pr, sys) = setup(Family::LaguerreLaguerre, &[("alpha", qi(2)), ("beta", q(1, 2))]);
    let d = Family::LaguerreLaguerre
        .reference_displays()
        .into_iter()
        .find(|d| d.label == "diagonal")
        .unwrap();
    let (m, v) = d.parse(&pr).unwrap();
    let mut pair = PearsonPair::from_gradient_form(&m, &v, Provenance::Manual).unwrap();
    assert!(!verify_divergence_form(&mut pair, &sys).unwrap().passed);
    let shown = reference_op(Family::LaguerreLaguerre, &pr);
    assert_eq!((&shown.c_x, &shown.c_y), (&pair.psi1, &pair.psi2));
}

#[test]
fn laguerre_laguerre_band_from_final_pair() {
    // Observed pattern: (n-1, m), (n, m), (n+1, m) with -n at (n+1, m).
    let (pr, sys) = setup(Family::LaguerreLaguerre, &[("alpha", qi(2)), ("beta", q(1, 2))]);
    let op = pair_op(Family::LaguerreLaguerre, &pr, &sys);
    let basis = KoornwinderBasis::new(&sys, 6).unwrap();
    for n in 0..=5usize {
        for m in 0..=n {
            let got = basis.expand(&op.apply(basis.get(n, m).unwrap())).unwrap();
            assert!(got.keys().all(|&(d, k)| k == m && d + 1 >= n && d <= n + 1), "({n}, {m}): {got:?}");
            assert_eq!(got.get(&(n + 1, m)).cloned().unwrap_or_default(), -qi(n as i64));
        }
    }
    let want = BTreeMap::from([((1, 0), qi(-5)), ((2, 0), qi(-1))]);
    assert_eq!(basis.expand(&op.apply(basis.get(1, 0).unwrap())).unwrap(), want);
}

#[test]
fn laguerre_jacobi_auxiliary_needs_corrected_c() {
    let (pr, _) = setup(Family::LaguerreJacobi, &[]);
    let e = RationalFunction2::from_poly(Family::LaguerreJacobi.decomposition_input(&pr).unwrap().e());
    let [a, b, c] = Family::LaguerreJacobi.reference_auxiliaries()[0].map(|s| parse_ratfn(s, &pr).unwrap());
    let det = |c: &RationalFunction2| &(&(&a * c) - &(&b * &b)) * &e;
    assert_ne!(det(&c), RationalFunction2::one());
    let c2 = parse_ratfn("(x^2-y^2+x)/(x(x^2-y^2))", &pr).unwrap();
    assert_eq!(det(&c2), RationalFunction2::one());
}

#[test]
fn laguerre_jacobi_operator_lowers_degree() {
    // The weight does not vanish on y = -x and Φ n ≠ 0 there, so L is not
    // self-adjoint and images pick up lower-degree terms.
    let (pr, sys) = setup(Family::LaguerreJacobi, &[("alpha", qi(1)), ("beta", qi(1))]);
    let op = pair_op(Family::LaguerreJacobi, &pr, &sys);
    let shown = reference_op(Family::LaguerreJacobi, &pr);
    assert_eq!(op, shown);
    let pair = Family::LaguerreJacobi.operator_pair(&sys, &pr).unwrap();
    let x = parse_poly("x", &pr).unwrap();
    let on_edge = |p: &koornwinder::BivariatePoly| p.eval(&qi(1), &qi(-1));
    assert_eq!(on_edge(&(&pair.phi11 + &pair.phi12)), on_edge(&x.scale(&qi(2))));
    let basis = KoornwinderBasis::new(&sys, 2).unwrap();
    let got = basis.expand(&op.apply(basis.get(1, 0).unwrap())).unwrap();
    assert_eq!(got, BTreeMap::from([((0, 0), qi(-2)), ((1, 0), qi(-1))]));
}

#[test]
fn report_flags_reproduce() {
    for (family, expected) in [
        ("ball", vec!["ball.auxiliary_identity"]),
        (
            "biangle",
            vec!["biangle.symmetrizer_sign", "biangle.operator_scale", "biangle.eigenvalue"],
        ),
        (
            "laguerre_jacobi",
            vec!["laguerre_jacobi.auxiliary_identity", "laguerre_jacobi.expansion"],
        ),
        (
            "laguerre_laguerre",
            vec!["laguerre_laguerre.delta2", "laguerre_laguerre.diagonal", "laguerre_laguerre.expansion"],
        ),
    ] {
        let cfg: RunConfig = serde_json::from_str(&format!(r#"{{"family": "{family}", "nmax": 4}}"#)).unwrap();
        let rep = report_all(&cfg.resolve().unwrap()).unwrap();
        let observed: Vec<&str> = rep
            .sections
            .errata
            .unwrap()
            .into_iter()
            .filter(|e| e.observed)
            .map(|e| e.id)
            .collect();
        assert_eq!(observed, expected, "{family}");
    }
}
