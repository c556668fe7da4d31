//! Randomized checks of the structural invariants, module by module.

use koornwinder::algebra::{Monomial, Poly2, RatFn2, Var};
use koornwinder::families::{Family, Params};
use koornwinder::koornwinder::{
    build_polynomial, factored_weight, grad_log_weight, KoornwinderBasis, KoornwinderSystem, RhoFunction,
};
use koornwinder::operator::build_operator;
use koornwinder::pearson::{raw_system, verify_divergence_form, PearsonPair, Provenance};
use koornwinder::quadrature::{gauss_rule_with, BigFloat, InnerProduct, Precision};
use koornwinder::scalar::{q, qi, rational_to_f64};
use koornwinder::weights::{
    class_of, jacobi01, jacobi_sym, laguerre, moments, monic_poly, monic_recurrence, pearson_identity_holds,
    rho_modified, UnivariateWeight,
};
use koornwinder::{UniPoly, Q};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |v| !v.is_zero())
}

// Parameters strictly above -1.
fn param() -> impl Strategy<Value = Q> {
    (1i64..=24, 1i64..=4).prop_map(|(k, d)| q(k, d) - qi(1))
}

fn poly(max_deg: u32) -> impl Strategy<Value = Poly2<Q>> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, rational()), 0..8)
        .prop_map(move |ts| Poly2::from_terms(ts.into_iter().filter(|(i, j, _)| i + j <= max_deg)))
}

fn point() -> impl Strategy<Value = (Q, Q)> {
    (rational(), rational())
}

fn family_case(families: &'static [Family]) -> impl Strategy<Value = (Family, Params)> {
    (0..families.len(), param(), param(), param()).prop_map(move |(i, a, b, g)| {
        let f = families[i];
        let a = if f == Family::LaguerreLaguerre && a.clone() - b.clone() <= qi(-1) {
            b.clone()
        } else {
            a
        };
        let vals: Vec<(&str, Q)> = [("alpha", a), ("beta", b), ("gamma", g)]
            .into_iter()
            .filter(|(k, _)| f.defaults().iter().any(|(d, _)| d == k))
            .collect();
        (f, f.params_from(&vals).unwrap())
    })
}

const ALL: &[Family] = &[
    Family::Ball,
    Family::Biangle,
    Family::Triangle,
    Family::LaguerreJacobi,
    Family::LaguerreLaguerre,
    Family::Tensor,
];

const CLASSICAL: &[Family] = &[Family::Ball, Family::Biangle, Family::Triangle, Family::Tensor];

fn univariate(kind: usize, a: &Q, b: &Q) -> UnivariateWeight {
    match kind {
        0 => jacobi_sym(a, b).unwrap(),
        1 => jacobi01(a, b).unwrap(),
        _ => laguerre(a).unwrap(),
    }
}

fn interior_samples(sys: &KoornwinderSystem, extra: &[(Q, Q)]) -> Vec<(Q, Q)> {
    let mut pts = sys.domain.interior_points();
    pts.extend(extra.iter().filter(|(x, y)| sys.domain.contains(x, y)).cloned());
    pts
}

mod algebra {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn product_rule(p in poly(6), r in poly(6)) {
            for v in [Var::X, Var::Y] {
                let lhs = (&p * &r).partial(v);
                let rhs = &(&p.partial(v) * &r) + &(&p * &r.partial(v));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn mixed_partials_commute(p in poly(6)) {
            prop_assert_eq!(p.dx().dy(), p.dy().dx());
        }

        #[test]
        fn sum_then_difference_is_exact(p in poly(6), r in poly(6)) {
            prop_assert_eq!(&(&p + &r) - &r, p);
        }

        #[test]
        fn canonical_form_is_stable_and_keeps_values(
            p in poly(3),
            d in poly(3),
            s in poly(2),
            pts in prop::collection::vec(point(), 10),
        ) {
            prop_assume!(!d.is_zero() && !s.is_zero());
            let (num, den) = (&p * &s, &d * &s);
            let r = RatFn2::new(num.clone(), den.clone()).unwrap();
            prop_assert_eq!(r.canonicalize(), r.clone());
            for (x, y) in pts {
                let dv = den.eval(&x, &y);
                if dv.is_zero() {
                    continue;
                }
                prop_assert_eq!(r.eval(&x, &y), Some(num.eval(&x, &y) / dv));
            }
        }
    }
}

mod weights {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn pearson_identity_for_families(kind in 0usize..3, a in param(), b in param()) {
            prop_assert!(pearson_identity_holds(&univariate(kind, &a, &b)));
        }

        #[test]
        fn pearson_identity_after_rho_modification((f, pr) in family_case(ALL), m in 0usize..5) {
            let sys = f.system(&pr).unwrap();
            let u = rho_modified(&sys.w1, &sys.rho, m).unwrap();
            prop_assert!(pearson_identity_holds(&u), "{} m = {}", f, m);
        }

        #[test]
        fn recurrence_is_orthogonal_to_lower_powers(kind in 0usize..3, a in param(), b in param()) {
            let w = univariate(kind, &a, &b);
            let mom = moments(&w, 10).unwrap();
            for n in 1..=5usize {
                let p = monic_poly(&w, n).unwrap();
                for k in 0..n {
                    let s = (0..=n).fold(Q::zero(), |acc, j| acc + p.coeff(j) * mom[j + k].clone());
                    prop_assert!(s.is_zero(), "n = {}, k = {}", n, k);
                }
            }
        }

        #[test]
        fn recurrence_coefficients_positive(kind in 0usize..3, a in param(), b in param()) {
            let rec = monic_recurrence(&univariate(kind, &a, &b), 6).unwrap();
            prop_assert!(rec.c.iter().all(|c| c.is_positive()));
        }

        #[test]
        fn class_rises_by_one_for_linear_rho(a in param(), b in param(), r0 in 2i64..6, m in 0usize..5) {
            // ρ = x + r0 is positive on [-1, 1] and does not divide φ₁ = 1 - x².
            let w = jacobi_sym(&a, &b).unwrap();
            let s1 = class_of(&w.phi, &w.psi).unwrap();
            let u = rho_modified(&w, &RhoFunction::case_one(qi(1), qi(r0)).unwrap(), m).unwrap();
            prop_assert_eq!(class_of(&u.phi, &u.psi).unwrap(), s1 + 1);
        }

        #[test]
        fn class_bounds_for_quadratic_rho(a in param(), b in param(), c in 2i64..6, m in 0usize..5) {
            // ρ² = c - x² is positive on [-1, 1] and does not divide φ₁.
            let w = jacobi_sym(&a, &b).unwrap();
            let s1 = class_of(&w.phi, &w.psi).unwrap();
            let rho = RhoFunction::case_two(UniPoly::new(vec![qi(c), qi(0), qi(-1)])).unwrap();
            let u = rho_modified(&w, &rho, m).unwrap();
            let cm = class_of(&u.phi, &u.psi).unwrap();
            prop_assert!(s1 + 1 <= cm && cm <= s1 + 2, "class {} from {}", cm, s1);
        }
    }
}

mod koornwinder_basis {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn monic_with_expected_leading_monomials((f, pr) in family_case(ALL)) {
            let n_top = 8;
            let basis = KoornwinderBasis::new(&f.system(&pr).unwrap(), n_top).unwrap();
            let mut leads = std::collections::BTreeSet::new();
            for n in 0..=n_top {
                for m in 0..=n {
                    let (mono, c) = basis.get(n, m).unwrap().leading().unwrap();
                    prop_assert_eq!(mono, Monomial::new((n - m) as u32, m as u32));
                    prop_assert_eq!(c, qi(1));
                    leads.insert(mono);
                }
            }
            // Distinct leading monomials of every degree up to N span Π_N.
            prop_assert_eq!(leads.len(), (n_top + 1) * (n_top + 2) / 2);
        }

        #[test]
        fn constant_rho_gives_tensor_products(a in param(), b in param()) {
            let pr = Family::Tensor.params_from(&[("alpha", a), ("beta", b)]).unwrap();
            let sys = Family::Tensor.system(&pr).unwrap();
            for n in 0..=6usize {
                for m in 0..=n {
                    let px = Poly2::from_x(&monic_poly(&sys.w1, n - m).unwrap());
                    let qy = Poly2::from_y(&monic_poly(&sys.w2, m).unwrap());
                    prop_assert_eq!(build_polynomial(&sys, n, m).unwrap(), &px * &qy);
                }
            }
        }

        #[test]
        fn log_gradient_matches_finite_differences(
            (f, pr) in family_case(ALL),
            extra in prop::collection::vec(point(), 30),
        ) {
            let sys = f.system(&pr).unwrap();
            let fw = factored_weight(&sys).unwrap();
            let g = grad_log_weight(&sys).unwrap();
            let step = q(1, 50);
            let h = 1e-6;
            for (x, y) in interior_samples(&sys, &extra) {
                let near = [(&x + &step, y.clone()), (&x - &step, y.clone()), (x.clone(), &y + &step), (x.clone(), &y - &step)];
                if !near.iter().all(|(a, b)| sys.domain.contains(a, b)) {
                    continue;
                }
                let (xf, yf) = (rational_to_f64(&x), rational_to_f64(&y));
                let w0 = fw.eval_f64(xf, yf);
                let dx = (fw.eval_f64(xf + h, yf) - fw.eval_f64(xf - h, yf)) / (2.0 * h * w0);
                let dy = (fw.eval_f64(xf, yf + h) - fw.eval_f64(xf, yf - h)) / (2.0 * h * w0);
                for (num, exact) in [(dx, &g.v[0]), (dy, &g.v[1])] {
                    let e = rational_to_f64(&exact.eval(&x, &y).unwrap());
                    prop_assert!((num - e).abs() <= 1e-5 * (1.0 + e.abs()), "{} at ({}, {}): {} vs {}", f, x, y, num, e);
                }
            }
        }

        #[test]
        fn even_second_weight_gives_parity(b in param(), t in rational()) {
            let w2 = jacobi_sym(&b, &b).unwrap();
            for m in 0..=8usize {
                let qm = monic_poly(&w2, m).unwrap();
                let sign = if m % 2 == 0 { qi(1) } else { qi(-1) };
                prop_assert_eq!(qm.eval(&-t.clone()), sign * qm.eval(&t));
            }
        }
    }
}

mod pearson {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn symmetrized_pairs_are_symmetric_and_verified((f, pr) in family_case(ALL)) {
            let sys = f.system(&pr).unwrap();
            let p = f.symmetrizer_pair(&sys, &pr).unwrap();
            prop_assert!(p.phi().is_symmetric());
            prop_assert!(p.is_verified());
        }

        #[test]
        fn decomposition_determinant_identity((f, pr) in family_case(ALL)) {
            let inp = f.decomposition_input(&pr).unwrap();
            prop_assert_eq!(inp.determinant_product().unwrap(), RatFn2::one());
            let sys = f.system(&pr).unwrap();
            prop_assert!(f.operator_pair(&sys, &pr).unwrap().is_verified());
        }

        #[test]
        fn gradient_divergence_round_trip((f, pr) in family_case(ALL)) {
            let sys = f.system(&pr).unwrap();
            let p = f.operator_pair(&sys, &pr).unwrap();
            let mut back = PearsonPair::from_gradient_form(&p.phi(), &p.gradient_rhs(), Provenance::Manual).unwrap();
            prop_assert!(verify_divergence_form(&mut back, &sys).unwrap().passed);
            prop_assert_eq!((&back.psi1, &back.psi2), (&p.psi1, &p.psi2));
        }

        #[test]
        fn raw_phi_nonsingular_inside(
            (f, pr) in family_case(ALL),
            extra in prop::collection::vec(point(), 40),
        ) {
            let sys = f.system(&pr).unwrap();
            let det = raw_system(&sys).unwrap().phi.det();
            let pts = interior_samples(&sys, &extra);
            prop_assert!(pts.len() >= 10);
            for (x, y) in pts {
                let v = det.eval(&x, &y).unwrap();
                prop_assert!(!v.is_zero(), "{} at ({}, {})", f, x, y);
            }
        }
    }
}

mod operator {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn classical_families_preserve_degree((f, pr) in family_case(CLASSICAL)) {
            let sys = f.system(&pr).unwrap();
            let op = build_operator(&f.operator_pair(&sys, &pr).unwrap()).unwrap();
            let basis = KoornwinderBasis::new(&sys, 8).unwrap();
            for n in 0..=8usize {
                for m in 0..=n {
                    let e = basis.expand(&op.apply(basis.get(n, m).unwrap())).unwrap();
                    prop_assert!(e.keys().all(|k| k.0 == n), "{} ({}, {})", f, n, m);
                }
            }
        }

        #[test]
        fn eigenvalue_formulas_hold((f, pr) in family_case(CLASSICAL)) {
            let sys = f.system(&pr).unwrap();
            let op = build_operator(&f.operator_pair(&sys, &pr).unwrap()).unwrap();
            let basis = KoornwinderBasis::new(&sys, 5).unwrap();
            // The biangle keeps the corrected constant; the displayed one has its own regression test.
            let formula = f.eigen_formulas().into_iter().find(|e| f != Family::Biangle || !e.reference).unwrap();
            for n in 0..=5usize {
                for m in 0..=n {
                    let got = basis.expand(&op.apply(basis.get(n, m).unwrap())).unwrap();
                    prop_assert_eq!(got, (formula.eval)(n, m, &pr), "{} ({}, {})", f, n, m);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn apply_is_linear((f, pr) in family_case(ALL), p in poly(5), r in poly(5), a in rational(), b in nonzero_rational()) {
            let sys = f.system(&pr).unwrap();
            let op = build_operator(&f.operator_pair(&sys, &pr).unwrap()).unwrap();
            let lhs = op.apply(&(&p.scale(&a) + &r.scale(&b)));
            prop_assert_eq!(lhs, &op.apply(&p).scale(&a) + &op.apply(&r).scale(&b));
        }
    }
}

mod quadrature {
    use super::*;

    fn close(a: &BigFloat, b: &BigFloat, scale: f64, tol: f64) -> bool {
        (a.clone() - b.clone()).abs().to_f64() <= tol * scale.max(1e-300)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn gauss_rules_are_exact(kind in 0usize..3, a in param(), b in param(), n in 1usize..=10) {
            let w = univariate(kind, &a, &b);
            let prec = Precision::default();
            let bits = prec.bits();
            let rule = gauss_rule_with(&w, n, bits, BigFloat::from_i64(1, bits)).unwrap();
            let mom = moments(&w, 2 * n + 1).unwrap();
            let tol = 10f64.powi(-(prec.digits() as i32 - 8));
            for (k, m) in mom.iter().take(2 * n).enumerate() {
                let got = rule.integrate_poly(&UniPoly::monomial(qi(1), k), bits);
                // Odd symmetric moments vanish; measure them against sqrt(μ_{k-1} μ_{k+1}).
                let scale = if m.is_zero() {
                    BigFloat::from_q(&(mom[k - 1].clone() * mom[k + 1].clone()), bits).sqrt()
                } else {
                    BigFloat::from_q(m, bits).abs()
                };
                prop_assert!(close(&got, &BigFloat::from_q(m, bits), scale.to_f64(), tol), "{} n = {} k = {}", w.name, n, k);
            }
        }

        #[test]
        fn inner_product_symmetric_and_linear(
            (f, pr) in family_case(ALL),
            p in poly(3),
            r in poly(3),
            s in poly(3),
            a in rational(),
            b in rational(),
        ) {
            let sys = f.system(&pr).unwrap();
            let ip = InnerProduct::new(&sys, 6, Precision::default()).unwrap();
            let pr_ = ip.eval(&p, &r).unwrap();
            let rp = ip.eval(&r, &p).unwrap();
            let scale = 1.0 + pr_.abs().to_f64();
            prop_assert!(close(&pr_, &rp, scale, 1e-28));
            let combo = &p.scale(&a) + &s.scale(&b);
            let lhs = ip.eval(&combo, &r).unwrap();
            let bits = Precision::default().bits();
            let rhs = BigFloat::from_q(&a, bits) * pr_ + BigFloat::from_q(&b, bits) * ip.eval(&s, &r).unwrap();
            let scale = 1.0 + lhs.abs().to_f64() + rhs.abs().to_f64();
            prop_assert!(close(&lhs, &rhs, scale, 1e-26));
        }

        #[test]
        fn norms_are_positive((f, pr) in family_case(ALL)) {
            let sys = f.system(&pr).unwrap();
            let basis = KoornwinderBasis::new(&sys, 4).unwrap();
            let ip = InnerProduct::new(&sys, 8, Precision::default()).unwrap();
            for (_, p) in basis.iter() {
                let v = ip.eval(p, p).unwrap();
                prop_assert!(!v.is_negative() && !v.is_zero());
            }
        }
    }
}
