use proptest::prelude::*;

use jacobi_approx::bestapprox::{bernstein_ratio, best_approx, Polynomial};
use jacobi_approx::cli::cache_io::{parse_sequence, serialize_sequence};
use jacobi_approx::functions::lookup;
use jacobi_approx::harness::{verify_direct, ErrorSequence, HarnessSettings, SequenceEntry};
use jacobi_approx::moduli::{averaged_modulus, weighted_modulus, ModulusQuery};
use jacobi_approx::quadrature::{gauss_jacobi_rule, jacobi_moments};
use jacobi_approx::weights::{dom_interval, solve_y};
use jacobi_approx::{FunctionSpec, WeightParams};

fn p_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(1.0), Just(2.0), Just(3.0), Just(f64::INFINITY)]
}

fn corpus_name() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("abs"), Just("abs_1_5"), Just("runge"), Just("sin5"), Just("endpoint_0.75")]
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-300
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn weight_domain_follows_jp(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, p in p_strategy()) {
        let bound = if p.is_infinite() { 0.0 } else { -1.0 / p };
        let ok = alpha > bound && beta > bound;
        prop_assert_eq!(WeightParams::new(alpha, beta, p).is_ok(), ok);
    }

    #[test]
    fn domains_shrink_as_delta_grows(d1 in 0.01f64..2.0, d2 in 0.01f64..2.0) {
        let (small, large) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        prop_assert!(dom_interval(large).is_subset_of(&dom_interval(small)));
    }

    #[test]
    fn solve_y_stays_inside(x in -0.99f64..0.99, delta in 0.01f64..2.0) {
        if dom_interval(delta).contains(x) {
            let y = solve_y(x, delta).unwrap();
            prop_assert!((-1.0..=1.0).contains(&y));
        }
    }

    #[test]
    fn gauss_rules_are_exact_to_degree_2n_minus_1(
        n in 1usize..24,
        a in -0.9f64..4.0,
        b in -0.9f64..4.0,
        coeffs in prop::collection::vec(-1.0f64..1.0, 48),
    ) {
        let rule = gauss_jacobi_rule(n, a, b).unwrap();
        let m = jacobi_moments(2 * n, a, b);
        let degree = 2 * n;
        let exact: f64 = coeffs[..degree].iter().zip(&m).map(|(c, mo)| c * mo).sum();
        let scale: f64 = coeffs[..degree].iter().zip(&m).map(|(c, mo)| (c * mo).abs()).sum();
        let approx = rule.apply(|x| coeffs[..degree].iter().rev().fold(0.0, |acc, c| acc * x + c));
        prop_assert!((approx - exact).abs() <= 1e-12 * scale);
    }

    #[test]
    fn bernstein_ratio_is_scale_invariant(
        coeffs in prop::collection::vec(-1.0f64..1.0, 2..10),
        lambda in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
    ) {
        let poly = Polynomial::new(coeffs, (-1.0, 1.0)).unwrap();
        prop_assume!(!poly.is_zero());
        let w = WeightParams::new(0.0, 0.0, f64::INFINITY).unwrap();
        let n = poly.len();
        let a = bernstein_ratio(&poly, n, 1, &w).unwrap();
        let b = bernstein_ratio(&poly.scaled(lambda), n, 1, &w).unwrap();
        prop_assert!(close(a, b, 1e-9));
        prop_assert!(a <= 1.0 + 1e-9);
    }

    #[test]
    fn cache_text_round_trips(
        errors in prop::collection::vec(prop_oneof![0.0f64..1.0, Just(f64::NAN), Just(1e-300)], 1..20),
        alpha in 0.0f64..2.0,
    ) {
        let entries = errors
            .iter()
            .enumerate()
            .map(|(i, &e)| SequenceEntry {
                n: i + 1,
                error: e,
                certificate: None,
                converged: i % 2 == 0,
                note: (i % 3 == 0).then(|| format!("note {i}")),
            })
            .collect();
        let seq = ErrorSequence {
            spec_name: "runge".into(),
            params: WeightParams::new(alpha, 0.5, 2.0).unwrap(),
            interval: (-1.0, 0.5),
            entries,
        };
        let (key, back) = parse_sequence(&serialize_sequence(&seq, "abc")).unwrap();
        prop_assert_eq!(key, "abc");
        prop_assert_eq!(back.params, seq.params);
        for (x, y) in back.entries.iter().zip(&seq.entries) {
            prop_assert!(x.error.to_bits() == y.error.to_bits() || (x.error.is_nan() && y.error.is_nan()));
            prop_assert_eq!(&x.note, &y.note);
            prop_assert_eq!(x.converged, y.converged);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn modulus_is_homogeneous(
        name in corpus_name(),
        p in p_strategy(),
        k in 1usize..4,
        t in 0.05f64..1.0,
        lambda in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
    ) {
        let f = lookup(name).unwrap();
        let w = WeightParams::new(0.5, 0.0, p).unwrap();
        let q = ModulusQuery::new(f.clone(), k, 0, t, w);
        let base = weighted_modulus(&q).unwrap().value;
        let scaled = weighted_modulus(&ModulusQuery::new(f.scaled(lambda), k, 0, t, w)).unwrap().value;
        prop_assert!(close(scaled, lambda.abs() * base, 1e-10));
    }

    #[test]
    fn modulus_is_monotone_and_dominates_average(
        name in corpus_name(),
        p in p_strategy(),
        k in 1usize..4,
        t in 0.05f64..0.5,
    ) {
        let f = lookup(name).unwrap();
        let w = WeightParams::new(0.0, 0.0, p).unwrap();
        let q = ModulusQuery::new(f, k, 0, t, w);
        let small = weighted_modulus(&q).unwrap().value;
        let large = weighted_modulus(&q.with_t(2.0 * t)).unwrap().value;
        prop_assert!(small <= large * (1.0 + 1e-8));
        let avg = averaged_modulus(&q).unwrap().value;
        prop_assert!(avg <= small * (1.0 + 1e-8) + 1e-14);
    }

    #[test]
    fn polynomials_are_annihilated(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..4),
        p in p_strategy(),
        t in 0.05f64..1.0,
    ) {
        let f = FunctionSpec::polynomial("poly", &coeffs);
        let w = WeightParams::new(0.0, 0.0, p).unwrap();
        let m = weighted_modulus(&ModulusQuery::new(f, coeffs.len(), 0, t, w)).unwrap().value;
        prop_assert!(m <= 1e-10);
    }

    #[test]
    fn best_approximation_is_homogeneous_and_decreasing(
        name in corpus_name(),
        p in prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY)],
        n in 1usize..10,
        lambda in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
    ) {
        let f = lookup(name).unwrap();
        let w = WeightParams::new(0.0, 0.5, p).unwrap();
        let e = best_approx(&f, n, (-1.0, 1.0), &w).unwrap().error;
        let e_next = best_approx(&f, n + 1, (-1.0, 1.0), &w).unwrap().error;
        let scaled = best_approx(&f.scaled(lambda), n, (-1.0, 1.0), &w).unwrap().error;
        prop_assert!(close(scaled, lambda.abs() * e, 1e-6));
        prop_assert!(e_next <= e * (1.0 + 1e-8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn direct_ratios_ignore_scaling(
        name in corpus_name(),
        p in prop_oneof![Just(2.0), Just(f64::INFINITY)],
        lambda in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
    ) {
        let settings = HarnessSettings::default();
        let w = WeightParams::new(0.0, 0.0, p).unwrap();
        let f = lookup(name).unwrap();
        let a = verify_direct(std::slice::from_ref(&f), &[w], 2, 0, 2..=12, &settings).unwrap();
        let b = verify_direct(&[f.scaled(lambda)], &[w], 2, 0, 2..=12, &settings).unwrap();
        prop_assert_eq!(a.cases.len(), b.cases.len());
        for (x, y) in a.cases.iter().zip(&b.cases) {
            prop_assert!(close(x.ratio, y.ratio, 1e-5), "{} vs {}", x.ratio, y.ratio);
        }
    }
}
