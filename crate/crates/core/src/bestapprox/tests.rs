use super::*;
use crate::functions::lookup;
use approx::assert_abs_diff_eq;

const FULL: (f64, f64) = (-1.0, 1.0);

fn w(a: f64, b: f64, p: f64) -> WeightParams {
    WeightParams::new(a, b, p).unwrap()
}

#[test]
fn l2_examples() {
    let sq = lookup("mono2").unwrap();
    let r = best_approx_l2(&sq, 2, FULL, &w(0.0, 0.0, 2.0)).unwrap();
    assert_abs_diff_eq!(r.error, (8.0f64 / 45.0).sqrt(), epsilon = 1e-10);
    assert_abs_diff_eq!(r.minimizer.eval(0.3), 1.0 / 3.0, epsilon = 1e-12);
    assert_eq!(r.certificate, Certificate::OrthogonalProjection);
    let r = best_approx_l2(&sq, 3, FULL, &w(0.0, 0.0, 2.0)).unwrap();
    assert!(r.error <= 1e-12);
    let x = lookup("mono1").unwrap();
    let r = best_approx_l2(&x, 1, FULL, &w(0.0, 0.0, 2.0)).unwrap();
    assert_abs_diff_eq!(r.error, (2.0f64 / 3.0).sqrt(), epsilon = 1e-10);
    assert!(best_approx_l2(&x, 1, FULL, &w(0.0, 0.0, 1.0)).is_err());
}

#[test]
fn minimax_examples() {
    let sq = lookup("mono2").unwrap();
    let r = best_approx_minimax(&sq, 2, FULL, &w(0.0, 0.0, f64::INFINITY)).unwrap();
    assert_abs_diff_eq!(r.error, 0.5, epsilon = 1e-9);
    assert!(r.converged);
    let x = lookup("mono1").unwrap();
    let r = best_approx_minimax(&x, 1, FULL, &w(0.0, 0.0, f64::INFINITY)).unwrap();
    assert_abs_diff_eq!(r.error, 1.0, epsilon = 1e-10);
    let cube = lookup("mono3").unwrap();
    let r = best_approx_minimax(&cube, 4, FULL, &w(1.0, 0.5, f64::INFINITY)).unwrap();
    assert!(r.error <= 1e-10);
}

#[test]
fn minimax_of_abs_decays() {
    let abs = lookup("abs").unwrap();
    let sup = w(0.0, 0.0, f64::INFINITY);
    let e8 = best_approx_minimax(&abs, 9, FULL, &sup).unwrap();
    let e16 = best_approx_minimax(&abs, 17, FULL, &sup).unwrap();
    assert!(e8.converged && e16.converged);
    // E_n(|x|) ~ 0.2802/n for even degree n - 1
    assert!(e8.error > e16.error);
    assert!((e8.error / e16.error - 2.0).abs() < 0.2, "{} {}", e8.error, e16.error);
    assert!(e16.lower_bound.unwrap() <= e16.error);
}

#[test]
fn lp_examples() {
    let cube = lookup("mono3").unwrap();
    let l2 = best_approx_l2(&cube, 3, FULL, &w(0.0, 0.0, 2.0)).unwrap();
    let lp = best_approx_lp(&cube, 3, FULL, &w(0.0, 0.0, 2.0)).unwrap();
    assert!((l2.error - lp.error).abs() <= 1e-7 * l2.error);
    let r = best_approx_lp(&cube, 4, FULL, &w(0.5, 0.0, 1.0)).unwrap();
    assert!(r.error <= 1e-9);
    let abs = lookup("abs").unwrap();
    let r = best_approx_lp(&abs, 1, FULL, &w(0.0, 0.0, 1.0)).unwrap();
    assert_abs_diff_eq!(r.error, 0.5, epsilon = 1e-8);
    assert_abs_diff_eq!(r.minimizer.eval(0.0), 0.5, epsilon = 1e-6);
}

#[test]
fn quasi_examples() {
    let sq = lookup("mono2").unwrap();
    let half = w(0.0, 0.0, 0.5);
    let r = best_approx_quasi(&sq, 3, FULL, &half).unwrap();
    assert!(r.error <= 1e-9);
    assert_eq!(r.certificate, Certificate::HeuristicUpperBound);
    let abs = lookup("abs").unwrap();
    let r = best_approx_quasi(&abs, 1, FULL, &half).unwrap();
    let l1 = best_approx_lp(&abs, 1, FULL, &w(0.0, 0.0, 1.0)).unwrap();
    let bound = residual_norm(&abs, &l1.minimizer, FULL, &half, 1e-10).value;
    assert!(r.error <= bound + 1e-12);
}

#[test]
fn local_examples() {
    let x = lookup("mono1").unwrap();
    let sup = w(0.0, 0.0, f64::INFINITY);
    // x0 = 0.75 with hφ(x0)/2 = 0.25
    let h = 0.5 / crate::weights::phi(0.75);
    let r = local_best_approx(&x, 1, 0.75, h, &sup).unwrap();
    assert_abs_diff_eq!(r.error, 0.25, epsilon = 1e-10);
    let sq = lookup("mono2").unwrap();
    let r = local_best_approx(&sq, 3, 0.1, 0.8, &w(1.0, 1.0, 2.0)).unwrap();
    assert!(r.error <= 1e-12);
    assert!(local_best_approx(&x, 1, 0.9, 1.5, &sup).is_err());
}

#[test]
fn bernstein_examples() {
    let sup = w(0.0, 0.0, f64::INFINITY);
    let x = Polynomial::chebyshev_t(1);
    assert_abs_diff_eq!(bernstein_ratio(&x, 2, 1, &sup).unwrap(), 0.5, epsilon = 1e-12);
    for m in [3usize, 10, 40] {
        let t = Polynomial::chebyshev_t(m);
        let ratio = bernstein_ratio(&t, m + 1, 1, &sup).unwrap();
        assert_abs_diff_eq!(ratio, m as f64 / (m + 1) as f64, epsilon = 1e-8);
    }
    let c = Polynomial::chebyshev_t(0);
    assert_eq!(bernstein_ratio(&c, 3, 2, &sup).unwrap(), 0.0);
    assert!(bernstein_ratio(&Polynomial::zero(FULL), 3, 1, &sup).is_err());
}
