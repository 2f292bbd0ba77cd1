//! Acceptance run: every criterion is evaluated at its stated tolerance and
//! time budget, and reported as one PASS/FAIL line. Exits non-zero when any
//! criterion fails.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use statrs::function::gamma::ln_gamma;

use jacobi_approx::bestapprox::{bernstein_ratio, best_approx, best_approx_l2, best_approx_lp, Polynomial};
use jacobi_approx::functions::lookup;
use jacobi_approx::harness::{
    compute_error_sequence, dyadic_grid, fit_decay, verify_appendix, verify_bernstein, verify_direct, verify_inverse,
    verify_inverse_smallp, verify_whitney, HarnessSettings, InequalityReport,
};
use jacobi_approx::moduli::{averaged_modulus, weighted_modulus, ModulusQuery};
use jacobi_approx::quadrature::{gauss_jacobi_rule, weighted_norm, NormOptions};
use jacobi_approx::weights::{mu, phi, solve_y, y_shifted};
use jacobi_approx::{FunctionSpec, WeightParams};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

const CORPUS: [&str; 5] = ["abs", "abs_1_5", "x_abs_x", "runge", "endpoint_0.75"];
const HALF: f64 = 0.5;
const INF: f64 = f64::INFINITY;

fn weight(a: f64, b: f64, p: f64) -> WeightParams {
    WeightParams::new(a, b, p).expect("valid weight")
}

fn corpus() -> Vec<FunctionSpec> {
    CORPUS.iter().map(|n| lookup(n).unwrap()).collect()
}

/// The parameter grid shared by the moduli and direct suites.
fn grid_params(p: f64) -> Vec<WeightParams> {
    [(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)].iter().map(|&(a, b)| weight(a, b, p)).collect()
}

fn grid_rs(p: f64) -> &'static [usize] {
    if p < 1.0 {
        &[0]
    } else {
        &[0, 1]
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

/// Summary of a harness report: passed, finite, stable, no failures.
fn sound(rep: &InequalityReport, what: &str) -> std::result::Result<(), String> {
    ensure(rep.failures.is_empty(), || format!("{what}: failures {:?}", rep.failures))?;
    ensure(rep.all_ratios_finite() && rep.fitted_constant.is_finite(), || format!("{what}: non-finite ratio"))?;
    let unstable: Vec<_> = rep.configs.iter().filter(|c| !c.stable).map(|c| c.label.clone()).collect();
    ensure(unstable.is_empty(), || format!("{what}: unstable {unstable:?}"))?;
    ensure(rep.passed, || format!("{what}: report not passed"))
}

// --- 1 -----------------------------------------------------------------

fn exact_values() -> Check {
    let x2 = lookup("mono2").map_err(e)?;
    let abs = lookup("abs").map_err(e)?;
    let full = (-1.0, 1.0);
    // ∫(x² - 1/3)² dx = 2/5 - 4/9 + 2/9
    let l2 = best_approx(&x2, 2, full, &weight(0.0, 0.0, 2.0)).map_err(e)?.error;
    ensure((l2 - (2.0 / 5.0 - 2.0 / 9.0f64).sqrt()).abs() <= 1e-8, || format!("E_2(x²)_2 = {l2}"))?;
    let sup = best_approx(&x2, 2, full, &weight(0.0, 0.0, INF)).map_err(e)?.error;
    ensure((sup - 0.5).abs() <= 1e-6, || format!("E_2(x²)_∞ = {sup}"))?;
    // the constant 1/2 leaves ∫ ||x| - 1/2| dx = 1/2
    let l1 = best_approx(&abs, 1, full, &weight(0.0, 0.0, 1.0)).map_err(e)?.error;
    ensure((l1 - 0.5).abs() <= 1e-6, || format!("E_1(|x|)_1 = {l1}"))?;
    for t in [0.1, 0.25, 0.5] {
        let w = weighted_modulus(&ModulusQuery::new(x2.clone(), 2, 0, t, weight(0.0, 0.0, INF))).map_err(e)?.value;
        // Δ²_{hφ} x² = 2h²φ², largest at x = 0 and h = t
        ensure((w - 2.0 * t * t).abs() <= 1e-6, || format!("ω_2(x², {t}) = {w}"))?;
    }
    let y = solve_y(0.0, 2.0).map_err(e)?;
    ensure((y + 0.5f64.sqrt()).abs() <= 1e-12, || format!("y(0; 2) = {y}"))?;
    Ok(format!("E_2 = {l2:.12}, {sup:.9}; E_1 = {l1:.9}; y = {y:.15}"))
}

// --- 2 -----------------------------------------------------------------

fn change_of_variable() -> Check {
    let mut worst_residual = 0.0f64;
    for delta in [0.1, 0.5, 1.0, 2.0] {
        let m = mu(delta);
        let xs: Vec<f64> = (0..1000).map(|i| -1.0 + 2.0 * i as f64 / 999.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| solve_y(x, delta)).collect::<Result<_, _>>().map_err(e)?;
        for (&x, &y) in xs.iter().zip(&ys) {
            worst_residual = worst_residual.max((y + delta * phi(y) / 2.0 - x).abs());
        }
        // (i) increasing, slope in (0, 2]
        for i in 1..xs.len() {
            let s = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            ensure(s > 0.0 && s <= 2.0 + 1e-6, || format!("δ = {delta}: slope {s} at x = {}", xs[i]))?;
        }
        let lo = -1.0 + 2.0 * m;
        // (ii) endpoints map onto Dom_δ
        let (ya, yb) = (solve_y(lo, delta).map_err(e)?, solve_y(1.0, delta).map_err(e)?);
        ensure((ya - (-1.0 + m)).abs() <= 1e-12 && (yb - (1.0 - m)).abs() <= 1e-12, || {
            format!("δ = {delta}: y maps [{lo}, 1] to [{ya}, {yb}]")
        })?;
        if 1.0 - lo < 1e-12 {
            continue;
        }
        let sub: Vec<f64> = (0..1000).map(|i| lo + (1.0 - lo) * i as f64 / 999.0).collect();
        let ysub: Vec<f64> = sub.iter().map(|&x| solve_y(x, delta)).collect::<Result<_, _>>().map_err(e)?;
        // (iii) slope at least 2/3 away from the left end
        for i in 1..sub.len() {
            let s = (ysub[i] - ysub[i - 1]) / (sub[i] - sub[i - 1]);
            ensure(s >= 2.0 / 3.0 - 1e-6, || format!("δ = {delta}: slope {s} < 2/3 at x = {}", sub[i]))?;
        }
        // (iv) shifted maps have slopes in [1/3, 3]
        for lambda in [-delta / 2.0, -delta / 4.0, 0.0, delta / 4.0, delta / 2.0] {
            let yl: Vec<f64> = sub.iter().map(|&x| y_shifted(x, delta, lambda)).collect::<Result<_, _>>().map_err(e)?;
            for i in 1..sub.len() {
                let s = (yl[i] - yl[i - 1]) / (sub[i] - sub[i - 1]);
                ensure((1.0 / 3.0 - 1e-6..=3.0 + 1e-6).contains(&s), || {
                    format!("δ = {delta}, λ = {lambda}: slope {s} at x = {}", sub[i])
                })?;
            }
        }
        // (v) distance bounds
        for (&x, &y) in sub.iter().zip(&ysub) {
            let right = 1.0 - y;
            let left = 1.0 + y;
            ensure(
                m + 2.0 * (1.0 - x) / 3.0 <= right + 1e-10
                    && right <= m + 2.0 * (1.0 - x) + 1e-10
                    && (1.0 + x) / 2.0 <= left + 1e-10
                    && left <= 1.0 + x + 1e-10,
                || format!("δ = {delta}: distance bounds fail at x = {x}"),
            )?;
        }
    }
    ensure(worst_residual <= 1e-12, || format!("defining-equation residual {worst_residual:e}"))?;
    Ok(format!("max residual {worst_residual:e}"))
}

// --- 3 -----------------------------------------------------------------

/// Gauss–Jacobi nodes and weights by Newton iteration on `P_n^{(a,b)}` with
/// the closed-form weights; an oracle independent of the library's
/// eigenvalue construction.
#[allow(clippy::approx_constant)] // fitted coefficients of the initial guesses
fn newton_gauss_jacobi(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let ab = a + b;
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n {
        z = match i {
            0 => {
                let an = a / nf;
                let bn = b / nf;
                let r1 = (1.0 + a) * (2.78 / (4.0 + nf * nf) + 0.768 * an / nf);
                let r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
                1.0 - r1 / r2
            }
            1 => {
                let r1 = (4.1 + a) / ((1.0 + a) * (1.0 + 0.156 * a));
                let r2 = 1.0 + 0.06 * (nf - 8.0) * (1.0 + 0.12 * a) / nf;
                let r3 = 1.0 + 0.012 * b * (1.0 + 0.25 * a.abs()) / nf;
                z - (1.0 - z) * r1 * r2 * r3
            }
            2 => {
                let r1 = (1.67 + 0.28 * a) / (1.0 + 0.37 * a);
                let r2 = 1.0 + 0.22 * (nf - 8.0) / nf;
                let r3 = 1.0 + 8.0 * b / ((6.28 + b) * nf * nf);
                z - (xs[0] - z) * r1 * r2 * r3
            }
            _ if i == n - 2 => {
                let r1 = (1.0 + 0.235 * b) / (0.766 + 0.119 * b);
                let r2 = 1.0 / (1.0 + 0.639 * (nf - 4.0) / (1.0 + 0.71 * (nf - 4.0)));
                let r3 = 1.0 / (1.0 + 20.0 * a / ((7.5 + a) * nf * nf));
                z + (z - xs[n - 4]) * r1 * r2 * r3
            }
            _ if i == n - 1 => {
                let r1 = (1.0 + 0.37 * b) / (1.67 + 0.28 * b);
                let r2 = 1.0 / (1.0 + 0.22 * (nf - 8.0) / nf);
                let r3 = 1.0 / (1.0 + 8.0 * a / ((6.28 + a) * nf * nf));
                z + (z - xs[n - 3]) * r1 * r2 * r3
            }
            _ => 3.0 * xs[i - 1] - 3.0 * xs[i - 2] + xs[i - 3],
        };
        // p1 = P_n(z), p2 = P_{n-1}(z) by the three-term recurrence
        let (mut p2, mut dp) = (0.0, 0.0);
        for _ in 0..100 {
            let mut p1 = (a - b + (2.0 + ab) * z) / 2.0;
            p2 = 1.0;
            for j in 2..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                let c = 2.0 * jf + ab;
                let num = (c - 1.0) * (a * a - b * b + c * (c - 2.0) * z) * p2
                    - 2.0 * (jf - 1.0 + a) * (jf - 1.0 + b) * c * p3;
                p1 = num / (2.0 * jf * (jf + ab) * (c - 2.0));
            }
            let c = 2.0 * nf + ab;
            dp = (nf * (a - b - c * z) * p1 + 2.0 * (nf + a) * (nf + b) * p2) / (c * (1.0 - z * z));
            let step = p1 / dp;
            z -= step;
            if step.abs() <= 1e-15 {
                break;
            }
        }
        xs[i] = z;
        let log_c = ln_gamma(a + nf) + ln_gamma(b + nf) - ln_gamma(nf + 1.0) - ln_gamma(nf + ab + 1.0);
        ws[i] = log_c.exp() * (2.0 * nf + ab) * 2f64.powf(ab) / (dp * p2);
    }
    (xs, ws)
}

fn quadrature_suite() -> Check {
    let mut worst = 0.0f64;
    for (a, b) in [(0.0, 0.0), (-0.5, -0.5), (1.0, 0.0), (2.5, 0.3)] {
        let (ox, ow) = newton_gauss_jacobi(48, a, b);
        let moment = |m: usize| -> (f64, f64) {
            let v: f64 = ox.iter().zip(&ow).map(|(x, w)| w * x.powi(m as i32)).sum();
            let scale: f64 = ox.iter().zip(&ow).map(|(x, w)| w * x.abs().powi(m as i32)).sum();
            (v, scale)
        };
        for n in [1usize, 2, 4, 8, 16, 32] {
            let rule = gauss_jacobi_rule(n, a, b).map_err(e)?;
            for m in 0..2 * n {
                let (exact, scale) = moment(m);
                let approx = rule.apply(|x| x.powi(m as i32));
                // odd moments of a symmetric weight vanish; measure those against ∫|x|^m w
                let denom = if a == b && m % 2 == 1 { scale } else { exact.abs() };
                let rel = (approx - exact).abs() / denom;
                worst = worst.max(rel);
                ensure(rel <= 1e-12, || format!("(a,b) = ({a},{b}), n = {n}, degree {m}: relative error {rel:e}"))?;
            }
        }
    }
    let pi = gauss_jacobi_rule(8, -0.5, -0.5).map_err(e)?.apply(|_| 1.0);
    ensure((pi - PI).abs() <= 1e-10, || format!("Chebyshev mass {pi}"))?;
    Ok(format!("worst relative moment error {worst:e}; mass {pi:.15}"))
}

// --- 4 -----------------------------------------------------------------

fn moduli_suite() -> Check {
    let f = lookup("abs_1_5").map_err(e)?;
    let lambda = -3.7;
    let scaled = f.scaled(lambda);
    let mut configs = 0;
    let mut worst_star = 0.0f64;
    for p in [HALF, 1.0, 2.0, INF] {
        for &r in grid_rs(p) {
            for w in grid_params(p) {
                for k in 1..=3usize {
                    configs += 1;
                    let label = format!("k={k} r={r} α={} β={} p={p}", w.alpha(), w.beta());
                    let q = ModulusQuery::new(f.clone(), k, r, 0.2, w);
                    let ts = [0.05, 0.1, 0.2, 0.4, 0.8, 1.6];
                    let mut last = 0.0;
                    for t in ts {
                        let v = weighted_modulus(&q.with_t(t)).map_err(e)?.value;
                        // the sup over h is found numerically, so equal values may differ in the last digits
                        ensure(v >= last * (1.0 - 1e-10), || {
                            format!("{label}: not monotone at t = {t} ({v} < {last})")
                        })?;
                        last = v;
                    }
                    let sat = 2.0 / k as f64;
                    let base = weighted_modulus(&q.with_t(sat)).map_err(e)?.value;
                    for t in [1.5 * sat, 3.0 * sat] {
                        let v = weighted_modulus(&q.with_t(t)).map_err(e)?.value;
                        ensure((v - base).abs() <= 1e-10 * base.max(1.0), || {
                            format!("{label}: ω({t}) = {v} vs ω(2/k) = {base}")
                        })?;
                    }
                    let omega = weighted_modulus(&q).map_err(e)?.value;
                    let star = averaged_modulus(&q).map_err(e)?.value;
                    worst_star = worst_star.max(star / omega);
                    ensure(star <= omega * (1.0 + 1e-8), || format!("{label}: ω* = {star} > ω = {omega}"))?;
                    let hom = weighted_modulus(&ModulusQuery::new(scaled.clone(), k, r, 0.2, w)).map_err(e)?.value;
                    ensure((hom - lambda.abs() * omega).abs() <= 1e-10 * lambda.abs() * omega, || {
                        format!("{label}: ω(λf) = {hom} vs |λ|ω(f) = {}", lambda.abs() * omega)
                    })?;
                    let coeffs = [0.3, -0.7, 0.5, 0.2, -0.4];
                    let poly = FunctionSpec::polynomial("pi_k", &coeffs[..k + r]);
                    let ann = weighted_modulus(&ModulusQuery::new(poly, k, r, 0.5, w)).map_err(e)?.value;
                    ensure(ann <= 1e-10, || format!("{label}: polynomial modulus {ann:e}"))?;
                }
            }
        }
    }
    Ok(format!("{configs} configurations; max ω*/ω = {worst_star:.6}"))
}

// --- 5 -----------------------------------------------------------------

fn direct_suite() -> Check {
    let settings = HarnessSettings::default();
    let specs = corpus();
    let mut worst = 0.0f64;
    let mut excluded = 0;
    for p in [HALF, 1.0, 2.0, INF] {
        for &r in grid_rs(p) {
            for k in 1..=3usize {
                let rep = verify_direct(&specs, &grid_params(p), k, r, (k + r)..=64, &settings).map_err(e)?;
                sound(&rep, &format!("p={p} k={k} r={r}"))?;
                worst = worst.max(rep.fitted_constant);
                excluded += rep.excluded.len();
            }
        }
    }
    Ok(format!("largest constant {worst:.4}; {excluded} configurations excluded by preconditions"))
}

// --- 6 -----------------------------------------------------------------

fn inverse_suite() -> Check {
    let settings = HarnessSettings::default();
    let grid = dyadic_grid(6);
    let mut worst = 0.0f64;
    let mut excluded = 0;
    for spec in corpus() {
        for r in [0, 1] {
            for p in [2.0, INF] {
                let rep = verify_inverse(&spec, &weight(0.0, 0.0, p), 2, r, 1, &grid, 128, &settings).map_err(e)?;
                sound(&rep, &format!("{} r={r} p={p}", spec.name()))?;
                excluded += rep.excluded.len();
                worst = worst.max(rep.fitted_constant);
            }
        }
    }
    Ok(format!("largest constant {worst:.4}; {excluded} configurations excluded by preconditions"))
}

// --- 7 -----------------------------------------------------------------

fn smallp_suite() -> Check {
    let abs = lookup("abs").map_err(e)?;
    let rep =
        verify_inverse_smallp(&abs, &weight(0.0, 0.0, HALF), 1, 2..=32, 1.0, &HarnessSettings::default()).map_err(e)?;
    sound(&rep, "small-p")?;
    Ok(format!("fitted constant {:.4}", rep.fitted_constant))
}

// --- 8 -----------------------------------------------------------------

fn whitney_suite() -> Check {
    let settings = HarnessSettings::default();
    let specs = corpus();
    let mut worst = 0.0f64;
    for p in [HALF, 1.0, 2.0, INF] {
        let rep = verify_whitney(&specs, &grid_params(p), 2, 0, 1.0, 64, &settings).map_err(e)?;
        sound(&rep, &format!("whitney p={p}"))?;
        worst = worst.max(rep.fitted_constant);
        if p >= 1.0 {
            let rep = verify_whitney(&specs, &grid_params(p), 2, 1, 1.0, 64, &settings).map_err(e)?;
            sound(&rep, &format!("whitney derivative p={p}"))?;
            worst = worst.max(rep.fitted_constant);
        }
    }
    let mut worst_poly = 0.0f64;
    for k in 1..=3usize {
        let coeffs = [0.4, -0.9, 0.6];
        let poly = FunctionSpec::polynomial("pi_k", &coeffs[..k]);
        for p in [HALF, 2.0, INF] {
            let rep =
                verify_whitney(std::slice::from_ref(&poly), &grid_params(p), k, 0, 1.0, 64, &settings).map_err(e)?;
            let lhs = rep.cases.iter().chain(&rep.skipped).map(|c| c.lhs).fold(0.0, f64::max);
            worst_poly = worst_poly.max(lhs);
        }
    }
    ensure(worst_poly <= 1e-9, || format!("polynomial input gives lhs {worst_poly:e}"))?;
    Ok(format!("largest constant {worst:.4}; polynomial lhs ≤ {worst_poly:e}"))
}

// --- 9 -----------------------------------------------------------------

fn bernstein_suite() -> Check {
    let sup = weight(0.0, 0.0, INF);
    let mut worst_t = 0.0f64;
    for m in 1..=40usize {
        let ratio = bernstein_ratio(&Polynomial::chebyshev_t(m), m + 1, 1, &sup).map_err(e)?;
        let err = (ratio - m as f64 / (m + 1) as f64).abs();
        worst_t = worst_t.max(err);
        ensure(err <= 1e-8, || format!("T_{m}: ratio {ratio}"))?;
    }
    let settings = HarnessSettings::default();
    let mut worst = 0.0f64;
    for r in [1, 2] {
        for p in [2.0, INF] {
            for (a, b) in [(0.0, 0.0), (1.0, 1.0)] {
                let rep = verify_bernstein(&[2, 4, 8, 16], r, &weight(a, b, p), 64, &settings).map_err(e)?;
                sound(&rep, &format!("r={r} p={p} α={a} β={b}"))?;
                worst = worst.max(rep.fitted_constant);
            }
        }
    }
    Ok(format!("Chebyshev error {worst_t:e}; random max ratio {worst:.4}"))
}

// --- 10 ----------------------------------------------------------------

fn appendix_suite() -> Check {
    let settings = HarnessSettings::default();
    let mut constants = Vec::new();
    for name in ["abs_1_5", "runge"] {
        let spec = lookup(name).map_err(e)?;
        for r in [0, 1] {
            let rep =
                verify_appendix(&spec, &weight(0.0, 0.0, 2.0), 2, r, &dyadic_grid(6), 64, &settings).map_err(e)?;
            ensure(rep.failures.is_empty(), || format!("{name} r={r}: {:?}", rep.failures))?;
            for theorem in ["marchaud", "jackson", "final-corollary"] {
                let c = rep.max_ratio_where(|c| c.theorem == theorem);
                let present = rep.cases.iter().any(|c| c.theorem == theorem);
                ensure(present && c.is_finite(), || format!("{name} r={r} {theorem}: constant {c}"))?;
                constants.push(c);
            }
            let bad = rep
                .cases
                .iter()
                .find(|c| !matches!(c.lhs.partial_cmp(&(1e6 * c.rhs)), Some(Ordering::Less | Ordering::Equal)));
            ensure(bad.is_none(), || format!("{name} r={r}: lhs exceeds 1e6·rhs in {bad:?}"))?;
        }
    }
    let max = constants.iter().copied().fold(0.0, f64::max);
    Ok(format!("{} constants, largest {max:.4}", constants.len()))
}

// --- 11 ----------------------------------------------------------------

fn consistency_suite() -> Check {
    let full = (-1.0, 1.0);
    let mut worst_parseval = 0.0f64;
    let mut worst_irls = 0.0f64;
    for name in ["abs", "runge", "abs_1_5"] {
        let spec = lookup(name).map_err(e)?;
        for (a, b) in [(0.0, 0.0), (0.5, 0.0)] {
            let w = weight(a, b, 2.0);
            for n in [1, 2, 4, 8, 16] {
                let proj = best_approx_l2(&spec, n, full, &w).map_err(e)?;
                // ‖f‖² = ‖P f‖² + E_n², with both norms by adaptive quadrature
                let opts = NormOptions { breakpoints: spec.singularities().to_vec(), ..NormOptions::with_tol(1e-14) };
                let nf = weighted_norm(&|x: f64| spec.value(0, x), full, &w, &opts).value;
                let np = weighted_norm(&|x: f64| proj.minimizer.eval(x), full, &w, &opts).value;
                let mut parseval = vec![(nf * nf - np * np).max(0.0).sqrt()];
                parseval.extend(proj.parseval_tail.map(f64::sqrt));
                for v in parseval {
                    let d = (v - proj.error).abs();
                    worst_parseval = worst_parseval.max(d);
                    ensure(d <= 1e-8, || format!("{name} n={n}: Parseval {v} vs residual {}", proj.error))?;
                }
                let irls = best_approx_lp(&spec, n, full, &w).map_err(e)?;
                let d = (irls.error - proj.error).abs();
                worst_irls = worst_irls.max(d);
                ensure(d <= 1e-7, || format!("{name} n={n}: IRLS {} vs projection {}", irls.error, proj.error))?;
            }
        }
    }
    let abs = lookup("abs").map_err(e)?;
    let seq = compute_error_sequence(&abs, &weight(0.0, 0.0, INF), 1..=64, full).map_err(e)?;
    let gamma = fit_decay(&seq, 8).map_err(e)?.gamma.ok_or("no decay fitted")?;
    ensure((0.85..=1.15).contains(&gamma), || format!("fitted γ = {gamma}"))?;
    Ok(format!("Parseval gap {worst_parseval:e}; IRLS gap {worst_irls:e}; γ = {gamma:.4}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 exact values", 10, exact_values),
        ("2 change of variable", 10, change_of_variable),
        ("3 quadrature", 10, quadrature_suite),
        ("4 moduli properties", 120, moduli_suite),
        ("5 direct theorem", 900, direct_suite),
        ("6 inverse theorem", 900, inverse_suite),
        ("7 small-p inverse", 300, smallp_suite),
        ("8 Whitney estimates", 600, whitney_suite),
        ("9 Bernstein inequality", 120, bernstein_suite),
        ("10 sharp Marchaud and Jackson", 600, appendix_suite),
        ("11 consistency anchors", 300, consistency_suite),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, budget, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(budget) => Err(format!("over the {budget} s budget; {msg}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  {name} [{:.1} s / {budget} s]: {msg}", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name} [{:.1} s / {budget} s]: {msg}", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
