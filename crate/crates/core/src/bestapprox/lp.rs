//! Iteratively reweighted least squares for `‖w(f - q)‖_p`, convex
//! (`p ≥ 1`) and quasi-norm (`p < 1`) cases.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::functions::FunctionSpec;
use crate::quadrature::sign_changes;
use crate::weights::WeightParams;

use super::discretize::{chebyshev_matrix, discretize, weighted_lstsq, Discretization};
use super::{graded_points, interior_breaks, residual_norm, ApproxResult, Certificate, Polynomial, SolverSettings};

/// Extra panels allowed for grading towards residual zeros, and the
/// deepest grading used.
const ZERO_GRADING_BUDGET: usize = 64;
const ZERO_GRADING_DEPTH: usize = 6;
const QUASI_CURVATURE_FLOOR: f64 = 0.1;

/// A discretized problem `min_c Σ W_i |f_i - (A c)_i|^p`.
struct Problem {
    mat: DMatrix<f64>,
    f: Vec<f64>,
    w: Vec<f64>,
}

impl Problem {
    /// `zeros` are residual sign changes of a previous iterate; the mesh is
    /// graded towards them as deeply as the node budget allows.
    fn new(spec: &FunctionSpec, n: usize, interval: (f64, f64), exps: (f64, f64), zeros: &[f64]) -> Self {
        let breaks = interior_breaks(spec, interval);
        let mut graded = graded_points(spec, interval);
        let depth = (ZERO_GRADING_BUDGET / (2 * zeros.len().max(1))).min(ZERO_GRADING_DEPTH);
        graded.extend(zeros.iter().map(|&z| (z, depth)));
        let panels = (n / 2).max(8);
        let Discretization { x, w } = discretize(interval, exps.0, exps.1, panels, &breaks, &graded);
        let f = x.iter().map(|&xi| spec.value(0, xi)).collect();
        let mat = chebyshev_matrix(&x, n, interval);
        Self { mat, f, w }
    }

    fn residual(&self, c: &[f64]) -> Vec<f64> {
        let ac = &self.mat * nalgebra::DVector::from_column_slice(c);
        self.f.iter().zip(ac.iter()).map(|(f, a)| f - a).collect()
    }

    fn objective(&self, r: &[f64], p: f64) -> f64 {
        r.iter().zip(&self.w).map(|(r, w)| w * r.abs().powf(p)).sum()
    }
}

struct IrlsOutcome {
    coeffs: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn smoothed(r: &[f64], w: &[f64], p: f64, eps: f64) -> f64 {
    r.iter().zip(w).map(|(r, w)| w * (r * r + eps * eps).powf(0.5 * p)).sum()
}

/// Minimizes the smoothed objective `Σ W_i (r_i² + ε²)^{p/2}` for a
/// decreasing sequence of `ε`, down to `irls_floor · max|r|`.
///
/// Each step is a weighted least-squares solve. For `p ≥ 1` the weights and
/// targets are those of a Newton step on the (convex) smoothed objective,
/// followed by a backtracking line search. For `p < 1` negative curvature is
/// floored at a fraction of the majorizer's, which keeps every step a
/// descent direction for the line search.
fn irls(prob: &Problem, p: f64, init: Option<Vec<f64>>, settings: &SolverSettings) -> Result<IrlsOutcome> {
    let n = prob.mat.ncols();
    let had_init = init.is_some();
    let mut c = match init {
        Some(mut c) => {
            c.resize(n, 0.0);
            c
        }
        None => weighted_lstsq(&prob.mat, &prob.f, &prob.w)?,
    };
    let fscale = prob.f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut r = prob.residual(&c);
    let rmax = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if rmax <= 1e-14 * fscale.max(f64::MIN_POSITIVE) || p == 2.0 {
        if p == 2.0 && had_init {
            c = weighted_lstsq(&prob.mat, &prob.f, &prob.w)?;
        }
        return Ok(IrlsOutcome { coeffs: c, iterations: 1, converged: true });
    }
    let floor = settings.irls_floor * rmax;
    let mut eps = if had_init { 1e-2 * rmax } else { rmax };
    let mut best = (prob.objective(&r, p), c.clone());
    let mut obj = smoothed(&r, &prob.w, p, eps);
    // curvature floor relative to the majorizer; 1 gives plain majorize-minimize
    let kappa = if p >= 1.0 { 0.0 } else { QUASI_CURVATURE_FLOOR };
    let mut converged = false;
    let mut iterations = 0;
    while iterations < settings.irls_max_iter {
        iterations += 1;
        let e2 = eps * eps;
        let mut h = Vec::with_capacity(r.len());
        let mut t = Vec::with_capacity(r.len());
        for (ri, wi) in r.iter().zip(&prob.w) {
            let s = ri * ri + e2;
            let curv = ((p - 1.0) * ri * ri + e2).max(kappa * s);
            h.push(wi * s.powf(0.5 * p - 2.0) * curv);
            t.push(ri * s / curv);
        }
        let step = weighted_lstsq(&prob.mat, &t, &h)?;
        // backtracking on the smoothed objective
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial: Vec<f64> = c.iter().zip(&step).map(|(a, d)| a + lambda * d).collect();
            let rt = prob.residual(&trial);
            let val = smoothed(&rt, &prob.w, p, eps);
            if val <= obj {
                accepted = Some((trial, rt, val));
                break;
            }
            lambda *= 0.5;
        }
        let change = match accepted {
            Some((trial, rt, val)) => {
                let change = (obj - val) / obj.max(f64::MIN_POSITIVE);
                c = trial;
                r = rt;
                obj = val;
                change
            }
            None => 0.0,
        };
        let true_obj = prob.objective(&r, p);
        if true_obj < best.0 {
            best = (true_obj, c.clone());
        }
        let level_tol = if eps <= floor { settings.irls_tol } else { settings.irls_level_tol };
        if change < level_tol {
            if eps <= floor {
                converged = true;
                break;
            }
            eps = (eps / 10.0).max(floor);
            obj = smoothed(&r, &prob.w, p, eps);
        }
    }
    Ok(IrlsOutcome { coeffs: best.1, iterations, converged })
}

/// Sign changes of the residual, used as extra panel breaks.
fn residual_zeros(spec: &FunctionSpec, q: &Polynomial, interval: (f64, f64), n: usize) -> Vec<f64> {
    let g = |x: f64| spec.value(0, x) - q.eval(x);
    sign_changes(&g, interval, (8 * n).max(257))
}

fn polish(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
    start: Option<Vec<f64>>,
) -> Result<(Polynomial, usize, bool)> {
    let p = params.p();
    let exps = params.integrand_exponents();
    let mut prob = Problem::new(spec, n, interval, exps, &[]);
    let mut out = irls(&prob, p, start, settings)?;
    let mut iterations = out.iterations;
    for _ in 0..settings.breakpoint_rounds {
        let q = Polynomial::new(out.coeffs.clone(), interval)?;
        let zeros = residual_zeros(spec, &q, interval, n);
        if zeros.is_empty() {
            break;
        }
        prob = Problem::new(spec, n, interval, exps, &zeros);
        out = irls(&prob, p, Some(out.coeffs), settings)?;
        iterations += out.iterations;
    }
    Ok((Polynomial::new(out.coeffs, interval)?, iterations, out.converged))
}

pub(super) fn solve_convex(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
    warm: Option<&Polynomial>,
) -> Result<ApproxResult> {
    let start = warm.filter(|w| w.interval() == interval).map(|w| w.resized(n).coeffs().to_vec());
    let (minimizer, iterations, converged) = polish(spec, n, interval, params, settings, start)?;
    let norm = residual_norm(spec, &minimizer, interval, params, settings.norm_tol);
    Ok(ApproxResult {
        error: norm.value,
        minimizer,
        certificate: Certificate::IrlsConverged,
        iterations,
        converged: converged && norm.converged,
        lower_bound: None,
        parseval_tail: None,
    })
}

/// Multi-start local descent for `0 < p < 1`. Every start is itself a
/// candidate, so the result never exceeds the quasi-norm of any start.
pub(super) fn solve_quasi(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
    warm: Option<&Polynomial>,
) -> Result<ApproxResult> {
    let mut starts: Vec<Polynomial> = Vec::new();
    if let Some(w) = warm.filter(|w| w.interval() == interval) {
        starts.push(w.resized(n));
    }
    if let Ok(p2) = params.with_p(2.0) {
        starts.push(super::l2::solve(spec, n, interval, &p2, settings)?.minimizer);
    }
    // the ladder start stands in for the p = 1 minimizer
    if warm.is_none() {
        if let Ok(p1) = params.with_p(1.0) {
            starts.push(solve_convex(spec, n, interval, &p1, settings, None)?.minimizer);
        }
    }
    if starts.is_empty() {
        starts.push(Polynomial::zero(interval).resized(n));
    }
    let mut best: Option<(f64, Polynomial)> = None;
    let mut iterations = 0;
    let consider = |q: Polynomial, best: &mut Option<(f64, Polynomial)>| {
        let val = residual_norm(spec, &q, interval, params, settings.norm_tol).value;
        if val.is_finite() && best.as_ref().is_none_or(|(b, _)| val < *b) {
            *best = Some((val, q));
        }
    };
    // descend from every start on the base mesh, then refine only the winner
    let base =
        SolverSettings { breakpoint_rounds: 0, irls_level_tol: settings.irls_level_tol.max(1e-3), ..settings.clone() };
    for s in starts {
        let (q, it, _) = polish(spec, n, interval, params, &base, Some(s.coeffs().to_vec()))?;
        iterations += it;
        consider(s, &mut best);
        consider(q, &mut best);
    }
    if settings.breakpoint_rounds > 0 {
        let lead = best.as_ref().expect("at least one finite candidate").1.coeffs().to_vec();
        let refine = SolverSettings { breakpoint_rounds: 1, ..settings.clone() };
        let (q, it, _) = polish(spec, n, interval, params, &refine, Some(lead))?;
        iterations += it;
        consider(q, &mut best);
    }
    let (error, minimizer) = best.expect("at least one finite candidate");
    Ok(ApproxResult {
        error,
        minimizer,
        certificate: Certificate::HeuristicUpperBound,
        iterations,
        converged: true,
        lower_bound: None,
        parseval_tail: None,
    })
}
