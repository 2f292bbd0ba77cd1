//! Best weighted polynomial approximation `E_n(f, I)_{α,β,p}` by `Π_n`
//! (polynomials of degree at most `n - 1`).
//!
//! | regime        | solver                                       | certificate            |
//! |---------------|----------------------------------------------|------------------------|
//! | `p = 2`       | orthogonal projection                        | orthogonal projection  |
//! | `p = ∞`       | weighted Remez exchange on a refined grid    | exchange converged     |
//! | `1 ≤ p < ∞`   | iteratively reweighted least squares         | IRLS converged         |
//! | `0 < p < 1`   | multi-start reweighted descent               | heuristic upper bound  |
//!
//! Every reported error is the weighted norm of the residual of the returned
//! minimizer, measured by the adaptive quadrature of [`crate::quadrature`].

mod discretize;
mod l2;
mod lp;
mod minimax;
mod polynomial;

pub use polynomial::Polynomial;

use std::fmt;

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::quadrature::{weighted_lp_norm_with, weighted_sup_norm_with, NormOptions, NormResult};
use crate::weights::{phi, WeightParams};

/// How an [`ApproxResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certificate {
    OrthogonalProjection,
    IrlsConverged,
    ExchangeConverged,
    /// Local search for `0 < p < 1`; the error is an upper bound on `E_n`.
    HeuristicUpperBound,
}

impl Certificate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certificate::OrthogonalProjection => "orthogonal-projection",
            Certificate::IrlsConverged => "irls-converged",
            Certificate::ExchangeConverged => "exchange-converged",
            Certificate::HeuristicUpperBound => "heuristic-upper-bound",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "orthogonal-projection" => Some(Certificate::OrthogonalProjection),
            "irls-converged" => Some(Certificate::IrlsConverged),
            "exchange-converged" => Some(Certificate::ExchangeConverged),
            "heuristic-upper-bound" => Some(Certificate::HeuristicUpperBound),
            _ => None,
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    /// `‖w_{α,β}(f - p*)‖_{L_p(I)}` for the returned minimizer `p*`.
    pub error: f64,
    pub minimizer: Polynomial,
    pub certificate: Certificate,
    pub iterations: usize,
    pub converged: bool,
    /// Levelled reference error of the exchange (a lower bound on the
    /// discrete optimum), `p = ∞` only.
    pub lower_bound: Option<f64>,
    /// `Σ_{j ≥ n} c_j²` over the orthonormal Jacobi expansion, when the
    /// coefficients were resolved to decay (`p = 2` on `[-1, 1]`).
    pub parseval_tail: Option<f64>,
}

/// Tolerances and budgets of the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    /// Relative tolerance of the adaptive residual norm.
    pub norm_tol: f64,
    pub minimax_grid: usize,
    /// Stop when `max error - level ≤ minimax_stop · max error`.
    pub minimax_stop: f64,
    /// Extremum refinement stops once the level changes by less than this.
    pub minimax_grid_change: f64,
    pub minimax_max_iter: usize,
    /// Rounds that add the continuous error extrema to the grid.
    pub minimax_refinements: usize,
    pub irls_max_iter: usize,
    pub irls_tol: f64,
    pub irls_floor: f64,
    /// Relative objective change that ends a smoothing level above the floor.
    pub irls_level_tol: f64,
    /// Re-solves with the residual's sign changes added as panel breaks.
    pub breakpoint_rounds: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            norm_tol: 1e-10,
            minimax_grid: 512,
            minimax_stop: 1e-10,
            minimax_grid_change: 1e-9,
            minimax_max_iter: 500,
            minimax_refinements: 5,
            irls_max_iter: 200,
            irls_tol: 1e-9,
            irls_floor: 1e-12,
            irls_level_tol: 1e-5,
            breakpoint_rounds: 3,
        }
    }
}

impl SolverSettings {
    /// Stable textual fingerprint, used in cache keys.
    pub fn fingerprint(&self) -> String {
        format!(
            "tol={:e};grid={};stop={:e};change={:e};mi={};md={};ii={};it={:e};fl={:e};lt={:e};br={}",
            self.norm_tol,
            self.minimax_grid,
            self.minimax_stop,
            self.minimax_grid_change,
            self.minimax_max_iter,
            self.minimax_refinements,
            self.irls_max_iter,
            self.irls_tol,
            self.irls_floor,
            self.irls_level_tol,
            self.breakpoint_rounds
        )
    }
}

fn check_problem(n: usize, interval: (f64, f64)) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1 (Π_n has degree ≤ n - 1)".into()));
    }
    let (u, v) = interval;
    if !(u >= -1.0 && v <= 1.0 && u < v) {
        return Err(Error::Precondition(format!("[{u}, {v}] must be a nonempty subinterval of [-1, 1]")));
    }
    Ok(())
}

/// Singular points of `f` inside the open interval.
pub(crate) fn interior_breaks(spec: &FunctionSpec, (u, v): (f64, f64)) -> Vec<f64> {
    spec.singularities().iter().copied().filter(|&s| s > u && s < v).collect()
}

/// Singular points of `f` in the closed interval.
pub(crate) fn graded_points(spec: &FunctionSpec, (u, v): (f64, f64)) -> Vec<(f64, usize)> {
    spec.singularities().iter().filter(|&&s| s >= u && s <= v).map(|&s| (s, discretize::GRADE_DEPTH)).collect()
}

/// `‖w_{α,β}(f - q)‖_{L_p(I)}` by adaptive quadrature (or the sup search).
pub fn residual_norm(
    spec: &FunctionSpec,
    q: &Polynomial,
    interval: (f64, f64),
    params: &WeightParams,
    tol: f64,
) -> NormResult {
    let g = |x: f64| spec.value(0, x) - q.eval(x);
    let breakpoints = interior_breaks(spec, interval);
    if params.is_sup() {
        weighted_sup_norm_with(&g, interval, params, &breakpoints)
    } else {
        let opts = NormOptions { tol, breakpoints, ..NormOptions::default() };
        weighted_lp_norm_with(&g, interval, params, &opts)
    }
}

/// `E_n(f, I)_{α,β,p}` with the solver matching `p`.
pub fn best_approx(spec: &FunctionSpec, n: usize, interval: (f64, f64), params: &WeightParams) -> Result<ApproxResult> {
    best_approx_with(spec, n, interval, params, &SolverSettings::default(), None)
}

/// As [`best_approx`], optionally warm-started from a polynomial of a
/// smaller space (for example the minimizer for `n - 1`).
pub fn best_approx_with(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
    warm: Option<&Polynomial>,
) -> Result<ApproxResult> {
    let p = params.p();
    if p.is_infinite() {
        best_approx_minimax_with(spec, n, interval, params, settings)
    } else if p == 2.0 {
        best_approx_l2_with(spec, n, interval, params, settings)
    } else if p >= 1.0 {
        best_approx_lp_with(spec, n, interval, params, settings, warm)
    } else {
        best_approx_quasi_with(spec, n, interval, params, settings, warm)
    }
}

pub fn best_approx_l2(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
) -> Result<ApproxResult> {
    best_approx_l2_with(spec, n, interval, params, &SolverSettings::default())
}

pub fn best_approx_l2_with(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
) -> Result<ApproxResult> {
    check_problem(n, interval)?;
    if params.p() != 2.0 {
        return Err(Error::Precondition(format!("the projection solver needs p = 2, got {}", params.p())));
    }
    l2::solve(spec, n, interval, params, settings)
}

pub fn best_approx_minimax(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
) -> Result<ApproxResult> {
    best_approx_minimax_with(spec, n, interval, params, &SolverSettings::default())
}

pub fn best_approx_minimax_with(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
) -> Result<ApproxResult> {
    check_problem(n, interval)?;
    if !params.is_sup() {
        return Err(Error::Precondition(format!("the exchange solver needs p = ∞, got {}", params.p())));
    }
    minimax::solve(spec, n, interval, params, settings)
}

pub fn best_approx_lp(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
) -> Result<ApproxResult> {
    best_approx_lp_with(spec, n, interval, params, &SolverSettings::default(), None)
}

pub fn best_approx_lp_with(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
    warm: Option<&Polynomial>,
) -> Result<ApproxResult> {
    check_problem(n, interval)?;
    let p = params.p();
    if !(1.0..f64::INFINITY).contains(&p) {
        return Err(Error::Precondition(format!("IRLS needs 1 ≤ p < ∞, got {p}")));
    }
    lp::solve_convex(spec, n, interval, params, settings, warm)
}

pub fn best_approx_quasi(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
) -> Result<ApproxResult> {
    best_approx_quasi_with(spec, n, interval, params, &SolverSettings::default(), None)
}

pub fn best_approx_quasi_with(
    spec: &FunctionSpec,
    n: usize,
    interval: (f64, f64),
    params: &WeightParams,
    settings: &SolverSettings,
    warm: Option<&Polynomial>,
) -> Result<ApproxResult> {
    check_problem(n, interval)?;
    let p = params.p();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Precondition(format!("the quasi-norm solver needs 0 < p < 1, got {p}")));
    }
    lp::solve_quasi(spec, n, interval, params, settings, warm)
}

/// The interval `[x0 - hφ(x0)/2, x0 + hφ(x0)/2]`.
pub fn local_interval(x0: f64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) || !(-1.0..=1.0).contains(&x0) {
        return Err(Error::Precondition(format!("need h > 0 and x0 ∈ [-1, 1], got h = {h}, x0 = {x0}")));
    }
    let half = h * phi(x0) / 2.0;
    let (u, v) = (x0 - half, x0 + half);
    const SLACK: f64 = 1e-13;
    if u < -1.0 - SLACK || v > 1.0 + SLACK {
        return Err(Error::Precondition(format!("[{u}, {v}] leaves [-1, 1]; x0 = {x0} is not in Dom_{h}")));
    }
    let (u, v) = (u.max(-1.0), v.min(1.0));
    if !(u < v) {
        return Err(Error::Precondition(format!("the interval around x0 = {x0} is degenerate")));
    }
    Ok((u, v))
}

/// `E_k(f, [x0 - hφ(x0)/2, x0 + hφ(x0)/2])` with the global weight `w_{α,β}`.
pub fn local_best_approx(
    spec: &FunctionSpec,
    k: usize,
    x0: f64,
    h: f64,
    params: &WeightParams,
) -> Result<ApproxResult> {
    local_best_approx_with(spec, k, x0, h, params, &SolverSettings::default())
}

pub fn local_best_approx_with(
    spec: &FunctionSpec,
    k: usize,
    x0: f64,
    h: f64,
    params: &WeightParams,
    settings: &SolverSettings,
) -> Result<ApproxResult> {
    let interval = local_interval(x0, h)?;
    best_approx_with(spec, k, interval, params, settings, None)
}

/// `‖w_{α,β} φ^r q^{(r)}‖_p / (n^r ‖w_{α,β} q‖_p)` for `q ∈ Π_n`.
pub fn bernstein_ratio(poly: &Polynomial, n: usize, r: usize, params: &WeightParams) -> Result<f64> {
    let (num, den) = bernstein_sides(poly, n, r, params)?;
    Ok(if num == 0.0 { 0.0 } else { num / den })
}

/// Both sides of the Bernstein inequality, `(‖w φ^r q^{(r)}‖_p, n^r ‖w q‖_p)`.
pub fn bernstein_sides(poly: &Polynomial, n: usize, r: usize, params: &WeightParams) -> Result<(f64, f64)> {
    if poly.is_zero() {
        return Err(Error::Precondition("the Bernstein ratio is undefined for the zero polynomial".into()));
    }
    if poly.degree().is_some_and(|d| d >= n) {
        return Err(Error::Precondition(format!("polynomial of degree {:?} is not in Π_{n}", poly.degree())));
    }
    let shifted = params.with_phi_power(r)?;
    let deriv = poly.nth_derivative(r);
    let interval = poly.interval();
    let opts = NormOptions::with_tol(1e-10);
    let num = if deriv.is_zero() { 0.0 } else { norm_of(&|x| deriv.eval(x), interval, &shifted, &opts) };
    let den = norm_of(&|x| poly.eval(x), interval, params, &opts);
    if !(den > 0.0) {
        return Err(Error::Numerical("‖w q‖ vanished for a nonzero polynomial".into()));
    }
    Ok((num, (n as f64).powi(r as i32) * den))
}

fn norm_of(g: &impl Fn(f64) -> f64, interval: (f64, f64), params: &WeightParams, opts: &NormOptions) -> f64 {
    if params.is_sup() {
        weighted_sup_norm_with(g, interval, params, &[]).value
    } else {
        weighted_lp_norm_with(g, interval, params, opts).value
    }
}

#[cfg(test)]
mod tests;
