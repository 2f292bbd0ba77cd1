//! Gauss–Jacobi rules and adaptive composite quadrature for weighted
//! `L_p` (quasi)norms.
//!
//! Integrals `∫_u^v (1-x)^a (1+x)^b g(x) dx` are evaluated on panels. A panel
//! touching `x = ±1` uses a Gauss–Jacobi rule that absorbs the singular
//! factor exactly; all other panels use Gauss–Legendre with the weight
//! evaluated pointwise. Panels are bisected wherever a 16-point estimate and
//! the sum of the estimates on its two halves disagree, which grades the mesh
//! geometrically towards endpoint and interior singularities.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::weights::{jacobi_weight, WeightParams};

/// Points per panel of the composite rules.
pub const PANEL_POINTS: usize = 16;
/// Default relative tolerance for finite `p`.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Grid size of the sup-norm search.
pub const SUP_GRID: usize = 2049;

const MAX_PANELS: usize = 4000;
const SIGN_SAMPLES: usize = 257;

/// Nodes and weights of an n-point Gauss rule for `(1-x)^a (1+x)^b` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub jacobi_exponents: (f64, f64),
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i g(x_i)`.
    pub fn apply(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// Three-term recurrence of an orthonormal polynomial family,
/// `√β_{j+1} q_{j+1} = (x - a_j) q_j - √β_j q_{j-1}`, `q_0 = 1/√μ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Recurrence {
    /// `a_j`, `j = 0..len`.
    pub diag: Vec<f64>,
    /// `√β_j`, `j = 1..len` (index 0 holds `√β_1`).
    pub offdiag: Vec<f64>,
    /// Total mass `μ₀` of the measure.
    pub mu0: f64,
}

impl Recurrence {
    /// Recurrence of the Jacobi polynomials `P_j^{(a,b)}` with `len` diagonal terms.
    pub fn jacobi(len: usize, a: f64, b: f64) -> Self {
        let mut diag = Vec::with_capacity(len);
        let mut offdiag = Vec::with_capacity(len);
        for j in 0..len {
            let jf = j as f64;
            let d = if j == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                let s = 2.0 * jf + a + b;
                (b * b - a * a) / (s * (s + 2.0))
            };
            diag.push(d);
            let k = jf + 1.0;
            let beta = if j == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                let s = 2.0 * k + a + b;
                4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))
            };
            offdiag.push(beta.sqrt());
        }
        Self { diag, offdiag, mu0: jacobi_mass(a, b) }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Values `q_0(x), ..., q_{m-1}(x)` written into `out` (`m ≤ len + 1`).
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let m = out.len();
        if m == 0 {
            return;
        }
        out[0] = 1.0 / self.mu0.sqrt();
        if m == 1 {
            return;
        }
        out[1] = (x - self.diag[0]) * out[0] / self.offdiag[0];
        for j in 1..m - 1 {
            out[j + 1] = ((x - self.diag[j]) * out[j] - self.offdiag[j - 1] * out[j - 1]) / self.offdiag[j];
        }
    }

    /// `q_n(x)` and `q_n'(x)`.
    fn eval_with_derivative(&self, n: usize, x: f64) -> (f64, f64) {
        let mut q_prev = 0.0;
        let mut q = 1.0 / self.mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        for j in 0..n {
            let off_prev = if j == 0 { 0.0 } else { self.offdiag[j - 1] };
            let q_next = ((x - self.diag[j]) * q - off_prev * q_prev) / self.offdiag[j];
            let d_next = ((x - self.diag[j]) * d + q - off_prev * d_prev) / self.offdiag[j];
            q_prev = q;
            q = q_next;
            d_prev = d;
            d = d_next;
        }
        (q, d)
    }

    /// Gauss rule with `n ≤ len` nodes (Golub–Welsch). Eigenvalues of the
    /// Jacobi matrix are polished by Newton steps on `q_n`, and weights come
    /// from the Christoffel function `1 / Σ q_j(x)²`.
    pub fn gauss_rule(&self, n: usize, exponents: (f64, f64)) -> Result<QuadratureRule> {
        if n == 0 || n > self.len() {
            return Err(Error::Precondition(format!("rule size {n} outside 1..={}", self.len())));
        }
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            jm[(i, i)] = self.diag[i];
            if i + 1 < n {
                jm[(i, i + 1)] = self.offdiag[i];
                jm[(i + 1, i)] = self.offdiag[i];
            }
        }
        let eig = nalgebra::linalg::SymmetricEigen::try_new(jm, 1e-15, 10_000)
            .ok_or_else(|| Error::Numerical(format!("tridiagonal eigenproblem failed for n = {n}")))?;
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        let mut buf = vec![0.0; n];
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (q, dq) = self.eval_with_derivative(n, *x);
                if dq == 0.0 || !dq.is_finite() {
                    break;
                }
                let step = q / dq;
                *x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            self.eval_into(*x, &mut buf);
            let k: f64 = buf.iter().map(|v| v * v).sum();
            weights.push(1.0 / k);
        }
        for w in nodes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Numerical(format!("Gauss nodes not strictly increasing for n = {n}")));
            }
        }
        Ok(QuadratureRule { nodes, weights, jacobi_exponents: exponents })
    }
}

/// `∫_{-1}^1 (1-x)^a (1+x)^b dx = 2^{a+b+1} Γ(a+1) Γ(b+1) / Γ(a+b+2)`.
pub fn jacobi_mass(a: f64, b: f64) -> f64 {
    if a + b + 2.0 < 150.0 {
        return 2f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0);
    }
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp()
}

/// n-point Gauss–Jacobi rule for the weight `(1-x)^a (1+x)^b`.
pub fn gauss_jacobi_rule(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Precondition("rule size must be positive".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Precondition(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    Recurrence::jacobi(n, a, b).gauss_rule(n, (a, b))
}

type RuleKey = (usize, u64, u64);

static RULE_CACHE: Lazy<RwLock<HashMap<RuleKey, Arc<QuadratureRule>>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// Shared, memoised Gauss–Jacobi rule. Concurrent insertion of the same key
/// is idempotent.
pub fn cached_rule(n: usize, a: f64, b: f64) -> Arc<QuadratureRule> {
    let key = (n, a.to_bits(), b.to_bits());
    if let Some(rule) = RULE_CACHE.read().get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(gauss_jacobi_rule(n, a, b).expect("Gauss–Jacobi rule construction failed"));
    RULE_CACHE.write().entry(key).or_insert(rule).clone()
}

/// A (quasi)norm or integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub est_rel_error: f64,
    pub converged: bool,
}

/// Extra inputs for the adaptive routines.
#[derive(Debug, Clone)]
pub struct NormOptions {
    pub tol: f64,
    /// Known points where the integrand is not smooth.
    pub breakpoints: Vec<f64>,
    /// Sample count used to locate sign changes of `g` (non-even `p` only).
    pub sign_samples: usize,
    pub max_panels: usize,
    /// Absolute error target used alongside `tol`: in units of the integral
    /// for the integrators; for the `L_p` norms the target on `∫|g|^p` is
    /// `abs_tol^p`.
    pub abs_tol: f64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            breakpoints: Vec::new(),
            sign_samples: SIGN_SAMPLES,
            max_panels: MAX_PANELS,
            abs_tol: 0.0,
        }
    }
}

impl NormOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    /// Sum of the estimates on the two halves.
    fine: f64,
    left: f64,
    right: f64,
    err: f64,
}

struct PanelIntegrator<'a, G: Fn(f64) -> f64> {
    g: &'a G,
    a: f64,
    b: f64,
    legendre: Arc<QuadratureRule>,
    left_end: Option<Arc<QuadratureRule>>,
    right_end: Option<Arc<QuadratureRule>>,
    both_ends: Option<Arc<QuadratureRule>>,
}

impl<'a, G: Fn(f64) -> f64> PanelIntegrator<'a, G> {
    fn new(g: &'a G, a: f64, b: f64) -> Self {
        let n = PANEL_POINTS;
        Self {
            g,
            a,
            b,
            legendre: cached_rule(n, 0.0, 0.0),
            left_end: (b != 0.0).then(|| cached_rule(n, 0.0, b)),
            right_end: (a != 0.0).then(|| cached_rule(n, a, 0.0)),
            both_ends: (a != 0.0 || b != 0.0).then(|| cached_rule(n, a, b)),
        }
    }

    fn estimate(&self, lo: f64, hi: f64) -> f64 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let touches_left = lo == -1.0 && self.b != 0.0;
        let touches_right = hi == 1.0 && self.a != 0.0;
        let g = self.g;
        match (touches_left, touches_right) {
            (true, true) => {
                // the whole of [-1, 1]
                let rule = self.both_ends.as_ref().unwrap();
                let scale = half.powf(self.a + self.b + 1.0);
                scale * rule.apply(|s| g(mid + half * s))
            }
            (true, false) => {
                let rule = self.left_end.as_ref().unwrap();
                let scale = half.powf(self.b + 1.0);
                let a = self.a;
                scale
                    * rule.apply(|s| {
                        let x = mid + half * s;
                        let w = if a == 0.0 { 1.0 } else { (1.0 - x).powf(a) };
                        w * g(x)
                    })
            }
            (false, true) => {
                let rule = self.right_end.as_ref().unwrap();
                let scale = half.powf(self.a + 1.0);
                let b = self.b;
                scale
                    * rule.apply(|s| {
                        let x = mid + half * s;
                        let w = if b == 0.0 { 1.0 } else { (1.0 + x).powf(b) };
                        w * g(x)
                    })
            }
            (false, false) => {
                let (a, b) = (self.a, self.b);
                half * self.legendre.apply(|s| {
                    let x = mid + half * s;
                    jacobi_weight(a, b, x) * g(x)
                })
            }
        }
    }

    fn panel(&self, lo: f64, hi: f64, coarse: f64) -> Panel {
        let mid = 0.5 * (lo + hi);
        let left = self.estimate(lo, mid);
        let right = self.estimate(mid, hi);
        let fine = left + right;
        let err = if fine.is_finite() && coarse.is_finite() { (fine - coarse).abs() } else { f64::INFINITY };
        Panel { lo, hi, fine, left, right, err }
    }
}

/// Sorted, deduplicated segment boundaries of `[u, v]` including the
/// breakpoints that fall strictly inside.
fn segment_points(u: f64, v: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut pts = vec![u, v];
    let min_gap = 1e-14 * (v - u).abs().max(1e-300);
    pts.extend(breakpoints.iter().copied().filter(|&x| x > u + min_gap && x < v - min_gap));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= min_gap);
    pts
}

/// `∫_u^v (1-x)^a (1+x)^b g(x) dx` with breakpoints and a panel budget.
pub fn integrate_weighted_with<G: Fn(f64) -> f64>(
    g: &G,
    interval: (f64, f64),
    a: f64,
    b: f64,
    opts: &NormOptions,
) -> NormResult {
    let (u, v) = interval;
    if !(u < v) {
        return NormResult { value: 0.0, est_rel_error: 0.0, converged: u == v };
    }
    let integ = PanelIntegrator::new(g, a, b);
    let pts = segment_points(u, v, &opts.breakpoints);
    let mut panels: Vec<Panel> = Vec::new();
    for seg in pts.windows(2) {
        // two panels per segment to start
        let (s0, s1) = (seg[0], seg[1]);
        let m = 0.5 * (s0 + s1);
        for (lo, hi) in [(s0, m), (m, s1)] {
            let coarse = integ.estimate(lo, hi);
            panels.push(integ.panel(lo, hi, coarse));
        }
    }
    loop {
        let total: f64 = panels.iter().map(|p| p.fine).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let target = (opts.tol * total.abs()).max(opts.abs_tol);
        if !total.is_finite() || err.is_nan() {
            return NormResult { value: total, est_rel_error: f64::INFINITY, converged: false };
        }
        if err <= target || err == 0.0 {
            let rel = if total != 0.0 { err / total.abs() } else { 0.0 };
            return NormResult { value: total, est_rel_error: rel, converged: true };
        }
        if panels.len() >= opts.max_panels {
            let rel = if total != 0.0 { err / total.abs() } else { f64::INFINITY };
            return NormResult { value: total, est_rel_error: rel, converged: false };
        }
        // split every panel carrying more than its share of the error budget
        let share = target / panels.len() as f64;
        let max_err = panels.iter().map(|p| p.err).fold(0.0, f64::max);
        let threshold = share.max(0.25 * max_err).min(max_err);
        let mut next = Vec::with_capacity(panels.len() + 16);
        let mut split_any = false;
        for p in panels {
            let width = p.hi - p.lo;
            let splittable = width > 4.0 * f64::EPSILON * p.lo.abs().max(p.hi.abs()).max(1e-300);
            if p.err >= threshold && p.err > 0.0 && splittable {
                let mid = 0.5 * (p.lo + p.hi);
                next.push(integ.panel(p.lo, mid, p.left));
                next.push(integ.panel(mid, p.hi, p.right));
                split_any = true;
            } else {
                next.push(p);
            }
        }
        panels = next;
        if !split_any {
            let total: f64 = panels.iter().map(|p| p.fine).sum();
            let err: f64 = panels.iter().map(|p| p.err).sum();
            let rel = if total != 0.0 { err / total.abs() } else { f64::INFINITY };
            return NormResult { value: total, est_rel_error: rel, converged: false };
        }
    }
}

/// `∫_u^v (1-x)^a (1+x)^b g(x) dx` to relative tolerance `tol`.
pub fn integrate_weighted<G: Fn(f64) -> f64>(
    g: &G,
    interval: (f64, f64),
    a: f64,
    b: f64,
    tol: f64,
) -> Result<NormResult> {
    let (u, v) = interval;
    if !(-1.0..=1.0).contains(&u) || !(-1.0..=1.0).contains(&v) || !(u < v) {
        return Err(Error::Precondition(format!("[{u}, {v}] must be a nonempty subinterval of [-1, 1]")));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Precondition(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    Ok(integrate_weighted_with(g, interval, a, b, &NormOptions::with_tol(tol)))
}

/// Sign changes of `g` on `[u, v]`, located by sampling and bisection to `1e-12`.
pub fn sign_changes<G: Fn(f64) -> f64>(g: &G, interval: (f64, f64), samples: usize) -> Vec<f64> {
    let (u, v) = interval;
    let m = samples.max(2);
    let mid = 0.5 * (u + v);
    let half = 0.5 * (v - u);
    let xs: Vec<f64> =
        (0..m).map(|j| mid - half * (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * m) as f64).cos()).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut out = Vec::new();
    for i in 0..m - 1 {
        let (fa, fb) = (vals[i], vals[i + 1]);
        if !(fa.is_finite() && fb.is_finite()) || fa == 0.0 || fb == 0.0 {
            continue;
        }
        if fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (xs[i], xs[i + 1], fa);
            while hi - lo > 1e-12 {
                let c = 0.5 * (lo + hi);
                let fc = g(c);
                if fc == 0.0 {
                    lo = c;
                    hi = c;
                    break;
                }
                if fc.signum() == flo.signum() {
                    lo = c;
                    flo = fc;
                } else {
                    hi = c;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    out
}

fn is_even_integer(p: f64) -> bool {
    p.fract() == 0.0 && (p as i64) % 2 == 0
}

/// `‖w_{α,β} g‖_{L_p[u,v]}` for finite `p`, with breakpoints and sign-change
/// splitting for non-even `p`.
pub fn weighted_lp_norm_with<G: Fn(f64) -> f64>(
    g: &G,
    interval: (f64, f64),
    params: &WeightParams,
    opts: &NormOptions,
) -> NormResult {
    let p = params.p();
    if p.is_infinite() {
        return weighted_sup_norm_with(g, interval, params, &opts.breakpoints);
    }
    let (a, b) = params.integrand_exponents();
    let mut breakpoints = opts.breakpoints.clone();
    if !is_even_integer(p) {
        breakpoints.extend(sign_changes(g, interval, opts.sign_samples));
    }
    let inner = NormOptions {
        tol: opts.tol * p.min(1.0),
        breakpoints,
        sign_samples: opts.sign_samples,
        max_panels: opts.max_panels,
        abs_tol: opts.abs_tol.powf(p),
    };
    let integrand = |x: f64| {
        let gx = g(x).abs();
        if p == 2.0 {
            gx * gx
        } else if p == 1.0 {
            gx
        } else {
            gx.powf(p)
        }
    };
    let res = integrate_weighted_with(&integrand, interval, a, b, &inner);
    NormResult {
        value: res.value.max(0.0).powf(1.0 / p),
        est_rel_error: res.est_rel_error / p,
        converged: res.converged,
    }
}

/// `‖w_{α,β} g‖_{L_p[u,v]}`, `p < ∞`.
pub fn weighted_lp_norm<G: Fn(f64) -> f64>(
    g: &G,
    interval: (f64, f64),
    params: &WeightParams,
    tol: f64,
) -> Result<NormResult> {
    if params.is_sup() {
        return Err(Error::Precondition("weighted_lp_norm requires p < ∞".into()));
    }
    check_interval(interval)?;
    Ok(weighted_lp_norm_with(g, interval, params, &NormOptions::with_tol(tol)))
}

fn check_interval((u, v): (f64, f64)) -> Result<()> {
    if !(-1.0..=1.0).contains(&u) || !(-1.0..=1.0).contains(&v) || !(u < v) {
        return Err(Error::Precondition(format!("[{u}, {v}] must be a nonempty subinterval of [-1, 1]")));
    }
    Ok(())
}

/// Golden-section maximisation of `h` on `[a, b]` until the bracket is
/// narrower than `width`. Returns the best point and value seen.
pub(crate) fn golden_max(h: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = h(c);
    let mut fd = h(d);
    let (mut best_x, mut best) = if fc >= fd { (c, fc) } else { (d, fd) };
    let mut iters = 0;
    while b - a > width && iters < 200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = h(c);
            if fc > best {
                best = fc;
                best_x = c;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = h(d);
            if fd > best {
                best = fd;
                best_x = d;
            }
        }
        iters += 1;
    }
    (best_x, best)
}

/// Sup of `w_{α,β}|g|` over `[u, v]`: a first-kind Chebyshev grid of
/// [`SUP_GRID`] points plus the (finite) endpoint and breakpoint values,
/// refined by golden-section search around the best grid cell.
pub fn weighted_sup_norm_with<G: Fn(f64) -> f64>(
    g: &G,
    interval: (f64, f64),
    params: &WeightParams,
    breakpoints: &[f64],
) -> NormResult {
    let (u, v) = interval;
    let (a, b) = (params.alpha(), params.beta());
    let h = |x: f64| jacobi_weight(a, b, x) * g(x).abs();
    sup_on_grid(&h, u, v, breakpoints)
}

pub(crate) fn sup_on_grid(h: &impl Fn(f64) -> f64, u: f64, v: f64, breakpoints: &[f64]) -> NormResult {
    if !(u < v) {
        let val = if u == v { h(u) } else { 0.0 };
        let val = if val.is_finite() { val } else { 0.0 };
        return NormResult { value: val, est_rel_error: 0.0, converged: true };
    }
    let m = SUP_GRID;
    let mid = 0.5 * (u + v);
    let half = 0.5 * (v - u);
    let mut xs: Vec<f64> = Vec::with_capacity(m + 2 + breakpoints.len());
    xs.push(u);
    xs.extend((0..m).map(|j| mid - half * (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * m) as f64).cos()));
    xs.push(v);
    xs.extend(breakpoints.iter().copied().filter(|&x| x > u && x < v));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let n = xs.len();
    let mut best_i = usize::MAX;
    let mut best = f64::NEG_INFINITY;
    let mut unbounded = false;
    for (i, &x) in xs.iter().enumerate() {
        let val = h(x);
        let interior = i != 0 && i != n - 1;
        if !val.is_finite() {
            if interior && val == f64::INFINITY {
                unbounded = true;
            }
            continue;
        }
        if val > best {
            best = val;
            best_i = i;
        }
    }
    if unbounded {
        return NormResult { value: f64::INFINITY, est_rel_error: f64::INFINITY, converged: false };
    }
    if best_i == usize::MAX {
        return NormResult { value: 0.0, est_rel_error: 0.0, converged: true };
    }
    let lo = xs[best_i.saturating_sub(1)];
    let hi = xs[(best_i + 1).min(n - 1)];
    let safe = |x: f64| {
        let val = h(x);
        if val.is_finite() {
            val
        } else {
            f64::NEG_INFINITY
        }
    };
    if hi > lo {
        let (_, refined) = golden_max(safe, lo, hi, 1e-10);
        if refined > best {
            best = refined;
        }
    }
    NormResult { value: best, est_rel_error: 0.0, converged: true }
}

/// `sup_{[u,v]} w_{α,β}|g|`, `p = ∞`, `α, β ≥ 0`.
pub fn weighted_sup_norm<G: Fn(f64) -> f64>(g: &G, interval: (f64, f64), params: &WeightParams) -> Result<NormResult> {
    if params.alpha() < 0.0 || params.beta() < 0.0 {
        return Err(Error::Precondition("the sup norm requires α ≥ 0 and β ≥ 0".into()));
    }
    check_interval(interval)?;
    Ok(weighted_sup_norm_with(g, interval, params, &[]))
}

/// `‖w_{α,β} g‖_p` for any `p ∈ (0, ∞]`.
pub fn weighted_norm<G: Fn(f64) -> f64>(
    g: &G,
    interval: (f64, f64),
    params: &WeightParams,
    opts: &NormOptions,
) -> NormResult {
    if params.is_sup() {
        weighted_sup_norm_with(g, interval, params, &opts.breakpoints)
    } else {
        weighted_lp_norm_with(g, interval, params, opts)
    }
}

/// Exact moments `∫ x^m (1-x)^a (1+x)^b dx`, `m = 0..count`, by the
/// recurrence `(m+2+a+b) M_{m+1} = m M_{m-1} + (b-a) M_m` obtained from
/// integrating `(x^m (1-x²) w)'` over `[-1, 1]`.
pub fn jacobi_moments(count: usize, a: f64, b: f64) -> Vec<f64> {
    let mut m = Vec::with_capacity(count);
    if count == 0 {
        return m;
    }
    m.push(jacobi_mass(a, b));
    if count == 1 {
        return m;
    }
    m.push((b - a) * m[0] / (2.0 + a + b));
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = (kf * m[k - 1] + (b - a) * m[k]) / (kf + 2.0 + a + b);
        m.push(next);
    }
    m
}
