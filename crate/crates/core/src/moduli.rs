//! Symmetric differences with variable step `hφ(x)` and the weighted moduli
//! of smoothness built from them.

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::quadrature::{golden_max, weighted_lp_norm_with, weighted_sup_norm_with, NormOptions, NormResult};
use crate::weights::{dom_interval, hatted_weight_unchecked, phi, solve_shift_equation, WeightParams};

/// Stencil points may leave `[-1, 1]` by this much before the difference
/// switches to its zero branch (rounding at the ends of `Dom_δ`).
const STENCIL_SLACK: f64 = 1e-13;

/// Absolute accuracy, relative to the running maximum of `∫|·|^p`, of the
/// grid scan in the sup and of each node of the averaging integral.
const SCAN_SLACK: f64 = 1e-3;
const AVERAGE_SLACK: f64 = 1e-9;

/// Inputs of `ω^φ_{k,r}(f^{(r)}, t)_{α,β,p}`.
#[derive(Debug, Clone)]
pub struct ModulusQuery {
    pub spec: FunctionSpec,
    pub k: usize,
    pub r: usize,
    pub t: f64,
    pub params: WeightParams,
    /// Accept `r/2 + α < 0` or `r/2 + β < 0` (finite `p` only).
    pub allow_negative_shift: bool,
}

impl ModulusQuery {
    pub fn new(spec: FunctionSpec, k: usize, r: usize, t: f64, params: WeightParams) -> Self {
        Self { spec, k, r, t, params, allow_negative_shift: false }
    }

    pub fn with_t(&self, t: f64) -> Self {
        Self { t, ..self.clone() }
    }

    pub fn allowing_negative_shift(mut self) -> Self {
        self.allow_negative_shift = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Precondition("k must be positive".into()));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Precondition(format!("t = {} must be positive", self.t)));
        }
        if self.r > self.spec.max_derivative_order() {
            return Err(Error::OrderOutOfRange {
                name: self.spec.name().to_string(),
                requested: self.r,
                max: self.spec.max_derivative_order(),
            });
        }
        let shift_ok = self.params.shifted_nonnegative(self.r);
        if !shift_ok && (self.params.is_sup() || !self.allow_negative_shift) {
            return Err(Error::Precondition(format!(
                "r/2 + α = {} and r/2 + β = {} must be nonnegative",
                self.r as f64 / 2.0 + self.params.alpha(),
                self.r as f64 / 2.0 + self.params.beta()
            )));
        }
        Ok(())
    }

    /// Exponents `(r/2 + α, r/2 + β)` of the shifted weight.
    fn hatted_exponents(&self) -> (f64, f64) {
        let half = self.r as f64 / 2.0;
        (half + self.params.alpha(), half + self.params.beta())
    }

    /// Largest useful step, `min(t, 2/k)`.
    pub fn h_max(&self) -> f64 {
        self.t.min(2.0 / self.k as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusResult {
    pub value: f64,
    pub argmax_h: f64,
    pub h_grid_size: usize,
    pub converged: bool,
}

/// Discretisation of the sup over `h` and of the averaging integral.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusSettings {
    /// Relative tolerance of each `x`-integral.
    pub tol: f64,
    pub h_grid: usize,
    /// Smallest grid step relative to `min(t, 2/k)`.
    pub h_min_ratio: f64,
    /// Final relative bracket width of the golden-section refinement.
    pub refine_rel: f64,
    pub tau_panels: usize,
    pub tau_points: usize,
}

impl Default for ModulusSettings {
    fn default() -> Self {
        Self { tol: 1e-10, h_grid: 64, h_min_ratio: 1e-4, refine_rel: 1e-6, tau_panels: 64, tau_points: 2 }
    }
}

fn binomials(k: usize) -> Vec<f64> {
    let mut c = vec![1.0; k + 1];
    for i in 1..=k {
        c[i] = c[i - 1] * (k + 1 - i) as f64 / i as f64;
    }
    c
}

fn difference_with(f: &FunctionSpec, r: usize, binom: &[f64], step: f64, x: f64) -> f64 {
    let k = binom.len() - 1;
    let half = k as f64 * step / 2.0;
    if x - half < -1.0 - STENCIL_SLACK || x + half > 1.0 + STENCIL_SLACK {
        return 0.0;
    }
    // a stencil overshooting by rounding is squeezed, not clipped, so its
    // nodes stay equispaced and polynomials are still annihilated
    let lo = (x - half).max(-1.0);
    let hi = (x + half).min(1.0);
    let spacing = if k == 0 { 0.0 } else { (hi - lo) / k as f64 };
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (i, &c) in binom.iter().enumerate() {
        let xi = if i == k { hi } else { (lo + i as f64 * spacing).min(1.0) };
        let v = c * f.value(r, xi);
        if (k - i).is_multiple_of(2) {
            sum += v;
        } else {
            sum -= v;
        }
        scale += v.abs();
    }
    // cancellation noise of an annihilated difference
    if sum.abs() <= 32.0 * f64::EPSILON * scale {
        0.0
    } else {
        sum
    }
}

/// `Δ^k_{step}(f^{(r)}, x) = Σ_i C(k,i) (-1)^{k-i} f^{(r)}(x - k·step/2 + i·step)`,
/// or 0 when the stencil leaves `[-1, 1]`.
pub fn symmetric_difference(spec: &FunctionSpec, r: usize, k: usize, step: f64, x: f64) -> Result<f64> {
    if !(step >= 0.0) {
        return Err(Error::Precondition(format!("step = {step} must be nonnegative")));
    }
    if r > spec.max_derivative_order() {
        return Err(Error::OrderOutOfRange {
            name: spec.name().to_string(),
            requested: r,
            max: spec.max_derivative_order(),
        });
    }
    let half = k as f64 * step / 2.0;
    if x - half < -1.0 || x + half > 1.0 {
        return Ok(0.0);
    }
    Ok(difference_with(spec, r, &binomials(k), step, x))
}

/// Points of `Dom_{kh}` where a stencil node hits a singular point of `f`.
fn stencil_breakpoints(q: &ModulusQuery, h: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let k = q.k as f64;
    for s in q.spec.interior_singularities() {
        for i in 0..=q.k {
            let c = (i as f64 - k / 2.0) * h;
            let x = solve_shift_equation(s, c);
            if x > lo && x < hi && (x + c * phi(x) - s).abs() < 1e-9 {
                out.push(x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// `‖W̄_{kh}^{r/2+α, r/2+β} Δ^k_{hφ}(f^{(r)})‖_{L_p(Dom_{kh})}` for one step `h`.
pub fn difference_norm(q: &ModulusQuery, h: f64, settings: &ModulusSettings) -> NormResult {
    difference_norm_above(q, h, settings, 0.0)
}

/// [`difference_norm`] that may also stop once the error of `∫|·|^p` is
/// below `abs_tol^p`.
fn difference_norm_above(q: &ModulusQuery, h: f64, settings: &ModulusSettings, abs_tol: f64) -> NormResult {
    let delta = q.k as f64 * h;
    let dom = dom_interval(delta);
    if dom.empty || dom.hi <= dom.lo {
        return NormResult { value: 0.0, est_rel_error: 0.0, converged: true };
    }
    let (xi, zeta) = q.hatted_exponents();
    let binom = binomials(q.k);
    let f = &q.spec;
    let r = q.r;
    let g = |x: f64| {
        let d = difference_with(f, r, &binom, h * phi(x), x);
        if d == 0.0 {
            return 0.0;
        }
        hatted_weight_unchecked(xi, zeta, delta, x) * d
    };
    let breakpoints = stencil_breakpoints(q, h, dom.lo, dom.hi);
    let p = q.params.p();
    let plain = WeightParams::unweighted(p).expect("p is admissible");
    if q.params.is_sup() {
        weighted_sup_norm_with(&g, (dom.lo, dom.hi), &plain, &breakpoints)
    } else {
        let opts = NormOptions { tol: settings.tol, breakpoints, abs_tol, ..NormOptions::default() };
        weighted_lp_norm_with(&g, (dom.lo, dom.hi), &plain, &opts)
    }
}

/// `ω^φ_{k,r}(f^{(r)}, t)_{α,β,p}` with default settings.
pub fn weighted_modulus(q: &ModulusQuery) -> Result<ModulusResult> {
    weighted_modulus_with(q, &ModulusSettings::default())
}

/// Sup over `h ∈ (0, min(t, 2/k)]` of [`difference_norm`]: a geometric grid
/// followed by golden-section refinement around the best grid step.
pub fn weighted_modulus_with(q: &ModulusQuery, settings: &ModulusSettings) -> Result<ModulusResult> {
    q.validate()?;
    let h_max = q.h_max();
    let m = settings.h_grid.max(2);
    let ratio = settings.h_min_ratio.powf(1.0 / (m - 1) as f64);
    let grid: Vec<f64> = (0..m).map(|j| h_max * ratio.powi((m - 1 - j) as i32)).collect();
    let p = q.params.p();
    let mut values = vec![0.0; m];
    let mut converged = true;
    let mut best = 0.0f64;
    // largest steps first: later, smaller values only need to be resolved
    // well below the running maximum
    for (i, &h) in grid.iter().enumerate().rev() {
        let res = difference_norm_above(q, h, settings, SCAN_SLACK.powf(1.0 / p) * best);
        converged &= res.converged;
        values[i] = res.value;
        best = best.max(res.value);
    }
    if best <= 0.0 {
        return Ok(ModulusResult { value: 0.0, argmax_h: h_max, h_grid_size: m, converged });
    }
    // candidates for the maximum at full accuracy
    let cutoff = 0.5 * best;
    for (i, &h) in grid.iter().enumerate() {
        if values[i] >= cutoff {
            let res = difference_norm(q, h, settings);
            converged &= res.converged;
            values[i] = res.value;
        }
    }
    let best_i = (0..m).fold(m - 1, |b, i| if values[i] > values[b] { i } else { b });
    let best = values[best_i];
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(m - 1)];
    let width = settings.refine_rel * hi;
    let (h_ref, refined) = golden_max(
        |h| {
            let v = difference_norm(q, h, settings).value;
            if v.is_finite() {
                v
            } else {
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        width,
    );
    let (value, argmax_h) = if refined > best { (refined, h_ref) } else { (best, grid[best_i]) };
    // a maximum pressed against the bracket means the grid missed the peak
    let at_edge = (argmax_h - lo < 2.0 * width && best_i > 0) || (hi - argmax_h < 2.0 * width && best_i < m - 1);
    if refined > best && at_edge {
        converged = false;
    }
    Ok(ModulusResult { value, argmax_h, h_grid_size: m, converged: converged && value.is_finite() })
}

/// `ω*^φ_{k,r}(f^{(r)}, t)_{α,β,p}` with default settings.
pub fn averaged_modulus(q: &ModulusQuery) -> Result<ModulusResult> {
    averaged_modulus_with(q, &ModulusSettings::default())
}

/// `((1/t) ∫_0^t ‖W̄ Δ^k_{τφ}(f^{(r)})‖_p^p dτ)^{1/p}` by composite
/// Gauss–Legendre in `τ`; equal to the sup modulus for `p = ∞`.
pub fn averaged_modulus_with(q: &ModulusQuery, settings: &ModulusSettings) -> Result<ModulusResult> {
    q.validate()?;
    if q.params.is_sup() {
        return weighted_modulus_with(q, settings);
    }
    let p = q.params.p();
    // the integrand vanishes for τ > 2/k
    let upper = q.h_max();
    let rule = crate::quadrature::cached_rule(settings.tau_points.max(1), 0.0, 0.0);
    let panels = settings.tau_panels.max(1);
    let width = upper / panels as f64;
    let mut total = 0.0;
    let mut converged = true;
    let mut argmax_h = upper;
    let mut best = f64::NEG_INFINITY;
    for j in (0..panels).rev() {
        let mid = (j as f64 + 0.5) * width;
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            let tau = mid + 0.5 * width * s;
            let res = difference_norm_above(q, tau, settings, AVERAGE_SLACK.powf(1.0 / p) * best.max(0.0));
            converged &= res.converged;
            if res.value > best {
                best = res.value;
                argmax_h = tau;
            }
            total += 0.5 * width * w * res.value.powf(p);
        }
    }
    let value = (total / q.t).max(0.0).powf(1.0 / p);
    Ok(ModulusResult { value, argmax_h, h_grid_size: panels * rule.len(), converged: converged && value.is_finite() })
}
