use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::functions::{certify_class, FunctionSpec};
use crate::moduli::{weighted_modulus_with, ModulusQuery};
use crate::quadrature::cached_rule;
use crate::weights::WeightParams;

use super::direct::config_label;
use super::report::{CaseRecord, ReportBuilder};
use super::sequence::compute_error_sequence_with;
use super::{refine_grid, HarnessSettings, InequalityReport};

/// Memoised `u ↦ ω^φ_{k,r}(f^{(r)}, u)`.
struct ModulusTable<'a> {
    query: ModulusQuery,
    settings: &'a HarnessSettings,
    values: HashMap<u64, f64>,
    unconverged: usize,
}

impl<'a> ModulusTable<'a> {
    fn new(spec: &FunctionSpec, k: usize, r: usize, params: &WeightParams, settings: &'a HarnessSettings) -> Self {
        Self {
            query: ModulusQuery::new(spec.clone(), k, r, 1.0, *params),
            settings,
            values: HashMap::new(),
            unconverged: 0,
        }
    }

    fn at(&mut self, u: f64) -> Result<f64> {
        if let Some(&v) = self.values.get(&u.to_bits()) {
            return Ok(v);
        }
        let m = weighted_modulus_with(&self.query.with_t(u), &self.settings.modulus)?;
        if !m.converged {
            self.unconverged += 1;
        }
        self.values.insert(u.to_bits(), m.value);
        Ok(m.value)
    }

    /// `∫_a^b ω(u)^e u^{-(g+1)} du` by composite 2-point Gauss in `ln u`.
    fn integral(&mut self, a: f64, b: f64, e: f64, g: f64, panels: usize) -> Result<f64> {
        if !(a < b) {
            return Ok(0.0);
        }
        let rule = cached_rule(2, 0.0, 0.0);
        let (la, lb) = (a.ln(), b.ln());
        let width = (lb - la) / panels as f64;
        let mut total = 0.0;
        for j in 0..panels {
            let mid = la + (j as f64 + 0.5) * width;
            for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
                let u = (mid + 0.5 * width * s).exp();
                // du = u dv
                total += 0.5 * width * w * self.at(u)?.powf(e) * u.powf(-g);
            }
        }
        Ok(total)
    }
}

/// The sharp Marchaud inequality, the sharp Jackson inequality and their
/// combined corollary for `1 < p < ∞`, with every constant set to 1. The
/// `theorem` column is `marchaud`, `jackson` or `final-corollary`, and
/// each gets its own stability entry.
///
/// * marchaud, per `t`: `ω_{m,r}(f^{(r)}, t)` against
///   `t^m (∫_t^1 ω_{m+1,r}(u)^q u^{-mq-1} du + E_m(f^{(r)})^q)^{1/q}`, `q = min(2, p)`;
/// * jackson, per level `L`: `2^{-Lm} (Σ_{j=j0}^{L} 2^{mjs} E_{2^j}(f^{(r)})^s)^{1/s}`
///   against `ω_{m,r}(f^{(r)}, 2^{-L})`, `s = max(p, 2)`, `2^{j0} ≥ m`, `2^L ≤ n_max`;
/// * final-corollary, per `t ≤ 1/m`: `t^m (∫_t^{1/m} ω_{m+1,r}(u)^s u^{-ms-1} du)^{1/s}`
///   against `ω_{m,r}(f^{(r)}, t)`.
///
/// The `E` terms of `f^{(r)}` carry the weight `w_{α,β} φ^r`. The `u`
/// integrals use `settings.appendix_panels` panels. `t` stability compares
/// `t_grid` with its refinement; Jackson stability drops the top level.
pub fn verify_appendix(
    spec: &FunctionSpec,
    params: &WeightParams,
    m: usize,
    r: usize,
    t_grid: &[f64],
    n_max: usize,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    let p = params.p();
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Precondition(format!("the appendix corollaries need 1 < p < ∞, got p = {p}")));
    }
    if !params.shifted_nonnegative(r) {
        return Err(Error::Precondition(format!(
            "the appendix corollaries need r/2 + α ≥ 0 and r/2 + β ≥ 0 (r = {r}, α = {}, β = {})",
            params.alpha(),
            params.beta()
        )));
    }
    if r > spec.max_derivative_order() || !certify_class(spec, r, params) {
        return Err(Error::Precondition(format!("{} is not certified for derivative order {r}", spec.name())));
    }
    if m == 0 || n_max < 2 * m {
        return Err(Error::Config(format!("empty dyadic range: n_max = {n_max} must be at least 2m = {}", 2 * m)));
    }
    if let Some(t) = t_grid.iter().find(|&&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Error::Precondition(format!("t = {t} must lie in (0, 1]")));
    }
    let q = p.min(2.0);
    let s = p.max(2.0);
    let mf = m as f64;
    let label = config_label(spec.name(), params, m, r);
    let deriv = spec.derivative(r)?;
    let shifted = params.with_phi_power(r)?;
    let seq = compute_error_sequence_with(&deriv, &shifted, 1..=n_max, (-1.0, 1.0), &settings.solver)?;
    let mut rep = ReportBuilder::new("appendix", settings);
    if let Some(bad) = seq.failures().next() {
        rep.fail(format!("{label}: E_{} failed: {}", bad.n, bad.note.clone().unwrap_or_default()));
        return Ok(rep.finish());
    }
    let mut low = ModulusTable::new(spec, m, r, params, settings);
    let mut high = ModulusTable::new(spec, m + 1, r, params, settings);
    let panels = settings.appendix_panels.max(1);
    let refined = refine_grid(t_grid);

    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for &t in &refined {
        let integral = high.integral(t, 1.0, q, mf * q, panels)?;
        let rhs = t.powf(mf) * (integral + seq.error(m).powf(q)).powf(1.0 / q);
        let lhs = low.at(t)?;
        if let Some(ratio) = rep.case(CaseRecord::new("marchaud", spec.name(), params, m, r, t, lhs, rhs)) {
            fine = fine.max(ratio);
            if t_grid.contains(&t) {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.config(format!("marchaud {label}"), coarse, fine, settings.stability_factor);

    let j0 = (mf.log2().ceil().max(0.0)) as u32;
    let top = (n_max as f64).log2().floor() as u32;
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    let mut partial = 0.0;
    for level in j0..=top {
        let n = 1usize << level;
        partial += 2f64.powf(mf * level as f64 * s) * seq.error(n).powf(s);
        let lhs = 2f64.powf(-(level as f64) * mf) * partial.powf(1.0 / s);
        let t = 0.5f64.powi(level as i32);
        let rhs = low.at(t)?;
        if let Some(ratio) = rep.case(CaseRecord::new("jackson", spec.name(), params, m, r, t, lhs, rhs)) {
            fine = fine.max(ratio);
            if level < top || top == j0 {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.config(format!("jackson {label}"), coarse, fine, settings.stability_factor);

    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for &t in refined.iter().filter(|&&t| t <= 1.0 / mf) {
        let integral = high.integral(t, 1.0 / mf, s, mf * s, panels)?;
        let lhs = t.powf(mf) * integral.powf(1.0 / s);
        let rhs = low.at(t)?;
        if let Some(ratio) = rep.case(CaseRecord::new("final-corollary", spec.name(), params, m, r, t, lhs, rhs)) {
            fine = fine.max(ratio);
            if t_grid.contains(&t) {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.config(format!("final-corollary {label}"), coarse, fine, settings.stability_factor);

    let unconverged = low.unconverged + high.unconverged;
    if unconverged > 0 {
        rep.note(format!("{label}: {unconverged} modulus evaluations not converged"));
    }
    rep.note(format!("q = {q}, s = {s}"));
    Ok(rep.finish())
}
