use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::moduli::{weighted_modulus_with, ModulusQuery};
use crate::weights::WeightParams;

use super::direct::config_label;
use super::inverse::least_squares;
use super::report::{CaseRecord, ReportBuilder};
use super::sequence::ErrorSequence;
use super::{refine_grid, HarnessSettings, InequalityReport};

/// Power profile `φ(t) = scale · t^γ` with `E_n ≤ φ(1/(n+1))` on the fitted
/// entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayProfile {
    pub gamma: Option<f64>,
    pub scale: f64,
    /// `(n, E_n)` pairs the fit used.
    pub points: Vec<(usize, f64)>,
}

impl DecayProfile {
    /// `φ(t)`, nondecreasing on `[0, ∞)` and zero at `0`.
    pub fn phi(&self, t: f64) -> f64 {
        match self.gamma {
            Some(g) if t > 0.0 => self.scale * t.powf(g),
            _ => 0.0,
        }
    }
}

/// Least-squares slope of `ln E_n` against `ln n` over entries with
/// `n ≥ n_min` and `E_n > 1e-12`.
pub fn fit_decay(seq: &ErrorSequence, n_min: usize) -> Result<DecayProfile> {
    let points: Vec<(usize, f64)> =
        seq.entries.iter().filter(|e| e.n >= n_min && !e.failed() && e.error > 1e-12).map(|e| (e.n, e.error)).collect();
    if points.len() < 6 {
        return Err(Error::InsufficientData(format!(
            "{} entries with n ≥ {n_min} and E_n > 1e-12; at least 6 are needed",
            points.len()
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, e)| ((n as f64).ln(), e.ln())).collect();
    let gamma = -least_squares(&logs).0;
    let scale = points.iter().map(|&(n, e)| e * ((n + 1) as f64).powf(gamma)).fold(0.0, f64::max);
    Ok(DecayProfile { gamma: Some(gamma), scale, points })
}

/// Cross-check of a fitted rate: `ω^φ_{k,r}(f^{(r)}, t) ≤ C t^{γ-r}` over
/// `t_grid`, with `C` the fitted constant and its stability under one
/// refinement of the grid. Needs `r < γ < k + r`.
pub fn verify_decay(
    spec: &FunctionSpec,
    params: &WeightParams,
    k: usize,
    r: usize,
    profile: &DecayProfile,
    t_grid: &[f64],
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    let gamma = profile.gamma.ok_or_else(|| Error::InsufficientData("profile has no fitted rate".into()))?;
    let rf = r as f64;
    if !(gamma > rf && gamma < (k + r) as f64) {
        return Err(Error::Precondition(format!(
            "the fitted rate {gamma} must satisfy r < γ < k + r (k = {k}, r = {r})"
        )));
    }
    let label = config_label(spec.name(), params, k, r);
    let query = ModulusQuery::new(spec.clone(), k, r, 1.0, *params);
    let mut rep = ReportBuilder::new("decay", settings);
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for t in refine_grid(t_grid) {
        let omega = weighted_modulus_with(&query.with_t(t), &settings.modulus)?;
        if !omega.converged {
            rep.note(format!("{label} t={t}: modulus not converged"));
        }
        if let Some(ratio) =
            rep.case(CaseRecord::new("decay", spec.name(), params, k, r, t, omega.value, t.powf(gamma - rf)))
        {
            fine = fine.max(ratio);
            if t_grid.contains(&t) {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.note(format!("fitted decay γ = {gamma}"));
    rep.config(label, coarse, fine, settings.stability_factor);
    Ok(rep.finish())
}
