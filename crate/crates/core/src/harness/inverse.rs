use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::functions::{certify_class, FunctionSpec};
use crate::moduli::{weighted_modulus_with, ModulusQuery};
use crate::weights::WeightParams;

use super::direct::config_label;
use super::report::{CaseRecord, ReportBuilder};
use super::sequence::{compute_error_sequence_with, ErrorSequence};
use super::{refine_grid, HarnessSettings, InequalityReport};

/// Power-law model `E_n ≈ scale · n^{-gamma}` of the last half of a ladder.
fn tail_model(seq: &ErrorSequence, n_max: usize) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = seq
        .entries
        .iter()
        .filter(|e| e.n * 2 > n_max && !e.failed() && e.error > 0.0)
        .map(|e| ((e.n as f64).ln(), e.error.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let (slope, _) = least_squares(&pts);
    let gamma = -slope;
    // envelope rather than mean, so the model bounds every point
    let scale = pts.iter().map(|(x, y)| (y + gamma * x).exp()).fold(0.0, f64::max);
    Some((gamma, scale))
}

/// Slope and intercept of the least-squares line through `pts`.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `ω^φ_{k,r}(f^{(r)}, t) ≤ Σ_{n > max(N,1/t)} r n^{r-1} E_n
///   + t^k Σ_{N ≤ n ≤ max(N,1/t)} n^{k+r-1} E_n + t^k E_{k+r}`,
/// all constants set to 1. The first sum is absent for `r = 0`.
///
/// The first sum is cut at `n_max`. The right-hand side never includes the
/// remainder, so each ratio overstates the true one; the remainder estimated
/// from a power-law fit of the last half of the ladder is recorded in a note
/// whenever it exceeds `tail_rel` of the right-hand side, and a remainder
/// that does not converge under the fit fails the case.
#[allow(clippy::too_many_arguments)]
pub fn verify_inverse(
    spec: &FunctionSpec,
    params: &WeightParams,
    k: usize,
    r: usize,
    big_n: usize,
    t_grid: &[f64],
    n_max: usize,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    if params.p() < 1.0 {
        return Err(Error::Precondition(format!("the inverse theorem needs 1 ≤ p ≤ ∞, got p = {}", params.p())));
    }
    if !params.shifted_nonnegative(r) {
        return Err(Error::Precondition(format!(
            "the inverse theorem needs r/2 + α ≥ 0 and r/2 + β ≥ 0 (r = {r}, α = {}, β = {})",
            params.alpha(),
            params.beta()
        )));
    }
    if k == 0 || big_n == 0 {
        return Err(Error::Precondition("k and N must be positive".into()));
    }
    if t_grid.is_empty() {
        return Err(Error::Precondition("empty t grid".into()));
    }
    if let Some(t) = t_grid.iter().find(|&&t| !(t > 0.0) || t * (n_max as f64) < 1.0 - 1e-12) {
        return Err(Error::Precondition(format!("t = {t} must satisfy 1/n_max ≤ t with n_max = {n_max}")));
    }
    let mut rep = ReportBuilder::new("inverse", settings);
    let label = config_label(spec.name(), params, k, r);
    if r > spec.max_derivative_order() || !certify_class(spec, r, params) {
        rep.exclude(format!("{label}: f is not certified in B^{r}_p"));
        return Ok(rep.finish());
    }
    let hi = n_max.max(k + r).max(big_n);
    let seq = compute_error_sequence_with(spec, params, 1..=hi, (-1.0, 1.0), &settings.solver)?;
    if let Some(bad) = seq.failures().next() {
        rep.fail(format!("{label}: E_{} failed: {}", bad.n, bad.note.clone().unwrap_or_default()));
        return Ok(rep.finish());
    }
    let tail = if r > 0 { tail_model(&seq, n_max) } else { None };
    let query = ModulusQuery::new(spec.clone(), k, r, 1.0, *params);
    let coarse_ts = t_grid.to_vec();
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for t in refine_grid(t_grid) {
        let split = big_n.max((1.0 / t).floor() as usize);
        let rf = r as f64;
        let first: f64 =
            if r == 0 { 0.0 } else { (split + 1..=n_max).map(|n| rf * (n as f64).powf(rf - 1.0) * seq.error(n)).sum() };
        let second: f64 =
            t.powi(k as i32) * (big_n..=split).map(|n| (n as f64).powi((k + r) as i32 - 1) * seq.error(n)).sum::<f64>();
        let third = t.powi(k as i32) * seq.error(k + r);
        let rhs = first + second + third;
        if r > 0 {
            match tail {
                Some((gamma, scale)) if gamma > rf => {
                    let start = (split.max(n_max) as f64) + 0.5;
                    let remainder = rf * scale * start.powf(rf - gamma) / (gamma - rf);
                    if remainder > settings.tail_rel * rhs {
                        rep.note(format!(
                            "{label} t={t}: tail-truncated at n_max = {n_max}, omitted remainder ≈ {remainder:e} (fitted decay {gamma:.3})"
                        ));
                    }
                }
                Some((gamma, _)) => {
                    rep.fail(format!("{label} t={t}: tail does not converge (fitted decay {gamma:.3} ≤ r)"));
                }
                None => {
                    rep.note(format!("{label} t={t}: tail-truncated at n_max = {n_max}, remainder not estimable"));
                }
            }
        }
        let omega = weighted_modulus_with(&query.with_t(t), &settings.modulus)?;
        if !omega.converged {
            rep.note(format!("{label} t={t}: modulus not converged"));
        }
        if let Some(ratio) = rep.case(CaseRecord::new("inverse", spec.name(), params, k, r, t, omega.value, rhs)) {
            fine = fine.max(ratio);
            if coarse_ts.contains(&t) {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.config(label, coarse, fine, settings.stability_factor);
    Ok(rep.finish())
}

/// `ω^φ_{k,0}(f, ĉ/n)^p ≤ n^{-kp} Σ_{m=1}^n m^{kp-1} E_m^p` for `0 < p < 1`.
///
/// The `E_m` are upper bounds from the quasi-norm solver, which can only
/// enlarge the right-hand side. When the check fails at the requested `ĉ`
/// it is repeated once at `settings.c_hat_retry`.
pub fn verify_inverse_smallp(
    spec: &FunctionSpec,
    params: &WeightParams,
    k: usize,
    n_range: RangeInclusive<usize>,
    c_hat: f64,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    let p = params.p();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Precondition(format!("the small-p inverse theorem needs 0 < p < 1, got p = {p}")));
    }
    if params.alpha() < 0.0 || params.beta() < 0.0 {
        return Err(Error::Precondition("the small-p inverse theorem needs α, β ≥ 0".into()));
    }
    if !(c_hat > 0.0 && c_hat <= 1.0) {
        return Err(Error::Precondition(format!("ĉ = {c_hat} must lie in (0, 1]")));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let first = smallp_once(spec, params, k, n_range.clone(), c_hat, settings)?;
    if first.passed || c_hat <= settings.c_hat_retry {
        return Ok(first);
    }
    let mut retry = smallp_once(spec, params, k, n_range, settings.c_hat_retry, settings)?;
    retry.notes.insert(
        0,
        format!(
            "failed at ĉ = {c_hat} (fitted constant {}), retried at ĉ = {}",
            first.fitted_constant, settings.c_hat_retry
        ),
    );
    Ok(retry)
}

fn smallp_once(
    spec: &FunctionSpec,
    params: &WeightParams,
    k: usize,
    n_range: RangeInclusive<usize>,
    c_hat: f64,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    let p = params.p();
    let mut rep = ReportBuilder::new("inverse-smallp", settings);
    let label = format!("{} ĉ={c_hat}", config_label(spec.name(), params, k, 0));
    rep.note("E_m are quasi-norm upper bounds; they can only enlarge the right-hand side");
    let seq = compute_error_sequence_with(spec, params, 1..=hi, (-1.0, 1.0), &settings.solver)?;
    if let Some(bad) = seq.failures().next() {
        rep.fail(format!("{label}: E_{} failed: {}", bad.n, bad.note.clone().unwrap_or_default()));
        return Ok(rep.finish());
    }
    let query = ModulusQuery::new(spec.clone(), k, 0, 1.0, *params);
    let kp = k as f64 * p;
    let mut partial = 0.0;
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for n in 1..=hi {
        partial += (n as f64).powf(kp - 1.0) * seq.error(n).powf(p);
        if n < lo.max(1) {
            continue;
        }
        let omega = weighted_modulus_with(&query.with_t(c_hat / n as f64), &settings.modulus)?;
        if !omega.converged {
            rep.note(format!("{label} n={n}: modulus not converged"));
        }
        let lhs = omega.value.powf(p);
        let rhs = (n as f64).powf(-kp) * partial;
        if let Some(ratio) = rep.case(CaseRecord::new("inverse-smallp", spec.name(), params, k, 0, n as f64, lhs, rhs))
        {
            fine = fine.max(ratio);
            if 2 * n <= hi {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.config(label, coarse, fine, settings.stability_factor);
    Ok(rep.finish())
}
