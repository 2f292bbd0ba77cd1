use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::{certify_class, FunctionSpec};
use crate::moduli::{weighted_modulus_with, ModulusQuery};
use crate::weights::WeightParams;

use super::report::{CaseRecord, ReportBuilder};
use super::sequence::compute_error_sequence_with;
use super::{HarnessSettings, InequalityReport};

/// Preconditions of the two direct theorems.
pub(crate) fn check_direct_params(params: &WeightParams, r: usize) -> Result<()> {
    if r == 0 {
        if params.alpha() < 0.0 || params.beta() < 0.0 {
            return Err(Error::Precondition(format!(
                "the direct theorem with r = 0 needs α, β ≥ 0, got α = {}, β = {}",
                params.alpha(),
                params.beta()
            )));
        }
    } else {
        if params.p() < 1.0 {
            return Err(Error::Precondition(format!(
                "the direct theorem with r ≥ 1 requires 1 ≤ p ≤ ∞ and is not valid for 0 < p < 1 (p = {})",
                params.p()
            )));
        }
        if !params.shifted_nonnegative(r) {
            return Err(Error::Precondition(format!(
                "the direct theorem needs r/2 + α ≥ 0 and r/2 + β ≥ 0 (r = {r}, α = {}, β = {})",
                params.alpha(),
                params.beta()
            )));
        }
    }
    Ok(())
}

pub(crate) fn config_label(spec: &str, params: &WeightParams, k: usize, r: usize) -> String {
    format!("{spec} α={} β={} p={} k={k} r={r}", params.alpha(), params.beta(), params.p())
}

/// `E_n ≤ c n^{-r} ω^φ_{k,r}(f^{(r)}, 1/n)` for `n ≥ k + r`.
///
/// A configuration is stable when its maximum ratio over all `n` exceeds
/// the maximum over `n ≤ n_max/2` by less than `direct_stability`.
pub fn verify_direct(
    specs: &[FunctionSpec],
    params_list: &[WeightParams],
    k: usize,
    r: usize,
    n_range: RangeInclusive<usize>,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    for params in params_list {
        check_direct_params(params, r)?;
    }
    let lo = (*n_range.start()).max(k + r);
    let hi = *n_range.end();
    if lo > hi {
        return Err(Error::Precondition(format!("empty n range: need n ≥ k + r = {}", k + r)));
    }
    let jobs: Vec<(&FunctionSpec, &WeightParams)> =
        specs.iter().flat_map(|s| params_list.iter().map(move |p| (s, p))).collect();
    let parts: Vec<Result<InequalityReport>> =
        jobs.par_iter().map(|(spec, params)| direct_config(spec, params, k, r, lo, hi, settings)).collect();
    let mut out = ReportBuilder::new("direct", settings);
    for part in parts {
        out.absorb(part?);
    }
    Ok(out.finish())
}

fn direct_config(
    spec: &FunctionSpec,
    params: &WeightParams,
    k: usize,
    r: usize,
    lo: usize,
    hi: usize,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    let mut rep = ReportBuilder::new("direct", settings);
    let label = config_label(spec.name(), params, k, r);
    if r > spec.max_derivative_order() || !certify_class(spec, r, params) {
        rep.exclude(format!("{label}: f is not certified in B^{r}_p"));
        return Ok(rep.finish());
    }
    let seq = compute_error_sequence_with(spec, params, 1..=hi, (-1.0, 1.0), &settings.solver)?;
    let query = ModulusQuery::new(spec.clone(), k, r, 1.0, *params);
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for n in lo..=hi {
        let entry = seq.get(n).expect("entry computed");
        if entry.failed() {
            rep.fail(format!("{label} n={n}: {}", entry.note.clone().unwrap_or_default()));
            continue;
        }
        let t = 1.0 / n as f64;
        let omega = weighted_modulus_with(&query.with_t(t), &settings.modulus)?;
        if !omega.converged {
            rep.note(format!("{label} n={n}: modulus not converged"));
        }
        let rhs = omega.value / (n as f64).powi(r as i32);
        if let Some(ratio) = rep.case(CaseRecord::new("direct", spec.name(), params, k, r, n as f64, entry.error, rhs))
        {
            fine = fine.max(ratio);
            if 2 * n <= hi {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.config(label, coarse, fine, settings.direct_stability);
    Ok(rep.finish())
}
