use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bestapprox::{best_approx_with, local_best_approx_with, local_interval};
use crate::error::{Error, Result};
use crate::functions::{certify_class, FunctionSpec};
use crate::moduli::{averaged_modulus_with, weighted_modulus_with, ModulusQuery};
use crate::weights::{dom_interval, WeightParams};

use super::direct::config_label;
use super::report::{CaseRecord, ReportBuilder};
use super::{dyadic_grid, refine_grid, HarnessSettings, InequalityReport};

/// Rejection draws per sample before giving up on a step `h`.
const MAX_REJECTIONS: usize = 1000;

/// Whitney-type estimates. The report's `theorem` column separates the
/// sub-checks:
///
/// * `whitney-local`: `E_k(f, [x0 - hφ(x0)/2, x0 + hφ(x0)/2]) ≤ c ω*_{k,0}(f, θh)`
///   over `samples` seeded draws of `h ∈ (0, 2]` and `x0 ∈ Dom_h`;
/// * `whitney-global`: `E_k(f) ≤ c ω*_{k,0}(f, θ)` (the draw `x0 = 0, h = 2`);
/// * `whitney-endpoint`: `E_k(f, [1 - t², 1])` and `E_k(f, [-1, -1 + t²])`
///   against `ω*_{k,0}(f, t)` over a dyadic `t` grid;
/// * `whitney-derivative` (`r ≥ 1`): `E_{k+r}(f) ≤ c ω_{k,r}(f^{(r)}, θ)`.
///
/// Sample stability compares the first half of the draws with all of them.
pub fn verify_whitney(
    specs: &[FunctionSpec],
    params_list: &[WeightParams],
    k: usize,
    r: usize,
    theta: f64,
    samples: usize,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::Precondition(format!("θ = {theta} must lie in (0, 1]")));
    }
    if k == 0 || samples == 0 {
        return Err(Error::Precondition("k and the sample count must be positive".into()));
    }
    for params in params_list {
        if r == 0 {
            if params.alpha() < 0.0 || params.beta() < 0.0 {
                return Err(Error::Precondition(format!(
                    "the r = 0 Whitney estimates need α, β ≥ 0, got α = {}, β = {}",
                    params.alpha(),
                    params.beta()
                )));
            }
        } else if params.p() < 1.0 || !params.shifted_nonnegative(r) {
            return Err(Error::Precondition(format!(
                "the r ≥ 1 Whitney estimate needs 1 ≤ p ≤ ∞ and r/2 + α, r/2 + β ≥ 0 (p = {}, α = {}, β = {})",
                params.p(),
                params.alpha(),
                params.beta()
            )));
        }
    }
    let jobs: Vec<(usize, &FunctionSpec, &WeightParams)> = specs
        .iter()
        .flat_map(|s| params_list.iter().map(move |p| (s, p)))
        .enumerate()
        .map(|(i, (s, p))| (i, s, p))
        .collect();
    let parts: Vec<Result<InequalityReport>> = jobs
        .par_iter()
        .map(|&(i, spec, params)| {
            if r == 0 {
                whitney_config(spec, params, k, theta, samples, mix_seed(settings.seed, i), settings)
            } else {
                derivative_config(spec, params, k, r, theta, settings)
            }
        })
        .collect();
    let mut out = ReportBuilder::new("whitney", settings);
    for part in parts {
        out.absorb(part?);
    }
    Ok(out.finish())
}

/// Independent stream per configuration, fixed by the base seed.
fn mix_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// A uniform `h ∈ (0, 2]` and a uniform `x0 ∈ Dom_h` for which the local
/// interval can be built.
fn draw(rng: &mut ChaCha8Rng) -> Option<(f64, f64)> {
    let h = 2.0 * (1.0 - rng.gen::<f64>());
    let dom = dom_interval(h);
    for _ in 0..MAX_REJECTIONS {
        let x0 = rng.gen_range(-1.0..=1.0);
        if dom.contains(x0) && local_interval(x0, h).is_ok() {
            return Some((x0, h));
        }
    }
    None
}

fn whitney_config(
    spec: &FunctionSpec,
    params: &WeightParams,
    k: usize,
    theta: f64,
    samples: usize,
    seed: u64,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    let mut rep = ReportBuilder::new("whitney", settings);
    let label = config_label(spec.name(), params, k, 0);
    if !certify_class(spec, 0, params) {
        rep.exclude(format!("{label}: f is not certified in L_p"));
        return Ok(rep.finish());
    }
    let query = ModulusQuery::new(spec.clone(), k, 0, 1.0, *params);
    let star = |t: f64, rep: &mut ReportBuilder| -> Result<f64> {
        let m = averaged_modulus_with(&query.with_t(t), &settings.modulus)?;
        if !m.converged {
            rep.note(format!("{label} t={t}: averaged modulus not converged"));
        }
        Ok(m.value)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for i in 0..samples {
        let Some((x0, h)) = draw(&mut rng) else {
            rep.note(format!("{label}: sample {i} rejected"));
            continue;
        };
        let lhs = match local_best_approx_with(spec, k, x0, h, params, &settings.solver) {
            Ok(res) => res.error,
            Err(e) => {
                rep.note(format!("{label}: sample x0={x0} h={h} rejected: {e}"));
                continue;
            }
        };
        let rhs = star(theta * h, &mut rep)?;
        if let Some(ratio) = rep.case(CaseRecord::new("whitney-local", spec.name(), params, k, 0, h, lhs, rhs)) {
            fine = fine.max(ratio);
            if 2 * i < samples {
                coarse = coarse.max(ratio);
            }
        }
    }
    rep.config(format!("whitney-local {label}"), coarse, fine, settings.stability_factor);

    let global = best_approx_with(spec, k, (-1.0, 1.0), params, &settings.solver, None)?.error;
    let rhs = star(theta, &mut rep)?;
    let g = rep.case(CaseRecord::new("whitney-global", spec.name(), params, k, 0, theta, global, rhs)).unwrap_or(0.0);
    rep.config(format!("whitney-global {label}"), g, g, settings.stability_factor);

    let grid = dyadic_grid(6);
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for t in refine_grid(&grid) {
        let rhs = star(t, &mut rep)?;
        for interval in [(1.0 - t * t, 1.0), (-1.0, -1.0 + t * t)] {
            let lhs = best_approx_with(spec, k, interval, params, &settings.solver, None)?.error;
            if let Some(ratio) = rep.case(CaseRecord::new("whitney-endpoint", spec.name(), params, k, 0, t, lhs, rhs)) {
                fine = fine.max(ratio);
                if grid.contains(&t) {
                    coarse = coarse.max(ratio);
                }
            }
        }
    }
    rep.config(format!("whitney-endpoint {label}"), coarse, fine, settings.stability_factor);
    Ok(rep.finish())
}

fn derivative_config(
    spec: &FunctionSpec,
    params: &WeightParams,
    k: usize,
    r: usize,
    theta: f64,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    let mut rep = ReportBuilder::new("whitney", settings);
    let label = config_label(spec.name(), params, k, r);
    if r > spec.max_derivative_order() || !certify_class(spec, r, params) {
        rep.exclude(format!("{label}: f is not certified in B^{r}_p"));
        return Ok(rep.finish());
    }
    let lhs = best_approx_with(spec, k + r, (-1.0, 1.0), params, &settings.solver, None)?.error;
    let m = weighted_modulus_with(&ModulusQuery::new(spec.clone(), k, r, theta, *params), &settings.modulus)?;
    if !m.converged {
        rep.note(format!("{label}: modulus not converged"));
    }
    let c =
        rep.case(CaseRecord::new("whitney-derivative", spec.name(), params, k, r, theta, lhs, m.value)).unwrap_or(0.0);
    rep.config(format!("whitney-derivative {label}"), c, c, settings.stability_factor);
    Ok(rep.finish())
}
