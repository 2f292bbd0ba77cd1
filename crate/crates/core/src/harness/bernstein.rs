use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bestapprox::{bernstein_sides, Polynomial};
use crate::error::{Error, Result};
use crate::weights::WeightParams;

use super::report::{CaseRecord, ReportBuilder};
use super::{HarnessSettings, InequalityReport};

/// `‖w φ^r q^{(r)}‖_p ≤ c n^r ‖w q‖_p` over `samples` random `q ∈ Π_n` per
/// degree bound `n`, with Chebyshev coefficients uniform in `[-1, 1]`.
///
/// Stability compares the first half of the samples with all of them and
/// uses `settings.bernstein_stability`.
pub fn verify_bernstein(
    degrees: &[usize],
    r: usize,
    params: &WeightParams,
    samples: usize,
    settings: &HarnessSettings,
) -> Result<InequalityReport> {
    if r == 0 || samples == 0 {
        return Err(Error::Precondition("r and the sample count must be positive".into()));
    }
    if !params.shifted_nonnegative(r) {
        return Err(Error::Precondition(format!(
            "the Bernstein inequality needs r/2 + α ≥ 0 and r/2 + β ≥ 0 (α = {}, β = {})",
            params.alpha(),
            params.beta()
        )));
    }
    let mut rep = ReportBuilder::new("bernstein", settings);
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for &n in degrees {
        if n <= r {
            rep.note(format!("n = {n} ≤ r: every q^{{(r)}} vanishes, skipped"));
            continue;
        }
        for i in 0..samples {
            let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let q = Polynomial::new(coeffs, (-1.0, 1.0))?;
            let (lhs, rhs) = bernstein_sides(&q, n, r, params)?;
            if let Some(ratio) = rep.case(CaseRecord::new("bernstein", "random", params, 0, r, n as f64, lhs, rhs)) {
                fine = fine.max(ratio);
                if 2 * i < samples {
                    coarse = coarse.max(ratio);
                }
            }
        }
    }
    let label = format!("α={} β={} p={} r={r}", params.alpha(), params.beta(), params.p());
    rep.config(label, coarse, fine, settings.bernstein_stability);
    Ok(rep.finish())
}
