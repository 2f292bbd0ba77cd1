//! Empirical checks of the direct, inverse, Whitney-type, Bernstein and
//! sharp Marchaud/Jackson inequalities.
//!
//! Every theorem constant is unknown, so each check evaluates both sides over
//! a sweep of cases, reports `max lhs/rhs` as the fitted constant, and asks
//! that it be finite, below a ceiling, and stable when the sweep is refined
//! once.

mod appendix;
mod bernstein;
mod decay;
mod direct;
mod inverse;
mod report;
mod sequence;
mod whitney;

pub use appendix::verify_appendix;
pub use bernstein::verify_bernstein;
pub use decay::{fit_decay, verify_decay, DecayProfile};
pub(crate) use direct::check_direct_params;
pub use direct::verify_direct;
pub use inverse::{verify_inverse, verify_inverse_smallp};
pub use report::{write_csv, write_summary, CaseRecord, ConfigSummary, InequalityReport, CSV_HEADER};
pub use sequence::{
    clear_cache, compute_error_sequence, compute_error_sequence_with, prime_cache, ErrorSequence, SequenceEntry,
};
pub use whitney::verify_whitney;

use crate::bestapprox::SolverSettings;
use crate::moduli::ModulusSettings;

/// Budgets, thresholds and seeds shared by all checks.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessSettings {
    pub solver: SolverSettings,
    pub modulus: ModulusSettings,
    /// A ratio above this counts as a violation rather than a large constant.
    pub ratio_ceiling: f64,
    /// Cases with both sides below this are skipped as `0/0`.
    pub degenerate_threshold: f64,
    /// Allowed growth factor of a fitted constant under one refinement.
    pub stability_factor: f64,
    /// The same for the direct theorem when `n_max` doubles.
    pub direct_stability: f64,
    /// The same for the Bernstein check when the sample count doubles.
    pub bernstein_stability: f64,
    /// Relative size of a neglected series tail.
    pub tail_rel: f64,
    pub whitney_samples: usize,
    pub seed: u64,
    /// `ĉ` used when the small-`p` inverse check fails at the requested one.
    pub c_hat_retry: f64,
    /// Composite panels of the `u`-integrals in the appendix corollaries.
    pub appendix_panels: usize,
}

impl Default for HarnessSettings {
    fn default() -> Self {
        Self {
            solver: SolverSettings::default(),
            modulus: ModulusSettings::default(),
            ratio_ceiling: 1e6,
            degenerate_threshold: 1e-12,
            stability_factor: 2.0,
            direct_stability: 1.5,
            bernstein_stability: 1.2,
            tail_rel: 1e-12,
            whitney_samples: 64,
            seed: 20240611,
            c_hat_retry: 0.5,
            appendix_panels: 32,
        }
    }
}

/// `{2^{-j}}` for `j = 1..=levels`.
pub fn dyadic_grid(levels: usize) -> Vec<f64> {
    (1..=levels).map(|j| 0.5f64.powi(j as i32)).collect()
}

/// `grid` with the geometric mean inserted between neighbours.
pub fn refine_grid(grid: &[f64]) -> Vec<f64> {
    let mut sorted = grid.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.dedup();
    let mut out = Vec::with_capacity(2 * sorted.len());
    for (i, &t) in sorted.iter().enumerate() {
        out.push(t);
        if let Some(&next) = sorted.get(i + 1) {
            out.push((t * next).sqrt());
        }
    }
    out
}
