use std::collections::HashMap;
use std::ops::RangeInclusive;

use once_cell::sync::Lazy;
use parking_lot::Mutex;

use crate::bestapprox::{best_approx_with, Certificate, Polynomial, SolverSettings};
use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::weights::WeightParams;

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceEntry {
    pub n: usize,
    /// `E_n`, or NaN when the solver failed.
    pub error: f64,
    /// `None` marks a failed entry.
    pub certificate: Option<Certificate>,
    pub converged: bool,
    /// Solver failure message, or a remark such as a nesting adjustment.
    pub note: Option<String>,
}

impl SequenceEntry {
    pub fn failed(&self) -> bool {
        self.certificate.is_none()
    }
}

/// `E_n(f, [u, v])_{α,β,p}` over a range of `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSequence {
    pub spec_name: String,
    pub params: WeightParams,
    pub interval: (f64, f64),
    pub entries: Vec<SequenceEntry>,
}

impl ErrorSequence {
    pub fn get(&self, n: usize) -> Option<&SequenceEntry> {
        self.entries.binary_search_by_key(&n, |e| e.n).ok().map(|i| &self.entries[i])
    }

    /// `E_n`, NaN if missing or failed.
    pub fn error(&self, n: usize) -> f64 {
        self.get(n).map_or(f64::NAN, |e| e.error)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SequenceEntry> {
        self.entries.iter().filter(|e| e.failed())
    }
}

#[derive(Clone)]
struct Cached {
    error: f64,
    certificate: Certificate,
    converged: bool,
    /// Empty when primed from disk; such entries give no warm start.
    coeffs: Vec<f64>,
}

static CACHE: Lazy<Mutex<HashMap<String, Cached>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn key(name: &str, params: &WeightParams, interval: (f64, f64), n: usize, settings: &SolverSettings) -> String {
    format!(
        "{name}|{:e}|{:e}|{:e}|{:e}|{:e}|{n}|{}",
        params.alpha(),
        params.beta(),
        params.p(),
        interval.0,
        interval.1,
        settings.fingerprint()
    )
}

/// Empties the in-memory `E_n` cache.
pub fn clear_cache() {
    CACHE.lock().clear();
}

/// Seeds the in-memory cache with a stored sequence (failed entries are skipped).
pub fn prime_cache(seq: &ErrorSequence, settings: &SolverSettings) {
    let mut cache = CACHE.lock();
    for e in &seq.entries {
        if let Some(certificate) = e.certificate {
            cache.entry(key(&seq.spec_name, &seq.params, seq.interval, e.n, settings)).or_insert(Cached {
                error: e.error,
                certificate,
                converged: e.converged,
                coeffs: Vec::new(),
            });
        }
    }
}

/// [`compute_error_sequence_with`] with default solver settings.
pub fn compute_error_sequence(
    spec: &FunctionSpec,
    params: &WeightParams,
    n_range: RangeInclusive<usize>,
    interval: (f64, f64),
) -> Result<ErrorSequence> {
    compute_error_sequence_with(spec, params, n_range, interval, &SolverSettings::default())
}

/// Solves for each `n` in turn, warm-starting from the previous minimizer.
/// Since `Π_n ⊂ Π_{n+1}`, an `E_{n+1}` above `E_n` is replaced by `E_n`.
/// Solver failures become entries with a failure marker.
pub fn compute_error_sequence_with(
    spec: &FunctionSpec,
    params: &WeightParams,
    n_range: RangeInclusive<usize>,
    interval: (f64, f64),
    settings: &SolverSettings,
) -> Result<ErrorSequence> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo < 1 || hi > 256 || lo > hi {
        return Err(Error::Precondition(format!("n range {lo}..={hi} must lie in [1, 256]")));
    }
    let mut entries = Vec::with_capacity(hi - lo + 1);
    let mut warm: Option<Polynomial> = None;
    let mut floor = f64::INFINITY;
    for n in lo..=hi {
        let k = key(spec.name(), params, interval, n, settings);
        let hit = CACHE.lock().get(&k).cloned();
        let mut entry = match hit {
            Some(c) => {
                warm = if c.coeffs.is_empty() { None } else { Polynomial::new(c.coeffs.clone(), interval).ok() };
                SequenceEntry {
                    n,
                    error: c.error,
                    certificate: Some(c.certificate),
                    converged: c.converged,
                    note: None,
                }
            }
            None => match best_approx_with(spec, n, interval, params, settings, warm.as_ref()) {
                Ok(res) => {
                    CACHE.lock().insert(
                        k,
                        Cached {
                            error: res.error,
                            certificate: res.certificate,
                            converged: res.converged,
                            coeffs: res.minimizer.coeffs().to_vec(),
                        },
                    );
                    let entry = SequenceEntry {
                        n,
                        error: res.error,
                        certificate: Some(res.certificate),
                        converged: res.converged,
                        note: None,
                    };
                    warm = Some(res.minimizer);
                    entry
                }
                Err(e) => {
                    log::warn!("E_{n}({}) failed: {e}", spec.name());
                    SequenceEntry { n, error: f64::NAN, certificate: None, converged: false, note: Some(e.to_string()) }
                }
            },
        };
        if !entry.failed() {
            if entry.error > floor {
                entry.note = Some(format!("raised value {} replaced by E_{} (nested spaces)", entry.error, n - 1));
                entry.error = floor;
            }
            floor = entry.error;
        }
        entries.push(entry);
    }
    Ok(ErrorSequence { spec_name: spec.name().to_string(), params: *params, interval, entries })
}
