use std::fmt::Write as _;
use std::io::Write;

use crate::error::Result;
use crate::weights::WeightParams;

use super::HarnessSettings;

pub const CSV_HEADER: &str = "theorem,spec,alpha,beta,p,k,r,n_or_t,lhs,rhs,ratio";

/// One evaluated instance of an inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRecord {
    pub theorem: String,
    pub spec: String,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub k: usize,
    pub r: usize,
    /// `n` for sequence-indexed checks, `t` (or `h`) for step-indexed ones.
    pub n_or_t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl CaseRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theorem: &str,
        spec: &str,
        params: &WeightParams,
        k: usize,
        r: usize,
        n_or_t: f64,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        Self {
            theorem: theorem.to_string(),
            spec: spec.to_string(),
            alpha: params.alpha(),
            beta: params.beta(),
            p: params.p(),
            k,
            r,
            n_or_t,
            lhs,
            rhs,
            ratio: lhs / rhs,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.theorem,
            self.spec,
            self.alpha,
            self.beta,
            self.p,
            self.k,
            self.r,
            self.n_or_t,
            self.lhs,
            self.rhs,
            self.ratio
        )
    }
}

/// Fitted constant of one configuration before and after refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigSummary {
    pub label: String,
    pub coarse_constant: f64,
    pub fitted_constant: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub cases: Vec<CaseRecord>,
    /// Maximum ratio over all non-degenerate cases (0 when there are none).
    pub fitted_constant: f64,
    pub passed: bool,
    pub notes: Vec<String>,
    /// `0/0` cases, listed but never part of the fitted constant.
    pub skipped: Vec<CaseRecord>,
    /// Configurations left out because a precondition on `f` failed.
    pub excluded: Vec<String>,
    /// Computational failures (solver errors, divergent tails).
    pub failures: Vec<String>,
    pub configs: Vec<ConfigSummary>,
}

impl InequalityReport {
    pub fn max_ratio(&self) -> f64 {
        self.fitted_constant
    }

    /// The largest `lhs/rhs` among cases matching `pred`.
    pub fn max_ratio_where(&self, pred: impl Fn(&CaseRecord) -> bool) -> f64 {
        self.cases.iter().filter(|c| pred(c)).map(|c| c.ratio).fold(0.0, f64::max)
    }

    pub fn all_ratios_finite(&self) -> bool {
        self.cases.iter().all(|c| c.ratio.is_finite())
    }

    pub fn all_stable(&self) -> bool {
        self.configs.iter().all(|c| c.stable)
    }
}

/// Collects cases and derives the report flags.
pub(crate) struct ReportBuilder {
    name: String,
    ceiling: f64,
    degenerate: f64,
    cases: Vec<CaseRecord>,
    skipped: Vec<CaseRecord>,
    notes: Vec<String>,
    excluded: Vec<String>,
    failures: Vec<String>,
    configs: Vec<ConfigSummary>,
}

impl ReportBuilder {
    pub fn new(name: &str, settings: &HarnessSettings) -> Self {
        Self {
            name: name.to_string(),
            ceiling: settings.ratio_ceiling,
            degenerate: settings.degenerate_threshold,
            cases: Vec::new(),
            skipped: Vec::new(),
            notes: Vec::new(),
            excluded: Vec::new(),
            failures: Vec::new(),
            configs: Vec::new(),
        }
    }

    /// Records a case; returns its ratio, or `None` when it was skipped as `0/0`.
    pub fn case(&mut self, rec: CaseRecord) -> Option<f64> {
        if rec.lhs.abs() < self.degenerate && rec.rhs.abs() < self.degenerate {
            self.skipped.push(rec);
            None
        } else {
            let ratio = rec.ratio;
            self.cases.push(rec);
            Some(ratio)
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn exclude(&mut self, s: impl Into<String>) {
        self.excluded.push(s.into());
    }

    pub fn fail(&mut self, s: impl Into<String>) {
        self.failures.push(s.into());
    }

    /// Registers a configuration whose constant may grow by at most `factor`
    /// from the coarse to the refined sweep.
    pub fn config(&mut self, label: String, coarse: f64, fine: f64, factor: f64) {
        let stable = if coarse > 0.0 {
            fine.is_finite() && fine <= factor * coarse
        } else {
            // nothing measurable on the coarse sweep
            fine == 0.0
        };
        self.configs.push(ConfigSummary { label, coarse_constant: coarse, fitted_constant: fine, stable });
    }

    pub fn absorb(&mut self, other: InequalityReport) {
        self.cases.extend(other.cases);
        self.skipped.extend(other.skipped);
        self.notes.extend(other.notes);
        self.excluded.extend(other.excluded);
        self.failures.extend(other.failures);
        self.configs.extend(other.configs);
    }

    pub fn finish(self) -> InequalityReport {
        let fitted = if self.cases.iter().any(|c| c.ratio.is_nan()) {
            f64::NAN
        } else {
            self.cases.iter().map(|c| c.ratio).fold(0.0, f64::max)
        };
        let within = self.cases.iter().all(|c| c.ratio.is_finite() && c.ratio <= self.ceiling);
        let stable = self.configs.iter().all(|c| c.stable);
        let passed = within && stable && self.failures.is_empty();
        InequalityReport {
            name: self.name,
            cases: self.cases,
            fitted_constant: fitted,
            passed,
            notes: self.notes,
            skipped: self.skipped,
            excluded: self.excluded,
            failures: self.failures,
            configs: self.configs,
        }
    }
}

/// Writes the header and one row per evaluated case of every report.
pub fn write_csv<W: Write>(out: &mut W, reports: &[InequalityReport]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for rep in reports {
        for c in &rep.cases {
            writeln!(out, "{}", c.csv_row())?;
        }
    }
    Ok(())
}

/// Plain-text summary: one block per report with its constants and flags.
pub fn write_summary<W: Write>(out: &mut W, reports: &[InequalityReport]) -> Result<()> {
    let mut s = String::new();
    for rep in reports {
        let _ = writeln!(s, "[{}]", rep.name);
        let _ = writeln!(s, "passed = {}", rep.passed);
        let _ = writeln!(s, "fitted_constant = {}", rep.fitted_constant);
        let _ = writeln!(s, "cases = {}", rep.cases.len());
        let _ = writeln!(s, "skipped_degenerate = {}", rep.skipped.len());
        let _ = writeln!(s, "excluded = {}", rep.excluded.len());
        let _ = writeln!(s, "failures = {}", rep.failures.len());
        for c in &rep.configs {
            let _ = writeln!(
                s,
                "config {} : coarse = {}, fitted = {}, stable = {}",
                c.label, c.coarse_constant, c.fitted_constant, c.stable
            );
        }
        for c in &rep.skipped {
            let _ = writeln!(s, "skipped {} n_or_t = {} lhs = {} rhs = {}", c.spec, c.n_or_t, c.lhs, c.rhs);
        }
        for e in &rep.excluded {
            let _ = writeln!(s, "excluded {e}");
        }
        for f in &rep.failures {
            let _ = writeln!(s, "failure {f}");
        }
        for n in &rep.notes {
            let _ = writeln!(s, "note {n}");
        }
        s.push('\n');
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}
