use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::bestapprox::{best_approx_with, SolverSettings};
use crate::error::{Error, Result};
use crate::functions::{lookup, FunctionSpec};
use crate::harness::{
    compute_error_sequence_with, dyadic_grid, fit_decay, prime_cache, verify_appendix, verify_decay, verify_direct,
    verify_inverse, verify_inverse_smallp, verify_whitney, write_csv, write_summary, InequalityReport, CSV_HEADER,
};
use crate::moduli::{weighted_modulus_with, ModulusQuery};
use crate::weights::WeightParams;

use super::cache_io::{load_sequence, store_sequence};
use super::config::{Command, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INEQUALITY: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// Exit status for an error raised while running.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) | Error::ExchangeStall { .. } | Error::InsufficientData(_) => EXIT_NONCONVERGENCE,
        _ => EXIT_CONFIG,
    }
}

/// Executes `config`, writes its CSV and summary, prints a one-line
/// summary and returns the exit status.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("{}: {e}", config.command);
            exit_code(&e)
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<i32> {
    let settings = cfg.harness_settings();
    let specs: Vec<FunctionSpec> = cfg.functions.iter().map(|n| lookup(n)).collect::<Result<_>>()?;
    let cached = SequenceCache { cfg, solver: &settings.solver };
    match cfg.command {
        Command::Modulus => modulus(cfg, &specs, &settings.modulus),
        Command::BestApprox => best_approx(cfg, &specs, &settings.solver),
        Command::ErrorSeq => error_seq(cfg, &specs, &cached),
        Command::Report => report(cfg),
        _ => {
            let reports = verify(cfg, &specs, &cached, &settings)?;
            finish_reports(cfg, &reports)
        }
    }
}

/// Primes the in-memory `E_n` cache from disk and writes ladders back.
struct SequenceCache<'a> {
    cfg: &'a RunConfig,
    solver: &'a SolverSettings,
}

impl SequenceCache<'_> {
    fn prime(&self, spec: &FunctionSpec, params: &WeightParams, interval: (f64, f64)) {
        if let Some(dir) = &self.cfg.cache {
            if let Some(seq) = load_sequence(dir, spec.name(), params, interval, self.solver) {
                prime_cache(&seq, self.solver);
            }
        }
    }

    /// The ladder `1..=hi` (from the warm in-memory cache) persisted to disk.
    fn persist(&self, spec: &FunctionSpec, params: &WeightParams, hi: usize) -> Result<()> {
        if let Some(dir) = &self.cfg.cache {
            let seq = compute_error_sequence_with(spec, params, 1..=hi, (-1.0, 1.0), self.solver)?;
            store_sequence(dir, &seq, self.solver)?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn modulus(cfg: &RunConfig, specs: &[FunctionSpec], settings: &crate::moduli::ModulusSettings) -> Result<i32> {
    let mut csv = String::from("spec,alpha,beta,p,k,r,t,value,argmax_h,converged\n");
    let mut status = EXIT_PASS;
    for spec in specs {
        for w in &cfg.params {
            let q = ModulusQuery::new(spec.clone(), cfg.k, cfg.r, cfg.t, *w);
            let m = weighted_modulus_with(&q, settings)?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{}",
                spec.name(),
                w.alpha(),
                w.beta(),
                w.p(),
                cfg.k,
                cfg.r,
                cfg.t,
                m.value,
                m.argmax_h,
                m.converged
            );
            println!(
                "modulus {} α={} β={} p={} k={} r={} t={}: value {} (converged: {})",
                spec.name(),
                w.alpha(),
                w.beta(),
                w.p(),
                cfg.k,
                cfg.r,
                cfg.t,
                m.value,
                m.converged
            );
            if !m.converged {
                status = EXIT_NONCONVERGENCE;
            }
        }
    }
    write_file(&cfg.output, &csv)?;
    Ok(status)
}

fn best_approx(cfg: &RunConfig, specs: &[FunctionSpec], solver: &SolverSettings) -> Result<i32> {
    let mut csv = String::from("spec,alpha,beta,p,n,u,v,error,certificate,converged,coefficients\n");
    let mut status = EXIT_PASS;
    for spec in specs {
        for w in &cfg.params {
            let res = best_approx_with(spec, cfg.n, cfg.interval, w, solver, None)?;
            let coeffs: Vec<String> = res.minimizer.coeffs().iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{}",
                spec.name(),
                w.alpha(),
                w.beta(),
                w.p(),
                cfg.n,
                cfg.interval.0,
                cfg.interval.1,
                res.error,
                res.certificate,
                res.converged,
                coeffs.join(" ")
            );
            println!(
                "best-approx {} α={} β={} p={} n={}: E = {} [{}] (converged: {})",
                spec.name(),
                w.alpha(),
                w.beta(),
                w.p(),
                cfg.n,
                res.error,
                res.certificate,
                res.converged
            );
            if !res.converged {
                status = EXIT_NONCONVERGENCE;
            }
        }
    }
    write_file(&cfg.output, &csv)?;
    Ok(status)
}

fn error_seq(cfg: &RunConfig, specs: &[FunctionSpec], cache: &SequenceCache) -> Result<i32> {
    let mut csv = String::from("spec,alpha,beta,p,n,error,certificate,converged\n");
    let mut status = EXIT_PASS;
    let mut count = 0;
    for spec in specs {
        for w in &cfg.params {
            cache.prime(spec, w, cfg.interval);
            let seq = compute_error_sequence_with(spec, w, cfg.n_min..=cfg.n_max, cfg.interval, cache.solver)?;
            if let Some(dir) = &cfg.cache {
                store_sequence(dir, &seq, cache.solver)?;
            }
            for e in &seq.entries {
                let cert = e.certificate.map_or("failed", |c| c.as_str());
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{cert},{}",
                    spec.name(),
                    w.alpha(),
                    w.beta(),
                    w.p(),
                    e.n,
                    e.error,
                    e.converged
                );
                count += 1;
                if e.failed() {
                    status = EXIT_NONCONVERGENCE;
                }
            }
        }
    }
    write_file(&cfg.output, &csv)?;
    println!("error-seq: {count} entries written to {}", cfg.output.display());
    Ok(status)
}

fn verify(
    cfg: &RunConfig,
    specs: &[FunctionSpec],
    cache: &SequenceCache,
    settings: &crate::harness::HarnessSettings,
) -> Result<Vec<InequalityReport>> {
    let grid = dyadic_grid(cfg.t_levels);
    let mut reports = Vec::new();
    match cfg.command {
        Command::VerifyDirect => {
            for spec in specs {
                for w in &cfg.params {
                    cache.prime(spec, w, (-1.0, 1.0));
                }
            }
            reports.push(verify_direct(specs, &cfg.params, cfg.k, cfg.r, cfg.n_min..=cfg.n_max, settings)?);
            for spec in specs {
                for w in &cfg.params {
                    cache.persist(spec, w, cfg.n_max)?;
                }
            }
        }
        Command::VerifyInverse => {
            for spec in specs {
                for w in &cfg.params {
                    cache.prime(spec, w, (-1.0, 1.0));
                    reports.push(verify_inverse(spec, w, cfg.k, cfg.r, cfg.big_n, &grid, cfg.n_max, settings)?);
                    cache.persist(spec, w, cfg.n_max.max(cfg.k + cfg.r).max(cfg.big_n))?;
                }
            }
        }
        Command::VerifyInverseSmallp => {
            for spec in specs {
                for w in &cfg.params {
                    cache.prime(spec, w, (-1.0, 1.0));
                    reports.push(verify_inverse_smallp(spec, w, cfg.k, cfg.n_min..=cfg.n_max, cfg.c_hat, settings)?);
                    cache.persist(spec, w, cfg.n_max)?;
                }
            }
        }
        Command::VerifyWhitney => {
            reports.push(verify_whitney(specs, &cfg.params, cfg.k, cfg.r, cfg.theta, cfg.samples, settings)?);
        }
        Command::VerifyAppendix => {
            for spec in specs {
                for w in &cfg.params {
                    let deriv = spec.derivative(cfg.r)?;
                    let shifted = w.with_phi_power(cfg.r)?;
                    cache.prime(&deriv, &shifted, (-1.0, 1.0));
                    reports.push(verify_appendix(spec, w, cfg.k, cfg.r, &grid, cfg.n_max, settings)?);
                    cache.persist(&deriv, &shifted, cfg.n_max)?;
                }
            }
        }
        Command::FitDecay => {
            for spec in specs {
                for w in &cfg.params {
                    cache.prime(spec, w, (-1.0, 1.0));
                    let seq = compute_error_sequence_with(spec, w, 1..=cfg.n_max, (-1.0, 1.0), cache.solver)?;
                    cache.persist(spec, w, cfg.n_max)?;
                    let profile = fit_decay(&seq, cfg.n_min)?;
                    let gamma = profile.gamma.unwrap_or(f64::NAN);
                    println!("fit-decay {} α={} β={} p={}: γ = {gamma}", spec.name(), w.alpha(), w.beta(), w.p());
                    match verify_decay(spec, w, cfg.k, cfg.r, &profile, &grid, settings) {
                        Ok(rep) => reports.push(rep),
                        Err(Error::Precondition(msg)) => {
                            println!("  cross-check skipped: {msg}");
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        _ => unreachable!("not a verification command"),
    }
    Ok(reports)
}

fn finish_reports(cfg: &RunConfig, reports: &[InequalityReport]) -> Result<i32> {
    let mut csv = Vec::new();
    write_csv(&mut csv, reports)?;
    write_file(&cfg.output, &String::from_utf8_lossy(&csv))?;
    let mut summary = Vec::new();
    write_summary(&mut summary, reports)?;
    write_file(&cfg.summary_path(), &String::from_utf8_lossy(&summary))?;
    let cases: usize = reports.iter().map(|r| r.cases.len()).sum();
    let skipped: usize = reports.iter().map(|r| r.skipped.len()).sum();
    let fitted = reports.iter().map(|r| r.fitted_constant).fold(0.0, f64::max);
    let failed = reports.iter().any(|r| !r.failures.is_empty());
    let passed = reports.iter().all(|r| r.passed);
    let verdict = if failed {
        "NON-CONVERGED"
    } else if passed {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "{}: {verdict}, {cases} cases, {skipped} skipped, fitted constant {fitted}, csv {}",
        cfg.command,
        cfg.output.display()
    );
    Ok(if failed {
        EXIT_NONCONVERGENCE
    } else if passed {
        EXIT_PASS
    } else {
        EXIT_INEQUALITY
    })
}

/// Re-reads harness CSV files and summarises them per theorem.
fn report(cfg: &RunConfig) -> Result<i32> {
    #[derive(Default)]
    struct Acc {
        cases: usize,
        max_ratio: f64,
        bad: usize,
    }
    let ceiling = crate::harness::HarnessSettings::default().ratio_ceiling;
    let mut by_theorem: BTreeMap<String, Acc> = BTreeMap::new();
    for path in &cfg.inputs {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(Error::Config(format!("{} does not start with the harness CSV header", path.display())));
        }
        for (i, line) in lines.enumerate() {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 11 {
                return Err(Error::Config(format!("{}:{}: expected 11 columns", path.display(), i + 2)));
            }
            let ratio: f64 = cols[10]
                .parse()
                .map_err(|_| Error::Config(format!("{}:{}: bad ratio `{}`", path.display(), i + 2, cols[10])))?;
            let acc = by_theorem.entry(cols[0].to_string()).or_default();
            acc.cases += 1;
            if ratio.is_finite() && ratio <= ceiling {
                acc.max_ratio = acc.max_ratio.max(ratio);
            } else {
                acc.bad += 1;
            }
        }
    }
    let mut out = String::new();
    for (name, acc) in &by_theorem {
        let _ = writeln!(out, "[{name}]");
        let _ = writeln!(out, "cases = {}", acc.cases);
        let _ = writeln!(out, "max_ratio = {}", acc.max_ratio);
        let _ = writeln!(out, "ratios_above_ceiling_or_not_finite = {}", acc.bad);
        out.push('\n');
    }
    write_file(&cfg.output, &out)?;
    let bad: usize = by_theorem.values().map(|a| a.bad).sum();
    println!("report: {} theorems, {bad} bad ratios, written to {}", by_theorem.len(), cfg.output.display());
    Ok(if bad > 0 { EXIT_INEQUALITY } else { EXIT_PASS })
}
