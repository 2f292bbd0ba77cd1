use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;

use crate::error::{Error, Result};
use crate::functions::lookup;
use crate::harness::HarnessSettings;
use crate::weights::WeightParams;

/// Corpus used when no `--fn` is given.
pub const DEFAULT_FUNCTIONS: [&str; 5] = ["abs", "abs_1_5", "x_abs_x", "runge", "endpoint_0.75"];

/// Cache directory when neither `--cache`, `JACOBI_APPROX_CACHE` nor the
/// config file names one.
pub const DEFAULT_CACHE_DIR: &str = ".jacobi-approx-cache";
pub const CACHE_ENV: &str = "JACOBI_APPROX_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Modulus,
    BestApprox,
    ErrorSeq,
    VerifyDirect,
    VerifyInverse,
    VerifyInverseSmallp,
    VerifyWhitney,
    VerifyAppendix,
    FitDecay,
    Report,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Modulus,
        Command::BestApprox,
        Command::ErrorSeq,
        Command::VerifyDirect,
        Command::VerifyInverse,
        Command::VerifyInverseSmallp,
        Command::VerifyWhitney,
        Command::VerifyAppendix,
        Command::FitDecay,
        Command::Report,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Modulus => "modulus",
            Command::BestApprox => "best-approx",
            Command::ErrorSeq => "error-seq",
            Command::VerifyDirect => "verify-direct",
            Command::VerifyInverse => "verify-inverse",
            Command::VerifyInverseSmallp => "verify-inverse-smallp",
            Command::VerifyWhitney => "verify-whitney",
            Command::VerifyAppendix => "verify-appendix",
            Command::FitDecay => "fit-decay",
            Command::Report => "report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Command::ALL.iter().map(|c| c.as_str()).collect();
            Error::Config(format!("unknown command `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

/// Command-line flags. Every flag may also be given as a key of a flat TOML
/// file passed with `--config` (dashes become underscores); flags win.
#[derive(Parser, Debug, Default, Clone)]
#[command(
    name = "jacobi-approx",
    version,
    about = "Weighted moduli of smoothness, best approximation and inequality checks"
)]
pub struct Args {
    /// modulus | best-approx | error-seq | verify-direct | verify-inverse |
    /// verify-inverse-smallp | verify-whitney | verify-appendix | fit-decay | report
    pub command: Option<String>,

    /// Flat TOML file with defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Corpus functions, comma separated [default: abs,abs_1_5,x_abs_x,runge,endpoint_0.75]
    #[arg(long = "fn", value_delimiter = ',')]
    pub functions: Option<Vec<String>>,

    /// Weight exponents α, comma separated [default: 0]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,

    /// Weight exponents β, comma separated [default: 0]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub beta: Option<Vec<f64>>,

    /// Norm indices p (`inf` for the sup norm), comma separated [default: 2]
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<String>>,

    /// Order of the difference, or m for verify-appendix [default: 2]
    #[arg(long)]
    pub k: Option<usize>,

    /// Derivative order [default: 0]
    #[arg(long)]
    pub r: Option<usize>,

    /// Step bound t of `modulus` [default: 0.5]
    #[arg(long)]
    pub t: Option<f64>,

    /// Dimension n of Π_n for `best-approx` [default: 4]
    #[arg(long)]
    pub n: Option<usize>,

    /// First n of a ladder [default: 1]
    #[arg(long)]
    pub n_min: Option<usize>,

    /// Last n of a ladder; truncation point of the inverse tail [default: 32]
    #[arg(long)]
    pub n_max: Option<usize>,

    /// t grid {2^-j : j = 1..t_levels} [default: 6]
    #[arg(long)]
    pub t_levels: Option<usize>,

    /// N of the inverse theorem [default: 1]
    #[arg(long = "big-n")]
    pub big_n: Option<usize>,

    /// θ of the Whitney estimates [default: 1]
    #[arg(long)]
    pub theta: Option<f64>,

    /// Whitney samples per configuration [default: 64]
    #[arg(long)]
    pub samples: Option<usize>,

    /// ĉ of the small-p inverse check [default: 1]
    #[arg(long)]
    pub c_hat: Option<f64>,

    /// Approximation interval `u,v` for best-approx and error-seq [default: -1,1]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,

    /// Relative tolerance of norms and moduli [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,

    /// Seed of the Whitney sampler [default: 20240611]
    #[arg(long)]
    pub seed: Option<u64>,

    /// CSV output; the summary goes next to it with extension `.summary.txt` [default: <command>.csv]
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Error-sequence cache directory [default: $JACOBI_APPROX_CACHE or .jacobi-approx-cache]
    #[arg(long)]
    pub cache: Option<PathBuf>,

    /// Disable the on-disk cache
    #[arg(long)]
    pub no_cache: bool,

    /// CSV files to summarise (`report`)
    #[arg(long, value_delimiter = ',')]
    pub input: Option<Vec<PathBuf>>,
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub functions: Vec<String>,
    pub params: Vec<WeightParams>,
    pub k: usize,
    pub r: usize,
    pub t: f64,
    pub n: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub t_levels: usize,
    pub big_n: usize,
    pub theta: f64,
    pub samples: usize,
    pub c_hat: f64,
    pub interval: (f64, f64),
    pub tol: f64,
    pub seed: u64,
    pub output: PathBuf,
    pub cache: Option<PathBuf>,
    pub inputs: Vec<PathBuf>,
}

impl RunConfig {
    pub fn summary_path(&self) -> PathBuf {
        self.output.with_extension("summary.txt")
    }

    /// Harness settings carrying the configured tolerance and seed.
    pub fn harness_settings(&self) -> HarnessSettings {
        let mut s = HarnessSettings::default();
        s.modulus.tol = self.tol;
        s.solver.norm_tol = self.tol;
        s.seed = self.seed;
        s.whitney_samples = self.samples;
        s
    }
}

pub fn parse_p(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| Error::Config(format!("p = `{s}` is neither a number nor `inf`"))),
    }
}

/// Values read from the `--config` file.
#[derive(Default)]
struct FileValues(toml::Table);

impl FileValues {
    fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
        let table: toml::Table =
            text.parse().map_err(|e| Error::Config(format!("config file {}: {e}", path.display())))?;
        const KEYS: [&str; 24] = [
            "command",
            "fn",
            "alpha",
            "beta",
            "p",
            "k",
            "r",
            "t",
            "n",
            "n_min",
            "n_max",
            "t_levels",
            "big_n",
            "theta",
            "samples",
            "c_hat",
            "interval",
            "tol",
            "seed",
            "output",
            "cache",
            "no_cache",
            "input",
            "functions",
        ];
        for (key, value) in &table {
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("config file {}: unknown key `{key}`", path.display())));
            }
            if value.is_table() {
                return Err(Error::Config(format!("config file {}: `{key}` must not be a table", path.display())));
            }
        }
        Ok(Self(table))
    }

    fn type_error(key: &str, want: &str) -> Error {
        Error::Config(format!("config key `{key}` must be {want}"))
    }

    fn float(v: &toml::Value, key: &str) -> Result<f64> {
        match v {
            toml::Value::Float(x) => Ok(*x),
            toml::Value::Integer(i) => Ok(*i as f64),
            toml::Value::String(s) if key == "p" => parse_p(s),
            _ => Err(Self::type_error(key, "a number")),
        }
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Array(a)) => a.iter().map(|v| Self::float(v, key)).collect::<Result<_>>().map(Some),
            Some(v) => Self::float(v, key).map(|x| Some(vec![x])),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.0.get(key).map(|v| Self::float(v, key)).transpose()
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(_) => Err(Self::type_error(key, "a nonnegative integer")),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(Self::type_error(key, "a string")),
        }
    }

    fn strings(&self, key: &str) -> Result<Option<Vec<String>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(vec![s.clone()])),
            Some(toml::Value::Array(a)) => a
                .iter()
                .map(|v| v.as_str().map(str::to_string).ok_or_else(|| Self::type_error(key, "a list of strings")))
                .collect::<Result<_>>()
                .map(Some),
            Some(_) => Err(Self::type_error(key, "a string or a list of strings")),
        }
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(Self::type_error(key, "true or false")),
        }
    }
}

/// Merges flags over the `--config` file over the documented defaults, then
/// validates every parameter combination before anything is computed.
pub fn load_config(args: &Args) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => FileValues::read(path)?,
        None => FileValues::default(),
    };
    let command: Command = args
        .command
        .clone()
        .or(file.string("command")?)
        .ok_or_else(|| Error::Config("no command given".into()))?
        .parse()?;
    let functions = match args.functions.clone() {
        Some(f) => f,
        None => match file.strings("fn")? {
            Some(f) => f,
            None => {
                file.strings("functions")?.unwrap_or_else(|| DEFAULT_FUNCTIONS.iter().map(|s| s.to_string()).collect())
            }
        },
    };
    let alphas = args.alpha.clone().map_or_else(|| file.floats("alpha"), |v| Ok(Some(v)))?.unwrap_or(vec![0.0]);
    let betas = args.beta.clone().map_or_else(|| file.floats("beta"), |v| Ok(Some(v)))?.unwrap_or(vec![0.0]);
    let ps = match &args.p {
        Some(list) => list.iter().map(|s| parse_p(s)).collect::<Result<Vec<_>>>()?,
        None => file.floats("p")?.unwrap_or(vec![2.0]),
    };
    let interval = match args.interval.clone().map_or_else(|| file.floats("interval"), |v| Ok(Some(v)))? {
        None => (-1.0, 1.0),
        Some(v) if v.len() == 2 => (v[0], v[1]),
        Some(_) => return Err(Error::Config("interval needs exactly two values u,v".into())),
    };
    let cache = if args.no_cache || file.bool("no_cache")?.unwrap_or(false) {
        None
    } else {
        Some(
            args.cache
                .clone()
                .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
                .or(file.string("cache")?.map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
        )
    };
    let inputs = match args.input.clone() {
        Some(v) => v,
        None => file.strings("input")?.unwrap_or_default().into_iter().map(PathBuf::from).collect(),
    };
    let cfg = RunConfig {
        command,
        params: Vec::new(),
        functions,
        k: args.k.map_or_else(|| file.usize("k"), |v| Ok(Some(v)))?.unwrap_or(2),
        r: args.r.map_or_else(|| file.usize("r"), |v| Ok(Some(v)))?.unwrap_or(0),
        t: args.t.map_or_else(|| file.f64("t"), |v| Ok(Some(v)))?.unwrap_or(0.5),
        n: args.n.map_or_else(|| file.usize("n"), |v| Ok(Some(v)))?.unwrap_or(4),
        n_min: args.n_min.map_or_else(|| file.usize("n_min"), |v| Ok(Some(v)))?.unwrap_or(1),
        n_max: args.n_max.map_or_else(|| file.usize("n_max"), |v| Ok(Some(v)))?.unwrap_or(32),
        t_levels: args.t_levels.map_or_else(|| file.usize("t_levels"), |v| Ok(Some(v)))?.unwrap_or(6),
        big_n: args.big_n.map_or_else(|| file.usize("big_n"), |v| Ok(Some(v)))?.unwrap_or(1),
        theta: args.theta.map_or_else(|| file.f64("theta"), |v| Ok(Some(v)))?.unwrap_or(1.0),
        samples: args.samples.map_or_else(|| file.usize("samples"), |v| Ok(Some(v)))?.unwrap_or(64),
        c_hat: args.c_hat.map_or_else(|| file.f64("c_hat"), |v| Ok(Some(v)))?.unwrap_or(1.0),
        interval,
        tol: args.tol.map_or_else(|| file.f64("tol"), |v| Ok(Some(v)))?.unwrap_or(1e-10),
        seed: match args.seed {
            Some(s) => s,
            None => file.usize("seed")?.map_or(HarnessSettings::default().seed, |s| s as u64),
        },
        output: args
            .output
            .clone()
            .or(file.string("output")?.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(format!("{command}.csv"))),
        cache,
        inputs,
    };
    validate(cfg, &alphas, &betas, &ps)
}

fn config_error(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn validate(mut cfg: RunConfig, alphas: &[f64], betas: &[f64], ps: &[f64]) -> Result<RunConfig> {
    if cfg.command == Command::Report {
        if cfg.inputs.is_empty() {
            return Err(Error::Config("report needs at least one --input CSV".into()));
        }
        return Ok(cfg);
    }
    if cfg.functions.is_empty() {
        return Err(Error::Config("no functions given".into()));
    }
    for name in &cfg.functions {
        lookup(name).map_err(config_error)?;
    }
    for &p in ps {
        for &a in alphas {
            for &b in betas {
                cfg.params.push(WeightParams::new(a, b, p).map_err(config_error)?);
            }
        }
    }
    if cfg.params.is_empty() {
        return Err(Error::Config("empty parameter list".into()));
    }
    if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
        return Err(Error::Config(format!("tol = {} must lie in (0, 1)", cfg.tol)));
    }
    let (u, v) = cfg.interval;
    if !(-1.0 <= u && u < v && v <= 1.0) {
        return Err(Error::Config(format!("interval [{u}, {v}] must be a nonempty subinterval of [-1, 1]")));
    }
    let need = |ok: bool, msg: String| if ok { Ok(()) } else { Err(Error::Config(msg)) };
    let in_range = |lo: usize, hi: usize| {
        need(lo >= 1 && lo <= hi && hi <= 256, format!("n range {lo}..={hi} must lie in [1, 256]"))
    };
    need(cfg.k >= 1, "k must be at least 1".into())?;
    for w in &cfg.params {
        let (a, b, p) = (w.alpha(), w.beta(), w.p());
        let shifted = || {
            need(
                w.shifted_nonnegative(cfg.r),
                format!("r/2 + α and r/2 + β must be nonnegative (r = {}, α = {a}, β = {b})", cfg.r),
            )
        };
        match cfg.command {
            Command::Modulus => {
                need(cfg.t > 0.0, format!("t = {} must be positive", cfg.t))?;
                if w.is_sup() {
                    shifted()?;
                }
            }
            Command::BestApprox => in_range(cfg.n, cfg.n)?,
            Command::ErrorSeq => in_range(cfg.n_min, cfg.n_max)?,
            Command::VerifyDirect => {
                crate::harness::check_direct_params(w, cfg.r).map_err(config_error)?;
                in_range(cfg.n_min.max(cfg.k + cfg.r), cfg.n_max)?;
            }
            Command::VerifyInverse => {
                need(p >= 1.0, format!("the inverse theorem requires 1 ≤ p ≤ ∞, got p = {p}"))?;
                shifted()?;
                need(cfg.big_n >= 1, "N must be at least 1".into())?;
                in_range(1, cfg.n_max)?;
                let t_min = 0.5f64.powi(cfg.t_levels as i32);
                need(
                    cfg.t_levels >= 1 && t_min * cfg.n_max as f64 >= 1.0,
                    format!("t_levels = {} needs n_max ≥ 2^{}", cfg.t_levels, cfg.t_levels),
                )?;
            }
            Command::VerifyInverseSmallp => {
                need(p > 0.0 && p < 1.0, format!("the small-p inverse theorem requires 0 < p < 1, got p = {p}"))?;
                need(
                    a >= 0.0 && b >= 0.0,
                    format!("the small-p inverse theorem requires α, β ≥ 0, got α = {a}, β = {b}"),
                )?;
                need(cfg.c_hat > 0.0 && cfg.c_hat <= 1.0, format!("ĉ = {} must lie in (0, 1]", cfg.c_hat))?;
                in_range(cfg.n_min, cfg.n_max)?;
            }
            Command::VerifyWhitney => {
                need(cfg.theta > 0.0 && cfg.theta <= 1.0, format!("θ = {} must lie in (0, 1]", cfg.theta))?;
                need(cfg.samples >= 1, "samples must be at least 1".into())?;
                if cfg.r == 0 {
                    need(
                        a >= 0.0 && b >= 0.0,
                        format!("the r = 0 Whitney estimates require α, β ≥ 0, got α = {a}, β = {b}"),
                    )?;
                } else {
                    need(p >= 1.0, format!("the r ≥ 1 Whitney estimate requires 1 ≤ p ≤ ∞, got p = {p}"))?;
                    shifted()?;
                }
            }
            Command::VerifyAppendix => {
                need(p > 1.0 && p.is_finite(), format!("the appendix corollaries require 1 < p < ∞, got p = {p}"))?;
                shifted()?;
                need(
                    cfg.n_max >= 2 * cfg.k,
                    format!("empty dyadic range: n_max = {} < 2m = {}", cfg.n_max, 2 * cfg.k),
                )?;
                in_range(1, cfg.n_max)?;
                need(cfg.t_levels >= 1, "t_levels must be at least 1".into())?;
            }
            Command::FitDecay => {
                in_range(cfg.n_min, cfg.n_max)?;
                need(cfg.t_levels >= 1, "t_levels must be at least 1".into())?;
            }
            Command::Report => unreachable!(),
        }
    }
    Ok(cfg)
}

/// Parses process arguments (without running anything).
pub fn parse_args<I, T>(args: I) -> std::result::Result<Args, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Args::try_parse_from(args)
}
