use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jacobi_approx::bestapprox::SolverSettings;
use jacobi_approx::cli::cache_io::{cache_file, cache_key, parse_sequence, serialize_sequence};
use jacobi_approx::WeightParams;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jacobi-approx"));
    c.env_remove("JACOBI_APPROX_CACHE");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn seq_args<'a>(cache: &'a str, output: &'a str) -> Vec<&'a str> {
    vec!["error-seq", "--fn", "abs", "--p", "2", "--n-max", "6", "--cache", cache, "--output", output]
}

/// Error column of an `error-seq` CSV, keyed by `n`.
fn errors(csv: &Path) -> Vec<(usize, f64)> {
    fs::read_to_string(csv)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[4].parse().unwrap(), f[5].parse().unwrap())
        })
        .collect()
}

fn abs_key(tol: f64) -> String {
    let w = WeightParams::new(0.0, 0.0, 2.0).unwrap();
    let s = SolverSettings { norm_tol: tol, ..SolverSettings::default() };
    cache_key("abs", &w, (-1.0, 1.0), &s)
}

/// Rewrites the cached `E_3` to a sentinel so a later hit is observable.
fn plant_sentinel(path: &Path, sentinel: f64) {
    let (key, mut seq) = parse_sequence(&fs::read_to_string(path).unwrap()).unwrap();
    seq.entries.iter_mut().find(|e| e.n == 3).unwrap().error = sentinel;
    fs::write(path, serialize_sequence(&seq, &key)).unwrap();
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["--help"])), 0);
    assert_eq!(code(&run(d, &["no-such-command"])), 3);
    assert_eq!(code(&run(d, &["modulus", "--fn", "no_such_fn"])), 3);
    assert_eq!(code(&run(d, &["modulus", "--p", "0.5", "--alpha", "-3"])), 3);
    assert_eq!(code(&run(d, &["verify-direct", "--r", "1", "--p", "0.5", "--no-cache"])), 3);
    assert_eq!(code(&run(d, &["verify-inverse", "--p", "0.5", "--no-cache"])), 3);
    assert_eq!(code(&run(d, &["report"])), 3);
    // invalid configurations are rejected before anything is written
    assert!(fs::read_dir(d).unwrap().next().is_none());

    let ok = run(d, &["modulus", "--fn", "mono2", "--p", "inf", "--k", "2", "--t", "0.25", "--output", "m.csv"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let csv = fs::read_to_string(d.join("m.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let value: f64 = row[7].parse().unwrap();
    assert!((value - 0.125).abs() < 1e-9);
}

#[test]
fn verify_run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(
        d,
        &[
            "verify-direct",
            "--fn",
            "abs,runge",
            "--p",
            "inf",
            "--k",
            "2",
            "--n-max",
            "16",
            "--no-cache",
            "--output",
            "direct.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(d.join("direct.csv")).unwrap();
    assert!(csv.starts_with("theorem,spec,alpha,beta,p,k,r,n_or_t,lhs,rhs,ratio"));
    assert!(fs::read_to_string(d.join("direct.summary.txt")).unwrap().contains("passed = true"));

    let rep = run(d, &["report", "--input", "direct.csv", "--output", "report.txt"]);
    assert_eq!(code(&rep), 0);
    assert!(fs::read_to_string(d.join("report.txt")).unwrap().contains("[direct]"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = |out: &'static str| {
        vec!["verify-whitney", "--fn", "abs", "--p", "2", "--samples", "8", "--no-cache", "--output", out]
    };
    assert_eq!(code(&run(d, &args("a.csv"))), 0);
    assert_eq!(code(&run(d, &args("b.csv"))), 0);
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());

    let cache = d.join("cache");
    let c = cache.to_str().unwrap();
    assert_eq!(code(&run(d, &seq_args(c, "s1.csv"))), 0);
    assert_eq!(code(&run(d, &seq_args(c, "s2.csv"))), 0);
    assert_eq!(fs::read(d.join("s1.csv")).unwrap(), fs::read(d.join("s2.csv")).unwrap());
}

#[test]
fn cache_hit_corruption_and_settings_change() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cache = d.join("cache");
    let c = cache.to_str().unwrap();
    let path: PathBuf = cache_file(&cache, &abs_key(1e-10));

    assert_eq!(code(&run(d, &seq_args(c, "fresh.csv"))), 0);
    assert!(path.exists());
    let fresh = errors(&d.join("fresh.csv"));

    // a hit serves the stored value
    plant_sentinel(&path, 0.123456789);
    assert_eq!(code(&run(d, &seq_args(c, "hit.csv"))), 0);
    let hit = errors(&d.join("hit.csv"));
    assert_eq!(hit[2], (3, 0.123456789));

    // a different tolerance is a different key, so the sentinel is not seen
    let mut tol_args = seq_args(c, "tol.csv");
    tol_args.extend(["--tol", "1e-9"]);
    assert_eq!(code(&run(d, &tol_args)), 0);
    assert!(cache_file(&cache, &abs_key(1e-9)).exists());
    let other = errors(&d.join("tol.csv"));
    assert!((other[2].1 - fresh[2].1).abs() < 1e-8 * fresh[2].1);

    // a corrupt file is a miss: recomputed, then overwritten with good data
    fs::write(&path, "garbage\n").unwrap();
    let out = run(d, &seq_args(c, "corrupt.csv"));
    assert_eq!(code(&out), 0);
    assert_eq!(errors(&d.join("corrupt.csv")), fresh);
    assert!(parse_sequence(&fs::read_to_string(&path).unwrap()).is_ok());

    // a file whose stored key disagrees with its name is also a miss
    plant_sentinel(&path, 0.5);
    let text = fs::read_to_string(&path).unwrap().replace(&abs_key(1e-10), &abs_key(1e-9));
    fs::write(&path, text).unwrap();
    assert_eq!(code(&run(d, &seq_args(c, "mismatch.csv"))), 0);
    assert_eq!(errors(&d.join("mismatch.csv")), fresh);
}

#[test]
fn cache_location_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["error-seq", "--fn", "abs", "--p", "2", "--n-max", "3", "--output", "s.csv"];

    let status = bin().current_dir(d).args(args).env("JACOBI_APPROX_CACHE", "from-env").output().unwrap();
    assert_eq!(code(&status), 0);
    assert!(d.join("from-env").is_dir());

    let mut with_flag = args.to_vec();
    with_flag.extend(["--cache", "from-flag"]);
    let status = bin().current_dir(d).args(&with_flag).env("JACOBI_APPROX_CACHE", "from-env-2").output().unwrap();
    assert_eq!(code(&status), 0);
    assert!(d.join("from-flag").is_dir());
    assert!(!d.join("from-env-2").exists());

    assert_eq!(code(&run(d, &args)), 0);
    assert!(d.join(".jacobi-approx-cache").is_dir());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("run.toml"),
        "command = \"modulus\"\nfn = [\"mono2\"]\np = [2.0]\nk = 2\nt = 0.5\noutput = \"from-file.csv\"\nno_cache = true\n",
    )
    .unwrap();

    assert_eq!(code(&run(d, &["--config", "run.toml"])), 0);
    let file_row = fs::read_to_string(d.join("from-file.csv")).unwrap();
    assert!(file_row.lines().nth(1).unwrap().starts_with("mono2,0,0,2,2,0,0.5,"));

    assert_eq!(code(&run(d, &["--config", "run.toml", "--t", "0.25", "--output", "flag.csv"])), 0);
    let flag_row = fs::read_to_string(d.join("flag.csv")).unwrap();
    assert!(flag_row.lines().nth(1).unwrap().starts_with("mono2,0,0,2,2,0,0.25,"));

    fs::write(d.join("bad.toml"), "command = \"modulus\"\nbogus = 1\n").unwrap();
    assert_eq!(code(&run(d, &["--config", "bad.toml"])), 3);
}
