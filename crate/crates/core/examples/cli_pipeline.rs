//! Drives the command-line front end in-process: an error ladder cached on
//! disk, then a direct-theorem run that reuses it.

use jacobi_approx::cli::main_with_args;

fn main() {
    let dir = std::env::temp_dir().join("jacobi-approx-example");
    let cache = dir.join("cache");
    let out = |name: &str| dir.join(name).display().to_string();
    let common = ["--fn", "abs,runge", "--p", "inf", "--cache", cache.to_str().unwrap()];

    let mut seq = vec!["jacobi-approx", "error-seq", "--n-max", "16"];
    seq.extend(common);
    let seq_out = out("seq.csv");
    seq.extend(["--output", &seq_out]);
    println!("exit {}", main_with_args(seq));

    let mut direct = vec!["jacobi-approx", "verify-direct", "--k", "2", "--n-max", "16"];
    direct.extend(common);
    let direct_out = out("direct.csv");
    direct.extend(["--output", &direct_out]);
    println!("exit {}", main_with_args(direct));
    println!("{}", std::fs::read_to_string(dir.join("direct.summary.txt")).unwrap_or_default());
}
