//! Command-line front end: flag and config-file parsing, dispatch, the
//! on-disk error-sequence cache, and report files.
//!
//! Exit status: 0 pass, 1 an inequality check failed, 2 a computation did
//! not converge, 3 invalid configuration.

pub mod cache_io;
mod config;
mod run;

pub use config::{
    load_config, parse_args, parse_p, Args, Command, RunConfig, CACHE_ENV, DEFAULT_CACHE_DIR, DEFAULT_FUNCTIONS,
};
pub use run::{exit_code, run, EXIT_CONFIG, EXIT_INEQUALITY, EXIT_NONCONVERGENCE, EXIT_PASS};

/// Parses `args` (program name first), validates and runs. Usage errors
/// print clap's message and return [`EXIT_CONFIG`].
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match parse_args(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_CONFIG,
            };
        }
    };
    match load_config(&parsed) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("invalid configuration: {e}");
            EXIT_CONFIG
        }
    }
}
