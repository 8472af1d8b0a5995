//! Command-line front end for `tnngrass`: JSON input documents, verdict
//! reports and one subcommand per inequality family.

pub mod app;
pub mod input;
pub mod report;

pub use app::{run, Cli, CliError, Outcome};

/// Sizes the global thread pool from `TNNGRASS_THREADS` when it is set.
/// Results never depend on the thread count.
pub fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var("TNNGRASS_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| format!("TNNGRASS_THREADS={text:?} is not a positive integer; using the default pool"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}
