//! Scenario runner and verification harness for `qchar-core`.

pub mod error;
pub mod example;
pub mod literal;
pub mod output;
pub mod run;
pub mod scenario;
pub mod verify;

pub use error::CliError;

/// Runs `f` on a pool with `threads` workers (rayon's default when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        if k == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        b = b.num_threads(k);
    }
    let pool = b.build().map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(pool.install(f))
}
