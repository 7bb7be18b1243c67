//! Front end of the `robin-ball` command: argument parsing, validation,
//! CSV/JSON output and the on-disk root cache.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;

pub use args::Cli;
pub use config::RunConfig;
pub use error::{CliError, Result};

/// Validates the configuration and runs the command, returning its exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::from_args(&cli.common)?;
    cfg.check_for(&cli.command)?;
    match cfg.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
            let mut buf = Vec::new();
            let code = pool.install(|| commands::execute(&cfg, &cli.command, &mut buf));
            out.write_all(&buf).map_err(|e| CliError::io("<output>", e))?;
            code
        }
        None => commands::execute(&cfg, &cli.command, out),
    }
}
