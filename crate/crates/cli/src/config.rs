//! Validated run parameters.

use std::path::PathBuf;

use robin_ball::{Limit, ProblemSpec};

use crate::args::{CacheFormat, Command, CommonArgs, Format, Suite};
use crate::error::{CliError, Result};

pub const DEFAULT_SPECTRUM_COUNT: u64 = 100;
pub const DEFAULT_SCAN_CUTOFF: u32 = 2000;
pub const DEFAULT_BURN_IN: f64 = 1000.0;
pub const DEFAULT_SERIES_LENGTH: u64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: ProblemSpec,
    pub count: Option<u64>,
    pub lambda: Option<f64>,
    pub m_max: Option<u32>,
    pub k_max: Option<u32>,
    pub burn_in: Option<f64>,
    pub tol: Option<f64>,
    pub d_max: Option<u32>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub cache_format: CacheFormat,
    pub threads: Option<usize>,
}

fn bad(field: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("--{field}: {why}"))
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs) -> Result<RunConfig> {
        let d = a.d.unwrap_or(2);
        let spec = match &a.sigma {
            Some(s) if !a.dirichlet => ProblemSpec::robin(d, s),
            _ => ProblemSpec::dirichlet(d),
        }
        .map_err(|e| bad(if a.d.is_some_and(|d| d < 2) { "d" } else { "sigma" }, e))?;
        if a.count.is_some() && a.lambda.is_some() {
            return Err(CliError::Config("--count and --lambda are mutually exclusive".into()));
        }
        if let Some(l) = a.lambda {
            if !l.is_finite() {
                return Err(bad("lambda", "must be finite"));
            }
        }
        if let Some(b) = a.burn_in {
            if !b.is_finite() {
                return Err(bad("burn-in", "must be finite"));
            }
        }
        if let Some(t) = a.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(bad("tol", "must be positive"));
            }
        }
        if a.k_max == Some(0) {
            return Err(bad("k-max", "must be at least 1"));
        }
        if a.threads == Some(0) {
            return Err(bad("threads", "must be at least 1"));
        }
        if a.d_max.is_some_and(|d| d < 2) {
            return Err(bad("d-max", "must be at least 2"));
        }
        Ok(RunConfig {
            spec,
            count: a.count,
            lambda: a.lambda,
            m_max: a.m_max,
            k_max: a.k_max,
            burn_in: a.burn_in,
            tol: a.tol,
            d_max: a.d_max,
            format: a.format.unwrap_or_default(),
            cache_dir: a.cache_dir.clone(),
            cache_format: a.cache_format.unwrap_or_default(),
            threads: a.threads,
        })
    }

    /// Checks the combinations a particular command cannot use.
    pub fn check_for(&self, command: &Command) -> Result<()> {
        let needs_robin = matches!(
            command,
            Command::Verify { suite: Suite::Interlacing | Suite::IndexRatio | Suite::DirichletLimit }
        );
        if needs_robin && self.spec.is_dirichlet() {
            return Err(bad("sigma", "this suite needs a Robin parameter"));
        }
        let needs_2d = matches!(command, Command::Pleijel);
        if needs_2d && self.spec.d() != 2 {
            return Err(bad("d", "Pleijel scans are defined for d = 2 only"));
        }
        if matches!(command, Command::Pleijel) && self.lambda.is_some() {
            return Err(bad("lambda", "not used by pleijel; use --count for the series length"));
        }
        if matches!(command, Command::Cache { .. }) && self.cache_dir.is_none() {
            return Err(bad("cache-dir", "no cache directory given (flag or PLEIJEL_CACHE_DIR)"));
        }
        Ok(())
    }

    pub fn spectrum_limit(&self) -> Limit {
        match (self.count, self.lambda) {
            (_, Some(l)) => Limit::Eigenvalue(l),
            (Some(n), None) => Limit::Count(n),
            (None, None) => Limit::Count(DEFAULT_SPECTRUM_COUNT),
        }
    }

    pub fn m_max_or(&self, v: u32) -> u32 {
        self.m_max.unwrap_or(v)
    }

    pub fn k_max_or(&self, v: u32) -> u32 {
        self.k_max.unwrap_or(v)
    }

    pub fn tol_or(&self, v: f64) -> f64 {
        self.tol.unwrap_or(v)
    }
}
