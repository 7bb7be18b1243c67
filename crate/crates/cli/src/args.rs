use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "robin-ball", version, about = "Robin and Dirichlet spectra of the unit ball, nodal counts and Pleijel quotients")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Space dimension
    #[arg(long, global = true)]
    pub d: Option<u32>,
    /// Dirichlet boundary condition (the default)
    #[arg(long, global = true, conflicts_with = "sigma")]
    pub dirichlet: bool,
    /// Robin parameter as a decimal literal, e.g. -2.5 or 1e6
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Number of eigenvalues (with multiplicity); series length for `pleijel`
    #[arg(long, global = true)]
    pub count: Option<u64>,
    /// Eigenvalue cap
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub m_max: Option<u32>,
    #[arg(long, global = true)]
    pub k_max: Option<u32>,
    /// Smallest eigenvalue entering a Pleijel scan
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub burn_in: Option<f64>,
    /// Tolerance of the selected check
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Largest dimension for `verify gamma`
    #[arg(long, global = true)]
    pub d_max: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Root cache location; caching is off when unset
    #[arg(long, global = true, env = "PLEIJEL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Layout used when a cache file is first written
    #[arg(long, global = true, value_enum)]
    pub cache_format: Option<CacheFormat>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum CacheFormat {
    #[default]
    Binary,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Ordered eigenvalues, one row per index
    Spectrum,
    /// Pleijel scan plus the running quotient series
    Pleijel,
    /// Run one verification suite; exit status 1 when it fails
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Near-coincident roots of different angular degrees
    ScanCoincidences,
    /// Inspect or empty the root cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Interlacing,
    Spacing,
    Weyl,
    IndexRatio,
    Coincidences,
    Asymptotics,
    Gamma,
    Monotonicity,
    DirichletLimit,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CacheAction {
    Info,
    Clear,
}
