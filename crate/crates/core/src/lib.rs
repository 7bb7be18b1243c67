//! Robin and Dirichlet spectra of the unit ball in `R^d`.
//!
//! The crate evaluates Bessel functions, finds and certifies the radial roots
//! that give the eigenvalues, orders the spectrum with multiplicities, counts
//! nodal domains of separated eigenfunctions on the disk and estimates the
//! Pleijel constant `limsup N_k / k`.
//!
//! ```
//! use robin_ball::{ProblemSpec, Solver, Limit};
//!
//! let solver = Solver::default();
//! let spec = ProblemSpec::robin(2, "-1").unwrap();
//! let spectrum = solver.enumerate_spectrum(&spec, Limit::Count(3)).unwrap();
//! assert!(spectrum.lines[0].mu < 0.0);
//! assert_eq!(spectrum.lines[1].mu, 0.0);
//! ```

pub mod error;
pub mod pleijel;
pub mod problem;
pub mod specfun;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use pleijel::{nodal_count_2d, QuotientRecord, RunningQuotient, ScanResult};
pub use problem::{Boundary, ModeIndex, ProblemSpec, Sigma};
pub use specfun::{EvalResult, Order, Window, ACCURACY_TARGET};
pub use spectrum::{
    multiplicity, CertifiedRoot, IndexMethod, IndexRecord, Limit, LineKind, RootTable, Solver, SpectralLine,
    Spectrum, RESIDUAL_TOL,
};
pub use verify::{CheckReport, CoincidenceHit, Violation};
