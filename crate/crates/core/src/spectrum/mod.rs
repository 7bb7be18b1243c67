//! Dirichlet and Robin spectra of the unit ball.
//!
//! Separation of variables gives eigenvalues `x^2` where `x` runs over the
//! positive zeros of `J_nu` (Dirichlet) or the roots of
//! `z J'_nu(z) = (d/2 - 1 - sigma) J_nu(z)` (Robin), with `nu = m + d/2 - 1`
//! and multiplicity the dimension of degree-`m` spherical harmonics. Degrees with
//! `m < -sigma` add one negative eigenvalue `-x^2` from the analogous equation for
//! `I_nu`, and `m = -sigma` turns the first root into the eigenvalue zero.

mod count;
mod index;
pub(crate) mod march;
mod roots;
mod table;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{ModeIndex, ProblemSpec};
use crate::specfun::{Order, Window};

pub use index::{IndexMethod, IndexRecord};
pub(crate) use roots::{certify, equation, march_first_k, Branch};
pub(crate) use table::total_count as total_count_at;
pub use roots::{CertifiedRoot, RESIDUAL_TOL};
pub use table::{OrderRoots, RootTable};

/// Dimension of the space of degree-`m` spherical harmonics on `S^{d-1}`.
///
/// Saturates at `u64::MAX` for very large `(m, d)`.
pub fn multiplicity(m: u32, d: u32) -> u64 {
    if m == 0 {
        return 1;
    }
    let binom = |a: u64, b: u64| -> Option<u128> {
        if a < b {
            return Some(0);
        }
        let b = b.min(a - b);
        let mut r: u128 = 1;
        for i in 0..b {
            r = r.checked_mul(u128::from(a - i))? / u128::from(i + 1);
        }
        Some(r)
    };
    let (m, d) = (u64::from(m), u64::from(d));
    binom(m + d - 1, d - 1)
        .zip(binom(m + d - 3, d - 1))
        .and_then(|(a, b)| u64::try_from(a - b).ok())
        .unwrap_or(u64::MAX)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineKind {
    DirichletZero,
    RobinPositive,
    RobinZero,
    RobinNegative,
}

impl LineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LineKind::DirichletZero => "dirichlet-zero",
            LineKind::RobinPositive => "robin-positive",
            LineKind::RobinZero => "robin-zero",
            LineKind::RobinNegative => "robin-negative",
        }
    }
}

/// One eigenvalue with its mode, multiplicity and certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub mu: f64,
    pub mode: ModeIndex,
    pub kind: LineKind,
    pub multiplicity: u64,
    pub root: f64,
    pub residual: f64,
}

/// Enumeration cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Limit {
    /// All eigenvalues `mu <= lambda`.
    Eigenvalue(f64),
    /// The first `n` eigenvalues counted with multiplicity; the last line may
    /// overshoot `n` by part of its multiplicity.
    Count(u64),
}

/// Ordered eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lines: Vec<SpectralLine>,
    /// Sum of multiplicities over `lines`.
    pub total_multiplicity: u64,
}

/// Entry point carrying the evaluator window; the free functions use the default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Solver {
    pub window: Window,
}

impl Solver {
    pub fn new(window: Window) -> Self {
        Solver { window }
    }

    /// `j_{nu,k}`, certified.
    pub fn dirichlet_zero(&self, nu: Order, k: u32) -> Result<CertifiedRoot> {
        if k == 0 {
            return Err(Error::InvalidSpec("radial index k must be at least 1".into()));
        }
        let b = Branch::dirichlet(nu);
        let roots = march_first_k(&self.window, &b, k as usize)?;
        certify(&self.window, nu, b.eq, roots[k as usize - 1], u64::from(k))
    }

    /// `j_{nu,1}, ..., j_{nu,k_max}`, certified.
    pub fn dirichlet_zeros(&self, nu: Order, k_max: u32) -> Result<Vec<CertifiedRoot>> {
        let b = Branch::dirichlet(nu);
        let roots = march_first_k(&self.window, &b, k_max as usize)?;
        self.certify_all(&b, &roots)
    }

    pub fn count_dirichlet_zeros_below(&self, nu: Order, x: f64) -> Result<u64> {
        if x <= nu.value() {
            return Ok(0);
        }
        let p = self.window.j_pair(nu, x)?;
        Ok(count::count_pair(march::Equation::Dirichlet, nu.value(), x, p.j, p.j_next))
    }

    /// `x_{nu,k}` for `k >= 1`; zero (with a zero-width bracket) when
    /// `k = 1` and `m = -sigma` exactly.
    pub fn robin_root(&self, spec: &ProblemSpec, m: u32, k: u32) -> Result<CertifiedRoot> {
        spec.require_robin()?;
        if k == 0 {
            return Err(Error::InvalidSpec("radial index k must be at least 1; use negative_robin_root".into()));
        }
        self.mode_root(spec, m, k)
    }

    /// `x_{nu,1}, ..., x_{nu,k_max}`, certified.
    pub fn robin_roots(&self, spec: &ProblemSpec, m: u32, k_max: u32) -> Result<Vec<CertifiedRoot>> {
        spec.require_robin()?;
        self.mode_roots(spec, m, k_max)
    }

    /// Radial root of mode `(m, k)` under either boundary condition (`k >= 1`).
    pub fn mode_root(&self, spec: &ProblemSpec, m: u32, k: u32) -> Result<CertifiedRoot> {
        let b = Branch::of(spec, m)?;
        if b.degenerate && k == 1 {
            return Ok(CertifiedRoot::ZERO);
        }
        let roots = march_first_k(&self.window, &b, k as usize)?;
        certify(&self.window, b.nu, b.eq, roots[k as usize - 1], u64::from(k))
    }

    /// Radial roots `k = 1..=k_max` of degree `m`, certified.
    pub fn mode_roots(&self, spec: &ProblemSpec, m: u32, k_max: u32) -> Result<Vec<CertifiedRoot>> {
        let b = Branch::of(spec, m)?;
        let roots = march_first_k(&self.window, &b, k_max as usize)?;
        self.certify_all(&b, &roots)
    }

    fn certify_all(&self, b: &Branch, roots: &[f64]) -> Result<Vec<CertifiedRoot>> {
        roots
            .par_iter()
            .enumerate()
            .map(|(i, &r)| {
                if b.degenerate && i == 0 {
                    Ok(CertifiedRoot::ZERO)
                } else {
                    certify(&self.window, b.nu, b.eq, r, i as u64 + 1)
                }
            })
            .collect()
    }

    /// `x_{nu,0}` when `m < -sigma`, otherwise `None`.
    pub fn negative_robin_root(&self, spec: &ProblemSpec, m: u32) -> Result<Option<CertifiedRoot>> {
        spec.require_robin()?;
        match equation(spec, m)? {
            Some(march::Equation::Robin { a, .. }) if a < 0.0 => {
                roots::negative_root(&self.window, spec.order(m), a).map(Some)
            }
            _ => Ok(None),
        }
    }

    /// Scaled residual of a claimed root of mode `(m, k)`, without polishing
    /// or bracketing. `k = 0` refers to the negative branch.
    pub fn root_residual(&self, spec: &ProblemSpec, m: u32, k: u32, root: f64) -> Result<f64> {
        let b = Branch::of(spec, m)?;
        if k == 0 {
            return match b.eq {
                march::Equation::Robin { a, .. } if a < 0.0 && root > 0.0 => {
                    roots::negative_residual_at(&self.window, b.nu, a, root)
                }
                _ => Err(Error::InvalidSpec(format!("degree {m} has no negative-branch root"))),
            };
        }
        if b.degenerate && k == 1 {
            return Ok(root.abs());
        }
        if !(root > 0.0) {
            return Err(Error::Range(format!("root {root} of mode ({m}, {k}) must be positive")));
        }
        roots::residual_at(&self.window, b.nu, b.eq, root)
    }

    /// `#{k >= 1 : x_{nu,k} <= x}`, the zero root included.
    pub fn count_robin_roots_below(&self, spec: &ProblemSpec, m: u32, x: f64) -> Result<u64> {
        spec.require_robin()?;
        let b = Branch::of(spec, m)?;
        if !(x > 0.0) {
            return Err(Error::Range(format!("count abscissa {x} must be positive")));
        }
        let p = self.window.j_pair(b.nu, x)?;
        if p.j == 0.0 && p.j_next == 0.0 {
            return Ok(0);
        }
        Ok(count::count_pair(b.eq, b.nu.value(), x, p.j, p.j_next))
    }

    /// Number of eigenvalues `mu <= lambda`, with multiplicity.
    pub fn counting_function(&self, spec: &ProblemSpec, lambda: f64) -> Result<u64> {
        if lambda > 0.0 {
            return table::total_count(&self.window, spec, lambda.sqrt(), None);
        }
        let lines = self.nonpositive_lines(spec)?;
        Ok(lines.iter().filter(|l| l.mu <= lambda).map(|l| l.multiplicity).sum())
    }

    /// Eigenvalues with `mu <= 0`, unsorted.
    pub(crate) fn nonpositive_lines(&self, spec: &ProblemSpec) -> Result<Vec<SpectralLine>> {
        let Some(sigma) = spec.sigma() else {
            return Ok(Vec::new());
        };
        let d = spec.d();
        let top = (-sigma.value()).max(0.0).ceil() as u32;
        let mut lines = Vec::new();
        for m in 0..=top {
            if sigma.cancels(m) {
                lines.push(SpectralLine {
                    mu: 0.0,
                    mode: ModeIndex::new(m, 1),
                    kind: LineKind::RobinZero,
                    multiplicity: multiplicity(m, d),
                    root: 0.0,
                    residual: 0.0,
                });
            } else if let Some(r) = self.negative_robin_root(spec, m)? {
                lines.push(SpectralLine {
                    mu: -r.root * r.root,
                    mode: ModeIndex::new(m, 0),
                    kind: LineKind::RobinNegative,
                    multiplicity: multiplicity(m, d),
                    root: r.root,
                    residual: r.residual,
                });
            }
        }
        Ok(lines)
    }

    /// Number of negative eigenvalues with multiplicity.
    pub fn n_sigma(&self, spec: &ProblemSpec) -> Result<u64> {
        let sigma = spec.require_robin()?;
        let d = spec.d();
        let top = (-sigma.value()).max(0.0).ceil() as u32;
        let mut n = 0u64;
        for m in 0..=top {
            if let Some(march::Equation::Robin { a, .. }) = equation(spec, m)? {
                if a < 0.0 {
                    n = n.saturating_add(multiplicity(m, d));
                }
            }
        }
        Ok(n)
    }

    /// Ordered eigenvalues up to the given cap, each with a certificate.
    pub fn enumerate_spectrum(&self, spec: &ProblemSpec, limit: Limit) -> Result<Spectrum> {
        let mut lines = self.nonpositive_lines(spec)?;
        let x_max = match limit {
            Limit::Count(0) => return Ok(Spectrum { lines: Vec::new(), total_multiplicity: 0 }),
            Limit::Count(n) => {
                let below: u64 = lines.iter().map(|l| l.multiplicity).sum();
                if below >= n {
                    None
                } else {
                    Some(self.count_abscissa(spec, n)?)
                }
            }
            Limit::Eigenvalue(lambda) => (lambda > 0.0).then(|| lambda.sqrt()),
        };
        if let Some(x_max) = x_max {
            let table = RootTable::build(&self.window, spec, x_max)?;
            let kind = if spec.is_dirichlet() { LineKind::DirichletZero } else { LineKind::RobinPositive };
            let d = spec.d();
            let mut todo = Vec::new();
            for (m, o) in table.orders().iter().enumerate() {
                for (i, &r) in o.positive.iter().enumerate() {
                    if r > 0.0 {
                        todo.push((m as u32, i as u32 + 1, r));
                    }
                }
            }
            let certified: Vec<SpectralLine> = todo
                .par_iter()
                .map(|&(m, k, r)| {
                    let b = Branch::of(spec, m)?;
                    let c = certify(&self.window, b.nu, b.eq, r, u64::from(k))?;
                    Ok(SpectralLine {
                        mu: c.root * c.root,
                        mode: ModeIndex::new(m, k),
                        kind,
                        multiplicity: multiplicity(m, d),
                        root: c.root,
                        residual: c.residual,
                    })
                })
                .collect::<Result<_>>()?;
            lines.extend(certified);
        }
        lines.sort_by(|a, b| a.mu.total_cmp(&b.mu).then(a.mode.cmp(&b.mode)));
        match limit {
            Limit::Count(n) => {
                let mut acc = 0u64;
                let keep = lines
                    .iter()
                    .position(|l| {
                        acc += l.multiplicity;
                        acc >= n
                    })
                    .map_or(lines.len(), |i| i + 1);
                lines.truncate(keep);
            }
            Limit::Eigenvalue(lambda) => lines.retain(|l| l.mu <= lambda),
        }
        let total_multiplicity = lines.iter().map(|l| l.multiplicity).sum();
        Ok(Spectrum { lines, total_multiplicity })
    }

    /// Smallest `x` (to about 1e-13 relative) with at least `n` eigenvalues of
    /// root `<= x`, negative ones included.
    fn count_abscissa(&self, spec: &ProblemSpec, n: u64) -> Result<f64> {
        let count = |x: f64| table::total_count(&self.window, spec, x, None);
        let mut hi = 2.0;
        while count(hi)? < n {
            if hi >= self.window.x_max {
                return Err(Error::Window(format!("{n} eigenvalues need roots beyond x_max = {}", self.window.x_max)));
            }
            hi = (hi * 2.0).min(self.window.x_max);
        }
        let mut lo = 0.5 * hi;
        if count(lo)? >= n {
            lo = 0.0;
        }
        while hi - lo > 1e-13 * hi {
            let mid = 0.5 * (lo + hi);
            if count(mid)? >= n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // keep a sliver of room so the root itself is inside the table
        Ok(hi * (1.0 + 1e-12))
    }

    /// Eigenvalue `mu_n` (the `n`-th eigenvalue with multiplicity) from the
    /// counting function alone.
    pub fn nth_eigenvalue(&self, spec: &ProblemSpec, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidSpec("eigenvalue index must be at least 1".into()));
        }
        let mut below = self.nonpositive_lines(spec)?;
        let total: u64 = below.iter().map(|l| l.multiplicity).sum();
        if total >= n {
            below.sort_by(|a, b| a.mu.total_cmp(&b.mu).then(a.mode.cmp(&b.mode)));
            let mut acc = 0;
            for l in &below {
                acc += l.multiplicity;
                if acc >= n {
                    return Ok(l.mu);
                }
            }
        }
        let x = self.count_abscissa(spec, n)? / (1.0 + 1e-12);
        Ok(x * x)
    }

    /// `gamma(d) = 2^{d-2} d^2 Gamma(d/2)^2 / j_{d/2-1,1}^d`.
    pub fn gamma_d(&self, d: u32) -> Result<f64> {
        if d < 2 {
            return Err(Error::InvalidSpec(format!("dimension must be at least 2, got {d}")));
        }
        let j = self.dirichlet_zero(Order::from_mode(0, d), 1)?.root;
        let df = f64::from(d);
        let ln = (df - 2.0) * std::f64::consts::LN_2 + 2.0 * df.ln()
            + 2.0 * statrs::function::gamma::ln_gamma(0.5 * df)
            - df * j.ln();
        Ok(ln.exp())
    }
}

pub fn dirichlet_zero(nu: Order, k: u32) -> Result<CertifiedRoot> {
    Solver::default().dirichlet_zero(nu, k)
}

pub fn count_dirichlet_zeros_below(nu: Order, x: f64) -> Result<u64> {
    Solver::default().count_dirichlet_zeros_below(nu, x)
}

pub fn robin_root(spec: &ProblemSpec, m: u32, k: u32) -> Result<CertifiedRoot> {
    Solver::default().robin_root(spec, m, k)
}

pub fn negative_robin_root(spec: &ProblemSpec, m: u32) -> Result<Option<CertifiedRoot>> {
    Solver::default().negative_robin_root(spec, m)
}

pub fn n_sigma(spec: &ProblemSpec) -> Result<u64> {
    Solver::default().n_sigma(spec)
}

pub fn count_robin_roots_below(spec: &ProblemSpec, m: u32, x: f64) -> Result<u64> {
    Solver::default().count_robin_roots_below(spec, m, x)
}

pub fn enumerate_spectrum(spec: &ProblemSpec, limit: Limit) -> Result<Spectrum> {
    Solver::default().enumerate_spectrum(spec, limit)
}

pub fn index_dirichlet(d: u32, m: u32, k: u32, method: IndexMethod) -> Result<IndexRecord> {
    Solver::default().index_dirichlet(d, m, k, method)
}

pub fn index_robin(spec: &ProblemSpec, m: u32, k: u32, method: IndexMethod) -> Result<IndexRecord> {
    Solver::default().index_robin(spec, m, k, method)
}

pub fn gamma_d(d: u32) -> Result<f64> {
    Solver::default().gamma_d(d)
}
