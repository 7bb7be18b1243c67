//! Individually certified roots: marched, polished with the standalone
//! evaluator, bracketed and checked against the counting functions.

use serde::{Deserialize, Serialize};

use super::count::count_pair;
use super::march::{Equation, Marcher};
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::specfun::{Order, Window};

/// A root together with a sign-change bracket and a scaled residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedRoot {
    pub root: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
}

impl CertifiedRoot {
    pub(crate) const ZERO: CertifiedRoot =
        CertifiedRoot { root: 0.0, bracket: (0.0, 0.0), residual: 0.0 };
}

/// Residuals above this are reported as failures.
pub const RESIDUAL_TOL: f64 = 1e-10;

const INNER_HALF_WIDTH: f64 = 3e-11;
const OUTER_HALF_WIDTH: f64 = 1e-6;

/// Boundary equation for degree `m`, or `None` when `m + sigma == 0` exactly
/// (the root collapses to zero).
pub(crate) fn equation(spec: &ProblemSpec, m: u32) -> Result<Option<Equation>> {
    let Some(sigma) = spec.sigma() else {
        return Ok(Some(Equation::Dirichlet));
    };
    let c = spec.robin_constant().unwrap_or_default();
    if sigma.cancels(m) {
        return Ok(None);
    }
    let a = f64::from(m) + sigma.value();
    if a == 0.0 {
        return Err(Error::Window(format!(
            "sigma = {sigma} differs from -{m} by less than double precision resolves"
        )));
    }
    Ok(Some(Equation::Robin { c, a }))
}

/// Same as [`equation`] but maps the degenerate case to `z J' - nu J`, which
/// keeps every marched or counted root right of zero.
pub(crate) fn equation_or_degenerate(spec: &ProblemSpec, m: u32) -> Result<(Equation, bool)> {
    Ok(match equation(spec, m)? {
        Some(eq) => (eq, false),
        None => (Equation::Robin { c: spec.order(m).value(), a: 0.0 }, true),
    })
}

/// Point left of the first positive root where marching can begin.
pub(crate) fn start_point(window: &Window, nu: Order, eq: Equation) -> Result<f64> {
    let nuv = nu.value();
    let mut x = if nuv < 1.0 { 0.5 } else { nuv };
    if let Equation::Robin { c, a } = eq {
        if a > 0.0 {
            // x J'/J decreases from nu at 0+; the first root is where it reaches c
            for _ in 0..2000 {
                let p = window.j_pair(nu, x)?;
                if p.log_derivative(nuv, x) > c {
                    return Ok(x);
                }
                x *= 0.5;
            }
            return Err(Error::Convergence(format!("no start point for order {nuv}")));
        }
    }
    Ok(x)
}

/// One radial equation: order, boundary function and whether the first root
/// has collapsed to zero.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Branch {
    pub nu: Order,
    pub eq: Equation,
    pub degenerate: bool,
}

impl Branch {
    pub fn of(spec: &ProblemSpec, m: u32) -> Result<Branch> {
        let (eq, degenerate) = equation_or_degenerate(spec, m)?;
        Ok(Branch { nu: spec.order(m), eq, degenerate })
    }

    pub fn dirichlet(nu: Order) -> Branch {
        Branch { nu, eq: Equation::Dirichlet, degenerate: false }
    }
}

/// Marched roots `<= x_end` (with a leading `0.0` in the degenerate case), at
/// most `max_roots` of them.
pub(crate) fn march_roots(window: &Window, b: &Branch, x_end: f64, max_roots: usize) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    if b.degenerate {
        roots.push(0.0);
    }
    if roots.len() >= max_roots {
        return Ok(roots);
    }
    let x_s = start_point(window, b.nu, b.eq)?;
    if x_s >= x_end {
        return Ok(roots);
    }
    let mut marcher = Marcher::start(window, b.nu, b.eq, x_s)?;
    marcher.run(x_end, max_roots, &mut roots)?;
    roots.retain(|&r| r <= x_end);
    Ok(roots)
}

/// Marched roots up to the `k`-th, extending the search until it is found.
pub(crate) fn march_first_k(window: &Window, b: &Branch, k: usize) -> Result<Vec<f64>> {
    let mut roots = Vec::with_capacity(k);
    if b.degenerate {
        roots.push(0.0);
    }
    if roots.len() >= k {
        return Ok(roots);
    }
    let nu = b.nu.value();
    let x_s = start_point(window, b.nu, b.eq)?;
    if x_s > window.x_max {
        return Err(Error::Window(format!("order {nu} starts beyond x_max = {}", window.x_max)));
    }
    let mut marcher = Marcher::start(window, b.nu, b.eq, x_s)?;
    // j_{nu,k} < nu + (k + 1) pi for moderate nu; the loop extends if not
    let mut x_end = x_s.max(nu) + (k as f64 + 2.0) * std::f64::consts::PI + 10.0;
    loop {
        x_end = x_end.min(window.x_max);
        marcher.run(x_end, k, &mut roots)?;
        if roots.len() >= k {
            if roots[k - 1] > window.x_max {
                break;
            }
            return Ok(roots);
        }
        if marcher.position() >= window.x_max {
            break;
        }
        x_end *= 1.5;
    }
    Err(Error::Window(format!("root {k} of order {nu} lies beyond x_max = {}", window.x_max)))
}

fn value_and_slope(window: &Window, nu: Order, eq: Equation, z: f64) -> Result<(f64, f64, f64)> {
    let p = window.j_pair(nu, z)?;
    let nuv = nu.value();
    let f = eq.eval(z, p.j, p.j_next);
    let df = match eq {
        Equation::Dirichlet => nuv / z * p.j - p.j_next,
        Equation::Robin { c, a } => (a * nuv / z - z) * p.j + c * p.j_next,
    };
    let scale = match eq {
        Equation::Dirichlet => p.envelope(),
        Equation::Robin { a, .. } => (a.abs() + z) * p.envelope(),
    };
    Ok((f, df, scale))
}

/// Scaled residual of a candidate root, as reported by [`certify`].
pub(crate) fn residual_at(window: &Window, nu: Order, eq: Equation, z: f64) -> Result<f64> {
    let (f, _, scale) = value_and_slope(window, nu, eq, z)?;
    Ok(f.abs() / scale)
}

/// Scaled residual of a candidate negative-branch root.
pub(crate) fn negative_residual_at(window: &Window, nu: Order, a: f64, z: f64) -> Result<f64> {
    let r = window.i_pair(nu, z)?.ratio();
    Ok((a + z * r).abs() / (a.abs() + z))
}

fn count_at(window: &Window, nu: Order, eq: Equation, x: f64) -> Result<u64> {
    let p = window.j_pair(nu, x)?;
    Ok(count_pair(eq, nu.value(), x, p.j, p.j_next))
}

/// Polishes a marched approximation of the `k`-th root and certifies it.
pub(crate) fn certify(window: &Window, nu: Order, eq: Equation, approx: f64, k: u64) -> Result<CertifiedRoot> {
    let mut z = approx;
    for _ in 0..8 {
        let (f, df, _) = value_and_slope(window, nu, eq, z)?;
        if f == 0.0 || df == 0.0 {
            break;
        }
        let step = f / df;
        z -= step;
        if step.abs() <= 4.0 * f64::EPSILON * z {
            break;
        }
    }
    let (f, _, scale) = value_and_slope(window, nu, eq, z)?;
    let residual = f.abs() / scale;

    let sign = |x: f64| -> Result<f64> { Ok(value_and_slope(window, nu, eq, x)?.0) };
    let mut delta = INNER_HALF_WIDTH.min(0.25 * z);
    let (mut lo, mut hi) = (z - delta, z + delta);
    let (mut f_lo, f_hi) = (sign(lo)?, sign(hi)?);
    if !(f_lo * f_hi < 0.0) {
        // the evaluator could not resolve the sign this close; widen and bisect down
        delta = OUTER_HALF_WIDTH.min(0.25 * z);
        lo = z - delta;
        hi = z + delta;
        f_lo = sign(lo)?;
        if !(f_lo * sign(hi)? < 0.0) {
            return Err(Error::Bracket(format!(
                "no sign change around root {k} of order {} at {z}",
                nu.value()
            )));
        }
        while hi - lo > 2.0 * INNER_HALF_WIDTH {
            let mid = 0.5 * (lo + hi);
            let f_mid = sign(mid)?;
            if f_mid == 0.0 {
                lo = mid - INNER_HALF_WIDTH.min(0.25 * mid);
                hi = mid + INNER_HALF_WIDTH.min(0.25 * mid);
                break;
            }
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        if !(lo <= z && z <= hi) {
            z = 0.5 * (lo + hi);
        }
    }
    let (c_lo, c_hi) = (count_at(window, nu, eq, lo)?, count_at(window, nu, eq, hi)?);
    if c_lo + 1 != k || c_hi != k {
        return Err(Error::Convergence(format!(
            "root near {z} of order {} is not root number {k} (counts {c_lo}, {c_hi})",
            nu.value()
        )));
    }
    if residual > RESIDUAL_TOL {
        return Err(Error::Accuracy(format!(
            "residual {residual:e} at root {k} of order {}",
            nu.value()
        )));
    }
    Ok(CertifiedRoot { root: z, bracket: (lo, hi), residual })
}

/// Unique positive root of `a + z I_{nu+1}(z) / I_nu(z) = 0` for `a < 0`.
pub(crate) fn negative_root(window: &Window, nu: Order, a: f64) -> Result<CertifiedRoot> {
    debug_assert!(a < 0.0);
    let nuv = nu.value();
    let g = |z: f64| -> Result<(f64, f64)> {
        let r = window.i_pair(nu, z)?.ratio();
        let dr = 1.0 - (2.0 * nuv + 1.0) / z * r - r * r;
        Ok((a + z * r, r + z * dr))
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi)?.0 < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > window.i_x_max {
            hi = window.i_x_max;
            if g(hi)?.0 < 0.0 {
                return Err(Error::Overflow(format!(
                    "negative-branch root of order {nuv} beyond the modified Bessel guard"
                )));
            }
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..300 {
        let (f, df) = g(z)?;
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let newton = z - f / df;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - z).abs() <= 2.0 * f64::EPSILON * z {
            z = next;
            break;
        }
        z = next;
    }
    let residual = g(z)?.0.abs() / (a.abs() + z);
    let delta = INNER_HALF_WIDTH.min(0.25 * z);
    let (b_lo, b_hi) = (z - delta, z + delta);
    if !(g(b_lo)?.0 < 0.0 && g(b_hi)?.0 > 0.0) {
        return Err(Error::Bracket(format!("negative-branch root of order {nuv} near {z}")));
    }
    if residual > RESIDUAL_TOL {
        return Err(Error::Accuracy(format!("negative-branch residual {residual:e}")));
    }
    Ok(CertifiedRoot { root: z, bracket: (b_lo, b_hi), residual })
}
