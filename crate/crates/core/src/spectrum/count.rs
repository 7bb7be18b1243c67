//! Root counting without root finding.
//!
//! The number of zeros of `J_nu` in `(0, x]` is pinned down to two consecutive
//! candidates by the Debye phase `sqrt(x^2 - nu^2) - nu acos(nu / x)`; the sign of
//! `J_nu(x)` then selects the right one. Robin counts follow from the
//! interlacing of Robin roots with Bessel zeros plus one sign test of the
//! boundary function.

use super::march::Equation;

/// `#{k : j_{nu,k} <= x}` from the phase estimate and the sign of `J_nu(x)`.
pub(crate) fn count_from_sign(nu: f64, x: f64, j: f64) -> u64 {
    if x <= nu {
        return 0;
    }
    let root = ((x - nu) * (x + nu)).sqrt();
    let phase = root - nu * root.atan2(nu);
    let s = phase / std::f64::consts::PI + 0.25;
    if j == 0.0 {
        return s.round().max(0.0) as u64;
    }
    // the two integers in (s - 1.5, s + 0.5)
    let hi = (s + 0.5).ceil() - 1.0;
    let lo = hi - 1.0;
    let want_even = j > 0.0;
    let pick = if ((hi as i64).rem_euclid(2) == 0) == want_even { hi } else { lo };
    if pick < 0.0 {
        // only reachable through a sign error at tiny x; the count there is zero
        0
    } else {
        pick as u64
    }
}

/// `#{k >= 1 : x_{nu,k} <= x}` for the Robin equation, given `n` Bessel zeros
/// below `x` and the boundary function value `f` at `x`.
pub(crate) fn robin_count(eq: Equation, n: u64, f: f64) -> u64 {
    let a = match eq {
        Equation::Robin { a, .. } => a,
        Equation::Dirichlet => return n,
    };
    // the root in (j_n, j_{n+1}) is at or below x iff F(x) already has the sign of F(j_{n+1})
    let past = f == 0.0 || (f < 0.0) == (n % 2 == 0);
    if a >= 0.0 {
        n + u64::from(past)
    } else if n == 0 {
        0
    } else {
        n - 1 + u64::from(past)
    }
}

/// Counts for one order given `J_nu(x)` and `J_{nu+1}(x)`.
pub(crate) fn count_pair(eq: Equation, nu: f64, x: f64, j: f64, j_next: f64) -> u64 {
    let n = count_from_sign(nu, x, j);
    robin_count(eq, n, eq.eval(x, j, j_next))
}
