//! Taylor-series integration of Bessel's equation along the real axis.
//!
//! Starting from `(J_nu, J'_nu)` at some point left of the first root, the
//! solution is propagated with local power series of `x^2 y'' + x y' + (x^2 - nu^2) y = 0`
//! and every sign change of the target function is refined on the local
//! polynomial. One march per order yields all roots up to a limit in `O(limit)`
//! work.

use crate::error::{Error, Result};
use crate::specfun::{Order, Window};

const MAX_TERMS: usize = 64;
const EPS: f64 = f64::EPSILON;

/// Which function of `J_nu` the marcher looks for roots of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Equation {
    /// `J_nu(z) = 0`.
    Dirichlet,
    /// `z J'_nu(z) - c J_nu(z) = 0`; `a = nu - c = m + sigma`.
    Robin { c: f64, a: f64 },
}

impl Equation {
    /// Target function from `J_nu` and `J_{nu+1}` at `z`.
    pub fn eval(self, z: f64, j: f64, j_next: f64) -> f64 {
        match self {
            Equation::Dirichlet => j,
            Equation::Robin { a, .. } => a * j - z * j_next,
        }
    }

    fn from_local(self, z: f64, y: f64, yp: f64) -> f64 {
        match self {
            Equation::Dirichlet => y,
            Equation::Robin { c, .. } => z * yp - c * y,
        }
    }

    fn local_derivative(self, z: f64, yp: f64, ypp: f64) -> f64 {
        match self {
            Equation::Dirichlet => yp,
            Equation::Robin { c, .. } => (1.0 - c) * yp + z * ypp,
        }
    }
}

/// Local Taylor polynomial of a Bessel solution about `x0`.
struct Local {
    x0: f64,
    a: [f64; MAX_TERMS + 1],
    n: usize,
}

impl Local {
    /// Builds the expansion and returns `None` if `h` is too long for `MAX_TERMS`.
    fn build(nu: f64, x0: f64, y: f64, yp: f64, h: f64) -> Option<Local> {
        let mut a = [0.0; MAX_TERMS + 1];
        a[0] = y;
        a[1] = yp;
        let x2 = x0 * x0;
        let shift = (x0 - nu) * (x0 + nu);
        let scale = y.abs() + (yp * h).abs();
        let mut small = 0;
        let mut hp = h; // h^(n+1) while computing a[n+1]
        for n in 0..MAX_TERMS - 1 {
            let nf = n as f64;
            let am1 = if n >= 1 { a[n - 1] } else { 0.0 };
            let am2 = if n >= 2 { a[n - 2] } else { 0.0 };
            let rhs = x0 * (nf + 1.0) * (2.0 * nf + 1.0) * a[n + 1]
                + (nf * nf + shift) * a[n]
                + 2.0 * x0 * am1
                + am2;
            a[n + 2] = -rhs / (x2 * (nf + 2.0) * (nf + 1.0));
            hp *= h;
            if (a[n + 2] * hp).abs() <= 0.25 * EPS * scale {
                small += 1;
                if small == 3 {
                    return Some(Local { x0, a, n: n + 3 });
                }
            } else {
                small = 0;
            }
        }
        None
    }

    /// `(p(t), p'(t), p''(t))`.
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let mut p = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for i in (0..self.n).rev() {
            d2 = d2 * t + 2.0 * d1;
            d1 = d1 * t + p;
            p = p * t + self.a[i];
        }
        (p, d1, d2)
    }

    fn target(&self, eq: Equation, t: f64) -> (f64, f64) {
        let (p, d1, d2) = self.eval(t);
        let z = self.x0 + t;
        (eq.from_local(z, p, d1), eq.local_derivative(z, d1, d2))
    }

    /// Root of the target in `(0, h]` given a sign change; safeguarded Newton.
    fn refine(&self, eq: Equation, h: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, h);
        let (f_lo, _) = self.target(eq, lo);
        let up = f_lo < 0.0;
        let mut t = 0.5 * h;
        for _ in 0..200 {
            let (f, df) = self.target(eq, t);
            if f == 0.0 {
                return self.x0 + t;
            }
            if (f < 0.0) == up {
                lo = t;
            } else {
                hi = t;
            }
            let newton = t - f / df;
            let next = if df != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - t).abs() <= 2.0 * EPS * (self.x0 + t) || hi - lo <= 2.0 * EPS * (self.x0 + hi) {
                return self.x0 + next;
            }
            t = next;
        }
        self.x0 + t
    }
}

/// Marches one order from a starting point to `x_end`, collecting roots.
pub(crate) struct Marcher {
    nu: f64,
    eq: Equation,
    x: f64,
    y: f64,
    yp: f64,
    h_max: f64,
}

impl Marcher {
    /// Starts at `x_s` from evaluator values. `x_s` must lie left of the first
    /// root of the target function.
    pub fn start(window: &Window, nu: Order, eq: Equation, x_s: f64) -> Result<Marcher> {
        let p = window.j_pair(nu, x_s)?;
        let nuv = nu.value();
        let y = p.j;
        let yp = nuv / x_s * p.j - p.j_next;
        let s = y.abs().max(yp.abs());
        Ok(Marcher { nu: nuv, eq, x: x_s, y: y / s, yp: yp / s, h_max: 2.0 })
    }

    pub fn position(&self) -> f64 {
        self.x
    }

    /// Depends only on the current position, so roots come out bit-identical
    /// however a march is split into runs.
    fn step_length(&self) -> f64 {
        let mut h = self.h_max.min(0.35 * self.x);
        if self.x < self.nu {
            let q = self.nu / self.x;
            let kappa = (q * q - 1.0).sqrt();
            if kappa > 0.0 {
                h = h.min(1.5 / kappa);
            }
        }
        h
    }

    /// Advances until the position reaches `x_end` (the last step may overshoot
    /// it), pushing roots in increasing order. Stops early once
    /// `roots.len() == max_roots`.
    pub fn run(&mut self, x_end: f64, max_roots: usize, roots: &mut Vec<f64>) -> Result<()> {
        while self.x < x_end && roots.len() < max_roots {
            let mut h = self.step_length();
            let local = loop {
                match Local::build(self.nu, self.x, self.y, self.yp, h) {
                    Some(l) => break l,
                    None if h > 1e-3 * self.x => h *= 0.5,
                    None => {
                        return Err(Error::Accuracy(format!(
                            "Taylor series for order {} stalled at x = {}",
                            self.nu, self.x
                        )))
                    }
                }
            };
            let (u0, _) = local.target(self.eq, 0.0);
            let (u1, _) = local.target(self.eq, h);
            if u1 == 0.0 {
                roots.push(self.x + h);
            } else if u0 != 0.0 && (u0 < 0.0) != (u1 < 0.0) {
                roots.push(local.refine(self.eq, h));
            }
            let (y, yp, _) = local.eval(h);
            let s = y.abs().max(yp.abs());
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Accuracy(format!("march for order {} lost the solution", self.nu)));
            }
            self.y = y / s;
            self.yp = yp / s;
            self.x += h;
        }
        Ok(())
    }
}
