//! Bessel functions `J_nu` and `I_nu` of real order `nu >= 0` and positive argument.

mod bessel_i;
mod bessel_j;
mod scaled;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use bessel_i::{i_pair, IPair};
pub(crate) use bessel_j::{j_orders, j_pair, JPair};
pub(crate) use scaled::ldexp;

/// Relative accuracy every evaluation must meet or report an error.
pub const ACCURACY_TARGET: f64 = 1e-12;

/// A Bessel order `nu >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(Order(nu))
        } else {
            Err(Error::Range(format!("order {nu} must be finite and non-negative")))
        }
    }

    /// `nu = m + d/2 - 1`.
    pub fn from_mode(m: u32, d: u32) -> Self {
        Order(f64::from(m) + 0.5 * f64::from(d) - 1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.0
    }
}

/// A function value with its estimated error.
///
/// For `J` the error is relative to the local envelope
/// `max(|J_nu(x)|, |J_{nu+1}(x)|)`, which stays meaningful at zeros of `J_nu`.
/// For `I` it is relative to the value itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub est_rel_err: f64,
}

/// Admissible `(nu, x)` region for the evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub nu_max: f64,
    pub x_max: f64,
    /// Overflow guard for the modified Bessel functions.
    pub i_x_max: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window { nu_max: 10_000.0, x_max: 15_000.0, i_x_max: 700.0 }
    }
}

impl Window {
    fn check_j(&self, nu: f64, x: f64) -> Result<()> {
        if nu > self.nu_max {
            return Err(Error::Range(format!("order {nu} exceeds nu_max = {}", self.nu_max)));
        }
        if !(x > 0.0) || x > self.x_max {
            return Err(Error::Range(format!("argument {x} outside (0, {}]", self.x_max)));
        }
        Ok(())
    }

    fn check_i(&self, nu: f64, x: f64) -> Result<()> {
        if nu > self.nu_max {
            return Err(Error::Range(format!("order {nu} exceeds nu_max = {}", self.nu_max)));
        }
        if !(x > 0.0) {
            return Err(Error::Range(format!("argument {x} must be positive")));
        }
        if x > self.i_x_max {
            return Err(Error::Overflow(format!("argument {x} exceeds guard {}", self.i_x_max)));
        }
        Ok(())
    }

    pub(crate) fn j_pair(&self, nu: Order, x: f64) -> Result<JPair> {
        self.check_j(nu.0, x)?;
        let p = j_pair(nu.0, x);
        if !(p.err <= ACCURACY_TARGET) || !p.j.is_finite() || !p.j_next.is_finite() {
            return Err(Error::Accuracy(format!(
                "J_{}({x}) error estimate {:e} above target",
                nu.0, p.err
            )));
        }
        Ok(p)
    }

    pub(crate) fn i_pair(&self, nu: Order, x: f64) -> Result<IPair> {
        self.check_i(nu.0, x)?;
        let p = i_pair(nu.0, x);
        if !(p.err <= ACCURACY_TARGET) || !p.i.is_finite() || !p.i_next.is_finite() {
            return Err(Error::Accuracy(format!(
                "I_{}({x}) error estimate {:e} above target",
                nu.0, p.err
            )));
        }
        Ok(p)
    }

    pub fn bessel_j(&self, nu: Order, x: f64) -> Result<EvalResult> {
        let p = self.j_pair(nu, x)?;
        let value = representable(p.value(), p.j, || format!("J_{}({x})", nu.0))?;
        Ok(EvalResult { value, est_rel_err: p.err })
    }

    pub fn bessel_j_prime(&self, nu: Order, x: f64) -> Result<EvalResult> {
        let p = self.j_pair(nu, x)?;
        let d = nu.0 / x * p.j - p.j_next;
        let value = representable(ldexp(d, p.exp2), d, || format!("J'_{}({x})", nu.0))?;
        Ok(EvalResult { value, est_rel_err: p.err * (1.0 + nu.0 / x) })
    }

    pub fn bessel_i(&self, nu: Order, x: f64) -> Result<EvalResult> {
        let p = self.i_pair(nu, x)?;
        let value = representable(p.value(), p.i, || format!("I_{}({x})", nu.0))?;
        Ok(EvalResult { value, est_rel_err: p.err })
    }

    pub fn bessel_i_prime(&self, nu: Order, x: f64) -> Result<EvalResult> {
        let p = self.i_pair(nu, x)?;
        let d = p.i_next + nu.0 / x * p.i;
        let value = representable(ldexp(d, p.exp2), d, || format!("I'_{}({x})", nu.0))?;
        Ok(EvalResult { value, est_rel_err: p.err })
    }
}

fn representable(v: f64, mantissa: f64, what: impl Fn() -> String) -> Result<f64> {
    if v.is_infinite() {
        Err(Error::Overflow(what()))
    } else if mantissa != 0.0 && (v == 0.0 || !v.is_normal()) {
        Err(Error::Underflow(what()))
    } else {
        Ok(v)
    }
}

/// `J_nu(x)` over the default window.
pub fn bessel_j(nu: Order, x: f64) -> Result<EvalResult> {
    Window::default().bessel_j(nu, x)
}

/// `J'_nu(x) = (nu/x) J_nu(x) - J_{nu+1}(x)` over the default window.
pub fn bessel_j_prime(nu: Order, x: f64) -> Result<EvalResult> {
    Window::default().bessel_j_prime(nu, x)
}

/// `I_nu(x)` over the default window.
pub fn bessel_i(nu: Order, x: f64) -> Result<EvalResult> {
    Window::default().bessel_i(nu, x)
}

/// `I'_nu(x) = I_{nu+1}(x) + (nu/x) I_nu(x)` over the default window.
pub fn bessel_i_prime(nu: Order, x: f64) -> Result<EvalResult> {
    Window::default().bessel_i_prime(nu, x)
}
