//! All marched roots of all orders below a common limit.

use rayon::prelude::*;

use super::count::count_pair;
use super::roots::{equation, equation_or_degenerate, march_roots, negative_root, Branch};
use super::multiplicity;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::specfun::{j_orders, Window};

/// Roots of one angular degree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OrderRoots {
    /// `x_{nu,0}` when the degree carries a negative eigenvalue.
    pub negative: Option<f64>,
    /// `x_{nu,k}` for `k = 1, 2, ...`; a leading `0.0` marks the zero eigenvalue.
    pub positive: Vec<f64>,
}

/// Roots of every degree up to a common abscissa `x_max`.
///
/// Positive roots are the marched values; they carry the integrator's accuracy
/// (about `1e-12` relative) rather than an individual certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct RootTable {
    spec: ProblemSpec,
    x_max: f64,
    orders: Vec<OrderRoots>,
}

/// Largest degree that can own a root `<= x`.
pub(crate) fn degree_bound(spec: &ProblemSpec, x: f64) -> u32 {
    let shift = 0.5 * f64::from(spec.d()) - 1.0;
    let b = match spec.sigma() {
        // x_{nu,1} >= sqrt(m^2 - sigma^2)
        Some(s) => (x * x + s.value() * s.value()).sqrt().max(-s.value()),
        // j_{nu,1} > nu
        None => x - shift,
    };
    b.max(0.0).floor() as u32
}

impl RootTable {
    /// Marches every degree up to `x_max`. Degrees beyond the `x_{nu,1}` lower
    /// bound are skipped; a handful past it are still checked to be empty.
    pub fn build(window: &Window, spec: &ProblemSpec, x_max: f64) -> Result<RootTable> {
        if x_max > window.x_max {
            return Err(Error::Window(format!("x = {x_max} exceeds x_max = {}", window.x_max)));
        }
        let m_hi = degree_bound(spec, x_max);
        if f64::from(m_hi) + 0.5 * f64::from(spec.d()) > window.nu_max {
            return Err(Error::Window(format!("orders up to {m_hi} exceed nu_max = {}", window.nu_max)));
        }
        let orders: Vec<OrderRoots> = (0..=m_hi + 4)
            .into_par_iter()
            .map(|m| order_roots(window, spec, m, x_max))
            .collect::<Result<_>>()?;
        if let Some(m) = (m_hi + 1..=m_hi + 4).find(|&m| !orders[m as usize].positive.is_empty()) {
            return Err(Error::Accuracy(format!("degree {m} has a root below {x_max} past the degree bound")));
        }
        let mut orders = orders;
        orders.truncate(m_hi as usize + 1);
        while orders.last().is_some_and(|o| o.positive.is_empty() && o.negative.is_none()) {
            orders.pop();
        }
        Ok(RootTable { spec: spec.clone(), x_max, orders })
    }

    /// Reassembles a table from stored roots. Each degree's positive roots must
    /// be increasing and at most `x_max`, and only a leading root may be zero.
    pub fn from_parts(spec: ProblemSpec, x_max: f64, orders: Vec<OrderRoots>) -> Result<RootTable> {
        if !(x_max > 0.0) {
            return Err(Error::InvalidSpec(format!("table limit {x_max} must be positive")));
        }
        for (m, o) in orders.iter().enumerate() {
            let ok = o.positive.iter().enumerate().all(|(i, &r)| r <= x_max && (r > 0.0 || (i == 0 && r == 0.0)))
                && o.positive.windows(2).all(|w| w[0] < w[1])
                && o.negative.map_or(true, |r| r > 0.0);
            if !ok {
                return Err(Error::InvalidSpec(format!("stored roots of degree {m} are not a valid table")));
            }
        }
        Ok(RootTable { spec, x_max, orders })
    }

    /// True when every degree `m <= m_max` has at least `k_max` positive roots.
    pub fn covers(&self, m_max: u32, k_max: u32) -> bool {
        (0..=m_max).all(|m| self.order(m).is_some_and(|o| o.positive.len() >= k_max as usize))
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Roots per degree `m = 0, 1, ...`.
    pub fn orders(&self) -> &[OrderRoots] {
        &self.orders
    }

    pub fn order(&self, m: u32) -> Option<&OrderRoots> {
        self.orders.get(m as usize)
    }

    /// Number of stored roots, negative branch included.
    pub fn len(&self) -> usize {
        self.orders.iter().map(|o| o.positive.len() + usize::from(o.negative.is_some())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn order_roots(window: &Window, spec: &ProblemSpec, m: u32, x_max: f64) -> Result<OrderRoots> {
    let negative = match equation(spec, m)? {
        Some(super::march::Equation::Robin { a, .. }) if a < 0.0 => {
            Some(negative_root(window, spec.order(m), a)?.root)
        }
        _ => None,
    };
    let positive = march_roots(window, &Branch::of(spec, m)?, x_max, usize::MAX)?;
    // the march must agree with the counting function at the far end
    let nu = spec.order(m);
    if x_max > 0.0 && (!positive.is_empty() || nu.value() < x_max) {
        let (eq, _) = equation_or_degenerate(spec, m)?;
        let p = window.j_pair(nu, x_max)?;
        let n = count_pair(eq, nu.value(), x_max, p.j, p.j_next) as usize;
        if n != positive.len() {
            return Err(Error::Accuracy(format!(
                "degree {m}: marched {} roots below {x_max}, counted {n}",
                positive.len()
            )));
        }
    }
    Ok(OrderRoots { negative, positive })
}

/// Multiplicity-weighted number of eigenvalues with root `<= x` (positive
/// branch, zero line included) plus all negative eigenvalues, from one sweep
/// over orders at fixed `x`. `fixed = Some((m, n))` replaces the count of
/// degree `m` by `n`.
pub(crate) fn total_count(window: &Window, spec: &ProblemSpec, x: f64, fixed: Option<(u32, u64)>) -> Result<u64> {
    if !(x > 0.0) {
        return Err(Error::Range(format!("count abscissa {x} must be positive")));
    }
    if x > window.x_max {
        return Err(Error::Window(format!("x = {x} exceeds x_max = {}", window.x_max)));
    }
    let d = spec.d();
    let mut m_hi = degree_bound(spec, x);
    if let Some((m, _)) = fixed {
        m_hi = m_hi.max(m);
    }
    let shift = 0.5 * f64::from(d) - 1.0;
    if f64::from(m_hi) + shift + 1.0 > window.nu_max {
        return Err(Error::Window(format!("orders up to {m_hi} exceed nu_max = {}", window.nu_max)));
    }
    let nu0 = shift.fract();
    let base = shift.floor() as usize;
    let js = j_orders(nu0, x, base + m_hi as usize + 1);
    let mut total: u64 = 0;
    for m in 0..=m_hi {
        if let Some((fm, n)) = fixed.filter(|&(fm, _)| fm == m) {
            total = total.saturating_add(n.saturating_mul(multiplicity(fm, d)));
            continue;
        }
        let (eq, _) = equation_or_degenerate(spec, m)?;
        let i = base + m as usize;
        let (j, j_next) = (js[i], js[i + 1]);
        let mut n = if j == 0.0 && j_next == 0.0 {
            0
        } else {
            count_pair(eq, f64::from(m) + shift, x, j, j_next)
        };
        if let super::march::Equation::Robin { a, .. } = eq {
            n += u64::from(a < 0.0);
        }
        total = total.saturating_add(n.saturating_mul(multiplicity(m, d)));
    }
    Ok(total)
}
