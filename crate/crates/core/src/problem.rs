//! Problem specification: dimension, boundary condition and mode labels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::Order;

/// A Robin parameter kept both as the literal the user supplied and as a double.
///
/// The literal is parsed exactly, so `sigma = -m` (the zero-eigenvalue case) is
/// detected without any floating tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Sigma {
    literal: String,
    value: f64,
    exact_integer: Option<i64>,
}

impl Sigma {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidSpec(format!("sigma: `{s}` is not a decimal number"));
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (body, 0),
        };
        let (int, frac) = match mant.split_once('.') {
            Some((a, b)) => (a, b),
            None => (mant, ""),
        };
        if int.is_empty() && frac.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let value: f64 = t.parse().map_err(|_| bad())?;
        if !value.is_finite() {
            return Err(Error::InvalidSpec(format!("sigma: `{s}` is not finite")));
        }
        // digits * 10^(exp - frac.len()), normalised to drop trailing zeros
        let mut digits: String = format!("{int}{frac}").trim_start_matches('0').to_string();
        let mut scale = exp - frac.len() as i64;
        while digits.ends_with('0') {
            digits.pop();
            scale += 1;
        }
        let exact_integer = if digits.is_empty() {
            Some(0)
        } else if scale >= 0 && digits.len() as i64 + scale <= 18 {
            let mut v: i64 = digits.parse().map_err(|_| bad())?;
            for _ in 0..scale {
                v *= 10;
            }
            Some(if neg { -v } else { v })
        } else {
            None
        };
        Ok(Sigma { literal: t.to_string(), value, exact_integer })
    }

    /// Builds a parameter from a double; the literal is its shortest round-trip form.
    pub fn from_f64(v: f64) -> Result<Self> {
        Sigma::parse(&format!("{v:?}"))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn literal(&self) -> &str {
        &self.literal
    }

    /// `Some(n)` when the literal denotes exactly the integer `n`.
    pub fn exact_integer(&self) -> Option<i64> {
        self.exact_integer
    }

    /// True iff `m + sigma == 0` exactly.
    pub fn cancels(&self, m: u32) -> bool {
        self.exact_integer == Some(-i64::from(m))
    }
}

impl FromStr for Sigma {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Sigma::parse(s)
    }
}

impl TryFrom<String> for Sigma {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Sigma::parse(&s)
    }
}

impl From<Sigma> for String {
    fn from(s: Sigma) -> String {
        s.literal
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Dirichlet,
    Robin(Sigma),
}

/// Dimension plus boundary condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    d: u32,
    boundary: Boundary,
}

impl ProblemSpec {
    pub fn new(d: u32, boundary: Boundary) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSpec(format!("dimension must be at least 2, got {d}")));
        }
        Ok(ProblemSpec { d, boundary })
    }

    pub fn dirichlet(d: u32) -> Result<Self> {
        ProblemSpec::new(d, Boundary::Dirichlet)
    }

    /// Robin problem with `sigma` given as a decimal literal.
    pub fn robin(d: u32, sigma: &str) -> Result<Self> {
        ProblemSpec::new(d, Boundary::Robin(Sigma::parse(sigma)?))
    }

    pub fn robin_f64(d: u32, sigma: f64) -> Result<Self> {
        ProblemSpec::new(d, Boundary::Robin(Sigma::from_f64(sigma)?))
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn sigma(&self) -> Option<&Sigma> {
        match &self.boundary {
            Boundary::Robin(s) => Some(s),
            Boundary::Dirichlet => None,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self.boundary, Boundary::Dirichlet)
    }

    pub fn order(&self, m: u32) -> Order {
        Order::from_mode(m, self.d)
    }

    /// Right-hand side `c = d/2 - 1 - sigma` of `z J'(z) / J(z) = c`.
    pub fn robin_constant(&self) -> Option<f64> {
        self.sigma().map(|s| 0.5 * f64::from(self.d) - 1.0 - s.value())
    }

    pub(crate) fn require_robin(&self) -> Result<&Sigma> {
        self.sigma()
            .ok_or_else(|| Error::InvalidSpec("operation needs a Robin boundary".into()))
    }

    /// Short label such as `d2-dirichlet` or `d2-robin-1.5`.
    pub fn label(&self) -> String {
        match &self.boundary {
            Boundary::Dirichlet => format!("d{}-dirichlet", self.d),
            Boundary::Robin(s) => format!("d{}-robin{}", self.d, s.literal()),
        }
    }
}

/// Angular degree `m` and radial index `k`; `k = 0` labels the negative branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub m: u32,
    pub k: u32,
}

impl ModeIndex {
    pub fn new(m: u32, k: u32) -> Self {
        ModeIndex { m, k }
    }

    pub fn order(self, d: u32) -> Order {
        Order::from_mode(self.m, d)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.k)
    }
}
