//! Modified Bessel functions of the first kind via the ascending series.
//!
//! Every term of the series is positive, so summation is forward stable for all
//! arguments; the only limit is the size of `I_nu(x)` itself.

use super::scaled::{ldexp, power_over_gamma};

const EPS: f64 = f64::EPSILON;

/// `(I_nu, I_{nu+1}) = (i, i_next) * 2^exp2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct IPair {
    pub i: f64,
    pub i_next: f64,
    pub exp2: i64,
    pub err: f64,
}

impl IPair {
    pub fn value(&self) -> f64 {
        ldexp(self.i, self.exp2)
    }

    #[cfg(test)]
    pub fn value_next(&self) -> f64 {
        ldexp(self.i_next, self.exp2)
    }

    /// `I_{nu+1} / I_nu`.
    pub fn ratio(&self) -> f64 {
        self.i_next / self.i
    }
}

/// Returns the series sum and the number of terms used.
fn series_sum(nu: f64, x: f64) -> (f64, usize) {
    let q = 0.25 * x * x;
    let mut t = 1.0;
    let mut sum = 1.0;
    let mut j = 1usize;
    loop {
        let jf = j as f64;
        t *= q / (jf * (nu + jf));
        sum += t;
        // terms decrease geometrically once j exceeds sqrt(q)
        if t < 0.25 * EPS * sum && jf * jf > q {
            return (sum, j);
        }
        j += 1;
    }
}

pub(crate) fn i_pair(nu: f64, x: f64) -> IPair {
    let pref = power_over_gamma(nu, x);
    let (s0, n0) = series_sum(nu, x);
    let (s1, n1) = series_sum(nu + 1.0, x);
    let i = pref.m * s0;
    let i_next = pref.m * (0.5 * x / (nu + 1.0)) * s1;
    let err = EPS * (6.0 + (n0.max(n1) as f64).sqrt());
    IPair { i, i_next, exp2: pref.e, err }
}
