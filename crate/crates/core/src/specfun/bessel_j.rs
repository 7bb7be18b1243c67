//! Bessel functions of the first kind for real order and positive argument.
//!
//! Three regimes:
//! * ascending series when `x <= sqrt(nu + 1)` (no cancellation there),
//! * Hankel's asymptotic expansion when `x >= 25` and `4 (nu + 1)^2 <= x`,
//! * Miller's backward recurrence normalised by the Neumann-type sum
//!   `sum_k (nu0 + 2k) Gamma(nu0 + k) / k! J_{nu0 + 2k}(x) = (x/2)^nu0` otherwise.
//!
//! All routines return the pair `(J_nu, J_{nu+1})` because every caller needs the
//! derivative `J'_nu = (nu/x) J_nu - J_{nu+1}` as well.

use std::f64::consts::PI;

use super::scaled::{ldexp, pow2, power_over_gamma, RESCALE_BITS};

const EPS: f64 = f64::EPSILON;
const MAX_SERIES_TERMS: usize = 2_000;

/// `(J_nu, J_{nu+1}) = (j, j_next) * 2^exp2`. `err` estimates the absolute error
/// relative to `max(|J_nu|, |J_{nu+1}|)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct JPair {
    pub j: f64,
    pub j_next: f64,
    pub exp2: i64,
    pub err: f64,
}

impl JPair {
    pub fn value(&self) -> f64 {
        ldexp(self.j, self.exp2)
    }

    /// `x J'_nu / J_nu = nu - x J_{nu+1} / J_nu`.
    pub fn log_derivative(&self, nu: f64, x: f64) -> f64 {
        nu - x * self.j_next / self.j
    }

    /// Local envelope `sqrt(J_nu^2 + J_{nu+1}^2)` in the pair's scale.
    pub fn envelope(&self) -> f64 {
        self.j.hypot(self.j_next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Method {
    Series,
    Hankel,
    Miller,
}

pub(crate) fn choose_method(nu: f64, x: f64) -> Method {
    if x * x <= nu + 1.0 {
        Method::Series
    } else if x >= 25.0 && 4.0 * (nu + 1.0) * (nu + 1.0) <= x {
        Method::Hankel
    } else {
        Method::Miller
    }
}

pub(crate) fn j_pair(nu: f64, x: f64) -> JPair {
    match choose_method(nu, x) {
        Method::Series => series_pair(nu, x),
        Method::Hankel => hankel_pair(nu, x),
        Method::Miller => {
            let n = nu.floor();
            let nu0 = nu - n;
            let n = n as usize;
            let run = miller(nu0, x, n, n + 1);
            let (m0, e0) = run.values[0];
            let (m1, e1) = run.values[1];
            // bring J_{nu+1} to the scale of J_nu; the shift is 0 or one rescale step
            let j_next = ldexp(m1, e1 - e0);
            JPair { j: m0, j_next, exp2: e0, err: run.err }
        }
    }
}

fn series_sum(nu: f64, x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let mut t = 1.0;
    let mut sum = 1.0;
    let mut abs = 1.0;
    for j in 1..MAX_SERIES_TERMS {
        let jf = j as f64;
        t *= q / (jf * (nu + jf));
        sum += t;
        abs += t.abs();
        if t.abs() < 0.1 * EPS * sum.abs() {
            break;
        }
    }
    (sum, abs)
}

fn series_pair(nu: f64, x: f64) -> JPair {
    let pref = power_over_gamma(nu, x);
    let (s0, a0) = series_sum(nu, x);
    let (s1, a1) = series_sum(nu + 1.0, x);
    let j = pref.m * s0;
    let j_next = pref.m * (0.5 * x / (nu + 1.0)) * s1;
    let cond = (a0 / s0.abs()).max(a1 / s1.abs());
    let err = EPS * (6.0 + 2.0 * cond);
    JPair { j, j_next, exp2: pref.e, err }
}

/// Hankel expansion for a single order; returns (value, absolute error
/// relative to the amplitude sqrt(2 / (pi x))).
fn hankel(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t: f64 = 1.0;
    let mut last = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = t * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() > t.abs() {
            last = t.abs();
            break;
        }
        t = next;
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if t.abs() < 1e-2 * EPS {
            last = t.abs();
            break;
        }
    }
    let phase = ((0.5 * nu + 0.25) % 2.0) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * cos_chi - q * sin_chi), last + 4.0 * EPS)
}

fn hankel_pair(nu: f64, x: f64) -> JPair {
    let (j, e0) = hankel(nu, x);
    let (j_next, e1) = hankel(nu + 1.0, x);
    // amplitude relative -> envelope relative (envelope ~ amplitude here)
    JPair { j, j_next, exp2: 0, err: 2.0 * e0.max(e1) }
}

pub(crate) struct MillerRun {
    /// (mantissa, exp2) for each stored order, lowest first.
    pub values: Vec<(f64, i64)>,
    pub err: f64,
}

/// Starting order for the backward recurrence. Beyond the turning point
/// `J_nu(x)` decays like `exp(-(2t)^{3/2} / (3 sqrt x))` with `t = nu - x`, so a
/// margin of `10 x^{1/3}` pushes the dominant-solution contamination below 1e-17.
fn start_order(hi: usize, x: f64) -> usize {
    let base = (hi as f64).max(x.ceil());
    (base + 20.0 + (10.0 * x.cbrt()).ceil()) as usize
}

/// Normalisation weights `c_k = (nu0 + 2k) Gamma(nu0 + k) / k!`.
fn neumann_weights(nu0: f64, count: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(count + 1);
    if nu0 == 0.0 {
        c.push(1.0);
        c.resize(count + 1, 2.0);
        return c;
    }
    let g1 = statrs::function::gamma::gamma(nu0 + 1.0);
    c.push(g1);
    let mut g = g1;
    for k in 1..=count {
        if k > 1 {
            let kf = k as f64;
            g *= (nu0 + kf - 1.0) / kf;
        }
        c.push((nu0 + 2.0 * k as f64) * g);
    }
    c
}

/// Backward recurrence for orders `nu0 + k`, storing `lo..=hi`.
pub(crate) fn miller(nu0: f64, x: f64, lo: usize, hi: usize) -> MillerRun {
    debug_assert!((0.0..1.0).contains(&nu0) && lo <= hi);
    let top = start_order(hi, x);
    let weights = neumann_weights(nu0, top / 2 + 1);
    let big = pow2(RESCALE_BITS);
    let shrink = pow2(-RESCALE_BITS);

    let mut stored: Vec<(f64, u32)> = vec![(0.0, 0); hi - lo + 1];
    let mut rescales: u32 = 0;
    let mut f_hi = 0.0; // f_{k+1}
    let mut f = 1e-30; // f_k
    let mut norm = 0.0;
    let mut abs_norm = 0.0;
    let mut k = top;
    loop {
        if k >= lo && k <= hi {
            stored[k - lo] = (f, rescales);
        }
        if k % 2 == 0 {
            let w = weights[k / 2];
            norm += w * f;
            abs_norm += (w * f).abs();
        }
        if k == 0 {
            break;
        }
        let f_lo = (2.0 * (nu0 + k as f64) / x) * f - f_hi;
        f_hi = f;
        f = f_lo;
        if f.abs() > big {
            f *= shrink;
            f_hi *= shrink;
            norm *= shrink;
            abs_norm *= shrink;
            rescales += 1;
        }
        k -= 1;
    }
    let scale = if nu0 == 0.0 { 1.0 } else { (0.5 * x).powf(nu0) };
    let values = stored
        .into_iter()
        .map(|(v, r)| {
            let shift = -(RESCALE_BITS as i64) * i64::from(rescales - r);
            (v * scale / norm, shift)
        })
        .collect();
    let cond = abs_norm / norm.abs();
    let err = 2.0 * EPS * (cond + (top as f64).sqrt() + 4.0);
    MillerRun { values, err }
}

/// `J_{nu0 + k}(x)` for `k = 0..=n`. Orders deep in the evanescent region
/// may flush to zero.
pub(crate) fn j_orders(nu0: f64, x: f64, n: usize) -> Vec<f64> {
    miller(nu0, x, 0, n)
        .values
        .into_iter()
        .map(|(m, e)| ldexp(m, e))
        .collect()
}
