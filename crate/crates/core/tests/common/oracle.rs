//! Reference values that do not touch the library: exact-integer power series
//! for `J_nu` with `nu` a multiple of 1/2, zeros by grid scan plus bisection,
//! and `I_nu` by the positive power series in plain floats.

#![allow(dead_code)]

use num_bigint::BigUint;

/// Splits a positive finite float into `m * 2^e`.
fn decompose(x: f64) -> (u64, i64) {
    assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

/// `J_{twice_nu/2}(x) Gamma(nu + 1) / (x/2)^nu` from the series evaluated in
/// fixed point; every digit of the returned float is exact up to rounding.
pub fn j_scaled(twice_nu: u32, x: f64) -> f64 {
    let nu = f64::from(twice_nu) / 2.0;
    let (m, e) = decompose(x);
    let lift = nu * (x / 2.0).max(1.0).log2();
    let p = (1.5 * x + lift + 160.0).ceil() as u64;
    let m2 = BigUint::from(m) * BigUint::from(m);
    // q = x^2 / 4 = m^2 * 2^(2e - 2); t_j = t_{j-1} q / (j (nu + j)) with
    // nu + j = (twice_nu + 2j) / 2.
    let shift = 2 * e - 1;
    let mut t = BigUint::from(1u8) << p;
    let mut even = t.clone();
    let mut odd = BigUint::from(0u8);
    let q = x * x / 4.0;
    let mut j: u64 = 0;
    loop {
        j += 1;
        t *= &m2;
        if shift >= 0 {
            t <<= shift as u64;
        } else {
            t >>= (-shift) as u64;
        }
        t /= BigUint::from(j * (u64::from(twice_nu) + 2 * j));
        if j % 2 == 1 {
            odd += &t;
        } else {
            even += &t;
        }
        if (j as f64) > q && t.bits() == 0 {
            break;
        }
    }
    let (neg, diff) = if even >= odd { (false, even - odd) } else { (true, odd - even) };
    let drop = diff.bits().saturating_sub(64);
    let top = (diff >> drop).iter_u64_digits().next().unwrap_or(0) as f64;
    let v = top * 2f64.powi((drop as i64 - p as i64) as i32);
    if neg {
        -v
    } else {
        v
    }
}

/// First `k_max` positive zeros of `J_{twice_nu/2}`: unit-step scan for sign
/// changes, then Illinois regula falsi inside each bracket.
pub fn j_zeros(twice_nu: u32, k_max: usize) -> Vec<f64> {
    let nu = f64::from(twice_nu) / 2.0;
    let f = |x: f64| j_scaled(twice_nu, x);
    let mut zeros = Vec::with_capacity(k_max);
    let mut a = nu + 0.5;
    let mut fa = f(a);
    while zeros.len() < k_max {
        let b = a + 1.0;
        let fb = f(b);
        if fb == 0.0 {
            zeros.push(b);
        } else if (fa < 0.0) != (fb < 0.0) {
            zeros.push(illinois(&f, (a, fa), (b, fb)));
        }
        a = b;
        fa = fb;
    }
    zeros
}

fn illinois(f: &impl Fn(f64) -> f64, (mut lo, mut flo): (f64, f64), (mut hi, mut fhi): (f64, f64)) -> f64 {
    let mut side = 0;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mut c = (lo * fhi - hi * flo) / (fhi - flo);
        if !(c > lo && c < hi) {
            c = 0.5 * (lo + hi);
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if (fc < 0.0) == (flo < 0.0) {
            lo = c;
            flo = fc;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = c;
            fhi = fc;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (lo + hi)
}

/// `I_nu(x)` from its series; accurate to a few ulps for moderate `x`.
pub fn i_series(nu: f64, x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = (nu * (x / 2.0).ln() - ln_gamma(nu + 1.0)).exp();
    let mut sum = term;
    let mut j = 0.0;
    loop {
        j += 1.0;
        term *= q / (j * (nu + j));
        sum += term;
        if term < 1e-18 * sum && j > q {
            return sum;
        }
    }
}

/// Lanczos `ln Gamma` for positive arguments.
pub fn ln_gamma(z: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut a = C[0];
    let t = z + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Closed forms for half order.
pub fn j_half(x: f64) -> f64 {
    (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin()
}

pub fn i_half(x: f64) -> f64 {
    (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh()
}

/// Root of `a + z I_{nu+1}(z) / I_nu(z) = 0` for `a < 0` by bisection on the
/// series ratio; `None` when `a >= 0`.
pub fn negative_root(nu: f64, a: f64) -> Option<f64> {
    if a >= 0.0 {
        return None;
    }
    let g = |z: f64| a + z * i_series(nu + 1.0, z) / i_series(nu, z);
    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
