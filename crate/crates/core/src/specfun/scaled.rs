//! Extended-exponent helpers: values are carried as `mantissa * 2^exp2` so that
//! large-order prefactors and recurrences never overflow or flush to zero early.

pub(crate) const RESCALE_BITS: i32 = 800;

/// 2^e for |e| <= 1000, exact.
#[inline]
pub(crate) fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// `m * 2^e` without intermediate overflow; rounds once at the end.
pub(crate) fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= pow2(1000);
        e -= 1000;
        if !m.is_finite() {
            return m;
        }
    }
    while e < -1000 {
        m *= pow2(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * pow2(e as i32)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub m: f64,
    pub e: i64,
}

impl Scaled {
    pub fn new(m: f64) -> Self {
        Scaled { m, e: 0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        let a = self.m.abs();
        if a > pow2(400) {
            self.m *= pow2(-400);
            self.e += 400;
        } else if a != 0.0 && a < pow2(-400) {
            self.m *= pow2(400);
            self.e -= 400;
        }
        self
    }

    #[cfg(test)]
    pub fn to_f64(self) -> f64 {
        ldexp(self.m, self.e)
    }

    /// log2 of the magnitude, for range checks.
    #[cfg(test)]
    pub fn log2_abs(self) -> f64 {
        self.m.abs().log2() + self.e as f64
    }
}

/// `(x/2)^nu / Gamma(nu + 1)` in scaled form, built as a product over the
/// integer part of `nu`. The product is carried in double-double so the
/// rounding error stays a few ulps however large `nu` is.
pub(crate) fn power_over_gamma(nu: f64, x: f64) -> Scaled {
    let n = nu.floor();
    let frac = nu - n;
    let half = 0.5 * x;
    let base = if frac == 0.0 {
        1.0
    } else {
        half.powf(frac) / statrs::function::gamma::gamma(frac + 1.0)
    };
    let (mut hi, mut lo, mut e) = (base, 0.0f64, 0i64);
    let mut i = 1.0;
    while i <= n {
        let den = frac + i;
        let q_hi = half / den;
        let q_lo = (-q_hi).mul_add(den, half) / den;
        let p = hi * q_hi;
        let err = hi.mul_add(q_hi, -p) + hi * q_lo + lo * q_hi;
        hi = p + err;
        lo = err - (hi - p);
        let a = hi.abs();
        if a > pow2(400) {
            hi *= pow2(-400);
            lo *= pow2(-400);
            e += 400;
        } else if a != 0.0 && a < pow2(-400) {
            hi *= pow2(400);
            lo *= pow2(400);
            e -= 400;
        }
        i += 1.0;
    }
    let s = Scaled::new(hi + lo);
    Scaled { m: s.m, e: s.e + e }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ldexp_round_trips_extremes() {
        assert_eq!(ldexp(1.5, 0), 1.5);
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
        assert_eq!(ldexp(1.0, 3000), f64::INFINITY);
        assert_eq!(ldexp(1.0, -3000), 0.0);
        assert_eq!(ldexp(pow2(1000), -1500), pow2(-500));
    }

    #[test]
    fn prefactor_matches_closed_form_for_small_orders() {
        // (x/2)^3 / 3!
        let p = power_over_gamma(3.0, 1.7).to_f64();
        assert!((p - 0.85f64.powi(3) / 6.0).abs() < 1e-16);
        // (x/2)^{1/2} / Gamma(3/2) = sqrt(x/2) * 2/sqrt(pi)
        let p = power_over_gamma(0.5, 2.0).to_f64();
        assert!((p - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn prefactor_survives_huge_orders() {
        let p = power_over_gamma(5000.0, 10.0);
        assert!(p.to_f64() == 0.0);
        // log2((5)^5000 / 5000!) via Stirling, loose check
        let stirling = 5000.0 * 5f64.ln() - (5000.0 * 5000f64.ln() - 5000.0
            + 0.5 * (2.0 * std::f64::consts::PI * 5000.0).ln()
            + 1.0 / 60_000.0);
        assert!((p.log2_abs() - stirling / std::f64::consts::LN_2).abs() < 1e-6);
    }
}
