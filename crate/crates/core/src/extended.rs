//! Multi-precision evaluation of the direct trace and of its truncated asymptotic
//! series, for remainders far below binary64 resolution.
//!
//! At `t = 0.01` and `J = 8` the remainder is about `1e-23` of the trace, so the
//! subtraction is done with 384-bit floats and only the final error is rounded to `f64`.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::{int, pow, Rational};
use crate::heat::{check_time, trace_direct_eval, trace_shift, trace_truncation};
use crate::heatcoeff::b_coefficients;
use crate::spectrum::{dimension_product_form, SpectralPoint};

pub const PRECISION: usize = 384;
const RM: RoundingMode = RoundingMode::ToEven;

/// Owns the constant cache astro-float needs for `exp` and radix conversion.
pub struct Extended {
    cc: Consts,
}

impl Extended {
    pub fn new() -> Result<Self> {
        let cc = Consts::new().map_err(|e| Error::InvalidParameter(format!("multi-precision setup failed: {e:?}")))?;
        Ok(Self { cc })
    }

    fn bigint(&mut self, x: &BigInt) -> BigFloat {
        BigFloat::parse(&x.to_string(), Radix::Dec, PRECISION, RM, &mut self.cc)
    }

    pub fn from_rational(&mut self, r: &Rational) -> BigFloat {
        let num = self.bigint(r.numer());
        let den = self.bigint(r.denom());
        num.div(&den, PRECISION, RM)
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .unwrap_or(f64::NAN)
    }

    /// `sum_m dim(A_m^nu) exp(beta_m t / 4)` with a tail below `1e-45` of the trace.
    pub fn trace_direct(&mut self, n: u32, two_nu: u32, t: f64) -> Result<BigFloat> {
        let (approx, _, _) = trace_direct_eval(n, two_nu, t, 1e-12)?;
        let (big_m, _) = trace_truncation(n, two_nu, t, approx * 1e-45)?;
        let tb = BigFloat::from_f64(t, PRECISION);
        let shift = trace_shift(n, two_nu);
        let mut acc = BigFloat::from_f64(0.0, PRECISION);
        for m in 0..=big_m as u64 {
            let pt = SpectralPoint { n, two_nu, m };
            let r = pt.r();
            // beta_m / 4 = n^2/4 + nu^2 - r^2, exact
            let quarter_beta = self.from_rational(&(&shift - &r * &r));
            let e = quarter_beta.mul(&tb, PRECISION, RM).exp(PRECISION, RM, &mut self.cc);
            let dim = self.bigint(&dimension_product_form(&pt)?);
            acc = acc.add(&dim.mul(&e, PRECISION, RM), PRECISION, RM);
        }
        Ok(acc)
    }

    /// `(4t)^{-n} sum_{j<=J} q_j t^j` computed exactly in rationals from the binary64 `t`.
    pub fn asymptotic_trace(&mut self, n: u32, two_nu: u32, t: f64, j_max: usize) -> Result<BigFloat> {
        check_time(t)?;
        let q = b_coefficients(n, two_nu, j_max)?;
        let tr = BigRational::from_float(t).ok_or(Error::NonPositiveTime(t))?;
        let mut acc = int(0);
        for (j, qj) in q.iter().enumerate() {
            acc += qj * pow(&tr, j as u32);
        }
        let value = acc / pow(&(int(4) * &tr), n);
        Ok(self.from_rational(&value))
    }

    /// `|direct - asymptotic_J| (4 pi t)^n`, evaluated without binary64 cancellation.
    pub fn scaled_remainder(&mut self, n: u32, two_nu: u32, t: f64, j_max: usize) -> Result<f64> {
        let direct = self.trace_direct(n, two_nu, t)?;
        let asym = self.asymptotic_trace(n, two_nu, t, j_max)?;
        let diff = self.to_f64(&direct.sub(&asym, PRECISION, RM)).abs();
        Ok(diff * (4.0 * std::f64::consts::PI * t).powi(n as i32))
    }
}

/// Row of the asymptotic-order study: `|Tr - Tr_J|`, `E(t, J) = |Tr - Tr_J| (4 pi t)^n` and `E / t^{J+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderRow {
    pub t: f64,
    pub direct: f64,
    pub asymptotic: f64,
    pub abs_err: f64,
    pub remainder: f64,
    pub scaled: f64,
}

/// One [`RemainderRow`] per time, all in multi-precision.
pub fn remainder_table(n: u32, two_nu: u32, j_max: usize, times: &[f64]) -> Result<Vec<RemainderRow>> {
    let mut ext = Extended::new()?;
    times
        .iter()
        .map(|&t| {
            let direct = ext.trace_direct(n, two_nu, t)?;
            let asym = ext.asymptotic_trace(n, two_nu, t, j_max)?;
            let diff = ext.to_f64(&direct.sub(&asym, PRECISION, RM)).abs();
            let remainder = diff * (4.0 * std::f64::consts::PI * t).powi(n as i32);
            Ok(RemainderRow {
                t,
                direct: ext.to_f64(&direct),
                asymptotic: ext.to_f64(&asym),
                abs_err: diff,
                remainder,
                scaled: remainder / t.powi(j_max as i32 + 1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::heat::trace_direct;
    use crate::heatcoeff::asymptotic_trace;

    #[test]
    fn conversions_round_trip() {
        let mut ext = Extended::new().unwrap();
        for r in [rat(1, 3), rat(-22, 7), int(12345678901), rat(1, 1 << 40)] {
            let x = ext.from_rational(&r);
            let back = ext.to_f64(&x);
            let expected = crate::exactnum::to_f64(&r);
            assert!((back - expected).abs() <= 1e-15 * expected.abs());
        }
    }

    #[test]
    fn agrees_with_binary64_paths() {
        let mut ext = Extended::new().unwrap();
        for (n, two_nu, t) in [(1u32, 0u32, 0.3), (2, 2, 0.1), (3, 0, 0.05)] {
            let d = ext.trace_direct(n, two_nu, t).unwrap();
            let d = ext.to_f64(&d);
            let f = trace_direct(n, two_nu, t, 1e-14).unwrap();
            assert!((d - f).abs() < 1e-13 * f);
            let a = ext.asymptotic_trace(n, two_nu, t, 6).unwrap();
            let a = ext.to_f64(&a);
            let g = asymptotic_trace(n, two_nu, t, 6).unwrap();
            assert!((a - g).abs() < 1e-13 * g);
        }
    }

    #[test]
    fn remainder_scales_like_next_power() {
        let rows = remainder_table(1, 0, 6, &[0.05, 0.02]).unwrap();
        let ratio = rows[0].scaled / rows[1].scaled;
        assert!(ratio > 0.25 && ratio < 4.0, "{rows:?}");
    }
}
