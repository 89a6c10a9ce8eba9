//! Fubini–Study geometry in the affine chart, closed-form reproducing kernels
//! of the eigenspaces `A_m^nu`, and the `n = 1` monopole-harmonic basis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, factorial_rat, half, int, pochhammer, to_f64, Rational};
use crate::orthopoly::jacobi;

/// Point of `CP^n` in the affine chart `z = (z_1, ..., z_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    pub coords: Vec<Complex64>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("a point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("point coordinates must be finite".into()));
        }
        Ok(Self { coords })
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }
}

impl From<Complex64> for ProjPoint {
    fn from(z: Complex64) -> Self {
        Self { coords: vec![z] }
    }
}

/// Closed-form or truncated-series kernel value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub value: Complex64,
    pub terms_used: usize,
    pub error_bound: f64,
}

/// Pair geometry shared by every kernel: `q = 1 + sum z_i conj(w_i)` and `cos^2 d_FS`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairGeometry {
    pub q: Complex64,
    pub nz: f64,
    pub nw: f64,
    pub cos2: f64,
}

impl PairGeometry {
    pub fn new(z: &ProjPoint, w: &ProjPoint) -> Result<Self> {
        if z.dim() != w.dim() {
            return Err(Error::DimensionMismatch { left: z.dim(), right: w.dim() });
        }
        let q = Complex64::new(1.0, 0.0) + z.coords.iter().zip(&w.coords).map(|(a, b)| a * b.conj()).sum::<Complex64>();
        let nz = 1.0 + z.norm_sqr();
        let nw = 1.0 + w.norm_sqr();
        let cos2 = (q.norm_sqr() / (nz * nw)).clamp(0.0, 1.0);
        Ok(Self { q, nz, nw, cos2 })
    }

    /// `cos 2 d_FS = 2 cos^2 d_FS - 1`.
    pub fn cos_2d(&self) -> f64 {
        2.0 * self.cos2 - 1.0
    }

    pub fn distance(&self) -> f64 {
        self.cos2.sqrt().min(1.0).acos()
    }

    /// `(q / (sqrt(1+|z|^2) sqrt(1+|w|^2)))^(2 nu)`, an integer power so no branch choice arises.
    pub fn phase(&self, two_nu: u32) -> Complex64 {
        (self.q / (self.nz.sqrt() * self.nw.sqrt())).powu(two_nu)
    }
}

/// Fubini–Study distance in `[0, pi/2]`.
pub fn fs_distance(z: &ProjPoint, w: &ProjPoint) -> Result<f64> {
    Ok(PairGeometry::new(z, w)?.distance())
}

/// `(2m+2nu+n) Gamma(m+n+2nu) / Gamma(m+2nu+1)`, exact.
pub(crate) fn level_weight(n: u32, two_nu: u32, m: u64) -> Rational {
    let n64 = n as u64;
    let t = two_nu as u64;
    int((2 * m + t + n64) as i64) * factorial_rat(m + n64 + t - 1) / factorial_rat(m + t)
}

/// Closed-form reproducing kernel `K_{nu,m}(z, w)` of `A_m^nu`.
pub fn reproducing_kernel(n: u32, two_nu: u32, m: u64, z: &ProjPoint, w: &ProjPoint) -> Result<KernelEval> {
    let geo = PairGeometry::new(z, w)?;
    if z.dim() != n as usize {
        return Err(Error::DimensionMismatch { left: n as usize, right: z.dim() });
    }
    let coeff = to_f64(&level_weight(n, two_nu, m)) / PI.powi(n as i32);
    let p = jacobi(m as usize, (n - 1) as f64, two_nu as f64, geo.cos_2d());
    Ok(KernelEval { value: geo.phase(two_nu) * (coeff * p), terms_used: 0, error_bound: 0.0 })
}

/// `K_{nu,m}(z,z) * Vol(CP^n)` with `Vol = pi^n / n!`, exact.
pub fn kernel_diagonal_volume_check(n: u32, two_nu: u32, m: u64) -> Rational {
    let jacobi_one = pochhammer(&int(n as i64), m as usize) / factorial_rat(m);
    level_weight(n, two_nu, m) * jacobi_one / factorial_rat(n as u64)
}

/// Monopole harmonic `Phi_k^{nu,m}(z)`, `-m <= k <= 2nu + m`.
///
/// Negative Jacobi parameters are removed with
/// `C(j,l) P_j^{(-l,b)}(x) = C(j+b,l) ((x-1)/2)^l P_{j-l}^{(l,b)}(x)`
/// so that `z^k` never multiplies a polynomial with a high-order zero.
pub fn monopole_basis(two_nu: u32, m: u64, k: i64, z: Complex64) -> Result<Complex64> {
    let t = two_nu as i64;
    let mi = m as i64;
    if k < -mi || k > t + mi {
        return Err(Error::IndexOutOfRange { k, low: -mi, high: t + mi });
    }
    let norm_sq = Rational::new(
        int(t + 2 * mi + 1).numer() * factorial((t + mi) as u64) * factorial(m),
        factorial((mi + k) as u64) * factorial((t + mi - k) as u64),
    );
    let norm = to_f64(&norm_sq).sqrt();
    let s = 1.0 + z.norm_sqr();
    let x = (1.0 - z.norm_sqr()) / s;
    let nu_power = s.powf(-to_f64(&half(two_nu)));
    let ratio = |top: u64, l: u64| to_f64(&Rational::new(binomial(top, l), binomial(m, l)));
    let body = if k < 0 {
        let l = (-k) as u64;
        let beta = (t + l as i64) as f64;
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let p = jacobi((m - l) as usize, l as f64, beta, x);
        z.conj().powu(l as u32) * (sign * ratio(m + l + two_nu as u64, l) * s.powi(-(l as i32)) * p)
    } else if k > t {
        let l = (k - t) as u64;
        let alpha = k as f64;
        // P_m^{(a,-l)}(x) = (-1)^m P_m^{(-l,a)}(-x), then the same reduction at -x
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let lsign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let p = jacobi((m - l) as usize, l as f64, alpha, -x);
        z.powu(k as u32) * (sign * lsign * ratio(m + k as u64, l) * s.powi(-(l as i32)) * p)
    } else {
        z.powu(k as u32) * jacobi(m as usize, k as f64, (t - k) as f64, x)
    };
    Ok(body * (norm * nu_power))
}

/// `sum_k Phi_k(z) conj(Phi_k(w)) / pi`: the basis is orthonormal for `dmu_1 / pi`.
pub fn zaremba_sum_n1(two_nu: u32, m: u64, z: Complex64, w: Complex64) -> Complex64 {
    let t = two_nu as i64;
    let mi = m as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -mi..=t + mi {
        let a = monopole_basis(two_nu, m, k, z).expect("index in range");
        let b = monopole_basis(two_nu, m, k, w).expect("index in range");
        acc += a * b.conj();
    }
    acc / PI
}
