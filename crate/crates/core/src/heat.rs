//! Heat kernel of `L_nu` as a spectral series and as a one-dimensional
//! integral, the theta functions behind the trace, and the directly summed trace.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactnum::{factorial_rat, half, int, pochhammer, rat, to_f64, BernoulliCache, Rational};
use crate::kernels::{KernelEval, PairGeometry, ProjPoint};
use crate::orthopoly::{gegenbauer_all, jacobi_all};
use crate::quadrature::GaussLegendre;
use crate::spectrum::{dimension_product_form, SpectralPoint};

const MAX_TERMS: usize = 1 << 22;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance must be positive, got {eps}")))
    }
}

/// Smallest `M >= start` whose tail `sum_{m>M} bound(m)` is certified below `eps`.
///
/// `bound` must have non-increasing ratios `bound(m+1)/bound(m)` from `start` on;
/// the tail is then at most `bound(M+1) / (1 - ratio)`.
pub(crate) fn certified_truncation<F: Fn(usize) -> f64>(start: usize, eps: f64, bound: F) -> Result<(usize, f64)> {
    let mut m = start;
    loop {
        let b1 = bound(m + 1);
        let b2 = bound(m + 2);
        if b1 == 0.0 {
            return Ok((m, 0.0));
        }
        let ratio = b2 / b1;
        if ratio < 1.0 {
            let tail = b1 / (1.0 - ratio);
            if tail < eps {
                return Ok((m, tail));
            }
        }
        if m > MAX_TERMS {
            return Err(Error::InvalidParameter(format!("series needs more than {MAX_TERMS} terms")));
        }
        m += (m / 4).max(1);
    }
}

/// `M = ceil(sqrt(max(0, ln(1/eps))/(4t))) + n + 2nu + 4`.
fn initial_truncation(n: u32, two_nu: u32, t: f64, eps: f64) -> usize {
    let log = (1.0 / eps).ln().max(0.0);
    (log / (4.0 * t)).sqrt().ceil() as usize + n as usize + two_nu as usize + 4
}

/// `prod_{j<m} (j+c)/(j+d)`.
fn ratio_product(m: usize, c: f64, d: f64) -> f64 {
    (0..m).map(|j| (j as f64 + c) / (j as f64 + d)).product()
}

/// `beta_m t = 4t(n^2/4 + nu^2 - r^2)`, always `<= 0`.
fn beta_t(n: u32, two_nu: u32, m: usize, t: f64) -> f64 {
    let nu = two_nu as f64 / 2.0;
    let a = m as f64 + nu;
    -4.0 * t * (a * (a + n as f64) - nu * nu)
}

/// `Gamma(m+2nu+n)/Gamma(m+2nu+1)` in binary64.
fn gamma_ratio(n: u32, two_nu: u32, m: usize) -> f64 {
    let t = two_nu as u64;
    let g0 = to_f64(&(factorial_rat(t + n as u64 - 1) / factorial_rat(t)));
    g0 * ratio_product(m, (two_nu + n) as f64, (two_nu + 1) as f64)
}

/// Spectral series `sum_m e^{beta_m t} K_{nu,m}(z,w)` with a certified tail below `eps`.
pub fn heat_kernel_series(
    n: u32,
    two_nu: u32,
    t: f64,
    z: &ProjPoint,
    w: &ProjPoint,
    eps: f64,
) -> Result<KernelEval> {
    check_time(t)?;
    check_eps(eps)?;
    let geo = PairGeometry::new(z, w)?;
    if z.dim() != n as usize {
        return Err(Error::DimensionMismatch { left: n as usize, right: z.dim() });
    }
    let nu2 = two_nu as f64;
    let nf = n as f64;
    let top = (nf - 1.0).max(nu2);
    let pi_n = PI.powi(n as i32);
    // |P_m^{(n-1, 2nu)}| <= C(m + max(n-1, 2nu), m) on [-1, 1]
    let bound = |m: usize| {
        (2.0 * m as f64 + nu2 + nf)
            * gamma_ratio(n, two_nu, m)
            * ratio_product(m, top + 1.0, 1.0)
            * beta_t(n, two_nu, m, t).exp()
            / pi_n
    };
    let (big_m, tail) = certified_truncation(initial_truncation(n, two_nu, t, eps), eps, bound)?;
    let ps = jacobi_all(big_m, nf - 1.0, nu2, geo.cos_2d());
    let mut acc = CompensatedSum::default();
    let mut g = gamma_ratio(n, two_nu, 0);
    for (m, p) in ps.iter().enumerate() {
        acc.add((2.0 * m as f64 + nu2 + nf) * g * beta_t(n, two_nu, m, t).exp() * p);
        g *= (m as f64 + nu2 + nf) / (m as f64 + nu2 + 1.0);
    }
    Ok(KernelEval {
        value: geo.phase(two_nu) * (acc.value() / pi_n),
        terms_used: big_m + 1,
        error_bound: tail,
    })
}

/// Gauss–Legendre settings for the integral representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub nodes: usize,
    pub max_nodes: usize,
    /// Stop doubling once successive estimates differ by less than `tol * max(1, |I|)`.
    pub tol: f64,
    /// Truncation tolerance of the inner Gegenbauer series, relative to its first term bound.
    pub series_eps: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { nodes: 128, max_nodes: 1024, tol: 1e-9, series_eps: 1e-15 }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if self.nodes < 16 {
            return Err(Error::InvalidParameter(format!("quadrature needs at least 16 nodes, got {}", self.nodes)));
        }
        if self.max_nodes < self.nodes {
            return Err(Error::InvalidParameter("max_nodes below the starting order".into()));
        }
        check_eps(self.tol)?;
        check_eps(self.series_eps)
    }
}

/// Which constant multiplies the Gegenbauer integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralForm {
    /// `2 (n+2nu-1)! / (pi^{n+1} (1/2)_{2nu})`, the value reproduced by the spectral series.
    Corrected,
    /// The printed prefactor `1/(2^{n+2nu-1} pi^n Gamma(2nu+1/2))` times `2^{n+2nu-1}(n+2nu-1)!`.
    Printed,
}

/// Raw quadrature output: integral value, its error estimate and the Gegenbauer terms used.
#[derive(Debug, Clone, Copy)]
struct GegenbauerIntegral {
    value: f64,
    error: f64,
    terms: usize,
    nodes: usize,
}

/// `int_0^{pi/2} (cos phi)^{4nu} G(cos(rho) sin(phi)) dphi` with
/// `G(x) = sum_m (2m+2nu+n) C_{2m}^{n+2nu}(x) e^{beta_m t}`.
///
/// The weight `e^{beta_m t}` already contains `e^{4t(nu^2+n^2/4)}`.
fn gegenbauer_integral(n: u32, two_nu: u32, t: f64, cos_rho: f64, cfg: &QuadratureConfig) -> Result<GegenbauerIntegral> {
    let lambda = (n + two_nu) as f64;
    let weight = |m: usize| (2.0 * m as f64 + two_nu as f64 + n as f64) * beta_t(n, two_nu, m, t).exp();
    // |C_{2m}^lambda(x)| <= C_{2m}^lambda(1) = (2 lambda)_{2m}/(2m)!
    let at_one = |m: usize| ratio_product(2 * m, 2.0 * lambda, 1.0);
    let eps = cfg.series_eps * weight(0);
    let (big_m, tail) = certified_truncation(initial_truncation(n, two_nu, t, cfg.series_eps), eps, |m| weight(m) * at_one(m))?;
    let coeffs: Vec<f64> = (0..=big_m).map(weight).collect();
    let g = |x: f64| {
        let c = gegenbauer_all(2 * big_m, lambda, x);
        let mut acc = CompensatedSum::default();
        for (m, a) in coeffs.iter().enumerate() {
            acc.add(a * c[2 * m]);
        }
        acc.value()
    };
    let integrand = |phi: f64| phi.cos().powi(2 * two_nu as i32) * g(cos_rho * phi.sin());
    let mut nodes = cfg.nodes;
    let mut prev = GaussLegendre::cached(nodes).integrate(0.0, PI / 2.0, integrand);
    let mut last_change = f64::INFINITY;
    loop {
        let next_nodes = nodes * 2;
        if next_nodes > cfg.max_nodes {
            // cap reached: the last observed change is the achieved error
            return Ok(GegenbauerIntegral { value: prev, error: last_change + tail * PI / 2.0, terms: big_m + 1, nodes });
        }
        let next = GaussLegendre::cached(next_nodes).integrate(0.0, PI / 2.0, integrand);
        let change = (next - prev).abs();
        if change < cfg.tol * next.abs().max(1.0) {
            return Ok(GegenbauerIntegral {
                value: next,
                error: change + tail * PI / 2.0,
                terms: big_m + 1,
                nodes: next_nodes,
            });
        }
        prev = next;
        last_change = change;
        nodes = next_nodes;
    }
}

/// Exact constant in front of the Gegenbauer integral for the chosen form, as `q * pi^(-n-1)` or
/// `q * pi^(-n-1/2)`; returned already in binary64.
pub fn integral_prefactor(n: u32, two_nu: u32, form: IntegralForm) -> f64 {
    let fact = factorial_rat((n + two_nu) as u64 - 1);
    // Gamma(2nu + 1/2) = (1/2)_{2nu} sqrt(pi)
    let half_poch = pochhammer(&rat(1, 2), two_nu as usize);
    match form {
        IntegralForm::Corrected => 2.0 * to_f64(&(fact / half_poch)) / PI.powi(n as i32 + 1),
        IntegralForm::Printed => to_f64(&(fact / half_poch)) / (PI.powi(n as i32) * PI.sqrt()),
    }
}

/// Heat kernel from the one-dimensional integral over `u in [rho, pi/2]`.
///
/// The substitution `cos u = cos(rho) sin(phi)` turns the weight
/// `(cos^2 rho - cos^2 u)^{2nu - 1/2} d(-cos u)` into `(cos rho cos phi)^{4nu} dphi`;
/// the `cos(rho)^{4nu}` combines with the point prefactor into the phase of the series.
pub fn heat_kernel_integral(
    n: u32,
    two_nu: u32,
    t: f64,
    z: &ProjPoint,
    w: &ProjPoint,
    cfg: &QuadratureConfig,
) -> Result<KernelEval> {
    heat_kernel_integral_with(n, two_nu, t, z, w, cfg, IntegralForm::Corrected)
}

pub fn heat_kernel_integral_with(
    n: u32,
    two_nu: u32,
    t: f64,
    z: &ProjPoint,
    w: &ProjPoint,
    cfg: &QuadratureConfig,
    form: IntegralForm,
) -> Result<KernelEval> {
    check_time(t)?;
    cfg.validate()?;
    let geo = PairGeometry::new(z, w)?;
    if z.dim() != n as usize {
        return Err(Error::DimensionMismatch { left: n as usize, right: z.dim() });
    }
    if geo.q.norm() <= 1e-12 * (geo.nz * geo.nw).sqrt() {
        return Err(Error::AntipodalDegenerate);
    }
    let cos_rho = geo.cos2.sqrt();
    let raw = gegenbauer_integral(n, two_nu, t, cos_rho, cfg)?;
    let c = integral_prefactor(n, two_nu, form);
    // prefactor ((1+|z|^2)(1+|w|^2)/(1+<z,w>)^2)^nu times cos(rho)^{4nu} is the unit-modulus-times-cos^{2nu} phase
    let value = geo.phase(two_nu) * (c * raw.value);
    Ok(KernelEval { value, terms_used: raw.terms, error_bound: (c * raw.error).abs() })
}

/// The `nu = 0` integral formula in its classical form
/// `e^{n^2 t}/(2^{n-2} pi^{n+1}) int (-d cos u)/sqrt(cos^2 rho - cos^2 u) (-d/(sin u du))^n Theta_{n+1}`,
/// with the bracket replaced by `2^{n-1} (n-1)! sum_m (2m+n) C_{2m}^n(cos u) e^{-4t(m+n/2)^2}`.
pub fn heat_kernel_integral_nu0(n: u32, t: f64, z: &ProjPoint, w: &ProjPoint, cfg: &QuadratureConfig) -> Result<KernelEval> {
    check_time(t)?;
    cfg.validate()?;
    let geo = PairGeometry::new(z, w)?;
    if z.dim() != n as usize {
        return Err(Error::DimensionMismatch { left: n as usize, right: z.dim() });
    }
    if geo.q.norm() <= 1e-12 * (geo.nz * geo.nw).sqrt() {
        return Err(Error::AntipodalDegenerate);
    }
    let raw = gegenbauer_integral(n, 0, t, geo.cos2.sqrt(), cfg)?;
    let outer = 1.0 / (2f64.powi(n as i32 - 2) * PI.powi(n as i32 + 1));
    let bracket = 2f64.powi(n as i32 - 1) * to_f64(&factorial_rat(n as u64 - 1));
    let c = outer * bracket;
    Ok(KernelEval {
        value: num_complex::Complex64::new(c * raw.value, 0.0),
        terms_used: raw.terms,
        error_bound: (c * raw.error).abs(),
    })
}

/// Number of quadrature nodes the integral path settled on; exposed for reports.
pub fn integral_nodes_used(n: u32, two_nu: u32, t: f64, cos_rho: f64, cfg: &QuadratureConfig) -> Result<usize> {
    check_time(t)?;
    cfg.validate()?;
    Ok(gegenbauer_integral(n, two_nu, t, cos_rho, cfg)?.nodes)
}

/// `theta_2` or `theta_3` in the convention `theta_2(t) = sum (2j+1) e^{-(j+1/2)^2 t}`,
/// `theta_3(t) = 2 sum_{l>=1} l e^{-l^2 t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theta {
    Two,
    Three,
}

/// Value of a truncated theta series with its certified tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEval {
    pub value: f64,
    pub terms_used: usize,
    pub error_bound: f64,
}

/// `(d/dt)^p` of a theta function, summed termwise: each term is `2x (-x^2)^p e^{-x^2 t}`.
///
/// Past `x* = sqrt((2p+1)/(2t))` the terms decrease, so the tail after `X` is below
/// `int_X^inf 2x^{2p+1} e^{-t x^2} dx = p!/t^{p+1} e^{-y} sum_{k<=p} y^k/k!`, `y = t X^2`.
pub fn theta_deriv_eval(which: Theta, p: u32, t: f64, eps: f64) -> Result<ThetaEval> {
    check_time(t)?;
    check_eps(eps)?;
    let offset = match which {
        Theta::Two => 0.5,
        Theta::Three => 1.0,
    };
    let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
    let x_star = ((2 * p + 1) as f64 / (2.0 * t)).sqrt();
    let tail = |x: f64| {
        let y = t * x * x;
        let mut s = 0.0;
        let mut term = 1.0;
        for k in 0..=p {
            if k > 0 {
                term *= y / k as f64;
            }
            s += term;
        }
        let pf: f64 = (1..=p).map(|k| k as f64).product();
        pf / t.powi(p as i32 + 1) * (-y).exp() * s
    };
    let mut acc = CompensatedSum::default();
    let mut j = 0usize;
    loop {
        let x = j as f64 + offset;
        let term = 2.0 * ((2 * p + 1) as f64 * x.ln() - x * x * t).exp();
        acc.add(sign * term);
        j += 1;
        if x >= x_star {
            let b = tail(x);
            if b < eps {
                return Ok(ThetaEval { value: acc.value(), terms_used: j, error_bound: b });
            }
        }
        if j > MAX_TERMS {
            return Err(Error::InvalidParameter("theta series did not converge".into()));
        }
    }
}

pub fn theta_deriv(which: Theta, p: u32, t: f64, eps: f64) -> Result<f64> {
    Ok(theta_deriv_eval(which, p, t, eps)?.value)
}

pub fn theta2(t: f64, eps: f64) -> Result<f64> {
    theta_deriv(Theta::Two, 0, t, eps)
}

pub fn theta3(t: f64, eps: f64) -> Result<f64> {
    theta_deriv(Theta::Three, 0, t, eps)
}

fn signed_factorial_pole(p: u32, t: f64) -> f64 {
    let pf: f64 = (1..=p).map(|k| k as f64).product();
    let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
    sign * pf / t.powi(p as i32 + 1)
}

/// Exact coefficients `a_s` of the regular part `sum_s a_s t^s` of the small-`t` expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaExpansion {
    /// `theta_2^{(p)}`: `a_s = B~_{s+p}/s!`.
    Theta2,
    /// `theta_3^{(l)}` with the sign that matches the series: `a_s = -(-1)^j B_{2j+2}/((j+1) s!)`, `j = s + l`.
    Theta3,
    /// `theta_3^{(l)}` with the opposite sign on the Bernoulli sum, as printed in the source formula.
    Theta3Printed,
}

pub fn theta_expansion_coefficient(kind: ThetaExpansion, p: u32, s: u32) -> Rational {
    let cache = BernoulliCache::global();
    let s_fact = factorial_rat(s as u64);
    match kind {
        ThetaExpansion::Theta2 => cache.theta2_scaled((s + p) as usize) / s_fact,
        ThetaExpansion::Theta3 | ThetaExpansion::Theta3Printed => {
            let j = (s + p) as i64;
            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
            let v = sign * cache.number(2 * j as usize + 2) / (int(j + 1) * s_fact);
            if kind == ThetaExpansion::Theta3 {
                -v
            } else {
                v
            }
        }
    }
}

/// `(-1)^p p!/t^{p+1} + sum_{s<=S} a_s t^s`.
pub fn theta_asymptotic(kind: ThetaExpansion, p: u32, t: f64, s_max: u32) -> f64 {
    let mut acc = CompensatedSum::default();
    acc.add(signed_factorial_pole(p, t));
    for s in 0..=s_max {
        acc.add(to_f64(&theta_expansion_coefficient(kind, p, s)) * t.powi(s as i32));
    }
    acc.value()
}

/// First term left out of [`theta_asymptotic`] with the same `s_max`.
pub fn theta_first_omitted(kind: ThetaExpansion, p: u32, t: f64, s_max: u32) -> f64 {
    to_f64(&theta_expansion_coefficient(kind, p, s_max + 1)) * t.powi(s_max as i32 + 1)
}

/// `dim A_m^nu` in binary64 for a table of levels.
fn dimension_f64(n: u32, two_nu: u32, m: usize) -> f64 {
    let pt = SpectralPoint { n, two_nu, m: m as u64 };
    dimension_product_form(&pt).map(|d: BigInt| d.to_f64().unwrap_or(f64::INFINITY)).unwrap_or(f64::NAN)
}

/// Heat trace `Tr exp(t L_nu / 4) = sum_m dim(A_m^nu) e^{beta_m t / 4}`, certified tail below `eps`.
pub fn trace_direct(n: u32, two_nu: u32, t: f64, eps: f64) -> Result<f64> {
    Ok(trace_direct_eval(n, two_nu, t, eps)?.0)
}

/// Trace, number of levels summed and tail bound.
pub fn trace_direct_eval(n: u32, two_nu: u32, t: f64, eps: f64) -> Result<(f64, usize, f64)> {
    check_time(t)?;
    check_eps(eps)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let big_m = trace_truncation(n, two_nu, t, eps)?;
    let mut acc = CompensatedSum::default();
    for m in 0..=big_m.0 {
        acc.add(dimension_f64(n, two_nu, m) * (beta_t(n, two_nu, m, t) / 4.0).exp());
    }
    Ok((acc.value(), big_m.0 + 1, big_m.1))
}

/// Truncation level for the trace; the term ratio is decreasing because both the
/// dimension ratio and the Gaussian factor are.
pub(crate) fn trace_truncation(n: u32, two_nu: u32, t: f64, eps: f64) -> Result<(usize, f64)> {
    let start = initial_truncation(n, two_nu, t / 4.0, eps);
    certified_truncation(start, eps, |m| dimension_f64(n, two_nu, m) * (beta_t(n, two_nu, m, t) / 4.0).exp())
}

/// `n^2/4 + nu^2` as an exact rational.
pub fn trace_shift(n: u32, two_nu: u32) -> Rational {
    let h = half(n);
    let nu = half(two_nu);
    &h * &h + &nu * &nu
}
