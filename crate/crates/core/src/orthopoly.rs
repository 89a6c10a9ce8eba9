//! Jacobi, Gegenbauer and disk polynomials, and terminating `2F1` sums.
//!
//! Every polynomial has an exact path (finite sums over [`Rational`]) and a
//! binary64 path (three-term recurrences). The two are cross-checked in tests.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial_general, factorial_rat, int, pochhammer, to_f64, Rational};

/// Field-like scalar that exact and floating evaluations share.
pub trait Scalar:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
}

impl Scalar for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(to_f64(r), 0.0)
    }
}

fn powi<T: Scalar>(x: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x.clone())
}

/// Degree and parameters of `P_k^(alpha, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiParams {
    pub degree: usize,
    pub alpha: Rational,
    pub beta: Rational,
}

impl JacobiParams {
    pub fn new(degree: usize, alpha: Rational, beta: Rational) -> Self {
        Self { degree, alpha, beta }
    }

    /// Finite-sum evaluation, exact for rational arguments.
    pub fn eval_sum<T: Scalar>(&self, x: &T) -> T {
        jacobi_sum(self.degree, &self.alpha, &self.beta, x)
    }

    /// Recurrence evaluation in binary64.
    pub fn eval(&self, x: f64) -> f64 {
        jacobi(self.degree, to_f64(&self.alpha), to_f64(&self.beta), x)
    }

    pub fn at_one(&self) -> Rational {
        jacobi_at_one(self.degree, &self.alpha)
    }
}

/// `P_k^(a,b)(x) = 2^-k sum_j C(k+a, j) C(k+b, k-j) (x+1)^j (x-1)^(k-j)`.
pub fn jacobi_sum<T: Scalar>(k: usize, a: &Rational, b: &Rational, x: &T) -> T {
    let ka = a + int(k as i64);
    let kb = b + int(k as i64);
    let plus = x.clone() + T::one();
    let minus = x.clone() - T::one();
    let mut acc = T::zero();
    for j in 0..=k {
        let coeff = binomial_general(&ka, j) * binomial_general(&kb, k - j);
        if coeff.is_zero() {
            continue;
        }
        acc = acc + T::from_rational(&coeff) * powi(&plus, j) * powi(&minus, k - j);
    }
    let scale = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), k));
    acc * T::from_rational(&scale)
}

/// Three-term recurrence for `P_k^(a,b)(x)`. Requires `a + b + n != 0` for `2 <= n <= k`.
pub fn jacobi(k: usize, a: f64, b: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    for n in 2..=k {
        let n = n as f64;
        let s = 2.0 * n + a + b;
        let a1 = 2.0 * n * (n + a + b) * (s - 2.0);
        let a2 = (s - 1.0) * (a * a - b * b);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_0, ..., P_k` at one point, same recurrence as [`jacobi`].
pub fn jacobi_all(k: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k == 0 {
        return out;
    }
    out.push((a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0));
    for n in 2..=k {
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let a1 = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let a2 = (s - 1.0) * (a * a - b * b);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        out.push(((a2 + a3 * x) * out[n - 1] - a4 * out[n - 2]) / a1);
    }
    out
}

/// `P_k^(a,b)(1) = (a+1)_k / k!`.
pub fn jacobi_at_one(k: usize, a: &Rational) -> Rational {
    pochhammer(&(a + int(1)), k) / factorial_rat(k as u64)
}

/// Terminating `2F1(-k, b; c; x) = sum_{j<=k} (-k)_j (b)_j / ((c)_j j!) x^j`.
pub fn gauss2f1_terminating<T: Scalar>(k: usize, b: &Rational, c: &Rational, x: &T) -> Result<T> {
    let minus_k = int(-(k as i64));
    let mut coeff = Rational::one();
    let mut acc = T::one();
    let mut power = T::one();
    for j in 0..k {
        let jr = int(j as i64);
        let num = (&minus_k + &jr) * (b + &jr);
        let den = (c + &jr) * int(j as i64 + 1);
        power = power * x.clone();
        if num.is_zero() {
            break;
        }
        if den.is_zero() {
            return Err(Error::Pole { c: c.clone(), index: j + 1 });
        }
        coeff = coeff * num / den;
        acc = acc + T::from_rational(&coeff) * power.clone();
    }
    Ok(acc)
}

/// `R_k^(a,b)(u) = P_k^(a,b)(u) / P_k^(a,b)(1)`, exact or floating by scalar type.
pub fn normalized_jacobi_r<T: Scalar>(k: usize, alpha: &Rational, beta: &Rational, u: &T) -> Result<T> {
    let at_one = jacobi_at_one(k, alpha);
    if at_one.is_zero() {
        return Err(Error::DegenerateNormalization { degree: k });
    }
    Ok(jacobi_sum(k, alpha, beta, u) / T::from_rational(&at_one))
}

/// Recurrence-based `R_k^(a,b)(u)` in binary64.
pub fn normalized_jacobi_r_f64(k: usize, alpha: &Rational, beta: &Rational, u: f64) -> Result<f64> {
    let at_one = jacobi_at_one(k, alpha);
    if at_one.is_zero() {
        return Err(Error::DegenerateNormalization { degree: k });
    }
    Ok(jacobi(k, to_f64(alpha), to_f64(beta), u) / to_f64(&at_one))
}

/// Index data of the disk polynomial `R_{p,q}^gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskIndex {
    pub p: usize,
    pub q: usize,
    pub gamma: Rational,
}

/// Disk polynomial `|xi|^{|p-q|} e^{i(p-q) arg xi} R_{min(p,q)}^{(gamma,|p-q|)}(2|xi|^2 - 1)`.
///
/// The angular factor is evaluated as `xi^(p-q)` or `conj(xi)^(q-p)`, so the
/// value at `xi = 0` is the continuous limit.
pub fn disk_polynomial(idx: &DiskIndex, xi: Complex64) -> Result<Complex64> {
    let (low, diff) = if idx.p >= idx.q { (idx.q, idx.p - idx.q) } else { (idx.p, idx.q - idx.p) };
    let angular = if idx.p >= idx.q { xi.powu(diff as u32) } else { xi.conj().powu(diff as u32) };
    let radial = normalized_jacobi_r_f64(low, &idx.gamma, &int(diff as i64), 2.0 * xi.norm_sqr() - 1.0)?;
    Ok(angular * radial)
}

/// Gegenbauer `C_k^lambda(x)` via `k C_k = 2x(k+lambda-1) C_{k-1} - (k+2lambda-2) C_{k-2}`.
pub fn gegenbauer(k: usize, lambda: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * x;
    for j in 2..=k {
        let j = j as f64;
        let next = (2.0 * x * (j + lambda - 1.0) * cur - (j + 2.0 * lambda - 2.0) * prev) / j;
        prev = cur;
        cur = next;
    }
    cur
}

/// All `C_0^lambda(x), ..., C_k^lambda(x)` from one recurrence pass.
pub fn gegenbauer_all(k: usize, lambda: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k == 0 {
        return out;
    }
    out.push(2.0 * lambda * x);
    for j in 2..=k {
        let jf = j as f64;
        let next = (2.0 * x * (jf + lambda - 1.0) * out[j - 1] - (jf + 2.0 * lambda - 2.0) * out[j - 2]) / jf;
        out.push(next);
    }
    out
}

/// `C_k^lambda(1) = (2 lambda)_k / k!`, the maximum of `|C_k^lambda|` on `[-1, 1]` for `lambda > 0`.
pub fn gegenbauer_at_one(k: usize, lambda: &Rational) -> Rational {
    pochhammer(&(lambda * int(2)), k) / factorial_rat(k as u64)
}
