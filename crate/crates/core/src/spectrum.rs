//! Eigenvalues of `L_nu`, eigenspace dimensions, and the parity-split even
//! polynomial that rewrites the multiplicity as a sum of odd powers of `r`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, factorial_rat, half, int, is_integer, pow, Rational};

/// `(n, 2nu, m)`: complex dimension, twice the magnetic charge, level index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub n: u32,
    #[serde(rename = "twoNu")]
    pub two_nu: u32,
    pub m: u64,
}

impl SpectralPoint {
    pub fn new(n: u32, two_nu: u32, m: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(Self { n, two_nu, m })
    }

    pub fn nu(&self) -> Rational {
        half(self.two_nu)
    }

    /// `r = m + nu + n/2`.
    pub fn r(&self) -> Rational {
        int(self.m as i64) + self.nu() + half(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// Coefficients of `sum_p coeffs[p] r^(2p)`, `p = 0..n-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionPoly {
    pub parity: Parity,
    #[serde(with = "crate::exactnum::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl DecompositionPoly {
    /// Value of `sum_p coeffs[p] mu^(2p)`.
    pub fn eval_even(&self, mu: &Rational) -> Rational {
        let sq = mu * mu;
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &sq + c)
    }

    /// Roots `mu >= 0` at which the even polynomial must vanish.
    pub fn interior_roots(n: u32, nu: &Rational) -> Vec<Rational> {
        let (lo, hi) = match n % 2 {
            1 => (nu + half(1), nu + half(n) - int(1)),
            _ => (nu.clone(), nu + half(n) - int(1)),
        };
        let mut out = Vec::new();
        let mut mu = lo;
        while mu <= hi {
            out.push(mu.clone());
            mu += int(1);
        }
        out
    }
}

/// `Lambda_{n,nu}(lambda) = n^2 - lambda^2 + 4 nu^2`.
pub fn lambda_cap(n: u32, nu: &Rational, lam: &Rational) -> Rational {
    int(n as i64 * n as i64) - lam * lam + int(4) * nu * nu
}

/// `beta_m = -4(m+nu)(m+nu+n) + 4 nu^2`.
pub fn eigenvalue_beta(pt: &SpectralPoint) -> Rational {
    let nu = pt.nu();
    let a = int(pt.m as i64) + &nu;
    int(-4) * &a * (&a + int(pt.n as i64)) + int(4) * &nu * &nu
}

/// Landau level `(2m+1) nu + m(m+1)`.
pub fn landau_tau(nu: &Rational, m: u64) -> Rational {
    let m = m as i64;
    int(2 * m + 1) * nu + int(m * (m + 1))
}

fn integral(value: Rational) -> Result<BigInt> {
    if is_integer(&value) {
        Ok(value.to_integer())
    } else {
        Err(Error::NonIntegerDimension { value })
    }
}

/// Multiplicity through factorials; `2nu` is an integer so every Gamma argument is too.
pub fn dimension_gamma_form(pt: &SpectralPoint) -> Result<BigInt> {
    let n = pt.n as u64;
    let m = pt.m;
    let t = pt.two_nu as u64;
    let num = int((2 * m + n + t) as i64) * factorial_rat(m + n - 1) * factorial_rat(m + n + t - 1);
    let den = int(n as i64) * pow(&factorial_rat(n - 1), 2) * factorial_rat(m) * factorial_rat(m + t);
    integral(num / den)
}

/// `(2m+n+2nu)/(n!(n-1)!) prod_{j=1}^{n-1} (m+j)(m+2nu+j)`.
pub fn dimension_product_form(pt: &SpectralPoint) -> Result<BigInt> {
    let n = pt.n as u64;
    let m = pt.m;
    let t = pt.two_nu as u64;
    let mut prod = BigInt::one();
    for j in 1..n {
        prod *= BigInt::from(m + j) * BigInt::from(m + t + j);
    }
    let value = Rational::new(BigInt::from(2 * m + n + t) * prod, factorial(n) * factorial(n - 1));
    integral(value)
}

/// `2/(n!(n-1)!) sum_p coeffs[p] r^(2p+1)`.
pub fn dimension_sum_form(pt: &SpectralPoint, poly: &DecompositionPoly) -> Result<BigInt> {
    let n = pt.n as u64;
    let r = pt.r();
    let value = int(2) * &r * poly.eval_even(&r) / (factorial_rat(n) * factorial_rat(n - 1));
    integral(value)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Expands `prod_{j=1}^{n-1} (r - n/2 - nu + j)(r - n/2 + nu + j)` and splits off the even part.
///
/// Panics if the expansion disagrees with the paired-root product; that would
/// be an internal arithmetic bug, not an input condition.
pub fn decompose_multiplicity(n: u32, nu: &Rational) -> DecompositionPoly {
    assert!(n >= 1, "n must be positive");
    let h = half(n);
    let mut full = vec![Rational::one()];
    for j in 1..n as i64 {
        let a = int(j) - &h - nu;
        let b = int(j) - &h + nu;
        full = poly_mul(&full, &[a, Rational::one()]);
        full = poly_mul(&full, &[b, Rational::one()]);
    }
    assert!(full.iter().skip(1).step_by(2).all(|c| c.is_zero()), "expansion is not even in r");
    let coeffs: Vec<Rational> = full.into_iter().step_by(2).collect();
    let poly = DecompositionPoly {
        parity: if n % 2 == 1 { Parity::Odd } else { Parity::Even },
        coeffs,
    };
    assert_eq!(poly.coeffs, paired_root_product(n, nu), "paired-root factorization mismatch");
    poly
}

/// `prod_l (s - l^2) prod_s (s - s_k^2)` in `s = r^2`, from the closed root lists.
fn paired_root_product(n: u32, nu: &Rational) -> Vec<Rational> {
    let one = int(1);
    let (l_lo, s_lo) = if n % 2 == 1 { (nu + half(1), half(1) - nu) } else { (nu.clone(), &one - nu) };
    let l_hi = nu + half(n) - &one;
    let s_hi = half(n) - nu - &one;
    let mut out = vec![Rational::one()];
    for (lo, hi) in [(l_lo, l_hi), (s_lo, s_hi)] {
        let mut x = lo;
        while x <= hi {
            out = poly_mul(&out, &[-(&x * &x), Rational::one()]);
            x += &one;
        }
    }
    out
}

/// `(delta(n,p,q), d(n,p,q))` for bihomogeneous harmonics of bidegree `(p,q)` on `C^n`.
pub fn spherical_harmonic_dims(n: u32, p: u64, q: u64) -> (BigInt, BigInt) {
    let n = n as u64;
    let delta = |p: u64, q: u64| binomial(p + n - 1, n - 1) * binomial(q + n - 1, n - 1);
    let big = delta(p, q);
    if p == 0 || q == 0 {
        return (big.clone(), big);
    }
    let d = &big - delta(p - 1, q - 1);
    (big, d)
}
