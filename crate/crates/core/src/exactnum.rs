//! Exact rational arithmetic and the Bernoulli-family sequences.
//!
//! All exact scalars in the crate are [`Rational`] values (arbitrary precision,
//! always reduced, positive denominator). Bernoulli numbers use the convention
//! `B_1 = -1/2`, i.e. they are generated by `x / (e^x - 1)`.

use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p / q`, reduced. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2nu / 2` as an exact rational.
pub fn half(two: u32) -> Rational {
    rat(i64::from(two), 2)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_rat(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Integer binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `x^k` for a non-negative integer exponent.
pub fn pow(x: &Rational, k: u32) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64 individually
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Canonical string form: `"p/q"`, or `"p"` when the denominator is one.
pub fn to_exact_string(x: &Rational) -> String {
    x.to_string()
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_abs = if whole_abs.is_empty() { "0" } else { whole_abs };
        let digits = BigInt::from_str(&format!("{whole_abs}{frac}")).ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(digits, scale);
        return Some(if negative { -value } else { value });
    }
    BigInt::from_str(s).ok().map(Rational::from_integer)
}

/// Serde adapter writing rationals as exact strings.
pub mod serde_rational {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_exact_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s}")))
    }
}

/// Same as [`serde_rational`] for vectors.
pub mod serde_rational_vec {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(to_exact_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("not a rational: {s}"))))
            .collect()
    }
}

/// Append-only memo of Bernoulli numbers and of the rescaled theta-2 sequence.
///
/// The two sequences are kept apart on purpose: the rescaled numbers
/// `((-1)^d / (d+1)) (1 - 2^(-2d-1)) B_{2d+2}` are never handed out where a
/// standard Bernoulli number is expected.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    standard: RwLock<Vec<Rational>>,
    theta2_scaled: RwLock<Vec<Rational>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static BernoulliCache {
        static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
        CACHE.get_or_init(BernoulliCache::new)
    }

    fn ensure_standard(&self, d: usize) {
        if self.standard.read().expect("bernoulli cache poisoned").len() > d {
            return;
        }
        let mut table = self.standard.write().expect("bernoulli cache poisoned");
        if table.is_empty() {
            table.push(Rational::one());
        }
        while table.len() <= d {
            // sum_{k=0}^{d} C(d+1, k) B_k = 0
            let next = table.len() as u64;
            let mut acc = Rational::zero();
            let mut binom = BigInt::one();
            for (k, b) in table.iter().enumerate() {
                if !b.is_zero() {
                    acc += Rational::from_integer(binom.clone()) * b;
                }
                let k = k as u64;
                binom = binom * BigInt::from(next + 1 - k) / BigInt::from(k + 1);
            }
            table.push(-acc / int(next as i64 + 1));
        }
    }

    /// Standard Bernoulli number `B_d` with `B_1 = -1/2`.
    pub fn number(&self, d: usize) -> Rational {
        self.ensure_standard(d);
        self.standard.read().expect("bernoulli cache poisoned")[d].clone()
    }

    /// `B_0, ..., B_d`.
    pub fn numbers(&self, d: usize) -> Vec<Rational> {
        self.ensure_standard(d);
        self.standard.read().expect("bernoulli cache poisoned")[..=d].to_vec()
    }

    /// Rescaled theta-2 coefficient `((-1)^d / (d+1)) (1 - 2^(-2d-1)) B_{2d+2}`.
    pub fn theta2_scaled(&self, d: usize) -> Rational {
        {
            let table = self.theta2_scaled.read().expect("bernoulli cache poisoned");
            if table.len() > d {
                return table[d].clone();
            }
        }
        self.ensure_standard(2 * d + 2);
        let standard = self.standard.read().expect("bernoulli cache poisoned");
        let mut table = self.theta2_scaled.write().expect("bernoulli cache poisoned");
        while table.len() <= d {
            let k = table.len();
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            let two_pow = Rational::from_integer(BigInt::one() << (2 * k + 1));
            let factor = Rational::one() - two_pow.recip();
            table.push(sign * factor * &standard[2 * k + 2] / int(k as i64 + 1));
        }
        table[d].clone()
    }
}

pub fn bernoulli_number(d: usize) -> Rational {
    BernoulliCache::global().number(d)
}

/// `B_d(x) = sum_k C(d, k) B_k x^(d-k)`.
pub fn bernoulli_polynomial(d: usize, x: &Rational) -> Rational {
    let b = BernoulliCache::global().numbers(d);
    // Horner in x over descending powers: coefficient of x^(d-k) is C(d,k) B_k
    let mut acc = Rational::zero();
    let mut binom = BigInt::one();
    let mut coeffs = Vec::with_capacity(d + 1);
    for (k, bk) in b.iter().enumerate() {
        coeffs.push(Rational::from_integer(binom.clone()) * bk);
        let k = k as u64;
        binom = binom * BigInt::from(d as u64 - k.min(d as u64)) / BigInt::from(k + 1);
    }
    for c in &coeffs {
        acc = acc * x + c;
    }
    acc
}

pub fn theta2_series_coefficient(d: usize) -> Rational {
    BernoulliCache::global().theta2_scaled(d)
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..k {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Generalized binomial `a (a-1) ... (a-k+1) / k!`.
pub fn binomial_general(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for j in 1..=k {
        acc *= &term;
        acc /= int(j as i64);
        term -= Rational::one();
    }
    acc
}

/// `sum_{k=0}^{m} (k + a)^q` through `[B_{q+1}(m+1+a) - B_{q+1}(a)] / (q+1)`.
pub fn power_sum(m: u64, q: u32, a: &Rational) -> Rational {
    let d = q as usize + 1;
    let upper = a + int(m as i64 + 1);
    (bernoulli_polynomial(d, &upper) - bernoulli_polynomial(d, a)) / int(d as i64)
}

/// `sum_{k=1}^{m} k^q` through `[B_{q+1}(m+1) - B_{q+1}] / (q+1)`.
pub fn power_sum_from_one(m: u64, q: u32) -> Rational {
    let d = q as usize + 1;
    (bernoulli_polynomial(d, &int(m as i64 + 1)) - bernoulli_number(d)) / int(d as i64)
}

/// True when `x` is stored in lowest terms with a positive denominator.
pub fn lowest_terms(x: &Rational) -> bool {
    x.numer().gcd(x.denom()).is_one() && x.denom().is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_power_sum(m: u64, q: u32, a: &Rational) -> Rational {
        (0..=m).map(|k| pow(&(a + int(k as i64)), q)).sum()
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), int(0));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        for k in 1..20 {
            assert!(bernoulli_number(2 * k + 1).is_zero());
        }
    }

    #[test]
    fn bernoulli_recursion_matches_polynomial_at_zero() {
        for d in 0..=40 {
            assert_eq!(bernoulli_number(d), bernoulli_polynomial(d, &int(0)), "d = {d}");
        }
    }

    #[test]
    fn bernoulli_polynomial_values() {
        assert_eq!(bernoulli_polynomial(0, &rat(7, 3)), int(1));
        assert_eq!(bernoulli_polynomial(1, &rat(1, 2)), int(0));
        assert_eq!(bernoulli_polynomial(2, &rat(1, 2)), rat(-1, 12));
        // B_2(x) = x^2 - x + 1/6 at x = 3/2
        assert_eq!(bernoulli_polynomial(2, &rat(3, 2)), rat(11, 12));
    }

    #[test]
    fn theta2_coefficients() {
        assert_eq!(theta2_series_coefficient(0), rat(1, 12));
        assert_eq!(theta2_series_coefficient(1), rat(7, 480));
        for d in 0..=20usize {
            let lhs = bernoulli_polynomial(2 * d + 2, &rat(1, 2));
            let sign = if (d + 1) % 2 == 0 { 1 } else { -1 };
            let rhs = int(sign * (d as i64 + 1)) * theta2_series_coefficient(d);
            assert_eq!(lhs, rhs, "d = {d}");
        }
    }

    #[test]
    fn bernoulli_at_half() {
        for d in 0..=40usize {
            let factor = Rational::one() - int(2) * num_traits::pow(rat(1, 2), d);
            assert_eq!(bernoulli_polynomial(d, &rat(1, 2)), -factor * bernoulli_number(d), "d = {d}");
        }
    }

    #[test]
    fn pochhammer_and_binomial() {
        assert_eq!(pochhammer(&int(5), 0), int(1));
        assert_eq!(pochhammer(&int(-3), 5), int(0));
        assert_eq!(pochhammer(&int(-3), 2), int(6));
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8));
        assert_eq!(binomial_general(&int(4), 2), int(6));
        assert_eq!(binomial_general(&rat(9, 7), 0), int(1));
        assert_eq!(binomial_general(&rat(-1, 2), 2), rat(3, 8));
        for a in [-4i64, -1, 0, 3, 7] {
            for k in 0..6 {
                let lhs = binomial_general(&int(a), k);
                let sign = if k % 2 == 0 { int(1) } else { int(-1) };
                let rhs = sign * pochhammer(&int(-a), k) / factorial_rat(k as u64);
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 10), BigInt::from(0));
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(0, 3, &rat(1, 2)), rat(1, 8));
        assert_eq!(power_sum(3, 1, &int(0)), int(6));
        assert_eq!(power_sum(4, 5, &rat(1, 2)), brute_power_sum(4, 5, &rat(1, 2)));
    }

    #[test]
    fn power_sum_grid() {
        for a in [int(0), rat(1, 2), int(1), rat(3, 2)] {
            for m in 0..=10 {
                for q in 1..=9 {
                    assert_eq!(power_sum(m, q, &a), brute_power_sum(m, q, &a));
                }
            }
        }
        for m in 0..=12 {
            for q in 1..=9 {
                let direct: Rational = (1..=m).map(|k| pow(&int(k as i64), q)).sum();
                assert_eq!(power_sum_from_one(m, q), direct);
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(to_exact_string(&rat(-2, 8)), "-1/4");
        assert_eq!(to_exact_string(&int(8)), "8");
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let cache = std::sync::Arc::new(BernoulliCache::new());
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let cache = cache.clone();
                std::thread::spawn(move || cache.number(10 + 7 * i))
            })
            .collect();
        let values: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert_eq!(values[0], bernoulli_number(10));
        assert_eq!(values[2], bernoulli_number(24));
    }

    proptest! {
        #[test]
        fn results_are_reduced(p in -1000i64..1000, q in 1i64..1000, d in 0usize..24) {
            let x = rat(p, q);
            prop_assert!(lowest_terms(&bernoulli_polynomial(d, &x)));
            prop_assert!(lowest_terms(&pochhammer(&x, d % 7)));
        }

        #[test]
        fn translation_identity(p in -50i64..50, q in 1i64..12, d in 1usize..16) {
            // B_d(x + 1) - B_d(x) = d x^(d-1)
            let x = rat(p, q);
            let lhs = bernoulli_polynomial(d, &(&x + int(1))) - bernoulli_polynomial(d, &x);
            prop_assert_eq!(lhs, int(d as i64) * pow(&x, d as u32 - 1));
        }
    }
}
