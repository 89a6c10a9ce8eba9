//! Exact small-time heat coefficients of `Tr exp(t L_nu / 4)` on `CP^n`.
//!
//! `Tr ~ (4 pi t)^{-n} sum_j b_j t^j` with
//! `b_j = ((4 pi)^n / n!) sum_{i<=j} (n^2/4 + nu^2)^{j-i}/(j-i)! c_i`.
//! The `c_i` come from the even multiplicity polynomial (head, `i < n`) and a
//! Bernoulli-polynomial recurrence in the earlier `c_p` (tail, `i >= n`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    bernoulli_number, bernoulli_polynomial, factorial_rat, half, int, pow, rat, theta2_series_coefficient, to_f64,
    Rational,
};
use crate::heat::{check_time, trace_shift, CompensatedSum};
use crate::spectrum::decompose_multiplicity;

/// Which tail recurrence to use for `i >= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailForm {
    /// `c_i = sum_p (-1)^{i-n+1} c_p B_{2(i-p)}(a) / ((i-n)! (i-p) (n-p-1)!)`,
    /// `a = nu + 1/2` for odd `n` and `a = nu` for even `n`. Agrees with the direct trace.
    #[default]
    Derived,
    /// The compressed closed form as printed: odd `n` divides by `p!` instead of
    /// `(n-p-1)!`; even `n` uses `(-1)^{i-n} [2 B_{2(i-p)} - B_{2(i-p)}(nu)]`.
    Statement,
}

fn integer_nu(two_nu: u32) -> Result<Rational> {
    if two_nu % 2 == 1 {
        return Err(Error::UnsupportedNu { two_nu });
    }
    Ok(int(two_nu as i64 / 2))
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// `c_0, ..., c_J` with the default tail.
pub fn c_coefficients(n: u32, two_nu: u32, j_max: usize) -> Result<Vec<Rational>> {
    c_coefficients_with(n, two_nu, j_max, TailForm::Derived)
}

pub fn c_coefficients_with(n: u32, two_nu: u32, j_max: usize, form: TailForm) -> Result<Vec<Rational>> {
    check_n(n)?;
    let nu = integer_nu(two_nu)?;
    let n_us = n as usize;
    let poly = decompose_multiplicity(n, &nu);
    let nm1 = factorial_rat(n as u64 - 1);
    let mut c: Vec<Rational> = Vec::with_capacity(j_max + 1);
    for i in 0..=j_max.min(n_us - 1) {
        c.push(factorial_rat((n_us - i - 1) as u64) / &nm1 * &poly.coeffs[n_us - i - 1]);
    }
    let odd = n % 2 == 1;
    let shift = if odd { &nu + half(1) } else { nu.clone() };
    for i in n_us..=j_max {
        let mut acc = Rational::from_integer(0.into());
        for (p, cp) in c.iter().take(n_us).enumerate() {
            let k = i - p;
            let b_shift = bernoulli_polynomial(2 * k, &shift);
            let base = cp / (factorial_rat((i - n_us) as u64) * int(k as i64));
            let term = match (form, odd) {
                (TailForm::Derived, _) => {
                    sign((i - n_us + 1) as i64) * b_shift / factorial_rat((n_us - p - 1) as u64)
                }
                (TailForm::Statement, true) => sign((i - n_us + 1) as i64) * b_shift / factorial_rat(p as u64),
                (TailForm::Statement, false) => {
                    sign((i - n_us) as i64) * (int(2) * bernoulli_number(2 * k) - b_shift)
                        / factorial_rat((n_us - p - 1) as u64)
                }
            };
            acc += base * term;
        }
        c.push(acc);
    }
    Ok(c)
}

/// `b_j / pi^n` for `j = 0..=J`.
pub fn b_coefficients(n: u32, two_nu: u32, j_max: usize) -> Result<Vec<Rational>> {
    let c = c_coefficients(n, two_nu, j_max)?;
    Ok(b_from_c(n, &trace_shift(n, two_nu), &c))
}

/// `(4^n/n!) sum_{i<=j} s^{j-i}/(j-i)! c_i` for each `j`.
pub fn b_from_c(n: u32, s: &Rational, c: &[Rational]) -> Vec<Rational> {
    let omega = pow(&int(4), n) / factorial_rat(n as u64);
    (0..c.len())
        .map(|j| {
            let sum = (0..=j).fold(Rational::from_integer(0.into()), |acc, i| {
                acc + pow(s, (j - i) as u32) / factorial_rat((j - i) as u64) * &c[i]
            });
            &omega * sum
        })
        .collect()
}

/// The `nu = 0` sequences as printed, `n in 1..=4`; test vectors only.
pub fn nu_zero_u(n: u32, j_max: usize) -> Result<Vec<Rational>> {
    let bt = theta2_series_coefficient;
    let mut u: Vec<Rational> = Vec::with_capacity(j_max + 1);
    match n {
        1 => {
            for i in 0..=j_max {
                u.push(if i == 0 { int(1) } else { bt(i - 1) / factorial_rat(i as u64 - 1) });
            }
        }
        2 => {
            for i in 0..=j_max {
                u.push(match i {
                    0 => int(1),
                    1 => int(0),
                    _ => sign(i as i64) * bernoulli_number(2 * i) / (int(i as i64) * factorial_rat(i as u64 - 2)),
                });
            }
        }
        3 => {
            let head = [int(1), rat(-1, 4), rat(1, 32)];
            for i in 0..=j_max {
                u.push(if i < 3 {
                    head[i].clone()
                } else {
                    (bt(i - 1) + rat(1, 2) * bt(i - 2) + rat(1, 16) * bt(i - 3)) / (int(2) * factorial_rat(i as u64 - 3))
                });
            }
        }
        4 => {
            let head = [int(1), rat(-2, 3), rat(1, 6), int(0)];
            for i in 0..=j_max {
                if i < 4 {
                    u.push(head[i].clone());
                    continue;
                }
                let mut acc = int(0);
                for p in 0..=3usize {
                    let k = p + i - 3;
                    acc += sign(i as i64 - 4) * &u[3 - p] * bernoulli_number(2 * k)
                        / (int(k as i64) * factorial_rat(p as u64) * factorial_rat(i as u64 - 4));
                }
                u.push(acc);
            }
        }
        _ => return Err(Error::UnsupportedN(n)),
    }
    Ok(u)
}

/// Printed `(n = 3)` alternative `sum_p (-1)^p u_{2-p} B~_{i+p-3} / (p! (i-3)!)`.
pub fn nu_zero_u3_sum_form(j_max: usize) -> Vec<Rational> {
    let mut u = vec![int(1), rat(-1, 4), rat(1, 32)];
    u.truncate(j_max + 1);
    for i in 3..=j_max {
        let mut acc = int(0);
        for p in 0..=2usize {
            acc += sign(p as i64) * &u[2 - p] * theta2_series_coefficient(i + p - 3)
                / (factorial_rat(p as u64) * factorial_rat(i as u64 - 3));
        }
        u.push(acc);
    }
    u
}

/// `(4 pi t)^{-n} sum_{j<=J} b_j t^j`; the `pi^n` cancels, leaving `(4t)^{-n} sum q_j t^j`.
pub fn asymptotic_trace(n: u32, two_nu: u32, t: f64, j_max: usize) -> Result<f64> {
    check_time(t)?;
    let q = b_coefficients(n, two_nu, j_max)?;
    Ok(asymptotic_trace_from(&q, n, t))
}

pub fn asymptotic_trace_from(q: &[Rational], n: u32, t: f64) -> f64 {
    let mut acc = CompensatedSum::default();
    for (j, qj) in q.iter().enumerate() {
        acc.add(to_f64(qj) * t.powi(j as i32));
    }
    acc.value() / (4.0 * t).powi(n as i32)
}

/// One printed-vs-computed comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedDiff {
    pub quantity: String,
    pub index: usize,
    #[serde(with = "crate::exactnum::serde_rational")]
    pub computed: Rational,
    #[serde(with = "crate::exactnum::serde_rational")]
    pub printed: Rational,
}

/// `b_j = factor * pi^piPower`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BEntry {
    #[serde(with = "crate::exactnum::serde_rational")]
    pub factor: Rational,
    #[serde(rename = "piPower")]
    pub pi_power: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatCoeffTable {
    pub n: u32,
    #[serde(rename = "twoNu")]
    pub two_nu: u32,
    #[serde(rename = "J")]
    pub j_max: usize,
    #[serde(with = "crate::exactnum::serde_rational_vec")]
    pub c: Vec<Rational>,
    pub b: Vec<BEntry>,
    pub paper_reported_diffs: Vec<PrintedDiff>,
}

impl HeatCoeffTable {
    pub fn compute(n: u32, two_nu: u32, j_max: usize) -> Result<Self> {
        let c = c_coefficients(n, two_nu, j_max)?;
        let q = b_from_c(n, &trace_shift(n, two_nu), &c);
        let b = q.into_iter().map(|factor| BEntry { factor, pi_power: n }).collect();
        let paper_reported_diffs = printed_diffs(n, two_nu, j_max, &c)?;
        Ok(Self { n, two_nu, j_max, c, b, paper_reported_diffs })
    }
}

/// Printed closed forms that disagree with the computed values, for this `(n, nu, J)`.
pub fn printed_diffs(n: u32, two_nu: u32, j_max: usize, c: &[Rational]) -> Result<Vec<PrintedDiff>> {
    let nu = integer_nu(two_nu)?;
    let mut out = Vec::new();
    let mut push = |quantity: &str, index: usize, computed: &Rational, printed: Rational| {
        if *computed != printed {
            out.push(PrintedDiff { quantity: quantity.into(), index, computed: computed.clone(), printed });
        }
    };
    let poly = decompose_multiplicity(n, &nu);
    for (i, printed) in printed_decomposition(n, &nu).into_iter().enumerate() {
        if let Some(p) = printed {
            push(if n % 2 == 1 { "gamma" } else { "tau" }, i, &poly.coeffs[i], p);
        }
    }
    for (i, printed) in printed_c_head(n, &nu).into_iter().enumerate() {
        if i <= j_max {
            push("c", i, &c[i], printed);
        }
    }
    let statement = c_coefficients_with(n, two_nu, j_max, TailForm::Statement)?;
    for i in (n as usize)..=j_max {
        push("c_statement_tail", i, &c[i], statement[i].clone());
    }
    if two_nu == 0 && (1..=4).contains(&n) {
        let u = nu_zero_u(n, j_max)?;
        for (i, ui) in u.into_iter().enumerate() {
            push("u_nu0", i, &c[i], ui);
        }
        // the printed b_j for n = 2, nu = 0 carry (1/4)^{j-i} where the general formula has 1
        if n == 2 {
            let printed = b_from_c(2, &rat(1, 4), &nu_zero_u(2, j_max)?);
            let computed = b_from_c(2, &trace_shift(2, 0), c);
            for (j, (pc, cc)) in printed.into_iter().zip(&computed).enumerate() {
                push("b_nu0_factor", j, cc, pc);
            }
        }
    }
    Ok(out)
}

/// Printed `gamma_p`/`tau_p` values where the source states one.
pub fn printed_decomposition(n: u32, nu: &Rational) -> Vec<Option<Rational>> {
    let nu2 = nu * nu;
    match n {
        1 => vec![Some(int(1))],
        2 => vec![Some(-nu2), Some(int(1))],
        // gamma_0 is printed as -2(1/4 + nu^2); gamma_1 is left without a value
        3 => vec![Some(int(-2) * (rat(1, 4) + &nu2)), None, Some(int(1))],
        4 => vec![
            Some(nu * (&nu2 - int(1))),
            Some(-&nu2 + int(2) * nu + int(1)),
            Some(-nu - int(2)),
            Some(int(1)),
        ],
        _ => Vec::new(),
    }
}

/// Printed head `c_0..c_{n-1}` for `n = 3, 4`.
pub fn printed_c_head(n: u32, nu: &Rational) -> Vec<Rational> {
    let nu2 = nu * nu;
    match n {
        3 => vec![int(1), -(rat(1, 4) + &nu2), rat(1, 2) * pow(&(rat(1, 4) - &nu2), 2)],
        4 => vec![
            int(1),
            -(nu + int(2)) / int(3),
            (-&nu2 + int(2) * nu + int(1)) / int(6),
            nu * (&nu2 - int(1)) / int(6),
        ],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::trace_direct;
    use proptest::prelude::*;

    #[test]
    fn gate_half_integer_nu() {
        assert_eq!(c_coefficients(2, 1, 4).unwrap_err(), Error::UnsupportedNu { two_nu: 1 });
        assert_eq!(b_coefficients(1, 3, 4).unwrap_err(), Error::UnsupportedNu { two_nu: 3 });
        assert_eq!(nu_zero_u(5, 3).unwrap_err(), Error::UnsupportedN(5));
    }

    #[test]
    fn n3_head_matches_printed() {
        for two_nu in [0u32, 2, 4, 6] {
            let nu = half(two_nu);
            let c = c_coefficients(3, two_nu, 2).unwrap();
            assert_eq!(c, printed_c_head(3, &nu));
        }
    }

    #[test]
    fn n4_head_examples() {
        assert_eq!(c_coefficients(4, 0, 3).unwrap(), printed_c_head(4, &int(0)));
        // at nu = 1 the product gives tau = [0, 4, -5, 1]
        assert_eq!(c_coefficients(4, 2, 3).unwrap(), vec![int(1), rat(-5, 3), rat(2, 3), int(0)]);
        assert_ne!(c_coefficients(4, 2, 3).unwrap(), printed_c_head(4, &int(1)));
    }

    #[test]
    fn head_recomputed_from_decomposition() {
        for n in 1..=6u32 {
            for two_nu in [0u32, 2, 4] {
                let poly = decompose_multiplicity(n, &half(two_nu));
                let c = c_coefficients(n, two_nu, n as usize + 3).unwrap();
                assert_eq!(c[0], int(1));
                for i in 0..n as usize {
                    let expected = factorial_rat((n as usize - i - 1) as u64) / factorial_rat(n as u64 - 1)
                        * &poly.coeffs[n as usize - i - 1];
                    assert_eq!(c[i], expected);
                }
            }
        }
    }

    #[test]
    fn b_examples() {
        for two_nu in [0u32, 2, 4] {
            assert_eq!(b_coefficients(1, two_nu, 0).unwrap(), vec![int(4)]);
        }
        assert_eq!(b_coefficients(1, 2, 1).unwrap()[1], rat(4, 3));
        assert_eq!(b_coefficients(2, 0, 0).unwrap(), vec![int(8)]);
    }

    #[test]
    fn n1_matches_closed_form() {
        // b_j = 4 pi [s^j/j! + sum_{i>=1} (-1)^i s^{j-i} B_{2i}(nu+1/2) / ((j-i)! i!)]
        for two_nu in [0u32, 2, 4, 6] {
            let nu = half(two_nu);
            let s = rat(1, 4) + &nu * &nu;
            let b = b_coefficients(1, two_nu, 10).unwrap();
            for (j, bj) in b.iter().enumerate() {
                let mut expected = pow(&s, j as u32) / factorial_rat(j as u64);
                for i in 1..=j {
                    expected += sign(i as i64) * pow(&s, (j - i) as u32) * bernoulli_polynomial(2 * i, &(&nu + rat(1, 2)))
                        / (factorial_rat((j - i) as u64) * factorial_rat(i as u64));
                }
                assert_eq!(*bj, int(4) * expected);
            }
        }
    }

    #[test]
    fn nu_zero_reductions() {
        for n in [1u32, 3] {
            assert_eq!(c_coefficients(n, 0, 12).unwrap(), nu_zero_u(n, 12).unwrap());
        }
        assert_eq!(nu_zero_u3_sum_form(12), nu_zero_u(3, 12).unwrap());
        assert_eq!(c_coefficients(4, 0, 3).unwrap(), nu_zero_u(4, 3).unwrap());
        // n = 2 and the n = 4 tail agree up to the sign of the Bernoulli tail
        let c2 = c_coefficients(2, 0, 12).unwrap();
        let u2 = nu_zero_u(2, 12).unwrap();
        assert_eq!(&c2[..2], &u2[..2]);
        for i in 2..=12 {
            assert_eq!(c2[i], -u2[i].clone());
        }
        let statement = c_coefficients_with(2, 0, 12, TailForm::Statement).unwrap();
        assert_eq!(statement, u2);
    }

    #[test]
    fn odd_statement_form_coincides_for_n1() {
        for two_nu in [0u32, 2, 4] {
            assert_eq!(
                c_coefficients_with(1, two_nu, 10, TailForm::Statement).unwrap(),
                c_coefficients(1, two_nu, 10).unwrap()
            );
        }
        assert_ne!(
            c_coefficients_with(3, 0, 6, TailForm::Statement).unwrap(),
            c_coefficients(3, 0, 6).unwrap()
        );
    }

    #[test]
    fn leading_weyl_term() {
        for n in 1..=4u32 {
            for t in [0.5, 0.1] {
                let v = asymptotic_trace(n, 0, t, 0).unwrap();
                let expected = 1.0 / (to_f64(&factorial_rat(n as u64)) * t.powi(n as i32));
                assert!((v - expected).abs() < 1e-13 * expected);
            }
        }
        assert!(matches!(asymptotic_trace(1, 0, 0.0, 3), Err(Error::NonPositiveTime(_))));
    }

    #[test]
    fn asymptotic_tracks_direct_sum_at_moderate_time() {
        // f64 resolves the J = 4 remainder at these times
        for (n, two_nu) in [(1u32, 0u32), (1, 2), (2, 0), (2, 2), (3, 0)] {
            let mut scaled = Vec::new();
            for t in [0.2, 0.1] {
                let direct = trace_direct(n, two_nu, t, 1e-14).unwrap();
                let asym = asymptotic_trace(n, two_nu, t, 4).unwrap();
                let e = (direct - asym).abs() * (4.0 * std::f64::consts::PI * t).powi(n as i32);
                scaled.push(e / t.powi(5));
            }
            let ratio = scaled[0] / scaled[1];
            assert!(ratio > 0.25 && ratio < 4.0, "n={n} 2nu={two_nu}: {scaled:?}");
        }
    }

    #[test]
    fn table_serializes_exactly() {
        let table = HeatCoeffTable::compute(3, 0, 6).unwrap();
        let json = serde_json::to_string(&table).unwrap();
        assert!(json.starts_with("{\"n\":3,\"twoNu\":0,\"J\":6,\"c\":[\"1\",\"-1/4\",\"1/32\""));
        let back: HeatCoeffTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        let t2 = HeatCoeffTable::compute(2, 0, 0).unwrap();
        assert_eq!(t2.b, vec![BEntry { factor: int(8), pi_power: 2 }]);
    }

    #[test]
    fn diffs_report_known_discrepancies() {
        let t4 = HeatCoeffTable::compute(4, 2, 6).unwrap();
        assert!(t4.paper_reported_diffs.iter().any(|d| d.quantity == "tau"));
        assert!(t4.paper_reported_diffs.iter().any(|d| d.quantity == "c" && d.index == 1));
        let t3 = HeatCoeffTable::compute(3, 0, 8).unwrap();
        assert!(t3.paper_reported_diffs.iter().all(|d| d.quantity != "u_nu0" && d.quantity != "c"));
        assert!(t3.paper_reported_diffs.iter().any(|d| d.quantity == "gamma" && d.index == 0));
        let t2 = HeatCoeffTable::compute(2, 0, 5).unwrap();
        assert!(t2.paper_reported_diffs.iter().any(|d| d.quantity == "b_nu0_factor"));
    }

    proptest! {
        #[test]
        fn b_relation_holds(n in 1u32..5, nu in 0u32..3, j in 0usize..8) {
            let c = c_coefficients(n, 2 * nu, j).unwrap();
            let b = b_coefficients(n, 2 * nu, j).unwrap();
            let s = trace_shift(n, 2 * nu);
            let mut expected = int(0);
            for i in 0..=j {
                expected += pow(&s, (j - i) as u32) / factorial_rat((j - i) as u64) * &c[i];
            }
            prop_assert_eq!(b[j].clone(), expected * pow(&int(4), n) / factorial_rat(n as u64));
        }
    }
}
