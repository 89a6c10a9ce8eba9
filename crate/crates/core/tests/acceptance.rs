//! Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use projheat::exactnum::{
    bernoulli_number, bernoulli_polynomial, half, int, power_sum, power_sum_from_one, rat, theta2_series_coefficient,
    Rational,
};
use projheat::extended::remainder_table;
use projheat::heat::{
    heat_kernel_integral, heat_kernel_integral_nu0, heat_kernel_series, theta_asymptotic, theta_deriv,
    theta_first_omitted, QuadratureConfig, Theta, ThetaExpansion,
};
use projheat::heatcoeff::{c_coefficients, nu_zero_u, printed_diffs, printed_c_head};
use projheat::kernels::{
    fs_distance, kernel_diagonal_volume_check, monopole_basis, reproducing_kernel, zaremba_sum_n1, ProjPoint,
};
use projheat::quadrature::PlaneGrid;
use projheat::spectrum::{
    decompose_multiplicity, dimension_gamma_form, dimension_product_form, dimension_sum_form, SpectralPoint,
};

fn report(id: u32, ok: bool, summary: &str, failures: &[String]) {
    println!("criterion {id}: {} {summary}", if ok { "PASS" } else { "FAIL" });
    for f in failures.iter().take(12) {
        println!("    {f}");
    }
    if failures.len() > 12 {
        println!("    ... {} more", failures.len() - 12);
    }
    assert!(ok, "criterion {id} failed: {summary}");
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn criterion_1_dimension_triple_agreement() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=6u32 {
        for two_nu in 0..=8u32 {
            let poly = decompose_multiplicity(n, &half(two_nu));
            for m in 0..=30u64 {
                let pt = SpectralPoint::new(n, two_nu, m).unwrap();
                let g = dimension_gamma_form(&pt).unwrap();
                let p = dimension_product_form(&pt).unwrap();
                let s = dimension_sum_form(&pt, &poly).unwrap();
                checked += 1;
                if g != p || g != s {
                    failures.push(format!("n={n} 2nu={two_nu} m={m}: gamma {g}, product {p}, sum {s}"));
                }
            }
        }
    }
    report(1, failures.is_empty(), &format!("{checked} exact triples"), &failures);
}

#[test]
fn criterion_2_printed_test_vectors() {
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    for two_nu in 0..=8u32 {
        let nu = half(two_nu);
        if decompose_multiplicity(1, &nu).coeffs != vec![int(1)] {
            failures.push(format!("gamma^(nu,1) at nu={nu}"));
        }
        if decompose_multiplicity(2, &nu).coeffs != vec![-(&nu * &nu), int(1)] {
            failures.push(format!("tau^(nu,2) at nu={nu}"));
        }
    }
    for nu in 0..=4u32 {
        let computed = c_coefficients(3, 2 * nu, 2).unwrap();
        if computed != printed_c_head(3, &int(nu as i64)) {
            failures.push(format!("c^(nu,3) head at nu={nu}: {computed:?}"));
        }
    }
    for n in 1..=3u32 {
        let computed = c_coefficients(n, 0, 12).unwrap();
        let printed = nu_zero_u(n, 12).unwrap();
        for i in 0..=12 {
            if computed[i] != printed[i] {
                failures.push(format!("u^{n}_{i}: computed {} printed {}", computed[i], printed[i]));
            }
        }
    }
    let c4 = c_coefficients(4, 0, 3).unwrap();
    let u4 = nu_zero_u(4, 3).unwrap();
    if c4 != u4 {
        failures.push(format!("u^4 head: computed {c4:?} printed {u4:?}"));
    }
    for nu in 1..=3u32 {
        let c = c_coefficients(4, 2 * nu, 3).unwrap();
        for d in printed_diffs(4, 2 * nu, 3, &c).unwrap() {
            if d.quantity == "tau" || d.quantity == "c" {
                warnings.push(format!(
                    "WARN n=4 nu={nu} {}_{}: computed {} printed {}",
                    d.quantity, d.index, d.computed, d.printed
                ));
            }
        }
    }
    for w in &warnings {
        println!("    {w}");
    }
    report(2, failures.is_empty(), &format!("{} known n=4 discrepancies reported as WARN", warnings.len()), &failures);
}

#[test]
fn criterion_3_zaremba_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for two_nu in 0..=4u32 {
        for m in 0..=3u64 {
            for _ in 0..20 {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let w = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let closed = reproducing_kernel(1, two_nu, m, &z.into(), &w.into()).unwrap().value;
                let sum = zaremba_sum_n1(two_nu, m, z, w);
                let rel = (sum - closed).norm() / (1.0 + closed.norm());
                worst = worst.max(rel);
                if rel > 1e-10 {
                    failures.push(format!("2nu={two_nu} m={m} z={z} w={w}: {rel:e}"));
                }
            }
        }
    }
    report(3, failures.is_empty(), &format!("max scaled deviation {worst:.2e} (tol 1e-10)"), &failures);
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (ProjPoint, ProjPoint) {
    loop {
        let mut pt = || ProjPoint::new((0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).unwrap();
        let z = pt();
        let w = pt();
        if fs_distance(&z, &w).unwrap() < 1.2 {
            return (z, w);
        }
    }
}

#[test]
fn criterion_4_heat_kernel_representations() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = QuadratureConfig::default();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 1..=2u32 {
        for two_nu in 0..=2u32 {
            for t in [0.3, 0.5, 1.0] {
                for _ in 0..5 {
                    let (z, w) = random_pair(&mut rng, n as usize);
                    let s = heat_kernel_series(n, two_nu, t, &z, &w, 1e-14).unwrap().value;
                    let i = heat_kernel_integral(n, two_nu, t, &z, &w, &cfg).unwrap().value;
                    let rel = (s - i).norm() / (1.0 + s.norm());
                    worst = worst.max(rel);
                    if rel > 1e-6 {
                        failures.push(format!("n={n} 2nu={two_nu} t={t}: series {s} integral {i}"));
                    }
                    if two_nu == 0 {
                        let classical = heat_kernel_integral_nu0(n, t, &z, &w, &cfg).unwrap().value;
                        let rel0 = (s - classical).norm() / (1.0 + s.norm());
                        worst = worst.max(rel0);
                        if rel0 > 1e-6 {
                            failures.push(format!("nu=0 classical form n={n} t={t}: {classical} vs {s}"));
                        }
                    }
                }
            }
        }
    }
    report(4, failures.is_empty(), &format!("max relative difference {worst:.2e} (tol 1e-6)"), &failures);
}

#[test]
fn criterion_5_trace_asymptotics() {
    let times = [0.1, 0.05, 0.02, 0.01];
    let mut failures = Vec::new();
    let mut worst: f64 = 1.0;
    for (n, nu) in [(1u32, 0u32), (1, 1), (2, 0), (2, 1), (3, 0)] {
        for j in [4usize, 6, 8] {
            let rows = remainder_table(n, 2 * nu, j, &times).unwrap();
            let scaled: Vec<f64> = rows.iter().map(|r| r.scaled).collect();
            for pair in scaled.windows(2) {
                let ratio = (pair[0] / pair[1]).max(pair[1] / pair[0]);
                worst = worst.max(ratio);
                if !(ratio < 4.0) {
                    failures.push(format!("n={n} nu={nu} J={j}: scaled errors {scaled:?}"));
                    break;
                }
            }
        }
    }
    report(5, failures.is_empty(), &format!("largest successive ratio {worst:.3} (limit 4)"), &failures);
}

/// Residual against a truncation must lie within a factor two of the first omitted term.
fn within_first_omitted(residual: f64, omitted: f64) -> bool {
    let r = residual / omitted;
    r.is_finite() && (0.5..=2.0).contains(&r)
}

#[test]
fn criterion_6_theta_asymptotics() {
    let t = 0.05;
    let s_max = 2;
    let mut failures = Vec::new();
    for p in 0..=3u32 {
        let v = theta_deriv(Theta::Two, p, t, 1e-14).unwrap();
        let residual = v - theta_asymptotic(ThetaExpansion::Theta2, p, t, s_max);
        let omitted = theta_first_omitted(ThetaExpansion::Theta2, p, t, s_max);
        if !within_first_omitted(residual, omitted) {
            failures.push(format!("theta2 p={p}: residual {residual:e}, first omitted {omitted:e}"));
        }
    }
    for l in 0..=3u32 {
        let v = theta_deriv(Theta::Three, l, t, 1e-14).unwrap();
        let residual = v - theta_asymptotic(ThetaExpansion::Theta3Printed, l, t, s_max);
        let omitted = theta_first_omitted(ThetaExpansion::Theta3Printed, l, t, s_max);
        if !within_first_omitted(residual, omitted) {
            let fixed = v - theta_asymptotic(ThetaExpansion::Theta3, l, t, s_max);
            let fixed_omitted = theta_first_omitted(ThetaExpansion::Theta3, l, t, s_max);
            failures.push(format!(
                "theta3 l={l}: residual {residual:e}, first omitted {omitted:e} (sign-corrected sum: residual {fixed:e}, omitted {fixed_omitted:e})"
            ));
        }
    }
    report(6, failures.is_empty(), "t = 0.05, terms s <= 2, residual within [0.5, 2] x first omitted term", &failures);
}

#[test]
fn criterion_7_bernoulli_identities_and_volume() {
    let mut failures = Vec::new();
    for d in 0..=20usize {
        let lhs = bernoulli_polynomial(2 * (d + 1), &rat(1, 2));
        let sign = if (d + 1) % 2 == 0 { int(1) } else { int(-1) };
        let rhs = sign * int(d as i64 + 1) * theta2_series_coefficient(d);
        if lhs != rhs {
            failures.push(format!("B_{}(1/2) identity at d={d}", 2 * (d + 1)));
        }
    }
    for q in 1..=20u32 {
        for m in 0..=20u64 {
            for a in [rat(1, 2), int(0), rat(3, 2), int(2)] {
                let mut brute = Rational::zero();
                for k in 0..=m {
                    brute += projheat::exactnum::pow(&(int(k as i64) + &a), q);
                }
                let formula = (bernoulli_polynomial(q as usize + 1, &(int(m as i64 + 1) + &a))
                    - bernoulli_polynomial(q as usize + 1, &a))
                    / int(q as i64 + 1);
                if brute != formula || power_sum(m, q, &a) != formula {
                    failures.push(format!("shifted power sum q={q} m={m} a={a}"));
                }
            }
            let ones = (bernoulli_polynomial(q as usize + 1, &int(m as i64 + 1)) - bernoulli_number(q as usize + 1))
                / int(q as i64 + 1);
            let brute: Rational = (1..=m).map(|k| projheat::exactnum::pow(&int(k as i64), q)).sum();
            if brute != ones || power_sum_from_one(m, q) != ones {
                failures.push(format!("power sum from one q={q} m={m}"));
            }
        }
    }
    for n in 1..=4u32 {
        for two_nu in 0..=4u32 {
            for m in 0..=10u64 {
                let dim: BigInt = dimension_gamma_form(&SpectralPoint::new(n, two_nu, m).unwrap()).unwrap();
                if kernel_diagonal_volume_check(n, two_nu, m) != Rational::from(dim) {
                    failures.push(format!("diagonal volume n={n} 2nu={two_nu} m={m}"));
                }
            }
        }
    }
    report(7, failures.is_empty(), "half-argument identity, power sums, diagonal-volume check", &failures);
}

#[test]
fn criterion_8_monopole_normalization() {
    let grid = PlaneGrid::default();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for two_nu in 0..=3u32 {
        for m in 0..=2u64 {
            for k in -(m as i64)..=(two_nu as i64 + m as i64) {
                // orthonormal for the normalized measure dmu_1 / pi
                let norm = grid.integrate(|u| c(monopole_basis(two_nu, m, k, u).unwrap().norm_sqr(), 0.0)).re / PI;
                worst = worst.max((norm - 1.0).abs());
                if (norm - 1.0).abs() > 1e-8 {
                    failures.push(format!("2nu={two_nu} m={m} k={k}: norm {norm}"));
                }
            }
        }
    }
    report(8, failures.is_empty(), &format!("max |norm - 1| = {worst:.2e} (tol 1e-8)"), &failures);
}
