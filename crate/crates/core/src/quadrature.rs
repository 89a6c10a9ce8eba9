//! Gauss–Legendre rules and the `C` integration grid used by the `n = 1` checks.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared rule of order `n`.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard.entry(n).or_insert_with(|| Arc::new(GaussLegendre::new(n))).clone()
    }

    /// `int_a^b f`, summed in node order.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Mapped points and weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| (mid + half * x, w * half)).collect()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product grid for `int_C f dmu_1`, `dmu_1 = (1+|u|^2)^-2 dA(u)`.
///
/// With `u = tan(theta) e^{i phi}` the measure becomes `sin(theta) cos(theta) dtheta dphi`;
/// Gauss–Legendre in `theta` on `[0, pi/2]`, trapezoid in `phi`.
#[derive(Debug, Clone)]
pub struct PlaneGrid {
    pub points: Vec<(Complex64, f64)>,
}

impl PlaneGrid {
    pub fn new(radial: usize, angular: usize) -> Self {
        let gl = GaussLegendre::cached(radial);
        let dphi = 2.0 * PI / angular as f64;
        let mut points = Vec::with_capacity(radial * angular);
        for (theta, w) in gl.mapped(0.0, PI / 2.0) {
            let rho = theta.tan();
            let radial_weight = w * theta.sin() * theta.cos() * dphi;
            for j in 0..angular {
                let phi = j as f64 * dphi;
                points.push((Complex64::from_polar(rho, phi), radial_weight));
            }
        }
        Self { points }
    }

    /// Chunked parallel sum; chunk partials are combined in order, so results are reproducible.
    pub fn integrate<F: Fn(Complex64) -> Complex64 + Sync>(&self, f: F) -> Complex64 {
        let partials: Vec<Complex64> = self
            .points
            .par_chunks(2048)
            .map(|chunk| chunk.iter().fold(Complex64::new(0.0, 0.0), |acc, (u, w)| acc + f(*u) * *w))
            .collect();
        partials.into_iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
    }
}

impl Default for PlaneGrid {
    fn default() -> Self {
        Self::new(200, 200)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 64] {
            let gl = GaussLegendre::new(n);
            assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for d in 0..(2 * n) {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                let got = gl.integrate(-1.0, 1.0, |x| x.powi(d as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn high_order_rules() {
        let gl = GaussLegendre::cached(1024);
        assert!(gl.nodes.windows(2).all(|w| w[0] < w[1]));
        let v = gl.integrate(0.0, PI, f64::sin);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn plane_measure_volume() {
        let grid = PlaneGrid::new(64, 32);
        let vol = grid.integrate(|_| Complex64::new(1.0, 0.0));
        assert!((vol.re - PI).abs() < 1e-12);
        // |u|^2/(1+|u|^2) = sin^2(theta), so the integral is 2 pi int sin^3 cos = pi/2
        let m = grid.integrate(|u| Complex64::new(u.norm_sqr() / (1.0 + u.norm_sqr()), 0.0));
        assert!((m.re - PI / 2.0).abs() < 1e-12);
    }
}
