//! One-dimensional quadrature rules used for sphere integrals.

use std::f64::consts::{PI, TAU};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Clenshaw–Curtis weights for `∫_0^π f(θ) sin θ dθ` on the uniform grid
/// `θ_j = jπ/(n−1)`, `j = 0..n`, poles included.
pub fn clenshaw_curtis(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "Clenshaw–Curtis needs at least two nodes");
    let big_n = n - 1;
    let nf = big_n as f64;
    let thetas: Vec<f64> = (0..n).map(|j| PI * j as f64 / nf).collect();
    let mut w = vec![0.0; n];
    if big_n == 1 {
        return (thetas, vec![1.0, 1.0]);
    }
    let half = big_n / 2;
    for (j, wj) in w.iter_mut().enumerate() {
        let t = thetas[j];
        if j == 0 || j == big_n {
            *wj = if big_n % 2 == 0 {
                1.0 / (nf * nf - 1.0)
            } else {
                1.0 / (nf * nf)
            };
            continue;
        }
        let mut v = 1.0;
        if big_n % 2 == 0 {
            for k in 1..half {
                let kf = k as f64;
                v -= 2.0 * (2.0 * kf * t).cos() / (4.0 * kf * kf - 1.0);
            }
            v -= (nf * t).cos() / (nf * nf - 1.0);
        } else {
            for k in 1..=half {
                let kf = k as f64;
                v -= 2.0 * (2.0 * kf * t).cos() / (4.0 * kf * kf - 1.0);
            }
        }
        *wj = 2.0 * v / nf;
    }
    (thetas, w)
}

/// Uniform periodic nodes on `[0, 2π)` with trapezoid weights.
pub fn uniform_periodic(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = TAU / n as f64;
    ((0..n).map(|k| k as f64 * h).collect(), vec![h; n])
}
