//! Quasi-intelligent states seeded by a two-dimensional Gaussian,
//! `Ψ ∝ exp(N sinθ [(1+iε) cosφ + iη sinφ])`, projected numerically.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::specfun::{gauss_legendre, LegendreTable};

use super::{check_tail_tol, cutoff, SphericalExpansion, StatesError, L_MAX_CAP};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSeedSpec {
    pub n: f64,
    pub eta: f64,
    pub epsilon: f64,
}

impl GaussianSeedSpec {
    pub fn new(n: f64, eta: f64, epsilon: f64) -> Result<Self, StatesError> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(StatesError::Domain(format!("N must be positive, got {n}")));
        }
        if !eta.is_finite() || !epsilon.is_finite() {
            return Err(StatesError::Domain("eta and epsilon must be finite".into()));
        }
        Ok(GaussianSeedSpec { n, eta, epsilon })
    }
}

/// Result of the projection with its convergence diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedProjection {
    pub expansion: SphericalExpansion,
    /// Band limit used for the quadrature grid.
    pub band_limit: usize,
    /// `|1 − Σ|b|²|` before renormalization; the analytic norm is 1.
    pub norm_defect: f64,
    /// Probability in the highest projected shell.
    pub last_shell: f64,
}

/// Projects onto `Y_l^m` and renormalizes.
pub fn gaussian_seed_wp(
    spec: GaussianSeedSpec,
    tail_tol: f64,
) -> Result<SphericalExpansion, StatesError> {
    Ok(gaussian_seed_projection(spec, tail_tol)?.expansion)
}

/// Projection on a `(2L+2)` Gauss–Legendre × `(4L+4)` uniform-φ grid, growing `L`
/// until both the norm defect and the last-shell weight fall below `tail_tol`.
pub fn gaussian_seed_projection(
    spec: GaussianSeedSpec,
    tail_tol: f64,
) -> Result<SeedProjection, StatesError> {
    let spec = GaussianSeedSpec::new(spec.n, spec.eta, spec.epsilon)?;
    check_tail_tol(tail_tol)?;
    let n = spec.n;
    let spread = (spec.epsilon.powi(2) + spec.eta.powi(2)).sqrt();
    let mut band =
        (n * (1.0 + spread) + (2.0 * n * (1.0 / tail_tol).ln()).sqrt() + 10.0).ceil() as usize;
    band = band.min(L_MAX_CAP);
    loop {
        let b = project(spec, band);
        let weights = b.l_weights();
        let total: f64 = weights.iter().sum();
        let defect = (1.0 - total).abs();
        let last_shell = *weights.last().unwrap();
        if defect < tail_tol && last_shell < tail_tol {
            let l_max = cutoff(&weights, 0.0, tail_tol).unwrap_or(band);
            let mut expansion = b.truncated(l_max);
            expansion.normalize()?;
            return Ok(SeedProjection {
                expansion,
                band_limit: band,
                norm_defect: defect,
                last_shell,
            });
        }
        if band >= L_MAX_CAP {
            return Err(StatesError::Quadrature {
                defect,
                last_shell,
                tail_tol,
            });
        }
        band = (band + band / 2).min(L_MAX_CAP);
    }
}

fn project(spec: GaussianSeedSpec, band: usize) -> SphericalExpansion {
    let GaussianSeedSpec { n, eta, epsilon } = spec;
    let (x, w) = gauss_legendre(2 * band + 2);
    let n_phi = 4 * band + 4;
    let h = TAU / n_phi as f64;
    // ln C with C² = N/(2π sinh 2N)
    let ln_sinh = if 2.0 * n < 20.0 {
        (2.0 * n).sinh().ln()
    } else {
        2.0 * n - std::f64::consts::LN_2 + (-(-4.0 * n).exp()).ln_1p()
    };
    let ln_c = 0.5 * (n.ln() - (2.0 * PI).ln() - ln_sinh);
    let trig: Vec<(f64, f64)> = (0..n_phi).map(|k| (k as f64 * h).sin_cos()).collect();
    let b_max = band as i64;
    let mut out = SphericalExpansion::zeros(band);
    let mut table = LegendreTable::new(band, 0.0);
    for (xi, wi) in x.iter().zip(&w) {
        let theta = xi.acos();
        let st = theta.sin();
        let samples: Vec<Complex64> = trig
            .iter()
            .map(|&(sp, cp)| {
                let re = ln_c + n * st * cp;
                let im = n * st * (epsilon * cp + eta * sp);
                Complex64::from_polar(re.exp(), im)
            })
            .collect();
        table.fill(theta);
        for m in -b_max..=b_max {
            // F_m = ∫ f e^{−imφ} dφ
            let mut fm = Complex64::new(0.0, 0.0);
            for (k, s) in samples.iter().enumerate() {
                let km = (k as i64 * m).rem_euclid(n_phi as i64) as usize;
                let (sp, cp) = trig[km];
                fm += s * Complex64::new(cp, -sp);
            }
            fm *= h * wi;
            for l in m.unsigned_abs() as usize..=band {
                let idx_val = out.get(l, m) + fm * table.get(l, m);
                out.set(l, m, idx_val);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{exponential_wp, ExponentialSpec};

    #[test]
    fn epsilon_zero_reproduces_exponential() {
        for &(n, eta) in &[(3.0, 0.5), (6.0, 1.0), (5.0, 0.0)] {
            let a = gaussian_seed_wp(GaussianSeedSpec::new(n, eta, 0.0).unwrap(), 1e-13).unwrap();
            let b = exponential_wp(ExponentialSpec::new(n, eta).unwrap(), 1e-13).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-8, "{}", a.max_abs_diff(&b));
        }
    }

    #[test]
    fn annihilated_by_generalized_operator() {
        let (n, eta, eps) = (6.0, 0.5, 0.5);
        let s = gaussian_seed_wp(GaussianSeedSpec::new(n, eta, eps).unwrap(), 1e-13).unwrap();
        // (1+iε)L_x + iηL_y = ((1+iε+η) L_+ + (1+iε−η) L_-)/2
        let r = s.apply_lplus().combine(
            Complex64::new(0.5 * (1.0 + eta), 0.5 * eps),
            &s.apply_lminus(),
            Complex64::new(0.5 * (1.0 - eta), 0.5 * eps),
        );
        assert!(r.norm_sqr().sqrt() < 1e-6);
    }
}
