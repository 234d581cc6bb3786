//! Spherical harmonics in the Condon–Shortley convention.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::SpecfunError;

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularPoint {
    theta: f64,
    phi: f64,
}

impl AngularPoint {
    /// `theta` must lie in `[0, pi]`; `phi` is wrapped into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self, SpecfunError> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(SpecfunError::Domain(format!(
                "angular point out of range: theta={theta}, phi={phi}"
            )));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(AngularPoint { theta, phi })
    }

    /// Direction of a Cartesian vector (need not be normalized).
    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Self {
        let rho = x.hypot(y);
        let theta = rho.atan2(z);
        let phi = y.atan2(x).rem_euclid(TAU);
        AngularPoint {
            theta: theta.clamp(0.0, PI),
            phi: if phi >= TAU { 0.0 } else { phi },
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// `cos θ′ = sin θ cos φ`: cosine of the angle measured from the x axis.
    pub fn cos_theta_x(&self) -> f64 {
        self.theta.sin() * self.phi.cos()
    }

    /// `cos θ″ = sin θ sin φ`: cosine of the angle measured from the y axis.
    pub fn cos_theta_y(&self) -> f64 {
        self.theta.sin() * self.phi.sin()
    }
}

/// Normalized associated Legendre values `P̄_l^m(cos θ)` for `0 <= m <= l <= l_max`,
/// including the Condon–Shortley phase, such that
/// `Y_l^m(θ, φ) = P̄_l^m(cos θ) e^{imφ}`.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    l_max: usize,
    data: Vec<f64>,
}

impl LegendreTable {
    pub fn new(l_max: usize, theta: f64) -> Self {
        let mut table = LegendreTable {
            l_max,
            data: vec![0.0; (l_max + 1) * (l_max + 2) / 2],
        };
        table.fill(theta);
        table
    }

    #[inline]
    fn index(l: usize, m: usize) -> usize {
        l * (l + 1) / 2 + m
    }

    /// Recompute for another polar angle without reallocating.
    pub fn fill(&mut self, theta: f64) {
        let (s, x) = theta.sin_cos();
        let l_max = self.l_max;
        let data = &mut self.data;
        let mut pmm = 0.5 / PI.sqrt();
        for m in 0..=l_max {
            if m > 0 {
                pmm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
            }
            data[Self::index(m, m)] = pmm;
            if m == l_max {
                break;
            }
            let mut p_prev = pmm;
            let mut p_curr = ((2 * m + 3) as f64).sqrt() * x * pmm;
            data[Self::index(m + 1, m)] = p_curr;
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf)
                    / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                    .sqrt();
                let p_next = a * (x * p_curr - b * p_prev);
                data[Self::index(l, m)] = p_next;
                p_prev = p_curr;
                p_curr = p_next;
            }
        }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// `P̄_l^{|m|}` with the sign for negative `m` applied, so that
    /// `Y_l^m = get(l, m) e^{imφ}` holds for either sign of `m`.
    #[inline]
    pub fn get(&self, l: usize, m: i64) -> f64 {
        let am = m.unsigned_abs() as usize;
        let v = self.data[Self::index(l, am)];
        if m < 0 && am % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// `Y_l^m(θ, φ)`.
pub fn ylm(l: usize, m: i64, point: AngularPoint) -> Result<Complex64, SpecfunError> {
    if m.unsigned_abs() as usize > l {
        return Err(SpecfunError::Domain(format!(
            "|m| > l in Y_l^m: l={l}, m={m}"
        )));
    }
    let table = LegendreTable::new(l, point.theta);
    Ok(table.get(l, m) * Complex64::from_polar(1.0, m as f64 * point.phi))
}
