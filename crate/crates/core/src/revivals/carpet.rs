use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::observables::{Frame, Spectrum};
use crate::specfun::{AngularPoint, LegendreTable};
use crate::states::SphericalExpansion;

use super::time::TimePoint;
use super::RevivalError;

/// Density over `(t, x)`, row-major with one row per time.
#[derive(Debug, Clone, PartialEq)]
pub struct Carpet {
    /// Times in units of `T_rev`.
    pub times: Vec<f64>,
    /// Angle along the row.
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
}

impl Carpet {
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.axis.len();
        &self.values[i * n..(i + 1) * n]
    }
}

fn check_nodes(n: usize) -> Result<(), RevivalError> {
    if n < 2 {
        return Err(RevivalError::Domain(format!(
            "carpet needs at least 2 nodes, got {n}"
        )));
    }
    Ok(())
}

/// `|Ψ(θ_fixed, φ, t)|²` for `φ_k = 2πk/(n_phi−1)`.
pub fn carpet(
    state: &SphericalExpansion,
    theta_fixed: f64,
    times: &[TimePoint],
    n_phi: usize,
    spectrum: Spectrum,
) -> Result<Carpet, RevivalError> {
    check_nodes(n_phi)?;
    if !(0.0..=PI).contains(&theta_fixed) {
        return Err(RevivalError::Domain(format!(
            "theta must lie in [0, pi], got {theta_fixed}"
        )));
    }
    let l_max = state.l_max();
    let lm = l_max as i64;
    let table = LegendreTable::new(l_max, theta_fixed);
    let axis: Vec<f64> = (0..n_phi)
        .map(|k| TAU * k as f64 / (n_phi - 1) as f64)
        .collect();
    let basis: Vec<Vec<Complex64>> = axis
        .iter()
        .map(|&phi| {
            (-lm..=lm)
                .map(|m| Complex64::from_polar(1.0, m as f64 * phi))
                .collect()
        })
        .collect();
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|t| {
            let phases: Vec<Complex64> = (0..=l_max).map(|l| spectrum.phase(t, l)).collect();
            let fm: Vec<Complex64> = (-lm..=lm)
                .map(|m| {
                    (m.unsigned_abs() as usize..=l_max)
                        .map(|l| state.get(l, m) * phases[l] * table.get(l, m))
                        .sum()
                })
                .collect();
            basis
                .iter()
                .map(|e| {
                    fm.iter()
                        .zip(e)
                        .map(|(f, e)| f * e)
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .collect()
        })
        .collect();
    Ok(Carpet {
        times: times.iter().map(|t| t.to_f64()).collect(),
        axis,
        values: rows.concat(),
    })
}

/// Density along the polar angle of a rotated frame (at azimuth zero) over time,
/// for packets that stay axially symmetric about that axis. With `weighted` the
/// values are `2π sin θ′ |Ψ|²`.
pub fn axis_carpet(
    state: &SphericalExpansion,
    frame: Frame,
    times: &[TimePoint],
    n_theta: usize,
    spectrum: Spectrum,
    weighted: bool,
) -> Result<Carpet, RevivalError> {
    check_nodes(n_theta)?;
    let to_lab = |a: f64| -> AngularPoint {
        let (s, c) = a.sin_cos();
        match frame {
            Frame::XAxis => AngularPoint::from_cartesian(c, s, 0.0),
            Frame::YAxis => AngularPoint::from_cartesian(0.0, c, s),
            _ => AngularPoint::from_cartesian(s, 0.0, c),
        }
    };
    if let Frame::EulerAlphaGamma { .. } = frame {
        return Err(RevivalError::Domain(
            "axis carpets need a frame on the sphere".into(),
        ));
    }
    let l_max = state.l_max();
    let axis: Vec<f64> = (0..n_theta)
        .map(|j| PI * j as f64 / (n_theta - 1) as f64)
        .collect();
    // Y_l^m at every node, stored in the state's (l, m) order
    let basis: Vec<Vec<Complex64>> = axis
        .iter()
        .map(|&a| {
            let p = to_lab(a);
            let table = LegendreTable::new(l_max, p.theta());
            let mut y = Vec::with_capacity((l_max + 1) * (l_max + 1));
            for l in 0..=l_max {
                for m in -(l as i64)..=l as i64 {
                    y.push(table.get(l, m) * Complex64::from_polar(1.0, m as f64 * p.phi()));
                }
            }
            y
        })
        .collect();
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|t| {
            let phases: Vec<Complex64> = (0..=l_max).map(|l| spectrum.phase(t, l)).collect();
            let mut c = Vec::with_capacity(state.coeffs().len());
            for l in 0..=l_max {
                for m in -(l as i64)..=l as i64 {
                    c.push(state.get(l, m) * phases[l]);
                }
            }
            basis
                .iter()
                .zip(&axis)
                .map(|(y, a)| {
                    let v = c
                        .iter()
                        .zip(y)
                        .map(|(c, y)| c * y)
                        .sum::<Complex64>()
                        .norm_sqr();
                    if weighted {
                        TAU * a.sin() * v
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    Ok(Carpet {
        times: times.iter().map(|t| t.to_f64()).collect(),
        axis,
        values: rows.concat(),
    })
}
