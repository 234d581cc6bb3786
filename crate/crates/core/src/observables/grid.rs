use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::specfun::{clenshaw_curtis, AngularPoint, LegendreTable};
use crate::states::{sum_ring, SphericalExpansion};

use super::ObservablesError;

/// Coordinates of the grid nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    /// Polar axis `Oz`.
    Lab,
    /// Polar axis `Ox`: the first coordinate is θ′ with `cos θ′ = sin θ cos φ`.
    XAxis,
    /// Polar axis `Oy`: the first coordinate is θ″ with `cos θ″ = sin θ sin φ`.
    YAxis,
    /// Euler angles `(α, γ)` of a symmetric top at fixed β.
    EulerAlphaGamma { beta: f64 },
}

impl Frame {
    pub fn tag(&self) -> &'static str {
        match self {
            Frame::Lab => "lab",
            Frame::XAxis => "theta_prime",
            Frame::YAxis => "theta_double_prime",
            Frame::EulerAlphaGamma { .. } => "euler_alpha_gamma",
        }
    }

    pub fn axis_names(&self) -> (&'static str, &'static str) {
        match self {
            Frame::Lab => ("theta", "phi"),
            Frame::XAxis => ("theta_prime", "phi_prime"),
            Frame::YAxis => ("theta_double_prime", "phi_double_prime"),
            Frame::EulerAlphaGamma { .. } => ("alpha", "gamma"),
        }
    }

    /// Lab-frame point for polar coordinates `(a, b)` in this frame.
    fn to_lab(self, a: f64, b: f64) -> AngularPoint {
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        let (u, v, w) = (sa * cb, sa * sb, ca);
        match self {
            Frame::XAxis => AngularPoint::from_cartesian(w, u, v),
            Frame::YAxis => AngularPoint::from_cartesian(v, w, u),
            _ => AngularPoint::from_cartesian(u, v, w),
        }
    }
}

/// Node counts; both axes include their endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_theta: 181,
            n_phi: 361,
        }
    }
}

impl GridSpec {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self, ObservablesError> {
        if n_theta < 2 || n_phi < 2 {
            return Err(ObservablesError::Domain(format!(
                "grid needs at least 2 nodes per axis, got {n_theta}x{n_phi}"
            )));
        }
        Ok(GridSpec { n_theta, n_phi })
    }

    /// `θ_j = jπ/(n−1)`.
    pub fn theta_nodes(&self) -> Vec<f64> {
        (0..self.n_theta)
            .map(|j| PI * j as f64 / (self.n_theta - 1) as f64)
            .collect()
    }

    /// `φ_k = 2πk/(n−1)`, so the last node repeats the first.
    pub fn phi_nodes(&self) -> Vec<f64> {
        (0..self.n_phi)
            .map(|k| TAU * k as f64 / (self.n_phi - 1) as f64)
            .collect()
    }
}

/// Probability density on a grid, row-major over `(first, second)` coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    pub frame: Frame,
    pub theta_nodes: Vec<f64>,
    pub phi_nodes: Vec<f64>,
    /// Density per steradian (per `dα dγ` for the Euler frame).
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.phi_nodes.len() + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.phi_nodes.len())
    }

    /// `2π sin θ · ρ`, the density per unit polar angle of an axially symmetric packet.
    pub fn weighted_values(&self) -> Vec<f64> {
        let n = self.phi_nodes.len();
        self.values
            .iter()
            .enumerate()
            .map(|(idx, v)| TAU * self.theta_nodes[idx / n].sin() * v)
            .collect()
    }

    /// Total probability: Clenshaw–Curtis in θ, trapezoid in φ (torus: trapezoid in both).
    pub fn integral(&self) -> f64 {
        let n_phi = self.phi_nodes.len();
        let h_phi = TAU / (n_phi - 1) as f64;
        let row_sum = |row: &[f64]| row[..n_phi - 1].iter().sum::<f64>() * h_phi;
        match self.frame {
            Frame::EulerAlphaGamma { .. } => {
                let h = TAU / (self.theta_nodes.len() - 1) as f64;
                let rows: Vec<f64> = self.rows().map(row_sum).collect();
                rows[..rows.len() - 1].iter().sum::<f64>() * h
            }
            _ => {
                let (_, w) = clenshaw_curtis(self.theta_nodes.len());
                self.rows().zip(&w).map(|(r, wi)| wi * row_sum(r)).sum()
            }
        }
    }
}

/// `|Ψ|²` on the grid. Lab rows are summed from ring coefficients; rotated frames
/// evaluate the expansion pointwise.
pub fn density_grid(
    state: &SphericalExpansion,
    grid: GridSpec,
    frame: Frame,
) -> Result<GridDensity, ObservablesError> {
    let grid = GridSpec::new(grid.n_theta, grid.n_phi)?;
    if let Frame::EulerAlphaGamma { .. } = frame {
        return Err(ObservablesError::Domain(
            "Euler-angle grids belong to symmetric-top states".into(),
        ));
    }
    let thetas = grid.theta_nodes();
    let phis = grid.phi_nodes();
    let l_max = state.l_max();
    let rows: Vec<Vec<f64>> = thetas
        .par_iter()
        .map(|&theta| match frame {
            Frame::Lab => {
                let table = LegendreTable::new(l_max, theta);
                let fm = state.ring_coefficients(&table);
                phis.iter()
                    .map(|&phi| sum_ring(&fm, phi).norm_sqr())
                    .collect()
            }
            _ => phis
                .iter()
                .map(|&phi| state.evaluate(frame.to_lab(theta, phi)).norm_sqr())
                .collect(),
        })
        .collect();
    Ok(GridDensity {
        frame,
        theta_nodes: thetas,
        phi_nodes: phis,
        values: rows.concat(),
    })
}
