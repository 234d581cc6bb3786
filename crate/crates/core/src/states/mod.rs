//! Builders for the coherent-state families, all returning normalized expansions.

mod boson;
mod expansion;
mod exponential;
mod intelligent;
mod janssen;
mod seed;

use thiserror::Error;

use crate::specfun::SpecfunError;

pub use boson::{boson_circular_state, BosonSpec, BosonState};
pub use expansion::{sum_ring, SphericalExpansion, TopExpansion};
pub use exponential::{
    axial_state, exponential_wp, exponential_wp_with, uniform_linear_wp, ExponentialRoute,
    ExponentialSpec,
};
pub use intelligent::{general_wp, intelligent_harmonic};
pub use janssen::{janssen_top_state, JanssenState, TopSpec};
pub use seed::{gaussian_seed_projection, gaussian_seed_wp, GaussianSeedSpec, SeedProjection};

/// Default bound on the probability discarded by truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
/// Hard cap on the retained angular momentum.
pub const L_MAX_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatesError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation: neglected weight {tail:e} still above {tail_tol:e} at l_max cap {cap}")]
    Truncation {
        cap: usize,
        tail: f64,
        tail_tol: f64,
    },
    #[error("quadrature did not converge: norm defect {defect:e}, last-shell weight {last_shell:e}, tolerance {tail_tol:e}")]
    Quadrature {
        defect: f64,
        last_shell: f64,
        tail_tol: f64,
    },
    #[error("state has half-integer angular momenta and no spherical-harmonic expansion")]
    HalfInteger,
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

fn check_tail_tol(tail_tol: f64) -> Result<(), StatesError> {
    if tail_tol > 0.0 && tail_tol.is_finite() {
        Ok(())
    } else {
        Err(StatesError::Domain(format!(
            "tail_tol must be positive, got {tail_tol}"
        )))
    }
}

/// Smallest `L` with `Σ_{l > L} weights[l] < tail_tol`, summing the tail from the top.
/// `unseen` bounds the weight beyond the end of `weights`.
fn cutoff(weights: &[f64], unseen: f64, tail_tol: f64) -> Option<usize> {
    let mut tail = unseen;
    if tail >= tail_tol {
        return None;
    }
    for l in (0..weights.len()).rev() {
        let next = tail + weights[l];
        if next >= tail_tol {
            return Some(l);
        }
        tail = next;
    }
    Some(0)
}

/// Generates per-`l` weights until they are negligible, then picks the cutoff.
/// `weight(l)` must return the exact probability carried by shell `l` of a
/// unit-norm state.
fn scan_cutoff(
    mut weight: impl FnMut(usize) -> Result<f64, StatesError>,
    tail_tol: f64,
) -> Result<usize, StatesError> {
    let negligible = (tail_tol * 1e-6).min(1e-40);
    let mut weights = Vec::new();
    let mut total = 0.0;
    for l in 0..=L_MAX_CAP + 1 {
        let w = weight(l)?;
        weights.push(w);
        total += w;
        let decreasing = l > 0 && w <= weights[l - 1];
        if total > 0.5 && decreasing && w < negligible {
            // super-geometric decay: the remainder is far below w
            return Ok(cutoff(&weights, w, tail_tol).unwrap_or(l));
        }
    }
    match cutoff(&weights[..=L_MAX_CAP], 0.0, tail_tol) {
        Some(l) if weights[L_MAX_CAP + 1] < tail_tol => Ok(l),
        _ => Err(StatesError::Truncation {
            cap: L_MAX_CAP,
            tail: weights[L_MAX_CAP + 1],
            tail_tol,
        }),
    }
}
