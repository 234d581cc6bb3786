//! Moments, uncertainty products, density grids and autocorrelations.

mod grid;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::revivals::TimePoint;
use crate::states::SphericalExpansion;

pub use grid::{density_grid, Frame, GridDensity, GridSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObservablesError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// First and second moments of the angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentumReport {
    pub mean_lx: f64,
    pub mean_ly: f64,
    pub mean_lz: f64,
    pub mean_lx2: f64,
    pub mean_ly2: f64,
    pub mean_lz2: f64,
    pub mean_l2: f64,
    pub var_lx: f64,
    pub var_ly: f64,
    /// `ΔL_x² · ΔL_y²`.
    pub uncertainty_product: f64,
    /// `¼⟨L_z⟩²`.
    pub lz_bound: f64,
    /// `ΔL_η² = ⟨L²⟩ − ⟨L_z²⟩`.
    pub delta_l_eta_sq: f64,
}

impl AngularMomentumReport {
    /// From `[⟨L_x⟩, ⟨L_y⟩, ⟨L_z⟩]`, `[⟨L_x²⟩, ⟨L_y²⟩, ⟨L_z²⟩]` and `⟨L²⟩`.
    pub fn from_moments(means: [f64; 3], squares: [f64; 3], mean_l2: f64) -> Self {
        let var_lx = (squares[0] - means[0] * means[0]).max(0.0);
        let var_ly = (squares[1] - means[1] * means[1]).max(0.0);
        AngularMomentumReport {
            mean_lx: means[0],
            mean_ly: means[1],
            mean_lz: means[2],
            mean_lx2: squares[0],
            mean_ly2: squares[1],
            mean_lz2: squares[2],
            mean_l2,
            var_lx,
            var_ly,
            uncertainty_product: var_lx * var_ly,
            lz_bound: 0.25 * means[2] * means[2],
            delta_l_eta_sq: mean_l2 - squares[2],
        }
    }
}

/// `⟨L_+⟩` and `⟨L_+²⟩` over coefficients indexed by `(l, m)`.
pub(crate) fn raising_moments(
    l_max: usize,
    get: impl Fn(usize, i64) -> Complex64,
) -> (Complex64, Complex64, f64, f64, f64) {
    let mut lp = Complex64::new(0.0, 0.0);
    let mut lp2 = Complex64::new(0.0, 0.0);
    let mut lz = 0.0;
    let mut lz2 = 0.0;
    let mut l2 = 0.0;
    for l in 0..=l_max {
        let ll = (l * (l + 1)) as f64;
        let li = l as i64;
        for m in -li..=li {
            let b = get(l, m);
            let p = b.norm_sqr();
            let mf = m as f64;
            lz += mf * p;
            lz2 += mf * mf * p;
            l2 += ll * p;
            if m < li {
                let f1 = (ll - mf * (mf + 1.0)).sqrt();
                lp += get(l, m + 1).conj() * b * f1;
                if m + 1 < li {
                    let f2 = (ll - (mf + 1.0) * (mf + 2.0)).sqrt();
                    lp2 += get(l, m + 2).conj() * b * f1 * f2;
                }
            }
        }
    }
    (lp, lp2, lz, lz2, l2)
}

/// Assembles the report from `⟨L_±⟩`-type sums.
pub(crate) fn report_from_ladder(
    lp: Complex64,
    lp2: Complex64,
    lz: f64,
    lz2: f64,
    l2: f64,
) -> AngularMomentumReport {
    let transverse = l2 - lz2;
    let lx2 = 0.5 * (lp2.re + transverse);
    let ly2 = 0.5 * (transverse - lp2.re);
    AngularMomentumReport::from_moments([lp.re, lp.im, lz], [lx2, ly2, lz2], l2)
}

/// Exact moments from ladder-operator matrix elements.
pub fn angular_momentum_report(state: &SphericalExpansion) -> AngularMomentumReport {
    let (lp, lp2, lz, lz2, l2) = raising_moments(state.l_max(), |l, m| state.get(l, m));
    report_from_ladder(lp, lp2, lz, lz2, l2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyCheck {
    pub product: f64,
    pub bound: f64,
    pub satisfied: bool,
}

impl UncertaintyCheck {
    pub fn from_report(r: &AngularMomentumReport) -> Self {
        let product = r.uncertainty_product;
        let bound = r.lz_bound;
        UncertaintyCheck {
            product,
            bound,
            satisfied: (product - bound).abs() <= 1e-8 * bound.max(1.0),
        }
    }
}

/// Whether `ΔL_x²ΔL_y² = ¼⟨L_z⟩²` holds.
pub fn uncertainty_check(state: &SphericalExpansion) -> UncertaintyCheck {
    UncertaintyCheck::from_report(&angular_momentum_report(state))
}

/// Rotor spectrum driving the phases, with `t` in units of `T_rev`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spectrum {
    /// `e^{−2πi·I(I+1)·t}`.
    Quantum,
    /// `e^{−2πi·rate·I·t}`: the linearized phases of a classical rotor
    /// (`rate = 2Ī+1` makes the period `T_cl`).
    Classical { rate: f64 },
}

impl Spectrum {
    pub fn phase(&self, t: &TimePoint, i: usize) -> Complex64 {
        match self {
            Spectrum::Quantum => {
                let i = i as i128;
                t.phase(i * (i + 1))
            }
            Spectrum::Classical { rate } => TimePoint::Float(t.to_f64() * rate).phase(i as i128),
        }
    }
}

/// `|⟨Ψ(0)|Ψ(t)⟩|²` at each time, with `t` in units of `T_rev`.
pub fn autocorrelation(
    state: &SphericalExpansion,
    spectrum: Spectrum,
    times: &[TimePoint],
) -> Vec<f64> {
    let w = state.l_weights();
    times
        .par_iter()
        .map(|t| {
            let a: Complex64 = w
                .iter()
                .enumerate()
                .map(|(i, wi)| *wi * spectrum.phase(t, i))
                .sum();
            a.norm_sqr()
        })
        .collect()
}
