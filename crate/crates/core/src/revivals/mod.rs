//! Rotor evolution, Gauss-sum decomposition at rational times, fractional waves,
//! clone classification, carpets and spreading estimates.

mod carpet;
mod gauss;
mod time;

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::observables::{AngularMomentumReport, Spectrum};
use crate::specfun::LegendreTable;
use crate::states::{sum_ring, SphericalExpansion, StatesError};

pub use carpet::{axis_carpet, carpet, Carpet};
pub use gauss::{
    clone_report, conjugate_function, fractional_waves, gauss_decompose, period_for,
    quadratic_decompose, reconstruct, CloneEntry, CloneKind, CloneReport, FractionalDecomposition,
    FractionalWave, PairCheck, CLONE_FIDELITY, ROTATION_SWEEP,
};
pub use time::{turn_phase, Fraction, TimePoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RevivalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    States(#[from] StatesError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeConstants {
    pub omega0: f64,
    pub t_rev: f64,
    pub t_cl: f64,
    /// Positive root of `Ī(Ī+1) = ⟨L²⟩`.
    pub i_bar: f64,
}

pub fn time_constants(
    state: &SphericalExpansion,
    omega0: f64,
) -> Result<TimeConstants, RevivalError> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(RevivalError::Domain(format!(
            "omega0 must be positive, got {omega0}"
        )));
    }
    let l2: f64 = state
        .l_weights()
        .iter()
        .enumerate()
        .map(|(l, w)| (l * (l + 1)) as f64 * w)
        .sum();
    let i_bar = 0.5 * ((1.0 + 4.0 * l2).sqrt() - 1.0);
    let t_rev = TAU / omega0;
    Ok(TimeConstants {
        omega0,
        t_rev,
        t_cl: t_rev / (2.0 * i_bar + 1.0),
        i_bar,
    })
}

/// `b_{IM} ↦ b_{IM} e^{−2πi·I(I+1)·t}` with `t` in units of `T_rev`.
pub fn evolve(state: &SphericalExpansion, t: TimePoint) -> SphericalExpansion {
    evolve_with(state, Spectrum::Quantum, t)
}

pub fn evolve_with(
    state: &SphericalExpansion,
    spectrum: Spectrum,
    t: TimePoint,
) -> SphericalExpansion {
    let phases: Vec<_> = (0..=state.l_max()).map(|l| spectrum.phase(&t, l)).collect();
    state.map_coeffs(|l, _, b| b * phases[l])
}

/// Spreading time and the largest number of separable fractional waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadEstimates {
    pub omega0: f64,
    pub delta_l_eta: f64,
    /// `τ_η = (2π/ω₀)/ΔL_η`.
    pub tau_eta: f64,
    /// `π / arctan(1/(2√N))`.
    pub q_max: f64,
}

impl SpreadEstimates {
    /// `τ′(q)` from `ω₀ τ′ ΔL_η = 2π/q`.
    pub fn lifetime(&self, q: f64) -> f64 {
        TAU / (q * self.omega0 * self.delta_l_eta)
    }
}

pub fn spread_estimates(
    n: f64,
    report: &AngularMomentumReport,
    omega0: f64,
) -> Result<SpreadEstimates, RevivalError> {
    if !(report.delta_l_eta_sq > 0.0) {
        return Err(RevivalError::Domain(format!(
            "spreading needs a positive variance, got {}",
            report.delta_l_eta_sq
        )));
    }
    if !(n > 0.0) || !(omega0 > 0.0) {
        return Err(RevivalError::Domain("N and omega0 must be positive".into()));
    }
    let delta_l_eta = report.delta_l_eta_sq.sqrt();
    Ok(SpreadEstimates {
        omega0,
        delta_l_eta,
        tau_eta: TAU / omega0 / delta_l_eta,
        q_max: PI / (1.0 / (2.0 * n.sqrt())).atan(),
    })
}

/// Number of separated peaks along the ring at `theta` for each `t = T_rev/n`,
/// `n = 2..=n_limit`; returns the largest `q` whose waves are all resolved
/// (each peak isolated by a drop below half the maximum).
pub fn empirical_clone_count(state: &SphericalExpansion, theta: f64, n_limit: u64) -> usize {
    let table = LegendreTable::new(state.l_max(), theta);
    let mut best = 1;
    for n in 2..=n_limit {
        let dec = match gauss_decompose(1, n) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let evolved = evolve(state, TimePoint::Exact(dec.requested));
        let fm = evolved.ring_coefficients(&table);
        let samples = 64 * n as usize;
        let rho: Vec<f64> = (0..samples)
            .map(|k| sum_ring(&fm, TAU * k as f64 / samples as f64).norm_sqr())
            .collect();
        let peak = rho.iter().cloned().fold(0.0, f64::max);
        let above: Vec<bool> = rho.iter().map(|v| *v > 0.5 * peak).collect();
        let arcs = (0..samples)
            .filter(|&k| above[k] && !above[(k + samples - 1) % samples])
            .count();
        if arcs == dec.q && dec.q > best {
            best = dec.q;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::angular_momentum_report;
    use crate::states::{exponential_wp, intelligent_harmonic, ExponentialSpec};

    fn exp_state(n: f64, eta: f64) -> SphericalExpansion {
        exponential_wp(ExponentialSpec::new(n, eta).unwrap(), 1e-14).unwrap()
    }

    #[test]
    fn constants_and_pure_state() {
        let s = intelligent_harmonic(7, 1.0).unwrap();
        let c = time_constants(&s, 2.0).unwrap();
        assert!((c.i_bar - 7.0).abs() < 1e-12);
        assert!((c.t_rev - PI).abs() < 1e-15);
        assert!((c.t_cl - PI / 15.0).abs() < 1e-14);
        assert!(time_constants(&s, 0.0).is_err());
    }

    #[test]
    fn half_revival_and_unitarity() {
        let s = exp_state(6.0, 0.4);
        let half = evolve(&s, TimePoint::Exact(Fraction::new(1, 2).unwrap()));
        assert!(half.max_abs_diff(&s) < 1e-15);
        let e = evolve(&s, TimePoint::Float(0.123));
        assert!((e.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_matches_evolution() {
        let s = exp_state(20.0, 0.5);
        for (m, n) in [(1, 3), (1, 4), (1, 6), (5, 12), (7, 9)] {
            let dec = gauss_decompose(m, n).unwrap();
            let waves = fractional_waves(&s, &dec);
            let r = reconstruct(&waves, s.l_max());
            let direct = evolve(&s, TimePoint::Exact(Fraction::new(m, n).unwrap()));
            assert!(r.max_abs_diff(&direct) < 1e-12, "{m}/{n}");
            if let Some(s0) = dec.s0 {
                let w = waves.iter().find(|w| w.s == s0).unwrap();
                assert!(w.wave.max_abs_diff(&s) < 1e-14);
            }
        }
    }

    #[test]
    fn circular_waves_are_rotated_clones() {
        let s = exp_state(8.0, 1.0);
        let rep = clone_report(&s, &gauss_decompose(1, 5).unwrap(), None);
        assert_eq!(rep.entries.len(), 5);
        for e in &rep.entries {
            assert!(e.rotated_fidelity > CLONE_FIDELITY);
            assert_ne!(e.kind, CloneKind::Mutant);
        }
    }

    #[test]
    fn elliptic_sixth_has_one_clone_and_pairs() {
        let s = exp_state(20.0, 0.5);
        let mirror = exp_state(20.0, -0.5);
        let dec = gauss_decompose(1, 6).unwrap();
        let rep = clone_report(&s, &dec, Some(&mirror));
        assert_eq!(rep.entries.len(), 3);
        let clones: Vec<_> = rep
            .entries
            .iter()
            .filter(|e| e.kind == CloneKind::Clone)
            .collect();
        assert_eq!(clones.len(), 1);
        assert_eq!(clones[0].s, 5);
        assert!(rep
            .entries
            .iter()
            .filter(|e| e.s != 5)
            .all(|e| e.kind == CloneKind::Mutant));
        assert!(!rep.pairs.is_empty());
        for p in &rep.pairs {
            assert!(p.max_error < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn spreading() {
        let rep0 = angular_momentum_report(&exp_state(20.0, 0.0));
        let rep1 = angular_momentum_report(&exp_state(20.0, 1.0));
        let s0 = spread_estimates(20.0, &rep0, 1.0).unwrap();
        let s1 = spread_estimates(20.0, &rep1, 1.0).unwrap();
        assert!(s1.tau_eta < s0.tau_eta);
        assert!((s0.q_max - 28.2).abs() < 0.05);
        let q = 5.0;
        assert!((s0.lifetime(q) * q * s0.delta_l_eta - TAU).abs() < 1e-12);
    }

    #[test]
    fn circular_ring_counts_clones() {
        let s = exp_state(20.0, 1.0);
        let q = empirical_clone_count(&s, PI / 2.0, 12);
        assert!(q >= 3, "{q}");
    }
}
