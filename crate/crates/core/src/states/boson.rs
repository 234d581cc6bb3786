//! Circular states of the two-boson (Schwinger) representation, `|k s⟩`.

use num_complex::Complex64;

use crate::observables::AngularMomentumReport;
use crate::specfun::lnf;

use super::{check_tail_tol, SphericalExpansion, StatesError, L_MAX_CAP};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonSpec {
    pub k: f64,
    /// Twice the spin `s`, so half-integer spins stay exact.
    pub two_s: u32,
    /// Keep only integer `j` and renormalize.
    pub integer_truncated: bool,
}

impl BosonSpec {
    pub fn new(k: f64, two_s: u32, integer_truncated: bool) -> Result<Self, StatesError> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(StatesError::Domain(format!("k must be positive, got {k}")));
        }
        if two_s == 0 {
            return Err(StatesError::Domain("spin s must be positive".into()));
        }
        Ok(BosonSpec {
            k,
            two_s,
            integer_truncated,
        })
    }

    pub fn s(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    /// Poisson mean `k^{4s}` of the quantum number `p` (with `j = p·s`).
    pub fn mean_p(&self) -> f64 {
        self.k.powf(2.0 * self.two_s as f64)
    }
}

/// `Σ_p w_p |j = p·s, m = j⟩` with Poisson weights `w_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonState {
    pub spec: BosonSpec,
    /// `(2j, probability)`, probabilities summing to 1.
    pub components: Vec<(u64, f64)>,
    /// Probability the kept components carried before renormalization.
    pub retained: f64,
}

/// Builds `|k s⟩`; the integer-truncated variant keeps integer `j` only.
pub fn boson_circular_state(spec: BosonSpec, tail_tol: f64) -> Result<BosonState, StatesError> {
    check_tail_tol(tail_tol)?;
    let mu = spec.mean_p();
    if !mu.is_finite() {
        return Err(StatesError::Domain(format!(
            "k^(4s) overflows for k={}",
            spec.k
        )));
    }
    let ln_mu = mu.ln();
    let two_s = spec.two_s as u64;
    let half_integer = two_s % 2 == 1;
    let mut raw = Vec::new();
    let mut total = 0.0;
    let negligible = (tail_tol * 1e-6).min(1e-40);
    for p in 0u64.. {
        let w = (p as f64 * ln_mu - mu - lnf(p as usize)).exp();
        let keep = !(spec.integer_truncated && half_integer && p % 2 == 1);
        if keep {
            raw.push((p * two_s, w));
            total += w;
        }
        if p as f64 > mu && w < negligible {
            break;
        }
        if (p as usize) + 2 > crate::specfun::DEFAULT_LOG_FACTORIAL_CAPACITY {
            return Err(StatesError::Truncation {
                cap: p as usize,
                tail: w,
                tail_tol,
            });
        }
    }
    // drop the negligible top, leaving less than tail_tol behind
    let mut tail = 0.0;
    while let Some(&(_, w)) = raw.last() {
        if tail + w >= tail_tol * total {
            break;
        }
        tail += w;
        raw.pop();
    }
    let kept: f64 = raw.iter().map(|(_, w)| w).sum();
    let components = raw.into_iter().map(|(j2, w)| (j2, w / kept)).collect();
    Ok(BosonState {
        spec,
        components,
        retained: kept,
    })
}

impl BosonState {
    /// Spherical-harmonic expansion with `b_{jj} = √w`; only for integer `j`.
    pub fn expansion(&self) -> Result<SphericalExpansion, StatesError> {
        if self.components.iter().any(|(j2, _)| j2 % 2 == 1) {
            return Err(StatesError::HalfInteger);
        }
        let l_max = self
            .components
            .iter()
            .map(|(j2, _)| (j2 / 2) as usize)
            .max()
            .unwrap_or(0);
        if l_max > L_MAX_CAP {
            return Err(StatesError::Truncation {
                cap: L_MAX_CAP,
                tail: 1.0,
                tail_tol: 0.0,
            });
        }
        let mut out = SphericalExpansion::zeros(l_max);
        for &(j2, w) in &self.components {
            let j = (j2 / 2) as usize;
            out.set(j, j as i64, Complex64::new(w.sqrt(), 0.0));
        }
        Ok(out)
    }

    /// Partial-wave probabilities indexed by `2j`.
    pub fn weights_by_two_j(&self) -> Vec<f64> {
        let n = self
            .components
            .iter()
            .map(|(j2, _)| *j2 as usize)
            .max()
            .unwrap_or(0);
        let mut out = vec![0.0; n + 1];
        for &(j2, w) in &self.components {
            out[j2 as usize] += w;
        }
        out
    }

    /// Exact moments. Every component is a stretched `|j, j⟩`, so `⟨L_x⟩ = ⟨L_y⟩ = 0`
    /// and `⟨L_x²⟩ = ⟨L_y²⟩ = ⟨L_z⟩/2`; valid for half-integer `j` as well.
    pub fn report(&self) -> AngularMomentumReport {
        let mut lz = 0.0;
        let mut lz2 = 0.0;
        let mut l2 = 0.0;
        for &(j2, w) in &self.components {
            let j = j2 as f64 / 2.0;
            lz += w * j;
            lz2 += w * j * j;
            l2 += w * j * (j + 1.0);
        }
        let transverse = 0.5 * (l2 - lz2);
        AngularMomentumReport::from_moments([0.0, 0.0, lz], [transverse, transverse, lz2], l2)
    }
}
