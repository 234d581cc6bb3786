//! Symmetric-top rotor: two-quantum-number evolution on the `(α, γ)` torus,
//! its time constants and the clone grid at commensurate revival times.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::observables::{
    raising_moments, report_from_ladder, AngularMomentumReport, Frame, GridDensity,
};
use crate::revivals::{
    gauss_decompose, quadratic_decompose, Fraction, FractionalDecomposition, RevivalError,
    TimePoint,
};
use crate::specfun::wigner_small_d;
use crate::states::TopExpansion;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Revival(#[from] RevivalError),
}

/// Spectrum `ħω₀[I(I+1) + δK²]`, optionally with a declared `δ = r/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorSpec {
    pub omega0: f64,
    pub delta: f64,
    /// `(p, r)` with `p·T_rev^I = r·T_rev^K`.
    pub rational_delta: Option<(u64, u64)>,
}

impl RotorSpec {
    pub fn new(omega0: f64, delta: f64) -> Result<Self, TopError> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(TopError::Domain(format!(
                "omega0 must be positive, got {omega0}"
            )));
        }
        if !(delta > -1.0) || !delta.is_finite() || delta == 0.0 {
            return Err(TopError::Domain(format!(
                "delta must be finite, nonzero and above -1, got {delta}"
            )));
        }
        Ok(RotorSpec {
            omega0,
            delta,
            rational_delta: None,
        })
    }

    /// `δ = r/p` declared exactly.
    pub fn rational(omega0: f64, p: u64, r: u64) -> Result<Self, TopError> {
        if p == 0 || r == 0 {
            return Err(TopError::Domain(
                "rational delta needs positive p and r".into(),
            ));
        }
        let f = Fraction::new(r, p)?;
        let mut spec = RotorSpec::new(omega0, f.to_f64())?;
        spec.rational_delta = Some((f.denom(), f.numer()));
        Ok(spec)
    }

    /// Checks a declared `(p, r)` against the float `δ`.
    pub fn with_declared(self, p: u64, r: u64) -> Result<Self, TopError> {
        let exact = RotorSpec::rational(self.omega0, p, r)?;
        if (exact.delta - self.delta).abs() > 1e-12 * self.delta.abs().max(1.0) {
            return Err(TopError::Domain(format!(
                "declared {r}/{p} does not match delta = {}",
                self.delta
            )));
        }
        Ok(exact)
    }

    pub fn t_rev_i(&self) -> f64 {
        TAU / self.omega0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopTimeConstants {
    pub t_cl_i: f64,
    pub t_rev_i: f64,
    /// Infinite when `K̄` vanishes.
    pub t_cl_k: f64,
    pub t_rev_k: f64,
    pub t_rev_ik: Option<f64>,
    /// `|⟨L_z⟩|`.
    pub i_bar: f64,
    /// `⟨L_Z⟩`.
    pub k_bar: f64,
}

pub fn top_time_constants(state: &TopExpansion, spec: &RotorSpec) -> TopTimeConstants {
    let i_bar: f64 = state
        .i_weights()
        .iter()
        .enumerate()
        .map(|(i, w)| i as f64 * w)
        .sum();
    let k_bar = body_mean_k(state);
    let t_rev_i = spec.t_rev_i();
    let t_rev_k = t_rev_i / spec.delta;
    let t_cl_k = if k_bar.abs() <= 1e-9 * i_bar.max(1.0) {
        f64::INFINITY
    } else {
        t_rev_k / (2.0 * k_bar.abs())
    };
    TopTimeConstants {
        t_cl_i: t_rev_i / (2.0 * i_bar + 1.0),
        t_rev_i,
        t_cl_k,
        t_rev_k,
        t_rev_ik: spec.rational_delta.map(|(p, _)| p as f64 * t_rev_i),
        i_bar,
        k_bar,
    }
}

fn body_mean_k(state: &TopExpansion) -> f64 {
    let mut k_bar = 0.0;
    for i in 0..=state.l_max() {
        for k in -(i as i64)..=i as i64 {
            k_bar += k as f64 * state.get(i, k).norm_sqr();
        }
    }
    k_bar
}

/// A time on the top's clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TopTime {
    /// Exact fraction of `T_rev^{I,K}`; needs a declared rational `δ`.
    Common(Fraction),
    /// Multiple of `T_rev^I`.
    RevI(f64),
}

impl TopTime {
    /// `t/T_rev^I` and `t/T_rev^K`.
    fn split(&self, spec: &RotorSpec) -> Result<(TimePoint, TimePoint), TopError> {
        match *self {
            TopTime::Common(f) => {
                let (p, r) = spec.rational_delta.ok_or_else(|| {
                    TopError::Domain("times in units of T_rev^IK need a rational delta".into())
                })?;
                let fp = Fraction::new(p, 1)?;
                let fr = Fraction::new(r, 1)?;
                Ok((TimePoint::Exact(f.mul(fp)), TimePoint::Exact(f.mul(fr))))
            }
            TopTime::RevI(x) => Ok((TimePoint::Float(x), TimePoint::Float(x * spec.delta))),
        }
    }

    /// In units of `T_rev^I`.
    pub fn in_rev_i(&self, spec: &RotorSpec) -> f64 {
        match *self {
            TopTime::Common(f) => {
                f.to_f64() * spec.rational_delta.map_or(f64::NAN, |(p, _)| p as f64)
            }
            TopTime::RevI(x) => x,
        }
    }
}

fn phase_table(l_max: usize, ti: &TimePoint, tk: &TimePoint) -> (Vec<Complex64>, Vec<Complex64>) {
    let pi = (0..=l_max as i128).map(|i| ti.phase(i * (i + 1))).collect();
    let pk = (0..=l_max as i128).map(|k| tk.phase(k * k)).collect();
    (pi, pk)
}

/// `C_{IK} e^{−2πi[I(I+1)t/T_rev^I + K²t/T_rev^K]}`.
pub fn top_evolve_coeffs(
    state: &TopExpansion,
    spec: &RotorSpec,
    t: TopTime,
) -> Result<TopExpansion, TopError> {
    let (ti, tk) = t.split(spec)?;
    let (pi, pk) = phase_table(state.l_max(), &ti, &tk);
    Ok(state.map_coeffs(|i, k, c| c * pi[i] * pk[k.unsigned_abs() as usize]))
}

/// Density of `Σ C_{IK} d^I_{−I,K}(β) e^{iαI} e^{−iγK}` on the torus,
/// normalized so that `∫∫ ρ dα dγ = 1`.
pub fn top_evolve(
    state: &TopExpansion,
    spec: &RotorSpec,
    t: TopTime,
    beta: f64,
    n_alpha: usize,
    n_gamma: usize,
) -> Result<GridDensity, TopError> {
    let evolved = top_evolve_coeffs(state, spec, t)?;
    torus_density(&evolved, beta, n_alpha, n_gamma)
}

/// `A_{IK} = C_{IK} d^I_{−I,K}(β)`.
fn slice_amplitudes(state: &TopExpansion, beta: f64) -> Result<TopExpansion, TopError> {
    let mut out = state.clone();
    for i in 0..=state.l_max() {
        for k in -(i as i64)..=i as i64 {
            let d = wigner_small_d(i, -(i as i64), k, beta)
                .map_err(|e| TopError::Domain(e.to_string()))?;
            out.set(i, k, state.get(i, k) * d);
        }
    }
    Ok(out)
}

pub fn torus_density(
    state: &TopExpansion,
    beta: f64,
    n_alpha: usize,
    n_gamma: usize,
) -> Result<GridDensity, TopError> {
    if n_alpha < 2 || n_gamma < 2 {
        return Err(TopError::Domain(format!(
            "torus grid needs at least 2 nodes per axis, got {n_alpha}x{n_gamma}"
        )));
    }
    let a = slice_amplitudes(state, beta)?;
    let total = a.norm_sqr();
    if !(total > 0.0) {
        return Err(TopError::Domain(format!(
            "state vanishes on the slice beta = {beta}"
        )));
    }
    let scale = 1.0 / (TAU * TAU * total);
    let l_max = state.l_max();
    let alphas: Vec<f64> = (0..n_alpha)
        .map(|j| TAU * j as f64 / (n_alpha - 1) as f64)
        .collect();
    let gammas: Vec<f64> = (0..n_gamma)
        .map(|j| TAU * j as f64 / (n_gamma - 1) as f64)
        .collect();
    // G_I(γ) = Σ_K A_{IK} e^{−iγK}
    let g: Vec<Vec<Complex64>> = gammas
        .par_iter()
        .map(|&gamma| {
            (0..=l_max)
                .map(|i| {
                    (-(i as i64)..=i as i64)
                        .map(|k| a.get(i, k) * Complex64::from_polar(1.0, -gamma * k as f64))
                        .sum()
                })
                .collect()
        })
        .collect();
    let rows: Vec<Vec<f64>> = alphas
        .par_iter()
        .map(|&alpha| {
            let e: Vec<Complex64> = (0..=l_max)
                .map(|i| Complex64::from_polar(1.0, alpha * i as f64))
                .collect();
            g.iter()
                .map(|gi| {
                    let psi: Complex64 = gi.iter().zip(&e).map(|(g, e)| g * e).sum();
                    psi.norm_sqr() * scale
                })
                .collect()
        })
        .collect();
    Ok(GridDensity {
        frame: Frame::EulerAlphaGamma { beta },
        theta_nodes: alphas,
        phi_nodes: gammas,
        values: rows.concat(),
    })
}

/// `|⟨Ψ(0)|Ψ(t)⟩|²` over the full top state.
pub fn top_autocorrelation(
    state: &TopExpansion,
    spec: &RotorSpec,
    times: &[TopTime],
) -> Result<Vec<f64>, TopError> {
    times
        .par_iter()
        .map(|t| {
            let (ti, tk) = t.split(spec)?;
            let (pi, pk) = phase_table(state.l_max(), &ti, &tk);
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..=state.l_max() {
                for k in -(i as i64)..=i as i64 {
                    sum += state.get(i, k).norm_sqr() * pi[i] * pk[k.unsigned_abs() as usize];
                }
            }
            Ok(sum.norm_sqr())
        })
        .collect()
}

/// One fractional wave of the two-dimensional decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct TopWave {
    pub s_i: usize,
    pub s_k: usize,
    /// `a_s a′_{s′}`.
    pub weight: Complex64,
    /// Translation of the initial packet in α.
    pub alpha_shift: f64,
    /// Translation of the initial packet in γ.
    pub gamma_shift: f64,
    /// Overlap with the initial state translated by the shifts.
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopCloneReport {
    pub time: Fraction,
    pub i_decomposition: FractionalDecomposition,
    pub k_decomposition: FractionalDecomposition,
    /// The `q × q′` grid.
    pub waves: Vec<TopWave>,
    /// Max coefficient error of `Σ weight·wave` against direct evolution.
    pub residual: f64,
}

/// Gauss-sum decomposition applied separately to the `I(I+1)` phases and to the
/// `K²` phases at `t = (m/n)T_rev^{I,K}`.
pub fn top_clone_check(
    state: &TopExpansion,
    spec: &RotorSpec,
    m: u64,
    n: u64,
) -> Result<TopCloneReport, TopError> {
    let (p, r) = spec
        .rational_delta
        .ok_or_else(|| TopError::Domain("clone check needs a declared rational delta".into()))?;
    let time = Fraction::coprime(m, n)?;
    let fi = time.mul(Fraction::new(p, 1)?);
    let fk = time.mul(Fraction::new(r, 1)?);
    let di = gauss_decompose(fi.numer(), fi.denom())?;
    let dk = quadratic_decompose(fk);
    let l_max = state.l_max();
    let mut sum = TopExpansion::zeros(l_max);
    let mut waves = Vec::new();
    for si in di.nonzero() {
        let ti = TimePoint::Exact(di.t_s(si));
        for sk in dk.nonzero() {
            let tk = TimePoint::Exact(dk.t_s(sk));
            let weight = di.a[si] * dk.a[sk];
            let wave = state.map_coeffs(|i, k, c| c * ti.phase(i as i128) * tk.phase(k as i128));
            let alpha_shift = TAU * di.t_s(si).to_f64();
            let gamma_shift = -TAU * dk.t_s(sk).to_f64();
            // the initial state moved by (α, γ) → (α − a, γ − g)
            let moved = state.map_coeffs(|i, k, c| {
                c * Complex64::from_polar(1.0, -alpha_shift * i as f64 + gamma_shift * k as f64)
            });
            let fidelity = moved.inner(&wave).norm_sqr();
            sum = sum.map_coeffs(|i, k, c| c + weight * wave.get(i, k));
            waves.push(TopWave {
                s_i: si,
                s_k: sk,
                weight,
                alpha_shift: alpha_shift.rem_euclid(TAU),
                gamma_shift: gamma_shift.rem_euclid(TAU),
                fidelity,
            });
        }
    }
    let direct = top_evolve_coeffs(state, spec, TopTime::Common(time))?;
    let residual = sum
        .coeffs()
        .iter()
        .zip(direct.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(TopCloneReport {
        time,
        i_decomposition: di,
        k_decomposition: dk,
        waves,
        residual,
    })
}

/// Laboratory-frame moments; every component has `M = −I`.
pub fn top_lab_report(state: &TopExpansion) -> AngularMomentumReport {
    let (mut lz, mut lz2, mut l2) = (0.0, 0.0, 0.0);
    for (i, w) in state.i_weights().iter().enumerate() {
        let i = i as f64;
        lz -= i * w;
        lz2 += i * i * w;
        l2 += i * (i + 1.0) * w;
    }
    let zero = Complex64::new(0.0, 0.0);
    report_from_ladder(zero, zero, lz, lz2, l2)
}

/// Body-frame moments, with the ladder acting on `K`.
pub fn top_body_report(state: &TopExpansion) -> AngularMomentumReport {
    let (lp, lp2, lz, lz2, l2) = raising_moments(state.l_max(), |i, k| state.get(i, k));
    report_from_ladder(lp, lp2, lz, lz2, l2)
}

/// `ΔL_X²ΔL_Y²` against `⟨L_Z⟩²/(4cos²λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyUncertainty {
    pub var_x: f64,
    pub var_y: f64,
    pub product: f64,
    pub bound: f64,
}

/// Near `cos λ = 0` the bound is the `0/0` limit `⟨L_X⟩²/(4 sin²λ)`.
pub fn body_uncertainty(state: &TopExpansion, lambda: f64) -> BodyUncertainty {
    let rep = top_body_report(state);
    let (s, c) = lambda.sin_cos();
    let bound = if c.abs() < 1e-3 {
        rep.mean_lx * rep.mean_lx / (4.0 * s * s)
    } else {
        rep.mean_lz * rep.mean_lz / (4.0 * c * c)
    };
    BodyUncertainty {
        var_x: rep.var_lx,
        var_y: rep.var_ly,
        product: rep.uncertainty_product,
        bound,
    }
}
