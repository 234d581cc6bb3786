//! The exponential coherent wave packet
//! `Ψ_η = √(N/(2π sinh 2N)) · exp(N sinθ (cosφ + iη sinφ))` and its linear relatives.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::{
    clebsch_gordan, clebsch_gordan_m0, ln_double_factorial_odd, lnf, log_mod_sph_bessel_i_array,
    log_sph_bessel_j_array, AngularPoint, LegendreTable,
};

use super::intelligent::{ln_pow, sign_pow};
use super::{check_tail_tol, scan_cutoff, SphericalExpansion, StatesError, L_MAX_CAP};

/// Concentration `N` and anisotropy `η` of an exponential wave packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialSpec {
    pub n: f64,
    pub eta: f64,
}

impl ExponentialSpec {
    pub fn new(n: f64, eta: f64) -> Result<Self, StatesError> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(StatesError::Domain(format!("N must be positive, got {n}")));
        }
        if !eta.is_finite() {
            return Err(StatesError::Domain(format!(
                "eta must be finite, got {eta}"
            )));
        }
        Ok(ExponentialSpec { n, eta })
    }

    /// `ln(2N / sinh 2N)`.
    fn ln_norm_sq(&self) -> f64 {
        let x = 2.0 * self.n;
        let ln_sinh = if x < 20.0 {
            x.sinh().ln()
        } else {
            x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
        };
        x.ln() - ln_sinh
    }
}

/// How the partial-wave coefficients are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentialRoute {
    /// Coupling sum for `|η| <= 1`, closed form otherwise.
    Auto,
    /// Double sum over `(l, l′)` with Clebsch–Gordan couplings.
    /// All terms share one sign for `|η| <= 1`; for `|η| > 1` they alternate
    /// and cancel catastrophically at large `N`.
    CouplingSum,
    /// Factorized form `b_{lm} ∝ g_l(N²(1−η²)) · (solid harmonic of the complex wave vector)`.
    ClosedForm,
}

/// Coefficients of `Ψ_η`, truncated where the neglected probability drops below
/// `tail_tol`, then renormalized.
pub fn exponential_wp(
    spec: ExponentialSpec,
    tail_tol: f64,
) -> Result<SphericalExpansion, StatesError> {
    exponential_wp_with(spec, tail_tol, ExponentialRoute::Auto)
}

pub fn exponential_wp_with(
    spec: ExponentialSpec,
    tail_tol: f64,
    route: ExponentialRoute,
) -> Result<SphericalExpansion, StatesError> {
    let spec = ExponentialSpec::new(spec.n, spec.eta)?;
    check_tail_tol(tail_tol)?;
    let use_coupling = match route {
        ExponentialRoute::Auto => spec.eta.abs() <= 1.0,
        ExponentialRoute::CouplingSum => true,
        ExponentialRoute::ClosedForm => false,
    };
    let closed = if use_coupling {
        None
    } else {
        Some(ClosedForm::new(spec, L_MAX_CAP + 1)?)
    };
    let mut shells: Vec<Vec<f64>> = Vec::new();
    let l_max = scan_cutoff(
        |l| {
            let shell = match &closed {
                Some(c) => c.shell(l),
                None => coupling_shell(spec, l)?,
            };
            let w = shell.iter().map(|b| b * b).sum();
            shells.push(shell);
            Ok(w)
        },
        tail_tol,
    )?;
    let mut out = SphericalExpansion::zeros(l_max);
    for (l, shell) in shells.iter().enumerate().take(l_max + 1) {
        for (i, &b) in shell.iter().enumerate() {
            out.set(l, i as i64 - l as i64, Complex64::new(b, 0.0));
        }
    }
    out.normalize()?;
    Ok(out)
}

/// Shell `I` by the coupling sum, index `M + I`.
fn coupling_shell(spec: ExponentialSpec, big_i: usize) -> Result<Vec<f64>, StatesError> {
    let ExponentialSpec { n, eta } = spec;
    let ln_pref = 0.5 * spec.ln_norm_sq() - 0.5 * ((2 * big_i + 1) as f64).ln();
    let a = n * (1.0 + eta);
    let b = n * (1.0 - eta);
    let ii = big_i as i64;
    let mut shell = vec![0.0; 2 * big_i + 1];
    for big_m in (-ii..=ii).step_by(2) {
        let l0 = ((ii + big_m) / 2) as usize;
        let lp0 = ((ii - big_m) / 2) as usize;
        let mut terms: Vec<(f64, f64)> = Vec::new();
        let mut peak = f64::NEG_INFINITY;
        let mut prev = f64::NEG_INFINITY;
        for j in 0.. {
            let l = l0 + j;
            let lp = lp0 + j;
            if 2 * l.max(lp) + 2 > crate::specfun::DEFAULT_LOG_FACTORIAL_CAPACITY {
                break;
            }
            let s = sign_pow(a, l) * sign_pow(b, lp);
            if s == 0.0 {
                break;
            }
            let cg0 = clebsch_gordan_m0(l, lp, big_i)?;
            let cg1 = clebsch_gordan(l, lp, l as i64, -(lp as i64), big_i, big_m)?;
            let ln_t = ln_pow(a, l) + ln_pow(b, lp) - 0.5 * (lnf(2 * l) + lnf(2 * lp))
                + cg0.abs().ln()
                + cg1.abs().ln();
            let mut sign = s * cg0.signum() * cg1.signum();
            if l % 2 == 1 {
                sign = -sign;
            }
            terms.push((ln_t, sign));
            peak = peak.max(ln_t);
            if ln_t < peak - 45.0 && ln_t < prev {
                break;
            }
            prev = ln_t;
        }
        if terms.is_empty() {
            continue;
        }
        let sum: f64 = terms.iter().map(|(t, s)| s * (t - peak).exp()).sum();
        shell[(big_m + ii) as usize] = sum * (ln_pref + peak).exp();
    }
    Ok(shell)
}

/// Factorized coefficients, valid for every real `η`.
struct ClosedForm {
    spec: ExponentialSpec,
    /// `ln|g_l|` and sign, `g_l(z) = Σ_k z^k / (2^k k! (2l+2k+1)!!)`.
    g: Vec<(f64, f64)>,
}

impl ClosedForm {
    fn new(spec: ExponentialSpec, l_max: usize) -> Result<Self, StatesError> {
        let z = spec.n * spec.n * (1.0 - spec.eta * spec.eta);
        let g = if z > 0.0 {
            let x = z.sqrt();
            log_mod_sph_bessel_i_array(l_max, x)?
                .iter()
                .enumerate()
                .map(|(l, v)| (v - l as f64 * x.ln(), 1.0))
                .collect()
        } else if z < 0.0 {
            let y = (-z).sqrt();
            log_sph_bessel_j_array(l_max, y)
                .iter()
                .enumerate()
                .map(|(l, v)| (v.log_abs - l as f64 * y.ln(), v.sign))
                .collect()
        } else {
            (0..=l_max)
                .map(|l| (-ln_double_factorial_odd(l), 1.0))
                .collect()
        };
        Ok(ClosedForm { spec, g })
    }

    fn shell(&self, l: usize) -> Vec<f64> {
        let ExponentialSpec { n, eta } = self.spec;
        let (ln_g, sign_g) = self.g[l];
        let mut shell = vec![0.0; 2 * l + 1];
        if sign_g == 0.0 {
            return shell;
        }
        // C·4π·√((2l+1)/4π) = √(2N/sinh 2N)·√(2l+1)
        let ln_pref = 0.5 * self.spec.ln_norm_sq()
            + 0.5 * ((2 * l + 1) as f64).ln()
            + ln_g
            + l as f64 * (0.5 * n).ln();
        let li = l as i64;
        for m in (-li..=li).step_by(2) {
            let up = ((li + m) / 2) as usize;
            let down = ((li - m) / 2) as usize;
            let s = sign_pow(1.0 + eta, up) * sign_pow(1.0 - eta, down);
            if s == 0.0 {
                continue;
            }
            let ln_v = ln_pref
                + 0.5 * (lnf(down * 2) + lnf(up * 2))
                + ln_pow(1.0 + eta, up)
                + ln_pow(1.0 - eta, down)
                - lnf(up)
                - lnf(down);
            let mut sign = s * sign_g;
            // (−1)^m (−1)^{(l−m)/2}
            if (m.rem_euclid(2) == 1) ^ (down % 2 == 1) {
                sign = -sign;
            }
            shell[(m + li) as usize] = sign * ln_v.exp();
        }
        shell
    }
}

/// `Σ_l a_l Y_l^0(θ_u)`, where `θ_u` is the angle from the axis `u`, expanded in the
/// lab frame through the addition theorem.
pub fn axial_state(a: &[Complex64], axis: AngularPoint) -> SphericalExpansion {
    let l_max = a.len().saturating_sub(1);
    let table = LegendreTable::new(l_max, axis.theta());
    let mut out = SphericalExpansion::zeros(l_max);
    for (l, &al) in a.iter().enumerate() {
        let f = (4.0 * PI / (2 * l + 1) as f64).sqrt();
        for m in -(l as i64)..=l as i64 {
            let y = table.get(l, m) * Complex64::from_polar(1.0, m as f64 * axis.phi());
            out.set(l, m, al * f * y.conj());
        }
    }
    out
}

/// `Ψ = Σ_I i^I √(2I+1) j_I(ηN) Y_I^0(θ″) = e^{iηN cos θ″}/√(4π)` with
/// `cos θ″ = sin θ sin φ`: uniform density and annihilated by `L_y`.
pub fn uniform_linear_wp(eta_n: f64, tail_tol: f64) -> Result<SphericalExpansion, StatesError> {
    if !(eta_n >= 0.0) || !eta_n.is_finite() {
        return Err(StatesError::Domain(format!(
            "eta*N must be nonnegative, got {eta_n}"
        )));
    }
    check_tail_tol(tail_tol)?;
    let j = log_sph_bessel_j_array(L_MAX_CAP + 1, eta_n);
    let l_max = scan_cutoff(
        |l| {
            Ok(if j[l].sign == 0.0 {
                0.0
            } else {
                (2 * l + 1) as f64 * (2.0 * j[l].log_abs).exp()
            })
        },
        tail_tol,
    )?;
    let a: Vec<Complex64> = (0..=l_max)
        .map(|l| {
            let v = if j[l].sign == 0.0 { 0.0 } else { j[l].value() };
            Complex64::i().powu(l as u32) * ((2 * l + 1) as f64).sqrt() * v
        })
        .collect();
    let y_axis = AngularPoint::new(PI / 2.0, PI / 2.0)?;
    let mut out = axial_state(&a, y_axis);
    out.normalize()?;
    Ok(out)
}
