//! Janssen's symmetric-top coherent state, restricted to integer `I`.

use num_complex::Complex64;

use crate::specfun::lnf;

use super::intelligent::{ln_pow, sign_pow};
use super::{check_tail_tol, scan_cutoff, StatesError, TopExpansion};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopSpec {
    pub r: f64,
    /// Polar angle of the body-frame orientation, in `[0, π]`.
    pub lambda: f64,
}

impl TopSpec {
    pub fn new(r: f64, lambda: f64) -> Result<Self, StatesError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(StatesError::Domain(format!("r must be positive, got {r}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&lambda) {
            return Err(StatesError::Domain(format!(
                "lambda must lie in [0, pi], got {lambda}"
            )));
        }
        Ok(TopSpec { r, lambda })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JanssenState {
    pub expansion: TopExpansion,
    /// Factor applied to the integer-`I` coefficients to restore unit norm
    /// (close to `1/√((1 + e^{−4r})/2)`, plus the truncation tail).
    pub renormalization: f64,
}

/// Unnormalized `C_{IK} = e^{−r}(−1)^{I+K}(2r)^I sin^{I+K}(λ/2) cos^{I−K}(λ/2) / √((I+K)!(I−K)!)`.
pub(crate) fn janssen_raw(spec: TopSpec, i: usize, k: i64) -> f64 {
    let (sh, ch) = (0.5 * spec.lambda).sin_cos();
    let up = (i as i64 + k) as usize;
    let down = (i as i64 - k) as usize;
    let s = sign_pow(sh, up) * sign_pow(ch, down);
    if s == 0.0 {
        return 0.0;
    }
    let ln_v = -spec.r + i as f64 * (2.0 * spec.r).ln() + ln_pow(sh, up) + ln_pow(ch, down)
        - 0.5 * (lnf(up) + lnf(down));
    let sign = if up % 2 == 0 { s } else { -s };
    sign * ln_v.exp()
}

/// `|r, λ⟩_i`: integer `I` only, truncated by `tail_tol` and renormalized.
pub fn janssen_top_state(spec: TopSpec, tail_tol: f64) -> Result<JanssenState, StatesError> {
    let spec = TopSpec::new(spec.r, spec.lambda)?;
    check_tail_tol(tail_tol)?;
    let r = spec.r;
    // integer-I shells carry Poisson(2I; 2r) each, in total (1 + e^{−4r})/2
    let z = 0.5 * (1.0 + (-4.0 * r).exp());
    let shell = |i: usize| (2.0 * i as f64 * (2.0 * r).ln() - 2.0 * r - lnf(2 * i)).exp();
    let l_max = scan_cutoff(|i| Ok(shell(i) / z), tail_tol)?;
    let mut out = TopExpansion::zeros(l_max);
    for i in 0..=l_max {
        for k in -(i as i64)..=i as i64 {
            out.set(i, k, Complex64::new(janssen_raw(spec, i, k), 0.0));
        }
    }
    let norm = out.normalize()?;
    Ok(JanssenState {
        expansion: out,
        renormalization: 1.0 / norm,
    })
}
