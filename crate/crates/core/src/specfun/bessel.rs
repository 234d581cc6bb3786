//! Spherical Bessel functions by Miller's downward recurrence.
//!
//! Values are carried as (mantissa, scale count) pairs so that orders in the
//! hundreds and arguments in the hundreds neither overflow nor underflow.

use super::SpecfunError;

const RESCALE: f64 = 1e200;

/// A real number stored as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSigned {
    pub log_abs: f64,
    pub sign: f64,
}

impl LogSigned {
    pub fn value(&self) -> f64 {
        self.sign * self.log_abs.exp()
    }
}

fn start_order(l_max: usize, x: f64) -> usize {
    let big = (l_max as f64).max(x);
    (big + 20.0 + (50.0 * big).sqrt()).ceil() as usize
}

/// Downward recurrence from order `n_start`, keeping orders `0..=l_max`.
/// Modified: `f_{l-1} = f_{l+1} + (2l+1)/x·f_l`; ordinary: `f_{l-1} = (2l+1)/x·f_l − f_{l+1}`.
/// Returns mantissas and the log of the scale attached to each entry,
/// relative to the scale reached at `l = 0`.
fn miller(n_start: usize, l_max: usize, x: f64, modified: bool) -> (Vec<f64>, Vec<f64>) {
    let mut mant = vec![0.0; l_max + 1];
    let mut count = vec![0i64; l_max + 1];
    let mut f_next = 0.0; // f_{n+1}
    let mut f_curr = 1e-300; // f_n
    let mut scale = 0i64;
    for n in (1..=n_start).rev() {
        if n <= l_max {
            mant[n] = f_curr;
            count[n] = scale;
        }
        let c = (2 * n + 1) as f64 / x;
        let f_prev = if modified {
            f_next + c * f_curr
        } else {
            c * f_curr - f_next
        };
        f_next = f_curr;
        f_curr = f_prev;
        if f_curr.abs() > RESCALE {
            f_curr /= RESCALE;
            f_next /= RESCALE;
            scale += 1;
        }
    }
    mant[0] = f_curr;
    count[0] = scale;
    let ln_rescale = RESCALE.ln();
    let rel: Vec<f64> = count
        .iter()
        .map(|&c| (c - scale) as f64 * ln_rescale)
        .collect();
    (mant, rel)
}

/// `ln i_0(x) = ln(sinh x / x)`.
fn ln_i0(x: f64) -> f64 {
    if x < 20.0 {
        (x.sinh() / x).ln()
    } else {
        x - (2.0 * x).ln() + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// `ln i_l(x)` for `0 <= l <= l_max`, with `i_l(x) = √(π/2x)·I_{l+1/2}(x)`.
/// All values are positive for `x > 0`.
pub fn log_mod_sph_bessel_i_array(l_max: usize, x: f64) -> Result<Vec<f64>, SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain(format!(
            "modified spherical Bessel needs finite x > 0, got {x}"
        )));
    }
    let (mant, rel) = miller(start_order(l_max, x), l_max, x, true);
    let anchor = ln_i0(x);
    let m0 = mant[0];
    Ok(mant
        .iter()
        .zip(&rel)
        .map(|(&m, &r)| {
            let ratio = m / m0;
            let ln_ratio = if ratio.is_normal() {
                ratio.ln()
            } else {
                m.ln() - m0.ln()
            };
            ln_ratio + r + anchor
        })
        .collect())
}

/// Modified spherical Bessel function of the first kind in log-magnitude form.
pub fn mod_sph_bessel_i(l: usize, x: f64) -> Result<LogSigned, SpecfunError> {
    let v = log_mod_sph_bessel_i_array(l, x)?;
    Ok(LogSigned {
        log_abs: v[l],
        sign: 1.0,
    })
}

/// `j_l(x)` for `0 <= l <= l_max` in log-magnitude form, so that orders far
/// above `x` keep their magnitude instead of flushing to zero.
pub fn log_sph_bessel_j_array(l_max: usize, x: f64) -> Vec<LogSigned> {
    let x_abs = x.abs();
    if x_abs == 0.0 {
        return (0..=l_max)
            .map(|l| LogSigned {
                log_abs: if l == 0 { 0.0 } else { f64::NEG_INFINITY },
                sign: if l == 0 { 1.0 } else { 0.0 },
            })
            .collect();
    }
    let n_start = start_order(l_max.max(1), x_abs);
    let (mant, rel) = miller(n_start, n_start, x_abs, false);
    // normalize with Σ(2l+1) j_l² = 1 over every order the recurrence visited;
    // entries on an older scale are negligible in the sum
    let peak = mant
        .iter()
        .zip(&rel)
        .filter(|(_, &r)| r == 0.0)
        .fold(0.0f64, |a, (m, _)| a.max(m.abs()));
    let sum: f64 = mant
        .iter()
        .zip(&rel)
        .enumerate()
        .map(|(l, (&m, &r))| {
            let v = m / peak * r.exp();
            (2 * l + 1) as f64 * v * v
        })
        .sum();
    let ln_norm = -0.5 * sum.ln();

    let (s, c) = x_abs.sin_cos();
    let j0 = s / x_abs;
    let j1 = s / (x_abs * x_abs) - c / x_abs;
    let flip = if j0.abs() >= j1.abs() {
        j0 * mant[0] < 0.0
    } else {
        j1 * mant[1] < 0.0
    };
    (0..=l_max)
        .map(|l| {
            let m = mant[l];
            let mut sign = m.signum();
            if m == 0.0 {
                sign = 0.0;
            }
            if flip {
                sign = -sign;
            }
            if x < 0.0 && l % 2 == 1 {
                sign = -sign;
            }
            LogSigned {
                log_abs: (m.abs() / peak).ln() + rel[l] + ln_norm,
                sign,
            }
        })
        .collect()
}

/// `j_l(x)` for `0 <= l <= l_max`; entries below the f64 range flush to zero.
pub fn sph_bessel_j_array(l_max: usize, x: f64) -> Vec<f64> {
    log_sph_bessel_j_array(l_max, x)
        .iter()
        .map(|v| if v.sign == 0.0 { 0.0 } else { v.value() })
        .collect()
}

/// Ordinary spherical Bessel function `j_l(x)`.
pub fn sph_bessel_j(l: usize, x: f64) -> f64 {
    sph_bessel_j_array(l, x)[l]
}
