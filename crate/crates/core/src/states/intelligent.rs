use num_complex::Complex64;

use crate::specfun::lnf;

use super::{SphericalExpansion, StatesError};

/// `ln|x|^p` with `0^0 = 1`.
pub(crate) fn ln_pow(x: f64, p: usize) -> f64 {
    if p == 0 {
        0.0
    } else {
        p as f64 * x.abs().ln()
    }
}

/// Sign of `x^p` (zero when `x = 0 < p`).
pub(crate) fn sign_pow(x: f64, p: usize) -> f64 {
    if p == 0 {
        1.0
    } else if x == 0.0 {
        0.0
    } else if x < 0.0 && p % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Unnormalized `C^l_m` in (log-magnitude, sign) form for `m ≡ l (mod 2)`:
/// `(−1)^{(l−m)/2} (1+η)^{(l+m)/2} (1−η)^{(l−m)/2} √((l−m)!(l+m)!) / (((l−m)/2)! ((l+m)/2)!)`.
///
/// Consecutive entries satisfy the two-step recurrence
/// `C_{m+1} = −C_{m−1}·(1+η)/(1−η)·√((l(l+1)−m(m−1))/(l(l+1)−m(m+1)))`,
/// and the form stays finite at `η = ±1`.
pub(crate) fn ln_intelligent_raw(l: usize, m: i64, eta: f64) -> (f64, f64) {
    let up = ((l as i64 + m) / 2) as usize;
    let down = ((l as i64 - m) / 2) as usize;
    let lm = (l as i64 - m) as usize;
    let lp = (l as i64 + m) as usize;
    let ln_mag = ln_pow(1.0 + eta, up) + ln_pow(1.0 - eta, down) + 0.5 * (lnf(lm) + lnf(lp))
        - lnf(down)
        - lnf(up);
    let mut sign = sign_pow(1.0 + eta, up) * sign_pow(1.0 - eta, down);
    if down % 2 == 1 {
        sign = -sign;
    }
    (ln_mag, sign)
}

/// Normalized `C^l_m(η)` for `m = −l..=l` (index `m + l`); entries with
/// `m ≢ l (mod 2)` are zero.
pub(crate) fn intelligent_coefficients(l: usize, eta: f64) -> Vec<f64> {
    let li = l as i64;
    let raw: Vec<(f64, f64)> = (-li..=li)
        .map(|m| {
            if (li - m) % 2 != 0 {
                (f64::NEG_INFINITY, 0.0)
            } else {
                ln_intelligent_raw(l, m, eta)
            }
        })
        .collect();
    let peak = raw
        .iter()
        .filter(|(_, s)| *s != 0.0)
        .fold(f64::NEG_INFINITY, |a, (v, _)| a.max(*v));
    let norm: f64 = raw
        .iter()
        .filter(|(_, s)| *s != 0.0)
        .map(|(v, _)| (2.0 * (v - peak)).exp())
        .sum::<f64>()
        .sqrt();
    raw.iter()
        .map(|(v, s)| {
            if *s == 0.0 {
                0.0
            } else {
                s * (v - peak).exp() / norm
            }
        })
        .collect()
}

/// The intelligent spherical harmonic `|Y^l_η⟩`: the normalized eigenstate of `L²`
/// annihilated by `L_x + iη L_y`.
pub fn intelligent_harmonic(l: usize, eta: f64) -> Result<SphericalExpansion, StatesError> {
    if !eta.is_finite() {
        return Err(StatesError::Domain(format!(
            "eta must be finite, got {eta}"
        )));
    }
    let mut out = SphericalExpansion::zeros(l);
    for (i, c) in intelligent_coefficients(l, eta).into_iter().enumerate() {
        out.set(l, i as i64 - l as i64, Complex64::new(c, 0.0));
    }
    Ok(out)
}

/// `Σ_l λ_l |Y^l_η⟩`, normalized.
pub fn general_wp(weights: &[f64], eta: f64) -> Result<SphericalExpansion, StatesError> {
    if weights.is_empty() || weights.iter().all(|w| *w == 0.0) {
        return Err(StatesError::Domain(
            "general_wp needs a nonzero weight".into(),
        ));
    }
    if weights.iter().any(|w| !w.is_finite()) || !eta.is_finite() {
        return Err(StatesError::Domain(
            "general_wp weights and eta must be finite".into(),
        ));
    }
    let l_max = weights.len() - 1;
    let mut out = SphericalExpansion::zeros(l_max);
    for (l, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (i, c) in intelligent_coefficients(l, eta).into_iter().enumerate() {
            out.set(l, i as i64 - l as i64, Complex64::new(w * c, 0.0));
        }
    }
    out.normalize()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn annihilation_residual(s: &SphericalExpansion, eta: f64) -> f64 {
        // (L_x + iη L_y) = ((1+η) L_+ + (1−η) L_-)/2
        let r = s.apply_lplus().combine(
            Complex64::new(0.5 * (1.0 + eta), 0.0),
            &s.apply_lminus(),
            Complex64::new(0.5 * (1.0 - eta), 0.0),
        );
        r.norm_sqr().sqrt()
    }

    #[test]
    fn l1_closed_form() {
        for &eta in &[-0.7, 0.0, 0.3, 2.5] {
            let c = intelligent_coefficients(1, eta);
            let n = (2.0 * (1.0 + eta * eta)).sqrt();
            assert!((c[2] - (1.0 + eta) / n).abs() < 1e-15);
            assert!((c[0] + (1.0 - eta) / n).abs() < 1e-15);
            assert_eq!(c[1], 0.0);
        }
    }

    #[test]
    fn l2_closed_form() {
        let eta: f64 = 0.4;
        let c = intelligent_coefficients(2, eta);
        let raw = [
            (1.0 - eta).powi(2),
            -(2.0f64 / 3.0).sqrt() * (1.0 - eta * eta),
            (1.0 + eta).powi(2),
        ];
        let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((c[0] - raw[0] / n).abs() < 1e-15);
        assert!((c[2] - raw[1] / n).abs() < 1e-15);
        assert!((c[4] - raw[2] / n).abs() < 1e-15);
    }

    #[test]
    fn recurrence_holds() {
        for l in 1..30usize {
            for &eta in &[0.2, -0.55, 0.9, 1.7] {
                let c = intelligent_coefficients(l, eta);
                let ll = (l * (l + 1)) as f64;
                for m in (-(l as i64) + 1)..(l as i64) {
                    if (l as i64 - m) % 2 == 0 {
                        continue;
                    }
                    let prev = c[(m - 1 + l as i64) as usize];
                    let next = c[(m + 1 + l as i64) as usize];
                    let mf = m as f64;
                    let ratio = ((ll - mf * (mf - 1.0)) / (ll - mf * (mf + 1.0))).sqrt();
                    let expected = -prev * (1.0 + eta) / (1.0 - eta) * ratio;
                    assert!((next - expected).abs() <= 1e-12 * next.abs().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn circular_limits_are_pure() {
        for l in 1..8usize {
            let c = intelligent_coefficients(l, 1.0);
            assert_eq!(c[2 * l], 1.0);
            assert!(c[..2 * l].iter().all(|v| *v == 0.0));
            let c = intelligent_coefficients(l, -1.0);
            assert_eq!(c[0].abs(), 1.0);
        }
    }

    #[test]
    fn annihilated_and_normalized() {
        for l in 0..20usize {
            for &eta in &[0.0, 0.3, -1.0, 1.0, 3.0] {
                let s = intelligent_harmonic(l, eta).unwrap();
                assert!((s.norm_sqr() - 1.0).abs() < 1e-13);
                assert!(annihilation_residual(&s, eta) < 1e-10 * (l as f64 + 1.0));
                assert!(s.has_eta_parity());
            }
        }
    }

    #[test]
    fn general_wp_rejects_zero() {
        assert!(general_wp(&[0.0, 0.0], 0.5).is_err());
        assert!(general_wp(&[], 0.5).is_err());
        let s = general_wp(&[0.0, 2.0], 0.3).unwrap();
        assert!(s.max_abs_diff(&intelligent_harmonic(1, 0.3).unwrap()) < 1e-15);
    }
}
