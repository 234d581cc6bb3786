//! Wigner small-d matrix elements `d^l_{m1 m2}(β)`.

use super::{lnf, SpecfunError};

const RESCALE: f64 = 1e150;

/// `P_k^{(a,b)}(x)` as (mantissa, ln scale).
fn jacobi_scaled(k: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p_curr = 0.5 * (a - b + (a + b + 2.0) * x);
    let mut ln_scale = 0.0;
    for n in 2..=k {
        let n = n as f64;
        let s = 2.0 * n + a + b;
        let c1 = 2.0 * n * (n + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let p_next = (c2 * p_curr - c3 * p_prev) / c1;
        p_prev = p_curr;
        p_curr = p_next;
        if p_curr.abs() > RESCALE {
            p_curr /= RESCALE;
            p_prev /= RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    (p_curr, ln_scale)
}

/// `ln |x|^p` with `0^0 = 1`.
fn ln_pow(x: f64, p: usize) -> f64 {
    if p == 0 {
        0.0
    } else {
        p as f64 * x.abs().ln()
    }
}

/// `d^l_{m1 m2}(β)` in the convention `d^1_{10}(β) = −sin β/√2`.
pub fn wigner_small_d(l: usize, m1: i64, m2: i64, beta: f64) -> Result<f64, SpecfunError> {
    let li = l as i64;
    if m1.abs() > li || m2.abs() > li {
        return Err(SpecfunError::Domain(format!(
            "invalid projection in d^{l}_({m1},{m2})"
        )));
    }
    // reduce to a Jacobi polynomial of degree k with nonnegative a, b
    let candidates = [li + m2, li - m2, li + m1, li - m1];
    let k = *candidates.iter().min().unwrap();
    let (a, lambda) = if k == li + m2 {
        (m1 - m2, m1 - m2)
    } else if k == li - m2 || k == li + m1 {
        (m2 - m1, 0)
    } else {
        (m1 - m2, m1 - m2)
    };
    let b = 2 * li - 2 * k - a;
    let (ku, au, bu) = (k as usize, a as usize, b as usize);

    let (sh, ch) = (0.5 * beta).sin_cos();
    let (p, ln_p) = jacobi_scaled(ku, a as f64, b as f64, beta.cos());
    if p == 0.0 || (au > 0 && sh == 0.0) || (bu > 0 && ch == 0.0) {
        return Ok(0.0);
    }
    let ln_binom_ratio = (lnf(2 * l - ku) - lnf(ku + au) - lnf(2 * l - 2 * ku - au))
        - (lnf(ku + bu) - lnf(bu) - lnf(ku));
    let ln_mag = 0.5 * ln_binom_ratio + ln_pow(sh, au) + ln_pow(ch, bu) + ln_p + p.abs().ln();
    let mut sign = p.signum();
    if sh < 0.0 && au % 2 == 1 {
        sign = -sign;
    }
    if ch < 0.0 && bu % 2 == 1 {
        sign = -sign;
    }
    if lambda.rem_euclid(2) == 1 {
        sign = -sign;
    }
    Ok(sign * ln_mag.exp())
}

/// `d^j_{−j,m}(β) = √C(2j, j+m) · cos^{j−m}(β/2) · sin^{j+m}(β/2)`, for all `m`.
/// Index `m + j` of the result.
pub fn wigner_d_lowest_row(j: usize, beta: f64) -> Vec<f64> {
    let (sh, ch) = (0.5 * beta).sin_cos();
    let ji = j as i64;
    (-ji..=ji)
        .map(|m| {
            let up = (ji + m) as usize;
            let down = (ji - m) as usize;
            if (up > 0 && sh == 0.0) || (down > 0 && ch == 0.0) {
                return 0.0;
            }
            let ln_mag =
                0.5 * (lnf(2 * j) - lnf(up) - lnf(down)) + ln_pow(sh, up) + ln_pow(ch, down);
            let mut v = ln_mag.exp();
            if sh < 0.0 && up % 2 == 1 {
                v = -v;
            }
            if ch < 0.0 && down % 2 == 1 {
                v = -v;
            }
            v
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The explicit Wigner sum, for small `l` only.
    pub(crate) fn wigner_sum(l: i64, mp: i64, m: i64, beta: f64) -> f64 {
        let f = |n: i64| lnf(n as usize);
        let (sh, ch) = (0.5 * beta).sin_cos();
        let s_min = 0.max(m - mp);
        let s_max = (l + m).min(l - mp);
        let mut sum = 0.0;
        for s in s_min..=s_max {
            let ln_c = 0.5 * (f(l + mp) + f(l - mp) + f(l + m) + f(l - m))
                - f(l + m - s)
                - f(s)
                - f(mp - m + s)
                - f(l - mp - s);
            let term = ln_c.exp()
                * ch.powi((2 * l + m - mp - 2 * s) as i32)
                * sh.powi((mp - m + 2 * s) as i32);
            sum += if (mp - m + s).rem_euclid(2) == 0 {
                term
            } else {
                -term
            };
        }
        sum
    }

    #[test]
    fn identity_at_zero() {
        for l in 0..6usize {
            for a in -(l as i64)..=l as i64 {
                for b in -(l as i64)..=l as i64 {
                    let d = wigner_small_d(l, a, b, 0.0).unwrap();
                    assert!(
                        (d - if a == b { 1.0 } else { 0.0 }).abs() < 1e-14,
                        "{l} {a} {b} {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn low_order_closed_forms() {
        let beta: f64 = 0.83;
        assert!((wigner_small_d(1, 0, 0, beta).unwrap() - beta.cos()).abs() < 1e-15);
        let d10 = wigner_small_d(1, 1, 0, beta).unwrap();
        assert!((d10 + beta.sin() / 2f64.sqrt()).abs() < 1e-15);
        let d11 = wigner_small_d(1, 1, 1, beta).unwrap();
        assert!((d11 - 0.5 * (1.0 + beta.cos())).abs() < 1e-15);
    }

    #[test]
    fn matches_explicit_sum() {
        for l in 0..=8i64 {
            for mp in -l..=l {
                for m in -l..=l {
                    for &beta in &[0.3, 1.2, 2.0, 2.9, -0.7] {
                        let a = wigner_small_d(l as usize, mp, m, beta).unwrap();
                        let b = wigner_sum(l, mp, m, beta);
                        assert!((a - b).abs() < 1e-12, "l={l} {mp} {m} {beta}: {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn unitarity_row() {
        for m1 in -5..=5 {
            let s: f64 = (-5..=5)
                .map(|m2| wigner_small_d(5, m1, m2, 0.7).unwrap().powi(2))
                .sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn lowest_row_matches_general() {
        for j in [0usize, 1, 4, 9] {
            let row = wigner_d_lowest_row(j, 1.3);
            for (i, v) in row.iter().enumerate() {
                let m = i as i64 - j as i64;
                let g = wigner_small_d(j, -(j as i64), m, 1.3).unwrap();
                assert!((v - g).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn large_order_is_finite_and_unitary() {
        let l = 300usize;
        let s: f64 = (-300..=300)
            .map(|m2| wigner_small_d(l, 17, m2, 1.1).unwrap().powi(2))
            .sum();
        assert!((s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_projection() {
        assert!(wigner_small_d(2, 3, 0, 0.1).is_err());
    }
}
