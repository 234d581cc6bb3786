use super::{lnf, SpecfunError};

/// `⟨l1 l2 m1 m2 | L M⟩` (Condon–Shortley), via the Racah sum in log space.
///
/// Returns 0 when `M != m1 + m2` or the triangle rule fails.
pub fn clebsch_gordan(
    l1: usize,
    l2: usize,
    m1: i64,
    m2: i64,
    big_l: usize,
    big_m: i64,
) -> Result<f64, SpecfunError> {
    if m1.unsigned_abs() as usize > l1
        || m2.unsigned_abs() as usize > l2
        || big_m.unsigned_abs() as usize > big_l
    {
        return Err(SpecfunError::Domain(format!(
            "invalid projection in <{l1} {l2} {m1} {m2}|{big_l} {big_m}>"
        )));
    }
    if m1 + m2 != big_m || !triangle(l1, l2, big_l) {
        return Ok(0.0);
    }
    check_capacity(l1 + l2 + big_l + 1)?;
    if m1 == 0 && m2 == 0 {
        return Ok(cg_m0_unchecked(l1, l2, big_l));
    }
    Ok(racah_sum(l1, l2, m1, m2, big_l, big_m))
}

fn racah_sum(l1: usize, l2: usize, m1: i64, m2: i64, big_l: usize, big_m: i64) -> f64 {
    let (j1, j2, j) = (l1 as i64, l2 as i64, big_l as i64);
    let f = |n: i64| lnf(n as usize);

    let ln_pref = 0.5
        * (((2 * j + 1) as f64).ln() + f(j + j1 - j2) + f(j - j1 + j2) + f(j1 + j2 - j)
            - f(j1 + j2 + j + 1)
            + f(j + big_m)
            + f(j - big_m)
            + f(j1 - m1)
            + f(j1 + m1)
            + f(j2 - m2)
            + f(j2 + m2));

    let k_min = 0.max(j2 - j - m1).max(j1 - j + m2);
    let k_max = (j1 + j2 - j).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = f(k)
            + f(j1 + j2 - j - k)
            + f(j1 - m1 - k)
            + f(j2 + m2 - k)
            + f(j - j2 + m1 + k)
            + f(j - j1 - m2 + k);
        let term = (ln_pref - ln_den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    sum
}

/// `⟨l1 l2 0 0 | L 0⟩` from its closed form (no alternating sum).
pub fn clebsch_gordan_m0(l1: usize, l2: usize, big_l: usize) -> Result<f64, SpecfunError> {
    if !triangle(l1, l2, big_l) {
        return Ok(0.0);
    }
    check_capacity(l1 + l2 + big_l + 1)?;
    Ok(cg_m0_unchecked(l1, l2, big_l))
}

fn cg_m0_unchecked(l1: usize, l2: usize, big_l: usize) -> f64 {
    let total = l1 + l2 + big_l;
    if total % 2 == 1 {
        return 0.0;
    }
    let g = total / 2;
    let ln_mag = 0.5
        * (((2 * big_l + 1) as f64).ln()
            + lnf(l1 + l2 - big_l)
            + lnf(l1 + big_l - l2)
            + lnf(l2 + big_l - l1)
            - lnf(total + 1))
        + lnf(g)
        - lnf(g - l1)
        - lnf(g - l2)
        - lnf(g - big_l);
    let mag = ln_mag.exp();
    if (g - big_l) % 2 == 0 {
        mag
    } else {
        -mag
    }
}

fn triangle(a: usize, b: usize, c: usize) -> bool {
    c <= a + b && a <= b + c && b <= a + c
}

fn check_capacity(n: usize) -> Result<(), SpecfunError> {
    if n > super::DEFAULT_LOG_FACTORIAL_CAPACITY {
        Err(SpecfunError::Capacity {
            requested: n,
            capacity: super::DEFAULT_LOG_FACTORIAL_CAPACITY,
        })
    } else {
        Ok(())
    }
}
