use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotwave::observables::{autocorrelation, density_grid, Frame, GridSpec, Spectrum};
use rotwave::revivals::*;
use rotwave::states::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn coprime_pairs(n_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for m in 1..n {
            if gcd(m, n) == 1 {
                out.push((m, n));
            }
        }
    }
    out
}

fn random_general(seed: u64, l_max: usize, eta: f64) -> SphericalExpansion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..=l_max).map(|_| rng.gen_range(-1.0..1.0)).collect();
    general_wp(&w, eta).unwrap()
}

#[test]
fn gauss_sum_identity_and_cases() {
    for (m, n) in coprime_pairs(40) {
        let d = gauss_decompose(m, n).unwrap();
        let folded = d.time.denom();
        assert_eq!(d.l as u64, period_for(folded));
        let expect_l = if folded % 4 == 0 { folded / 2 } else { folded };
        assert_eq!(d.l as u64, expect_l);
        let r = 1.0 / (d.q as f64).sqrt();
        for s in d.nonzero() {
            assert!((d.a[s].norm() - r).abs() < 1e-12, "{m}/{n}");
        }
        if folded % 4 == 2 {
            // case c: only odd s survive
            assert!(d.nonzero().all(|s| s % 2 == 1));
        }
        let (tm, tn) = (d.time.numer() as i128, d.time.denom() as i128);
        for i in 0..200i128 {
            let lhs: Complex64 = (0..d.l)
                .map(|s| d.a[s] * turn_phase(((i * s as i128) % d.l as i128) as f64 / d.l as f64))
                .sum();
            let rhs = turn_phase(((i * i * tm) % tn) as f64 / tn as f64);
            assert!((lhs - rhs).norm() < 1e-10);
        }
        if 2 * m < n {
            let has_clone = n % 2 == 1 || n % 4 == 2;
            assert_eq!(d.s0.is_some(), has_clone, "{m}/{n}");
            if let Some(s0) = d.s0 {
                assert_eq!(s0 as u64, n - m);
            }
        }
    }
    assert!(gauss_decompose(2, 4).is_err());
}

#[test]
fn reconstruction_for_random_states() {
    for seed in 0..4 {
        let s = random_general(seed, 40, 0.3 + 0.2 * seed as f64);
        for (m, n) in coprime_pairs(12) {
            let d = gauss_decompose(m, n).unwrap();
            let r = reconstruct(&fractional_waves(&s, &d), s.l_max());
            let direct = evolve(&s, TimePoint::Exact(Fraction::new(m, n).unwrap()));
            assert!(r.max_abs_diff(&direct) < 1e-10, "{m}/{n}");
        }
    }
}

#[test]
fn clone_at_s0_is_weight_independent() {
    let states = [
        exponential_wp(ExponentialSpec::new(20.0, 0.0).unwrap(), 1e-14).unwrap(),
        exponential_wp(ExponentialSpec::new(20.0, 0.5).unwrap(), 1e-14).unwrap(),
        random_general(7, 30, 0.8),
    ];
    for s in &states {
        for (m, n) in coprime_pairs(12) {
            if 2 * m > n || n % 4 == 0 {
                continue;
            }
            let d = gauss_decompose(m, n).unwrap();
            let s0 = d.s0.unwrap();
            let w = fractional_waves(s, &d)
                .into_iter()
                .find(|w| w.s == s0)
                .unwrap();
            assert!(w.wave.max_abs_diff(s) < 1e-12);
        }
    }
}

#[test]
fn pairing_under_conjugation() {
    let s = exponential_wp(ExponentialSpec::new(20.0, 0.5).unwrap(), 1e-16).unwrap();
    let mirror = exponential_wp(ExponentialSpec::new(20.0, -0.5).unwrap(), 1e-16).unwrap();
    let rep = clone_report(&s, &gauss_decompose(1, 3).unwrap(), Some(&mirror));
    assert_eq!(rep.pairs.len(), 3);
    for p in &rep.pairs {
        assert!(p.max_error < 1e-12);
    }
}

#[test]
fn circular_density_rotates_rigidly() {
    let s = exponential_wp(ExponentialSpec::new(5.0, 1.0).unwrap(), 1e-20).unwrap();
    let t = 0.0137;
    let grid = GridSpec::new(19, 73).unwrap();
    let g0 = density_grid(&s, grid, Frame::Lab).unwrap();
    let classical = evolve_with(&s, Spectrum::Classical { rate: 1.0 }, TimePoint::Float(t));
    let p =
        rotwave::specfun::AngularPoint::new(PI / 2.0, (2.0 * PI * t).rem_euclid(2.0 * PI)).unwrap();
    // the maximum moves from φ = 0 to φ = 2πt
    let peak0 = g0.values.iter().cloned().fold(0.0, f64::max);
    assert!((classical.evaluate(p).norm_sqr() - peak0).abs() < 1e-9);
}

#[test]
fn half_revival_for_diatomic_states() {
    let half = TimePoint::Exact(Fraction::new(1, 2).unwrap());
    let mut states = vec![
        uniform_linear_wp(20.0, 1e-14).unwrap(),
        intelligent_harmonic(3, 0.2).unwrap(),
        random_general(3, 25, -0.4),
    ];
    for eta in [0.0, 0.5, 1.0, 2.0] {
        states.push(exponential_wp(ExponentialSpec::new(20.0, eta).unwrap(), 1e-14).unwrap());
    }
    for s in &states {
        let a = autocorrelation(s, Spectrum::Quantum, &[half])[0];
        assert!((a - 1.0).abs() < 1e-12);
    }
}

#[test]
fn carpet_first_row_and_reflection() {
    let s = exponential_wp(ExponentialSpec::new(20.0, 1.0).unwrap(), 1e-14).unwrap();
    let times: Vec<TimePoint> = (0..8).map(|k| TimePoint::Float(k as f64 / 16.0)).collect();
    let c = carpet(&s, PI / 2.0, &times, 73, Spectrum::Quantum).unwrap();
    for (j, phi) in c.axis.iter().enumerate() {
        let p = rotwave::specfun::AngularPoint::new(PI / 2.0, phi.rem_euclid(2.0 * PI)).unwrap();
        assert!((c.row(0)[j] - s.evaluate(p).norm_sqr()).abs() < 1e-10);
    }
    let lin = exponential_wp(ExponentialSpec::new(50.0, 0.0).unwrap(), 1e-14).unwrap();
    let ac = axis_carpet(&lin, Frame::XAxis, &times, 91, Spectrum::Quantum, true).unwrap();
    for i in 0..times.len() {
        let row = ac.row(i);
        assert!(row[0].abs() < 1e-10 && row[row.len() - 1].abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evolution_is_unitary(n in 1.0f64..30.0, eta in -2.0f64..2.0, t in 0.0f64..3.0) {
        let s = exponential_wp(ExponentialSpec::new(n, eta).unwrap(), 1e-12).unwrap();
        let e = evolve(&s, TimePoint::Float(t));
        prop_assert!((e.norm_sqr() - s.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn folded_times_match_direct(m in 1u64..60, n in 2u64..60) {
        prop_assume!(gcd(m % n, n) == 1 && m % n != 0);
        let m = m % n;
        let s = random_general(m * 100 + n, 20, 0.6);
        let d = gauss_decompose(m, n).unwrap();
        let r = reconstruct(&fractional_waves(&s, &d), s.l_max());
        let direct = evolve(&s, TimePoint::Exact(Fraction::new(m, n).unwrap()));
        prop_assert!(r.max_abs_diff(&direct) < 1e-10);
    }
}
