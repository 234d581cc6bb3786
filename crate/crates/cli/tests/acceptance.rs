//! Acceptance criteria 1-10, one PASS/FAIL line each.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotwave::observables::*;
use rotwave::revivals::*;
use rotwave::specfun::AngularPoint;
use rotwave::states::*;
use rotwave::toprotor::*;

const NS: [f64; 4] = [1.0, 5.0, 20.0, 50.0];
const ETAS: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.0];

/// Max |ΔC_I²| between the circular N=20 packet and the spin-½ k²=39 boson
/// packet, from the exact series in 40-digit arithmetic.
const FIG1_GOLDEN: f64 = 1.5970007178206972e-3;
const FIG1_THRESHOLD: f64 = 2.0e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn exp_state(n: f64, eta: f64, tail: f64) -> SphericalExpansion {
    exponential_wp(ExponentialSpec::new(n, eta).unwrap(), tail).unwrap()
}

fn random_general(seed: u64, l_max: usize, eta: f64) -> SphericalExpansion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..=l_max).map(|_| rng.gen_range(-1.0..1.0)).collect();
    general_wp(&w, eta).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Relative error, checked absolutely when the target is zero.
fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

fn c1_moments() -> Outcome {
    let mut worst = 0.0f64;
    for n in NS {
        let s_n = n / (2.0 * n).tanh() - 0.5;
        for eta in ETAS {
            let r = angular_momentum_report(&exp_state(n, eta, DEFAULT_TAIL_TOL));
            let ly2 = 0.5 * s_n;
            let lx2 = 0.5 * eta * eta * s_n;
            let lz2 = ly2 * (1.0 - 2.0 * eta * eta) + eta * eta * n * n;
            for (got, want) in [
                (r.mean_lz, eta * s_n),
                (r.mean_ly2, ly2),
                (r.mean_lx2, lx2),
                (r.mean_lz2, lz2),
            ] {
                worst = worst.max(rel(got, want));
            }
        }
    }
    outcome(
        worst < 1e-8,
        format!("max relative error {worst:.3e} (tol 1e-8)"),
    )
}

fn c2_uncertainty() -> Outcome {
    let mut worst = 0.0f64;
    for n in NS {
        for eta in ETAS {
            let r = angular_momentum_report(&exp_state(n, eta, DEFAULT_TAIL_TOL));
            let err = (r.uncertainty_product - r.lz_bound).abs() / r.lz_bound.max(1.0);
            worst = worst.max(err);
        }
    }
    let q = gaussian_seed_wp(GaussianSeedSpec::new(10.0, 0.5, 0.5).unwrap(), 1e-14).unwrap();
    let c = uncertainty_check(&q);
    let gap = (c.product - c.bound) / c.bound;
    outcome(
        worst < 1e-8 && gap > 1e-3,
        format!("max |product-bound|/max(bound,1) {worst:.3e} (tol 1e-8); eps=0.5 state exceeds bound by {gap:.3e} relative (need > 1e-3)"),
    )
}

fn c3_density() -> Outcome {
    let n: f64 = 20.0;
    let c = n / (TAU * (2.0 * n).sinh());
    let grid = GridSpec::default();
    let mut worst = 0.0f64;
    for eta in ETAS {
        let s = exp_state(n, eta, 1e-24);
        let g = density_grid(&s, grid, Frame::Lab).unwrap();
        for (i, th) in g.theta_nodes.iter().enumerate() {
            for (j, ph) in g.phi_nodes.iter().enumerate() {
                let cos_tp = th.sin() * ph.cos();
                let exact = c * (2.0 * n * cos_tp).exp();
                worst = worst.max((g.get(i, j) - exact).abs());
            }
        }
    }
    let p = AngularPoint::new(PI / 2.0, 0.0).unwrap();
    let peak = c * (2.0 * n * p.cos_theta_x()).exp();
    outcome(
        worst < 1e-8,
        format!("max pointwise error {worst:.3e} on 181x361, peak density {peak:.3} (tol 1e-8)"),
    )
}

fn c4_gauss() -> Outcome {
    let states = [exp_state(20.0, 0.5, 1e-14), random_general(11, 60, 0.7)];
    let mut recon = 0.0f64;
    let mut moduli = 0.0f64;
    let mut case_errors = 0;
    for n in 2..=40u64 {
        for m in 1..n {
            if gcd(m, n) != 1 {
                continue;
            }
            let d = gauss_decompose(m, n).unwrap();
            let folded = d.time.denom();
            let l = if folded % 4 == 0 { folded / 2 } else { folded };
            if d.l as u64 != l {
                case_errors += 1;
            }
            if folded % 4 == 2 && d.nonzero().any(|s| s % 2 == 0) {
                case_errors += 1;
            }
            if 2 * m < n {
                let has = n % 2 == 1 || n % 4 == 2;
                if d.s0.is_some() != has || d.s0.is_some_and(|s| s as u64 != n - m) {
                    case_errors += 1;
                }
            }
            let r = 1.0 / (d.q as f64).sqrt();
            for s in d.nonzero() {
                moduli = moduli.max((d.a[s].norm() - r).abs());
            }
            if n <= 12 {
                for s in &states {
                    let w = fractional_waves(s, &d);
                    let direct = evolve(s, TimePoint::Exact(Fraction::new(m, n).unwrap()));
                    recon = recon.max(reconstruct(&w, s.l_max()).max_abs_diff(&direct));
                }
            }
        }
    }
    outcome(
        recon < 1e-10 && moduli < 1e-12 && case_errors == 0,
        format!("reconstruction {recon:.3e} (tol 1e-10), |a_s| deviation {moduli:.3e} (tol 1e-12), case mismatches {case_errors} for n<=40"),
    )
}

fn c5_cloning() -> Outcome {
    let circ = exp_state(20.0, 1.0, 1e-14);
    let mut worst_rot = 1.0f64;
    let mut waves = 0;
    for n in 3..=7u64 {
        for m in 1..n {
            if gcd(m, n) != 1 {
                continue;
            }
            let rep = clone_report(&circ, &gauss_decompose(m, n).unwrap(), None);
            for e in &rep.entries {
                worst_rot = worst_rot.min(e.rotated_fidelity);
                waves += 1;
            }
        }
    }
    let states = [
        exp_state(20.0, 0.0, 1e-14),
        exp_state(20.0, 0.5, 1e-14),
        circ.clone(),
        random_general(5, 40, 0.35),
    ];
    let mut s0_err = 0.0f64;
    for s in &states {
        for n in 3..=40u64 {
            if n % 4 == 0 {
                continue;
            }
            for m in 1..n {
                if gcd(m, n) != 1 || 2 * m > n {
                    continue;
                }
                let d = gauss_decompose(m, n).unwrap();
                let s0 = d.s0.expect("clone index");
                let w = fractional_waves(s, &d)
                    .into_iter()
                    .find(|w| w.s == s0)
                    .unwrap();
                s0_err = s0_err.max(w.wave.max_abs_diff(s));
            }
        }
    }
    outcome(
        worst_rot > 1.0 - 1e-6 && s0_err < 1e-12,
        format!("min rotated-clone fidelity 1-{:.3e} over {waves} waves (need > 1-1e-6); s0 wave max deviation {s0_err:.3e} (tol 1e-12)", 1.0 - worst_rot),
    )
}

fn c6_half_revival() -> Outcome {
    let half = TimePoint::Exact(Fraction::new(1, 2).unwrap());
    let mut states = Vec::new();
    for n in NS {
        for eta in ETAS {
            states.push(exp_state(n, eta, DEFAULT_TAIL_TOL));
        }
    }
    states.push(uniform_linear_wp(20.0, 1e-14).unwrap());
    states.push(intelligent_harmonic(5, 0.3).unwrap());
    states.push(random_general(9, 30, -0.6));
    states.push(gaussian_seed_wp(GaussianSeedSpec::new(10.0, 0.5, 0.5).unwrap(), 1e-14).unwrap());
    let b = boson_circular_state(BosonSpec::new(39f64.sqrt(), 1, true).unwrap(), 1e-14).unwrap();
    states.push(b.expansion().unwrap());
    let worst = states
        .iter()
        .map(|s| (autocorrelation(s, Spectrum::Quantum, &[half])[0] - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-12,
        format!(
            "max |A(T_rev/2) - 1| {worst:.3e} over {} states (tol 1e-12)",
            states.len()
        ),
    )
}

fn c7_boson() -> Outcome {
    let e = exp_state(20.0, 1.0, 1e-16);
    let b = boson_circular_state(BosonSpec::new(39f64.sqrt(), 1, true).unwrap(), 1e-16).unwrap();
    let ew = e.l_weights();
    let bw = b.weights_by_two_j();
    let n = ew.len().max(bw.len().div_ceil(2));
    let worst = (0..n)
        .map(|i| (ew.get(i).copied().unwrap_or(0.0) - bw.get(2 * i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max);
    let drift = (worst - FIG1_GOLDEN).abs();
    outcome(
        worst < FIG1_THRESHOLD && drift < 1e-10,
        format!("max |dC_I^2| {worst:.10e} (threshold {FIG1_THRESHOLD:e}, golden {FIG1_GOLDEN:.10e}, drift {drift:.1e})"),
    )
}

fn c8_janssen() -> Outcome {
    let mut worst = 0.0f64;
    let mut body = 0.0f64;
    let mut r4 = 0.0f64;
    for r in [4.0, 8.0] {
        for lambda in [PI / 2.0, PI / 3.0] {
            let s = janssen_top_state(TopSpec::new(r, lambda).unwrap(), 1e-15)
                .unwrap()
                .expansion;
            let lab = top_lab_report(&s);
            let b = top_body_report(&s);
            let errs = [
                rel(lab.mean_lz, -r),
                rel(lab.mean_l2, r * (r + 1.5)),
                (b.mean_lz + r * lambda.cos()).abs() / r,
            ];
            let e = errs.iter().cloned().fold(0.0, f64::max);
            if r == 8.0 {
                worst = worst.max(e);
                let u = body_uncertainty(&s, lambda);
                body = body.max(rel(u.product, u.bound));
            } else {
                r4 = r4.max(e);
            }
        }
    }
    outcome(
        worst < 1e-3 && body < 1e-6,
        format!("r=8 moments max relative error {worst:.3e} (tol 1e-3), body product {body:.3e} (tol 1e-6); r=4 for reference {r4:.3e}"),
    )
}

fn c9_top() -> Outcome {
    let s = janssen_top_state(TopSpec::new(4.0, PI / 2.0).unwrap(), 1e-15)
        .unwrap()
        .expansion;
    let half = RotorSpec::rational(1.0, 2, 1).unwrap();
    let full = top_autocorrelation(&s, &half, &[TopTime::Common(Fraction::new(1, 1).unwrap())])
        .unwrap()[0];
    let rep = top_clone_check(&s, &half, 1, 3).unwrap();
    let f: Vec<f64> = rep.waves.iter().map(|w| w.fidelity).collect();
    let spread =
        f.iter().cloned().fold(f64::MIN, f64::max) - f.iter().cloned().fold(f64::MAX, f64::min);
    let wts: Vec<f64> = rep.waves.iter().map(|w| w.weight.norm()).collect();
    let wspread =
        wts.iter().cloned().fold(f64::MIN, f64::max) - wts.iter().cloned().fold(f64::MAX, f64::min);
    let irr = RotorSpec::new(1.0, 1.0 / 3f64.sqrt()).unwrap();
    let t_rev_k = 1.0 / irr.delta;
    let times: Vec<TopTime> = (1..=4096)
        .map(|k| TopTime::RevI(k as f64 * 3.0 * t_rev_k / 4096.0))
        .collect();
    let best = top_autocorrelation(&s, &irr, &times)
        .unwrap()
        .into_iter()
        .fold(0.0, f64::max);
    outcome(
        (full - 1.0).abs() < 1e-10 && spread < 1e-6 && best < 0.999,
        format!(
            "|F(T_IK) - 1| {:.3e} (tol 1e-10); {} waves at T_IK/3, fidelity spread {spread:.3e}, |weight| spread {wspread:.3e} (tol 1e-6), residual {:.3e}; irrational max fidelity {best:.6} (need < 0.999)",
            (full - 1.0).abs(),
            rep.waves.len(),
            rep.residual
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_rotwave"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn strip_timestamp(text: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

fn c10_determinism() -> Outcome {
    let runs: [&[&str]; 5] = [
        &[
            "carpet",
            "--set",
            "family=exponential",
            "--set",
            "N=20",
            "--set",
            "eta=1",
            "--set",
            "n_times=64",
            "--set",
            "n_phi=90",
        ],
        &[
            "autocorr",
            "--set",
            "family=exponential",
            "--set",
            "N=20",
            "--set",
            "eta=0.5",
            "--set",
            "n_times=512",
        ],
        &[
            "clones",
            "--set",
            "family=exponential",
            "--set",
            "N=20",
            "--set",
            "eta=0.5",
            "--set",
            "time=1/6",
        ],
        &[
            "top-evolve",
            "--set",
            "family=janssen",
            "--set",
            "r=4",
            "--set",
            "lambda=pi/2",
            "--set",
            "delta=1/2",
            "--set",
            "times=0,1/3",
            "--set",
            "n_alpha=41",
            "--set",
            "n_gamma=41",
        ],
        &[
            "density",
            "--set",
            "family=exponential",
            "--set",
            "N=5",
            "--set",
            "eta=0.25",
            "--set",
            "n_theta=37",
            "--set",
            "n_phi=73",
        ],
    ];
    let tmp = tempfile::tempdir().unwrap();
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let a = tmp.path().join(format!("{i}a"));
        let b = tmp.path().join(format!("{i}b"));
        if !run_cli(&a, args) || !run_cli(&b, args) {
            mismatches.push(format!("{} failed to run", args[0]));
            continue;
        }
        let mut names: Vec<_> = fs::read_dir(&a)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let x = fs::read(a.join(&name)).unwrap();
            let y = fs::read(b.join(&name)).unwrap_or_default();
            let same = if name == "meta.json" {
                strip_timestamp(&String::from_utf8_lossy(&x))
                    == strip_timestamp(&String::from_utf8_lossy(&y))
            } else {
                x == y
            };
            compared += 1;
            if !same {
                mismatches.push(format!("{}/{}", args[0], name.to_string_lossy()));
            }
        }
    }
    outcome(
        mismatches.is_empty() && compared > 0,
        format!("{compared} files compared byte-for-byte over 5 tasks; mismatches: {mismatches:?}"),
    )
}

type Criterion = (&'static str, f64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form moments", 5.0, c1_moments),
        ("uncertainty equality", 5.0, c2_uncertainty),
        ("density closed form", 10.0, c3_density),
        ("Gauss-sum exactness", 30.0, c4_gauss),
        ("cloning", 30.0, c5_cloning),
        ("half revival", 5.0, c6_half_revival),
        ("boson comparison", 5.0, c7_boson),
        ("Janssen moments", 10.0, c8_janssen),
        ("top cloning", 60.0, c9_top),
        ("determinism", 5.0, c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        let pass = o.pass && secs < *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<22} {} {} [{secs:.2}s, budget {budget}s]",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
