use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::states::SphericalExpansion;

use super::time::{turn_phase, Fraction, TimePoint};
use super::RevivalError;

/// Threshold separating clones from mutants.
pub const CLONE_FIDELITY: f64 = 1.0 - 1e-6;
/// Uniform rotation angles tried on top of the predicted ones.
pub const ROTATION_SWEEP: usize = 1024;

/// Linearization of a quadratic phase at a rational time:
/// `e^{−2πi·k²·x} = Σ_s a_s e^{−2πi·k·s/l}` for every integer `k`,
/// where `x = time` and the fractional waves sit at `t_s = offset + s/l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalDecomposition {
    /// Time as requested.
    pub requested: Fraction,
    /// Time actually decomposed (after any reduction).
    pub time: Fraction,
    /// Linear part of the phase, `time` for the `I(I+1)` spectrum and zero for `K²`.
    pub offset: Fraction,
    pub l: usize,
    /// Number of nonzero `a_s`.
    pub q: usize,
    pub a: Vec<Complex64>,
    /// Index of the wave with an integer `t_s`, which reproduces the initial state.
    pub s0: Option<usize>,
}

impl FractionalDecomposition {
    /// `t_s = offset + s/l`.
    pub fn t_s(&self, s: usize) -> Fraction {
        let (m, n) = (self.offset.numer(), self.offset.denom());
        let l = self.l as u64;
        Fraction::new(m * l + s as u64 * n, n * l).expect("nonzero denominator")
    }

    pub fn nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.l).filter(|&s| self.a[s] != Complex64::new(0.0, 0.0))
    }

    /// `s′` with `t_s + t_{s′} ≡ 0 (mod 1)`.
    pub fn pair_index(&self, s: usize) -> usize {
        let l = self.l as u64;
        let twice = 2 * self.offset.numer() * l / self.offset.denom();
        let shift = (twice + s as u64) % l;
        ((l - shift) % l) as usize
    }
}

/// `l` for a reduced denominator: `n` when odd or `≡ 2 (mod 4)`, `n/2` when `≡ 0 (mod 4)`.
pub fn period_for(n: u64) -> u64 {
    if n % 4 == 0 {
        n / 2
    } else {
        n
    }
}

/// Decomposes `e^{−2πi·k²·x}` with `x` taken modulo 1.
pub fn quadratic_decompose(x: Fraction) -> FractionalDecomposition {
    let n = x.denom();
    let time = Fraction::new(x.numer() % n, n).expect("nonzero denominator");
    let zero = Fraction::new(0, 1).expect("nonzero denominator");
    build(x, time, zero)
}

/// Gauss-sum decomposition of the rotor phases `e^{−2πi·I(I+1)·m/n}`.
/// `m/n` must be reduced; times beyond one half are folded back using the
/// `T_rev/2` period before decomposing.
pub fn gauss_decompose(m: u64, n: u64) -> Result<FractionalDecomposition, RevivalError> {
    let requested = Fraction::coprime(m, n)?;
    let time = if 2 * m > n {
        Fraction::new((2 * m) % n, 2 * n)?
    } else {
        requested
    };
    Ok(build(requested, time, time))
}

fn build(requested: Fraction, time: Fraction, offset: Fraction) -> FractionalDecomposition {
    let (m, n) = (time.numer() as i128, time.denom() as i128);
    let l = period_for(time.denom()) as i128;
    let step = n / l;
    let mut a = Vec::with_capacity(l as usize);
    for s in 0..l {
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..l {
            let r = (k * k * m - k * s * step).rem_euclid(n);
            sum += turn_phase(r as f64 / n as f64);
        }
        a.push(sum / l as f64);
    }
    // nonzero moduli are 1/√q ≥ 1/√l
    let cut = 0.5 / (l as f64).sqrt();
    for v in a.iter_mut() {
        if v.norm() < cut {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    let mut out = FractionalDecomposition {
        requested,
        time,
        offset,
        l: l as usize,
        q: a.iter().filter(|v| v.norm() > 0.0).count(),
        a,
        s0: None,
    };
    let s0 = out.nonzero().find(|&s| out.t_s(s).denom() == 1);
    out.s0 = s0;
    out
}

/// One term `a_s Ψ^s` of the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalWave {
    pub s: usize,
    /// `t_s` in units of `T_rev`.
    pub t: Fraction,
    pub a: Complex64,
    /// `b_{IM} e^{−2πi·I·t_s}`.
    pub wave: SphericalExpansion,
}

/// Fractional waves for the nonzero `a_s`.
pub fn fractional_waves(
    state: &SphericalExpansion,
    dec: &FractionalDecomposition,
) -> Vec<FractionalWave> {
    dec.nonzero()
        .map(|s| {
            let t = dec.t_s(s);
            let tp = TimePoint::Exact(t);
            FractionalWave {
                s,
                t,
                a: dec.a[s],
                wave: state.map_coeffs(|l, _, b| b * tp.phase(l as i128)),
            }
        })
        .collect()
}

/// `Σ_s a_s Ψ^s`.
pub fn reconstruct(waves: &[FractionalWave], l_max: usize) -> SphericalExpansion {
    let mut out = SphericalExpansion::zeros(l_max);
    for w in waves {
        for (o, c) in out.coeffs_mut().iter_mut().zip(w.wave.coeffs()) {
            *o += w.a * c;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloneKind {
    Clone,
    RotatedClone,
    Mutant,
}

impl CloneKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CloneKind::Clone => "clone",
            CloneKind::RotatedClone => "rotated-clone",
            CloneKind::Mutant => "mutant",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloneEntry {
    pub s: usize,
    pub t: Fraction,
    pub a: Complex64,
    /// `|⟨Ψ(0)|Ψ^s⟩|²`.
    pub fidelity: f64,
    /// Best `|⟨Ψ(0)|R_z(α)†Ψ^s⟩|²` over the candidate angles.
    pub rotated_fidelity: f64,
    pub best_angle: f64,
    pub kind: CloneKind,
}

/// Comparison of `Ψ^{s′}(η)` with the conjugate of `Ψ^s(−η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCheck {
    pub s: usize,
    pub partner: usize,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloneReport {
    pub entries: Vec<CloneEntry>,
    pub pairs: Vec<PairCheck>,
}

/// Coefficients of `Ψ*` in the same basis: `(−1)^m conj(b_{l,−m})`.
pub fn conjugate_function(state: &SphericalExpansion) -> SphericalExpansion {
    state.map_coeffs(|l, m, _| {
        let c = state.get(l, -m).conj();
        if m.rem_euclid(2) == 1 {
            -c
        } else {
            c
        }
    })
}

/// Classifies every fractional wave. `mirror` is the same construction with
/// `η → −η`, used for the conjugate pairing check.
pub fn clone_report(
    state: &SphericalExpansion,
    dec: &FractionalDecomposition,
    mirror: Option<&SphericalExpansion>,
) -> CloneReport {
    let l_max = state.l_max() as i64;
    let probs: Vec<Vec<f64>> = (0..=l_max as usize)
        .map(|l| {
            (-l_max..=l_max)
                .map(|m| state.get(l, m).norm_sqr())
                .collect()
        })
        .collect();
    let sweep: Vec<f64> = (0..ROTATION_SWEEP)
        .map(|k| TAU * k as f64 / ROTATION_SWEEP as f64)
        .collect();
    let entries = dec
        .nonzero()
        .map(|s| {
            let t = dec.t_s(s);
            let tp = TimePoint::Exact(t);
            // G_M = Σ_I |b_{IM}|² e^{−2πi·I·t_s}
            let mut g = vec![Complex64::new(0.0, 0.0); (2 * l_max + 1) as usize];
            for (l, row) in probs.iter().enumerate() {
                let ph = tp.phase(l as i128);
                for (gm, p) in g.iter_mut().zip(row) {
                    *gm += ph * p;
                }
            }
            let fid = |alpha: f64| -> f64 {
                let mut sum = Complex64::new(0.0, 0.0);
                for (j, gm) in g.iter().enumerate() {
                    let m = j as i64 - l_max;
                    sum += gm * Complex64::from_polar(1.0, m as f64 * alpha);
                }
                sum.norm_sqr()
            };
            let predicted = TAU * t.to_f64();
            let fidelity = fid(0.0);
            let (mut best, mut best_angle) = (fidelity, 0.0);
            for &alpha in [predicted, -predicted].iter().chain(&sweep) {
                let f = fid(alpha);
                if f > best {
                    best = f;
                    best_angle = alpha.rem_euclid(TAU);
                }
            }
            let kind = if fidelity > CLONE_FIDELITY {
                CloneKind::Clone
            } else if best > CLONE_FIDELITY {
                CloneKind::RotatedClone
            } else {
                CloneKind::Mutant
            };
            CloneEntry {
                s,
                t,
                a: dec.a[s],
                fidelity,
                rotated_fidelity: best,
                best_angle,
                kind,
            }
        })
        .collect();
    let pairs = match mirror {
        None => Vec::new(),
        Some(mirror) => {
            let waves = fractional_waves(state, dec);
            let mirrored = fractional_waves(mirror, dec);
            let l = l_max.max(mirror.l_max() as i64) as usize;
            waves
                .iter()
                .filter_map(|w| {
                    let partner = dec.pair_index(w.s);
                    let other = mirrored.iter().find(|x| x.s == partner)?;
                    let conj = conjugate_function(&other.wave).padded(l);
                    Some(PairCheck {
                        s: w.s,
                        partner,
                        max_error: w.wave.padded(l).max_abs_diff(&conj),
                    })
                })
                .collect()
        }
    };
    CloneReport { entries, pairs }
}
