use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::RevivalError;

/// A reduced nonnegative fraction `m/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    m: u64,
    n: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    /// Reduces `m/n`; `n` must be positive.
    pub fn new(m: u64, n: u64) -> Result<Self, RevivalError> {
        if n == 0 {
            return Err(RevivalError::Domain("zero denominator".into()));
        }
        let g = gcd(m, n).max(1);
        Ok(Fraction { m: m / g, n: n / g })
    }

    /// Accepts only coprime input.
    pub fn coprime(m: u64, n: u64) -> Result<Self, RevivalError> {
        if n == 0 || gcd(m, n) != 1 {
            return Err(RevivalError::Domain(format!(
                "{m}/{n} is not a reduced fraction"
            )));
        }
        Ok(Fraction { m, n })
    }

    pub fn numer(&self) -> u64 {
        self.m
    }

    pub fn denom(&self) -> u64 {
        self.n
    }

    pub fn to_f64(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn mul(&self, other: Fraction) -> Fraction {
        let g1 = gcd(self.m, other.n).max(1);
        let g2 = gcd(other.m, self.n).max(1);
        Fraction {
            m: (self.m / g1) * (other.m / g2),
            n: (self.n / g2) * (other.n / g1),
        }
    }

    /// Best rational approximation with denominator at most `max_denom`
    /// (continued fractions).
    pub fn approximate(x: f64, max_denom: u64) -> Result<Self, RevivalError> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(RevivalError::Domain(format!("cannot approximate {x}")));
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
        let mut v = x;
        for _ in 0..64 {
            let a = v.floor();
            if a > 1e15 {
                break;
            }
            let a = a as u64;
            let p2 = a.saturating_mul(p1).saturating_add(p0);
            let q2 = a.saturating_mul(q1).saturating_add(q0);
            if q2 > max_denom {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = v - a as f64;
            if frac < 1e-15 {
                break;
            }
            v = 1.0 / frac;
        }
        if q1 == 0 {
            return Fraction::new(x.round() as u64, 1);
        }
        Fraction::new(p1, q1)
    }

    /// `e^{−2πi·k·(m/n)}` computed from the integer residue `k·m mod n`.
    pub fn phase(&self, k: i128) -> Complex64 {
        let r = (k * self.m as i128).rem_euclid(self.n as i128);
        turn_phase(r as f64 / self.n as f64)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

impl FromStr for Fraction {
    type Err = RevivalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RevivalError::Domain(format!("malformed rational '{s}'"));
        let (a, b) = s.trim().split_once('/').ok_or_else(bad)?;
        let m: u64 = a.trim().parse().map_err(|_| bad())?;
        let n: u64 = b.trim().parse().map_err(|_| bad())?;
        Fraction::new(m, n)
    }
}

/// `e^{−2πi·x}` for `x` in turns, reduced to `[−1/2, 1/2)` first.
pub fn turn_phase(x: f64) -> Complex64 {
    let r = x - x.round();
    // exact values at the quarter turns keep T/2 and T/4 revivals clean
    if r == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if r.abs() == 0.5 {
        return Complex64::new(-1.0, 0.0);
    }
    if r == 0.25 {
        return Complex64::new(0.0, -1.0);
    }
    if r == -0.25 {
        return Complex64::new(0.0, 1.0);
    }
    Complex64::from_polar(1.0, -std::f64::consts::TAU * r)
}

/// A time in units of a revival period: exact rational or plain float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimePoint {
    Exact(Fraction),
    Float(f64),
}

impl TimePoint {
    pub fn to_f64(&self) -> f64 {
        match self {
            TimePoint::Exact(f) => f.to_f64(),
            TimePoint::Float(x) => *x,
        }
    }

    /// `e^{−2πi·k·t}`, exact in the residue for rational `t`.
    pub fn phase(&self, k: i128) -> Complex64 {
        match self {
            TimePoint::Exact(f) => f.phase(k),
            TimePoint::Float(x) => {
                // split k·x so that large k keeps the fractional part accurate
                let hi = (*x * 4096.0).round() / 4096.0;
                let lo = *x - hi;
                let turns = ((k as f64) * hi).rem_euclid(1.0) + (k as f64) * lo;
                turn_phase(turns)
            }
        }
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimePoint::Exact(x) => write!(f, "{x}"),
            TimePoint::Float(x) => write!(f, "{x}"),
        }
    }
}
