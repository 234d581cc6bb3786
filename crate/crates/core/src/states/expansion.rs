use num_complex::Complex64;

use crate::specfun::{AngularPoint, LegendreTable};

use super::StatesError;

/// Coefficients over `(l, m)` with `|m| <= l <= l_max`, stored at `l² + l + m`.
#[derive(Debug, Clone, PartialEq)]
struct Triangular {
    l_max: usize,
    coeffs: Vec<Complex64>,
}

impl Triangular {
    fn zeros(l_max: usize) -> Self {
        Triangular {
            l_max,
            coeffs: vec![Complex64::new(0.0, 0.0); (l_max + 1) * (l_max + 1)],
        }
    }

    fn from_vec(l_max: usize, coeffs: Vec<Complex64>) -> Result<Self, StatesError> {
        if coeffs.len() != (l_max + 1) * (l_max + 1) {
            return Err(StatesError::Domain(format!(
                "expected {} coefficients for l_max={l_max}, got {}",
                (l_max + 1) * (l_max + 1),
                coeffs.len()
            )));
        }
        Ok(Triangular { l_max, coeffs })
    }

    #[inline]
    fn index(l: usize, m: i64) -> usize {
        ((l * l + l) as i64 + m) as usize
    }

    fn get(&self, l: usize, m: i64) -> Complex64 {
        if l > self.l_max || m.unsigned_abs() as usize > l {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[Self::index(l, m)]
        }
    }

    fn set(&mut self, l: usize, m: i64, v: Complex64) {
        assert!(l <= self.l_max && m.unsigned_abs() as usize <= l);
        self.coeffs[Self::index(l, m)] = v;
    }

    fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    fn l_weights(&self) -> Vec<f64> {
        (0..=self.l_max)
            .map(|l| {
                let a = l * l;
                self.coeffs[a..a + 2 * l + 1]
                    .iter()
                    .map(|c| c.norm_sqr())
                    .sum()
            })
            .collect()
    }

    fn normalize(&mut self) -> Result<f64, StatesError> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(StatesError::Domain("cannot normalize a zero state".into()));
        }
        self.coeffs.iter_mut().for_each(|c| *c /= n);
        Ok(n)
    }

    fn truncated(&self, l_max: usize) -> Self {
        let l_max = l_max.min(self.l_max);
        Triangular {
            l_max,
            coeffs: self.coeffs[..(l_max + 1) * (l_max + 1)].to_vec(),
        }
    }
}

/// A state on the sphere, `Ψ = Σ b_{lm} Y_l^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalExpansion {
    inner: Triangular,
}

impl SphericalExpansion {
    pub fn zeros(l_max: usize) -> Self {
        SphericalExpansion {
            inner: Triangular::zeros(l_max),
        }
    }

    /// Coefficients in `l² + l + m` order.
    pub fn from_coeffs(l_max: usize, coeffs: Vec<Complex64>) -> Result<Self, StatesError> {
        Ok(SphericalExpansion {
            inner: Triangular::from_vec(l_max, coeffs)?,
        })
    }

    pub fn l_max(&self) -> usize {
        self.inner.l_max
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.inner.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.inner.coeffs
    }

    /// `b_{lm}`, zero outside the stored range.
    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        self.inner.get(l, m)
    }

    pub fn set(&mut self, l: usize, m: i64, v: Complex64) {
        self.inner.set(l, m, v)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner.norm_sqr()
    }

    /// Partial-wave probabilities `Σ_m |b_{lm}|²` per `l`.
    pub fn l_weights(&self) -> Vec<f64> {
        self.inner.l_weights()
    }

    /// Rescale to unit norm; returns the norm before rescaling.
    pub fn normalize(&mut self) -> Result<f64, StatesError> {
        self.inner.normalize()
    }

    pub fn truncated(&self, l_max: usize) -> Self {
        SphericalExpansion {
            inner: self.inner.truncated(l_max),
        }
    }

    /// Same state stored with a larger (or equal) `l_max`.
    pub fn padded(&self, l_max: usize) -> Self {
        let mut out = SphericalExpansion::zeros(l_max.max(self.l_max()));
        let n = self.inner.coeffs.len();
        out.inner.coeffs[..n].copy_from_slice(&self.inner.coeffs);
        out
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SphericalExpansion) -> Complex64 {
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest coefficientwise difference, padding the shorter expansion with zeros.
    pub fn max_abs_diff(&self, other: &SphericalExpansion) -> f64 {
        let l_max = self.l_max().max(other.l_max());
        let mut worst = 0.0f64;
        for l in 0..=l_max {
            for m in -(l as i64)..=l as i64 {
                worst = worst.max((self.get(l, m) - other.get(l, m)).norm());
            }
        }
        worst
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(usize, i64, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for l in 0..=self.l_max() {
            for m in -(l as i64)..=l as i64 {
                let i = Triangular::index(l, m);
                out.inner.coeffs[i] = f(l, m, self.inner.coeffs[i]);
            }
        }
        out
    }

    /// `L_+` applied in the `|l m⟩` basis.
    pub fn apply_lplus(&self) -> Self {
        let mut out = SphericalExpansion::zeros(self.l_max());
        for l in 0..=self.l_max() {
            let ll = (l * (l + 1)) as f64;
            for m in -(l as i64)..l as i64 {
                let f = (ll - (m * (m + 1)) as f64).sqrt();
                out.set(l, m + 1, f * self.get(l, m));
            }
        }
        out
    }

    /// `L_-` applied in the `|l m⟩` basis.
    pub fn apply_lminus(&self) -> Self {
        let mut out = SphericalExpansion::zeros(self.l_max());
        for l in 0..=self.l_max() {
            let ll = (l * (l + 1)) as f64;
            for m in (-(l as i64) + 1)..=l as i64 {
                let f = (ll - (m * (m - 1)) as f64).sqrt();
                out.set(l, m - 1, f * self.get(l, m));
            }
        }
        out
    }

    pub fn apply_lz(&self) -> Self {
        self.map_coeffs(|_, m, c| c * m as f64)
    }

    /// `a·self + b·other` on a common `l_max`.
    pub fn combine(&self, a: Complex64, other: &SphericalExpansion, b: Complex64) -> Self {
        let l_max = self.l_max().max(other.l_max());
        let x = self.padded(l_max);
        let y = other.padded(l_max);
        let coeffs = x
            .coeffs()
            .iter()
            .zip(y.coeffs())
            .map(|(p, q)| a * p + b * q)
            .collect();
        SphericalExpansion {
            inner: Triangular { l_max, coeffs },
        }
    }

    /// `Ψ(θ, φ)`.
    pub fn evaluate(&self, point: AngularPoint) -> Complex64 {
        let table = LegendreTable::new(self.l_max(), point.theta());
        self.evaluate_with(&table, point.phi())
    }

    /// `Ψ` on a ring of fixed θ, with the Legendre table already filled.
    pub fn evaluate_with(&self, table: &LegendreTable, phi: f64) -> Complex64 {
        sum_ring(&self.ring_coefficients(table), phi)
    }

    /// `F_m = Σ_l b_{lm} P̄_l^m(cos θ)` for `m = −l_max..=l_max` (index `m + l_max`),
    /// so that `Ψ(θ, φ) = Σ_m F_m e^{imφ}`.
    pub fn ring_coefficients(&self, table: &LegendreTable) -> Vec<Complex64> {
        let l_max = self.l_max() as i64;
        (-l_max..=l_max)
            .map(|m| {
                let mut f = Complex64::new(0.0, 0.0);
                for l in m.unsigned_abs() as usize..=l_max as usize {
                    f += self.get(l, m) * table.get(l, m);
                }
                f
            })
            .collect()
    }

    /// True when every coefficient with `m ≢ l (mod 2)` is exactly zero.
    pub fn has_eta_parity(&self) -> bool {
        (0..=self.l_max()).all(|l| {
            (-(l as i64)..=l as i64)
                .filter(|m| (l as i64 - m).rem_euclid(2) == 1)
                .all(|m| self.get(l, m) == Complex64::new(0.0, 0.0))
        })
    }
}

/// `Σ_m F_m e^{imφ}` for ring coefficients indexed `m + m_max`.
pub fn sum_ring(fm: &[Complex64], phi: f64) -> Complex64 {
    let m_max = (fm.len() / 2) as i64;
    let mut sum = fm[m_max as usize];
    for m in 1..=m_max {
        let e = Complex64::from_polar(1.0, m as f64 * phi);
        sum += fm[(m_max + m) as usize] * e + fm[(m_max - m) as usize] * e.conj();
    }
    sum
}

/// A symmetric-top state `Σ C_{IK} |I, M=−I, K⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TopExpansion {
    inner: Triangular,
}

impl TopExpansion {
    pub fn zeros(l_max: usize) -> Self {
        TopExpansion {
            inner: Triangular::zeros(l_max),
        }
    }

    /// Coefficients in `I² + I + K` order.
    pub fn from_coeffs(l_max: usize, coeffs: Vec<Complex64>) -> Result<Self, StatesError> {
        Ok(TopExpansion {
            inner: Triangular::from_vec(l_max, coeffs)?,
        })
    }

    pub fn l_max(&self) -> usize {
        self.inner.l_max
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.inner.coeffs
    }

    pub fn get(&self, i: usize, k: i64) -> Complex64 {
        self.inner.get(i, k)
    }

    pub fn set(&mut self, i: usize, k: i64, v: Complex64) {
        self.inner.set(i, k, v)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner.norm_sqr()
    }

    /// Probabilities `Σ_K |C_{IK}|²` per `I`.
    pub fn i_weights(&self) -> Vec<f64> {
        self.inner.l_weights()
    }

    pub fn normalize(&mut self) -> Result<f64, StatesError> {
        self.inner.normalize()
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(usize, i64, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..=self.l_max() {
            for k in -(i as i64)..=i as i64 {
                let j = Triangular::index(i, k);
                out.inner.coeffs[j] = f(i, k, self.inner.coeffs[j]);
            }
        }
        out
    }

    pub fn inner(&self, other: &TopExpansion) -> Complex64 {
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ylm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_matches_direct_sum() {
        let mut s = SphericalExpansion::zeros(3);
        s.set(0, 0, c(0.3, 0.1));
        s.set(2, -1, c(-0.2, 0.5));
        s.set(3, 3, c(0.7, 0.0));
        s.set(1, 1, c(0.0, -0.4));
        let p = AngularPoint::new(0.9, 4.0).unwrap();
        let mut direct = c(0.0, 0.0);
        for l in 0..=3usize {
            for m in -(l as i64)..=l as i64 {
                direct += s.get(l, m) * ylm(l, m, p).unwrap();
            }
        }
        assert!((s.evaluate(p) - direct).norm() < 1e-14);
    }

    #[test]
    fn ladder_commutator() {
        // [L+, L-] = 2 Lz on a generic vector
        let l_max = 4;
        let coeffs = (0..(l_max + 1) * (l_max + 1))
            .map(|i| c((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let s = SphericalExpansion::from_coeffs(l_max, coeffs).unwrap();
        let a = s.apply_lminus().apply_lplus();
        let b = s.apply_lplus().apply_lminus();
        let lhs = a.combine(c(1.0, 0.0), &b, c(-1.0, 0.0));
        let rhs = s.apply_lz().map_coeffs(|_, _, v| 2.0 * v);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn normalize_rejects_zero() {
        assert!(SphericalExpansion::zeros(2).normalize().is_err());
        assert!(SphericalExpansion::from_coeffs(1, vec![c(1.0, 0.0)]).is_err());
    }
}
