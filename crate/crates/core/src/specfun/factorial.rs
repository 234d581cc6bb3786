use once_cell::sync::Lazy;

use super::SpecfunError;

/// Capacity of the process-wide table behind [`log_factorial`].
pub const DEFAULT_LOG_FACTORIAL_CAPACITY: usize = 4096;

static DEFAULT_TABLE: Lazy<LogFactorialTable> =
    Lazy::new(|| LogFactorialTable::new(DEFAULT_LOG_FACTORIAL_CAPACITY));

/// Table of `ln(n!)` for `0 <= n <= n_max`.
///
/// Built once by compensated summation of `ln k`, so the relative error of
/// every entry stays at the level of a few ulps even for large `n`.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(n_max: usize) -> Self {
        let mut values = Vec::with_capacity(n_max + 1);
        values.push(0.0);
        let mut sum = 0.0_f64;
        let mut comp = 0.0_f64;
        for k in 1..=n_max {
            // Neumaier summation
            let term = (k as f64).ln();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            values.push(sum + comp);
        }
        LogFactorialTable { values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<f64, SpecfunError> {
        self.values.get(n).copied().ok_or(SpecfunError::Capacity {
            requested: n,
            capacity: self.n_max(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `ln(n!)` from the shared default table.
pub fn log_factorial(n: usize) -> Result<f64, SpecfunError> {
    DEFAULT_TABLE.get(n)
}

/// Unchecked lookup for internal callers that have already bounded `n`.
#[inline]
pub(crate) fn lnf(n: usize) -> f64 {
    DEFAULT_TABLE.values[n]
}

/// `ln((2n+1)!!)`.
pub(crate) fn ln_double_factorial_odd(n: usize) -> f64 {
    // (2n+1)!! = (2n+1)! / (2^n n!)
    lnf(2 * n + 1) - n as f64 * std::f64::consts::LN_2 - lnf(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(log_factorial(0).unwrap(), 0.0);
        assert_eq!(log_factorial(1).unwrap(), 0.0);
        let v = log_factorial(5).unwrap();
        assert!((v - 4.787491742782046).abs() < 1e-15);
    }

    #[test]
    fn exact_integer_oracle() {
        let mut exact: u128 = 1;
        assert_eq!(log_factorial(1).unwrap(), 0.0);
        for n in 2..=30u32 {
            exact *= n as u128;
            let expected = (exact as f64).ln();
            let got = log_factorial(n as usize).unwrap();
            assert!(
                ((got - expected) / expected).abs() <= 1e-14,
                "n={n}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn consecutive_differences() {
        let table = LogFactorialTable::new(3000);
        let v = table.values();
        for n in 1..=3000 {
            let d = v[n] - v[n - 1];
            let ln_n = (n as f64).ln();
            // relative to the table entries themselves; the difference of two
            // large sums cannot resolve ln(n) better than their ulp
            assert!((d - ln_n).abs() <= 1e-14 * v[n].max(1.0));
        }
    }

    #[test]
    fn capacity_error() {
        let table = LogFactorialTable::new(10);
        assert!(matches!(
            table.get(11),
            Err(SpecfunError::Capacity {
                requested: 11,
                capacity: 10
            })
        ));
    }

    #[test]
    fn odd_double_factorial() {
        // 7!! = 105
        assert!((ln_double_factorial_odd(3) - 105f64.ln()).abs() < 1e-14);
        assert!(ln_double_factorial_odd(0).abs() < 1e-15);
    }
}
