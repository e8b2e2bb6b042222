//! Compensated summation and the moment helpers shared by cleaning and
//! aggregation. All reductions run in the caller's traversal order so results
//! are identical no matter how many workers fed the inputs.

/// Kahan–Babuška compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Which divisor the standard deviation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdMode {
    /// Divide by N.
    Population,
    /// Divide by N - 1.
    Sample,
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut acc = KahanSum::new();
    for &v in values {
        acc.add(v);
    }
    Some(acc.value() / values.len() as f64)
}

/// Mean and standard deviation in one pass order. Returns `None` on empty
/// input, and sd 0.0 when `Sample` is requested for a single value.
pub fn mean_and_sd(values: &[f64], mode: SdMode) -> Option<(f64, f64)> {
    let m = mean(values)?;
    let n = values.len();
    let divisor = match mode {
        SdMode::Population => n as f64,
        SdMode::Sample => {
            if n < 2 {
                return Some((m, 0.0));
            }
            (n - 1) as f64
        }
    };
    let mut acc = KahanSum::new();
    for &v in values {
        let d = v - m;
        acc.add(d * d);
    }
    let variance = (acc.value() / divisor).max(0.0);
    Some((m, variance.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1e16);
        for _ in 0..10 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 10.0);
    }

    #[test]
    fn population_sd_basic() {
        let (m, s) = mean_and_sd(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0], SdMode::Population)
            .unwrap();
        assert_eq!(m, 5.0);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn sample_sd_basic() {
        let (m, s) = mean_and_sd(&[2.0, 4.0, 6.0], SdMode::Sample).unwrap();
        assert_eq!(m, 4.0);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn empty_input_is_none() {
        assert!(mean(&[]).is_none());
        assert!(mean_and_sd(&[], SdMode::Population).is_none());
    }

    #[test]
    fn single_sample_sd_is_zero() {
        let (m, s) = mean_and_sd(&[42.0], SdMode::Sample).unwrap();
        assert_eq!(m, 42.0);
        assert_eq!(s, 0.0);
    }
}
