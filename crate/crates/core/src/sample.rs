use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest sample size the rank-order statistic accepts.
pub const MIN_SAMPLE_SIZE: usize = 2;

/// A validated set of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < MIN_SAMPLE_SIZE {
            return Err(Error::SampleTooSmall {
                min: MIN_SAMPLE_SIZE,
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index, value });
        }
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn median(&self) -> f64 {
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        median_of_sorted(&sorted)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Standard deviation with the `n - 1` denominator.
    pub fn sd(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (self.len() - 1) as f64).sqrt()
    }

    /// Moment coefficient of skewness `m3 / m2^1.5`. Zero for a constant sample.
    pub fn skewness(&self) -> f64 {
        let n = self.len() as f64;
        let mean = self.mean();
        let (m2, m3) = self.values.iter().fold((0.0, 0.0), |(m2, m3), v| {
            let d = v - mean;
            (m2 + d * d, m3 + d * d * d)
        });
        let (m2, m3) = (m2 / n, m3 / n);
        if m2 == 0.0 {
            0.0
        } else {
            m3 / m2.powf(1.5)
        }
    }

    /// Every value shifted by `-delta`.
    pub fn shifted(&self, delta: f64) -> Sample {
        Sample {
            values: self.values.iter().map(|v| v - delta).collect(),
        }
    }

    /// Applies `f` to every value; fails if the image is not finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Sample> {
        Sample::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

impl From<Sample> for Vec<f64> {
    fn from(sample: Sample) -> Self {
        sample.values
    }
}

/// Order-statistic median of an ascending slice; even lengths average the central pair.
pub(crate) fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0);
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_non_finite() {
        assert_eq!(
            Sample::new(vec![1.0]),
            Err(Error::SampleTooSmall { min: 2, got: 1 })
        );
        assert!(matches!(
            Sample::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteValue { index: 1, .. })
        ));
        assert!(Sample::new(vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn median_odd_and_even() {
        assert_eq!(Sample::new(vec![3.0, 1.0, 2.0]).unwrap().median(), 2.0);
        assert_eq!(Sample::new(vec![4.0, 1.0, 3.0, 2.0]).unwrap().median(), 2.5);
    }

    #[test]
    fn moments_of_small_sample() {
        let s = Sample::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean(), 2.5);
        assert!((s.sd() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.skewness(), 0.0);
        let skewed = Sample::new(vec![0.0, 0.0, 0.0, 10.0]).unwrap();
        assert!(skewed.skewness() > 1.0);
    }

    #[test]
    fn serde_validates() {
        let s: Sample = serde_json::from_str("[1.0, 2.0]").unwrap();
        assert_eq!(s.len(), 2);
        assert!(serde_json::from_str::<Sample>("[1.0]").is_err());
    }
}
