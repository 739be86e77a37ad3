//! Sample statistics with compensated summation in fixed index order.

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Count, mean, unbiased variance and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single observation.
    pub variance: f64,
    /// `sqrt(variance / count)`.
    pub std_error: f64,
}

/// Aggregates a sample.
pub fn aggregate(samples: &[f64]) -> Result<SampleStats> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len();
    let mean = samples.iter().copied().collect::<CompensatedSum>().value() / n as f64;
    let variance = if n < 2 {
        0.0
    } else {
        let ss = samples
            .iter()
            .map(|&x| (x - mean) * (x - mean))
            .collect::<CompensatedSum>()
            .value();
        ss / (n - 1) as f64
    };
    Ok(SampleStats {
        count: n,
        mean,
        variance,
        std_error: (variance / n as f64).sqrt(),
    })
}

/// Unbiased variance of the sample and the standard error of that
/// estimate, `sqrt(Var((X − X̄)²)/n)`.
pub fn variance_with_error(samples: &[f64]) -> Result<(f64, f64)> {
    let base = aggregate(samples)?;
    if samples.len() < 2 {
        return Ok((0.0, f64::INFINITY));
    }
    let squared: Vec<f64> = samples.iter().map(|&x| (x - base.mean).powi(2)).collect();
    let sq = aggregate(&squared)?;
    Ok((base.variance, sq.std_error))
}

/// Standard error of the difference of two independent means.
pub fn combined_error(a: &SampleStats, b: &SampleStats) -> f64 {
    (a.std_error.powi(2) + b.std_error.powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value() {
        let s = aggregate(&[5.0]).unwrap();
        assert_eq!(s.count, 1);
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.variance, 0.0);
    }

    #[test]
    fn small_sample() {
        let s = aggregate(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.variance, 1.0);
        assert!((s.std_error - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(aggregate(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn compensated_mean_of_many_tenths() {
        let xs = vec![0.1; 1_000_000];
        let s = aggregate(&xs).unwrap();
        assert!((s.mean - 0.1).abs() < 1e-12);
        // naive left-to-right summation drifts by ~1e-11 relative here
        let naive: f64 = xs.iter().sum::<f64>() / 1e6;
        assert!((s.mean - 0.1).abs() <= (naive - 0.1).abs());
    }

    #[test]
    fn variance_error_shrinks_with_n() {
        let xs: Vec<f64> = (0..1000).map(|i| (i % 7) as f64).collect();
        let (v, se) = variance_with_error(&xs).unwrap();
        assert!(v > 3.9 && v < 4.1);
        assert!(se > 0.0 && se < 0.2);
    }
}
