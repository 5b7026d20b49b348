use serde::{Deserialize, Serialize};

/// Sample mean with its standard error `sd / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl McEstimate {
    /// Fixed left-to-right summation, so the result does not depend on how
    /// the samples were produced.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self { mean: f64::NAN, std_error: f64::NAN };
        }
        let mean = samples.iter().fold(0.0, |acc, x| acc + x) / n as f64;
        if n == 1 {
            return Self { mean, std_error: 0.0 };
        }
        let ss = samples.iter().fold(0.0, |acc, x| acc + (x - mean) * (x - mean));
        let var = ss / (n - 1) as f64;
        Self {
            mean,
            std_error: (var / n as f64).sqrt(),
        }
    }

    /// `sqrt(se_a^2 + se_b^2)`, the standard error of a difference of
    /// independent estimates.
    pub fn combined_error(&self, other: &McEstimate) -> f64 {
        self.std_error.hypot(other.std_error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_sample() {
        let e = McEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        // sd = sqrt(5/3)
        assert!((e.std_error - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_has_zero_error() {
        let e = McEstimate::from_samples(&[0.25; 10]);
        assert_eq!(e.mean, 0.25);
        assert_eq!(e.std_error, 0.0);
        assert_eq!(McEstimate::from_samples(&[3.0]).std_error, 0.0);
    }
}
