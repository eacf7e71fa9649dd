//! Small statistics helpers for chain averages and correlated series.

/// Mean and standard error of independent samples. The error is zero for
/// fewer than two samples.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Total-variation distance `½ Σ |p_i - q_i|` between two distributions on the
/// same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions must share a support");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Accumulates a correlated time series into fixed-size bins; the error of
/// the mean is estimated from the spread of the bin means.
#[derive(Debug, Clone)]
pub struct BinnedMean {
    bin_size: usize,
    current: f64,
    filled: usize,
    bins: Vec<f64>,
}

impl BinnedMean {
    pub fn new(bin_size: usize) -> Self {
        assert!(bin_size > 0);
        Self {
            bin_size,
            current: 0.0,
            filled: 0,
            bins: Vec::new(),
        }
    }

    pub fn push(&mut self, value: f64) {
        self.current += value;
        self.filled += 1;
        if self.filled == self.bin_size {
            self.bins.push(self.current / self.bin_size as f64);
            self.current = 0.0;
            self.filled = 0;
        }
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    /// Mean and standard error over completed bins.
    pub fn result(&self) -> (f64, f64) {
        mean_stderr(&self.bins)
    }
}
