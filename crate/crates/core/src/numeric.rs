//! Compensated summation and moment accumulation.
//!
//! The quadrature and Monte-Carlo code accumulate millions of terms; plain
//! summation would drift by `O(n * eps)`, which is visible next to the
//! 1e-12 equality checks used elsewhere. Kahan-Babuska compensation keeps
//! the error at a few ulps independent of `n`, and makes chunked parallel
//! reductions reproduce the sequential result bit for bit when the chunk
//! boundaries are fixed.

/// Kahan-Babuska compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in. Merging in a fixed order keeps the
    /// result deterministic across thread schedules.
    pub fn merge(&mut self, other: KahanSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Running first and second moments for mean / standard-error estimates.
#[derive(Debug, Clone, Copy, Default)]
pub struct MomentAccumulator {
    sum: KahanSum,
    sum_sq: KahanSum,
    count: u64,
}

impl MomentAccumulator {
    pub fn add(&mut self, value: f64) {
        self.sum.add(value);
        self.sum_sq.add(value * value);
        self.count += 1;
    }

    pub fn merge(&mut self, other: MomentAccumulator) {
        self.sum.merge(other.sum);
        self.sum_sq.merge(other.sum_sq);
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.sum.value() / self.count as f64
    }

    /// Sample standard deviation over sqrt(n): the standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let mean = self.mean();
        let variance = ((self.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
        (variance / n).sqrt()
    }
}
