//! Compensated (Neumaier) summation.
//!
//! Metric values are means over up to 10^6 items; naive accumulation loses
//! digits there. All reductions in this crate go through `CompensatedSum`,
//! and partitioned reductions merge partial sums in a fixed order.

/// Neumaier variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
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

    /// Folds another partial sum into this one. Merge order must be fixed by
    /// the caller for deterministic partitioned reductions.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
        let mut acc = CompensatedSum::new();
        for v in values {
            acc.add(v);
        }
        acc.total()
    }

    #[test]
    fn recovers_digits_lost_by_naive_sum() {
        // 1 + 1e-16 repeated: naive accumulation drops every tiny term.
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1_000_000 {
            acc.add(1e-16);
        }
        let exact = 1.0 + 1e-10;
        assert!((acc.total() - exact).abs() < 1e-15);
    }

    #[test]
    fn merge_matches_sequential() {
        let values: Vec<f64> = (0..1000).map(|i| (i as f64).sin() * 1e3).collect();
        let sequential = sum(values.iter().copied());

        let mut left = CompensatedSum::new();
        let mut right = CompensatedSum::new();
        for v in &values[..500] {
            left.add(*v);
        }
        for v in &values[500..] {
            right.add(*v);
        }
        left.merge(&right);
        assert!((left.total() - sequential).abs() <= 1e-12 * sequential.abs().max(1.0));
    }
}
