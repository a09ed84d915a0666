//! Total sum of squares and the subset lower bound used for pruning.

use std::ops::{Add, Sub};

/// Sufficient statistics of a residual multiset.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TssStats {
    pub n: usize,
    pub sum: f64,
    pub sumsq: f64,
}

impl TssStats {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut s = Self::default();
        for r in values {
            s.push(r);
        }
        s
    }

    #[inline]
    pub fn push(&mut self, r: f64) {
        self.n += 1;
        self.sum += r;
        self.sumsq += r * r;
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// `½ Σ (r − r̄)²`, zero for the empty set.
    #[inline]
    pub fn tss(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (0.5 * (self.sumsq - self.sum * self.sum / self.n as f64)).max(0.0)
    }
}

impl Add for TssStats {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { n: self.n + o.n, sum: self.sum + o.sum, sumsq: self.sumsq + o.sumsq }
    }
}

impl Sub for TssStats {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { n: self.n - o.n, sum: self.sum - o.sum, sumsq: self.sumsq - o.sumsq }
    }
}

pub fn tss(stats: &TssStats) -> f64 {
    stats.tss()
}

/// Lower bound on `tss(D1') + tss(D0')` for every `D1' ⊆ D1`, with
/// `D0' = D0 ∪ (D1 \ D1')`.
///
/// The minimum over all subsets is attained by moving either the `k`
/// largest or the `k` smallest residuals of `D1` to `D0`, so scanning both
/// directions over `k = 0..=|D1|` is exact. `d1_sorted` must be sorted
/// (either direction); the scan is `O(|D1|)`.
pub fn lower_bound(d1_sorted: &[f64], d0: TssStats) -> f64 {
    let total = TssStats::from_values(d1_sorted.iter().copied());
    let mut prefix = TssStats::default();
    let mut best = total.tss() + d0.tss();
    for &r in d1_sorted {
        prefix.push(r);
        let rest = total - prefix;
        // move the prefix to D0
        let moved_prefix = rest.tss() + (d0 + prefix).tss();
        // move everything but the prefix to D0
        let moved_rest = prefix.tss() + (d0 + rest).tss();
        best = best.min(moved_prefix).min(moved_rest);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tss_examples() {
        assert_eq!(TssStats::from_values([2.5, 2.5, 2.5]).tss(), 0.0);
        assert!((TssStats::from_values([1.0, 2.0, 3.0]).tss() - 1.0).abs() < 1e-15);
        assert_eq!(TssStats::default().tss(), 0.0);
    }

    #[test]
    fn stats_merge_exactly() {
        let a = TssStats::from_values([1.0, 2.0]);
        let b = TssStats::from_values([4.0]);
        assert_eq!(a + b, TssStats::from_values([1.0, 2.0, 4.0]));
        assert_eq!((a + b) - b, a);
    }

    #[test]
    fn bound_two_point_example() {
        let d1 = [1.0, -1.0];
        let d0 = TssStats::from_values([0.0]);
        assert!((lower_bound(&d1, d0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bound_constant_and_k0() {
        assert_eq!(lower_bound(&[3.0, 3.0], TssStats::from_values([3.0; 4])), 0.0);
        let d1 = [2.0, 0.5, -1.0];
        let d0 = TssStats::from_values([0.0, 4.0]);
        let unsplit_or_current = TssStats::from_values(d1).tss() + d0.tss();
        assert!(lower_bound(&d1, d0) <= unsplit_or_current);
    }
}
