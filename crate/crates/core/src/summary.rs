//! Sample summaries used by the replication harnesses.

use alloc::vec::Vec;

use crate::math;

/// Arithmetic mean; `NaN` for an empty slice.
pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation with `n − 1` in the denominator.
pub fn std_dev(x: &[f64]) -> f64 {
    let m = mean(x);
    let ss: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
    math::sqrt(ss / (x.len() as f64 - 1.0))
}

/// Linear-interpolation percentile (type 7), `q ∈ [0, 1]`.
pub fn percentile(x: &[f64], q: f64) -> f64 {
    let mut v: Vec<f64> = x.to_vec();
    v.sort_by(f64::total_cmp);
    percentile_sorted(&v, q)
}

pub fn percentile_sorted(v: &[f64], q: f64) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let h = (v.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = math::floor(h) as usize;
    let hi = (lo + 1).min(v.len() - 1);
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

pub fn median(x: &[f64]) -> f64 {
    percentile(x, 0.5)
}

/// Mean and central `level` percentile interval.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Mean with the 2.5 and 97.5 percentiles.
    pub fn of(x: &[f64]) -> Self {
        let mut v = x.to_vec();
        v.sort_by(f64::total_cmp);
        Self {
            mean: mean(x),
            lo: percentile_sorted(&v, 0.025),
            hi: percentile_sorted(&v, 0.975),
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }
}
