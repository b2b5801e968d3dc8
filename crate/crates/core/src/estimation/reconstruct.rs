//! The reconstruction estimator `R`.
//!
//! Item `i` arrives with a precision `w_i ~ W` and an estimate `â_i`. `R`
//! re-creates the `k` single copies behind `w_i` (their max is `w_i`), credits
//! `1/k` for every copy with `â_i ≥ t / w_{i,j}` where `t = 3/ε`, and returns
//! the total credit times `t / ν`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling::PrecisionDist;

/// The `k` copies of one item, ascending. Which slot holds the maximum does
/// not affect any count, so the copies are kept sorted instead.
#[derive(Clone, Debug)]
pub struct Copies {
    sorted: Vec<f64>,
}

impl Copies {
    pub fn regenerate(w: f64, dist: &PrecisionDist, rng: &mut impl Rng) -> Self {
        let mut sorted: Vec<f64> = (1..dist.k).map(|_| dist.sample_truncated(w, rng)).collect();
        sorted.push(w);
        sorted.sort_by(f64::total_cmp);
        Copies { sorted }
    }

    /// Number of copies `w_{i,j}` with `a_hat ≥ t / w_{i,j}`.
    pub fn fired(&self, a_hat: f64, t: f64) -> usize {
        if !(a_hat > 0.0) {
            return 0;
        }
        let threshold = t / a_hat;
        self.sorted.len() - self.sorted.partition_point(|&c| c < threshold)
    }
}

/// The threshold `t = 3/ε`.
pub fn threshold(dist: &PrecisionDist) -> f64 {
    3.0 / dist.eps
}

/// Converts a total fired count into the estimate `(count / k) · t / ν`.
pub fn scale_count(count: f64, dist: &PrecisionDist) -> f64 {
    count / dist.k as f64 * threshold(dist) / dist.nu
}

/// `R(â, w)`: estimate of `Σ a_i` from per-item estimates of mixed precision.
pub fn reconstruct_r(a_hat: &[f64], w: &[f64], dist: &PrecisionDist, rng: &mut impl Rng) -> Result<f64> {
    if a_hat.len() != w.len() {
        return Err(Error::dim(format!("{} estimates but {} precisions", a_hat.len(), w.len())));
    }
    let t = threshold(dist);
    let mut count = 0usize;
    for (&a, &wi) in a_hat.iter().zip(w) {
        if !(1.0..=dist.upper()).contains(&wi) {
            return Err(Error::param(format!("precision {wi} outside [1, N^3]")));
        }
        count += Copies::regenerate(wi, dist, rng).fired(a, t);
    }
    Ok(scale_count(count as f64, dist))
}
