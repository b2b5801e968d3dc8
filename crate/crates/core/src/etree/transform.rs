//! Windowed distance transform `g(u) = min_{|r| <= w} f(u + r) + |r|`.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

trait Cost: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> {
    const ONE: Self;
    fn of(v: usize) -> Self;
}

impl Cost for i64 {
    const ONE: i64 = 1;
    fn of(v: usize) -> i64 {
        v as i64
    }
}

impl Cost for f64 {
    const ONE: f64 = 1.0;
    fn of(v: usize) -> f64 {
        v as f64
    }
}

fn min<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Unbounded transform: one pass each way.
fn two_pass<T: Cost>(g: &mut [T]) {
    for u in 1..g.len() {
        g[u] = min(g[u], g[u - 1] + T::ONE);
    }
    for u in (0..g.len().saturating_sub(1)).rev() {
        g[u] = min(g[u], g[u + 1] + T::ONE);
    }
}

/// Bounded transform via two sliding-window minima: of `f(v) + v` over
/// `[u, u + w]` and of `f(v) - v` over `[u - w, u]`.
fn windowed<T: Cost>(f: &[T], w: usize) -> Vec<T> {
    let m = f.len();
    let mut g: Vec<T> = f.to_vec();
    let mut dq: VecDeque<usize> = VecDeque::new();
    let key_r = |v: usize| f[v] + T::of(v);
    for u in (0..m).rev() {
        while dq.back().is_some_and(|&v| key_r(v) >= key_r(u)) {
            dq.pop_back();
        }
        dq.push_back(u);
        while dq.front().is_some_and(|&v| v > u + w) {
            dq.pop_front();
        }
        g[u] = min(g[u], key_r(dq[0]) - T::of(u));
    }
    dq.clear();
    let key_l = |v: usize| f[v] - T::of(v);
    for u in 0..m {
        while dq.back().is_some_and(|&v| key_l(v) >= key_l(u)) {
            dq.pop_back();
        }
        dq.push_back(u);
        while dq.front().is_some_and(|&v| v + w < u) {
            dq.pop_front();
        }
        g[u] = min(g[u], key_l(dq[0]) + T::of(u));
    }
    g
}

fn transform<T: Cost>(f: &[T], window: usize) -> Vec<T> {
    let Some(first) = f.first() else { return Vec::new() };
    let (lo, hi) = f.iter().fold((*first, *first), |(lo, hi), &v| (min(lo, v), if v > hi { v } else { hi }));
    // A shift longer than the value spread never beats r = 0, so the window
    // is inactive and plain propagation is exact.
    if window + 1 >= f.len() || T::of(window) >= hi - lo {
        let mut g = f.to_vec();
        two_pass(&mut g);
        g
    } else {
        windowed(f, window)
    }
}

/// Distance transform of a finite integer vector; positions past either end
/// count as `+inf`. Linear time.
pub fn distance_transform(f: &[u32], window: usize) -> Vec<u32> {
    let wide: Vec<i64> = f.iter().map(|&v| i64::from(v)).collect();
    transform(&wide, window).into_iter().map(|v| v as u32).collect()
}

/// [`distance_transform`] over reals.
pub fn distance_transform_f64(f: &[f64], window: usize) -> Vec<f64> {
    transform(f, window)
}

/// In-place unbounded transform of an integer vector, used by the exact DP
/// where every vector satisfies the fast-path condition.
pub(crate) fn propagate_u32(g: &mut [u32]) {
    for u in 1..g.len() {
        g[u] = g[u].min(g[u - 1] + 1);
    }
    for u in (0..g.len().saturating_sub(1)).rev() {
        g[u] = g[u].min(g[u + 1] + 1);
    }
}
