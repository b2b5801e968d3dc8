//! Bottom-up estimation of the E-distance over a sample tree.
//!
//! A node's table `τ(v, ·)` is only materialised on the targets its ancestors
//! can ask for: the root is queried at 1 and each level adds at most `K`
//! of shift, so a level-`i` node needs `[s − iK, s + iK] ∩ [1 − n, 2n]`.
//! `K = ⌊3n/β⌋` for the restricted shift grid and `n` otherwise.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::estimation::reconstruct::{scale_count, threshold, Copies};
use crate::estimation::rmq::RangeMin;
use crate::etree::{distance_transform_f64, TreeParams};
use crate::rng::{self, tag};
use crate::sampling::{PrecisionDist, SampleTree};
use crate::text::Symbol;

/// How `δ_{v'}(z) = min_k τ(v', z + t_j + k) + |k|` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeltaMode {
    /// `k` on a geometric grid capped at `3n/β`, inner minima from a range-min index.
    #[default]
    Restricted,
    /// Every `|k| ≤ n`, by a distance transform.
    Unrestricted,
}

/// `{0} ∪ {⌊e^{i/L}⌋ : 1 ≤ i ≤ ⌈L ln(3n/β)⌉}` capped at `⌊3n/β⌋`, with `L = log₂ n`.
pub fn shift_grid(n: usize, beta: f64) -> Vec<usize> {
    let l = (n as f64).log2().max(1.0);
    let reach = 3.0 * n as f64 / beta;
    let cap = reach.floor() as usize;
    let steps = (l * reach.ln()).ceil().max(0.0) as usize;
    let mut grid = vec![0];
    for i in 1..=steps {
        let k = ((i as f64 / l).exp().floor() as usize).min(cap);
        if grid.last() != Some(&k) {
            grid.push(k);
        }
    }
    if grid.last() != Some(&cap) {
        grid.push(cap);
    }
    grid
}

/// A table `τ(v, z)` for `z ∈ [lo, lo + len)`.
#[derive(Clone, Debug)]
pub struct TauTable {
    pub lo: i64,
    pub values: Vec<f64>,
    rmq: Option<RangeMin>,
}

impl TauTable {
    pub fn new(lo: i64, values: Vec<f64>) -> Self {
        TauTable { lo, values, rmq: None }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn with_index(mut self) -> Self {
        self.rmq = Some(RangeMin::new(&self.values));
        self
    }

    /// `τ(z)`, or `+inf` outside the table.
    pub fn get(&self, z: i64) -> f64 {
        if z < self.lo || z > self.hi() {
            return f64::INFINITY;
        }
        self.values[(z - self.lo) as usize]
    }

    /// Minimum of `τ` over `[a, b]` clipped to the table.
    pub fn range_min(&self, a: i64, b: i64) -> f64 {
        let (a, b) = (a.max(self.lo), b.min(self.hi()));
        if a > b {
            return f64::INFINITY;
        }
        let (i, j) = ((a - self.lo) as usize, (b - self.lo) as usize);
        match &self.rmq {
            Some(r) => r.query(i, j),
            None => self.values[i..=j].iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

/// `δ′` at one target: the grid minimum of `k + min_{|k'| ≤ k} τ(target + k')`,
/// stopping as soon as `k` alone reaches the best value. Positions outside
/// `[1 − n, 2n]` are worth `outside` (the exact E-distance of a block there).
pub fn delta_restricted(
    child: &TauTable,
    target: i64,
    grid: &[usize],
    n: usize,
    outside: f64,
) -> f64 {
    let (glo, ghi) = (1 - n as i64, 2 * n as i64);
    if target < glo || target > ghi {
        return outside;
    }
    let mut best = f64::INFINITY;
    for &k in grid {
        let k = k as i64;
        if k as f64 >= best {
            break;
        }
        let mut m = if k == 0 { child.get(target) } else { child.range_min(target - k, target + k) };
        if target - k < glo || target + k > ghi {
            m = m.min(outside);
        }
        best = best.min(k as f64 + m);
    }
    best
}

/// Counting access guard over `x`: reads outside the allowed (sorted, 1-based)
/// positions are refused.
pub struct QueryGuard<'a> {
    x: &'a [Symbol],
    allowed: Vec<usize>,
    reads: Cell<usize>,
}

impl<'a> QueryGuard<'a> {
    pub fn new(x: &'a [Symbol], mut allowed: Vec<usize>) -> Self {
        allowed.sort_unstable();
        QueryGuard { x, allowed, reads: Cell::new(0) }
    }

    pub fn reads(&self) -> usize {
        self.reads.get()
    }

    pub fn read(&self, pos: usize) -> Result<Symbol> {
        if self.allowed.binary_search(&pos).is_err() {
            return Err(Error::AccessViolation { pos: pos as i64 });
        }
        self.reads.set(self.reads.get() + 1);
        Ok(self.x[pos - 1])
    }
}

struct Estimator<'a> {
    x: QueryGuard<'a>,
    y: &'a [Symbol],
    tree: &'a SampleTree,
    p: &'a TreeParams,
    mode: DeltaMode,
    reach: i64,
    grid: Vec<usize>,
    /// Precision distribution of each level `1..=h`, at index `level - 1`.
    dists: Vec<PrecisionDist>,
}

impl Estimator<'_> {
    fn window(&self, level: u32, start: usize) -> (i64, i64) {
        let n = self.p.n as i64;
        let s = start as i64;
        let r = i64::from(level) * self.reach;
        ((s - r).max(1 - n), (s + r).min(2 * n))
    }

    fn table(&self, level: u32, idx: usize) -> Result<TauTable> {
        let v = &self.tree.levels[level as usize][idx];
        let (lo, hi) = self.window(level, v.id.start);
        let m = (hi - lo + 1) as usize;
        if level == self.p.h {
            let c = self.x.read(v.id.start)?;
            let n = self.p.n as i64;
            let values = (lo..=hi)
                .map(|z| {
                    let hit = (1..=n).contains(&z) && self.y[(z - 1) as usize] == c;
                    if hit {
                        0.0
                    } else {
                        1.0
                    }
                })
                .collect();
            return Ok(TauTable::new(lo, values));
        }
        let lc = self.p.level_len(level + 1);
        let mut acc = vec![0.0; m];
        if v.is_full() {
            for &(j, ci) in &v.children {
                let d = self.deltas(level + 1, ci, (j * lc) as i64, lo, m)?;
                acc.iter_mut().zip(&d).for_each(|(a, b)| *a += b);
            }
        } else {
            let dist = &self.dists[level as usize];
            let t = threshold(dist);
            let mut counts = vec![0u64; m];
            for &(j, ci) in &v.children {
                let child = &self.tree.levels[level as usize + 1][ci];
                let d = self.deltas(level + 1, ci, (j * lc) as i64, lo, m)?;
                let mut rng = rng::stream(
                    self.p.seed,
                    &[tag::RECONSTRUCT, u64::from(level + 1), child.id.start as u64],
                );
                let copies = Copies::regenerate(child.precision, dist, &mut rng);
                for (c, dv) in counts.iter_mut().zip(&d) {
                    *c += copies.fired(dv / lc as f64, t) as u64;
                }
            }
            let scale = lc as f64 / v.p();
            for (a, &c) in acc.iter_mut().zip(&counts) {
                *a = scale_count(c as f64, dist) * scale;
            }
        }
        Ok(TauTable::new(lo, acc))
    }

    /// `δ` of child `ci` at every target `z + offset`, `z ∈ [lo, lo + m)`.
    fn deltas(&self, level: u32, ci: usize, offset: i64, lo: i64, m: usize) -> Result<Vec<f64>> {
        let child = self.table(level, ci)?;
        let outside = self.p.level_len(level) as f64;
        let n = self.p.n;
        let (glo, ghi) = (1 - n as i64, 2 * n as i64);
        let targets = (lo..lo + m as i64).map(|z| z + offset);
        Ok(match self.mode {
            DeltaMode::Restricted => {
                let child = child.with_index();
                targets.map(|u| delta_restricted(&child, u, &self.grid, n, outside)).collect()
            }
            DeltaMode::Unrestricted => {
                let g = distance_transform_f64(&child.values, n);
                targets
                    .map(|u| {
                        if u < glo || u > ghi {
                            return outside;
                        }
                        let edge = (u - glo).min(ghi - u) + 1;
                        let beyond = if edge <= n as i64 { outside + edge as f64 } else { f64::INFINITY };
                        let inside = if u >= child.lo && u <= child.hi() {
                            g[(u - child.lo) as usize]
                        } else {
                            f64::INFINITY
                        };
                        inside.min(beyond)
                    })
                    .collect()
            }
        })
    }
}

/// Output of one estimation run.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub queries: usize,
}

/// Runs the bottom-up estimation of `E(0, 1, 1)` over `tree`.
///
/// `x` is only read at the tree's leaves; any other read is reported as
/// [`Error::AccessViolation`]. `y` is read freely.
pub fn estimate_tree(
    x: &[Symbol],
    y: &[Symbol],
    tree: &SampleTree,
    params: &TreeParams,
    mode: DeltaMode,
) -> Result<Estimate> {
    if tree.params != *params {
        return Err(Error::TreeMismatch(format!("tree {:?} vs params {:?}", tree.params, params)));
    }
    params.validate_structure()?;
    if x.len() != params.n || y.len() != params.n {
        return Err(Error::dim(format!("|x| = {}, |y| = {}, n = {}", x.len(), y.len(), params.n)));
    }
    if tree.levels.len() != params.h as usize + 1 || tree.levels[0].len() != 1 {
        return Err(Error::TreeMismatch("tree shape does not match h".into()));
    }
    let n = params.n;
    let reach = match mode {
        DeltaMode::Restricted => (3.0 * n as f64 / params.beta).floor() as i64,
        DeltaMode::Unrestricted => n as i64,
    };
    let dists = (1..=params.h)
        .map(|l| PrecisionDist::for_level(params, l))
        .collect::<Result<Vec<_>>>()?;
    let est = Estimator {
        x: QueryGuard::new(x, tree.query_set()),
        y,
        tree,
        p: params,
        mode,
        reach,
        grid: shift_grid(n, params.beta),
        dists,
    };
    let root = est.table(0, 0)?;
    let value = root.values[(1 - root.lo) as usize];
    Ok(Estimate { value, queries: est.x.reads() })
}
