//! Exact (uniform) similarity of small, explicitly enumerated string
//! distributions, the substitution-product construction on distributions,
//! and the best adaptive `q`-query distinguisher between two of them.
//!
//! Distributions `p_1, …, p_k` are α-similar when
//! `(1 − α)·max_i p_i(ω) ≤ min_i p_i(ω)` for every outcome ω, and uniformly
//! α-similar when every projection onto `Q` is `α|Q|`-similar.

use std::collections::{BTreeMap, HashMap};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;
use crate::text::{Symbol, Text};

/// A probability mass function over projected patterns.
pub type Pmf = BTreeMap<Vec<Symbol>, f64>;

/// Largest `n` accepted by [`uniform_similarity`] (it enumerates `2^n` subsets).
pub const MAX_UNIFORM_N: usize = 16;
/// Largest support built by [`ExplicitDist::product`].
pub const MAX_SUPPORT: usize = 1 << 20;
/// Bound on `|Σ|^q · n^q` for the exhaustive distinguisher.
pub const MAX_TREE_STATES: f64 = 1e7;

/// A distribution given by its full support.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitDist {
    n: usize,
    support: Vec<(Vec<Symbol>, f64)>,
}

impl ExplicitDist {
    /// Duplicate strings are merged; zero-mass entries are dropped.
    pub fn new(support: Vec<(Vec<Symbol>, f64)>) -> Result<Self> {
        let total = check_masses(&support)?;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::param(format!("probabilities sum to {total}, not 1")));
        }
        Self::merged(support)
    }

    /// Like [`new`](Self::new), rescaling the masses to sum to 1.
    pub fn new_normalised(mut support: Vec<(Vec<Symbol>, f64)>) -> Result<Self> {
        let total = check_masses(&support)?;
        if !(total > 0.0) {
            return Err(Error::param("total mass is zero"));
        }
        support.iter_mut().for_each(|(_, p)| *p /= total);
        Self::merged(support)
    }

    fn merged(support: Vec<(Vec<Symbol>, f64)>) -> Result<Self> {
        let Some(n) = support.first().map(|(s, _)| s.len()) else {
            return Err(Error::param("empty support"));
        };
        let mut merged: BTreeMap<Vec<Symbol>, f64> = BTreeMap::new();
        for (s, p) in support {
            if s.len() != n {
                return Err(Error::dim(format!("support strings of length {n} and {}", s.len())));
            }
            if p > 0.0 {
                *merged.entry(s).or_insert(0.0) += p;
            }
        }
        Ok(ExplicitDist { n, support: merged.into_iter().collect() })
    }

    /// Uniform over the listed strings (with multiplicity).
    pub fn uniform(strings: Vec<Vec<Symbol>>) -> Result<Self> {
        let m = strings.len() as f64;
        Self::new_normalised(strings.into_iter().map(|s| (s, 1.0 / m)).collect())
    }

    pub fn point(x: &[Symbol]) -> Self {
        ExplicitDist { n: x.len(), support: vec![(x.to_vec(), 1.0)] }
    }

    /// The shift distribution: `x` rotated left by a uniform offset in `[1, s]`.
    pub fn shifts(x: &[Symbol], s: usize) -> Result<Self> {
        if s == 0 || s > x.len() {
            return Err(Error::param(format!("shift magnitude {s} outside [1, {}]", x.len())));
        }
        let n = x.len();
        Self::uniform((1..=s).map(|r| x[r % n..].iter().chain(&x[..r % n]).copied().collect()).collect())
    }

    /// `E ⊛ D`: draw a mother string from `self`, then replace each symbol `a`
    /// by an independent draw of `blocks[a]`.
    pub fn product(&self, blocks: &[ExplicitDist]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::param("no block distributions"));
        };
        let block_len = first.n;
        if blocks.iter().any(|d| d.n != block_len) {
            return Err(Error::dim("block distributions of different lengths".to_string()));
        }
        let mut out: Vec<(Vec<Symbol>, f64)> = Vec::new();
        for (mother, p) in &self.support {
            let mut partial: Vec<(Vec<Symbol>, f64)> = vec![(Vec::with_capacity(self.n * block_len), *p)];
            for &a in mother {
                let d = blocks
                    .get(a as usize)
                    .ok_or_else(|| Error::param(format!("no block distribution for symbol {a}")))?;
                if partial.len() * d.support.len() + out.len() > MAX_SUPPORT {
                    return Err(Error::TooLarge(format!("product support exceeds {MAX_SUPPORT}")));
                }
                partial = partial
                    .iter()
                    .flat_map(|(s, q)| {
                        d.support.iter().map(move |(t, r)| {
                            let mut u = s.clone();
                            u.extend_from_slice(t);
                            (u, q * r)
                        })
                    })
                    .collect();
            }
            out.extend(partial);
        }
        Self::new_normalised(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(Vec<Symbol>, f64)] {
        &self.support
    }

    pub fn sampler(&self) -> Sampler<'_> {
        let index = WeightedIndex::new(self.support.iter().map(|(_, p)| *p)).expect("validated masses");
        Sampler { dist: self, index }
    }

    /// Text format: one `probability string` per line, `#` comments. Each
    /// character of `string` is one symbol (its byte value).
    pub fn parse(src: &str) -> Result<Self> {
        let mut support = Vec::new();
        for (i, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (p, s) = line
                .split_once(|c: char| c.is_whitespace() || c == ',')
                .ok_or_else(|| Error::parse(i + 1, "expected `probability string`"))?;
            let p: f64 = p.parse().map_err(|_| Error::parse(i + 1, format!("bad probability {p:?}")))?;
            support.push((Text::from(s.trim()).into_symbols(), p));
        }
        Self::new(support)
    }
}

/// Draws support strings of an [`ExplicitDist`].
pub struct Sampler<'a> {
    dist: &'a ExplicitDist,
    index: WeightedIndex<f64>,
}

impl<'a> Sampler<'a> {
    pub fn draw(&self, r: &mut impl Rng) -> &'a [Symbol] {
        &self.dist.support[self.index.sample(r)].0
    }
}

/// The marginal of `d` on the 1-based positions `q` (in the given order).
pub fn projected_pmf(d: &ExplicitDist, q: &[usize]) -> Result<Pmf> {
    if let Some(&bad) = q.iter().find(|&&i| i == 0 || i > d.n) {
        return Err(Error::param(format!("position {bad} outside [1, {}]", d.n)));
    }
    let mut pmf = Pmf::new();
    for (s, p) in &d.support {
        *pmf.entry(q.iter().map(|&i| s[i - 1]).collect()).or_insert(0.0) += p;
    }
    Ok(pmf)
}

/// Least α with `(1 − α)·max_i p_i(ω) ≤ min_i p_i(ω)` for all ω; outcomes no
/// pmf supports are ignored.
pub fn similarity_alpha(pmfs: &[Pmf]) -> Result<f64> {
    if pmfs.is_empty() {
        return Err(Error::param("no pmfs"));
    }
    let mut alpha: f64 = 0.0;
    for pmf in pmfs {
        for omega in pmf.keys() {
            let ps = pmfs.iter().map(|p| p.get(omega).copied().unwrap_or(0.0));
            let (lo, hi) = ps.fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p), hi.max(p)));
            if hi > 0.0 {
                alpha = alpha.max(1.0 - lo / hi);
            }
        }
    }
    Ok(alpha)
}

/// Similarity of the projections onto the positions in the bitmask `mask`.
pub fn similarity_on(dists: &[ExplicitDist], mask: u32) -> Result<f64> {
    let q: Vec<usize> = (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b as usize + 1).collect();
    let pmfs = dists.iter().map(|d| projected_pmf(d, &q)).collect::<Result<Vec<_>>>()?;
    similarity_alpha(&pmfs)
}

/// Least α such that the family is uniformly α-similar:
/// `max_{Q ≠ ∅} similarity(D|_Q) / |Q|`, by enumerating all subsets.
pub fn uniform_similarity(dists: &[ExplicitDist]) -> Result<f64> {
    let n = check_family(dists)?;
    if n > MAX_UNIFORM_N {
        return Err(Error::TooLarge(format!("n = {n} > {MAX_UNIFORM_N}: 2^n subsets")));
    }
    (1u32..1 << n)
        .into_par_iter()
        .map(|mask| similarity_on(dists, mask).map(|a| a / f64::from(mask.count_ones())))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn check_masses(support: &[(Vec<Symbol>, f64)]) -> Result<f64> {
    if let Some((_, p)) = support.iter().find(|(_, p)| !(*p >= 0.0 && p.is_finite())) {
        return Err(Error::param(format!("probability {p} is not a finite non-negative number")));
    }
    Ok(support.iter().map(|(_, p)| p).sum())
}

fn check_family(dists: &[ExplicitDist]) -> Result<usize> {
    let n = dists.first().ok_or_else(|| Error::param("no distributions"))?.n;
    if dists.iter().any(|d| d.n != n) {
        return Err(Error::dim("distributions over different lengths".to_string()));
    }
    Ok(n)
}

/// `1/A` with `A = max{log_{|Σ|} (s / (400 ln n))^{1/6}, 1}`: the similarity
/// guaranteed for shift distributions of random base strings. At any
/// practical size `A = 1` and the bound is vacuous.
pub fn shift_similarity_bound(sigma: u32, s: usize, n: usize) -> f64 {
    let inner = (s as f64 / (400.0 * (n as f64).ln())).powf(1.0 / 6.0);
    let a = (inner.ln() / f64::from(sigma).ln()).max(1.0);
    1.0 / a
}

/// An adaptive decision tree over positions of the input string.
#[derive(Clone, Debug, PartialEq)]
pub enum DecisionTree {
    Leaf(u8),
    /// Query a 1-based position; unlisted answers output `0`.
    Query { pos: usize, children: BTreeMap<Symbol, DecisionTree> },
}

impl DecisionTree {
    pub fn run(&self, x: &[Symbol]) -> u8 {
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf(b) => return *b,
                DecisionTree::Query { pos, children } => match children.get(&x[pos - 1]) {
                    Some(c) => node = c,
                    None => return 0,
                },
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { children, .. } => 1 + children.values().map(Self::depth).max().unwrap_or(0),
        }
    }
}

/// Outcome of [`distinguisher_experiment`].
#[derive(Clone, Debug, PartialEq)]
pub struct Distinguisher {
    pub q: usize,
    pub tree: DecisionTree,
    /// Exact `Pr[output j | input ~ D_j]` of the tree.
    pub p0: f64,
    pub p1: f64,
    /// Monte Carlo estimates and their standard errors.
    pub p0_hat: f64,
    pub p1_hat: f64,
    pub se0: f64,
    pub se1: f64,
    /// Uniform similarity of the pair and the bound `(1 + μq)/2`.
    pub mu: f64,
    pub bound: f64,
}

impl Distinguisher {
    /// `min(p̂₀, p̂₁) ≤ (1 + μq)/2` up to `z` standard errors.
    pub fn respects_bound(&self, z: f64) -> bool {
        let (p, se) = if self.p0_hat <= self.p1_hat { (self.p0_hat, self.se0) } else { (self.p1_hat, self.se1) };
        p <= self.bound + z * se
    }
}

struct TreeSearch<'a> {
    d: [&'a ExplicitDist; 2],
    q: usize,
    memo: HashMap<Vec<(usize, Symbol)>, f64>,
}

impl TreeSearch<'_> {
    /// Masses of `D_0`, `D_1` consistent with the observations.
    fn mass(&self, obs: &[(usize, Symbol)]) -> [f64; 2] {
        self.d.map(|d| {
            d.support
                .iter()
                .filter(|(s, _)| obs.iter().all(|&(i, c)| s[i] == c))
                .map(|(_, p)| p)
                .sum()
        })
    }

    fn unqueried(&self, obs: &[(usize, Symbol)]) -> Vec<usize> {
        (0..self.d[0].n).filter(|i| obs.iter().all(|&(j, _)| j != *i)).collect()
    }

    /// Symbols seen at position `i` among strings consistent with `obs`.
    fn answers(&self, obs: &[(usize, Symbol)], i: usize) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self
            .d
            .iter()
            .flat_map(|d| d.support.iter())
            .filter(|(s, _)| obs.iter().all(|&(j, c)| s[j] == c))
            .map(|(s, _)| s[i])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Best `p_0 + p_1` restricted to inputs consistent with `obs` (0-based positions).
    fn value(&mut self, obs: &mut Vec<(usize, Symbol)>) -> f64 {
        if let Some(&v) = self.memo.get(obs.as_slice()) {
            return v;
        }
        let [m0, m1] = self.mass(obs);
        let mut best = m0.max(m1);
        if obs.len() < self.q {
            for i in self.unqueried(obs) {
                let mut v = 0.0;
                for c in self.answers(obs, i) {
                    let at = obs.partition_point(|&(j, _)| j < i);
                    obs.insert(at, (i, c));
                    v += self.value(obs);
                    obs.remove(at);
                }
                best = best.max(v);
            }
        }
        self.memo.insert(obs.clone(), best);
        best
    }

    fn build(&mut self, obs: &mut Vec<(usize, Symbol)>) -> DecisionTree {
        let target = self.value(obs);
        let [m0, m1] = self.mass(obs);
        let leaf = DecisionTree::Leaf(u8::from(m1 > m0));
        if m0.max(m1) >= target || obs.len() >= self.q {
            return leaf;
        }
        for i in self.unqueried(obs) {
            let answers = self.answers(obs, i);
            let at = obs.partition_point(|&(j, _)| j < i);
            let mut v = 0.0;
            for &c in &answers {
                obs.insert(at, (i, c));
                v += self.value(obs);
                obs.remove(at);
            }
            if v >= target {
                let mut children = BTreeMap::new();
                for c in answers {
                    obs.insert(at, (i, c));
                    children.insert(c, self.build(obs));
                    obs.remove(at);
                }
                return DecisionTree::Query { pos: i + 1, children };
            }
        }
        leaf
    }
}

/// Builds the `q`-query adaptive tree maximising `p_0 + p_1` (so also the
/// best achievable `min(p_0, p_1)` up to randomised balancing), evaluates it
/// exactly, and replays it on `trials` samples from each distribution.
pub fn distinguisher_experiment(
    d0: &ExplicitDist,
    d1: &ExplicitDist,
    q: usize,
    trials: usize,
    seed: u64,
) -> Result<Distinguisher> {
    let n = check_family(&[d0.clone(), d1.clone()])?;
    if q > n {
        return Err(Error::param(format!("q = {q} > n = {n}")));
    }
    let sigma = d0
        .support
        .iter()
        .chain(&d1.support)
        .flat_map(|(s, _)| s.iter().copied())
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let states = (sigma as f64 * n as f64).powi(q as i32);
    if states > MAX_TREE_STATES {
        return Err(Error::TooLarge(format!("|Σ|^q·n^q = {states:.3e} > {MAX_TREE_STATES:e}")));
    }
    let mut search = TreeSearch { d: [d0, d1], q, memo: HashMap::new() };
    let tree = search.build(&mut Vec::new());
    let exact = |d: &ExplicitDist, want: u8| -> f64 {
        d.support.iter().filter(|(s, _)| tree.run(s) == want).map(|(_, p)| p).sum()
    };
    let (p0, p1) = (exact(d0, 0), exact(d1, 1));
    let mut r = rng::stream(seed, &[]);
    let mut hit_rate = |d: &ExplicitDist, want: u8| -> f64 {
        let sampler = d.sampler();
        let hits = (0..trials).filter(|_| tree.run(sampler.draw(&mut r)) == want).count();
        hits as f64 / trials.max(1) as f64
    };
    let (p0_hat, p1_hat) = (hit_rate(d0, 0), hit_rate(d1, 1));
    let se = |p: f64| (p * (1.0 - p) / trials.max(1) as f64).sqrt();
    let mu = uniform_similarity(&[d0.clone(), d1.clone()])?;
    Ok(Distinguisher {
        q,
        tree,
        p0,
        p1,
        p0_hat,
        p1_hat,
        se0: se(p0_hat),
        se1: se(p1_hat),
        mu,
        bound: (1.0 + mu * q as f64) / 2.0,
    })
}
