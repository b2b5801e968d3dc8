//! Content-oblivious sampling of the decomposition tree.
//!
//! Each sampled node carries a precision `w`; its children are kept with
//! probability `p = (w / b) · c_p · log³ n`. When `p >= 1` every child is kept
//! and inherits `p` as its precision, otherwise kept children draw a fresh
//! precision from the heavy-tailed distribution [`PrecisionDist`]. Only the
//! parameters and the seed are consulted, never the strings.

use std::fmt::Write as _;
use std::io::BufRead;

use rand::Rng;

use crate::error::{Error, Result};
use crate::etree::{NodeId, TreeParams};
use crate::rng::{self, tag, Stream};

/// The max of `k` i.i.d. copies of a variable with density `ν / x²` on `[1, N³]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionDist {
    /// Range parameter `N`; the support is `[1, N³]`.
    pub range: f64,
    pub k: u64,
    pub nu: f64,
    pub rho: f64,
    pub eps: f64,
    pub delta: f64,
}

impl PrecisionDist {
    pub fn new(range: f64, rho: f64, eps: f64, delta: f64, zeta: f64) -> Result<Self> {
        if !(range > 1.0) {
            return Err(Error::param(format!("range N = {range} must exceed 1")));
        }
        if !(rho > 0.0 && eps > 0.0 && zeta > 0.0) {
            return Err(Error::param("rho, eps and zeta must be positive"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(format!("delta = {delta} must lie in (0, 1)")));
        }
        let k = ((2.0 * zeta / rho) * ((1.0 / delta).log2() / (eps / 2.0).powi(3))).ceil();
        Ok(PrecisionDist {
            range,
            k: (k as u64).max(1),
            nu: 1.0 / (1.0 - range.powi(-3)),
            rho,
            eps,
            delta,
        })
    }

    /// The distribution used for node precisions at `level` (ρ = 1, N = n,
    /// δ = 1/n³ unless overridden at level 1, ε from the parameters).
    pub fn for_level(params: &TreeParams, level: u32) -> Result<Self> {
        let n = params.n as f64;
        let delta = match params.first_level_delta {
            Some(d) if level == 1 => d,
            _ => n.powi(-3),
        };
        PrecisionDist::new(n, 1.0, params.eps, delta, params.zeta)
    }

    pub fn upper(&self) -> f64 {
        self.range.powi(3)
    }

    /// Single-copy CDF `ν (1 - 1/x)`.
    pub fn single_cdf(&self, x: f64) -> f64 {
        if x <= 1.0 {
            0.0
        } else if x >= self.upper() {
            1.0
        } else {
            self.nu * (1.0 - 1.0 / x)
        }
    }

    /// Inverse CDF of `W` at `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let x = 1.0 / (1.0 - u.powf(1.0 / self.k as f64) / self.nu);
        if x.is_nan() {
            self.upper()
        } else {
            x.clamp(1.0, self.upper())
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        self.quantile(rng.gen::<f64>())
    }

    /// One copy conditioned on being at most `w`.
    pub fn sample_truncated(&self, w: f64, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.gen();
        (1.0 / (1.0 - u * (1.0 - 1.0 / w))).clamp(1.0, w)
    }

    /// `E[W] = 1 + ∫_1^{N³} (1 - F₁(x)^k) dx`, by Simpson's rule in `ln x`.
    pub fn mean(&self) -> f64 {
        let top = self.upper().ln();
        let steps = 200_000usize;
        let hstep = top / steps as f64;
        let g = |t: f64| {
            let x = t.exp();
            let tail = -(self.k as f64 * self.single_cdf(x).ln()).exp_m1();
            tail * x
        };
        let mut acc = g(0.0) + g(top);
        for i in 1..steps {
            acc += g(i as f64 * hstep) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        1.0 + acc * hstep / 3.0
    }
}

/// A node kept by the sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledNode {
    pub id: NodeId,
    pub precision: f64,
    /// `(w / b) · c_p · log³ n`, uncapped; `>= 1` means full expansion.
    pub p_raw: f64,
    /// Index of the parent in the previous level.
    pub parent: Option<usize>,
    /// `(j, index in the next level)` for each kept child.
    pub children: Vec<(usize, usize)>,
}

impl SampledNode {
    pub fn p(&self) -> f64 {
        self.p_raw.min(1.0)
    }

    pub fn is_full(&self) -> bool {
        self.p_raw >= 1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleTree {
    pub params: TreeParams,
    pub levels: Vec<Vec<SampledNode>>,
}

/// The oversampling factor `c_p · log³ n`.
pub fn oversampling(params: &TreeParams) -> f64 {
    params.c_p * params.log_n().powi(3)
}

fn root(precision: f64, p_raw: f64) -> SampledNode {
    SampledNode { id: NodeId::ROOT, precision, p_raw, parent: None, children: Vec::new() }
}

/// Builds the pruned tree level by level.
pub fn build_sample_tree(params: &TreeParams) -> Result<SampleTree> {
    params.validate()?;
    let g = oversampling(params);
    let b = params.b;
    let w0 = if params.root_boost { 4.0 * params.beta } else { params.beta };
    let mut levels = vec![vec![root(w0, w0 / b as f64 * g)]];
    for level in 0..params.h {
        let dist = PrecisionDist::for_level(params, level + 1)?;
        let mut next = Vec::new();
        for (pi, v) in levels[level as usize].iter_mut().enumerate() {
            let kept: Vec<(usize, f64)> = if v.is_full() {
                (0..b).map(|j| (j, v.p_raw)).collect()
            } else {
                let mut rng = rng::stream(params.seed, &[tag::TREE, u64::from(level), v.id.start as u64]);
                (0..b)
                    .filter_map(|j| (rng.gen::<f64>() < v.p_raw).then(|| (j, dist.sample(&mut rng))))
                    .collect()
            };
            for (j, precision) in kept {
                v.children.push((j, next.len()));
                next.push(SampledNode {
                    id: v.id.child(params, j),
                    precision,
                    p_raw: precision / b as f64 * g,
                    parent: Some(pi),
                    children: Vec::new(),
                });
            }
        }
        levels.push(next);
    }
    Ok(SampleTree { params: params.clone(), levels })
}

impl SampleTree {
    /// The unpruned tree: every node kept, every node fully expanded.
    pub fn full(params: &TreeParams) -> Result<Self> {
        params.validate_structure()?;
        let b = params.b;
        let mut levels = vec![vec![root(f64::INFINITY, f64::INFINITY)]];
        for level in 1..=params.h {
            let width = params.level_width(level);
            let mut cur = Vec::with_capacity(width);
            for k in 0..width {
                let parent = k / b;
                levels[level as usize - 1][parent].children.push((k % b, k));
                cur.push(SampledNode {
                    id: NodeId { level, start: k * params.level_len(level) + 1 },
                    precision: f64::INFINITY,
                    p_raw: f64::INFINITY,
                    parent: Some(parent),
                    children: Vec::new(),
                });
            }
            levels.push(cur);
        }
        Ok(SampleTree { params: params.clone(), levels })
    }

    /// Positions of `x` the estimator will read: the kept leaves, ascending.
    pub fn query_set(&self) -> Vec<usize> {
        self.levels.last().map(|l| l.iter().map(|v| v.id.start).collect()).unwrap_or_default()
    }

    pub fn query_count(&self) -> usize {
        self.levels.last().map_or(0, Vec::len)
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::from("#sample-tree v1\n");
        let _ = writeln!(
            out,
            "#params n={} b={} h={} beta={} eps={} c_p={} zeta={} seed={} root_boost={} first_level_delta={}",
            p.n,
            p.b,
            p.h,
            p.beta,
            p.eps,
            p.c_p,
            p.zeta,
            p.seed,
            p.root_boost,
            p.first_level_delta.map_or("-".to_string(), |d| d.to_string())
        );
        out.push_str("#level start precision p_v parent_start\n");
        for (i, level) in self.levels.iter().enumerate() {
            for v in level {
                let parent = match v.parent {
                    Some(pi) => self.levels[i - 1][pi].id.start.to_string(),
                    None => "-".to_string(),
                };
                let _ = writeln!(out, "{} {} {} {} {}", v.id.level, v.id.start, v.precision, v.p_raw, parent);
            }
        }
        out
    }

    pub fn from_text(input: impl BufRead) -> Result<Self> {
        let mut params: Option<TreeParams> = None;
        let mut levels: Vec<Vec<SampledNode>> = Vec::new();
        for (ln, line) in input.lines().enumerate() {
            let line = line?;
            let ln = ln + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#params") {
                params = Some(parse_params(rest).map_err(|m| Error::parse(ln, m))?);
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let p = params.as_ref().ok_or_else(|| Error::parse(ln, "node line before #params header"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(Error::parse(ln, format!("expected 5 fields, found {}", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::parse(ln, format!("{s:?}: {e}")));
            let int = |s: &str| s.parse::<usize>().map_err(|e| Error::parse(ln, format!("{s:?}: {e}")));
            let level = int(f[0])? as u32;
            let start = int(f[1])?;
            if level > p.h || start == 0 || (start - 1) % p.level_len(level) != 0 || start > p.n {
                return Err(Error::parse(ln, format!("invalid node ({level}, {start})")));
            }
            let (precision, p_raw) = (num(f[2])?, num(f[3])?);
            while levels.len() <= level as usize {
                levels.push(Vec::new());
            }
            let parent = if level == 0 {
                if f[4] != "-" {
                    return Err(Error::parse(ln, "root must have parent '-'"));
                }
                None
            } else {
                let ps = int(f[4])?;
                let above = &levels[level as usize - 1];
                let pi = above
                    .binary_search_by_key(&ps, |v| v.id.start)
                    .map_err(|_| Error::parse(ln, format!("unknown parent start {ps}")))?;
                let offset = start.checked_sub(ps).filter(|d| *d < p.level_len(level - 1));
                let Some(offset) = offset else {
                    return Err(Error::parse(ln, format!("{start} is not inside parent block {ps}")));
                };
                Some((pi, offset / p.level_len(level)))
            };
            let idx = levels[level as usize].len();
            if levels[level as usize].last().is_some_and(|v| v.id.start >= start) {
                return Err(Error::parse(ln, "nodes of a level must be listed by increasing start"));
            }
            if let Some((pi, j)) = parent {
                levels[level as usize - 1][pi].children.push((j, idx));
            }
            levels[level as usize].push(SampledNode {
                id: NodeId { level, start },
                precision,
                p_raw,
                parent: parent.map(|(pi, _)| pi),
                children: Vec::new(),
            });
        }
        let params = params.ok_or_else(|| Error::parse(0, "missing #params header"))?;
        if levels.first().map_or(true, |l| l.len() != 1) {
            return Err(Error::parse(0, "tree must have exactly one root"));
        }
        levels.resize(params.h as usize + 1, Vec::new());
        Ok(SampleTree { params, levels })
    }
}

fn parse_params(rest: &str) -> std::result::Result<TreeParams, String> {
    let mut kv = std::collections::HashMap::new();
    for tok in rest.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("malformed token {tok:?}"))?;
        kv.insert(k, v);
    }
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| format!("missing {k}"));
    let num = |k: &str| -> std::result::Result<f64, String> {
        get(k)?.parse::<f64>().map_err(|e| format!("{k}: {e}"))
    };
    let n: usize = get("n")?.parse().map_err(|e| format!("n: {e}"))?;
    let b: usize = get("b")?.parse().map_err(|e| format!("b: {e}"))?;
    let mut p = TreeParams::new(n, b).map_err(|e| e.to_string())?;
    p.beta = num("beta")?;
    p.eps = num("eps")?;
    p.c_p = num("c_p")?;
    p.zeta = num("zeta")?;
    p.seed = get("seed")?.parse().map_err(|e| format!("seed: {e}"))?;
    p.root_boost = get("root_boost")?.parse().map_err(|e| format!("root_boost: {e}"))?;
    p.first_level_delta = match get("first_level_delta")? {
        "-" => None,
        v => Some(v.parse().map_err(|e| format!("first_level_delta: {e}"))?),
    };
    if get("h")? != p.h.to_string() {
        return Err("h inconsistent with n and b".into());
    }
    Ok(p)
}

/// Uniform subsampling of `b` items with one shared precision `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformSampler {
    pub b: usize,
    pub zeta: f64,
    pub eps: f64,
    pub delta: f64,
}

impl UniformSampler {
    /// `min(1, (w / b) · ζ · log(1/δ) / ε²)`.
    pub fn probability(&self, w: f64) -> f64 {
        ((w / self.b as f64) * self.zeta * (1.0 / self.delta).log2() / (self.eps * self.eps)).min(1.0)
    }

    /// Keeps each index with probability `p_w`; returns the kept set.
    pub fn subsample(&self, w: f64, rng: &mut Stream) -> Vec<usize> {
        let p = self.probability(w);
        (0..self.b).filter(|_| rng.gen::<f64>() < p).collect()
    }

    /// `(1 / p_w) · Σ_{j ∈ J} a_j`.
    pub fn estimate(&self, a: &[f64], w: f64, kept: &[usize]) -> f64 {
        kept.iter().map(|&j| a[j]).sum::<f64>() / self.probability(w)
    }
}
