//! Estimation over a sample tree, the gap decider and the approximation driver.

mod approximator;
mod estimate;
mod reconstruct;
mod rmq;

use std::fmt;
use std::time::{Duration, Instant};

pub use approximator::Approximator;
pub use estimate::{
    delta_restricted, estimate_tree, shift_grid, DeltaMode, Estimate, QueryGuard, TauTable,
};
pub use reconstruct::{reconstruct_r, Copies};
pub use rmq::RangeMin;

use crate::error::Result;
use crate::etree::{pad_pair, TreeParams};
use crate::rng::{self, tag};
use crate::sampling::{build_sample_tree, SampleTree};
use crate::text::{Symbol, Text};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Far,
    Close,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Far => "far",
            Decision::Close => "close",
        })
    }
}

/// Result of one estimation run, with the parameters needed to replay it.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub estimate: f64,
    pub queries_used: usize,
    pub decision: Option<Decision>,
    pub wall_time: Duration,
    pub seed: u64,
    pub beta: f64,
    pub b: usize,
    pub n: usize,
}

impl EstimateReport {
    /// `key=value` lines.
    pub fn to_record(&self) -> String {
        let decision = self.decision.map_or("-".to_string(), |d| d.to_string());
        format!(
            "estimate={}\nqueries={}\ndecision={}\nbeta={}\nb={}\nn={}\nseed={}\nmillis={:.3}\n",
            self.estimate,
            self.queries_used,
            decision,
            self.beta,
            self.b,
            self.n,
            self.seed,
            self.wall_time.as_secs_f64() * 1e3
        )
    }
}

/// Estimates `E(0, 1, 1)` over a prebuilt tree using the restricted shift grid.
pub fn estimate_e_distance(
    x: &[Symbol],
    y: &[Symbol],
    tree: &SampleTree,
    params: &TreeParams,
) -> Result<EstimateReport> {
    estimate_e_distance_with(x, y, tree, params, DeltaMode::Restricted)
}

pub fn estimate_e_distance_with(
    x: &[Symbol],
    y: &[Symbol],
    tree: &SampleTree,
    params: &TreeParams,
    mode: DeltaMode,
) -> Result<EstimateReport> {
    let start = Instant::now();
    let est = estimate_tree(x, y, tree, params, mode)?;
    Ok(EstimateReport {
        estimate: est.value,
        queries_used: est.queries,
        decision: None,
        wall_time: start.elapsed(),
        seed: params.seed,
        beta: params.beta,
        b: params.b,
        n: params.n,
    })
}

/// Far when the estimate exceeds `2n/β`, close otherwise.
pub fn decide(estimate: f64, n: usize, beta: f64) -> Decision {
    if estimate > 2.0 * n as f64 / beta {
        Decision::Far
    } else {
        Decision::Close
    }
}

/// Gap decider for threshold `n/β`: samples a tree from `params` and estimates.
pub fn dtep_decide(x: &[Symbol], y: &[Symbol], params: &TreeParams) -> Result<EstimateReport> {
    let start = Instant::now();
    let tree = build_sample_tree(params)?;
    let mut report = estimate_e_distance(x, y, &tree, params)?;
    report.decision = Some(decide(report.estimate, params.n, params.beta));
    report.wall_time = start.elapsed();
    Ok(report)
}

/// [`dtep_decide`] on arbitrary texts: both are padded to a common power of `b`.
pub fn dtep(x: &Text, y: &Text, b: usize, beta: f64, seed: u64, consts: &Constants) -> Result<EstimateReport> {
    let (xp, yp, base) = pad_pair(x, y, b)?;
    let params = consts.apply(base).with_beta(beta).with_seed(seed);
    params.validate()?;
    dtep_decide(&xp, &yp, &params)
}

/// Tuning constants applied on top of [`TreeParams::new`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub c_p: f64,
    pub zeta: f64,
    /// Per-level slack; `None` keeps `1 / log₂ n`.
    pub eps: Option<f64>,
    pub root_boost: bool,
}

impl Constants {
    /// The constants exactly as written, with every hidden constant set to 1.
    pub const UNIT: Constants = Constants { c_p: 1.0, zeta: 1.0, eps: None, root_boost: false };

    /// Desk-scale constants tuned for accuracy around `n = 2^12`: trees there
    /// keep roughly a third of the positions and estimates stay within a
    /// factor 4 (plus `n/β`) of the exact E-distance.
    pub const DESK: Constants = Constants { c_p: 0.002, zeta: 0.001, eps: Some(0.5), root_boost: false };

    /// Constants tuned for the query budget around `n = 2^20`, where the
    /// `log³ n` factor is ~4.6× larger than at `2^12`. Too sparse for
    /// accurate estimates at small `n`.
    pub const LEAN: Constants = Constants { c_p: 0.0003, zeta: 0.001, eps: Some(0.5), root_boost: false };

    pub fn apply(&self, mut p: TreeParams) -> TreeParams {
        p.c_p = self.c_p;
        p.zeta = self.zeta;
        if let Some(e) = self.eps {
            p.eps = e;
        }
        p.root_boost = self.root_boost;
        p
    }
}

impl std::str::FromStr for Constants {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Constants::DESK),
            "lean" => Ok(Constants::LEAN),
            "unit" => Ok(Constants::UNIT),
            other => Err(crate::Error::InvalidParam(format!("unknown preset {other:?} (expected desk, lean or unit)"))),
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::DESK
    }
}

/// One decider run inside [`approximate_ed`].
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub beta: f64,
    pub report: EstimateReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    /// `n/β` for the smallest β decided far, or 0.
    pub estimate: f64,
    pub queries: usize,
    pub elapsed: Duration,
    pub n: usize,
    pub steps: Vec<Step>,
}

/// Runs the decider for `β = n, n/2, …, 2` and stops at the first close answer.
///
/// Both strings are padded to a common power of `b`. Each β uses its own
/// seed derived from `seed`.
pub fn approximate_ed(x: &Text, y: &Text, b: usize, seed: u64, consts: &Constants) -> Result<Approximation> {
    let start = Instant::now();
    let (xp, yp, base) = pad_pair(x, y, b)?;
    let n = base.n;
    let mut steps = Vec::new();
    let mut estimate = 0.0;
    let mut queries = 0;
    let mut beta = n;
    while beta >= 2 {
        let params = consts
            .apply(base.clone())
            .with_beta(beta as f64)
            .with_seed(rng::derive(seed, &[tag::BETA, beta as u64]));
        let report = dtep_decide(&xp, &yp, &params)?;
        queries += report.queries_used;
        let far = report.decision == Some(Decision::Far);
        steps.push(Step { beta: beta as f64, report });
        if !far {
            break;
        }
        estimate = (n / beta) as f64;
        beta /= 2;
    }
    Ok(Approximation { estimate, queries, elapsed: start.elapsed(), n, steps })
}
