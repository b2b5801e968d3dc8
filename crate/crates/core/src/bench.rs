//! Benchmark harness: estimate-vs-exact records over a grid of `(n, b, β)`.
//!
//! Output is line oriented: a `#edist-approx v1` header, a `#`-prefixed
//! column line, one tab-separated record per `(n, b, β, trial)`, then
//! `#median` summary lines per cell.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{approximate_ed, dtep, Constants};
use crate::etree::next_power;
use crate::exact::ed;
use crate::rng;
use crate::workload::{generate, Family};

pub const HEADER: &str = "#edist-approx v1";
pub const COLUMNS: &str = "#family\tn\tb\tbeta\ttrial\tseed\testimate\texact\tratio\tqueries\tmillis";
/// Largest `n` for which the exact distance is computed alongside.
pub const EXACT_LIMIT: usize = 4096;

/// Either the full β scan or a single decider run at a fixed β.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaSpec {
    Scan,
    Fixed(f64),
}

impl fmt::Display for BetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaSpec::Scan => f.write_str("scan"),
            BetaSpec::Fixed(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for BetaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "scan" {
            return Ok(BetaSpec::Scan);
        }
        match s.parse::<f64>() {
            Ok(b) if b >= 2.0 => Ok(BetaSpec::Fixed(b)),
            _ => Err(Error::param(format!("beta {s:?} must be `scan` or a number ≥ 2"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub bs: Vec<usize>,
    pub betas: Vec<BetaSpec>,
    pub trials: usize,
    pub seed: u64,
    pub family: Family,
    pub sigma: u32,
    /// Edit or rotation magnitude as a fraction of `n`.
    pub edit_rate: f64,
    pub constants: Constants,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.bs.is_empty() || self.betas.is_empty() {
            return Err(Error::param("sizes, b values and betas must be non-empty"));
        }
        if let Some(&b) = self.bs.iter().find(|&&b| b < 2) {
            return Err(Error::param(format!("arity b = {b} must be at least 2")));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(Error::param(format!("size n = {n} must be at least 2")));
        }
        if self.sigma == 0 || !(0.0..=1.0).contains(&self.edit_rate) {
            return Err(Error::param("sigma must be positive and edit_rate in [0, 1]"));
        }
        for &n in &self.sizes {
            for &b in &self.bs {
                let (padded, _) = next_power(n, b);
                if padded > 1 << 26 {
                    return Err(Error::TooLarge(format!("n = {n} pads to {padded} at b = {b}")));
                }
            }
        }
        Ok(())
    }

    fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n in &self.sizes {
            for &b in &self.bs {
                for &beta in &self.betas {
                    for trial in 0..self.trials {
                        out.push(Cell { n, b, beta, trial });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    n: usize,
    b: usize,
    beta: BetaSpec,
    trial: usize,
}

/// One line of the report.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub family: Family,
    pub n: usize,
    pub b: usize,
    pub beta: BetaSpec,
    pub trial: usize,
    pub seed: u64,
    pub estimate: f64,
    pub exact: Option<usize>,
    pub queries: usize,
    pub millis: f64,
}

impl Record {
    /// `estimate / exact`, 1 when both are 0.
    pub fn ratio(&self) -> Option<f64> {
        let e = self.exact? as f64;
        Some(if e == 0.0 && self.estimate == 0.0 { 1.0 } else { self.estimate / e })
    }

    pub fn to_line(&self) -> String {
        let dash = || "-".to_string();
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
            self.family,
            self.n,
            self.b,
            self.beta,
            self.trial,
            self.seed,
            self.estimate,
            self.exact.map_or_else(dash, |e| e.to_string()),
            self.ratio().map_or_else(dash, |r| format!("{r:.6}")),
            self.queries,
            self.millis
        )
    }
}

fn run_cell(cfg: &BenchConfig, c: Cell) -> Result<Record> {
    let beta_key = match c.beta {
        BetaSpec::Scan => 0,
        BetaSpec::Fixed(b) => b.to_bits(),
    };
    let seed = rng::derive(cfg.seed, &[c.n as u64, c.b as u64, beta_key, c.trial as u64]);
    let edits = (cfg.edit_rate * c.n as f64).round() as usize;
    let (x, y) = generate(cfg.family, c.n, cfg.sigma, edits, seed)?;
    let start = Instant::now();
    let (estimate, queries) = match c.beta {
        BetaSpec::Scan => {
            let a = approximate_ed(&x, &y, c.b, seed, &cfg.constants)?;
            (a.estimate, a.queries)
        }
        BetaSpec::Fixed(beta) => {
            let r = dtep(&x, &y, c.b, beta, seed, &cfg.constants)?;
            (r.estimate, r.queries_used)
        }
    };
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let exact = (c.n <= EXACT_LIMIT).then(|| ed(&x, &y));
    Ok(Record {
        family: cfg.family,
        n: c.n,
        b: c.b,
        beta: c.beta,
        trial: c.trial,
        seed,
        estimate,
        exact,
        queries,
        millis,
    })
}

/// Runs every cell on a bounded pool; records come back in grid order.
pub fn run(cfg: &BenchConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::param(format!("worker pool: {e}")))?;
    let cells = cfg.cells();
    pool.install(|| cells.par_iter().map(|&c| run_cell(cfg, c)).collect())
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

/// `#median` lines: one per `(n, b, β)` with median ratio, queries and millis.
pub fn summary(records: &[Record]) -> Vec<String> {
    let mut keys: Vec<(usize, usize, String)> = Vec::new();
    for r in records {
        let k = (r.n, r.b, r.beta.to_string());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(n, b, beta)| {
            let cell: Vec<&Record> =
                records.iter().filter(|r| r.n == n && r.b == b && r.beta.to_string() == beta).collect();
            let ratio = median(cell.iter().filter_map(|r| r.ratio()).collect());
            let queries = median(cell.iter().map(|r| r.queries as f64).collect()).unwrap_or(0.0);
            let millis = median(cell.iter().map(|r| r.millis).collect()).unwrap_or(0.0);
            format!(
                "#median\t{}\t{n}\t{b}\t{beta}\tratio={}\tqueries={queries}\tmillis={millis:.3}",
                cell[0].family,
                ratio.map_or("-".to_string(), |r| format!("{r:.6}")),
            )
        })
        .collect()
}

/// Writes header, records and summary.
pub fn write_report(out: &mut impl Write, records: &[Record]) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    writeln!(out, "{COLUMNS}")?;
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    for line in summary(records) {
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}
