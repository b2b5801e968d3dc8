//! The b-ary decomposition of `[1, n]` and the exact E-distance it induces.
//!
//! Level `i` splits `[1, n]` into blocks of length `l_i = n / b^i` starting at
//! `1, l_i + 1, 2 l_i + 1, ...`; level `h = log_b n` holds the single positions.
//! Positions are 1-based throughout this module and its users.

mod edist;
mod transform;

pub use edist::{e_from_z, exact_e_distance, hamming, optimal_z, ZVector};
pub use transform::{distance_transform, distance_transform_f64};

use crate::error::{Error, Result};
use crate::text::Text;

/// Structural and tuning parameters shared by the exact, sampling and
/// estimation layers.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeParams {
    pub n: usize,
    pub b: usize,
    pub h: u32,
    pub beta: f64,
    /// Per-level approximation slack; defaults to `1 / log2 n`.
    pub eps: f64,
    /// Constant in front of the `log^3 n` oversampling factor.
    pub c_p: f64,
    /// Concentration constant of the sum-of-random-variables bound.
    pub zeta: f64,
    pub seed: u64,
    /// Give the root precision `4 beta` instead of `beta`.
    pub root_boost: bool,
    /// Failure probability for precisions drawn at level 1 (default: `1 / n^3`
    /// like every other level).
    pub first_level_delta: Option<f64>,
}

impl TreeParams {
    pub fn new(n: usize, b: usize) -> Result<Self> {
        if b < 2 {
            return Err(Error::param(format!("arity b = {b} must be at least 2")));
        }
        let h = exact_log(n, b)
            .ok_or_else(|| Error::dim(format!("n = {n} is not a positive power of b = {b}")))?;
        Ok(TreeParams {
            n,
            b,
            h,
            beta: 2.0,
            eps: 1.0 / (n as f64).log2(),
            c_p: 1.0,
            zeta: 1.0,
            seed: 0,
            root_boost: false,
            first_level_delta: None,
        })
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_constants(mut self, c_p: f64, zeta: f64) -> Self {
        self.c_p = c_p;
        self.zeta = zeta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.b < 2 || exact_log(self.n, self.b) != Some(self.h) {
            return Err(Error::dim(format!(
                "b^h = {}^{} does not equal n = {}",
                self.b, self.h, self.n
            )));
        }
        if !(self.beta >= 2.0) {
            return Err(Error::param(format!("beta = {} must be >= 2", self.beta)));
        }
        for (name, v) in [("eps", self.eps), ("c_p", self.c_p), ("zeta", self.zeta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(format!("{name} = {v} must be positive")));
            }
        }
        if let Some(d) = self.first_level_delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::param(format!("first-level delta {d} must lie in (0, 1)")));
            }
        }
        Ok(())
    }

    /// Block length `l_i = n / b^i`.
    pub fn level_len(&self, level: u32) -> usize {
        self.n / self.b.pow(level)
    }

    /// Number of blocks at `level`.
    pub fn level_width(&self, level: u32) -> usize {
        self.b.pow(level)
    }

    /// `log2 n`, the base used wherever a logarithm has no stated base.
    pub fn log_n(&self) -> f64 {
        (self.n as f64).log2()
    }

    /// Parameters for the second regime: `b = n^{1/t}` and a relaxed
    /// failure probability at the first level.
    pub fn second_regime(n: usize, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::param("t must be positive"));
        }
        let b = (n as f64).powf(1.0 / f64::from(t)).round() as usize;
        let mut p = TreeParams::new(n, b)?;
        if p.h != t {
            return Err(Error::dim(format!("n = {n} is not a {t}-th power")));
        }
        p.first_level_delta = Some(0.1);
        Ok(p)
    }
}

/// `(level, start)` of a block; `start` is 1-based and `≡ 1 (mod l_level)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub level: u32,
    pub start: usize,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId { level: 0, start: 1 };

    pub fn child(self, params: &TreeParams, j: usize) -> NodeId {
        NodeId { level: self.level + 1, start: self.start + j * params.level_len(self.level + 1) }
    }

    /// Position of this block among the blocks of its level (0-based).
    pub fn index(self, params: &TreeParams) -> usize {
        (self.start - 1) / params.level_len(self.level)
    }
}

/// `h` with `b^h = n` and `h >= 1`.
fn exact_log(n: usize, b: usize) -> Option<u32> {
    if n < b {
        return None;
    }
    let mut h = 0;
    let mut p = 1usize;
    while p < n {
        p = p.checked_mul(b)?;
        h += 1;
    }
    (p == n).then_some(h)
}

/// Smallest `b^h >= len` with `h >= 1`.
pub fn next_power(len: usize, b: usize) -> (usize, u32) {
    let mut n = b;
    let mut h = 1;
    while n < len {
        n *= b;
        h += 1;
    }
    (n, h)
}

/// Pads `x` with a fresh sentinel (code `alphabet_size`) up to the next power
/// of `b`. Returns the padded text, `n` and `h`.
pub fn pad_to_power(x: &Text, b: usize) -> Result<(Text, usize, u32)> {
    if b < 2 {
        return Err(Error::param(format!("arity b = {b} must be at least 2")));
    }
    if x.is_empty() {
        return Err(Error::param("cannot pad an empty text"));
    }
    let (n, h) = next_power(x.len(), b);
    Ok((pad_with(x, n, x.alphabet_size()), n, h))
}

/// Pads both strings to a common power of `b` using one shared sentinel.
pub fn pad_pair(x: &Text, y: &Text, b: usize) -> Result<(Text, Text, TreeParams)> {
    if b < 2 {
        return Err(Error::param(format!("arity b = {b} must be at least 2")));
    }
    let len = x.len().max(y.len());
    if len == 0 {
        return Err(Error::param("cannot pad two empty texts"));
    }
    let (n, _) = next_power(len, b);
    let sentinel = x.alphabet_size().max(y.alphabet_size());
    Ok((pad_with(x, n, sentinel), pad_with(y, n, sentinel), TreeParams::new(n, b)?))
}

fn pad_with(x: &Text, n: usize, sentinel: u32) -> Text {
    if x.len() == n && x.alphabet_size() >= sentinel {
        return x.clone();
    }
    let mut symbols = x.symbols().to_vec();
    symbols.resize(n, sentinel);
    Text::new(symbols, sentinel + 1).expect("sentinel is inside the extended alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_examples() {
        let x = Text::from("abcde");
        let (p, n, h) = pad_to_power(&x, 2).unwrap();
        assert_eq!((n, h), (8, 3));
        assert_eq!(&p[5..], &[256, 256, 256]);
        assert_eq!(p.alphabet_size(), 257);

        let (p, n, h) = pad_to_power(&Text::from("abcdefgh"), 2).unwrap();
        assert_eq!((n, h, p.len()), (8, 3, 8));
        assert_eq!(p, Text::from("abcdefgh"));

        let (_, n, h) = pad_to_power(&Text::from("abcdefghij"), 4).unwrap();
        assert_eq!((n, h), (16, 2));
    }

    #[test]
    fn params_reject_non_powers() {
        assert!(TreeParams::new(12, 2).is_err());
        assert!(TreeParams::new(1, 2).is_err());
        assert!(TreeParams::new(8, 1).is_err());
        let p = TreeParams::new(4096, 16).unwrap();
        assert_eq!((p.h, p.level_len(1), p.level_len(3)), (3, 256, 1));
    }

    #[test]
    fn validate_checks_ranges() {
        let p = TreeParams::new(16, 2).unwrap();
        assert!(p.clone().with_beta(1.5).validate().is_err());
        assert!(p.clone().with_constants(0.0, 1.0).validate().is_err());
        assert!(p.validate().is_ok());
    }

    #[test]
    fn second_regime_preset() {
        let p = TreeParams::second_regime(4096, 3).unwrap();
        assert_eq!((p.b, p.h, p.first_level_delta), (16, 3, Some(0.1)));
        assert!(TreeParams::second_regime(1000, 2).is_err());
    }

    #[test]
    fn node_children() {
        let p = TreeParams::new(16, 4).unwrap();
        let c = NodeId::ROOT.child(&p, 3);
        assert_eq!(c, NodeId { level: 1, start: 13 });
        assert_eq!(c.index(&p), 3);
        assert_eq!(c.child(&p, 2), NodeId { level: 2, start: 15 });
    }
}
