//! Instance families shared by the benchmark harness and the test suites.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hard::{self, HardInstanceParams, Which};
use crate::rng::{self, tag};
use crate::text::Text;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Independent uniform strings.
    Random,
    /// `y` is `x` after `edits` random substitutions, insertions and deletions
    /// (length kept at `n`).
    RandomEdits,
    /// `y` is `x` rotated left by `edits` positions.
    Rotations,
    /// A same-family pair from the shift/substitution-product construction,
    /// cut to `n`; `edits` is ignored.
    HardPairs,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Random, Family::RandomEdits, Family::Rotations, Family::HardPairs];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::RandomEdits => "random-edits",
            Family::Rotations => "rotations",
            Family::HardPairs => "hard-pairs",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param(format!("unknown family {s:?}")))
    }
}

/// Draws one `(x, y)` pair of length `n` over `sigma` symbols.
pub fn generate(family: Family, n: usize, sigma: u32, edits: usize, seed: u64) -> Result<(Text, Text)> {
    if n == 0 || sigma == 0 {
        return Err(Error::param("n and sigma must be positive"));
    }
    let mut r = rng::stream(seed, &[tag::INSTANCE, n as u64]);
    let draw = |len: usize, r: &mut rng::Stream| -> Vec<u32> { (0..len).map(|_| r.gen_range(0..sigma)).collect() };
    let (x, y) = match family {
        Family::Random => (draw(n, &mut r), draw(n, &mut r)),
        Family::RandomEdits => {
            let x = draw(n, &mut r);
            let y = apply_edits(&x, edits, sigma, &mut r);
            (x, y)
        }
        Family::Rotations => {
            let x = draw(n, &mut r);
            let k = edits % n;
            let y = x[k..].iter().chain(&x[..k]).copied().collect();
            (x, y)
        }
        Family::HardPairs => {
            let params = HardInstanceParams::desk(seed);
            let (a, b) = hard::gen_hard_pair(&params, Which::Same, seed)?;
            let cut = |t: &Text| -> Vec<u32> { t.iter().copied().cycle().take(n).collect() };
            return Ok((Text::new(cut(&a), 2)?, Text::new(cut(&b), 2)?));
        }
    };
    Ok((Text::new(x, sigma)?, Text::new(y, sigma)?))
}

/// `edits` uniformly placed substitutions, insertions and deletions; the
/// result is trimmed or refilled to `|x|`.
pub fn apply_edits(x: &[u32], edits: usize, sigma: u32, r: &mut impl Rng) -> Vec<u32> {
    let n = x.len();
    let mut y = x.to_vec();
    for _ in 0..edits {
        if y.is_empty() {
            y.push(r.gen_range(0..sigma));
            continue;
        }
        let i = r.gen_range(0..y.len());
        match r.gen_range(0..3) {
            0 => y[i] = (y[i] + r.gen_range(1..sigma.max(2))) % sigma.max(1),
            1 => y.insert(i, r.gen_range(0..sigma)),
            _ => {
                y.remove(i);
            }
        }
    }
    while y.len() < n {
        y.push(r.gen_range(0..sigma));
    }
    y.truncate(n);
    y
}
