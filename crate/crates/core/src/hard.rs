//! Lower-bound instance generators.
//!
//! A base string `x_a ∈ Σ^B` per symbol `a`, the shift distribution
//! `D_a = S_s(x_a)` (rotate left by a uniform offset in `[1, s]`), and the
//! recursive family `E_{1,a} = D_a`, `E_{i,a} = E_{i-1,a} ⊛ D`: draw a mother
//! string from `E_{i-1,a}` and replace every symbol `c` by a fresh draw of `D_c`.
//! A random binary code `Σ → {0,1}^T` finally maps everything to bits.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{edd_certified, lcs};
use crate::rng::{self, tag, Stream};
use crate::text::{Symbol, Text};

/// `S^r(x)`: rotate left by `r` (taken mod `|x|`, negative allowed).
pub fn cyclic_shift(x: &Text, r: i64) -> Result<Text> {
    if x.is_empty() {
        return Err(Error::param("cannot rotate an empty text"));
    }
    let k = r.rem_euclid(x.len() as i64) as usize;
    let symbols = x[k..].iter().chain(&x[..k]).copied().collect();
    Text::new(symbols, x.alphabet_size())
}

/// `S^r(x)` for `r` uniform in `[1, s]`.
pub fn sample_shift(x: &Text, s: usize, rng: &mut impl Rng) -> Result<Text> {
    if s == 0 || s > x.len() {
        return Err(Error::param(format!("shift magnitude {s} outside [1, {}]", x.len())));
    }
    cyclic_shift(x, rng.gen_range(1..=s) as i64)
}

/// Images `B(a)` of equal length for every symbol `a` of the source alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionMap {
    images: Vec<Text>,
}

impl SubstitutionMap {
    pub fn new(images: Vec<Text>) -> Result<Self> {
        let Some(first) = images.first() else {
            return Err(Error::param("substitution map needs at least one image"));
        };
        let (len, sigma) = (first.len(), first.alphabet_size());
        if images.iter().any(|t| t.len() != len || t.alphabet_size() != sigma) {
            return Err(Error::param("all images must share length and alphabet"));
        }
        Ok(SubstitutionMap { images })
    }

    pub fn image_len(&self) -> usize {
        self.images[0].len()
    }

    pub fn target_alphabet(&self) -> u32 {
        self.images[0].alphabet_size()
    }

    pub fn images(&self) -> &[Text] {
        &self.images
    }

    pub fn image(&self, a: Symbol) -> Option<&Text> {
        self.images.get(a as usize)
    }
}

/// `x ⊛ B`: the concatenation `B(x_1) B(x_2) … B(x_n)`.
pub fn substitution_product(x: &[Symbol], map: &SubstitutionMap) -> Result<Text> {
    let mut out = Vec::with_capacity(x.len() * map.image_len());
    for (pos, &a) in x.iter().enumerate() {
        let img = map.image(a).ok_or_else(|| Error::SymbolOutOfRange {
            pos,
            symbol: a,
            alphabet_size: map.images.len() as u32,
        })?;
        out.extend_from_slice(img);
    }
    Text::new(out, map.target_alphabet())
}

/// `λ_B = max_{a ≠ b} lcs(B(a), B(b)) / n'`, kept as a fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lambda {
    pub max_lcs: usize,
    pub image_len: usize,
}

impl Lambda {
    pub fn value(self) -> f64 {
        if self.image_len == 0 {
            0.0
        } else {
            self.max_lcs as f64 / self.image_len as f64
        }
    }
}

pub fn lambda_b(map: &SubstitutionMap) -> Result<Lambda> {
    let imgs = map.images();
    if imgs.len() < 2 {
        return Err(Error::param("lambda needs at least two images"));
    }
    let mut max_lcs = 0;
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            max_lcs = max_lcs.max(lcs(&imgs[i], &imgs[j]));
        }
    }
    Ok(Lambda { max_lcs, image_len: map.image_len() })
}

/// Uniform random map `Σ → {0,1}^T`.
pub fn random_binary_code(sigma: u32, t: usize, rng: &mut impl Rng) -> SubstitutionMap {
    let images = (0..sigma)
        .map(|_| Text::new((0..t).map(|_| rng.gen_range(0..2)).collect(), 2).expect("binary"))
        .collect();
    SubstitutionMap::new(images).expect("uniform images")
}

/// Substitution product with a binary code.
pub fn to_binary(x: &[Symbol], code: &SubstitutionMap) -> Result<Text> {
    if code.target_alphabet() != 2 {
        return Err(Error::param("binary code images must be over {0, 1}"));
    }
    substitution_product(x, code)
}

/// Largest pairwise `lcs` between distinct code words, as a fraction of `T`.
pub fn max_pairwise_lcs_ratio(code: &SubstitutionMap) -> f64 {
    lambda_b(code).map_or(0.0, Lambda::value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardInstanceParams {
    pub sigma: u32,
    pub block_len: usize,
    pub shift_mag: usize,
    pub levels: u32,
    pub bin_len: usize,
    pub seed: u64,
}

impl HardInstanceParams {
    /// σ = 8, B = 64, s = 4, i* = 2, T = 8: strings of `64² · 8 = 32768` bits.
    pub fn desk(seed: u64) -> Self {
        HardInstanceParams { sigma: 8, block_len: 64, shift_mag: 4, levels: 2, bin_len: 8, seed }
    }

    /// Length over Σ, `B^{i*}`.
    pub fn sigma_len(&self) -> usize {
        self.block_len.pow(self.levels)
    }

    /// Length in bits, `B^{i*} · T`.
    pub fn binary_len(&self) -> usize {
        self.sigma_len() * self.bin_len
    }

    /// Proof bound on the relative distance of two same-family draws, `2 i* s / B`.
    pub fn same_family_bound(&self) -> f64 {
        2.0 * f64::from(self.levels) * self.shift_mag as f64 / self.block_len as f64
    }

    pub fn validate(&self, target_len: Option<usize>) -> Result<()> {
        if self.sigma < 2 {
            return Err(Error::param("sigma must be at least 2"));
        }
        if self.shift_mag == 0 || self.shift_mag > self.block_len {
            return Err(Error::param(format!(
                "shift magnitude {} must lie in [1, B = {}]",
                self.shift_mag, self.block_len
            )));
        }
        if self.levels == 0 || self.bin_len == 0 {
            return Err(Error::param("levels and T must be positive"));
        }
        let len = self
            .block_len
            .checked_pow(self.levels)
            .and_then(|l| l.checked_mul(self.bin_len))
            .ok_or_else(|| Error::param("B^levels · T overflows"))?;
        if let Some(t) = target_len {
            if len > t {
                return Err(Error::param(format!("B^levels · T = {len} exceeds target length {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// Both strings from the first family.
    Same,
    /// One string from each family.
    Cross,
}

impl std::fmt::Display for Which {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Which::Same => "same",
            Which::Cross => "cross",
        })
    }
}

impl std::str::FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same" => Ok(Which::Same),
            "cross" => Ok(Which::Cross),
            other => Err(Error::param(format!("unknown pair kind {other:?} (expected same or cross)"))),
        }
    }
}

/// Base strings and binary code of one instance of the construction.
#[derive(Clone, Debug)]
pub struct HardFamily {
    pub params: HardInstanceParams,
    pub bases: Vec<Text>,
    pub code: SubstitutionMap,
}

impl HardFamily {
    pub fn new(params: &HardInstanceParams) -> Result<Self> {
        params.validate(None)?;
        let mut r = rng::stream(params.seed, &[tag::HARD, 0]);
        let bases = (0..params.sigma)
            .map(|_| {
                let s = (0..params.block_len).map(|_| r.gen_range(0..params.sigma)).collect();
                Text::new(s, params.sigma)
            })
            .collect::<Result<Vec<_>>>()?;
        let code = random_binary_code(params.sigma, params.bin_len, &mut r);
        Ok(HardFamily { params: params.clone(), bases, code })
    }

    /// A draw from `E_{level, a}` over Σ.
    pub fn draw(&self, level: u32, a: Symbol, r: &mut Stream) -> Result<Text> {
        let s = self.params.shift_mag;
        let base = self.bases.get(a as usize).ok_or_else(|| Error::param(format!("no class {a}")))?;
        if level <= 1 {
            return sample_shift(base, s, r);
        }
        let mother = self.draw(level - 1, a, r)?;
        let mut out = Vec::with_capacity(mother.len() * self.params.block_len);
        for &c in mother.iter() {
            out.extend_from_slice(&sample_shift(&self.bases[c as usize], s, r)?);
        }
        Text::new(out, self.params.sigma)
    }

    /// A draw from the binary family `F'_class`.
    pub fn draw_binary(&self, class: Symbol, r: &mut Stream) -> Result<Text> {
        to_binary(&self.draw(self.params.levels, class, r)?, &self.code)
    }

    /// Σ-level and binary pair for `which`, both strings drawn independently.
    pub fn pair(&self, which: Which) -> Result<((Text, Text), (Text, Text))> {
        let seed = self.params.seed;
        let (c0, c1) = match which {
            Which::Same => (0, 0),
            Which::Cross => (0, 1),
        };
        let x = self.draw(self.params.levels, c0, &mut rng::stream(seed, &[tag::HARD, 1]))?;
        let y = self.draw(self.params.levels, c1, &mut rng::stream(seed, &[tag::HARD, 2]))?;
        let (xb, yb) = (to_binary(&x, &self.code)?, to_binary(&y, &self.code)?);
        Ok(((x, y), (xb, yb)))
    }
}

/// Two independent binary strings, from the same family or one from each.
pub fn gen_hard_pair(params: &HardInstanceParams, which: Which, seed: u64) -> Result<(Text, Text)> {
    let params = HardInstanceParams { seed, ..params.clone() };
    let (_, binary) = HardFamily::new(&params)?.pair(which)?;
    Ok(binary)
}

/// `edd / max(|x|, |y|)` on the first `prefix` symbols of each, via the
/// certified banded DP.
pub fn relative_indel(x: &[Symbol], y: &[Symbol], prefix: usize) -> f64 {
    let (x, y) = (&x[..prefix.min(x.len())], &y[..prefix.min(y.len())]);
    let len = x.len().max(y.len());
    if len == 0 {
        return 0.0;
    }
    edd_certified(x, y).0 as f64 / len as f64
}

/// 64-bit FNV-1a over the little-endian symbol codes; identifies base strings
/// in manifests.
pub fn digest(t: &[Symbol]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for s in t {
        for byte in s.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}
