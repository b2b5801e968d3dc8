//! Exact reference distances. These are the ground truth for everything else,
//! so each quantity has its own independent recurrence: `edd` is not derived
//! from `lcs`, and `lcs` has both a bit-parallel and a plain DP form.

use std::collections::HashMap;

use crate::text::Symbol;

/// Levenshtein distance, two rolling rows over the shorter string.
pub fn ed(x: &[Symbol], y: &[Symbol]) -> usize {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut prev: Vec<usize> = (0..=short.len()).collect();
    let mut cur = vec![0usize; short.len() + 1];
    for (i, &a) in long.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &c) in short.iter().enumerate() {
            let sub = prev[j] + usize::from(a != c);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Indel distance (insertions and deletions only), by its own recurrence.
pub fn edd(x: &[Symbol], y: &[Symbol]) -> usize {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut prev: Vec<usize> = (0..=short.len()).collect();
    let mut cur = vec![0usize; short.len() + 1];
    for (i, &a) in long.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &c) in short.iter().enumerate() {
            cur[j + 1] = if a == c { prev[j] } else { prev[j + 1].min(cur[j]) + 1 };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Longest common subsequence length, bit-parallel over the shorter string
/// (Allison–Dix / Hyyrö update `V' = (V + (V & M)) | (V & !M)`).
pub fn lcs(x: &[Symbol], y: &[Symbol]) -> usize {
    let (pat, txt) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let m = pat.len();
    if m == 0 {
        return 0;
    }
    let words = m.div_ceil(64);
    let mut peq: HashMap<Symbol, Vec<u64>> = HashMap::new();
    for (i, &c) in pat.iter().enumerate() {
        peq.entry(c).or_insert_with(|| vec![0; words])[i / 64] |= 1 << (i % 64);
    }
    let mut v = vec![!0u64; words];
    for c in txt {
        let Some(mask) = peq.get(c) else { continue };
        let mut carry = false;
        for (vk, &mk) in v.iter_mut().zip(mask) {
            let u = *vk & mk;
            let (s1, c1) = vk.overflowing_add(u);
            let (s2, c2) = s1.overflowing_add(u64::from(carry));
            carry = c1 || c2;
            *vk = s2 | (*vk & !mk);
        }
    }
    let tail = m % 64;
    let zeros: usize = v
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let w = if k + 1 == words && tail != 0 { w | (!0u64 << tail) } else { w };
            w.count_zeros() as usize
        })
        .sum();
    zeros
}

/// Textbook LCS dynamic program (rolling rows); the oracle for [`lcs`].
pub fn lcs_dp(x: &[Symbol], y: &[Symbol]) -> usize {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut prev = vec![0usize; short.len() + 1];
    let mut cur = vec![0usize; short.len() + 1];
    for &a in long {
        for (j, &c) in short.iter().enumerate() {
            cur[j + 1] = if a == c { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Indel distance through the identity `|x| + |y| - 2 lcs`; the fast path for long inputs.
pub fn edd_via_lcs(x: &[Symbol], y: &[Symbol]) -> usize {
    x.len() + y.len() - 2 * lcs(x, y)
}

/// Indel DP restricted to the diagonal band `|i - j| <= band`.
///
/// Returns `None` when the length difference alone exceeds the band. The value
/// is an upper bound on `edd`, and equals it whenever it is `<= band`.
pub fn edd_banded(x: &[Symbol], y: &[Symbol], band: usize) -> Option<usize> {
    let (n, m) = (x.len(), y.len());
    if n.abs_diff(m) > band {
        return None;
    }
    const INF: usize = usize::MAX / 2;
    let width = 2 * band + 1;
    // Slot d of row i holds column j = i + d - band.
    let mut prev = vec![INF; width];
    let mut cur = vec![INF; width];
    for (d, slot) in prev.iter_mut().enumerate().skip(band) {
        let j = d - band;
        if j <= m {
            *slot = j;
        }
    }
    for i in 1..=n {
        for d in 0..width {
            let j = i as isize + d as isize - band as isize;
            cur[d] = if j < 0 || j as usize > m {
                INF
            } else if j == 0 {
                i
            } else {
                let j = j as usize;
                if x[i - 1] == y[j - 1] {
                    prev[d]
                } else {
                    let up = if d + 1 < width { prev[d + 1] } else { INF };
                    let left = if d > 0 { cur[d - 1] } else { INF };
                    up.min(left).saturating_add(1)
                }
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Some(prev[(m + band) - n])
}

/// Certified indel distance: doubles the band until the banded value fits
/// inside it, which rules out any cheaper path leaving the band.
/// Returns the distance and the band that certified it.
pub fn edd_certified(x: &[Symbol], y: &[Symbol]) -> (usize, usize) {
    let full = x.len().max(y.len());
    let mut band = x.len().abs_diff(y.len()).max(16);
    loop {
        if let Some(d) = edd_banded(x, y, band) {
            if d <= band || band >= full {
                return (d, band);
            }
        }
        band = (band * 2).min(full.max(1));
    }
}

/// Monotone matching between two texts: strictly increasing index pairs with
/// equal symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alignment {
    pub pairs: Vec<(usize, usize)>,
}

impl Alignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_valid_for(&self, x: &[Symbol], y: &[Symbol]) -> bool {
        let in_range = self.pairs.iter().all(|&(i, j)| i < x.len() && j < y.len() && x[i] == y[j]);
        let monotone = self.pairs.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
        in_range && monotone
    }
}

/// A maximum alignment (size `lcs(x, y)`).
///
/// Traceback from the end prefers a match, then deleting from `x`, then
/// inserting from `y`. Directions are packed two bits per cell.
pub fn extract_alignment(x: &[Symbol], y: &[Symbol]) -> Alignment {
    const MATCH: u8 = 0;
    const DEL: u8 = 1;
    const INS: u8 = 2;
    let (n, m) = (x.len(), y.len());
    let cols = m + 1;
    let mut dirs = vec![0u8; ((n + 1) * cols).div_ceil(4)];
    let set = |dirs: &mut Vec<u8>, i: usize, j: usize, d: u8| {
        let k = i * cols + j;
        dirs[k / 4] |= d << (2 * (k % 4));
    };
    let mut prev = vec![0usize; cols];
    let mut cur = vec![0usize; cols];
    for j in 1..=m {
        set(&mut dirs, 0, j, INS);
    }
    for i in 1..=n {
        cur[0] = 0;
        set(&mut dirs, i, 0, DEL);
        for j in 1..=m {
            let (v, d) = if x[i - 1] == y[j - 1] {
                (prev[j - 1] + 1, MATCH)
            } else if prev[j] >= cur[j - 1] {
                (prev[j], DEL)
            } else {
                (cur[j - 1], INS)
            };
            cur[j] = v;
            set(&mut dirs, i, j, d);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let mut pairs = Vec::with_capacity(prev[m]);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let k = i * cols + j;
        match (dirs[k / 4] >> (2 * (k % 4))) & 3 {
            MATCH => {
                pairs.push((i - 1, j - 1));
                i -= 1;
                j -= 1;
            }
            DEL => i -= 1,
            _ => j -= 1,
        }
    }
    pairs.reverse();
    Alignment { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Vec<Symbol> {
        t.bytes().map(Symbol::from).collect()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(ed(&s("abc"), &s("abc")), 0);
        assert_eq!(ed(&s(""), &s("abc")), 3);
        assert_eq!(ed(&s("kitten"), &s("sitting")), 3);
        assert_eq!(edd(&s("ab"), &s("ab")), 0);
        assert_eq!(edd(&s("a"), &s("b")), 2);
        assert_eq!(edd(&s("ab"), &s("ba")), 2);
        assert_eq!(lcs(&s("abc"), &s("abc")), 3);
        assert_eq!(lcs(&s("abc"), &s("xyz")), 0);
        assert_eq!(lcs(&s("ab"), &s("ba")), 1);
    }

    #[test]
    fn alignment_examples() {
        assert_eq!(extract_alignment(&s("ab"), &s("ab")).pairs, vec![(0, 0), (1, 1)]);
        assert!(extract_alignment(&s("a"), &s("b")).is_empty());
        let a = extract_alignment(&s("ab"), &s("ba"));
        assert_eq!(a.len(), 1);
        assert!(a.pairs == vec![(0, 1)] || a.pairs == vec![(1, 0)]);
    }

    #[test]
    fn traceback_prefers_deleting_from_x() {
        // Both (0,1) and (1,0) are optimal; deleting x's trailing 'b' first keeps x[0].
        assert_eq!(extract_alignment(&s("ab"), &s("ba")).pairs, vec![(0, 1)]);
    }

    #[test]
    fn bit_parallel_crosses_word_boundaries() {
        let x: Vec<Symbol> = (0..200).map(|i| (i * 7 % 3) as Symbol).collect();
        let y: Vec<Symbol> = (0..150).map(|i| (i * 5 % 4) as Symbol).collect();
        assert_eq!(lcs(&x, &y), lcs_dp(&x, &y));
        assert_eq!(lcs(&x[..64], &y[..64]), lcs_dp(&x[..64], &y[..64]));
    }

    #[test]
    fn banded_refuses_narrow_band() {
        assert_eq!(edd_banded(&s("aaaa"), &s("a"), 2), None);
        assert_eq!(edd_banded(&s("abcd"), &s("abcd"), 0), Some(0));
        assert_eq!(edd_certified(&s("abcdef"), &s("fedcba")), (10, 16));
    }
}
