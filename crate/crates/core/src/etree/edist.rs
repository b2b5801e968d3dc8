//! Exact E-distance.
//!
//! `E(i, s, u)` is kept as a vector over target positions `u ∈ [1 - n, 2n]`.
//! Outside that range a level-`i` block overlaps `[1, n]` nowhere it could
//! reach profitably, so its value is exactly `l_i`; the DP uses that constant
//! instead of a sentinel, which keeps every vector finite and the transform on
//! its linear two-pass path.

use std::collections::HashMap;
use std::rc::Rc;

use super::transform::propagate_u32;
use super::{NodeId, TreeParams};
use crate::error::{Error, Result};
use crate::text::Symbol;

/// Number of positions `i` with `x[i] != y[i]`.
pub fn hamming(x: &[Symbol], y: &[Symbol]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count() + x.len().abs_diff(y.len())
}

fn check_dims(x: &[Symbol], y: &[Symbol], params: &TreeParams) -> Result<()> {
    params.validate_structure()?;
    if x.len() != params.n || y.len() != params.n {
        return Err(Error::dim(format!(
            "|x| = {}, |y| = {} but n = {}",
            x.len(),
            y.len(),
            params.n
        )));
    }
    Ok(())
}

impl TreeParams {
    pub(crate) fn validate_structure(&self) -> Result<()> {
        match TreeParams::new(self.n, self.b) {
            Ok(p) if p.h == self.h => Ok(()),
            _ => Err(Error::dim(format!("n = {} is not b^h for b = {}, h = {}", self.n, self.b, self.h))),
        }
    }
}

struct Dp<'a> {
    x: &'a [Symbol],
    y: &'a [Symbol],
    p: &'a TreeParams,
    leaves: HashMap<Symbol, Rc<Vec<u32>>>,
}

impl<'a> Dp<'a> {
    fn new(x: &'a [Symbol], y: &'a [Symbol], p: &'a TreeParams) -> Self {
        Dp { x, y, p, leaves: HashMap::new() }
    }

    fn width(&self) -> usize {
        3 * self.p.n
    }

    /// Leaf vector for symbol `c`, already transformed.
    fn leaf(&mut self, c: Symbol) -> Rc<Vec<u32>> {
        let (n, y) = (self.p.n, self.y);
        self.leaves
            .entry(c)
            .or_insert_with(|| {
                let mut f = vec![1u32; 3 * n];
                for (k, &yc) in y.iter().enumerate() {
                    if yc == c {
                        f[n + k] = 0;
                    }
                }
                propagate_u32(&mut f);
                Rc::new(f)
            })
            .clone()
    }

    /// Untransformed `E(level, start, ·)` of an internal node.
    fn node(&mut self, id: NodeId) -> Vec<u32> {
        let width = self.width();
        let lc = self.p.level_len(id.level + 1);
        let mut acc = vec![0u32; width];
        for j in 0..self.p.b {
            let child = id.child(self.p, j);
            let g = if child.level == self.p.h {
                self.leaf(self.x[child.start - 1])
            } else {
                let mut e = self.node(child);
                propagate_u32(&mut e);
                Rc::new(e)
            };
            let t = j * lc;
            for (k, a) in acc.iter_mut().enumerate() {
                *a += g.get(k + t).copied().unwrap_or(lc as u32);
            }
        }
        acc
    }
}

/// `E(0, 1, 1)` by bottom-up dynamic programming over the full tree.
///
/// Time `O(n^2 b / (b - 1))`, memory `O(h n)`.
pub fn exact_e_distance(x: &[Symbol], y: &[Symbol], params: &TreeParams) -> Result<u64> {
    check_dims(x, y, params)?;
    let mut dp = Dp::new(x, y, params);
    let root = dp.node(NodeId::ROOT);
    Ok(u64::from(root[params.n]))
}

/// Target positions `z_{i,s}` for every block of the full tree, stored per
/// level in block order. The root entry is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZVector {
    pub levels: Vec<Vec<i64>>,
}

impl ZVector {
    /// Every block placed at its own start: no shifts anywhere.
    pub fn identity(params: &TreeParams) -> Self {
        let levels = (0..=params.h)
            .map(|i| {
                let l = params.level_len(i);
                (0..params.level_width(i)).map(|k| (k * l + 1) as i64).collect()
            })
            .collect();
        ZVector { levels }
    }

    pub fn get(&self, params: &TreeParams, id: NodeId) -> i64 {
        self.levels[id.level as usize][id.index(params)]
    }

    fn validate(&self, params: &TreeParams) -> Result<()> {
        if self.levels.len() != params.h as usize + 1 {
            return Err(Error::dim(format!("Z has {} levels, expected {}", self.levels.len(), params.h + 1)));
        }
        for (i, lvl) in self.levels.iter().enumerate() {
            if lvl.len() != params.level_width(i as u32) {
                return Err(Error::dim(format!("Z level {i} has {} entries", lvl.len())));
            }
        }
        if self.levels[0][0] != 1 {
            return Err(Error::param("root assignment must be 1"));
        }
        Ok(())
    }
}

/// `cost(Z) + Σ_s Ham(x[s], y[z_{h,s}])`, the E-distance of one explicit placement.
pub fn e_from_z(x: &[Symbol], y: &[Symbol], z: &ZVector, params: &TreeParams) -> Result<u64> {
    check_dims(x, y, params)?;
    z.validate(params)?;
    let n = params.n as i64;
    let mut total = 0u64;
    for i in 0..params.h {
        let lc = params.level_len(i + 1) as i64;
        let (parents, children) = (&z.levels[i as usize], &z.levels[i as usize + 1]);
        for (k, &zp) in parents.iter().enumerate() {
            for j in 0..params.b {
                let zc = children[k * params.b + j];
                total += (zp + j as i64 * lc - zc).unsigned_abs();
            }
        }
    }
    for (s, &zl) in z.levels[params.h as usize].iter().enumerate() {
        let hit = (1..=n).contains(&zl) && x[s] == y[(zl - 1) as usize];
        total += u64::from(!hit);
    }
    Ok(total)
}

/// An optimal placement, recovered by storing every node's vector.
///
/// Ties between shifts go to the smallest `|r|`, negative first. Memory is
/// `O(n^2)`, so this is refused above `n = 1024`.
pub fn optimal_z(x: &[Symbol], y: &[Symbol], params: &TreeParams) -> Result<(u64, ZVector)> {
    check_dims(x, y, params)?;
    if params.n > 1024 {
        return Err(Error::TooLarge(format!("optimal_z stores O(n^2) values; n = {}", params.n)));
    }
    let n = params.n;
    let width = 3 * n;
    // Raw E vectors per level, block order.
    let mut e: Vec<Vec<Vec<u32>>> = vec![Vec::new(); params.h as usize + 1];
    e[params.h as usize] = (0..n)
        .map(|s| {
            (0..width)
                .map(|k| {
                    let u = k as i64 + 1 - n as i64;
                    u32::from(!((1..=n as i64).contains(&u) && y[(u - 1) as usize] == x[s]))
                })
                .collect()
        })
        .collect();
    for i in (0..params.h).rev() {
        let lc = params.level_len(i + 1);
        let below: Vec<Vec<u32>> = e[i as usize + 1]
            .iter()
            .map(|v| {
                let mut g = v.clone();
                propagate_u32(&mut g);
                g
            })
            .collect();
        e[i as usize] = (0..params.level_width(i))
            .map(|k| {
                let mut acc = vec![0u32; width];
                for j in 0..params.b {
                    let g = &below[k * params.b + j];
                    for (q, a) in acc.iter_mut().enumerate() {
                        *a += g.get(q + j * lc).copied().unwrap_or(lc as u32);
                    }
                }
                acc
            })
            .collect();
    }
    let value = u64::from(e[0][0][n]);

    let lo = 1 - n as i64;
    let at = |v: &[u32], u: i64, l: usize| -> u32 {
        if u < lo || u >= lo + width as i64 {
            l as u32
        } else {
            v[(u - lo) as usize]
        }
    };
    let mut z = ZVector { levels: (0..=params.h).map(|i| vec![0; params.level_width(i)]).collect() };
    z.levels[0][0] = 1;
    for i in 0..params.h {
        let lc = params.level_len(i + 1);
        for k in 0..params.level_width(i) {
            let zp = z.levels[i as usize][k];
            for j in 0..params.b {
                let c = k * params.b + j;
                let t = zp + (j * lc) as i64;
                let child = &e[i as usize + 1][c];
                let mut best = (at(child, t, lc), 0i64);
                for r in 1..=(2 * width) as i64 {
                    if i64::from(best.0) <= r {
                        break;
                    }
                    for cand in [-r, r] {
                        let v = at(child, t + cand, lc) + r as u32;
                        if v < best.0 {
                            best = (v, cand);
                        }
                    }
                }
                z.levels[i as usize + 1][c] = t + best.1;
            }
        }
    }
    Ok((value, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Vec<Symbol> {
        t.bytes().map(Symbol::from).collect()
    }

    #[test]
    fn spec_examples() {
        let p = TreeParams::new(2, 2).unwrap();
        assert_eq!(exact_e_distance(&s("ab"), &s("ba"), &p).unwrap(), 2);
        assert_eq!(exact_e_distance(&s("ab"), &s("ab"), &p).unwrap(), 0);
        let p = TreeParams::new(16, 4).unwrap();
        let x = s("the quick brown ");
        assert_eq!(exact_e_distance(&x, &x, &p).unwrap(), 0);
    }

    #[test]
    fn identity_placement_is_hamming() {
        let p = TreeParams::new(8, 2).unwrap();
        let (x, y) = (s("abcdefgh"), s("abXdefYh"));
        assert_eq!(e_from_z(&x, &y, &ZVector::identity(&p), &p).unwrap(), 2);
    }

    #[test]
    fn rejects_bad_dimensions() {
        let p = TreeParams::new(4, 2).unwrap();
        assert!(exact_e_distance(&s("abc"), &s("abcd"), &p).is_err());
        let mut z = ZVector::identity(&p);
        z.levels[0][0] = 2;
        assert!(e_from_z(&s("abcd"), &s("abcd"), &z, &p).is_err());
        z.levels[0][0] = 1;
        z.levels[2].pop();
        assert!(e_from_z(&s("abcd"), &s("abcd"), &z, &p).is_err());
    }

    #[test]
    fn witness_attains_value() {
        let p = TreeParams::new(8, 2).unwrap();
        let (x, y) = (s("abcabcab"), s("bcabcabc"));
        let (v, z) = optimal_z(&x, &y, &p).unwrap();
        assert_eq!(v, exact_e_distance(&x, &y, &p).unwrap());
        assert_eq!(e_from_z(&x, &y, &z, &p).unwrap(), v);
    }
}
