//! Range minimum over dyadic intervals: each internal slot of a bottom-up
//! segment tree holds the minimum of one dyadic block, and a query combines
//! `O(log m)` of them.

#[derive(Clone, Debug)]
pub struct RangeMin {
    len: usize,
    size: usize,
    tree: Vec<f64>,
}

impl RangeMin {
    pub fn new(values: &[f64]) -> Self {
        let size = values.len().next_power_of_two().max(1);
        let mut tree = vec![f64::INFINITY; 2 * size];
        tree[size..size + values.len()].copy_from_slice(values);
        for i in (1..size).rev() {
            tree[i] = tree[2 * i].min(tree[2 * i + 1]);
        }
        RangeMin { len: values.len(), size, tree }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Minimum over the inclusive range `[lo, hi]`; `+inf` when empty.
    pub fn query(&self, lo: usize, hi: usize) -> f64 {
        if lo > hi || lo >= self.len {
            return f64::INFINITY;
        }
        let (mut l, mut r) = (lo + self.size, hi.min(self.len - 1) + self.size + 1);
        let mut best = f64::INFINITY;
        while l < r {
            if l & 1 == 1 {
                best = best.min(self.tree[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                best = best.min(self.tree[r]);
            }
            l >>= 1;
            r >>= 1;
        }
        best
    }
}
