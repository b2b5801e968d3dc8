//! `(ρ, f)`-approximators: `τ̂` approximates `τ` when `τ/f − ρ ≤ τ̂ ≤ fτ + ρ`.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approximator {
    pub rho: f64,
    pub f: f64,
}

impl Approximator {
    pub fn new(rho: f64, f: f64) -> Self {
        assert!(rho >= 0.0 && f >= 1.0, "need rho >= 0 and f >= 1");
        Approximator { rho, f }
    }

    pub fn accepts(&self, truth: f64, estimate: f64) -> bool {
        truth / self.f - self.rho <= estimate && estimate <= self.f * truth + self.rho
    }

    pub fn interval(&self, truth: f64) -> (f64, f64) {
        (truth / self.f - self.rho, self.f * truth + self.rho)
    }

    /// Guarantee for a sum of two approximated terms.
    pub fn sum(self, other: Approximator) -> Approximator {
        Approximator { rho: self.rho + other.rho, f: self.f.max(other.f) }
    }

    /// `outer` applied to a value that itself approximates the truth with `self`.
    pub fn then(self, outer: Approximator) -> Approximator {
        Approximator { rho: outer.rho + outer.f * self.rho, f: self.f * outer.f }
    }

    /// Guarantee after multiplying both value and estimate by `c > 0`.
    pub fn scale(self, c: f64) -> Approximator {
        Approximator { rho: self.rho * c, f: self.f }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_edges_are_accepted() {
        let a = Approximator::new(1.0, 2.0);
        let (lo, hi) = a.interval(10.0);
        assert_eq!((lo, hi), (4.0, 21.0));
        assert!(a.accepts(10.0, lo) && a.accepts(10.0, hi));
        assert!(!a.accepts(10.0, 21.5) && !a.accepts(10.0, 3.9));
    }
}
