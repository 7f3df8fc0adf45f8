//! Rank of a signed-integer matrix under single-entry changes, lifted
//! through a sound set of primes.
//!
//! Every update fans out to one [`GoodBasisState`] per prime; the rank over
//! the rationals equals the maximum per-prime rank because any nonzero
//! minor survives modulo at least one prime in the set. Entries are bounded
//! by a declared `N` fixed at construction: the prime set is sized once,
//! and a larger entry would invalidate it, so it is rejected.

use std::collections::HashMap;

use crate::basis::GoodBasisState;
use crate::modp::{reduce_signed, PrimeMode, PrimeSet};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct IntMatrixTracker {
    n: usize,
    m: usize,
    max_abs: i64,
    entries: HashMap<(usize, usize), i64>,
    prime_set: PrimeSet,
    states: Vec<GoodBasisState>,
    update_calls: u64,
}

impl IntMatrixTracker {
    pub fn new(n: usize, m: usize, max_abs: i64, mode: PrimeMode) -> IntMatrixTracker {
        assert!(n >= 1 && m >= 1 && max_abs >= 1, "degenerate dimensions");
        let prime_set = PrimeSet::select(n, m, max_abs, mode);
        let states = prime_set
            .primes()
            .iter()
            .map(|p| GoodBasisState::init(n, m, p.value()))
            .collect();
        IntMatrixTracker {
            n,
            m,
            max_abs,
            entries: HashMap::new(),
            prime_set,
            states,
            update_calls: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn max_abs(&self) -> i64 {
        self.max_abs
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn prime_set(&self) -> &PrimeSet {
        &self.prime_set
    }

    /// Per-prime states, parallel to `prime_set().primes()`.
    pub fn per_prime_states(&self) -> &[GoodBasisState] {
        &self.states
    }

    /// Number of `set_entry` calls accepted (no-ops included).
    pub fn update_calls(&self) -> u64 {
        self.update_calls
    }

    /// Sets entry (i, j), reducing the value into each prime field. The
    /// per-prime states share nothing, so the fan-out order is irrelevant.
    pub fn set_entry(&mut self, i: usize, j: usize, value: i64) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "row",
                index: i,
                limit: self.n,
            });
        }
        if j >= self.m {
            return Err(Error::IndexOutOfRange {
                what: "column",
                index: j,
                limit: self.m,
            });
        }
        if value.abs() > self.max_abs {
            return Err(Error::EntryExceedsBound {
                value,
                bound: self.max_abs,
            });
        }
        self.update_calls += 1;
        if value == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
        for state in &mut self.states {
            state.set_entry(i, j, reduce_signed(value, state.p()));
        }
        Ok(())
    }

    /// Rank over the rationals: the maximum of the per-prime ranks.
    pub fn rank(&self) -> usize {
        self.states.iter().map(|s| s.rank()).max().unwrap_or(0)
    }

    pub fn per_prime_ranks(&self) -> Vec<usize> {
        self.states.iter().map(|s| s.rank()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn prime_fanout_sizes() {
        let t = IntMatrixTracker::new(4, 4, 4, PrimeMode::ProductBound);
        assert_eq!(t.per_prime_states().len(), 6);
        let t = IntMatrixTracker::new(1, 1, 1, PrimeMode::ProductBound);
        assert_eq!(t.rank(), 0);
        let t = IntMatrixTracker::new(8, 8, 8, PrimeMode::PaperBound);
        assert_eq!(t.per_prime_states().len(), 97);
    }

    #[test]
    fn identity_and_single_entry() {
        let mut t = IntMatrixTracker::new(3, 3, 1, PrimeMode::ProductBound);
        for d in 0..3 {
            t.set_entry(d, d, 1).unwrap();
        }
        assert_eq!(t.rank(), 3);

        let mut t = IntMatrixTracker::new(4, 4, 8, PrimeMode::ProductBound);
        t.set_entry(2, 1, -5).unwrap();
        assert_eq!(t.rank(), 1);
    }

    #[test]
    fn bound_and_range_errors() {
        let mut t = IntMatrixTracker::new(4, 4, 8, PrimeMode::ProductBound);
        assert_eq!(
            t.set_entry(0, 0, 9),
            Err(Error::EntryExceedsBound { value: 9, bound: 8 })
        );
        assert_eq!(
            t.set_entry(0, 0, -9),
            Err(Error::EntryExceedsBound { value: -9, bound: 8 })
        );
        assert!(matches!(
            t.set_entry(4, 0, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            t.set_entry(0, 7, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        // Nothing was applied.
        assert_eq!(t.rank(), 0);
        assert_eq!(t.update_calls(), 0);
    }

    #[test]
    fn random_updates_match_exact_rank() {
        // Reduced-scale version of the acceptance suite.
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..25 {
            let mut t = IntMatrixTracker::new(8, 8, 8, PrimeMode::ProductBound);
            let mut dense = vec![vec![0i64; 8]; 8];
            for _ in 0..40 {
                let (i, j) = (rng.gen_range(0..8), rng.gen_range(0..8));
                let v = rng.gen_range(-8i64..=8);
                t.set_entry(i, j, v).unwrap();
                dense[i][j] = v;
                let exact = oracle::gaussian_rank_exact(&dense).unwrap();
                assert_eq!(t.rank(), exact);
                // Monotone dominance: every per-prime rank is at most the max.
                assert!(t.per_prime_ranks().iter().all(|&r| r <= t.rank()));
            }
        }
    }

    #[test]
    fn fanout_is_deterministic() {
        let mut a = IntMatrixTracker::new(5, 5, 8, PrimeMode::ProductBound);
        let mut b = IntMatrixTracker::new(5, 5, 8, PrimeMode::ProductBound);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..60 {
            let (i, j, v) = (
                rng.gen_range(0..5),
                rng.gen_range(0..5),
                rng.gen_range(-8i64..=8),
            );
            a.set_entry(i, j, v).unwrap();
            b.set_entry(i, j, v).unwrap();
        }
        assert_eq!(a.per_prime_states(), b.per_prime_states());
    }
}
