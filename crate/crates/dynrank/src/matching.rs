//! Randomized dynamic maximum-matching size and perfect-matching decision.
//!
//! The skew-symmetric edge matrix of a graph (indeterminate x_ij at (i, j),
//! -x_ij at (j, i) for each edge i < j) has symbolic rank exactly twice the
//! maximum matching size. Substituting x_ij = 2^w(i,j) for a random weight
//! assignment w keeps that rank with probability at least 3/4: if the
//! minimum-weight maximum matching is unique — which random weights from a
//! range four times the number of edge slots force with that probability —
//! the substituted matrix reaches the full symbolic rank, and it can never
//! exceed it. Running several independently weighted trials drives the
//! failure probability to 4^-trials.
//!
//! The huge numbers 2^w never materialize: each trial is tracked modulo a
//! set of odd primes whose product exceeds any minor of the substituted
//! matrix, so the integer rank of a trial is the maximum of its per-prime
//! ranks. Prime 2 is excluded — every entry is even, so rank mod 2 is
//! identically zero and contributes nothing.
//!
//! The reported size is one-sided: it never exceeds the true maximum
//! matching size, for every seed, at every step.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::basis::GoodBasisState;
use crate::modp::{pow_mod, PrimeSet};
use crate::{Error, Result};

/// Index of the undirected slot {i, j}, i < j, in a triangular layout.
pub fn slot_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// One weight assignment with its per-prime matrix states.
#[derive(Debug, Clone)]
struct Trial {
    /// Weight per edge slot, drawn once from [1, 4 * slots].
    weights: Vec<u64>,
    states: Vec<GoodBasisState>,
}

#[derive(Debug, Clone)]
pub struct MatchingTracker {
    n: usize,
    seed: u64,
    max_weight: u64,
    primes: Vec<u64>,
    trials: Vec<Trial>,
    edges: HashSet<(usize, usize)>,
}

impl MatchingTracker {
    /// Draws `trials` independent weight assignments from a generator
    /// seeded with `seed` (trial-major, slots in ascending order) and sets
    /// up the per-trial, per-prime zero matrices. Weights are fixed for
    /// the tracker's lifetime; only the edge set changes afterwards.
    pub fn new(n: usize, trials: usize, seed: u64) -> MatchingTracker {
        assert!(n >= 1 && trials >= 1, "need at least one node and one trial");
        let slots = n * (n - 1) / 2;
        let max_weight = 4 * slots as u64;
        // Any minor is at most n! * (2^max_weight)^n in absolute value;
        // n * ceil(log2 n) bits cover the factorial part.
        let bit_bound =
            n as u32 * max_weight as u32 + n as u32 * ceil_log2(n as u64) + 1;
        let primes: Vec<u64> = PrimeSet::product_bound_bits(bit_bound, 3)
            .primes()
            .iter()
            .map(|p| p.value())
            .collect();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let trials = (0..trials)
            .map(|_| {
                let weights = (0..slots).map(|_| rng.gen_range(1..=max_weight)).collect();
                let states = primes
                    .iter()
                    .map(|&p| GoodBasisState::init(n, n, p))
                    .collect();
                Trial { weights, states }
            })
            .collect();
        MatchingTracker {
            n,
            seed,
            max_weight,
            primes,
            trials,
            edges: HashSet::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial_count(&self) -> usize {
        self.trials.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn edges(&self) -> &HashSet<(usize, usize)> {
        &self.edges
    }

    /// Largest weight a slot can carry: four times the slot count.
    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    pub fn weight_of(&self, trial: usize, i: usize, j: usize) -> u64 {
        let (lo, hi) = (i.min(j), i.max(j));
        self.trials[trial].weights[slot_index(self.n, lo, hi)]
    }

    /// Total matrix updates received by one (trial, prime) state; each
    /// edge change contributes exactly two.
    pub fn state_update_count(&self, trial: usize, prime_idx: usize) -> u64 {
        self.trials[trial].states[prime_idx].update_count()
    }

    fn check_edge(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "node",
                index: i.max(j),
                limit: self.n,
            });
        }
        if i == j {
            return Err(Error::SelfLoop { node: i });
        }
        Ok((i.min(j), i.max(j)))
    }

    /// Writes the two mirrored entries of slot (lo, hi) in every trial and
    /// prime: 2^w at (lo, hi) and its negation at (hi, lo), or zeros.
    fn apply(&mut self, lo: usize, hi: usize, present: bool) {
        let n = self.n;
        let primes = &self.primes;
        self.trials.par_iter_mut().for_each(|trial| {
            let w = trial.weights[slot_index(n, lo, hi)];
            for (state, &p) in trial.states.iter_mut().zip(primes) {
                if present {
                    let r = pow_mod(2, w, p);
                    state.set_entry(lo, hi, r);
                    state.set_entry(hi, lo, p - r);
                } else {
                    state.set_entry(lo, hi, 0);
                    state.set_entry(hi, lo, 0);
                }
            }
        });
    }

    /// Inserts edge {i, j}; inserting a present edge is a no-op.
    pub fn insert_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let (lo, hi) = self.check_edge(i, j)?;
        if !self.edges.insert((lo, hi)) {
            return Ok(());
        }
        self.apply(lo, hi, true);
        Ok(())
    }

    /// Deletes edge {i, j}; deleting an absent edge is a no-op.
    pub fn delete_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let (lo, hi) = self.check_edge(i, j)?;
        if !self.edges.remove(&(lo, hi)) {
            return Ok(());
        }
        self.apply(lo, hi, false);
        Ok(())
    }

    /// Integer rank of each trial's substituted matrix: the maximum of its
    /// per-prime ranks. Skew symmetry over the rationals forces these to
    /// be even; an odd value is an internal error.
    pub fn trial_ranks(&self) -> Vec<usize> {
        self.trials
            .iter()
            .map(|trial| {
                let rank = trial.states.iter().map(|s| s.rank()).max().unwrap_or(0);
                assert!(rank % 2 == 0, "trial rank {rank} is odd");
                rank
            })
            .collect()
    }

    /// Best rank over all trials, halved. Never exceeds the true maximum
    /// matching size; equals it with probability at least 1 - 4^-trials
    /// over the seed draw.
    pub fn max_matching_size(&self) -> usize {
        self.trial_ranks().into_iter().max().unwrap_or(0) / 2
    }

    /// True iff the matching size reaches n/2 on an even node count. Same
    /// one-sided error model as the size: false negatives only.
    pub fn has_perfect_matching(&self) -> bool {
        self.n % 2 == 0 && self.max_matching_size() == self.n / 2
    }
}

fn ceil_log2(x: u64) -> u32 {
    assert!(x >= 1);
    64 - (x - 1).leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn empty_graph_and_single_edge() {
        let t = MatchingTracker::new(2, 1, 0);
        assert_eq!(t.max_matching_size(), 0);
        let mut t = MatchingTracker::new(2, 1, 0);
        t.insert_edge(0, 1).unwrap();
        assert_eq!(t.max_matching_size(), 1);
        assert!(t.has_perfect_matching());
    }

    #[test]
    fn triangle_has_no_perfect_matching() {
        let mut t = MatchingTracker::new(3, 4, 1);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            t.insert_edge(i, j).unwrap();
        }
        assert_eq!(t.max_matching_size(), 1);
        assert!(!t.has_perfect_matching());
    }

    #[test]
    fn two_disjoint_edges_on_four_nodes() {
        let mut t = MatchingTracker::new(4, 8, 7);
        t.insert_edge(0, 1).unwrap();
        t.insert_edge(2, 3).unwrap();
        assert_eq!(t.max_matching_size(), 2);
        assert!(t.has_perfect_matching());
    }

    #[test]
    fn path_and_complete_graph() {
        let mut t = MatchingTracker::new(4, 8, 3);
        for (i, j) in [(0, 1), (1, 2), (2, 3)] {
            t.insert_edge(i, j).unwrap();
        }
        assert!(t.has_perfect_matching());
        let mut t = MatchingTracker::new(4, 8, 3);
        for i in 0..4 {
            for j in i + 1..4 {
                t.insert_edge(i, j).unwrap();
            }
        }
        assert!(t.has_perfect_matching());
    }

    #[test]
    fn weights_reproducible_and_in_range() {
        let a = MatchingTracker::new(4, 8, 7);
        let b = MatchingTracker::new(4, 8, 7);
        for trial in 0..8 {
            for i in 0..4 {
                for j in i + 1..4 {
                    let w = a.weight_of(trial, i, j);
                    assert_eq!(w, b.weight_of(trial, i, j));
                    assert!(w >= 1 && w <= 24, "weight {w} out of [1, 24]");
                }
            }
        }
        let c = MatchingTracker::new(4, 8, 8);
        let differs = (0..8).any(|trial| {
            (0..4).any(|i| (i + 1..4).any(|j| a.weight_of(trial, i, j) != c.weight_of(trial, i, j)))
        });
        assert!(differs, "different seeds should draw different weights");
    }

    #[test]
    fn prime_two_never_used() {
        let t = MatchingTracker::new(5, 1, 0);
        assert!(t.primes().iter().all(|&p| p >= 3));
    }

    #[test]
    fn self_loop_and_duplicates() {
        let mut t = MatchingTracker::new(4, 1, 0);
        assert_eq!(t.insert_edge(2, 2), Err(Error::SelfLoop { node: 2 }));
        t.insert_edge(0, 1).unwrap();
        let calls = t.state_update_count(0, 0);
        t.insert_edge(1, 0).unwrap(); // same undirected edge
        assert_eq!(t.state_update_count(0, 0), calls);
        t.delete_edge(2, 3).unwrap(); // absent
        assert_eq!(t.state_update_count(0, 0), calls);
    }

    #[test]
    fn two_entry_changes_per_edge_change() {
        let mut t = MatchingTracker::new(5, 2, 9);
        let before = t.state_update_count(1, 0);
        t.insert_edge(1, 4).unwrap();
        assert_eq!(t.state_update_count(1, 0), before + 2);
        t.delete_edge(4, 1).unwrap();
        assert_eq!(t.state_update_count(1, 0), before + 4);
    }

    #[test]
    fn random_sequences_one_sided_and_usually_exact() {
        // Reduced-scale version of the acceptance suite.
        let n = 6;
        let mut rng = ChaCha12Rng::seed_from_u64(401);
        for seq in 0..6u64 {
            let mut t = MatchingTracker::new(n, 12, 5000 + seq);
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for _ in 0..25 {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if i == j {
                    continue;
                }
                let key = (i.min(j), i.max(j));
                if edges.contains(&key) && rng.gen_bool(0.4) {
                    t.delete_edge(i, j).unwrap();
                    edges.retain(|&e| e != key);
                } else {
                    t.insert_edge(i, j).unwrap();
                    if !edges.contains(&key) {
                        edges.push(key);
                    }
                }
                let truth = oracle::max_matching_exhaustive(n, &edges);
                let got = t.max_matching_size();
                assert!(got <= truth, "one-sided bound violated: {got} > {truth}");
                assert_eq!(got, truth, "12 trials missed the true size");
            }
        }
    }
}
