//! Property tests for the maintained invariants, driven by proptest.

use dynrank::modp::{self, PrimeMode, PrimeSet};
use dynrank::{oracle, GoodBasisState, IntMatrixTracker};
use proptest::prelude::*;

fn small_primes() -> Vec<u64> {
    modp::sieve_primes(1000).iter().map(|p| p.value()).collect()
}

proptest! {
    /// a * inverse(a) = 1 mod p for every prime up to 1000.
    #[test]
    fn inverse_roundtrip(a in 1u64..5000, pick in 0usize..168) {
        let primes = small_primes();
        let p = primes[pick % primes.len()];
        prop_assume!(a % p != 0);
        let inv = modp::mod_inverse(a, p).unwrap();
        prop_assert_eq!(modp::mul_mod(a % p, inv, p), 1);
    }

    /// A sound prime set recovers the exact rational rank of any small
    /// bounded matrix as the max of per-prime ranks, in both sizing modes.
    #[test]
    fn prime_set_lifts_exact_rank(
        rows in 1usize..=5,
        cols in 1usize..=5,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let matrix: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-8i64..=8)).collect())
            .collect();
        let exact = oracle::gaussian_rank_exact(&matrix).unwrap();
        for mode in [PrimeMode::ProductBound, PrimeMode::PaperBound] {
            let set = PrimeSet::select(rows, cols, 8, mode);
            let lifted = set
                .primes()
                .iter()
                .map(|p| {
                    let p = p.value();
                    let reduced: Vec<Vec<u64>> = matrix
                        .iter()
                        .map(|r| r.iter().map(|&x| modp::reduce_signed(x, p)).collect())
                        .collect();
                    oracle::gaussian_rank_mod_p(&reduced, p)
                })
                .max()
                .unwrap();
            prop_assert_eq!(exact, lifted);
        }
    }

    /// After every single-entry update the basis passes its full
    /// from-scratch verification and agrees with the elimination oracle.
    #[test]
    fn basis_stays_good_under_updates(
        ops in prop::collection::vec((0usize..6, 0usize..6, 0u64..13), 1..50),
        prime_pick in 0usize..5,
    ) {
        let p = [2u64, 3, 5, 7, 13][prime_pick];
        let mut state = GoodBasisState::init(6, 6, p);
        let mut dense = vec![vec![0u64; 6]; 6];
        for (i, j, raw) in ops {
            let v = raw % p;
            state.set_entry(i, j, v);
            dense[i][j] = v;
            prop_assert!(state.is_a_good());
            prop_assert_eq!(state.rank(), oracle::gaussian_rank_mod_p(&dense, p));
        }
    }

    /// Setting an entry and restoring its old value leaves the rank where
    /// it was (basis equality is not claimed).
    #[test]
    fn set_then_restore_preserves_rank(
        ops in prop::collection::vec((0usize..5, 0usize..5, 0u64..7), 0..30),
        probe in (0usize..5, 0usize..5, 0u64..7),
    ) {
        let mut state = GoodBasisState::init(5, 5, 7);
        for (i, j, v) in ops {
            state.set_entry(i, j, v % 7);
        }
        let (i, j, v) = probe;
        let old = state.entry(i, j);
        let rank_before = state.rank();
        state.set_entry(i, j, v % 7);
        state.set_entry(i, j, old);
        prop_assert_eq!(state.rank(), rank_before);
        prop_assert!(state.is_a_good());
    }

    /// A single update never does more than 2m column replacements, each
    /// costing O(n + m) field operations.
    #[test]
    fn update_work_is_bounded(
        ops in prop::collection::vec((0usize..7, 0usize..4, 0u64..13), 1..60),
    ) {
        let (n, m) = (7usize, 4usize);
        let mut state = GoodBasisState::init(n, m, 13);
        for (i, j, v) in ops {
            state.set_entry(i, j, v % 13);
            let stats = state.last_update_stats();
            prop_assert!(stats.replacements <= 2 * m as u64);
            let bound = 2 * (m * (n + m)) as u64 + 4 * (n + m) as u64 + 8;
            prop_assert!(stats.field_ops <= bound);
        }
    }

    /// The integer tracker's rank equals the exact rational rank after
    /// every update, and dominates every per-prime rank.
    #[test]
    fn tracker_matches_exact_rank(
        ops in prop::collection::vec((0usize..6, 0usize..6, -8i64..=8), 1..40),
    ) {
        let mut tracker = IntMatrixTracker::new(6, 6, 8, PrimeMode::ProductBound);
        let mut dense = vec![vec![0i64; 6]; 6];
        for (i, j, v) in ops {
            tracker.set_entry(i, j, v).unwrap();
            dense[i][j] = v;
            let exact = oracle::gaussian_rank_exact(&dense).unwrap();
            prop_assert_eq!(tracker.rank(), exact);
            prop_assert!(tracker.per_prime_ranks().into_iter().all(|r| r <= exact));
        }
    }
}
