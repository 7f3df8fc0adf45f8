//! Incremental rank of a matrix over Z_p under single-entry changes.
//!
//! The tracked state is a basis B of Z_p^m kept in a *good* form for the
//! current n x m matrix A: every basis column outside the kernel of A owns
//! a row in which it is the only basis column whose image under A is
//! nonzero. Kernel columns are exactly those whose image is the zero
//! vector, so `rank(A) = m - #kernel columns` by rank-nullity, and rank
//! queries are O(1) against a maintained counter.
//!
//! When one entry of A changes, only row i of every image vector A*b can
//! change. The update repairs goodness in two phases: first a column is
//! elected to own row i and row i is cleared from every other image, then
//! the column that previously owned row i (if it lost it) is re-anchored at
//! its first remaining nonzero row. Both phases are elementary column
//! operations, so B stays a basis and each image is updated by the same
//! linear combination as its column.

use std::collections::HashMap;

use crate::modp::{add_mod, mod_inverse, mul_mod, sub_mod};

/// Work counters for the most recent `set_entry`, for diagnostics and the
/// per-update work-bound tests.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// Column replacements performed (at most 2m).
    pub replacements: u64,
    /// Field multiplications/inversions performed.
    pub field_ops: u64,
}

/// A basis of Z_p^m maintained in good form for a sparse n x m matrix A
/// over Z_p, supporting O(1) rank queries between single-entry updates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodBasisState {
    p: u64,
    n: usize,
    m: usize,
    /// Sparse matrix entries; absent means zero. Values in [1, p).
    a: HashMap<(usize, usize), u64>,
    /// Basis columns, index-stable: replacements happen in place.
    basis: Vec<Vec<u64>>,
    /// Cached images: prod[v] = A * basis[v], length n.
    prod: Vec<Vec<u64>>,
    /// Per column: number of nonzero rows of prod[v]; zero means kernel.
    col_nnz: Vec<usize>,
    /// Per row: number of columns with a nonzero in that row of prod.
    row_nnz: Vec<usize>,
    kernel_count: usize,
    update_calls: u64,
    last: UpdateStats,
}

impl GoodBasisState {
    /// Fresh state for the all-zero matrix; the identity basis is good
    /// because every column is in the kernel.
    pub fn init(n: usize, m: usize, p: u64) -> GoodBasisState {
        assert!(n >= 1 && m >= 1, "degenerate dimensions");
        assert!(p >= 2, "modulus must be a prime >= 2");
        let mut basis = vec![vec![0u64; m]; m];
        for (v, col) in basis.iter_mut().enumerate() {
            col[v] = 1;
        }
        GoodBasisState {
            p,
            n,
            m,
            a: HashMap::new(),
            basis,
            prod: vec![vec![0u64; n]; m],
            col_nnz: vec![0; m],
            row_nnz: vec![0; n],
            kernel_count: m,
            update_calls: 0,
            last: UpdateStats::default(),
        }
    }

    /// Builds a state from explicit matrix entries and basis columns,
    /// recomputing the image cache. Returns `None` if the basis is not
    /// invertible or not in good form for the given matrix.
    pub fn from_parts(
        n: usize,
        m: usize,
        p: u64,
        entries: &[(usize, usize, u64)],
        basis: Vec<Vec<u64>>,
    ) -> Option<GoodBasisState> {
        assert_eq!(basis.len(), m);
        assert!(basis.iter().all(|col| col.len() == m));
        let mut a = HashMap::new();
        for &(i, j, val) in entries {
            assert!(i < n && j < m);
            if val % p != 0 {
                a.insert((i, j), val % p);
            }
        }
        let mut state = GoodBasisState {
            p,
            n,
            m,
            a,
            basis,
            prod: vec![vec![0u64; n]; m],
            col_nnz: vec![0; m],
            row_nnz: vec![0; n],
            kernel_count: m,
            update_calls: 0,
            last: UpdateStats::default(),
        };
        for v in 0..m {
            let image = state.recompute_image(v);
            for r in 0..n {
                state.set_prod_cell(v, r, image[r]);
            }
        }
        if state.is_a_good() {
            Some(state)
        } else {
            None
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    /// Current value of entry (i, j).
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.n && j < self.m);
        self.a.get(&(i, j)).copied().unwrap_or(0)
    }

    /// rank(A mod p) = m - #kernel columns.
    pub fn rank(&self) -> usize {
        self.m - self.kernel_count
    }

    /// Indices of basis columns currently in the kernel of A.
    pub fn kernel_columns(&self) -> Vec<usize> {
        (0..self.m).filter(|&v| self.col_nnz[v] == 0).collect()
    }

    /// First row owned exclusively by column `v`, if any: the smallest row
    /// where v's image is nonzero and every other image is zero. Derived on
    /// demand rather than stored.
    pub fn principal_component(&self, v: usize) -> Option<usize> {
        assert!(v < self.m);
        (0..self.n).find(|&r| self.prod[v][r] != 0 && self.row_nnz[r] == 1)
    }

    /// Number of `set_entry` calls received (no-ops included).
    pub fn update_count(&self) -> u64 {
        self.update_calls
    }

    /// Work counters for the most recent update.
    pub fn last_update_stats(&self) -> UpdateStats {
        self.last
    }

    /// Sets entry (i, j) to `value` (a residue in [0, p)) and repairs the
    /// basis. Setting an entry to its current value is a no-op.
    pub fn set_entry(&mut self, i: usize, j: usize, value: u64) {
        assert!(i < self.n, "row {i} out of range for {} rows", self.n);
        assert!(j < self.m, "col {j} out of range for {} cols", self.m);
        assert!(value < self.p, "value {value} not reduced mod {}", self.p);
        self.update_calls += 1;
        self.last = UpdateStats::default();
        let old = self.a.get(&(i, j)).copied().unwrap_or(0);
        if old == value {
            return;
        }
        if value == 0 {
            self.a.remove(&(i, j));
        } else {
            self.a.insert((i, j), value);
        }
        let delta = sub_mod(value, old, self.p);

        // The column that owned row i before the change: row i must have
        // had exactly one nonzero image entry, at a column whose first
        // owned row is i itself.
        let prev_owner = if self.row_nnz[i] == 1 {
            (0..self.m)
                .find(|&v| self.prod[v][i] != 0)
                .filter(|&v| self.principal_component(v) == Some(i))
        } else {
            None
        };

        // Only row i of any image changes: (A'b)_i = (Ab)_i + delta * b_j.
        // Kernel columns whose image becomes nonzero are candidates for
        // owning row i; the smallest index wins.
        let mut freshest_kernel: Option<usize> = None;
        for v in 0..self.m {
            let bj = self.basis[v][j];
            if bj == 0 {
                continue;
            }
            let was_kernel = self.col_nnz[v] == 0;
            let d = mul_mod(delta, bj, self.p);
            self.last.field_ops += 1;
            let cell = add_mod(self.prod[v][i], d, self.p);
            self.set_prod_cell(v, i, cell);
            if was_kernel && cell != 0 && freshest_kernel.is_none() {
                freshest_kernel = Some(v);
            }
        }

        // Phase 1: elect an owner for row i and clear the row everywhere
        // else. A freshly nonzero kernel column is preferred (its image is
        // supported on row i alone, so subtracting it touches nothing
        // else); otherwise the previous owner keeps the row if it still
        // has it.
        let row_owner = freshest_kernel
            .or_else(|| prev_owner.filter(|&u| self.prod[u][i] != 0));
        if let Some(vh) = row_owner {
            self.clear_row_against(i, vh);
        }

        // Phase 2: if the previous owner did not win row i back, it may
        // have lost its only owned row; re-anchor it at its first
        // remaining nonzero row.
        let orphan = prev_owner.filter(|&u| row_owner != Some(u));
        if let Some(uh) = orphan {
            if self.col_nnz[uh] > 0 {
                let k = (0..self.n)
                    .find(|&r| self.prod[uh][r] != 0)
                    .expect("non-kernel column has a nonzero row");
                self.clear_row_against(k, uh);
            }
        }
    }

    /// Subtracts the right multiple of `pivot_col` from every other column
    /// whose image has a nonzero in `row`, zeroing that row everywhere but
    /// at the pivot. Images and basis columns move in lockstep.
    fn clear_row_against(&mut self, row: usize, pivot_col: usize) {
        let pivot = self.prod[pivot_col][row];
        debug_assert_ne!(pivot, 0);
        let pivot_inv = mod_inverse(pivot, self.p).expect("pivot is nonzero");
        self.last.field_ops += 1;
        let pivot_basis = self.basis[pivot_col].clone();
        let pivot_prod = self.prod[pivot_col].clone();
        for x in 0..self.m {
            if x == pivot_col || self.prod[x][row] == 0 {
                continue;
            }
            let coef = mul_mod(self.prod[x][row], pivot_inv, self.p);
            self.last.field_ops += 1;
            self.last.replacements += 1;
            for c in 0..self.m {
                if pivot_basis[c] != 0 {
                    let sub = mul_mod(coef, pivot_basis[c], self.p);
                    self.basis[x][c] = sub_mod(self.basis[x][c], sub, self.p);
                    self.last.field_ops += 1;
                }
            }
            for r in 0..self.n {
                if pivot_prod[r] != 0 {
                    let sub = mul_mod(coef, pivot_prod[r], self.p);
                    let cell = sub_mod(self.prod[x][r], sub, self.p);
                    self.set_prod_cell(x, r, cell);
                    self.last.field_ops += 1;
                }
            }
        }
        debug_assert_eq!(self.row_nnz[row], 1);
    }

    fn set_prod_cell(&mut self, v: usize, r: usize, value: u64) {
        let old = self.prod[v][r];
        if old == value {
            return;
        }
        if old == 0 {
            self.row_nnz[r] += 1;
            if self.col_nnz[v] == 0 {
                self.kernel_count -= 1;
            }
            self.col_nnz[v] += 1;
        } else if value == 0 {
            self.row_nnz[r] -= 1;
            self.col_nnz[v] -= 1;
            if self.col_nnz[v] == 0 {
                self.kernel_count += 1;
            }
        }
        self.prod[v][r] = value;
    }

    fn recompute_image(&self, v: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.n];
        for (&(r, c), &val) in &self.a {
            let b = self.basis[v][c];
            if b != 0 {
                out[r] = add_mod(out[r], mul_mod(val, b, self.p), self.p);
            }
        }
        out
    }

    /// Full from-scratch verification of every maintained invariant:
    /// the basis is invertible, every cached image matches a recomputed
    /// A * b, the occupancy counters agree with the cache, and every
    /// non-kernel column owns some row exclusively. Diagnostic; O(m^3).
    pub fn is_a_good(&self) -> bool {
        // Cache coherence and counter consistency.
        let mut row_counts = vec![0usize; self.n];
        let mut kernel = 0;
        for v in 0..self.m {
            let expect = self.recompute_image(v);
            if expect != self.prod[v] {
                return false;
            }
            let nnz = expect.iter().filter(|&&x| x != 0).count();
            if nnz != self.col_nnz[v] {
                return false;
            }
            if nnz == 0 {
                kernel += 1;
            }
            for (r, &x) in expect.iter().enumerate() {
                if x != 0 {
                    row_counts[r] += 1;
                }
            }
        }
        if kernel != self.kernel_count || row_counts != self.row_nnz {
            return false;
        }
        // Basis invertibility via plain elimination on a copy.
        if rank_by_elimination(&self.basis, self.p) != self.m {
            return false;
        }
        // Goodness: every non-kernel column is the sole occupant of some row.
        (0..self.m).all(|v| {
            self.col_nnz[v] == 0
                || (0..self.n).any(|r| self.prod[v][r] != 0 && row_counts[r] == 1)
        })
    }

    #[cfg(test)]
    pub(crate) fn corrupt_cache_for_test(&mut self, v: usize, r: usize) {
        self.prod[v][r] = add_mod(self.prod[v][r], 1, self.p);
    }
}

/// Row-echelon rank of a set of vectors over Z_p; local to keep the
/// diagnostic self-contained.
fn rank_by_elimination(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.to_vec();
    let n = rows.len();
    if n == 0 {
        return 0;
    }
    let m = rows[0].len();
    let mut rank = 0;
    for col in 0..m {
        let Some(pivot) = (rank..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = mod_inverse(rows[rank][col], p).unwrap();
        for r in rank + 1..n {
            if rows[r][col] != 0 {
                let factor = mul_mod(rows[r][col], inv, p);
                for c in col..m {
                    let sub = mul_mod(factor, rows[rank][c], p);
                    rows[r][c] = sub_mod(rows[r][c], sub, p);
                }
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    /// 5x5 fixture over Z_2: a matrix with a known good basis whose first
    /// three columns span the kernel and whose last two own rows 3 and 4.
    fn fixture() -> GoodBasisState {
        let a_rows: [[u64; 5]; 5] = [
            [0, 1, 0, 1, 0],
            [0, 1, 0, 1, 0],
            [0, 1, 0, 1, 0],
            [1, 0, 0, 1, 0],
            [1, 1, 0, 0, 0],
        ];
        let b_rows: [[u64; 5]; 5] = [
            [0, 1, 0, 0, 0],
            [0, 1, 0, 0, 1],
            [1, 0, 0, 0, 0],
            [0, 1, 0, 1, 0],
            [0, 0, 1, 0, 0],
        ];
        let mut entries = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                if a_rows[i][j] != 0 {
                    entries.push((i, j, a_rows[i][j]));
                }
            }
        }
        // Stored column-wise.
        let basis: Vec<Vec<u64>> = (0..5).map(|v| (0..5).map(|c| b_rows[c][v]).collect()).collect();
        GoodBasisState::from_parts(5, 5, 2, &entries, basis).expect("fixture basis is good")
    }

    #[test]
    fn init_is_good_and_rank_zero() {
        let s = GoodBasisState::init(3, 3, 5);
        assert!(s.is_a_good());
        assert_eq!(s.rank(), 0);
        assert_eq!(s.kernel_columns(), vec![0, 1, 2]);

        let s = GoodBasisState::init(1, 1, 2);
        assert_eq!(s.basis, vec![vec![1]]);
        assert_eq!(s.prod, vec![vec![0]]);

        let s = GoodBasisState::init(5, 5, 2);
        assert!(s.is_a_good());
    }

    #[test]
    fn fixture_state_checks_out() {
        let s = fixture();
        assert!(s.is_a_good());
        assert_eq!(s.kernel_columns(), vec![0, 1, 2]);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.principal_component(3), Some(3));
        assert_eq!(s.principal_component(4), Some(4));
        // Cross-check against the elimination oracle.
        let dense: Vec<Vec<u64>> = (0..5)
            .map(|i| (0..5).map(|j| s.entry(i, j)).collect())
            .collect();
        assert_eq!(oracle::gaussian_rank_mod_p(&dense, 2), 2);
    }

    #[test]
    fn single_entry_rank_one() {
        let mut s = GoodBasisState::init(3, 3, 5);
        s.set_entry(0, 0, 1);
        assert_eq!(s.rank(), 1);
        assert!(s.is_a_good());
        let non_kernel: Vec<usize> = (0..3).filter(|&v| s.col_nnz[v] != 0).collect();
        assert_eq!(non_kernel.len(), 1);
        assert_eq!(s.principal_component(non_kernel[0]), Some(0));
    }

    #[test]
    fn identity_reaches_full_rank() {
        for p in [2u64, 3, 7] {
            let mut s = GoodBasisState::init(4, 4, p);
            for d in 0..4 {
                s.set_entry(d, d, 1);
            }
            assert_eq!(s.rank(), 4);
            assert!(s.is_a_good());
        }
    }

    #[test]
    fn unchanged_value_is_a_noop() {
        let mut s = GoodBasisState::init(4, 4, 7);
        s.set_entry(1, 2, 3);
        let before = s.clone();
        s.set_entry(1, 2, 3);
        assert_eq!(s.rank(), before.rank());
        assert_eq!(s.basis, before.basis);
        assert_eq!(s.prod, before.prod);
        assert_eq!(s.last_update_stats(), UpdateStats::default());
    }

    #[test]
    fn set_and_restore_preserves_rank() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let p = 7u64;
        let mut s = GoodBasisState::init(5, 5, p);
        for _ in 0..40 {
            s.set_entry(rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..p));
        }
        for _ in 0..50 {
            let (i, j) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let old = s.entry(i, j);
            let rank_before = s.rank();
            s.set_entry(i, j, rng.gen_range(0..p));
            s.set_entry(i, j, old);
            assert_eq!(s.rank(), rank_before);
            assert!(s.is_a_good());
        }
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn out_of_range_panics() {
        let mut s = GoodBasisState::init(3, 3, 5);
        s.set_entry(3, 0, 1);
    }

    #[test]
    fn corrupted_cache_is_detected() {
        let mut s = GoodBasisState::init(3, 3, 5);
        s.set_entry(0, 1, 2);
        assert!(s.is_a_good());
        s.corrupt_cache_for_test(1, 2);
        assert!(!s.is_a_good());
    }

    #[test]
    fn random_updates_match_oracle_and_stay_good() {
        // Reduced-scale version of the acceptance suite; the non-square
        // shapes exercise the m-based rank formula.
        let primes = [2u64, 3, 5, 7, 13];
        let shapes = [(6, 6), (4, 7), (7, 4)];
        for (seq, &p) in (0..60).zip(primes.iter().cycle()) {
            let mut rng = ChaCha12Rng::seed_from_u64(1000 + seq as u64);
            let (n, m) = shapes[seq % shapes.len()];
            let mut s = GoodBasisState::init(n, m, p);
            let mut dense = vec![vec![0u64; m]; n];
            for _ in 0..30 {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..m));
                let v = rng.gen_range(0..p);
                s.set_entry(i, j, v);
                dense[i][j] = v;
                assert!(s.is_a_good(), "p={p} seq={seq}");
                assert_eq!(s.rank(), oracle::gaussian_rank_mod_p(&dense, p));
            }
        }
    }

    #[test]
    fn work_bound_holds() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let (n, m, p) = (7usize, 5usize, 13u64);
        let mut s = GoodBasisState::init(n, m, p);
        for _ in 0..300 {
            s.set_entry(rng.gen_range(0..n), rng.gen_range(0..m), rng.gen_range(0..p));
            let stats = s.last_update_stats();
            assert!(stats.replacements <= 2 * m as u64);
            let bound = 2 * (m * (n + m)) as u64 + 4 * (n + m) as u64 + 8;
            assert!(
                stats.field_ops <= bound,
                "ops {} exceed bound {bound}",
                stats.field_ops
            );
        }
    }
}
