//! Dynamic s-t reachability by reduction to incremental matrix rank.
//!
//! For a digraph on n nodes with adjacency matrix A, the matrix n*I - A is
//! strictly diagonally dominant, hence invertible, and the (s, t) entry of
//! its inverse is nonzero exactly when t is reachable from s (expand the
//! inverse as a geometric series in A/n: its terms count walks). Testing
//! "entry of the inverse is nonzero" reduces to a rank question: border
//! n*I - A with a row selecting coordinate s and the unit column e_t, and
//! the bordered (n+1) x (n+1) system has rank n+1 iff the entry is nonzero.
//! Each edge change touches exactly one entry of the bordered matrix.
//!
//! Reachability is reflexive here — the series has an identity term — so
//! `s` always reaches itself. Self-loops are rejected at the API edge.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::intmatrix::IntMatrixTracker;
use crate::modp::PrimeMode;
use crate::{Error, Result};

/// Reachability tracker for one fixed (s, t) pair.
#[derive(Debug, Clone)]
pub struct ReachTracker {
    n: usize,
    s: usize,
    t: usize,
    edges: HashSet<(usize, usize)>,
    matrix: IntMatrixTracker,
}

impl ReachTracker {
    /// Builds the bordered matrix for the empty edge set by replaying its
    /// n+2 nonzero entries through the rank tracker.
    pub fn new(n: usize, s: usize, t: usize, mode: PrimeMode) -> Result<ReachTracker> {
        if s >= n {
            return Err(Error::IndexOutOfRange {
                what: "source node",
                index: s,
                limit: n,
            });
        }
        if t >= n {
            return Err(Error::IndexOutOfRange {
                what: "target node",
                index: t,
                limit: n,
            });
        }
        let mut matrix = IntMatrixTracker::new(n + 1, n + 1, (n as i64).max(1), mode);
        for d in 0..n {
            matrix.set_entry(d, d, n as i64).unwrap();
        }
        matrix.set_entry(n, s, 1).unwrap();
        matrix.set_entry(t, n, 1).unwrap();
        Ok(ReachTracker {
            n,
            s,
            t,
            edges: HashSet::new(),
            matrix,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.s, self.t)
    }

    pub fn edges(&self) -> &HashSet<(usize, usize)> {
        &self.edges
    }

    /// The bordered matrix; exposed for diagnostics and tests.
    pub fn matrix(&self) -> &IntMatrixTracker {
        &self.matrix
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "node",
                index: u,
                limit: self.n,
            });
        }
        Ok(())
    }

    /// Inserts edge (u, v): one entry of the bordered matrix goes to -1.
    /// Inserting an existing edge is a no-op.
    pub fn insert_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::SelfLoop { node: u });
        }
        if !self.edges.insert((u, v)) {
            return Ok(());
        }
        self.matrix.set_entry(u, v, -1).unwrap();
        Ok(())
    }

    /// Deletes edge (u, v); deleting an absent edge is a no-op.
    pub fn delete_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if !self.edges.remove(&(u, v)) {
            return Ok(());
        }
        self.matrix.set_entry(u, v, 0).unwrap();
        Ok(())
    }

    /// True iff t is currently reachable from s (reflexively).
    pub fn reachable(&self) -> bool {
        let rank = self.matrix.rank();
        assert!(
            rank == self.n || rank == self.n + 1,
            "bordered matrix rank {rank} outside {{n, n+1}} for n = {}",
            self.n
        );
        rank == self.n + 1
    }
}

/// Reachability for a set of (s, t) pairs sharing one edge set: one
/// tracker per pair, all updated on every change. Memory scales with the
/// pair count times the prime set; use [`AllPairsReach::with_pairs`] to
/// restrict it.
#[derive(Debug, Clone)]
pub struct AllPairsReach {
    n: usize,
    edges: HashSet<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    trackers: Vec<ReachTracker>,
}

impl AllPairsReach {
    /// Trackers for all n^2 ordered pairs.
    pub fn new(n: usize, mode: PrimeMode) -> AllPairsReach {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .collect();
        AllPairsReach::with_pairs(n, &pairs, mode).unwrap()
    }

    /// Trackers for a chosen pair list only.
    pub fn with_pairs(n: usize, pairs: &[(usize, usize)], mode: PrimeMode) -> Result<AllPairsReach> {
        let mut index = HashMap::new();
        let mut trackers = Vec::with_capacity(pairs.len());
        for &(s, t) in pairs {
            if index.contains_key(&(s, t)) {
                continue;
            }
            index.insert((s, t), trackers.len());
            trackers.push(ReachTracker::new(n, s, t, mode)?);
        }
        Ok(AllPairsReach {
            n,
            edges: HashSet::new(),
            index,
            trackers,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &HashSet<(usize, usize)> {
        &self.edges
    }

    pub fn trackers(&self) -> &[ReachTracker] {
        &self.trackers
    }

    pub fn insert_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "node",
                index: u.max(v),
                limit: self.n,
            });
        }
        if u == v {
            return Err(Error::SelfLoop { node: u });
        }
        if !self.edges.insert((u, v)) {
            return Ok(());
        }
        // Trackers are independent; fan the change out in parallel.
        self.trackers
            .par_iter_mut()
            .for_each(|t| t.insert_edge(u, v).unwrap());
        Ok(())
    }

    pub fn delete_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.edges.remove(&(u, v)) {
            return Ok(());
        }
        self.trackers
            .par_iter_mut()
            .for_each(|t| t.delete_edge(u, v).unwrap());
        Ok(())
    }

    /// Reachability for a tracked pair; panics if the pair is untracked.
    pub fn reachable(&self, s: usize, t: usize) -> bool {
        let idx = *self
            .index
            .get(&(s, t))
            .unwrap_or_else(|| panic!("pair ({s}, {t}) is not tracked"));
        self.trackers[idx].reachable()
    }
}
