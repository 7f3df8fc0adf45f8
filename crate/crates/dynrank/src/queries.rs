//! Dynamic 2-SAT and regular path queries, reduced to reachability.
//!
//! Both reductions derive graph edges from higher-level objects (clauses,
//! labeled edges crossed with automaton transitions), and distinct source
//! objects can induce the same derived edge. The derived edge layer is
//! therefore reference-counted; the underlying reachability trackers only
//! see insertions and deletions on 0/1 refcount transitions.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::modp::PrimeMode;
use crate::reach::ReachTracker;
use crate::{Error, Result};

/// A literal: a variable index with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    var: usize,
    positive: bool,
}

impl Lit {
    pub fn new(var: usize, positive: bool) -> Lit {
        Lit { var, positive }
    }

    pub fn pos(var: usize) -> Lit {
        Lit::new(var, true)
    }

    pub fn neg(var: usize) -> Lit {
        Lit::new(var, false)
    }

    pub fn var(self) -> usize {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Lit {
        Lit::new(self.var, !self.positive)
    }

    /// Node id in the 2n-node implication graph: x at `var`, not-x at
    /// `n + var`.
    pub fn node(self, n: usize) -> usize {
        if self.positive {
            self.var
        } else {
            n + self.var
        }
    }
}

impl std::fmt::Display for Lit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", if self.positive { "+" } else { "-" }, self.var + 1)
    }
}

/// Dynamic 2-SAT over a fixed variable set.
///
/// Each clause (L or L') contributes the implication edges not-L -> L' and
/// not-L' -> L. The formula is satisfiable iff no variable reaches its own
/// negation in both directions, which two reachability trackers per
/// variable keep answering as clauses come and go.
#[derive(Debug, Clone)]
pub struct TwoSatTracker {
    n: usize,
    clauses: HashSet<(Lit, Lit)>,
    impl_edges: HashMap<(usize, usize), u32>,
    /// 2n trackers over the 2n-node implication graph: index 2x is
    /// x -> not-x, index 2x+1 is not-x -> x.
    trackers: Vec<ReachTracker>,
}

impl TwoSatTracker {
    pub fn new(n: usize, mode: PrimeMode) -> TwoSatTracker {
        assert!(n >= 1, "at least one variable");
        let mut trackers = Vec::with_capacity(2 * n);
        for x in 0..n {
            trackers.push(ReachTracker::new(2 * n, x, n + x, mode).unwrap());
            trackers.push(ReachTracker::new(2 * n, n + x, x, mode).unwrap());
        }
        TwoSatTracker {
            n,
            clauses: HashSet::new(),
            impl_edges: HashMap::new(),
            trackers,
        }
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &HashSet<(Lit, Lit)> {
        &self.clauses
    }

    /// Current refcounts of the derived implication edges.
    pub fn implication_edges(&self) -> &HashMap<(usize, usize), u32> {
        &self.impl_edges
    }

    fn check_lit(&self, l: Lit) -> Result<()> {
        if l.var() >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "variable",
                index: l.var(),
                limit: self.n,
            });
        }
        Ok(())
    }

    fn clause_key(a: Lit, b: Lit) -> (Lit, Lit) {
        if b < a {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Implication edges induced by one clause. A tautological clause
    /// (x or not-x) induces only self-loops, which cannot affect
    /// reachability and are excluded from the derived layer.
    fn clause_edges(&self, a: Lit, b: Lit) -> Vec<(usize, usize)> {
        let n = self.n;
        [
            (a.negate().node(n), b.node(n)),
            (b.negate().node(n), a.node(n)),
        ]
        .into_iter()
        .filter(|(from, to)| from != to)
        .collect()
    }

    fn bump_edge(&mut self, edge: (usize, usize)) {
        let count = self.impl_edges.entry(edge).or_insert(0);
        *count += 1;
        if *count == 1 {
            self.trackers
                .par_iter_mut()
                .for_each(|t| t.insert_edge(edge.0, edge.1).unwrap());
        }
    }

    fn drop_edge(&mut self, edge: (usize, usize)) {
        let count = self.impl_edges.get_mut(&edge).expect("edge is refcounted");
        *count -= 1;
        if *count == 0 {
            self.impl_edges.remove(&edge);
            self.trackers
                .par_iter_mut()
                .for_each(|t| t.delete_edge(edge.0, edge.1).unwrap());
        }
    }

    /// Adds clause (a or b); adding a present clause is a no-op.
    pub fn add_clause(&mut self, a: Lit, b: Lit) -> Result<()> {
        self.check_lit(a)?;
        self.check_lit(b)?;
        if !self.clauses.insert(Self::clause_key(a, b)) {
            return Ok(());
        }
        for edge in self.clause_edges(a, b) {
            self.bump_edge(edge);
        }
        Ok(())
    }

    /// Removes clause (a or b); removing an absent clause is a no-op.
    pub fn remove_clause(&mut self, a: Lit, b: Lit) -> Result<()> {
        self.check_lit(a)?;
        self.check_lit(b)?;
        if !self.clauses.remove(&Self::clause_key(a, b)) {
            return Ok(());
        }
        for edge in self.clause_edges(a, b) {
            self.drop_edge(edge);
        }
        Ok(())
    }

    /// False iff some variable reaches its negation in both directions.
    pub fn satisfiable(&self) -> bool {
        (0..self.n).all(|x| !(self.trackers[2 * x].reachable() && self.trackers[2 * x + 1].reachable()))
    }
}

/// A nondeterministic finite automaton without epsilon transitions.
/// Multiple accepting states are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<(usize, String, usize)>,
}

impl Nfa {
    pub fn new(states: usize, initial: usize, accepting: Vec<usize>) -> Nfa {
        assert!(initial < states, "initial state out of range");
        assert!(accepting.iter().all(|&f| f < states), "accepting state out of range");
        let mut accepting = accepting;
        accepting.sort_unstable();
        accepting.dedup();
        Nfa {
            states,
            initial,
            accepting,
            transitions: Vec::new(),
        }
    }

    pub fn add_transition(&mut self, from: usize, label: &str, to: usize) {
        assert!(from < self.states && to < self.states, "state out of range");
        let t = (from, label.to_string(), to);
        if !self.transitions.contains(&t) {
            self.transitions.push(t);
        }
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn transitions(&self) -> &[(usize, String, usize)] {
        &self.transitions
    }
}

/// Dynamic regular path query: is there a path from s to t whose label
/// word is accepted by the automaton?
///
/// Maintained as reachability in the product graph on nodes (v, q): a
/// labeled edge (u, a, v) and a transition (q, a, q') induce the product
/// edge (u, q) -> (v, q'). One tracker per accepting state answers the
/// query from (s, q0) to (t, f). Product self-loops are skipped: a walk
/// never needs them to reach a different product node.
#[derive(Debug, Clone)]
pub struct RpqTracker {
    nodes: usize,
    s: usize,
    t: usize,
    nfa: Nfa,
    labeled_edges: HashSet<(usize, String, usize)>,
    product_edges: HashMap<(usize, usize), u32>,
    trackers: Vec<ReachTracker>,
}

impl RpqTracker {
    pub fn new(nodes: usize, s: usize, t: usize, nfa: Nfa, mode: PrimeMode) -> Result<RpqTracker> {
        if s >= nodes || t >= nodes {
            return Err(Error::IndexOutOfRange {
                what: "node",
                index: s.max(t),
                limit: nodes,
            });
        }
        let q = nfa.state_count();
        let product_nodes = nodes * q;
        let source = s * q + nfa.initial();
        let trackers = nfa
            .accepting()
            .iter()
            .map(|&f| ReachTracker::new(product_nodes, source, t * q + f, mode))
            .collect::<Result<Vec<_>>>()?;
        Ok(RpqTracker {
            nodes,
            s,
            t,
            nfa,
            labeled_edges: HashSet::new(),
            product_edges: HashMap::new(),
            trackers,
        })
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.s, self.t)
    }

    pub fn labeled_edges(&self) -> &HashSet<(usize, String, usize)> {
        &self.labeled_edges
    }

    /// Current refcounts of the derived product edges.
    pub fn product_edges(&self) -> &HashMap<(usize, usize), u32> {
        &self.product_edges
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.nodes {
            return Err(Error::IndexOutOfRange {
                what: "node",
                index: u,
                limit: self.nodes,
            });
        }
        Ok(())
    }

    fn product_node(&self, v: usize, q: usize) -> usize {
        v * self.nfa.state_count() + q
    }

    /// Product edges induced by one labeled edge, self-pairs excluded.
    fn induced(&self, u: usize, label: &str, v: usize) -> Vec<(usize, usize)> {
        self.nfa
            .transitions()
            .iter()
            .filter(|(_, a, _)| a == label)
            .map(|&(q, _, q2)| (self.product_node(u, q), self.product_node(v, q2)))
            .filter(|(from, to)| from != to)
            .collect()
    }

    /// Inserts labeled edge (u, a, v); at most one product change per
    /// automaton transition. Duplicate insertions are no-ops.
    pub fn insert_labeled_edge(&mut self, u: usize, label: &str, v: usize) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if self.labeled_edges.contains(&(u, label.to_string(), v)) {
            return Ok(());
        }
        self.labeled_edges.insert((u, label.to_string(), v));
        for edge in self.induced(u, label, v) {
            let count = self.product_edges.entry(edge).or_insert(0);
            *count += 1;
            if *count == 1 {
                self.trackers
                    .par_iter_mut()
                    .for_each(|t| t.insert_edge(edge.0, edge.1).unwrap());
            }
        }
        Ok(())
    }

    /// Deletes labeled edge (u, a, v); absent deletions are no-ops.
    pub fn delete_labeled_edge(&mut self, u: usize, label: &str, v: usize) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if !self.labeled_edges.remove(&(u, label.to_string(), v)) {
            return Ok(());
        }
        for edge in self.induced(u, label, v) {
            let count = self.product_edges.get_mut(&edge).expect("edge is refcounted");
            *count -= 1;
            if *count == 0 {
                self.product_edges.remove(&edge);
                self.trackers
                    .par_iter_mut()
                    .for_each(|t| t.delete_edge(edge.0, edge.1).unwrap());
            }
        }
        Ok(())
    }

    /// True iff some accepting state is reachable in the product graph.
    pub fn matches(&self) -> bool {
        self.trackers.iter().any(|t| t.reachable())
    }
}
