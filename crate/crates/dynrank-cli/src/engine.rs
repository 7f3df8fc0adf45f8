//! Log replay: build the tracker named by the mode, apply each op, and
//! emit one output record per query line.

use std::collections::HashSet;

use dynrank::modp::{reduce_signed, PrimeMode};
use dynrank::{
    oracle, AllPairsReach, IntMatrixTracker, MatchingTracker, Nfa, ReachTracker, RpqTracker,
    TwoSatTracker,
};

use crate::logfmt::{ChangeOp, CliError, Header, ParsedLog};

pub struct RunOptions {
    pub primes: PrimeMode,
    pub seed: u64,
    pub trials: usize,
    pub nfa: Option<Nfa>,
    pub json: bool,
    pub check_invariants: bool,
}

enum Tracker {
    Matrix(IntMatrixTracker),
    Reach(ReachTracker),
    AllPairs(AllPairsReach),
    TwoSat(TwoSatTracker),
    Rpq(RpqTracker),
    Matching(MatchingTracker),
}

fn record(op_text: &str, step: usize, result: &str, json: bool) -> String {
    if json {
        format!(r#"{{"op":"{op_text}","step":{step},"result":{result}}}"#)
    } else {
        match op_text {
            "rank?" => format!("rank {result}"),
            "size?" => format!("size {result}"),
            _ => result.to_string(),
        }
    }
}

pub fn run(log: &ParsedLog, opts: &RunOptions) -> Result<Vec<String>, CliError> {
    let mut tracker = match log.header {
        Header::Matrix { n, m, max_abs } => {
            Tracker::Matrix(IntMatrixTracker::new(n, m, max_abs, opts.primes))
        }
        Header::Reach { n, s, t } => {
            Tracker::Reach(ReachTracker::new(n, s, t, opts.primes).unwrap())
        }
        Header::AllPairs { n } => Tracker::AllPairs(AllPairsReach::new(n, opts.primes)),
        Header::TwoSat { n } => Tracker::TwoSat(TwoSatTracker::new(n, opts.primes)),
        Header::Rpq { n, s, t } => {
            let nfa = opts
                .nfa
                .clone()
                .ok_or_else(|| CliError::Usage("rpq mode requires --nfa <file>".into()))?;
            Tracker::Rpq(RpqTracker::new(n, s, t, nfa, opts.primes).unwrap())
        }
        Header::Matching { n } => Tracker::Matching(MatchingTracker::new(n, opts.trials, opts.seed)),
    };

    let mut out = Vec::new();
    for (step, (_line, op)) in log.ops.iter().enumerate() {
        let step = step + 1;
        apply(&mut tracker, op, step, opts, &mut out)?;
        if opts.check_invariants {
            check_invariants(&tracker, step)?;
        }
    }
    Ok(out)
}

fn apply(
    tracker: &mut Tracker,
    op: &ChangeOp,
    step: usize,
    opts: &RunOptions,
    out: &mut Vec<String>,
) -> Result<(), CliError> {
    match (tracker, op) {
        (Tracker::Matrix(t), ChangeOp::SetEntry { i, j, value }) => {
            t.set_entry(*i, *j, *value).unwrap();
        }
        (Tracker::Matrix(t), ChangeOp::QueryRank) => {
            out.push(record("rank?", step, &t.rank().to_string(), opts.json));
        }
        (Tracker::Reach(t), ChangeOp::InsertEdge { u, v }) => {
            t.insert_edge(*u, *v).unwrap();
        }
        (Tracker::Reach(t), ChangeOp::DeleteEdge { u, v }) => {
            t.delete_edge(*u, *v).unwrap();
        }
        (Tracker::Reach(t), ChangeOp::QueryReach { pair: None }) => {
            out.push(record("reach?", step, &t.reachable().to_string(), opts.json));
        }
        (Tracker::AllPairs(t), ChangeOp::InsertEdge { u, v }) => {
            t.insert_edge(*u, *v).unwrap();
        }
        (Tracker::AllPairs(t), ChangeOp::DeleteEdge { u, v }) => {
            t.delete_edge(*u, *v).unwrap();
        }
        (Tracker::AllPairs(t), ChangeOp::QueryReach { pair: Some((s, tt)) }) => {
            let text = format!("reach? {} {}", s + 1, tt + 1);
            out.push(record(&text, step, &t.reachable(*s, *tt).to_string(), opts.json));
        }
        (Tracker::TwoSat(t), ChangeOp::AddClause { a, b }) => {
            t.add_clause(*a, *b).unwrap();
        }
        (Tracker::TwoSat(t), ChangeOp::RemoveClause { a, b }) => {
            t.remove_clause(*a, *b).unwrap();
        }
        (Tracker::TwoSat(t), ChangeOp::QuerySat) => {
            out.push(record("sat?", step, &t.satisfiable().to_string(), opts.json));
        }
        (Tracker::Rpq(t), ChangeOp::InsertLabeled { u, label, v }) => {
            t.insert_labeled_edge(*u, label, *v).unwrap();
        }
        (Tracker::Rpq(t), ChangeOp::DeleteLabeled { u, label, v }) => {
            t.delete_labeled_edge(*u, label, *v).unwrap();
        }
        (Tracker::Rpq(t), ChangeOp::QueryMatch) => {
            out.push(record("match?", step, &t.matches().to_string(), opts.json));
        }
        (Tracker::Matching(t), ChangeOp::AddUndirected { i, j }) => {
            t.insert_edge(*i, *j).unwrap();
        }
        (Tracker::Matching(t), ChangeOp::RemoveUndirected { i, j }) => {
            t.delete_edge(*i, *j).unwrap();
        }
        (Tracker::Matching(t), ChangeOp::QuerySize) => {
            out.push(record("size?", step, &t.max_matching_size().to_string(), opts.json));
        }
        (Tracker::Matching(t), ChangeOp::QueryPerfect) => {
            out.push(record("pm?", step, &t.has_perfect_matching().to_string(), opts.json));
        }
        _ => unreachable!("op/mode mismatch survived parsing"),
    }
    Ok(())
}

fn breach(step: usize, msg: impl Into<String>) -> CliError {
    CliError::Invariant {
        step,
        msg: msg.into(),
    }
}

/// Slow from-scratch verification after a step; only with --check-invariants.
fn check_invariants(tracker: &Tracker, step: usize) -> Result<(), CliError> {
    match tracker {
        Tracker::Matrix(t) => check_matrix(t, step),
        Tracker::Reach(t) => check_reach(t, step),
        Tracker::AllPairs(t) => {
            for r in t.trackers() {
                check_reach(r, step)?;
            }
            Ok(())
        }
        Tracker::TwoSat(t) => {
            let clauses: Vec<_> = t.clauses().iter().copied().collect();
            let expect = oracle::two_sat_scc(t.var_count(), &clauses);
            if t.satisfiable() != expect {
                return Err(breach(step, "satisfiable() disagrees with SCC oracle"));
            }
            Ok(())
        }
        Tracker::Rpq(t) => {
            if t.matches() != rpq_product_bfs(t) {
                return Err(breach(step, "matches() disagrees with product BFS oracle"));
            }
            Ok(())
        }
        Tracker::Matching(t) => {
            if t.node_count() <= 16 {
                let edges: Vec<_> = t.edges().iter().copied().collect();
                let truth = oracle::max_matching_exhaustive(t.node_count(), &edges);
                let got = t.max_matching_size();
                if got > truth {
                    return Err(breach(
                        step,
                        format!("matching size {got} exceeds exhaustive bound {truth}"),
                    ));
                }
            }
            Ok(())
        }
    }
}

fn check_matrix(t: &IntMatrixTracker, step: usize) -> Result<(), CliError> {
    for state in t.per_prime_states() {
        if !state.is_a_good() {
            return Err(breach(step, format!("basis invariant broken mod {}", state.p())));
        }
        let p = state.p();
        let dense: Vec<Vec<u64>> = (0..t.rows())
            .map(|i| (0..t.cols()).map(|j| reduce_signed(t.entry(i, j), p)).collect())
            .collect();
        if state.rank() != oracle::gaussian_rank_mod_p(&dense, p) {
            return Err(breach(step, format!("rank mod {p} disagrees with elimination")));
        }
    }
    Ok(())
}

fn check_reach(t: &ReachTracker, step: usize) -> Result<(), CliError> {
    let n = t.node_count();
    let rank = t.matrix().rank();
    if rank != n && rank != n + 1 {
        return Err(breach(step, format!("bordered rank {rank} outside {{n, n+1}}")));
    }
    let edges: Vec<_> = t.edges().iter().copied().collect();
    let (s, target) = t.pair();
    if t.reachable() != oracle::bfs_reach(n, &edges, s, target) {
        return Err(breach(step, "reachable() disagrees with BFS oracle"));
    }
    for state in t.matrix().per_prime_states() {
        if !state.is_a_good() {
            return Err(breach(step, format!("basis invariant broken mod {}", state.p())));
        }
    }
    Ok(())
}

/// BFS over the explicitly built product graph.
fn rpq_product_bfs(t: &RpqTracker) -> bool {
    let nfa = t.nfa();
    let q = nfa.state_count();
    let nodes: usize = t
        .labeled_edges()
        .iter()
        .flat_map(|&(u, _, v)| [u, v])
        .max()
        .map_or(0, |m| m + 1);
    let (s, target) = t.pair();
    let node_count = nodes.max(s + 1).max(target + 1) * q;
    let mut product: Vec<(usize, usize)> = Vec::new();
    let mut seen = HashSet::new();
    for (u, a, v) in t.labeled_edges() {
        for (q1, b, q2) in nfa.transitions() {
            if a == b && seen.insert((u * q + q1, v * q + q2)) {
                product.push((u * q + q1, v * q + q2));
            }
        }
    }
    nfa.accepting()
        .iter()
        .any(|&f| oracle::bfs_reach(node_count, &product, s * q + nfa.initial(), target * q + f))
}
