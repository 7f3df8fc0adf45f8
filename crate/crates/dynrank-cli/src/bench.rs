//! Incremental-versus-recompute timing: replay a log, timing each tracker
//! update against a from-scratch rank recomputation of the same object.

use std::time::{Duration, Instant};

use dynrank::modp::{is_prime, reduce_signed, PrimeMode};
use dynrank::{oracle, GoodBasisState, IntMatrixTracker, ReachTracker};

use crate::logfmt::{ChangeOp, CliError, Header, ParsedLog};

pub struct BenchReport {
    pub updates: usize,
    pub incremental_mean_us: f64,
    pub scratch_mean_us: f64,
    pub ratio: f64,
    pub queries: usize,
    pub query_mean_us: f64,
}

impl BenchReport {
    pub fn render(&self, json: bool) -> String {
        if json {
            format!(
                concat!(
                    r#"{{"updates":{},"incremental_mean_us":{:.3},"scratch_mean_us":{:.3},"#,
                    r#""ratio":{:.2},"queries":{},"query_mean_us":{:.3}}}"#
                ),
                self.updates,
                self.incremental_mean_us,
                self.scratch_mean_us,
                self.ratio,
                self.queries,
                self.query_mean_us,
            )
        } else {
            format!(
                "updates {}\nincremental_mean_us {:.3}\nscratch_mean_us {:.3}\nratio {:.2}\nqueries {}\nquery_mean_us {:.3}",
                self.updates,
                self.incremental_mean_us,
                self.scratch_mean_us,
                self.ratio,
                self.queries,
                self.query_mean_us,
            )
        }
    }
}

fn mean_us(total: Duration, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        total.as_secs_f64() * 1e6 / count as f64
    }
}

fn report(
    updates: usize,
    incremental: Duration,
    scratch: Duration,
    queries: usize,
    query_time: Duration,
) -> BenchReport {
    let inc = mean_us(incremental, updates);
    let scr = mean_us(scratch, updates);
    BenchReport {
        updates,
        incremental_mean_us: inc,
        scratch_mean_us: scr,
        ratio: if inc > 0.0 { scr / inc } else { 0.0 },
        queries,
        query_mean_us: mean_us(query_time, queries),
    }
}

pub fn bench(
    log: &ParsedLog,
    primes: PrimeMode,
    single_prime: Option<u64>,
) -> Result<BenchReport, CliError> {
    match log.header {
        Header::Matrix { .. } => bench_matrix(log, primes, single_prime),
        Header::Reach { .. } => {
            if single_prime.is_some() {
                return Err(CliError::Usage(
                    "--prime applies to matrix mode only".into(),
                ));
            }
            bench_reach(log, primes)
        }
        _ => Err(CliError::Usage(
            "bench supports matrix and reach modes".into(),
        )),
    }
}

fn bench_matrix(
    log: &ParsedLog,
    primes: PrimeMode,
    single_prime: Option<u64>,
) -> Result<BenchReport, CliError> {
    let Header::Matrix { n, m, .. } = log.header else {
        unreachable!()
    };
    if let Some(p) = single_prime {
        if !is_prime(p) {
            return Err(CliError::Usage(format!("--prime {p} is not prime")));
        }
        let mut state = GoodBasisState::init(n, m, p);
        let mut dense = vec![vec![0u64; m]; n];
        let (mut inc, mut scr, mut qt) = (Duration::ZERO, Duration::ZERO, Duration::ZERO);
        let (mut updates, mut queries) = (0usize, 0usize);
        for (_line, op) in &log.ops {
            match op {
                ChangeOp::SetEntry { i, j, value } => {
                    let v = reduce_signed(*value, p);
                    let t0 = Instant::now();
                    state.set_entry(*i, *j, v);
                    inc += t0.elapsed();
                    dense[*i][*j] = v;
                    let t1 = Instant::now();
                    let scratch_rank = oracle::gaussian_rank_mod_p(&dense, p);
                    scr += t1.elapsed();
                    assert_eq!(state.rank(), scratch_rank, "incremental/scratch divergence");
                    updates += 1;
                }
                ChangeOp::QueryRank => {
                    let t0 = Instant::now();
                    std::hint::black_box(state.rank());
                    qt += t0.elapsed();
                    queries += 1;
                }
                _ => unreachable!(),
            }
        }
        return Ok(report(updates, inc, scr, queries, qt));
    }

    let Header::Matrix { max_abs, .. } = log.header else {
        unreachable!()
    };
    let mut tracker = IntMatrixTracker::new(n, m, max_abs, primes);
    let mut dense = vec![vec![0i64; m]; n];
    let (mut inc, mut scr, mut qt) = (Duration::ZERO, Duration::ZERO, Duration::ZERO);
    let (mut updates, mut queries) = (0usize, 0usize);
    for (_line, op) in &log.ops {
        match op {
            ChangeOp::SetEntry { i, j, value } => {
                let t0 = Instant::now();
                tracker.set_entry(*i, *j, *value).unwrap();
                inc += t0.elapsed();
                dense[*i][*j] = *value;
                let t1 = Instant::now();
                let scratch_rank = scratch_rank_over_primes(&tracker, &dense);
                scr += t1.elapsed();
                assert_eq!(tracker.rank(), scratch_rank, "incremental/scratch divergence");
                updates += 1;
            }
            ChangeOp::QueryRank => {
                let t0 = Instant::now();
                std::hint::black_box(tracker.rank());
                qt += t0.elapsed();
                queries += 1;
            }
            _ => unreachable!(),
        }
    }
    Ok(report(updates, inc, scr, queries, qt))
}

fn scratch_rank_over_primes(tracker: &IntMatrixTracker, dense: &[Vec<i64>]) -> usize {
    tracker
        .prime_set()
        .primes()
        .iter()
        .map(|p| {
            let p = p.value();
            let reduced: Vec<Vec<u64>> = dense
                .iter()
                .map(|row| row.iter().map(|&x| reduce_signed(x, p)).collect())
                .collect();
            oracle::gaussian_rank_mod_p(&reduced, p)
        })
        .max()
        .unwrap_or(0)
}

fn bench_reach(log: &ParsedLog, primes: PrimeMode) -> Result<BenchReport, CliError> {
    let Header::Reach { n, s, t } = log.header else {
        unreachable!()
    };
    let mut tracker = ReachTracker::new(n, s, t, primes).unwrap();
    let (mut inc, mut scr, mut qt) = (Duration::ZERO, Duration::ZERO, Duration::ZERO);
    let (mut updates, mut queries) = (0usize, 0usize);
    for (_line, op) in &log.ops {
        match op {
            ChangeOp::InsertEdge { u, v } | ChangeOp::DeleteEdge { u, v } => {
                let insert = matches!(op, ChangeOp::InsertEdge { .. });
                let t0 = Instant::now();
                if insert {
                    tracker.insert_edge(*u, *v).unwrap();
                } else {
                    tracker.delete_edge(*u, *v).unwrap();
                }
                inc += t0.elapsed();
                let dense: Vec<Vec<i64>> = (0..=n)
                    .map(|i| (0..=n).map(|j| tracker.matrix().entry(i, j)).collect())
                    .collect();
                let t1 = Instant::now();
                let scratch_rank = scratch_rank_over_primes(tracker.matrix(), &dense);
                scr += t1.elapsed();
                assert_eq!(tracker.matrix().rank(), scratch_rank);
                updates += 1;
            }
            ChangeOp::QueryReach { pair: None } => {
                let t0 = Instant::now();
                std::hint::black_box(tracker.reachable());
                qt += t0.elapsed();
                queries += 1;
            }
            _ => unreachable!(),
        }
    }
    Ok(report(updates, inc, scr, queries, qt))
}
