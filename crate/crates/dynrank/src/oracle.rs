//! Brute-force reference implementations used by the test suites.
//!
//! Everything here is deliberately naive and structurally unrelated to the
//! incremental trackers: from-scratch elimination, BFS, SCC, bitmask
//! enumeration. Independence is the point — when a tracker and an oracle
//! disagree, the oracle is right.

use crate::queries::Lit;

/// Overflow in fraction-free elimination. Shrink the test instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

impl std::fmt::Display for Overflow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "intermediate overflow in exact elimination")
    }
}

impl std::error::Error for Overflow {}

/// Row-echelon pivot count over Z_p. Entries may be unreduced.
pub fn gaussian_rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let n = rows.len();
    if n == 0 {
        return 0;
    }
    let m = rows[0].len();
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % p).collect())
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..m {
        let Some(pivot) = (row..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pivot);
        let inv = crate::modp::mod_inverse(a[row][col], p).unwrap();
        for r in row + 1..n {
            if a[r][col] != 0 {
                let factor = crate::modp::mul_mod(a[r][col], inv, p);
                for c in col..m {
                    let sub = crate::modp::mul_mod(factor, a[row][c], p);
                    a[r][c] = crate::modp::sub_mod(a[r][c], sub, p);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == n {
            break;
        }
    }
    rank
}

/// Rank over Q by fraction-free (Bareiss) elimination with 128-bit
/// intermediates. Exact for the intended test scale (n <= 12, entries up to
/// a few dozen); anything that would overflow is reported rather than
/// silently wrapped.
pub fn gaussian_rank_exact(rows: &[Vec<i64>]) -> Result<usize, Overflow> {
    let n = rows.len();
    if n == 0 {
        return Ok(0);
    }
    let m = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    let mut row = 0;
    let mut prev: i128 = 1;
    for col in 0..m {
        let Some(pivot) = (row..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pivot);
        for r in row + 1..n {
            for c in col + 1..m {
                let hi = a[r][c].checked_mul(a[row][col]).ok_or(Overflow)?;
                let lo = a[r][col].checked_mul(a[row][c]).ok_or(Overflow)?;
                let num = hi.checked_sub(lo).ok_or(Overflow)?;
                debug_assert_eq!(num % prev, 0, "Bareiss division must be exact");
                a[r][c] = num / prev;
            }
            a[r][col] = 0;
        }
        prev = a[row][col];
        rank += 1;
        row += 1;
        if row == n {
            break;
        }
    }
    Ok(rank)
}

/// Directed reachability by BFS. Reflexive: `s` reaches itself.
pub fn bfs_reach(n: usize, edges: &[(usize, usize)], s: usize, t: usize) -> bool {
    if s == t {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if v == t {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// 2-SAT decision via strongly connected components of the implication
/// graph: satisfiable iff no variable shares a component with its negation.
pub fn two_sat_scc(n: usize, clauses: &[(Lit, Lit)]) -> bool {
    let nodes = 2 * n;
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in clauses {
        adj[a.negate().node(n)].push(b.node(n));
        adj[b.negate().node(n)].push(a.node(n));
    }
    let comp = tarjan_scc(nodes, &adj);
    (0..n).all(|x| comp[x] != comp[n + x])
}

/// Iterative Tarjan; returns a component id per node.
fn tarjan_scc(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![UNSET; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    // (node, next edge position) frames
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        frames.push((root, 0));
        while let Some(&mut (v, ref mut ei)) = frames.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == UNSET {
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Maximum matching size by bitmask dynamic programming over vertex
/// subsets. Usable up to n = 20; the suites stay well below that.
pub fn max_matching_exhaustive(n: usize, edges: &[(usize, usize)]) -> usize {
    assert!(n <= 20, "oracle is exponential in n");
    let mut adj = vec![0u32; n];
    for &(u, v) in edges {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    let mut memo = vec![u8::MAX; 1usize << n];
    fn solve(mask: u32, adj: &[u32], memo: &mut [u8]) -> u8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask as usize] != u8::MAX {
            return memo[mask as usize];
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        // Leave v unmatched...
        let mut best = solve(rest, adj, memo);
        // ...or match it with any available neighbor.
        let mut candidates = adj[v] & rest;
        while candidates != 0 {
            let u = candidates.trailing_zeros();
            candidates &= candidates - 1;
            best = best.max(1 + solve(rest & !(1 << u), adj, memo));
        }
        memo[mask as usize] = best;
        best
    }
    solve((1u32 << n) - 1, &adj, &mut memo) as usize
}

/// Does `w` give the graph a unique minimum-weight maximum matching?
pub fn is_isolated(n: usize, edges: &[(usize, usize)], w: &dyn Fn(usize, usize) -> u64) -> bool {
    let target = max_matching_exhaustive(n, edges);
    let mut weights_seen: Vec<u64> = Vec::new();
    enumerate_matchings(edges, 0, 0, 0, 0, target, w, &mut weights_seen);
    let min = match weights_seen.iter().min() {
        Some(&min) => min,
        None => return true, // only the empty matching; trivially unique
    };
    weights_seen.iter().filter(|&&x| x == min).count() == 1
}

#[allow(clippy::too_many_arguments)]
fn enumerate_matchings(
    edges: &[(usize, usize)],
    idx: usize,
    used: u32,
    size: usize,
    weight: u64,
    target: usize,
    w: &dyn Fn(usize, usize) -> u64,
    out: &mut Vec<u64>,
) {
    if size == target {
        out.push(weight);
        return;
    }
    if idx == edges.len() || size + (edges.len() - idx) < target {
        return;
    }
    let (u, v) = edges[idx];
    if used & (1 << u) == 0 && used & (1 << v) == 0 {
        enumerate_matchings(
            edges,
            idx + 1,
            used | (1 << u) | (1 << v),
            size + 1,
            weight + w(u.min(v), u.max(v)),
            target,
            w,
            out,
        );
    }
    enumerate_matchings(edges, idx + 1, used, size, weight, target, w, out);
}
