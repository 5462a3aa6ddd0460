//! Independent brute-force reference implementations. Everything here is
//! computed by exhaustive or complete backtracking search and shares no
//! permutation/search code with the symmetry module: this module is the
//! trust anchor for the rest of the toolkit.

use std::collections::HashMap;

use thiserror::Error;

use crate::circuit::{evaluate, substitute, Assignment, Qbf};
use crate::encoders::{DominationVariant, Family};
use crate::graph::{all_pairs, cell_count, CellState, Graph, PartialGraph};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{what}: size {got} exceeds the oracle resource guard of {max}")]
    ResourceGuard {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("enumeration at n={0} requires a pruning predicate")]
    PredicateRequired(usize),
    #[error("free variable {0} is not assigned")]
    MissingFreeVariable(String),
}

// ---------------------------------------------------------------------------
// canonical form by exhaustive permutation search

/// Upper-triangle adjacency bits packed row-major from the most significant
/// bit, so integer order equals lexicographic order on the matrix vector.
fn graph_word(g: &Graph) -> u64 {
    let mut w = 0u64;
    for (idx, &b) in g.bits().iter().enumerate() {
        if b {
            w |= 1u64 << (63 - idx);
        }
    }
    w
}

fn word_to_graph(n: usize, w: u64) -> Graph {
    let bits: Vec<bool> = (0..cell_count(n))
        .map(|idx| w & (1u64 << (63 - idx)) != 0)
        .collect();
    Graph::from_bits(n, bits)
}

/// Word of g relabelled so that position p holds original vertex perm[p]
/// (0-based on both sides).
fn permuted_word(adj: &[[bool; 11]; 11], n: usize, perm: &[usize]) -> u64 {
    let mut w = 0u64;
    let mut idx = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if adj[perm[i]][perm[j]] {
                w |= 1u64 << (63 - idx);
            }
            idx += 1;
        }
    }
    w
}

fn adjacency(g: &Graph) -> [[bool; 11]; 11] {
    let n = g.n();
    let mut adj = [[false; 11]; 11];
    for i in 1..=n {
        for j in (i + 1)..=n {
            if g.edge(i, j) {
                adj[i - 1][j - 1] = true;
                adj[j - 1][i - 1] = true;
            }
        }
    }
    adj
}

/// Visit every arrangement that can realize the lexicographically minimal
/// matrix vector: a minimum-degree vertex first, then its non-neighbors in
/// any order, then its neighbors in any order. The overall lexicographic
/// minimum is always attained inside this family because the first row
/// dominates the comparison and its minimum is 0..01..1.
fn sweep_min_word(g: &Graph, stop_below: Option<u64>) -> u64 {
    let n = g.n();
    if n == 1 {
        return 0;
    }
    let adj = adjacency(g);
    let delta = (1..=n).map(|v| g.degree(v)).min().unwrap();
    let mut best = u64::MAX;
    let mut perm = vec![0usize; n];
    for v1 in 0..n {
        if g.degree(v1 + 1) != delta {
            continue;
        }
        perm[0] = v1;
        let non: Vec<usize> = (0..n).filter(|&u| u != v1 && !adj[v1][u]).collect();
        let nbr: Vec<usize> = (0..n).filter(|&u| adj[v1][u]).collect();
        let mut chosen_non = vec![false; non.len()];
        let mut chosen_nbr = vec![false; nbr.len()];
        if !fill(
            &adj,
            n,
            &mut perm,
            1,
            &non,
            &mut chosen_non,
            &nbr,
            &mut chosen_nbr,
            &mut best,
            stop_below,
        ) {
            return best;
        }
    }
    best
}

/// Returns false to abort the whole sweep (stop_below reached).
#[allow(clippy::too_many_arguments)]
fn fill(
    adj: &[[bool; 11]; 11],
    n: usize,
    perm: &mut Vec<usize>,
    pos: usize,
    non: &[usize],
    chosen_non: &mut Vec<bool>,
    nbr: &[usize],
    chosen_nbr: &mut Vec<bool>,
    best: &mut u64,
    stop_below: Option<u64>,
) -> bool {
    if pos == n {
        let w = permuted_word(adj, n, perm);
        if w < *best {
            *best = w;
            if let Some(limit) = stop_below {
                if w < limit {
                    return false;
                }
            }
        }
        return true;
    }
    // non-neighbors of perm[0] occupy the early positions, neighbors the tail
    let use_non = pos <= non.len();
    let len = if use_non { non.len() } else { nbr.len() };
    for k in 0..len {
        let taken = if use_non { chosen_non[k] } else { chosen_nbr[k] };
        if taken {
            continue;
        }
        if use_non {
            chosen_non[k] = true;
            perm[pos] = non[k];
        } else {
            chosen_nbr[k] = true;
            perm[pos] = nbr[k];
        }
        let go = fill(
            adj, n, perm, pos + 1, non, chosen_non, nbr, chosen_nbr, best, stop_below,
        );
        if use_non {
            chosen_non[k] = false;
        } else {
            chosen_nbr[k] = false;
        }
        if !go {
            return false;
        }
    }
    true
}

/// The lexicographically minimal isomorphic copy, by exhaustive sweep.
pub fn canonical_form(g: &Graph) -> Result<Graph, OracleError> {
    let n = g.n();
    if n > 10 {
        return Err(OracleError::ResourceGuard {
            what: "canonical_form",
            got: n,
            max: 10,
        });
    }
    Ok(word_to_graph(n, sweep_min_word(g, None)))
}

/// True iff g equals its canonical form.
pub fn is_canonical(g: &Graph) -> Result<bool, OracleError> {
    let n = g.n();
    if n > 10 {
        return Err(OracleError::ResourceGuard {
            what: "is_canonical",
            got: n,
            max: 10,
        });
    }
    let w = graph_word(g);
    // quick necessary condition: row 1 must be 0..01..1 with min degree ones
    if n >= 2 {
        let delta = (1..=n).map(|v| g.degree(v)).min().unwrap();
        if g.degree(1) != delta {
            return Ok(false);
        }
        for j in 2..=n {
            let want = j > n - delta;
            if g.edge(1, j) != want {
                return Ok(false);
            }
        }
    }
    Ok(sweep_min_word(g, Some(w)) >= w)
}

// ---------------------------------------------------------------------------
// isomorphism testing (for deduplication at n = 9, 10)

fn degree_invariant(g: &Graph) -> Vec<Vec<usize>> {
    // per-vertex BFS distance profile, sorted: a cheap but sharp invariant
    let n = g.n();
    let mut profiles: Vec<Vec<usize>> = (1..=n)
        .map(|v| {
            let mut dist = vec![usize::MAX; n + 1];
            dist[v] = 0;
            let mut queue = vec![v];
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head];
                head += 1;
                for w in g.neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push(w);
                    }
                }
            }
            let mut counts = vec![0usize; n + 1];
            for &d in dist.iter().skip(1) {
                if d != usize::MAX {
                    counts[d] += 1;
                } else {
                    counts[n] += 1;
                }
            }
            counts
        })
        .collect();
    profiles.sort();
    profiles
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.n();
    let mut da: Vec<usize> = (1..=n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (1..=n).map(|v| b.degree(v)).collect();
    da.sort();
    db.sort();
    if da != db || degree_invariant(a) != degree_invariant(b) {
        return false;
    }
    let mut image = vec![0usize; n + 1]; // a-vertex -> b-vertex, 0 = unset
    let mut used = vec![false; n + 1];
    fn go(a: &Graph, b: &Graph, v: usize, image: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = a.n();
        if v > n {
            return true;
        }
        for w in 1..=n {
            if used[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            if (1..v).any(|u| a.edge(u, v) != b.edge(image[u], w)) {
                continue;
            }
            image[v] = w;
            used[w] = true;
            if go(a, b, v + 1, image, used) {
                return true;
            }
            image[v] = 0;
            used[w] = false;
        }
        false
    }
    go(a, b, 1, &mut image, &mut used)
}

// ---------------------------------------------------------------------------
// enumeration of canonical graphs

pub type Predicate<'a> = &'a dyn Fn(&PartialGraph) -> bool;

/// All canonical graphs on n vertices satisfying the predicate, in
/// lexicographic order. The predicate is consulted after every cell
/// assignment (including the final one) and must be prefix-monotone: once
/// false, no completion of the partial graph is considered.
pub fn enumerate_canonical(
    n: usize,
    predicate: Option<Predicate>,
) -> Result<Vec<Graph>, OracleError> {
    if n > 10 {
        return Err(OracleError::ResourceGuard {
            what: "enumerate_canonical",
            got: n,
            max: 10,
        });
    }
    if n > 8 && predicate.is_none() {
        return Err(OracleError::PredicateRequired(n));
    }
    let pairs = all_pairs(n);
    let mut pg = PartialGraph::new(n);
    let mut out: Vec<Graph> = Vec::new();
    let mut reps: Vec<Graph> = Vec::new();
    let small = n <= 8;
    dfs_cells(
        n, &pairs, 0, &mut pg, predicate, small, &mut out, &mut reps,
    )?;
    if !small {
        for r in reps {
            out.push(canonical_form(&r)?);
        }
    }
    out.sort_by_key(graph_word);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_cells(
    n: usize,
    pairs: &[(usize, usize)],
    idx: usize,
    pg: &mut PartialGraph,
    predicate: Option<Predicate>,
    small: bool,
    out: &mut Vec<Graph>,
    reps: &mut Vec<Graph>,
) -> Result<(), OracleError> {
    if idx == pairs.len() {
        let g = pg.to_graph().expect("leaf is fully defined");
        // only labellings whose first row is the minimal 0..01..1 pattern
        // with minimum degree can be canonical; every class has one
        let delta = (1..=n).map(|v| g.degree(v)).min().unwrap_or(0);
        if n >= 2 && g.degree(1) != delta {
            return Ok(());
        }
        if small {
            if is_canonical(&g)? {
                out.push(g);
            }
        } else if !reps.iter().any(|r| are_isomorphic(r, &g)) {
            reps.push(g);
        }
        return Ok(());
    }
    let (i, j) = pairs[idx];
    for state in [CellState::Absent, CellState::Present] {
        // first row restricted to the 0..01..1 shape
        if i == 1 && j > 2 && state == CellState::Absent && pg.cell(1, j - 1) == CellState::Present
        {
            continue;
        }
        pg.set_cell(i, j, state);
        if predicate.map(|p| p(pg)).unwrap_or(true) {
            dfs_cells(n, pairs, idx + 1, pg, predicate, small, out, reps)?;
        }
    }
    pg.set_cell(i, j, CellState::Undefined);
    Ok(())
}

// ---------------------------------------------------------------------------
// partial-graph pruning helpers for structured enumerations

/// Every vertex has at most `k` present edges and can still reach `k`.
pub fn partial_degree_exactly(pg: &PartialGraph, k: usize) -> bool {
    let n = pg.n();
    for v in 1..=n {
        let mut present = 0;
        let mut open = 0;
        for u in 1..=n {
            if u == v {
                continue;
            }
            match pg.cell(v, u) {
                CellState::Present => present += 1,
                CellState::Undefined => open += 1,
                CellState::Absent => {}
            }
        }
        if present > k || present + open < k {
            return false;
        }
    }
    true
}

/// No cycle of length at most `len` among the present edges.
pub fn partial_girth_above(pg: &PartialGraph, len: usize) -> bool {
    let n = pg.n();
    // DFS over simple paths of present edges, bounded length
    fn cycle_from(
        pg: &PartialGraph,
        start: usize,
        v: usize,
        depth: usize,
        len: usize,
        visited: &mut Vec<bool>,
    ) -> bool {
        if depth >= len {
            return false;
        }
        for u in 1..=pg.n() {
            if u == v || pg.cell(v, u) != CellState::Present {
                continue;
            }
            if u == start && depth >= 2 {
                return true;
            }
            if u < start || visited[u] {
                continue;
            }
            visited[u] = true;
            if cycle_from(pg, start, u, depth + 1, len, visited) {
                return true;
            }
            visited[u] = false;
        }
        false
    }
    for start in 1..=n {
        let mut visited = vec![false; n + 1];
        visited[start] = true;
        if cycle_from(pg, start, start, 1, len, &mut visited) {
            return false;
        }
    }
    true
}

/// No triangle among the present edges.
pub fn partial_triangle_free(pg: &PartialGraph) -> bool {
    let n = pg.n();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if pg.cell(i, j) != CellState::Present {
                continue;
            }
            for w in (j + 1)..=n {
                if pg.cell(i, w) == CellState::Present && pg.cell(j, w) == CellState::Present {
                    return false;
                }
            }
        }
    }
    true
}

/// No 4-cycle among the present edges.
pub fn partial_square_free(pg: &PartialGraph) -> bool {
    let n = pg.n();
    // a C4 exists iff two vertices share two common present-neighbors
    for i in 1..=n {
        for j in (i + 1)..=n {
            let common = (1..=n)
                .filter(|&w| {
                    w != i
                        && w != j
                        && pg.cell(i, w) == CellState::Present
                        && pg.cell(j, w) == CellState::Present
                })
                .count();
            if common >= 2 {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// colorings

pub fn is_properly_k_colorable(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if k == 0 {
        return n == 0;
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut color = vec![usize::MAX; n + 1];
    fn go(g: &Graph, order: &[usize], at: usize, k: usize, color: &mut Vec<usize>) -> bool {
        if at == order.len() {
            return true;
        }
        let v = order[at];
        // symmetry break: at most one fresh color beyond those already used
        let used = order[..at].iter().map(|&u| color[u] + 1).max().unwrap_or(0);
        for c in 0..k.min(used + 1) {
            if order[..at]
                .iter()
                .any(|&u| color[u] == c && g.edge(u, v))
            {
                continue;
            }
            color[v] = c;
            if go(g, order, at + 1, k, color) {
                return true;
            }
        }
        color[v] = usize::MAX;
        false
    }
    go(g, &order, 0, k, &mut color)
}

pub fn chromatic_number(g: &Graph) -> usize {
    (1..).find(|&k| is_properly_k_colorable(g, k)).unwrap()
}

pub fn is_3_edge_colorable(g: &Graph) -> bool {
    let n = g.n();
    if (1..=n).any(|v| g.degree(v) > 3) {
        return false;
    }
    let edges = g.edges();
    let mut color = vec![usize::MAX; edges.len()];
    fn go(edges: &[(usize, usize)], at: usize, color: &mut Vec<usize>) -> bool {
        if at == edges.len() {
            return true;
        }
        let (u, v) = edges[at];
        for c in 0..3 {
            let clash = (0..at).any(|e| {
                color[e] == c && {
                    let (a, b) = edges[e];
                    a == u || a == v || b == u || b == v
                }
            });
            if clash {
                continue;
            }
            color[at] = c;
            if go(edges, at + 1, color) {
                return true;
            }
        }
        color[at] = usize::MAX;
        false
    }
    go(&edges, 0, &mut color)
}

pub fn is_010_colorable(g: &Graph) -> Result<bool, OracleError> {
    let n = g.n();
    if n > 24 {
        return Err(OracleError::ResourceGuard {
            what: "is_010_colorable",
            got: n,
            max: 24,
        });
    }
    let edges = g.edges();
    let triangles = triangles_of(g);
    for mask in 0u32..(1u32 << n) {
        // bit v-1 set = vertex colored 1; clear = colored 0
        let bad_edge = edges
            .iter()
            .any(|&(u, v)| mask & (1 << (u - 1)) == 0 && mask & (1 << (v - 1)) == 0);
        if bad_edge {
            continue;
        }
        let bad_triangle = triangles.iter().any(|&(a, b, c)| {
            mask & (1 << (a - 1)) != 0 && mask & (1 << (b - 1)) != 0 && mask & (1 << (c - 1)) != 0
        });
        if !bad_triangle {
            return Ok(true);
        }
    }
    Ok(false)
}

fn triangles_of(g: &Graph) -> Vec<(usize, usize, usize)> {
    let n = g.n();
    let mut t = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            if !g.edge(a, b) {
                continue;
            }
            for c in (b + 1)..=n {
                if g.edge(a, c) && g.edge(b, c) {
                    t.push((a, b, c));
                }
            }
        }
    }
    t
}

/// Every 2-edge-coloring contains a monochromatic triangle.
pub fn folkman_check(g: &Graph) -> Result<bool, OracleError> {
    let edges = g.edges();
    let m = edges.len();
    if m > 24 {
        return Err(OracleError::ResourceGuard {
            what: "folkman_check",
            got: m,
            max: 24,
        });
    }
    let index: HashMap<(usize, usize), usize> = edges
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, k))
        .collect();
    let tri: Vec<[usize; 3]> = triangles_of(g)
        .into_iter()
        .map(|(a, b, c)| [index[&(a, b)], index[&(a, c)], index[&(b, c)]])
        .collect();
    if tri.is_empty() {
        return Ok(false);
    }
    // color symmetry: fix edge 0's color
    for mask in 0u32..(1u32 << (m - 1)) {
        let mask = mask << 1;
        let mono = tri.iter().any(|t| {
            let bits = [
                mask & (1 << t[0]) != 0,
                mask & (1 << t[1]) != 0,
                mask & (1 << t[2]) != 0,
            ];
            bits == [true, true, true] || bits == [false, false, false]
        });
        if !mono {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// domination and treewidth

pub fn min_dominating_set_size(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    if n > 20 {
        return Err(OracleError::ResourceGuard {
            what: "min_dominating_set_size",
            got: n,
            max: 20,
        });
    }
    let closed: Vec<u32> = (1..=n)
        .map(|v| {
            let mut m = 1u32 << (v - 1);
            for u in g.neighbors(v) {
                m |= 1 << (u - 1);
            }
            m
        })
        .collect();
    let all = (1u32 << n) - 1;
    let mut best = n;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut covered = 0u32;
        for (v, c) in closed.iter().enumerate().take(n) {
            if mask & (1 << v) != 0 {
                covered |= c;
            }
        }
        if covered == all {
            best = size;
        }
    }
    Ok(best)
}

/// Exact treewidth by dynamic programming over vertex subsets: the minimum
/// over elimination orderings of the largest back-degree at elimination time.
pub fn treewidth(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    if n > 12 {
        return Err(OracleError::ResourceGuard {
            what: "treewidth",
            got: n,
            max: 12,
        });
    }
    if n <= 1 {
        return Ok(0);
    }
    // q(s, v) = number of vertices outside s∪{v} reachable from v via s
    let q = |s: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut count = 0;
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u + 1) {
                let w = w - 1;
                if seen & (1 << w) != 0 {
                    continue;
                }
                seen |= 1 << w;
                if s & (1 << w) != 0 {
                    stack.push(w);
                } else {
                    count += 1;
                }
            }
        }
        count
    };
    // f[s] = best width eliminating exactly the set s first
    let mut f = vec![usize::MAX; 1usize << n];
    f[0] = 0;
    for s in 1u32..(1u32 << n) {
        let mut best = usize::MAX;
        for v in 0..n {
            if s & (1 << v) == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let sub = f[rest as usize];
            if sub == usize::MAX {
                continue;
            }
            let width = sub.max(q(rest, v));
            best = best.min(width);
        }
        f[s as usize] = best;
    }
    Ok(f[(1usize << n) - 1])
}

// ---------------------------------------------------------------------------
// connectivity and structure

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub connected: bool,
    pub two_connected: bool,
    pub three_connected: bool,
    /// None means acyclic (infinite girth).
    pub girth: Option<usize>,
    pub cubic: bool,
    pub bipartite: bool,
    pub square_free: bool,
    pub triangle_free: bool,
    pub every_vertex_on_triangle: bool,
}

fn connected_excluding(g: &Graph, removed: &[usize]) -> bool {
    let n = g.n();
    let alive: Vec<usize> = (1..=n).filter(|v| !removed.contains(v)).collect();
    let Some(&start) = alive.first() else {
        return true;
    };
    let mut seen = vec![false; n + 1];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for w in g.neighbors(u) {
            if !removed.contains(&w) && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    alive.iter().all(|&v| seen[v])
}

pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    for root in 1..=n {
        let mut dist = vec![usize::MAX; n + 1];
        let mut parent = vec![0usize; n + 1];
        dist[root] = 0;
        let mut queue = vec![root];
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        None
    } else {
        Some(best)
    }
}

fn is_bipartite(g: &Graph) -> bool {
    let n = g.n();
    let mut side = vec![u8::MAX; n + 1];
    for start in 1..=n {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    stack.push(w);
                } else if side[w] == side[u] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn connectivity_report(g: &Graph) -> ConnectivityReport {
    let n = g.n();
    let connected = connected_excluding(g, &[]);
    let two_connected =
        n >= 3 && connected && (1..=n).all(|v| connected_excluding(g, &[v]));
    let three_connected = n >= 4
        && two_connected
        && (1..=n).all(|v| ((v + 1)..=n).all(|u| connected_excluding(g, &[v, u])));
    let girth = girth(g);
    let triangles = triangles_of(g);
    let square_free = {
        let mut ok = true;
        'outer: for i in 1..=n {
            for j in (i + 1)..=n {
                let common = (1..=n)
                    .filter(|&w| w != i && w != j && g.edge(i, w) && g.edge(j, w))
                    .count();
                if common >= 2 {
                    ok = false;
                    break 'outer;
                }
            }
        }
        ok
    };
    let every_vertex_on_triangle = (1..=n).all(|v| {
        triangles
            .iter()
            .any(|&(a, b, c)| a == v || b == v || c == v)
    });
    ConnectivityReport {
        connected,
        two_connected,
        three_connected,
        girth,
        cubic: (1..=n).all(|v| g.degree(v) == 3),
        bipartite: is_bipartite(g),
        square_free,
        triangle_free: triangles.is_empty(),
        every_vertex_on_triangle,
    }
}

// ---------------------------------------------------------------------------
// assorted structural predicates

pub fn contains_clique(g: &Graph, k: usize) -> bool {
    let n = g.n();
    fn grow(g: &Graph, clique: &mut Vec<usize>, from: usize, k: usize) -> bool {
        if clique.len() == k {
            return true;
        }
        for v in from..=g.n() {
            if clique.iter().all(|&u| g.edge(u, v)) {
                clique.push(v);
                if grow(g, clique, v + 1, k) {
                    return true;
                }
                clique.pop();
            }
        }
        false
    }
    if k == 0 {
        return true;
    }
    if k > n {
        return false;
    }
    grow(g, &mut Vec::new(), 1, k)
}

/// Triangle-free and every non-edge closes a triangle.
pub fn is_maximal_triangle_free(g: &Graph) -> bool {
    let n = g.n();
    if !triangles_of(g).is_empty() {
        return false;
    }
    for u in 1..=n {
        for v in (u + 1)..=n {
            if g.edge(u, v) {
                continue;
            }
            if !(1..=n).any(|w| w != u && w != v && g.edge(u, w) && g.edge(v, w)) {
                return false;
            }
        }
    }
    true
}

pub fn min_degree(g: &Graph) -> usize {
    (1..=g.n()).map(|v| g.degree(v)).min().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// family membership

/// Does g satisfy the family's defining property (after the family's
/// post-filters, where applicable)?
pub fn satisfies_family(g: &Graph, family: &Family) -> Result<bool, OracleError> {
    let n = g.n();
    let rep = connectivity_report(g);
    Ok(match family {
        Family::None => true,
        Family::TriangleFree => rep.triangle_free,
        Family::TriangleFreeNonColorable { k, maximal } => {
            rep.triangle_free
                && (!*maximal || is_maximal_triangle_free(g))
                && !is_properly_k_colorable(g, k - 1)
        }
        Family::Folkman { k } => !contains_clique(g, *k) && folkman_check(g)?,
        Family::Domination { variant } => {
            let bound = n.div_ceil(3);
            let variant_ok = match variant {
                DominationVariant::ThreeConnected => rep.three_connected,
                DominationVariant::Bipartite => rep.connected && rep.bipartite,
                DominationVariant::Girth6 => {
                    rep.connected && rep.girth.map(|x| x >= 6).unwrap_or(true)
                }
            };
            rep.cubic && variant_ok && min_dominating_set_size(g)? > bound
        }
        Family::TreewidthExact { k } => treewidth(g)? == *k,
        Family::Snark => {
            rep.cubic
                && rep.two_connected
                && rep.girth.map(|x| x >= 5).unwrap_or(true)
                && !is_3_edge_colorable(g)
        }
        Family::KochenSpecker => {
            rep.square_free
                && min_degree(g) >= 3
                && rep.every_vertex_on_triangle
                && is_properly_k_colorable(g, 4)
                && !is_010_colorable(g)?
        }
    })
}

// ---------------------------------------------------------------------------
// property report

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub n: usize,
    pub edges: usize,
    pub chromatic_number: usize,
    pub girth: Option<usize>,
    pub treewidth: Option<usize>,
    pub domination_number: Option<usize>,
    pub three_edge_colorable: bool,
    pub zero_one_zero_colorable: Option<bool>,
    pub connectivity: ConnectivityReport,
}

pub fn property_report(g: &Graph) -> PropertyReport {
    PropertyReport {
        n: g.n(),
        edges: g.edge_count(),
        chromatic_number: chromatic_number(g),
        girth: girth(g),
        treewidth: treewidth(g).ok(),
        domination_number: min_dominating_set_size(g).ok(),
        three_edge_colorable: is_3_edge_colorable(g),
        zero_one_zero_colorable: is_010_colorable(g).ok(),
        connectivity: connectivity_report(g),
    }
}

// ---------------------------------------------------------------------------
// 2-QBF ground truth

/// Truth of the 2-QBF under the given free-variable assignment, by full
/// recursive expansion.
pub fn qbf_truth_bruteforce(q: &Qbf, free_assignment: &Assignment) -> Result<bool, OracleError> {
    for v in &q.free {
        if !free_assignment.contains_key(v) {
            return Err(OracleError::MissingFreeVariable(v.clone()));
        }
    }
    let matrix = substitute(&q.matrix, free_assignment);
    let used = matrix.used_vars();
    let xs: Vec<&String> = q.exists.iter().filter(|v| used.contains(v)).collect();
    let ys: Vec<&String> = q.forall.iter().filter(|v| used.contains(v)).collect();
    let total = xs.len() + ys.len();
    if total > 30 {
        return Err(OracleError::ResourceGuard {
            what: "qbf_truth_bruteforce",
            got: total,
            max: 30,
        });
    }
    let mut a = Assignment::new();
    for xm in 0u64..(1u64 << xs.len()) {
        for (i, x) in xs.iter().enumerate() {
            a.insert((*x).clone(), xm & (1 << i) != 0);
        }
        let mut all = true;
        for ym in 0u64..(1u64 << ys.len()) {
            for (i, y) in ys.iter().enumerate() {
                a.insert((*y).clone(), ym & (1 << i) != 0);
            }
            if !evaluate(&matrix, &a).expect("all used variables assigned") {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}
