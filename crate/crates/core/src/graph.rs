//! Graphs, partially defined graphs, permutations, and the cell orderings
//! used for lexicographic adjacency-matrix comparison.
//!
//! Vertices are 1-based throughout. A graph on `n` vertices is stored as its
//! upper adjacency triangle: one cell per pair `(i,j)` with `1 <= i < j <= n`.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("permutation length {perm} does not match graph order {graph}")]
    LengthMismatch { perm: usize, graph: usize },
    #[error("not a permutation: value {0} repeated or out of range")]
    NotAPermutation(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph6 supports at most 62 vertices, got {0}")]
    Graph6TooLarge(usize),
}

/// State of one adjacency cell in a partially defined graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Present,
    Absent,
    Undefined,
}

/// Index of cell (i,j), i<j, in the row-major (lex) upper-triangle layout.
#[inline]
pub fn cell_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    // cells (1,2)..(1,n) then (2,3)..(2,n) ...
    (i - 1) * n - (i - 1) * i / 2 + (j - i) - 1
}

/// Number of upper-triangle cells for n vertices.
#[inline]
pub fn cell_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// All pairs (i,j), i<j, in lex order.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(cell_count(n));
    for i in 1..=n {
        for j in (i + 1)..=n {
            v.push((i, j));
        }
    }
    v
}

/// A graph with each vertex pair present, absent, or still undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialGraph {
    n: usize,
    cells: Vec<CellState>,
}

impl PartialGraph {
    /// All cells undefined.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "vertex count must be positive");
        PartialGraph {
            n,
            cells: vec![CellState::Undefined; cell_count(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cell(&self, i: usize, j: usize) -> CellState {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.cells[cell_index(self.n, i, j)]
    }

    pub fn set_cell(&mut self, i: usize, j: usize, s: CellState) {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.cells[cell_index(self.n, i, j)] = s;
    }

    pub fn is_fully_defined(&self) -> bool {
        self.cells.iter().all(|c| *c != CellState::Undefined)
    }

    /// `self` can be extended to `h`: every defined cell agrees.
    pub fn extends_to(&self, h: &PartialGraph) -> bool {
        self.n == h.n
            && self
                .cells
                .iter()
                .zip(&h.cells)
                .all(|(a, b)| *a == CellState::Undefined || a == b)
    }

    pub fn to_graph(&self) -> Option<Graph> {
        if !self.is_fully_defined() {
            return None;
        }
        Some(Graph {
            n: self.n,
            bits: self
                .cells
                .iter()
                .map(|c| *c == CellState::Present)
                .collect(),
        })
    }
}

/// A fully defined simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    bits: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1);
        Graph {
            n,
            bits: vec![false; cell_count(n)],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.set_edge(u, v, true);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.bits[cell_index(self.n, i, j)]
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n);
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.bits[cell_index(self.n, i, j)] = present;
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        all_pairs(self.n)
            .into_iter()
            .filter(|&(i, j)| self.edge(i, j))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn degree(&self, v: usize) -> usize {
        (1..=self.n).filter(|&u| u != v && self.edge(u, v)).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (1..=self.n).filter(|&u| u != v && self.edge(u, v)).collect()
    }

    pub fn to_partial(&self) -> PartialGraph {
        PartialGraph {
            n: self.n,
            cells: self
                .bits
                .iter()
                .map(|b| if *b { CellState::Present } else { CellState::Absent })
                .collect(),
        }
    }

    /// Raw upper-triangle bits in lex cell order.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn from_bits(n: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), cell_count(n));
        Graph { n, bits }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", emit_edge_list(self))
    }
}

/// A bijection on [n]; `image[i-1]` is the image of vertex i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    pub fn new(image: Vec<usize>) -> Result<Self, GraphError> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v < 1 || v > n || seen[v] {
                return Err(GraphError::NotAPermutation(v));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { image: inv }
    }

    /// self ∘ other: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: (1..=self.image.len())
                .map(|v| self.apply(other.apply(v)))
                .collect(),
        }
    }
}

/// Comparison order over the upper-triangle cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CellOrderKind {
    #[default]
    Lex,
    Colex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellOrder {
    pub kind: CellOrderKind,
    pub sequence: Vec<(usize, usize)>,
}

impl CellOrder {
    pub fn new(kind: CellOrderKind, n: usize) -> Self {
        let mut sequence = all_pairs(n);
        if kind == CellOrderKind::Colex {
            sequence.sort_by_key(|&(i, j)| (j, i));
        }
        CellOrder { kind, sequence }
    }

    pub fn lex(n: usize) -> Self {
        CellOrder::new(CellOrderKind::Lex, n)
    }

    pub fn colex(n: usize) -> Self {
        CellOrder::new(CellOrderKind::Colex, n)
    }
}

/// Graph permuted: result has edge {p(u),p(v)} iff g has edge {u,v}.
pub fn apply_permutation(g: &Graph, p: &Permutation) -> Result<Graph, GraphError> {
    if p.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            perm: p.len(),
            graph: g.n(),
        });
    }
    let mut h = Graph::empty(g.n());
    for (u, v) in g.edges() {
        h.set_edge(p.apply(u), p.apply(v), true);
    }
    Ok(h)
}

/// The adjacency cell vector of `g` in the given order.
pub fn matrix_vector(g: &PartialGraph, ord: &CellOrder) -> Vec<CellState> {
    ord.sequence.iter().map(|&(i, j)| g.cell(i, j)).collect()
}

/// Parse the "n m" / "u v" edge-list text format.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (ln, header) = lines
        .next()
        .ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
    let mut it = header.split_whitespace();
    let parse_num = |s: Option<&str>, line: usize| -> Result<usize, GraphError> {
        s.ok_or_else(|| GraphError::Parse {
            line,
            msg: "expected number".into(),
        })?
        .parse()
        .map_err(|_| GraphError::Parse {
            line,
            msg: "malformed number".into(),
        })
    };
    let n = parse_num(it.next(), ln + 1)?;
    let m = parse_num(it.next(), ln + 1)?;
    if n < 1 {
        return Err(GraphError::Parse {
            line: ln + 1,
            msg: "vertex count must be positive".into(),
        });
    }
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line: ln + 1,
            msg: "trailing tokens in header".into(),
        });
    }
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let u = parse_num(it.next(), ln + 1)?;
        let v = parse_num(it.next(), ln + 1)?;
        if it.next().is_some() {
            return Err(GraphError::Parse {
                line: ln + 1,
                msg: "trailing tokens in edge line".into(),
            });
        }
        if !(1 <= u && u < v && v <= n) {
            return Err(GraphError::Parse {
                line: ln + 1,
                msg: format!("edge {u} {v} violates 1 <= u < v <= n"),
            });
        }
        if g.edge(u, v) {
            return Err(GraphError::Parse {
                line: ln + 1,
                msg: format!("duplicate edge {u} {v}"),
            });
        }
        g.set_edge(u, v, true);
        count += 1;
    }
    if count != m {
        return Err(GraphError::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {count}"),
        });
    }
    Ok(g)
}

/// Emit the edge-list format; edges sorted in lex cell order.
pub fn emit_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Standard graph6 one-line encoding (n <= 62).
pub fn emit_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.n();
    if n > 62 {
        return Err(GraphError::Graph6TooLarge(n));
    }
    let mut out = String::new();
    out.push((63 + n as u8) as char);
    // column-major upper triangle: (1,2),(1,3),(2,3),(1,4),... i.e. colex
    let mut bits = Vec::with_capacity(cell_count(n));
    for j in 2..=n {
        for i in 1..j {
            bits.push(g.edge(i, j));
        }
    }
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for (k, b) in chunk.iter().enumerate() {
            if *b {
                v |= 1 << (5 - k);
            }
        }
        out.push((63 + v) as char);
    }
    Ok(out)
}

/// Decode a graph6 line (support tooling; the emitter is the spec'd surface).
pub fn parse_graph6(s: &str) -> Result<Graph, GraphError> {
    let bytes = s.trim().as_bytes();
    if bytes.is_empty() {
        return Err(GraphError::Parse {
            line: 1,
            msg: "empty graph6 string".into(),
        });
    }
    let n = (bytes[0] as usize)
        .checked_sub(63)
        .ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: "bad graph6 size byte".into(),
        })?;
    if !(1..=62).contains(&n) {
        return Err(GraphError::Parse {
            line: 1,
            msg: format!("unsupported graph6 order {n}"),
        });
    }
    let need = cell_count(n);
    let mut bits = Vec::with_capacity(need);
    for &b in &bytes[1..] {
        let v = b.checked_sub(63).ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: "bad graph6 data byte".into(),
        })?;
        if v > 63 {
            return Err(GraphError::Parse {
                line: 1,
                msg: "bad graph6 data byte".into(),
            });
        }
        for k in 0..6 {
            bits.push(v & (1 << (5 - k)) != 0);
        }
    }
    if bits.len() < need {
        return Err(GraphError::Parse {
            line: 1,
            msg: "graph6 string too short".into(),
        });
    }
    let mut g = Graph::empty(n);
    let mut t = 0;
    for j in 2..=n {
        for i in 1..j {
            if bits[t] {
                g.set_edge(i, j, true);
            }
            t += 1;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_indexing_round_trips() {
        for n in 1..=8 {
            let pairs = all_pairs(n);
            assert_eq!(pairs.len(), cell_count(n));
            for (t, &(i, j)) in pairs.iter().enumerate() {
                assert_eq!(cell_index(n, i, j), t);
            }
        }
    }

    #[test]
    fn identity_permutation_is_noop() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3)]);
        assert_eq!(apply_permutation(&g, &Permutation::identity(4)).unwrap(), g);
    }

    #[test]
    fn permutation_moves_single_edge() {
        // g = {1,2} on n=3, p = (1->3, 2->2, 3->1) => {2,3}
        let g = Graph::from_edges(3, &[(1, 2)]);
        let p = Permutation::new(vec![3, 2, 1]).unwrap();
        let h = apply_permutation(&g, &p).unwrap();
        assert_eq!(h, Graph::from_edges(3, &[(2, 3)]));
    }

    #[test]
    fn permutation_length_mismatch_is_error() {
        let g = Graph::empty(3);
        let p = Permutation::identity(4);
        assert!(matches!(
            apply_permutation(&g, &p),
            Err(GraphError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn matrix_vector_examples() {
        let ord = CellOrder::lex(3);
        let g = Graph::empty(3).to_partial();
        assert_eq!(
            matrix_vector(&g, &ord),
            vec![CellState::Absent, CellState::Absent, CellState::Absent]
        );
        let g = Graph::from_edges(3, &[(1, 2)]).to_partial();
        assert_eq!(
            matrix_vector(&g, &ord),
            vec![CellState::Present, CellState::Absent, CellState::Absent]
        );
        // colex sequence for n=3 is (1,2),(1,3),(2,3)
        let co = CellOrder::colex(3);
        assert_eq!(co.sequence, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(
            matrix_vector(&Graph::from_edges(3, &[(1, 3)]).to_partial(), &co),
            vec![CellState::Absent, CellState::Present, CellState::Absent]
        );
    }

    #[test]
    fn colex_differs_from_lex_at_n4() {
        let lex = CellOrder::lex(4);
        let co = CellOrder::colex(4);
        assert_eq!(lex.sequence[1], (1, 3));
        assert_eq!(co.sequence[1], (1, 3));
        assert_eq!(lex.sequence[2], (1, 4));
        assert_eq!(co.sequence[2], (2, 3));
        let mut s = co.sequence.clone();
        s.sort();
        assert_eq!(s, lex.sequence);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_edge_list("3 1\n2 3\n").unwrap();
        assert_eq!(g, Graph::from_edges(3, &[(2, 3)]));
        let s = emit_edge_list(&g);
        assert_eq!(parse_edge_list(&s).unwrap(), g);
        assert_eq!(emit_edge_list(&parse_edge_list(&s).unwrap()), s);
    }

    #[test]
    fn edge_list_rejects_bad_input() {
        assert!(matches!(
            parse_edge_list("3 1\n3 2\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(parse_edge_list("3 2\n1 2\n1 2\n").is_err());
        assert!(parse_edge_list("3 1\n2 5\n").is_err());
        assert!(parse_edge_list("3 one\n").is_err());
    }

    #[test]
    fn graph6_fixed_values() {
        assert_eq!(emit_graph6(&Graph::empty(1)).unwrap(), "@");
        assert_eq!(emit_graph6(&Graph::from_edges(2, &[(1, 2)])).unwrap(), "A_");
    }

    #[test]
    fn graph6_round_trip_small() {
        for n in 1..=5 {
            let m = cell_count(n);
            for mask in 0u32..(1 << m) {
                let bits: Vec<bool> = (0..m).map(|t| mask & (1 << t) != 0).collect();
                let g = Graph::from_bits(n, bits);
                let s = emit_graph6(&g).unwrap();
                assert_eq!(parse_graph6(&s).unwrap(), g);
            }
        }
    }

    #[test]
    fn extension_is_partial_order() {
        let mut a = PartialGraph::new(3);
        let mut b = PartialGraph::new(3);
        a.set_cell(1, 2, CellState::Present);
        b.set_cell(1, 2, CellState::Present);
        b.set_cell(2, 3, CellState::Absent);
        assert!(a.extends_to(&b));
        assert!(!b.extends_to(&a));
        assert!(a.extends_to(&a));
        // a fully defined graph extends only itself
        let g = Graph::from_edges(3, &[(1, 2)]).to_partial();
        let h = Graph::from_edges(3, &[(1, 3)]).to_partial();
        assert!(g.extends_to(&g));
        assert!(!g.extends_to(&h));
    }
}
