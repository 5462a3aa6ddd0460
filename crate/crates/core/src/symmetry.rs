//! Canonicity (lexicographic minimality) checks and symmetry-breaking
//! clause extraction.
//!
//! A graph is canonical when no vertex permutation yields a lexicographically
//! smaller upper-triangle cell vector. The checks search over partial vertex
//! maps depth-first and abandon a branch as soon as the permuted prefix is
//! strictly larger than the original.

use crate::graph::{
    apply_permutation, matrix_vector, CellOrder, CellState, Graph, PartialGraph, Permutation,
};
use std::collections::BTreeMap;

/// Outcome of a minimality check on a (partially defined) graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalityVerdict {
    Canonical,
    Violation(Violation),
}

/// A certificate that no graph consistent with `consulted` is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Permutation whose application makes the matrix vector strictly smaller.
    pub witness: Permutation,
    /// (cell, required state) pairs sufficient to certify non-minimality of
    /// every extension. Only defined cells of the input appear here.
    pub consulted: Vec<((usize, usize), CellState)>,
}

enum Outcome {
    Found(Violation),
    Dead,
    Capped,
}

struct Search<'a> {
    g: &'a PartialGraph,
    ord: &'a CellOrder,
    n: usize,
    /// q[i-1] = preimage of vertex i under the candidate permutation
    /// (permuted cell (i,j) reads the input at (q(i),q(j))).
    q: Vec<usize>,
    used: Vec<bool>,
    pins: Vec<((usize, usize), CellState)>,
    nodes: u64,
    cap: Option<u64>,
}

#[inline]
fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl<'a> Search<'a> {
    fn new(g: &'a PartialGraph, ord: &'a CellOrder, cap: Option<u64>) -> Self {
        let n = g.n();
        Search {
            g,
            ord,
            n,
            q: vec![0; n],
            used: vec![false; n + 1],
            pins: Vec::new(),
            nodes: 0,
            cap,
        }
    }

    fn build_violation(&self, final_pins: [((usize, usize), CellState); 2]) -> Violation {
        let mut set: BTreeMap<(usize, usize), CellState> = BTreeMap::new();
        for &(cell, st) in self.pins.iter().chain(final_pins.iter()) {
            set.insert(cell, st);
        }
        // extend q to a full bijection, remaining values in increasing order
        let mut q = self.q.clone();
        let mut used = self.used.clone();
        let mut next = 1;
        for slot in q.iter_mut() {
            if *slot == 0 {
                while used[next] {
                    next += 1;
                }
                *slot = next;
                used[next] = true;
            }
        }
        let witness = Permutation::new(q).expect("search maintains a bijection").inverse();
        Violation {
            witness,
            consulted: set.into_iter().collect(),
        }
    }

    /// `assigned` vertices 1..=assigned have q-values; resume comparison at
    /// position `start` of the cell sequence.
    fn dfs(&mut self, assigned: usize, start: usize) -> Outcome {
        self.nodes += 1;
        if let Some(cap) = self.cap {
            if self.nodes > cap {
                return Outcome::Capped;
            }
        }
        let mark = self.pins.len();
        let seq = &self.ord.sequence;
        let mut t = start;
        while t < seq.len() {
            let (i, j) = seq[t];
            if i > assigned || j > assigned {
                break;
            }
            let pre = norm(self.q[i - 1], self.q[j - 1]);
            if pre == (i, j) {
                t += 1;
                continue;
            }
            let a = self.g.cell(i, j);
            let b = self.g.cell(pre.0, pre.1);
            if a == CellState::Undefined || b == CellState::Undefined {
                // comparison chain broken for every extension of this branch
                self.pins.truncate(mark);
                return Outcome::Dead;
            }
            match (a, b) {
                (CellState::Present, CellState::Absent) => {
                    let v = self.build_violation([((i, j), CellState::Present), (pre, CellState::Absent)]);
                    self.pins.truncate(mark);
                    return Outcome::Found(v);
                }
                (CellState::Absent, CellState::Present) => {
                    // permuted prefix strictly larger: abandon this branch
                    self.pins.truncate(mark);
                    return Outcome::Dead;
                }
                (CellState::Present, CellState::Present) => {
                    self.pins.push(((i, j), CellState::Present));
                }
                (CellState::Absent, CellState::Absent) => {
                    self.pins.push((pre, CellState::Absent));
                }
                _ => unreachable!(),
            }
            t += 1;
        }
        if t == seq.len() {
            // entire vectors equal under this permutation
            self.pins.truncate(mark);
            return Outcome::Dead;
        }
        // need a deeper partial map; candidates in increasing vertex index
        for cand in 1..=self.n {
            if self.used[cand] {
                continue;
            }
            self.q[assigned] = cand;
            self.used[cand] = true;
            let out = self.dfs(assigned + 1, t);
            self.q[assigned] = 0;
            self.used[cand] = false;
            match out {
                Outcome::Dead => continue,
                other => {
                    self.pins.truncate(mark);
                    return other;
                }
            }
        }
        self.pins.truncate(mark);
        Outcome::Dead
    }
}

/// Minimality check on a partially defined graph. Sound always; complete when
/// the input is fully defined. A node cap, when hit, yields `Canonical`.
pub fn check_partial_capped(
    g: &PartialGraph,
    ord: &CellOrder,
    cap: Option<u64>,
) -> MinimalityVerdict {
    let mut s = Search::new(g, ord, cap);
    match s.dfs(0, 0) {
        Outcome::Found(v) => MinimalityVerdict::Violation(v),
        Outcome::Dead | Outcome::Capped => MinimalityVerdict::Canonical,
    }
}

pub fn check_partial(g: &PartialGraph, ord: &CellOrder) -> MinimalityVerdict {
    check_partial_capped(g, ord, None)
}

/// True iff no permutation produces a strictly smaller cell vector.
pub fn is_canonical(g: &Graph, ord: &CellOrder) -> bool {
    matches!(check_partial(&g.to_partial(), ord), MinimalityVerdict::Canonical)
}

/// The isomorphic copy with the lexicographically smallest cell vector.
pub fn canonical_form(g: &Graph, ord: &CellOrder) -> Graph {
    let n = g.n();
    let part = g.to_partial();
    let mut best: Vec<bool> = matrix_vector(&part, ord)
        .into_iter()
        .map(|c| c == CellState::Present)
        .collect();
    let mut best_q: Vec<usize> = (1..=n).collect();
    let mut q = vec![0usize; n];
    let mut used = vec![false; n + 1];
    bb(g, ord, &mut q, &mut used, 0, &mut best, &mut best_q);
    let inv = Permutation::new(best_q).unwrap().inverse();
    apply_permutation(g, &inv).unwrap()
}

/// Branch and bound over q-prefixes: prune when the decided prefix of the
/// candidate vector already exceeds the best one.
fn bb(
    g: &Graph,
    ord: &CellOrder,
    q: &mut Vec<usize>,
    used: &mut Vec<bool>,
    assigned: usize,
    best: &mut Vec<bool>,
    best_q: &mut Vec<usize>,
) {
    let n = g.n();
    // compare the decided prefix against best
    let mut strictly_smaller = false;
    for (t, &(i, j)) in ord.sequence.iter().enumerate() {
        if i > assigned || j > assigned {
            break;
        }
        let v = g.edge(q[i - 1], q[j - 1]);
        if v != best[t] {
            if v {
                return; // candidate prefix larger
            }
            strictly_smaller = true;
            break;
        }
    }
    if assigned == n {
        if strictly_smaller {
            *best = ord
                .sequence
                .iter()
                .map(|&(i, j)| g.edge(q[i - 1], q[j - 1]))
                .collect();
            *best_q = q.clone();
        }
        return;
    }
    for cand in 1..=n {
        if used[cand] {
            continue;
        }
        q[assigned] = cand;
        used[cand] = true;
        bb(g, ord, q, used, assigned + 1, best, best_q);
        q[assigned] = 0;
        used[cand] = false;
    }
}

/// Translate a violation into clause literals: Present cell -> negative edge
/// literal, Absent cell -> positive edge literal. `lit` maps a cell and a
/// polarity (true = positive) to the caller's literal type.
pub fn violation_to_clause<L>(v: &Violation, mut lit: impl FnMut((usize, usize), bool) -> L) -> Vec<L> {
    v.consulted
        .iter()
        .map(|&(cell, st)| match st {
            CellState::Present => lit(cell, false),
            CellState::Absent => lit(cell, true),
            CellState::Undefined => unreachable!("violations never consult undefined cells"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs, cell_count, Graph};

    fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
        let m = cell_count(n);
        (0u64..(1 << m)).map(move |mask| {
            Graph::from_bits(n, (0..m).map(|t| mask & (1 << t) != 0).collect())
        })
    }

    fn perms(n: usize) -> Vec<Permutation> {
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation::new(cur.clone()).unwrap());
                return;
            }
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
        out
    }

    fn brute_canonical(g: &Graph, ord: &CellOrder) -> bool {
        let base: Vec<CellState> = matrix_vector(&g.to_partial(), ord);
        let key = |v: &[CellState]| -> Vec<u8> {
            v.iter().map(|c| (*c == CellState::Present) as u8).collect()
        };
        perms(g.n()).iter().all(|p| {
            let h = apply_permutation(g, p).unwrap();
            key(&base) <= key(&matrix_vector(&h.to_partial(), ord))
        })
    }

    #[test]
    fn empty_graph_is_canonical() {
        for n in 1..=6 {
            assert!(is_canonical(&Graph::empty(n), &CellOrder::lex(n)));
        }
    }

    #[test]
    fn single_edge_examples_n3() {
        let ord = CellOrder::lex(3);
        assert!(is_canonical(&Graph::from_edges(3, &[(2, 3)]), &ord));
        assert!(!is_canonical(&Graph::from_edges(3, &[(1, 2)]), &ord));
    }

    #[test]
    fn agrees_with_brute_force_up_to_n5() {
        for n in 2..=5 {
            for ord in [CellOrder::lex(n), CellOrder::colex(n)] {
                for g in all_graphs(n) {
                    assert_eq!(is_canonical(&g, &ord), brute_canonical(&g, &ord), "{g:?}");
                }
            }
        }
    }

    #[test]
    fn check_partial_agrees_with_is_canonical_on_total_inputs() {
        for n in 2..=5 {
            let ord = CellOrder::lex(n);
            for g in all_graphs(n) {
                let verdict = check_partial(&g.to_partial(), &ord);
                assert_eq!(
                    matches!(verdict, MinimalityVerdict::Canonical),
                    is_canonical(&g, &ord)
                );
            }
        }
    }

    #[test]
    fn fully_undefined_is_canonical() {
        let g = PartialGraph::new(4);
        assert_eq!(check_partial(&g, &CellOrder::lex(4)), MinimalityVerdict::Canonical);
    }

    #[test]
    fn partial_violation_example_n3() {
        // (1,2)=Present, (2,3)=Absent, (1,3) undefined: every extension is
        // non-canonical via the permutation swapping vertices 1 and 3.
        let mut g = PartialGraph::new(3);
        g.set_cell(1, 2, CellState::Present);
        g.set_cell(2, 3, CellState::Absent);
        let v = match check_partial(&g, &CellOrder::lex(3)) {
            MinimalityVerdict::Violation(v) => v,
            MinimalityVerdict::Canonical => panic!("expected violation"),
        };
        assert_eq!(
            v.consulted,
            vec![((1, 2), CellState::Present), ((2, 3), CellState::Absent)]
        );
        // the clause is (-e_1_2 \/ e_2_3)
        let clause = violation_to_clause(&v, |cell, pos| (cell, pos));
        assert_eq!(clause, vec![((1, 2), false), ((2, 3), true)]);
        // both extensions are indeed non-canonical
        for st in [CellState::Present, CellState::Absent] {
            let mut h = g.clone();
            h.set_cell(1, 3, st);
            assert!(!is_canonical(&h.to_graph().unwrap(), &CellOrder::lex(3)));
        }
    }

    #[test]
    fn violations_are_sound_on_partial_inputs() {
        // random-ish sweep over all partial graphs at n=4 with <=2 undefined
        let n = 4;
        let ord = CellOrder::lex(n);
        let m = cell_count(n);
        for mask in 0u32..3u32.pow(m as u32) {
            let mut g = PartialGraph::new(n);
            let mut x = mask;
            let mut undef = 0;
            for (i, j) in all_pairs(n) {
                let s = match x % 3 {
                    0 => CellState::Absent,
                    1 => CellState::Present,
                    _ => {
                        undef += 1;
                        CellState::Undefined
                    }
                };
                g.set_cell(i, j, s);
                x /= 3;
            }
            if undef > 2 {
                continue;
            }
            if let MinimalityVerdict::Violation(v) = check_partial(&g, &ord) {
                // no consulted cell is undefined in the input
                for &((i, j), st) in &v.consulted {
                    assert_eq!(g.cell(i, j), st);
                }
                // every total graph consistent with the consulted cells is
                // non-canonical
                for h in all_graphs(n) {
                    if v.consulted.iter().all(|&((i, j), st)| {
                        (h.edge(i, j) && st == CellState::Present)
                            || (!h.edge(i, j) && st == CellState::Absent)
                    }) {
                        assert!(!is_canonical(&h, &ord));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_form_properties() {
        let ord = CellOrder::lex(4);
        for g in all_graphs(4) {
            let c = canonical_form(&g, &ord);
            assert!(is_canonical(&c, &ord));
            for p in perms(4) {
                let h = apply_permutation(&g, &p).unwrap();
                assert_eq!(canonical_form(&h, &ord), c);
            }
            if is_canonical(&g, &ord) {
                assert_eq!(c, g);
            }
        }
    }

    #[test]
    fn canonical_form_of_path4() {
        let ord = CellOrder::lex(4);
        let path = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]);
        let c = canonical_form(&path, &ord);
        // minimum over all 24 permutations
        let mut best: Option<Graph> = None;
        for p in perms(4) {
            let h = apply_permutation(&path, &p).unwrap();
            let hb = h.bits().to_vec();
            if best.is_none() || hb < best.as_ref().unwrap().bits().to_vec() {
                best = Some(h);
            }
        }
        assert_eq!(c, best.unwrap());
    }

    #[test]
    fn representative_counts_small_n() {
        // exactly one canonical member per isomorphism class
        let expected = [1usize, 2, 4, 11, 34];
        for (idx, &want) in expected.iter().enumerate() {
            let n = idx + 1;
            let ord = CellOrder::lex(n);
            let count = all_graphs(n).filter(|g| is_canonical(g, &ord)).count();
            assert_eq!(count, want, "n={n}");
        }
    }

    #[test]
    fn lex_and_colex_canonical_sets_have_equal_cardinality() {
        for n in 1..=5 {
            let lex = CellOrder::lex(n);
            let co = CellOrder::colex(n);
            let a = all_graphs(n).filter(|g| is_canonical(g, &lex)).count();
            let b = all_graphs(n).filter(|g| is_canonical(g, &co)).count();
            assert_eq!(a, b, "n={n}");
        }
    }

    #[test]
    fn node_cap_returns_canonical() {
        let g = Graph::from_edges(3, &[(1, 2)]);
        // with an absurdly small cap the check gives up (soundly)
        assert_eq!(
            check_partial_capped(&g.to_partial(), &CellOrder::lex(3), Some(1)),
            MinimalityVerdict::Canonical
        );
    }
}
