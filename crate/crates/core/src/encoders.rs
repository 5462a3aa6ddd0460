//! Instance generators: the static minimality encoding and the benchmark
//! graph-search families. Every family produces a 2-QBF of the shape
//! ∃X ∀Y (F(X) ∧ ¬H(X,Y)) whose free variables are the edge variables
//! e_i_j for i < j.

use std::collections::HashMap;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, Node, Qbf, Ref};
use crate::graph::{all_pairs, CellOrder, Graph};
use crate::oracle::{self, OracleError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("{family}: parameter k={got} out of range (need {need})")]
    BadParameter {
        family: &'static str,
        got: usize,
        need: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominationVariant {
    ThreeConnected,
    Bipartite,
    Girth6,
}

/// A benchmark family with its parameters (the vertex count is separate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Empty constraint: every graph qualifies.
    None,
    /// Triangle-free graphs, no universal part.
    TriangleFree,
    /// Triangle-free graphs that are not (k-1)-colorable.
    TriangleFreeNonColorable { k: usize, maximal: bool },
    /// K_k-free graphs where every 2-edge-coloring has a mono triangle.
    Folkman { k: usize },
    /// Cubic graphs with domination number above ⌈n/3⌉.
    Domination { variant: DominationVariant },
    /// Graphs of treewidth exactly k.
    TreewidthExact { k: usize },
    /// Cubic girth-≥5 graphs that are not 3-edge-colorable.
    Snark,
    /// Kochen-Specker candidates: square-free, min degree 3, every vertex
    /// on a triangle, 4-colorable, not 010-colorable.
    KochenSpecker,
}

pub fn edge_var_name(i: usize, j: usize) -> String {
    format!("e_{i}_{j}")
}

fn edge_refs(b: &mut CircuitBuilder, n: usize) -> (Vec<String>, HashMap<(usize, usize), Ref>) {
    let mut names = Vec::new();
    let mut refs = HashMap::new();
    for (i, j) in all_pairs(n) {
        let name = edge_var_name(i, j);
        refs.insert((i, j), b.var(&name));
        names.push(name);
    }
    (names, refs)
}

fn eref(e: &HashMap<(usize, usize), Ref>, u: usize, v: usize) -> Ref {
    let key = if u < v { (u, v) } else { (v, u) };
    e[&key]
}

// ---------------------------------------------------------------------------
// circuit-level sequential counters

/// s[i][j] gates with s[i][j] ⟺ at least j+1 of lits[0..=i] are true.
fn counter_gates(b: &mut CircuitBuilder, lits: &[Ref], upto: usize) -> Vec<Vec<Ref>> {
    let n = lits.len();
    let mut s: Vec<Vec<Ref>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(upto);
        for j in 0..upto.min(i + 1) {
            let g = if i == 0 {
                lits[0]
            } else if j == 0 {
                b.or(vec![s[i - 1][0], lits[i]])
            } else if j < s[i - 1].len() {
                let carry = b.and(vec![s[i - 1][j - 1], lits[i]]);
                b.or(vec![s[i - 1][j], carry])
            } else {
                b.and(vec![s[i - 1][j - 1], lits[i]])
            };
            row.push(g);
        }
        s.push(row);
    }
    s
}

/// Gate that is true iff at most k of the literals are true.
pub fn card_le_circuit(b: &mut CircuitBuilder, lits: &[Ref], k: usize) -> Ref {
    if k >= lits.len() {
        return b.true_ref();
    }
    let s = counter_gates(b, lits, k + 1);
    s[lits.len() - 1][k].not()
}

/// Gate that is true iff at least k of the literals are true.
pub fn card_ge_circuit(b: &mut CircuitBuilder, lits: &[Ref], k: usize) -> Ref {
    if k == 0 {
        return b.true_ref();
    }
    if k > lits.len() {
        return b.false_ref();
    }
    let s = counter_gates(b, lits, k);
    s[lits.len() - 1][k - 1]
}

/// Gate that is true iff exactly k of the literals are true.
pub fn card_eq_circuit(b: &mut CircuitBuilder, lits: &[Ref], k: usize) -> Ref {
    let le = card_le_circuit(b, lits, k);
    let ge = card_ge_circuit(b, lits, k);
    b.and(vec![le, ge])
}

// ---------------------------------------------------------------------------
// shared sub-encoders

/// All simple cycles of the given length, each listed once (smallest vertex
/// first, orientation fixed).
fn simple_cycles(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(len);
    fn go(n: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == len {
            // kill the reflection: second vertex below the last
            if path[1] < path[len - 1] {
                out.push(path.clone());
            }
            return;
        }
        for v in (path[0] + 1)..=n {
            if !path.contains(&v) {
                path.push(v);
                go(n, len, path, out);
                path.pop();
            }
        }
    }
    for start in 1..=n {
        path.push(start);
        go(n, len, &mut path, &mut out);
        path.pop();
    }
    out
}

/// Conjuncts forbidding every cycle of the given lengths.
fn forbid_cycles(
    b: &mut CircuitBuilder,
    e: &HashMap<(usize, usize), Ref>,
    n: usize,
    lengths: &[usize],
) -> Vec<Ref> {
    let mut out = Vec::new();
    for &len in lengths {
        for cyc in simple_cycles(n, len) {
            let lits: Vec<Ref> = (0..len)
                .map(|t| eref(e, cyc[t], cyc[(t + 1) % len]).not())
                .collect();
            out.push(b.or(lits));
        }
    }
    out
}

/// Layered-reachability connectedness from vertex 1 over existential
/// variables r_v_t. Returns (variable names, conjuncts).
fn connectedness(
    b: &mut CircuitBuilder,
    e: &HashMap<(usize, usize), Ref>,
    n: usize,
) -> (Vec<String>, Vec<Ref>) {
    let mut names = Vec::new();
    let mut conj = Vec::new();
    if n == 1 {
        return (names, conj);
    }
    let mut r = HashMap::new();
    for v in 1..=n {
        for t in 0..n {
            let name = format!("r_{v}_{t}");
            r.insert((v, t), b.var(&name));
            names.push(name);
        }
    }
    conj.push(r[&(1, 0)]);
    for v in 2..=n {
        conj.push(r[&(v, 0)].not());
    }
    for v in 1..=n {
        for t in 1..n {
            // r_v_t → r_v_(t-1) ∨ ⋁_u (e_u_v ∧ r_u_(t-1))
            let mut kids = vec![r[&(v, t)].not(), r[&(v, t - 1)]];
            for u in 1..=n {
                if u != v {
                    let hop = b.and(vec![eref(e, u, v), r[&(u, t - 1)]]);
                    kids.push(hop);
                }
            }
            conj.push(b.or(kids));
        }
        conj.push(r[&(v, n - 1)]);
    }
    (names, conj)
}

/// Cubicity: every vertex has exactly 3 incident edges.
fn cubic_conjuncts(
    b: &mut CircuitBuilder,
    e: &HashMap<(usize, usize), Ref>,
    n: usize,
) -> Vec<Ref> {
    (1..=n)
        .map(|v| {
            let inc: Vec<Ref> = (1..=n).filter(|&u| u != v).map(|u| eref(e, u, v)).collect();
            card_eq_circuit(b, &inc, 3)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// families

pub fn encode_none(n: usize) -> Qbf {
    let mut b = CircuitBuilder::new();
    let (free, _) = edge_refs(&mut b, n);
    let t = b.true_ref();
    Qbf {
        free,
        exists: vec![],
        forall: vec![],
        matrix: b.finish(t),
    }
}

fn triangle_conjuncts(
    b: &mut CircuitBuilder,
    e: &HashMap<(usize, usize), Ref>,
    n: usize,
) -> Vec<Ref> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            for w in (j + 1)..=n {
                let lits = vec![
                    eref(e, i, j).not(),
                    eref(e, i, w).not(),
                    eref(e, j, w).not(),
                ];
                out.push(b.or(lits));
            }
        }
    }
    out
}

pub fn encode_triangle_free_base(n: usize) -> Qbf {
    let mut b = CircuitBuilder::new();
    let (free, e) = edge_refs(&mut b, n);
    let conj = triangle_conjuncts(&mut b, &e, n);
    let out = b.and(conj);
    Qbf {
        free,
        exists: vec![],
        forall: vec![],
        matrix: b.finish(out),
    }
}

pub fn encode_triangle_free_non_k_colorable(
    n: usize,
    k: usize,
    maximal: bool,
) -> Result<Qbf, EncodeError> {
    if k < 2 {
        return Err(EncodeError::BadParameter {
            family: "triangle-free",
            got: k,
            need: "k >= 2",
        });
    }
    let mut b = CircuitBuilder::new();
    let (free, e) = edge_refs(&mut b, n);
    let mut conj = triangle_conjuncts(&mut b, &e, n);
    if maximal {
        for u in 1..=n {
            for v in (u + 1)..=n {
                let mut kids = vec![eref(&e, u, v)];
                for w in 1..=n {
                    if w != u && w != v {
                        let both = b.and(vec![eref(&e, u, w), eref(&e, v, w)]);
                        kids.push(both);
                    }
                }
                conj.push(b.or(kids));
            }
        }
    }
    // H: c is a proper (k-1)-coloring
    let colors = k - 1;
    let mut forall = Vec::new();
    let mut c = HashMap::new();
    for v in 1..=n {
        for i in 1..=colors {
            let name = format!("c_{v}_{i}");
            c.insert((v, i), b.var(&name));
            forall.push(name);
        }
    }
    let mut h = Vec::new();
    for v in 1..=n {
        let kids: Vec<Ref> = (1..=colors).map(|i| c[&(v, i)]).collect();
        h.push(b.or(kids));
    }
    for u in 1..=n {
        for v in (u + 1)..=n {
            for i in 1..=colors {
                let lits = vec![eref(&e, u, v).not(), c[&(u, i)].not(), c[&(v, i)].not()];
                h.push(b.or(lits));
            }
        }
    }
    let h = b.and(h);
    conj.push(h.not());
    let out = b.and(conj);
    Ok(Qbf {
        free,
        exists: vec![],
        forall,
        matrix: b.finish(out),
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(from: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in from..=n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(1, n, k, &mut cur, &mut out);
    out
}

pub fn encode_folkman(n: usize, k: usize) -> Result<Qbf, EncodeError> {
    if k < 3 {
        return Err(EncodeError::BadParameter {
            family: "folkman",
            got: k,
            need: "k >= 3",
        });
    }
    let mut b = CircuitBuilder::new();
    let (free, e) = edge_refs(&mut b, n);
    let mut conj = Vec::new();
    // F: K_k-free
    for subset in combinations(n, k) {
        let mut lits = Vec::new();
        for a in 0..k {
            for c in (a + 1)..k {
                lits.push(eref(&e, subset[a], subset[c]).not());
            }
        }
        conj.push(b.or(lits));
    }
    // ¬H: some triangle monochromatic under the universal pair coloring y
    let mut forall = Vec::new();
    let mut y = HashMap::new();
    for (i, j) in all_pairs(n) {
        let name = format!("y_{i}_{j}");
        y.insert((i, j), b.var(&name));
        forall.push(name);
    }
    let yref = |y: &HashMap<(usize, usize), Ref>, u: usize, v: usize| -> Ref {
        let key = if u < v { (u, v) } else { (v, u) };
        y[&key]
    };
    let mut mono = Vec::new();
    for t in combinations(n, 3) {
        let (u, v, w) = (t[0], t[1], t[2]);
        let all1 = b.and(vec![yref(&y, u, v), yref(&y, u, w), yref(&y, v, w)]);
        let all0 = b.and(vec![
            yref(&y, u, v).not(),
            yref(&y, u, w).not(),
            yref(&y, v, w).not(),
        ]);
        let same = b.or(vec![all1, all0]);
        mono.push(b.and(vec![
            eref(&e, u, v),
            eref(&e, u, w),
            eref(&e, v, w),
            same,
        ]));
    }
    conj.push(b.or(mono));
    let out = b.and(conj);
    Ok(Qbf {
        free,
        exists: vec![],
        forall,
        matrix: b.finish(out),
    })
}

pub fn encode_domination(n: usize, variant: DominationVariant) -> Qbf {
    let mut b = CircuitBuilder::new();
    let (free, e) = edge_refs(&mut b, n);
    let mut conj = cubic_conjuncts(&mut b, &e, n);
    let mut exists = Vec::new();
    let (rnames, rconj) = connectedness(&mut b, &e, n);
    exists.extend(rnames);
    conj.extend(rconj);
    match variant {
        DominationVariant::ThreeConnected => {
            // connectedness only; 3-connectivity is post-filtered
        }
        DominationVariant::Bipartite => {
            let bi: HashMap<usize, Ref> = (1..=n)
                .map(|v| {
                    let name = format!("b_{v}");
                    let r = b.var(&name);
                    exists.push(name);
                    (v, r)
                })
                .collect();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    let l1 = vec![bi[&u].not(), bi[&v].not(), eref(&e, u, v).not()];
                    conj.push(b.or(l1));
                    let l2 = vec![bi[&u], bi[&v], eref(&e, u, v).not()];
                    conj.push(b.or(l2));
                }
            }
        }
        DominationVariant::Girth6 => {
            conj.extend(forbid_cycles(&mut b, &e, n, &[3, 4, 5]));
        }
    }
    // H: d is a dominating set of size ≤ ⌈n/3⌉
    let mut forall = Vec::new();
    let d: HashMap<usize, Ref> = (1..=n)
        .map(|v| {
            let name = format!("d_{v}");
            let r = b.var(&name);
            forall.push(name);
            (v, r)
        })
        .collect();
    let mut h = Vec::new();
    for v in 1..=n {
        let mut kids = vec![d[&v]];
        for u in 1..=n {
            if u != v {
                let dom = b.and(vec![eref(&e, u, v), d[&u]]);
                kids.push(dom);
            }
        }
        h.push(b.or(kids));
    }
    let dlits: Vec<Ref> = (1..=n).map(|v| d[&v]).collect();
    h.push(card_le_circuit(&mut b, &dlits, n.div_ceil(3)));
    let h = b.and(h);
    conj.push(h.not());
    let out = b.and(conj);
    Qbf {
        free,
        exists,
        forall,
        matrix: b.finish(out),
    }
}

/// Elimination-ordering certificate for treewidth ≤ bound. Returns the
/// auxiliary variable names and the certificate gate.
fn tw_certificate(
    b: &mut CircuitBuilder,
    e: &HashMap<(usize, usize), Ref>,
    n: usize,
    bound: usize,
    ord_prefix: &str,
    arc_prefix: &str,
) -> (Vec<String>, Ref) {
    let mut names = Vec::new();
    let mut o = HashMap::new();
    for (i, j) in all_pairs(n) {
        let name = format!("{ord_prefix}_{i}_{j}");
        o.insert((i, j), b.var(&name));
        names.push(name);
    }
    let mut arc = HashMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                let name = format!("{arc_prefix}_{i}_{j}");
                arc.insert((i, j), b.var(&name));
                names.push(name);
            }
        }
    }
    let ordref = |o: &HashMap<(usize, usize), Ref>, i: usize, j: usize| -> Ref {
        if i < j {
            o[&(i, j)]
        } else {
            o[&(j, i)].not()
        }
    };
    let mut conj = Vec::new();
    // transitivity of the order
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                if i != j && j != l && i != l {
                    let lits = vec![
                        ordref(&o, i, j).not(),
                        ordref(&o, j, l).not(),
                        ordref(&o, i, l),
                    ];
                    conj.push(b.or(lits));
                }
            }
        }
    }
    // edges induce arcs along the order
    for &(i, j) in e.keys() {
        let l1 = vec![e[&(i, j)].not(), ordref(&o, i, j).not(), arc[&(i, j)]];
        conj.push(b.or(l1));
        let l2 = vec![e[&(i, j)].not(), ordref(&o, i, j), arc[&(j, i)]];
        conj.push(b.or(l2));
    }
    // fill-in: common earlier neighbor forces an arc
    for k in 1..=n {
        for i in 1..=n {
            for j in (i + 1)..=n {
                if k == i || k == j {
                    continue;
                }
                let l1 = vec![
                    arc[&(k, i)].not(),
                    arc[&(k, j)].not(),
                    ordref(&o, i, j).not(),
                    arc[&(i, j)],
                ];
                conj.push(b.or(l1));
                let l2 = vec![
                    arc[&(k, i)].not(),
                    arc[&(k, j)].not(),
                    ordref(&o, i, j),
                    arc[&(j, i)],
                ];
                conj.push(b.or(l2));
            }
        }
    }
    // width bound per vertex
    for i in 1..=n {
        let outs: Vec<Ref> = (1..=n).filter(|&j| j != i).map(|j| arc[&(i, j)]).collect();
        conj.push(card_le_circuit(b, &outs, bound));
    }
    let gate = b.and(conj);
    (names, gate)
}

pub fn encode_treewidth_exact(n: usize, k: usize) -> Result<Qbf, EncodeError> {
    if k == 0 || k >= n {
        return Err(EncodeError::BadParameter {
            family: "treewidth",
            got: k,
            need: "1 <= k < n",
        });
    }
    let mut b = CircuitBuilder::new();
    let (free, e) = edge_refs(&mut b, n);
    let (exists, upper) = tw_certificate(&mut b, &e, n, k, "o", "arc");
    let (forall, lower) = tw_certificate(&mut b, &e, n, k - 1, "uo", "uarc");
    let out = b.and(vec![upper, lower.not()]);
    Ok(Qbf {
        free,
        exists,
        forall,
        matrix: b.finish(out),
    })
}

pub fn encode_snark(n: usize) -> Qbf {
    let mut b = CircuitBuilder::new();
    let (free, e) = edge_refs(&mut b, n);
    let mut conj = cubic_conjuncts(&mut b, &e, n);
    conj.extend(forbid_cycles(&mut b, &e, n, &[3, 4]));
    let (exists, rconj) = connectedness(&mut b, &e, n);
    conj.extend(rconj);
    // H: c is a proper 3-edge-coloring over universal pair-color bits
    let mut forall = Vec::new();
    let mut c = HashMap::new();
    for (i, j) in all_pairs(n) {
        for l in 1..=3 {
            let name = format!("c_{i}_{j}_{l}");
            c.insert((i, j, l), b.var(&name));
            forall.push(name);
        }
    }
    let mut h = Vec::new();
    for (i, j) in all_pairs(n) {
        let kids: Vec<Ref> = (1..=3).map(|l| c[&(i, j, l)]).collect();
        h.push(b.or(kids));
    }
    let pairs = all_pairs(n);
    for a in 0..pairs.len() {
        for bb in (a + 1)..pairs.len() {
            let (p, q) = (pairs[a], pairs[bb]);
            let shares = p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1;
            if !shares {
                continue;
            }
            for l in 1..=3 {
                let lits = vec![
                    e[&p].not(),
                    e[&q].not(),
                    c[&(p.0, p.1, l)].not(),
                    c[&(q.0, q.1, l)].not(),
                ];
                h.push(b.or(lits));
            }
        }
    }
    let h = b.and(h);
    conj.push(h.not());
    let out = b.and(conj);
    Qbf {
        free,
        exists,
        forall,
        matrix: b.finish(out),
    }
}

pub fn encode_kochen_specker(n: usize) -> Qbf {
    let mut b = CircuitBuilder::new();
    let (free, e) = edge_refs(&mut b, n);
    let mut conj = forbid_cycles(&mut b, &e, n, &[4]);
    // min degree ≥ 3
    for v in 1..=n {
        let inc: Vec<Ref> = (1..=n).filter(|&u| u != v).map(|u| eref(&e, u, v)).collect();
        conj.push(card_ge_circuit(&mut b, &inc, 3));
    }
    // every vertex on a triangle
    for v in 1..=n {
        let mut kids = Vec::new();
        for u in 1..=n {
            for w in (u + 1)..=n {
                if u != v && w != v {
                    let tri = b.and(vec![eref(&e, v, u), eref(&e, v, w), eref(&e, u, w)]);
                    kids.push(tri);
                }
            }
        }
        conj.push(b.or(kids));
    }
    // existential 4-colorability
    let mut exists = Vec::new();
    let mut col = HashMap::new();
    for v in 1..=n {
        for i in 1..=4 {
            let name = format!("col_{v}_{i}");
            col.insert((v, i), b.var(&name));
            exists.push(name);
        }
    }
    for v in 1..=n {
        let kids: Vec<Ref> = (1..=4).map(|i| col[&(v, i)]).collect();
        conj.push(b.or(kids));
    }
    for u in 1..=n {
        for v in (u + 1)..=n {
            for i in 1..=4 {
                let lits = vec![eref(&e, u, v).not(), col[&(u, i)].not(), col[&(v, i)].not()];
                conj.push(b.or(lits));
            }
        }
    }
    // H: c is a valid 010-coloring (c_v = 1 means colored "1")
    let mut forall = Vec::new();
    let c: HashMap<usize, Ref> = (1..=n)
        .map(|v| {
            let name = format!("c_{v}");
            let r = b.var(&name);
            forall.push(name);
            (v, r)
        })
        .collect();
    let mut h = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            let lits = vec![eref(&e, u, v).not(), c[&u], c[&v]];
            h.push(b.or(lits));
        }
    }
    for t in combinations(n, 3) {
        let (u, v, w) = (t[0], t[1], t[2]);
        let lits = vec![
            eref(&e, u, v).not(),
            eref(&e, u, w).not(),
            eref(&e, v, w).not(),
            c[&u].not(),
            c[&v].not(),
            c[&w].not(),
        ];
        h.push(b.or(lits));
    }
    let h = b.and(h);
    conj.push(h.not());
    let out = b.and(conj);
    Qbf {
        free,
        exists,
        forall,
        matrix: b.finish(out),
    }
}

// ---------------------------------------------------------------------------
// static minimality (Q-static)

fn qstatic_circuit(n: usize, ord: &CellOrder, p_prefix: &str) -> Circuit {
    let mut b = CircuitBuilder::new();
    let (_, e) = edge_refs(&mut b, n);
    let mut p = HashMap::new();
    for i in 1..=n {
        for j in 1..=n {
            p.insert((i, j), b.var(&format!("{p_prefix}_{i}_{j}")));
        }
    }
    // isPerm: total and column-injective, hence a permutation
    let mut is_perm = Vec::new();
    for i in 1..=n {
        let kids: Vec<Ref> = (1..=n).map(|j| p[&(i, j)]).collect();
        is_perm.push(b.or(kids));
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in 1..=n {
                let lits = vec![p[&(i, k)].not(), p[&(j, k)].not()];
                is_perm.push(b.or(lits));
            }
        }
    }
    let is_perm = b.and(is_perm);
    // pe_i_j: the permuted adjacency matrix (both edge orientations)
    let mut pe = HashMap::new();
    for &(i, j) in &ord.sequence {
        let mut kids = Vec::new();
        for (ii, jj) in all_pairs(n) {
            kids.push(b.and(vec![e[&(ii, jj)], p[&(ii, i)], p[&(jj, j)]]));
            kids.push(b.and(vec![e[&(ii, jj)], p[&(ii, j)], p[&(jj, i)]]));
        }
        let g = b.named_or(&format!("pe_{i}_{j}"), kids);
        pe.insert((i, j), g);
    }
    // nonMin: the permuted vector is lexicographically smaller
    let mut prefix = b.true_ref();
    let mut non_min = Vec::new();
    for &(i, j) in &ord.sequence {
        let here = b.and(vec![prefix, e[&(i, j)], pe[&(i, j)].not()]);
        non_min.push(here);
        let leq = b.or(vec![e[&(i, j)], pe[&(i, j)].not()]);
        prefix = b.and(vec![prefix, leq]);
    }
    let non_min = b.or(non_min);
    let bad = b.and(vec![non_min, is_perm]);
    b.finish(bad.not())
}

/// The minimality circuit over the e-vars and universal p-vars: with all
/// p_i_j quantified universally it is true exactly on canonical graphs.
pub fn encode_qstatic_minimality(n: usize, ord: &CellOrder) -> Circuit {
    qstatic_circuit(n, ord, "p")
}

pub fn qstatic_p_vars(n: usize, prefix: &str) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            v.push(format!("{prefix}_{i}_{j}"));
        }
    }
    v
}

/// Copy a circuit's output cone into the builder, interning variables by
/// name. Gate names are dropped.
fn import_circuit(b: &mut CircuitBuilder, c: &Circuit) -> Ref {
    let mut memo: HashMap<u32, Ref> = HashMap::new();
    fn go(b: &mut CircuitBuilder, c: &Circuit, idx: u32, memo: &mut HashMap<u32, Ref>) -> Ref {
        if let Some(&r) = memo.get(&idx) {
            return r;
        }
        let r = match &c.nodes()[idx as usize] {
            Node::Var(v) => b.var(c.var_name(*v)),
            Node::And(cs) | Node::Or(cs) => {
                let is_and = matches!(&c.nodes()[idx as usize], Node::And(_));
                let kids: Vec<Ref> = cs
                    .clone()
                    .iter()
                    .map(|ch| {
                        let r = go(b, c, ch.idx, memo);
                        if ch.neg {
                            r.not()
                        } else {
                            r
                        }
                    })
                    .collect();
                if is_and {
                    b.and(kids)
                } else {
                    b.or(kids)
                }
            }
        };
        memo.insert(idx, r);
        r
    }
    let out = go(b, c, c.output().idx, &mut memo);
    if c.output().neg {
        out.not()
    } else {
        out
    }
}

/// Conjoin the minimality circuit to the matrix and add its p-vars to the
/// universal block. The p prefix is renamed if it would clash.
pub fn augment_with_qstatic(q: &Qbf, ord: &CellOrder) -> Qbf {
    let n = {
        // recover n from the number of edge variables
        let m = q.free.len();
        (1..).find(|&n| n * (n - 1) / 2 == m).unwrap()
    };
    let mut prefix = "p".to_string();
    let taken: Vec<&String> = q
        .free
        .iter()
        .chain(&q.exists)
        .chain(&q.forall)
        .collect();
    let mut counter = 2;
    while qstatic_p_vars(n, &prefix)
        .iter()
        .any(|v| taken.contains(&v))
    {
        prefix = format!("p{counter}");
        counter += 1;
    }
    let minim = qstatic_circuit(n, ord, &prefix);
    let mut b = CircuitBuilder::new();
    let base = import_circuit(&mut b, &q.matrix);
    let min = import_circuit(&mut b, &minim);
    let out = b.and(vec![base, min]);
    let mut forall = q.forall.clone();
    forall.extend(qstatic_p_vars(n, &prefix));
    Qbf {
        free: q.free.clone(),
        exists: q.exists.clone(),
        forall,
        matrix: b.finish(out),
    }
}

// ---------------------------------------------------------------------------
// dispatch and post-filters

pub fn encode_family(family: &Family, n: usize) -> Result<Qbf, EncodeError> {
    Ok(match family {
        Family::None => encode_none(n),
        Family::TriangleFree => encode_triangle_free_base(n),
        Family::TriangleFreeNonColorable { k, maximal } => {
            encode_triangle_free_non_k_colorable(n, *k, *maximal)?
        }
        Family::Folkman { k } => encode_folkman(n, *k)?,
        Family::Domination { variant } => encode_domination(n, *variant),
        Family::TreewidthExact { k } => encode_treewidth_exact(n, *k)?,
        Family::Snark => encode_snark(n),
        Family::KochenSpecker => encode_kochen_specker(n),
    })
}

fn contract_edge(g: &Graph, u: usize, v: usize) -> Graph {
    // merge v into u, drop v, relabel the tail down by one
    let n = g.n();
    let map = |w: usize| -> usize {
        if w == v {
            u
        } else if w > v {
            w - 1
        } else {
            w
        }
    };
    let mut h = Graph::empty(n - 1);
    for (a, bb) in g.edges() {
        let (x, y) = (map(a), map(bb));
        if x != y {
            h.set_edge(x, y, true);
        }
    }
    h
}

fn delete_edge(g: &Graph, u: usize, v: usize) -> Graph {
    let mut h = g.clone();
    h.set_edge(u, v, false);
    h
}

fn delete_vertex(g: &Graph, v: usize) -> Graph {
    let n = g.n();
    let map = |w: usize| -> usize { if w > v { w - 1 } else { w } };
    let mut h = Graph::empty(n - 1);
    for (a, bb) in g.edges() {
        if a != v && bb != v {
            h.set_edge(map(a), map(bb), true);
        }
    }
    h
}

/// Keep only treewidth-critical graphs: every proper minor one operation
/// away (edge deletion, edge contraction, vertex deletion) lowers the
/// treewidth. By minor-monotonicity the vertex check only matters for
/// isolated vertices.
pub fn filter_treewidth_critical(graphs: &[Graph]) -> Result<Vec<Graph>, OracleError> {
    let mut out = Vec::new();
    for g in graphs {
        let k = oracle::treewidth(g)?;
        let mut critical = true;
        for (u, v) in g.edges() {
            if oracle::treewidth(&delete_edge(g, u, v))? >= k {
                critical = false;
                break;
            }
            if oracle::treewidth(&contract_edge(g, u, v))? >= k {
                critical = false;
                break;
            }
        }
        if critical && g.n() > 1 {
            for v in 1..=g.n() {
                if oracle::treewidth(&delete_vertex(g, v))? >= k {
                    critical = false;
                    break;
                }
            }
        }
        if critical {
            out.push(g.clone());
        }
    }
    Ok(out)
}
