//! CEGAR 2-QBF engine with dynamic symmetry breaking and enumeration.
//!
//! Two incremental SAT instances: the first holds the existential
//! abstraction, the second the negated matrix. Candidate assignments from
//! the first are checked against the second under assumptions; each
//! counterexample refines the abstraction with the instantiated matrix.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::circuit::{
    simplify, substitute, Assignment, Circuit, CircuitBuilder, CircuitError, Node, Qbf, Ref,
};
use crate::encoders::Family;
use crate::graph::{CellOrder, CellState, PartialGraph};
use crate::sat::{Admissibility, Lit, SolveResult, SolverInstance, TseitinContext, Var};
use crate::symmetry::{check_partial, violation_to_clause, MinimalityVerdict};

#[derive(Debug, Error)]
pub enum CegarError {
    #[error("invalid quantifier structure: {0}")]
    BadQbf(#[from] CircuitError),
    #[error("free variable {0} is not an edge variable")]
    NonEdgeFreeVar(String),
    #[error("counterexample does not assign universal variable {0}")]
    PartialCounterexample(String),
    #[error("family has no coloring-style universal part")]
    NotColoringFamily,
}

#[derive(Debug, Default, Clone)]
pub struct CegarStats {
    pub iterations: u64,
    pub refinements: u64,
    pub sms_rejections: u64,
    pub first_conflicts: u64,
    pub second_conflicts: u64,
}

/// Outcome of a single 2-QBF decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QbfOutcome {
    /// The formula is true; the witness assigns the free and existential
    /// variables.
    True(Assignment),
    False,
}

pub struct CegarState {
    first: SolverInstance,
    second: SolverInstance,
    ctx1: TseitinContext,
    ctx2: TseitinContext,
    free: Vec<String>,
    exists: Vec<String>,
    forall: Vec<String>,
    rest_matrix: Circuit,
    iterations: u64,
    refinements: u64,
}

fn parse_edge_var(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix("e_")?;
    let (i, j) = rest.split_once('_')?;
    let i: usize = i.parse().ok()?;
    let j: usize = j.parse().ok()?;
    if i >= 1 && i < j { Some((i, j)) } else { None }
}

/// Copy the cone of `root` into a fresh circuit, interning variables by name.
fn extract_cone(c: &Circuit, root: Ref) -> Circuit {
    let mut b = CircuitBuilder::new();
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
                        if ch.neg { r.not() } else { r }
                    })
                    .collect();
                if is_and { b.and(kids) } else { b.or(kids) }
            }
        };
        memo.insert(idx, r);
        r
    }
    let out = go(&mut b, c, root.idx, &mut memo);
    b.finish(if root.neg { out.not() } else { out })
}

fn cone_var_names(c: &Circuit, root: Ref) -> HashSet<String> {
    let mut seen = HashSet::new();
    let mut out = HashSet::new();
    let mut stack = vec![root.idx];
    while let Some(idx) = stack.pop() {
        if !seen.insert(idx) {
            continue;
        }
        match &c.nodes()[idx as usize] {
            Node::Var(v) => {
                out.insert(c.var_name(*v).to_string());
            }
            Node::And(cs) | Node::Or(cs) => stack.extend(cs.iter().map(|r| r.idx)),
        }
    }
    out
}

/// Split off the top-level conjuncts that mention no universal variable.
/// They can be loaded into the abstraction once and skipped during
/// refinement. The rest keeps the original quantifier blocks.
pub fn strip_existential_conjuncts(q: &Qbf) -> (Vec<Circuit>, Qbf) {
    let universal: HashSet<&String> = q.forall.iter().collect();
    let mut f_parts = Vec::new();
    let mut rest_refs = Vec::new();
    for r in q.matrix.top_conjuncts() {
        let vars = cone_var_names(&q.matrix, Ref { idx: r.idx, neg: false });
        if vars.iter().any(|v| universal.contains(v)) {
            rest_refs.push(r);
        } else {
            f_parts.push(extract_cone(&q.matrix, r));
        }
    }
    // rebuild the remaining conjunction in a fresh circuit
    let mut b = CircuitBuilder::new();
    for v in q.free.iter().chain(&q.exists).chain(&q.forall) {
        b.declare(v);
    }
    let kids: Vec<Ref> = rest_refs
        .iter()
        .map(|r| {
            let cone = extract_cone(&q.matrix, *r);
            let mut memo = HashMap::new();
            fn imp(
                b: &mut CircuitBuilder,
                c: &Circuit,
                idx: u32,
                memo: &mut HashMap<u32, Ref>,
            ) -> Ref {
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
                                let r = imp(b, c, ch.idx, memo);
                                if ch.neg { r.not() } else { r }
                            })
                            .collect();
                        if is_and { b.and(kids) } else { b.or(kids) }
                    }
                };
                memo.insert(idx, r);
                r
            }
            let out = imp(&mut b, &cone, cone.output().idx, &mut memo);
            if cone.output().neg { out.not() } else { out }
        })
        .collect();
    let out = b.and(kids);
    let rest = Qbf {
        free: q.free.clone(),
        exists: q.exists.clone(),
        forall: q.forall.clone(),
        matrix: b.finish(out),
    };
    (f_parts, rest)
}

fn negated(c: &Circuit) -> Circuit {
    let mut b = CircuitBuilder::new();
    let copy = extract_cone(c, c.output());
    // extract_cone already rebuilds; flip its output
    let out = {
        let mut memo = HashMap::new();
        fn imp(b: &mut CircuitBuilder, c: &Circuit, idx: u32, memo: &mut HashMap<u32, Ref>) -> Ref {
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
                            let r = imp(b, c, ch.idx, memo);
                            if ch.neg { r.not() } else { r }
                        })
                        .collect();
                    if is_and { b.and(kids) } else { b.or(kids) }
                }
            };
            memo.insert(idx, r);
            r
        }
        let o = imp(&mut b, &copy, copy.output().idx, &mut memo);
        if copy.output().neg { o.not() } else { o }
    };
    b.finish(out.not())
}

impl CegarState {
    /// Build the two solver instances. The first is seeded with the matrix
    /// instantiated at Y→0; the second holds the negated matrix. With `sms`
    /// on, a canonicity callback over the e_i_j variables is attached to
    /// the first solver.
    pub fn init(q: &Qbf, sms: bool, order: &CellOrder) -> Result<CegarState, CegarError> {
        q.validate()?;
        if sms {
            for v in &q.free {
                if parse_edge_var(v).is_none() {
                    return Err(CegarError::NonEdgeFreeVar(v.clone()));
                }
            }
        }
        let (f_parts, rest) = strip_existential_conjuncts(q);
        let mut first = SolverInstance::new();
        let mut ctx1 = TseitinContext::new();
        // intern the candidate variables up front so witnesses and blocking
        // clauses are total even when simplification drops them
        for v in q.free.iter().chain(&q.exists) {
            ctx1.var(v, &mut first);
        }
        for f in &f_parts {
            ctx1.assert_circuit(f, &mut first);
        }
        let y0: Assignment = q.forall.iter().map(|v| (v.clone(), false)).collect();
        let seeded = simplify(&substitute(&rest.matrix, &y0));
        ctx1.assert_circuit(&seeded, &mut first);
        let mut second = SolverInstance::new();
        let mut ctx2 = TseitinContext::new();
        for v in q.free.iter().chain(&q.exists).chain(&q.forall) {
            ctx2.var(v, &mut second);
        }
        let neg = negated(&q.matrix);
        ctx2.assert_circuit(&neg, &mut second);
        if sms {
            let mut cells: Vec<((usize, usize), Var)> = Vec::new();
            let mut n = 1usize;
            for v in &q.free {
                let (i, j) = parse_edge_var(v).expect("checked above");
                n = n.max(j);
                cells.push(((i, j), ctx1.lookup(v).expect("interned above")));
            }
            let by_cell: HashMap<(usize, usize), Var> = cells.iter().copied().collect();
            let ord = order.clone();
            first.set_admissibility_callback(Box::new(move |model: &[bool]| {
                let mut pg = PartialGraph::new(n);
                for &((i, j), var) in &cells {
                    let st = if model[var as usize] {
                        CellState::Present
                    } else {
                        CellState::Absent
                    };
                    pg.set_cell(i, j, st);
                }
                match check_partial(&pg, &ord) {
                    MinimalityVerdict::Canonical => Admissibility::Accept,
                    MinimalityVerdict::Violation(v) => Admissibility::Reject(
                        violation_to_clause(&v, |cell, pos| Lit::new(by_cell[&cell], pos)),
                    ),
                }
            }));
        }
        Ok(CegarState {
            first,
            second,
            ctx1,
            ctx2,
            free: q.free.clone(),
            exists: q.exists.clone(),
            forall: q.forall.clone(),
            rest_matrix: rest.matrix,
            iterations: 0,
            refinements: 0,
        })
    }

    pub fn stats(&self) -> CegarStats {
        CegarStats {
            iterations: self.iterations,
            refinements: self.refinements,
            sms_rejections: self.first.stats.callback_rejections,
            first_conflicts: self.first.stats.conflicts,
            second_conflicts: self.second.stats.conflicts,
        }
    }

    /// Decide the 2-QBF: propose candidates from the abstraction, look for
    /// counterexamples, refine until either side gives up.
    pub fn solve_2qbf(&mut self) -> QbfOutcome {
        loop {
            self.iterations += 1;
            let model = match self.first.solve(&[]) {
                SolveResult::Unsat => return QbfOutcome::False,
                SolveResult::Sat(m) => m,
            };
            let alpha = self.ctx1.model_assignment(&model);
            let assumptions: Vec<Lit> = self
                .free
                .iter()
                .chain(&self.exists)
                .map(|v| {
                    let var = self.ctx2.lookup(v).expect("interned at init");
                    Lit::new(var, alpha[v])
                })
                .collect();
            let counter = match self.second.solve(&assumptions) {
                SolveResult::Unsat => {
                    let witness: Assignment = self
                        .free
                        .iter()
                        .chain(&self.exists)
                        .map(|v| (v.clone(), alpha[v]))
                        .collect();
                    return QbfOutcome::True(witness);
                }
                SolveResult::Sat(m) => m,
            };
            let beta = self.ctx2.model_assignment(&counter);
            let beta_y: Assignment = self
                .forall
                .iter()
                .map(|v| (v.clone(), beta[v]))
                .collect();
            let inst = simplify(&substitute(&self.rest_matrix, &beta_y));
            self.ctx1.assert_circuit(&inst, &mut self.first);
            self.refinements += 1;
        }
    }

    /// Enumerate satisfying assignments of the free variables. Returns the
    /// solutions found and whether the stream is complete (false when the
    /// limit cut it off).
    pub fn enumerate(&mut self, limit: Option<usize>) -> (Vec<Assignment>, bool) {
        let mut out = Vec::new();
        loop {
            if let Some(l) = limit {
                if out.len() >= l {
                    // check whether anything else is left
                    return match self.solve_2qbf() {
                        QbfOutcome::False => (out, true),
                        QbfOutcome::True(_) => (out, false),
                    };
                }
            }
            match self.solve_2qbf() {
                QbfOutcome::False => return (out, true),
                QbfOutcome::True(w) => {
                    let solution: Assignment = self
                        .free
                        .iter()
                        .map(|v| (v.clone(), w[v]))
                        .collect();
                    let block: Vec<Lit> = self
                        .free
                        .iter()
                        .map(|v| {
                            let var = self.ctx1.lookup(v).expect("interned at init");
                            Lit::new(var, !solution[v])
                        })
                        .collect();
                    self.first.add_clause(&block);
                    out.push(solution);
                }
            }
        }
    }
}

/// The co-certificate-learning specialization: for the coloring families,
/// instantiating ¬H at a proper-coloring counterexample collapses to the
/// single clause "some edge joins two equally colored vertices". Returns
/// that clause as positive e_u_v literal names.
pub fn ccl_refinement_view(
    family: &Family,
    n: usize,
    beta: &Assignment,
) -> Result<Vec<String>, CegarError> {
    let colors = match family {
        Family::TriangleFreeNonColorable { k, .. } => *k - 1,
        _ => return Err(CegarError::NotColoringFamily),
    };
    let color_bit = |v: usize, i: usize| -> Result<bool, CegarError> {
        let name = format!("c_{v}_{i}");
        beta.get(&name)
            .copied()
            .ok_or(CegarError::PartialCounterexample(name))
    };
    let mut clause = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            let mut shared = false;
            for i in 1..=colors {
                if color_bit(u, i)? && color_bit(v, i)? {
                    shared = true;
                }
            }
            if shared {
                clause.push(crate::encoders::edge_var_name(u, v));
            }
        }
    }
    Ok(clause)
}
