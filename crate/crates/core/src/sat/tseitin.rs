//! Tseitin translation of and/or circuits into an incremental solver, with
//! structural hashing so re-encoding shared structure adds no new clauses.

use std::collections::HashMap;

use crate::circuit::{Assignment, Circuit, Node, Ref};

use super::solver::{Lit, SolverInstance, Var};

/// Persistent state of the translation: the name-to-variable map and the
/// gate cache, both shared across incremental encoding calls against the
/// same solver.
#[derive(Debug, Default)]
pub struct TseitinContext {
    names: HashMap<String, Var>,
    /// (is_and, sorted signed child keys) -> gate literal
    gates: HashMap<(bool, Vec<i64>), Lit>,
    const_true: Option<Lit>,
}

impl TseitinContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// The solver variable for a named circuit input, created on first use.
    pub fn var(&mut self, name: &str, solver: &mut SolverInstance) -> Var {
        if let Some(&v) = self.names.get(name) {
            return v;
        }
        let v = solver.new_var();
        self.names.insert(name.to_string(), v);
        v
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.names.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = (&str, Var)> {
        self.names.iter().map(|(n, &v)| (n.as_str(), v))
    }

    /// Read the named inputs back out of a solver model.
    pub fn model_assignment(&self, model: &[bool]) -> Assignment {
        self.names
            .iter()
            .map(|(n, &v)| (n.clone(), model[v as usize]))
            .collect()
    }

    fn true_lit(&mut self, solver: &mut SolverInstance) -> Lit {
        if let Some(t) = self.const_true {
            return t;
        }
        let t = Lit::pos(solver.new_var());
        solver.add_clause(&[t]);
        self.const_true = Some(t);
        t
    }

    /// A gate literal for the given operator and child literals, reused when
    /// the same gate was built before.
    fn gate(&mut self, solver: &mut SolverInstance, is_and: bool, kids: &[Lit]) -> Lit {
        let mut keys: Vec<i64> = kids.iter().map(|l| l.to_dimacs()).collect();
        keys.sort();
        keys.dedup();
        // complementary children collapse the gate to a constant
        let contradictory = keys
            .windows(2)
            .any(|w| w[0] == -w[1]);
        if contradictory {
            let t = self.true_lit(solver);
            return if is_and { t.negate() } else { t };
        }
        if keys.is_empty() {
            let t = self.true_lit(solver);
            return if is_and { t } else { t.negate() };
        }
        if keys.len() == 1 {
            return lit_from_dimacs(keys[0]);
        }
        if let Some(&g) = self.gates.get(&(is_and, keys.clone())) {
            return g;
        }
        let g = Lit::pos(solver.new_var());
        let kids: Vec<Lit> = keys.iter().map(|&k| lit_from_dimacs(k)).collect();
        if is_and {
            let mut long: Vec<Lit> = vec![g];
            for &l in &kids {
                solver.add_clause(&[g.negate(), l]);
                long.push(l.negate());
            }
            solver.add_clause(&long);
        } else {
            let mut long: Vec<Lit> = vec![g.negate()];
            for &l in &kids {
                solver.add_clause(&[g, l.negate()]);
                long.push(l);
            }
            solver.add_clause(&long);
        }
        self.gates.insert((is_and, keys), g);
        g
    }

    /// Encode the cone of the circuit's output, returning a literal
    /// equivalent to the circuit.
    pub fn encode(&mut self, c: &Circuit, solver: &mut SolverInstance) -> Lit {
        let out = c.output();
        let l = self.encode_node(c, out.idx, solver);
        if out.neg {
            l.negate()
        } else {
            l
        }
    }

    fn encode_node(&mut self, c: &Circuit, root: u32, solver: &mut SolverInstance) -> Lit {
        let mut memo: HashMap<u32, Lit> = HashMap::new();
        let mut stack = vec![root];
        while let Some(&i) = stack.last() {
            if memo.contains_key(&i) {
                stack.pop();
                continue;
            }
            match &c.nodes()[i as usize] {
                Node::Var(vid) => {
                    let name = c.var_name(*vid).to_string();
                    let v = self.var(&name, solver);
                    memo.insert(i, Lit::pos(v));
                    stack.pop();
                }
                Node::And(cs) | Node::Or(cs) => {
                    let pending: Vec<u32> = cs
                        .iter()
                        .map(|r| r.idx)
                        .filter(|idx| !memo.contains_key(idx))
                        .collect();
                    if pending.is_empty() {
                        let is_and = matches!(&c.nodes()[i as usize], Node::And(_));
                        let kids: Vec<Lit> = cs
                            .iter()
                            .map(|r| {
                                let l = memo[&r.idx];
                                if r.neg {
                                    l.negate()
                                } else {
                                    l
                                }
                            })
                            .collect();
                        let g = self.gate(solver, is_and, &kids);
                        memo.insert(i, g);
                        stack.pop();
                    } else {
                        stack.extend(pending);
                    }
                }
            }
        }
        memo[&root]
    }

    /// Assert that the circuit holds. Top-level conjuncts are asserted
    /// separately, and disjunctive conjuncts become plain clauses.
    pub fn assert_circuit(&mut self, c: &Circuit, solver: &mut SolverInstance) {
        for r in c.top_conjuncts() {
            self.assert_ref(c, r, solver);
        }
    }

    fn assert_ref(&mut self, c: &Circuit, r: Ref, solver: &mut SolverInstance) {
        if !r.neg {
            if let Node::Or(cs) = &c.nodes()[r.idx as usize] {
                let cs = cs.clone();
                let lits: Vec<Lit> = cs
                    .iter()
                    .map(|ch| {
                        let l = self.encode_node(c, ch.idx, solver);
                        if ch.neg {
                            l.negate()
                        } else {
                            l
                        }
                    })
                    .collect();
                solver.add_clause(&lits);
                return;
            }
        }
        let l = self.encode_node(c, r.idx, solver);
        let l = if r.neg { l.negate() } else { l };
        solver.add_clause(&[l]);
    }
}

fn lit_from_dimacs(k: i64) -> Lit {
    Lit::new((k.unsigned_abs() - 1) as Var, k > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::sat::SolveResult;

    /// (x ∧ ¬y) ∨ z
    fn example() -> Circuit {
        let mut b = CircuitBuilder::new();
        let x = b.var("x");
        let y = b.var("y");
        let z = b.var("z");
        let g1 = b.and(vec![x, y.not()]);
        let g2 = b.or(vec![g1, z]);
        b.finish(g2)
    }

    #[test]
    fn asserted_circuit_models_match_truth_table() {
        let c = example();
        let mut s = SolverInstance::new();
        let mut ctx = TseitinContext::new();
        ctx.assert_circuit(&c, &mut s);
        let names = ["x", "y", "z"];
        let vars: Vec<Var> = names.iter().map(|n| ctx.lookup(n).unwrap()).collect();
        let mut models = Vec::new();
        while let SolveResult::Sat(m) = s.solve(&[]) {
            let vals: Vec<bool> = vars.iter().map(|&v| m[v as usize]).collect();
            models.push(vals.clone());
            let block: Vec<Lit> = vars
                .iter()
                .zip(&vals)
                .map(|(&v, &b)| Lit::new(v, !b))
                .collect();
            s.add_clause(&block);
        }
        models.sort();
        let mut expect = Vec::new();
        for m in 0..8u32 {
            let (x, y, z) = (m & 1 != 0, m & 2 != 0, m & 4 != 0);
            if (x && !y) || z {
                expect.push(vec![x, y, z]);
            }
        }
        expect.sort();
        assert_eq!(models, expect);
    }

    #[test]
    fn re_encoding_adds_no_clauses_or_vars() {
        let c = example();
        let mut s = SolverInstance::new();
        let mut ctx = TseitinContext::new();
        let l1 = ctx.encode(&c, &mut s);
        let nv = s.num_vars();
        let l2 = ctx.encode(&c, &mut s);
        assert_eq!(l1, l2);
        assert_eq!(s.num_vars(), nv);
    }

    #[test]
    fn constant_true_and_false() {
        let mut b = CircuitBuilder::new();
        let t = b.true_ref();
        let c = b.finish(t);
        let mut s = SolverInstance::new();
        let mut ctx = TseitinContext::new();
        let l = ctx.encode(&c, &mut s);
        assert!(matches!(s.solve(&[l.negate()]), SolveResult::Unsat));
        assert!(matches!(s.solve(&[l]), SolveResult::Sat(_)));

        let mut b = CircuitBuilder::new();
        let f = b.false_ref();
        let c = b.finish(f);
        let l = ctx.encode(&c, &mut s);
        assert!(matches!(s.solve(&[l]), SolveResult::Unsat));
    }

    #[test]
    fn complementary_children_collapse() {
        let mut b = CircuitBuilder::new();
        let x = b.var("x");
        let g = b.and(vec![x, x.not()]);
        let c = b.finish(g);
        let mut s = SolverInstance::new();
        let mut ctx = TseitinContext::new();
        let l = ctx.encode(&c, &mut s);
        assert!(matches!(s.solve(&[l]), SolveResult::Unsat));
    }

    #[test]
    fn shared_names_across_circuits() {
        let mut s = SolverInstance::new();
        let mut ctx = TseitinContext::new();
        let mut b = CircuitBuilder::new();
        let x = b.var("x");
        let c1 = b.finish(x);
        let mut b = CircuitBuilder::new();
        let x = b.var("x");
        let c2 = b.finish(x.not());
        ctx.assert_circuit(&c1, &mut s);
        ctx.assert_circuit(&c2, &mut s);
        assert!(matches!(s.solve(&[]), SolveResult::Unsat));
    }
}
