//! Boolean circuits (and/or gate DAGs with negation on references), 2-QBF
//! prefixes, assignments, substitution, evaluation, and simplification.

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("variable {0} is not assigned")]
    UnassignedVariable(String),
    #[error("universal variables may not be free: {0}")]
    UniversalFree(String),
    #[error("variable {0} appears in more than one prefix block")]
    DuplicateBlockVariable(String),
}

/// Signed reference to a node of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ref {
    pub idx: u32,
    pub neg: bool,
}

impl Ref {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Ref {
        Ref {
            idx: self.idx,
            neg: !self.neg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Var(u32),
    And(Vec<Ref>),
    Or(Vec<Ref>),
}

/// An and/or/not gate DAG over named input variables.
///
/// `And(vec![])` is the constant true, `Or(vec![])` the constant false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    vars: Vec<String>,
    var_index: HashMap<String, u32>,
    nodes: Vec<Node>,
    gate_names: Vec<Option<String>>,
    output: Ref,
}

impl Circuit {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn output(&self) -> Ref {
        self.output
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn gate_name(&self, idx: u32) -> Option<&str> {
        self.gate_names[idx as usize].as_deref()
    }

    pub fn var_name(&self, vid: u32) -> &str {
        &self.vars[vid as usize]
    }

    /// Variables that actually occur in the cone of the output.
    pub fn used_vars(&self) -> Vec<String> {
        let mut seen = vec![false; self.nodes.len()];
        let mut used = vec![false; self.vars.len()];
        let mut stack = vec![self.output.idx];
        while let Some(i) = stack.pop() {
            if seen[i as usize] {
                continue;
            }
            seen[i as usize] = true;
            match &self.nodes[i as usize] {
                Node::Var(v) => used[*v as usize] = true,
                Node::And(cs) | Node::Or(cs) => stack.extend(cs.iter().map(|r| r.idx)),
            }
        }
        self.vars
            .iter()
            .zip(&used)
            .filter(|(_, u)| **u)
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// Top-level conjuncts if the output is a non-negated And, else the
    /// output itself as a single conjunct.
    pub fn top_conjuncts(&self) -> Vec<Ref> {
        if !self.output.neg {
            if let Node::And(cs) = &self.nodes[self.output.idx as usize] {
                return cs.clone();
            }
        }
        vec![self.output]
    }
}

/// Incremental circuit builder. Shared substructure is expressed by reusing
/// the returned `Ref`s.
#[derive(Debug, Clone, Default)]
pub struct CircuitBuilder {
    vars: Vec<String>,
    var_index: HashMap<String, u32>,
    var_nodes: Vec<u32>,
    nodes: Vec<Node>,
    gate_names: Vec<Option<String>>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, name: &str) -> Ref {
        if let Some(&vid) = self.var_index.get(name) {
            return Ref {
                idx: self.var_nodes[vid as usize],
                neg: false,
            };
        }
        let vid = self.vars.len() as u32;
        self.vars.push(name.to_string());
        self.var_index.insert(name.to_string(), vid);
        let r = self.push(Node::Var(vid), None);
        self.var_nodes.push(r.idx);
        r
    }

    /// Declare a variable without referencing it.
    pub fn declare(&mut self, name: &str) {
        self.var(name);
    }

    fn push(&mut self, node: Node, name: Option<String>) -> Ref {
        let idx = self.nodes.len() as u32;
        self.nodes.push(node);
        self.gate_names.push(name);
        Ref { idx, neg: false }
    }

    pub fn and(&mut self, children: Vec<Ref>) -> Ref {
        self.push(Node::And(children), None)
    }

    pub fn or(&mut self, children: Vec<Ref>) -> Ref {
        self.push(Node::Or(children), None)
    }

    pub fn named_and(&mut self, name: &str, children: Vec<Ref>) -> Ref {
        self.push(Node::And(children), Some(name.to_string()))
    }

    pub fn named_or(&mut self, name: &str, children: Vec<Ref>) -> Ref {
        self.push(Node::Or(children), Some(name.to_string()))
    }

    pub fn true_ref(&mut self) -> Ref {
        self.and(vec![])
    }

    pub fn false_ref(&mut self) -> Ref {
        self.or(vec![])
    }

    pub fn finish(self, output: Ref) -> Circuit {
        Circuit {
            vars: self.vars,
            var_index: self.var_index,
            nodes: self.nodes,
            gate_names: self.gate_names,
            output,
        }
    }
}

/// Map from variable name to truth value; may be partial.
pub type Assignment = HashMap<String, bool>;

/// The 2-QBF `free` (outermost existential, enumeration-relevant), `exists`,
/// `forall`, matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf {
    pub free: Vec<String>,
    pub exists: Vec<String>,
    pub forall: Vec<String>,
    pub matrix: Circuit,
}

impl Qbf {
    /// Blocks must be pairwise disjoint and cover every matrix variable.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for v in self.free.iter().chain(&self.exists).chain(&self.forall) {
            if seen.insert(v, ()).is_some() {
                return Err(CircuitError::DuplicateBlockVariable(v.clone()));
            }
        }
        for v in self.matrix.vars() {
            if !seen.contains_key(v.as_str()) {
                return Err(CircuitError::DuplicateBlockVariable(format!(
                    "{v} (not declared in any block)"
                )));
            }
        }
        Ok(())
    }

    pub fn is_universal(&self, name: &str) -> bool {
        self.forall.iter().any(|v| v == name)
    }
}

const TRUE_KEY: i64 = i64::MAX;
const FALSE_KEY: i64 = i64::MIN;

/// Rebuilds the cone of the output with assigned variables replaced by
/// constants and constants folded away. This is both `substitute` (with a
/// nonempty assignment) and `simplify` (with an empty one).
fn rebuild(c: &Circuit, a: &Assignment) -> Circuit {
    let mut b = CircuitBuilder::new();
    // keep the full declaration table so prefix blocks stay meaningful
    for v in c.vars() {
        if !a.contains_key(v) {
            b.declare(v);
        }
    }
    // memo: old node idx -> signed key (var/gate ref or constant)
    let mut memo: Vec<Option<i64>> = vec![None; c.nodes().len()];
    let out_key = fold(c, c.output().idx, a, &mut b, &mut memo);
    let out = key_to_ref(&mut b, apply_sign(out_key, c.output().neg));
    b.finish(out)
}

fn apply_sign(key: i64, neg: bool) -> i64 {
    if !neg {
        key
    } else if key == TRUE_KEY {
        FALSE_KEY
    } else if key == FALSE_KEY {
        TRUE_KEY
    } else {
        -key
    }
}

fn key_to_ref(b: &mut CircuitBuilder, key: i64) -> Ref {
    if key == TRUE_KEY {
        b.true_ref()
    } else if key == FALSE_KEY {
        b.false_ref()
    } else {
        Ref {
            idx: (key.abs() - 1) as u32,
            neg: key < 0,
        }
    }
}

fn fold(c: &Circuit, idx: u32, a: &Assignment, b: &mut CircuitBuilder, memo: &mut Vec<Option<i64>>) -> i64 {
    if let Some(k) = memo[idx as usize] {
        return k;
    }
    let key = match &c.nodes()[idx as usize] {
        Node::Var(v) => {
            let name = c.var_name(*v);
            match a.get(name) {
                Some(true) => TRUE_KEY,
                Some(false) => FALSE_KEY,
                None => {
                    let r = b.var(name);
                    (r.idx as i64) + 1
                }
            }
        }
        Node::And(cs) | Node::Or(cs) => {
            let is_and = matches!(&c.nodes()[idx as usize], Node::And(_));
            let (absorb, neutral) = if is_and {
                (FALSE_KEY, TRUE_KEY)
            } else {
                (TRUE_KEY, FALSE_KEY)
            };
            let mut kids: Vec<i64> = Vec::with_capacity(cs.len());
            let mut absorbed = false;
            for r in cs {
                let k = apply_sign(fold(c, r.idx, a, b, memo), r.neg);
                if k == absorb {
                    absorbed = true;
                    break;
                }
                if k != neutral {
                    kids.push(k);
                }
            }
            if absorbed {
                absorb
            } else if kids.is_empty() {
                neutral
            } else if kids.len() == 1 {
                kids[0]
            } else {
                let refs: Vec<Ref> = kids.iter().map(|&k| key_to_ref(b, k)).collect();
                let name = c.gate_name(idx).map(|s| s.to_string());
                let r = match (is_and, name) {
                    (true, Some(n)) => b.named_and(&n, refs),
                    (true, None) => b.and(refs),
                    (false, Some(n)) => b.named_or(&n, refs),
                    (false, None) => b.or(refs),
                };
                (r.idx as i64) + 1
            }
        }
    };
    memo[idx as usize] = Some(key);
    key
}

/// φ[a]: assigned variables replaced by constants, constants propagated.
pub fn substitute(c: &Circuit, a: &Assignment) -> Circuit {
    rebuild(c, a)
}

/// Constant folding: no constant children, empty gates collapsed, unary
/// gates replaced by their only input.
pub fn simplify(c: &Circuit) -> Circuit {
    rebuild(c, &Assignment::new())
}

/// Evaluate under a total assignment.
pub fn evaluate(c: &Circuit, a: &Assignment) -> Result<bool, CircuitError> {
    let mut memo: Vec<Option<bool>> = vec![None; c.nodes().len()];
    // raw (unsigned) value of a node
    fn raw(c: &Circuit, idx: u32, a: &Assignment, memo: &mut Vec<Option<bool>>) -> Result<bool, CircuitError> {
        if let Some(v) = memo[idx as usize] {
            return Ok(v);
        }
        let v = match &c.nodes()[idx as usize] {
            Node::Var(vid) => *a
                .get(c.var_name(*vid))
                .ok_or_else(|| CircuitError::UnassignedVariable(c.var_name(*vid).to_string()))?,
            Node::And(cs) => {
                let mut acc = true;
                for &ch in cs {
                    acc &= raw(c, ch.idx, a, memo)? ^ ch.neg;
                }
                acc
            }
            Node::Or(cs) => {
                let mut acc = false;
                for &ch in cs {
                    acc |= raw(c, ch.idx, a, memo)? ^ ch.neg;
                }
                acc
            }
        };
        memo[idx as usize] = Some(v);
        Ok(v)
    }
    let out = c.output();
    Ok(raw(c, out.idx, a, &mut memo)? ^ out.neg)
}
