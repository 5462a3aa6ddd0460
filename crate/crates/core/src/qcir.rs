//! QCIR-G14 reading and writing, restricted to prenex 2-QBF with and/or
//! gates and negation on literals.
//!
//! Supported shape:
//! ```text
//! #QCIR-G14
//! free(v, ...)        # optional
//! exists(v, ...)      # optional
//! forall(v, ...)      # optional
//! output(lit)
//! g = and(lit, ...)
//! g = or(lit, ...)
//! ```

use crate::circuit::{CircuitBuilder, Qbf, Ref};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QcirError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, QcirError> {
    Err(QcirError::Parse {
        line,
        msg: msg.into(),
    })
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Split "name(a, b, -c)" into (name, args).
fn split_call(line: &str, ln: usize) -> Result<(&str, Vec<&str>), QcirError> {
    let open = match line.find('(') {
        Some(i) => i,
        None => return err(ln, "expected '('"),
    };
    if !line.ends_with(')') {
        return err(ln, "expected trailing ')'");
    }
    let head = line[..open].trim();
    let inner = &line[open + 1..line.len() - 1];
    let args = if inner.trim().is_empty() {
        vec![]
    } else {
        inner.split(',').map(|s| s.trim()).collect()
    };
    Ok((head, args))
}

enum RawGate {
    And(Vec<(bool, String)>),
    Or(Vec<(bool, String)>),
}

fn parse_lit(tok: &str, ln: usize) -> Result<(bool, String), QcirError> {
    let (neg, name) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    if !is_ident(name) {
        return err(ln, format!("bad identifier '{tok}'"));
    }
    Ok((neg, name.to_string()))
}

pub fn parse_qcir(text: &str) -> Result<Qbf, QcirError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, l)) if l.starts_with("#QCIR-G14") || l.starts_with("#QCIR-14") => {}
        Some((ln, _)) => return err(ln, "missing #QCIR-G14 header"),
        None => return err(1, "empty input"),
    }

    let mut free: Vec<String> = vec![];
    let mut exists: Vec<String> = vec![];
    let mut forall: Vec<String> = vec![];
    let mut output: Option<(bool, String)> = None;
    let mut gates: Vec<(usize, String, RawGate)> = vec![];
    let mut seen_quant: Vec<&str> = vec![];

    for (ln, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(eq) = line.find('=') {
            let name = line[..eq].trim();
            if !is_ident(name) {
                return err(ln, format!("bad gate name '{name}'"));
            }
            let (op, args) = split_call(line[eq + 1..].trim(), ln)?;
            let lits = args
                .iter()
                .map(|t| parse_lit(t, ln))
                .collect::<Result<Vec<_>, _>>()?;
            let gate = match op {
                "and" => RawGate::And(lits),
                "or" => RawGate::Or(lits),
                other => return err(ln, format!("unsupported gate type '{other}'")),
            };
            gates.push((ln, name.to_string(), gate));
            continue;
        }
        let (head, args) = split_call(line, ln)?;
        match head {
            "free" | "exists" | "forall" => {
                if output.is_some() {
                    return err(ln, "quantifier block after output");
                }
                if seen_quant.contains(&head) {
                    return err(ln, format!("duplicate {head} block"));
                }
                seen_quant.push(match head {
                    "free" => "free",
                    "exists" => "exists",
                    _ => "forall",
                });
                let names = args
                    .iter()
                    .map(|t| {
                        if !is_ident(t) {
                            return err(ln, format!("bad variable name '{t}'"));
                        }
                        Ok(t.to_string())
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                match head {
                    "free" => free = names,
                    "exists" => exists = names,
                    _ => forall = names,
                }
            }
            "output" => {
                if args.len() != 1 {
                    return err(ln, "output takes exactly one literal");
                }
                output = Some(parse_lit(args[0], ln)?);
            }
            other => return err(ln, format!("unexpected directive '{other}'")),
        }
    }

    let (out_neg, out_name) = match output {
        Some(o) => o,
        None => return err(1, "missing output(...)"),
    };

    // declared variables
    let mut var_set: HashMap<&str, ()> = HashMap::new();
    for v in free.iter().chain(&exists).chain(&forall) {
        if var_set.insert(v, ()).is_some() {
            return err(1, format!("variable '{v}' declared twice in prefix"));
        }
    }

    let mut gate_line: HashMap<&str, usize> = HashMap::new();
    let mut gate_idx: HashMap<&str, usize> = HashMap::new();
    for (k, (ln, name, _)) in gates.iter().enumerate() {
        if var_set.contains_key(name.as_str()) {
            return err(*ln, format!("gate '{name}' redefines a prefix variable"));
        }
        if gate_idx.insert(name, k).is_some() {
            return err(*ln, format!("gate '{name}' redefined"));
        }
        gate_line.insert(name, *ln);
    }

    // build with cycle detection (DFS over gate references)
    let mut b = CircuitBuilder::new();
    for v in free.iter().chain(&exists).chain(&forall) {
        b.declare(v);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut marks = vec![Mark::White; gates.len()];
    let mut built: Vec<Option<Ref>> = vec![None; gates.len()];

    fn build_gate(
        k: usize,
        gates: &[(usize, String, RawGate)],
        gate_idx: &HashMap<&str, usize>,
        var_set: &HashMap<&str, ()>,
        b: &mut CircuitBuilder,
        marks: &mut Vec<Mark>,
        built: &mut Vec<Option<Ref>>,
    ) -> Result<Ref, QcirError> {
        if let Some(r) = built[k] {
            return Ok(r);
        }
        if marks[k] == Mark::Grey {
            let (ln, name, _) = &gates[k];
            return err(*ln, format!("cyclic definition of gate '{name}'"));
        }
        marks[k] = Mark::Grey;
        let (ln, name, raw) = &gates[k];
        let lits = match raw {
            RawGate::And(l) | RawGate::Or(l) => l,
        };
        let mut children = Vec::with_capacity(lits.len());
        for (neg, child) in lits {
            let r = if var_set.contains_key(child.as_str()) {
                b.var(child)
            } else if let Some(&ck) = gate_idx.get(child.as_str()) {
                build_gate(ck, gates, gate_idx, var_set, b, marks, built)?
            } else {
                return err(*ln, format!("undefined reference '{child}' in gate '{name}'"));
            };
            children.push(if *neg { r.not() } else { r });
        }
        let r = match raw {
            RawGate::And(_) => b.named_and(name, children),
            RawGate::Or(_) => b.named_or(name, children),
        };
        marks[k] = Mark::Black;
        built[k] = Some(r);
        Ok(r)
    }

    let out_ref = if var_set.contains_key(out_name.as_str()) {
        b.var(&out_name)
    } else if let Some(&k) = gate_idx.get(out_name.as_str()) {
        build_gate(k, &gates, &gate_idx, &var_set, &mut b, &mut marks, &mut built)?
    } else {
        return err(1, format!("output references undefined '{out_name}'"));
    };
    // also build gates not in the output cone so cycles there are caught
    for k in 0..gates.len() {
        build_gate(k, &gates, &gate_idx, &var_set, &mut b, &mut marks, &mut built)?;
    }

    let matrix = b.finish(if out_neg { out_ref.not() } else { out_ref });
    let q = Qbf {
        free,
        exists,
        forall,
        matrix,
    };
    q.validate()
        .map_err(|e| QcirError::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
    Ok(q)
}

/// Deterministic QCIR emission; identical inputs give byte-identical text.
pub fn emit_qcir(q: &Qbf) -> String {
    use crate::circuit::Node;
    let c = &q.matrix;
    let mut out = String::from("#QCIR-G14\n");
    let block = |name: &str, vars: &[String], out: &mut String| {
        if !vars.is_empty() {
            let _ = writeln!(out, "{name}({})", vars.join(", "));
        }
    };
    block("free", &q.free, &mut out);
    block("exists", &q.exists, &mut out);
    block("forall", &q.forall, &mut out);

    // stable gate names: explicit name, or g<position in emission order>
    let nodes = c.nodes();
    let mut names: Vec<Option<String>> = vec![None; nodes.len()];
    let mut counter = 0usize;
    for (i, node) in nodes.iter().enumerate() {
        match node {
            Node::Var(v) => names[i] = Some(c.var_name(*v).to_string()),
            _ => {
                names[i] = Some(match c.gate_name(i as u32) {
                    Some(n) => n.to_string(),
                    None => {
                        counter += 1;
                        format!("g{counter}")
                    }
                });
            }
        }
    }
    let lit = |r: Ref| -> String {
        let n = names[r.idx as usize].as_ref().unwrap();
        if r.neg {
            format!("-{n}")
        } else {
            n.clone()
        }
    };
    let _ = writeln!(out, "output({})", lit(c.output()));
    for (i, node) in nodes.iter().enumerate() {
        let (op, cs) = match node {
            Node::Var(_) => continue,
            Node::And(cs) => ("and", cs),
            Node::Or(cs) => ("or", cs),
        };
        let args: Vec<String> = cs.iter().map(|&r| lit(r)).collect();
        let _ = writeln!(out, "{} = {op}({})", names[i].as_ref().unwrap(), args.join(", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{evaluate, Assignment};

    #[test]
    fn minimal_true_instance() {
        let q = parse_qcir("#QCIR-G14\noutput(g)\ng = and()\n").unwrap();
        assert!(q.free.is_empty() && q.exists.is_empty() && q.forall.is_empty());
        assert!(evaluate(&q.matrix, &Assignment::new()).unwrap());
    }

    #[test]
    fn paper_style_example() {
        let text = "#QCIR-G14\nexists(x, y)\nforall(z)\noutput(g2)\ng1 = and(x, -y)\ng2 = or(g1, z)\n";
        let q = parse_qcir(text).unwrap();
        assert_eq!(q.exists, vec!["x", "y"]);
        assert_eq!(q.forall, vec!["z"]);
        let a: Assignment = [("x", true), ("y", false), ("z", false)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        assert!(evaluate(&q.matrix, &a).unwrap());
    }

    #[test]
    fn emit_then_parse_is_stable() {
        let text = "#QCIR-G14\nfree(e_1_2)\nexists(x)\nforall(z)\noutput(g2)\ng1 = and(x, -z)\ng2 = or(g1, e_1_2)\n";
        let q = parse_qcir(text).unwrap();
        let emitted = emit_qcir(&q);
        let q2 = parse_qcir(&emitted).unwrap();
        assert_eq!(emit_qcir(&q2), emitted);
        assert_eq!(q2.free, q.free);
        assert_eq!(q2.exists, q.exists);
        assert_eq!(q2.forall, q.forall);
    }

    #[test]
    fn rejects_bad_inputs() {
        // cycle
        let t = "#QCIR-G14\noutput(a)\na = and(b)\nb = or(a)\n";
        assert!(matches!(parse_qcir(t), Err(QcirError::Parse { line: 3, .. })));
        // redefinition
        let t = "#QCIR-G14\noutput(a)\na = and()\na = or()\n";
        assert!(parse_qcir(t).is_err());
        // unsupported gate type
        let t = "#QCIR-G14\noutput(a)\na = xor(b, c)\n";
        assert!(parse_qcir(t).is_err());
        // undefined reference
        let t = "#QCIR-G14\noutput(a)\na = and(zz)\n";
        assert!(parse_qcir(t).is_err());
        // missing header
        assert!(parse_qcir("output(a)\na = and()\n").is_err());
    }

    #[test]
    fn negated_output() {
        let t = "#QCIR-G14\noutput(-g)\ng = or()\n";
        let q = parse_qcir(t).unwrap();
        assert!(evaluate(&q.matrix, &Assignment::new()).unwrap());
    }
}
