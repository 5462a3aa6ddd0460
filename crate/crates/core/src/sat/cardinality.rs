//! Sequential-counter cardinality constraints over solver literals.

use super::solver::{Lit, SolverInstance};

/// At most `k` of `lits` are true (sequential unary counter).
pub fn cardinality_le(solver: &mut SolverInstance, lits: &[Lit], k: usize) {
    let n = lits.len();
    if k >= n {
        return;
    }
    if k == 0 {
        for &l in lits {
            solver.add_clause(&[l.negate()]);
        }
        return;
    }
    // s[i][j]: at least j+1 of the first i+1 literals are true
    let mut s = vec![vec![Lit::pos(0); k]; n - 1];
    for row in s.iter_mut() {
        for cell in row.iter_mut() {
            *cell = Lit::pos(solver.new_var());
        }
    }
    solver.add_clause(&[lits[0].negate(), s[0][0]]);
    for cell in s[0].iter().skip(1) {
        solver.add_clause(&[cell.negate()]);
    }
    for i in 1..n - 1 {
        solver.add_clause(&[lits[i].negate(), s[i][0]]);
        solver.add_clause(&[s[i - 1][0].negate(), s[i][0]]);
        for j in 1..k {
            solver.add_clause(&[lits[i].negate(), s[i - 1][j - 1].negate(), s[i][j]]);
            solver.add_clause(&[s[i - 1][j].negate(), s[i][j]]);
        }
        solver.add_clause(&[lits[i].negate(), s[i - 1][k - 1].negate()]);
    }
    solver.add_clause(&[lits[n - 1].negate(), s[n - 2][k - 1].negate()]);
}

/// At least `k` of `lits` are true.
pub fn cardinality_ge(solver: &mut SolverInstance, lits: &[Lit], k: usize) {
    if k == 0 {
        return;
    }
    let n = lits.len();
    if k > n {
        solver.add_clause(&[]);
        return;
    }
    let neg: Vec<Lit> = lits.iter().map(|l| l.negate()).collect();
    cardinality_le(solver, &neg, n - k);
}

/// Exactly `k` of `lits` are true.
pub fn cardinality_eq(solver: &mut SolverInstance, lits: &[Lit], k: usize) {
    cardinality_le(solver, lits, k);
    cardinality_ge(solver, lits, k);
}
