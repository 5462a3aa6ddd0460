//! A compact CDCL solver: two-watched-literal propagation, first-UIP clause
//! learning, activity-based branching with deterministic tie-breaking, Luby
//! restarts, incremental clause addition, solving under assumptions, and an
//! optional admissibility callback consulted on every total model.

use std::fmt::Write as _;

pub type Var = u32;

/// Literal encoded as `2*var + sign` (sign bit set = negated).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var * 2 + (!positive) as u32)
    }
    #[inline]
    pub fn pos(var: Var) -> Lit {
        Lit::new(var, true)
    }
    #[inline]
    pub fn neg_of(var: Var) -> Lit {
        Lit::new(var, false)
    }
    #[inline]
    pub fn var(self) -> Var {
        self.0 >> 1
    }
    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }
    #[inline]
    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }
    #[inline]
    fn idx(self) -> usize {
        self.0 as usize
    }
    /// DIMACS-style signed integer (1-based).
    pub fn to_dimacs(self) -> i64 {
        let v = (self.var() + 1) as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Vec<bool>),
    Unsat,
}

/// Verdict of the model-admissibility callback.
pub enum Admissibility {
    Accept,
    /// The clause must be falsified by the rejected model.
    Reject(Vec<Lit>),
}

pub type Callback = Box<dyn FnMut(&[bool]) -> Admissibility>;

#[derive(Debug)]
struct Clause {
    lits: Vec<Lit>,
}

type ClauseRef = usize;

#[derive(Debug, Default, Clone)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub callback_rejections: u64,
}

/// Indexed max-heap over variables ordered by activity (ties: smaller index).
#[derive(Debug, Default)]
struct VarHeap {
    heap: Vec<Var>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.pos.resize(n, None);
    }
    fn better(act: &[f64], a: Var, b: Var) -> bool {
        act[a as usize] > act[b as usize] || (act[a as usize] == act[b as usize] && a < b)
    }
    fn up(&mut self, act: &[f64], mut i: usize) {
        while i > 0 {
            let p = (i - 1) / 2;
            if Self::better(act, self.heap[i], self.heap[p]) {
                self.heap.swap(i, p);
                self.pos[self.heap[i] as usize] = Some(i);
                self.pos[self.heap[p] as usize] = Some(p);
                i = p;
            } else {
                break;
            }
        }
    }
    fn down(&mut self, act: &[f64], mut i: usize) {
        loop {
            let l = 2 * i + 1;
            let r = 2 * i + 2;
            let mut best = i;
            if l < self.heap.len() && Self::better(act, self.heap[l], self.heap[best]) {
                best = l;
            }
            if r < self.heap.len() && Self::better(act, self.heap[r], self.heap[best]) {
                best = r;
            }
            if best == i {
                break;
            }
            self.heap.swap(i, best);
            self.pos[self.heap[i] as usize] = Some(i);
            self.pos[self.heap[best] as usize] = Some(best);
            i = best;
        }
    }
    fn insert(&mut self, act: &[f64], v: Var) {
        if self.pos[v as usize].is_some() {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v as usize] = Some(i);
        self.up(act, i);
    }
    fn pop(&mut self, act: &[f64]) -> Option<Var> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        self.pos[top as usize] = None;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = Some(0);
            self.down(act, 0);
        }
        Some(top)
    }
    fn update(&mut self, act: &[f64], v: Var) {
        if let Some(i) = self.pos[v as usize] {
            self.up(act, i);
        }
    }
}

pub struct SolverInstance {
    clauses: Vec<Clause>,
    /// clauses as originally added (for DIMACS export), incl. units
    original: Vec<Vec<Lit>>,
    watches: Vec<Vec<ClauseRef>>,
    assigns: Vec<LBool>,
    phase: Vec<bool>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    seen: Vec<bool>,
    unsat: bool,
    callback: Option<Callback>,
    pub stats: SolverStats,
}

impl Default for SolverInstance {
    fn default() -> Self {
        Self::new()
    }
}

impl SolverInstance {
    pub fn new() -> Self {
        SolverInstance {
            clauses: Vec::new(),
            original: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            phase: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            heap: VarHeap::default(),
            seen: Vec::new(),
            unsat: false,
            callback: None,
            stats: SolverStats::default(),
        }
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.assigns.len() as Var;
        self.assigns.push(LBool::Undef);
        self.phase.push(false); // all-zero pattern first
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.seen.push(false);
        self.heap.grow(self.assigns.len());
        self.heap.insert(&self.activity, v);
        v
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    #[inline]
    fn value_lit(&self, l: Lit) -> LBool {
        match self.assigns[l.var() as usize] {
            LBool::Undef => LBool::Undef,
            LBool::True => {
                if l.is_positive() {
                    LBool::True
                } else {
                    LBool::False
                }
            }
            LBool::False => {
                if l.is_positive() {
                    LBool::False
                } else {
                    LBool::True
                }
            }
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<ClauseRef>) {
        debug_assert_eq!(self.value_lit(l), LBool::Undef);
        let v = l.var() as usize;
        self.assigns[v] = if l.is_positive() {
            LBool::True
        } else {
            LBool::False
        };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn backtrack(&mut self, target: u32) {
        if self.decision_level() <= target {
            return;
        }
        let start = self.trail_lim[target as usize];
        for &l in &self.trail[start..] {
            let v = l.var() as usize;
            self.phase[v] = l.is_positive();
            self.assigns[v] = LBool::Undef;
            self.reason[v] = None;
            self.heap.insert(&self.activity, l.var());
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(target as usize);
        self.qhead = self.trail.len();
    }

    /// Two-watched-literal propagation; returns a conflicting clause if any.
    fn propagate(&mut self) -> Option<ClauseRef> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p.negate();
            let mut i = 0;
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let mut conflict: Option<ClauseRef> = None;
            while i < ws.len() {
                let cr = ws[i];
                // make sure the false literal is at position 1
                let (w0, needs_swap) = {
                    let c = &self.clauses[cr];
                    if c.lits[0] == false_lit {
                        (c.lits[1], true)
                    } else {
                        (c.lits[0], false)
                    }
                };
                if needs_swap {
                    self.clauses[cr].lits.swap(0, 1);
                }
                if self.value_lit(w0) == LBool::True {
                    i += 1;
                    continue;
                }
                // look for a new watch
                let mut found = None;
                {
                    let c = &self.clauses[cr];
                    for (k, &l) in c.lits.iter().enumerate().skip(2) {
                        if self.value_lit(l) != LBool::False {
                            found = Some(k);
                            break;
                        }
                    }
                }
                if let Some(k) = found {
                    let l = self.clauses[cr].lits[k];
                    self.clauses[cr].lits.swap(1, k);
                    self.watches[l.idx()].push(cr);
                    ws.swap_remove(i);
                    continue;
                }
                if self.value_lit(w0) == LBool::False {
                    // conflict: keep remaining watches and bail out
                    conflict = Some(cr);
                    break;
                }
                // unit
                self.enqueue(w0, Some(cr));
                i += 1;
            }
            self.watches[false_lit.idx()].append(&mut ws);
            // note: when a conflict broke the loop, untouched watches were
            // re-appended above; already-processed ones kept their new homes
            if let Some(cr) = conflict {
                self.qhead = self.trail.len();
                return Some(cr);
            }
        }
        None
    }

    fn bump(&mut self, v: Var) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.update(&self.activity, v);
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, mut confl: ClauseRef) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learnt: Vec<Lit> = vec![Lit(0)];
        let mut counter = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let mut to_clear: Vec<Var> = Vec::new();
        loop {
            for k in 0..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                // skip the propagated literal when expanding its reason
                if p.map(|x| x.var()) == Some(q.var()) {
                    continue;
                }
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    to_clear.push(q.var());
                    self.bump(q.var());
                    if self.level[v] >= current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // next seen literal on the trail
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let pl = self.trail[idx];
            self.seen[pl.var() as usize] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = pl.negate();
                break;
            }
            confl = self.reason[pl.var() as usize].expect("non-decision has a reason");
            p = Some(pl);
        }
        for v in to_clear {
            self.seen[v as usize] = false;
        }
        // backtrack to the second-highest level in the clause
        let mut blevel = 0;
        let mut at = 1;
        for (k, lit) in learnt.iter().enumerate().skip(1) {
            let lv = self.level[lit.var() as usize];
            if lv > blevel {
                blevel = lv;
                at = k;
            }
        }
        if learnt.len() > 1 {
            learnt.swap(1, at);
        }
        self.var_inc /= 0.95;
        (learnt, blevel)
    }

    fn attach(&mut self, lits: Vec<Lit>) -> ClauseRef {
        debug_assert!(lits.len() >= 2);
        let cr = self.clauses.len();
        self.watches[lits[0].idx()].push(cr);
        self.watches[lits[1].idx()].push(cr);
        self.clauses.push(Clause { lits });
        cr
    }

    fn normalize(lits: &[Lit]) -> Option<Vec<Lit>> {
        let mut ls = lits.to_vec();
        ls.sort();
        ls.dedup();
        for w in ls.windows(2) {
            if w[0].var() == w[1].var() {
                return None; // tautology
            }
        }
        Some(ls)
    }

    /// Conjoin a clause. Tautologies are a no-op; the empty clause makes the
    /// instance permanently unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if self.unsat {
            return;
        }
        let ls = match Self::normalize(lits) {
            Some(ls) => ls,
            None => return,
        };
        self.original.push(ls.clone());
        self.backtrack(0);
        // drop root-false literals; satisfied-at-root clauses still attach
        // harmlessly (kept simple)
        let ls: Vec<Lit> = ls
            .into_iter()
            .filter(|&l| {
                !(self.value_lit(l) == LBool::False)
            })
            .collect();
        if ls.iter().any(|&l| self.value_lit(l) == LBool::True) {
            return;
        }
        match ls.len() {
            0 => self.unsat = true,
            1 => {
                self.enqueue(ls[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
            }
            _ => {
                self.attach(ls);
            }
        }
    }

    /// Add a clause while search is running (callback rejections). Restarts
    /// from the root; propagation replay is cheap at this scale.
    fn add_rejection_clause(&mut self, lits: Vec<Lit>) -> bool {
        self.add_clause(&lits);
        !self.unsat
    }

    pub fn set_admissibility_callback(&mut self, f: Callback) {
        self.callback = Some(f);
    }

    pub fn clear_admissibility_callback(&mut self) {
        self.callback = None;
    }

    fn luby(mut x: u64) -> u64 {
        // Luby sequence 1,1,2,1,1,2,4,...
        let mut size = 1u64;
        let mut seq = 0u64;
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) / 2;
            seq -= 1;
            x %= size;
        }
        1u64 << seq
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        if self.unsat {
            return SolveResult::Unsat;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.unsat = true;
            return SolveResult::Unsat;
        }
        let mut restart_count = 0u64;
        let mut conflicts_until_restart = Self::luby(restart_count) * 256;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    self.unsat = true;
                    return SolveResult::Unsat;
                }
                let (learnt, blevel) = self.analyze(confl);
                self.backtrack(blevel);
                if learnt.len() == 1 {
                    if self.value_lit(learnt[0]) == LBool::Undef {
                        self.enqueue(learnt[0], None);
                    }
                } else {
                    let cr = self.attach(learnt.clone());
                    self.enqueue(learnt[0], Some(cr));
                }
                conflicts_until_restart = conflicts_until_restart.saturating_sub(1);
                continue;
            }
            if conflicts_until_restart == 0 {
                restart_count += 1;
                self.stats.restarts += 1;
                conflicts_until_restart = Self::luby(restart_count) * 256;
                self.backtrack(0);
                continue;
            }
            // place assumptions first
            let mut placed_all = true;
            for &a in assumptions {
                match self.value_lit(a) {
                    LBool::True => continue,
                    LBool::False => return SolveResult::Unsat,
                    LBool::Undef => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(a, None);
                        placed_all = false;
                        break;
                    }
                }
            }
            if !placed_all {
                continue;
            }
            // branch
            let mut decision = None;
            while let Some(v) = self.heap.pop(&self.activity) {
                if self.assigns[v as usize] == LBool::Undef {
                    decision = Some(v);
                    break;
                }
            }
            match decision {
                Some(v) => {
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(Lit::new(v, self.phase[v as usize]), None);
                }
                None => {
                    // total model
                    let model: Vec<bool> = self
                        .assigns
                        .iter()
                        .map(|a| *a == LBool::True)
                        .collect();
                    if let Some(mut cb) = self.callback.take() {
                        let resp = cb(&model);
                        self.callback = Some(cb);
                        match resp {
                            Admissibility::Accept => return SolveResult::Sat(model),
                            Admissibility::Reject(clause) => {
                                self.stats.callback_rejections += 1;
                                for &l in &clause {
                                    assert!(
                                        self.value_lit(l) == LBool::False,
                                        "admissibility callback returned a clause not falsified by the rejected model"
                                    );
                                }
                                if !self.add_rejection_clause(clause) {
                                    return SolveResult::Unsat;
                                }
                                continue;
                            }
                        }
                    }
                    return SolveResult::Sat(model);
                }
            }
        }
    }

    /// Standard "p cnf" export of the clause database as originally added.
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p cnf {} {}", self.num_vars(), self.original.len());
        for c in &self.original {
            for &l in c {
                let _ = write!(s, "{} ", l.to_dimacs());
            }
            let _ = writeln!(s, "0");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nvars(s: &mut SolverInstance, n: usize) -> Vec<Var> {
        (0..n).map(|_| s.new_var()).collect()
    }

    #[test]
    fn empty_database_is_sat() {
        let mut s = SolverInstance::new();
        assert!(matches!(s.solve(&[]), SolveResult::Sat(_)));
    }

    #[test]
    fn unit_against_assumption() {
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 1);
        s.add_clause(&[Lit::pos(v[0])]);
        assert!(matches!(s.solve(&[Lit::neg_of(v[0])]), SolveResult::Unsat));
        assert!(matches!(s.solve(&[]), SolveResult::Sat(_)));
    }

    #[test]
    fn incremental_add_after_solve() {
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 2);
        assert!(matches!(s.solve(&[]), SolveResult::Sat(_)));
        s.add_clause(&[Lit::pos(v[0])]);
        s.add_clause(&[Lit::neg_of(v[0]), Lit::pos(v[1])]);
        match s.solve(&[]) {
            SolveResult::Sat(m) => {
                assert!(m[v[0] as usize] && m[v[1] as usize]);
            }
            SolveResult::Unsat => panic!(),
        }
        s.add_clause(&[Lit::neg_of(v[1])]);
        assert!(matches!(s.solve(&[]), SolveResult::Unsat));
        // permanently unsat after conflicting units
        assert!(matches!(s.solve(&[]), SolveResult::Unsat));
    }

    #[test]
    fn empty_clause_makes_unsat() {
        let mut s = SolverInstance::new();
        nvars(&mut s, 1);
        s.add_clause(&[]);
        assert!(matches!(s.solve(&[]), SolveResult::Unsat));
    }

    #[test]
    fn tautology_is_noop() {
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 1);
        s.add_clause(&[Lit::pos(v[0]), Lit::neg_of(v[0])]);
        assert_eq!(s.clauses.len(), 0);
        assert!(s.original.is_empty() || !s.original.is_empty());
        assert!(matches!(s.solve(&[]), SolveResult::Sat(_)));
    }

    #[test]
    fn callback_always_accept_is_plain_solve() {
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 3);
        s.add_clause(&[Lit::pos(v[0]), Lit::pos(v[1])]);
        s.set_admissibility_callback(Box::new(|_| Admissibility::Accept));
        assert!(matches!(s.solve(&[]), SolveResult::Sat(_)));
    }

    #[test]
    fn callback_rejection_excludes_models() {
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 2);
        let target = v[0];
        s.set_admissibility_callback(Box::new(move |m: &[bool]| {
            if m[target as usize] {
                Admissibility::Reject(vec![Lit::neg_of(target)])
            } else {
                Admissibility::Accept
            }
        }));
        // force v0 true via assumption: must be unsat
        assert!(matches!(s.solve(&[Lit::pos(v[0])]), SolveResult::Unsat));
        match s.solve(&[]) {
            SolveResult::Sat(m) => assert!(!m[v[0] as usize]),
            SolveResult::Unsat => panic!(),
        }
        let _ = v[1];
    }

    #[test]
    fn default_polarity_is_false() {
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 4);
        match s.solve(&[]) {
            SolveResult::Sat(m) => assert!(v.iter().all(|&x| !m[x as usize])),
            _ => panic!(),
        }
    }

    #[test]
    fn dimacs_export_shape() {
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 2);
        s.add_clause(&[Lit::pos(v[0]), Lit::neg_of(v[1])]);
        let d = s.to_dimacs();
        assert!(d.starts_with("p cnf 2 1"));
        assert!(d.contains("1 -2 0"));
    }

    /// exhaustive truth-table agreement on many small random CNFs
    #[test]
    fn agrees_with_truth_tables() {
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..400 {
            let n = 3 + (rng() % 8) as usize; // up to 10 vars
            let m = 2 + (rng() % 30) as usize;
            let mut clauses: Vec<Vec<(usize, bool)>> = Vec::new();
            for _ in 0..m {
                let len = 1 + (rng() % 3) as usize;
                let mut c = Vec::new();
                for _ in 0..len {
                    c.push(((rng() % n as u64) as usize, rng() % 2 == 0));
                }
                clauses.push(c);
            }
            let brute = (0u64..(1 << n)).any(|mask| {
                clauses.iter().all(|c| {
                    c.iter()
                        .any(|&(v, pos)| ((mask >> v) & 1 == 1) == pos)
                })
            });
            let mut s = SolverInstance::new();
            let vars = nvars(&mut s, n);
            for c in &clauses {
                let lits: Vec<Lit> = c.iter().map(|&(v, p)| Lit::new(vars[v], p)).collect();
                s.add_clause(&lits);
            }
            match s.solve(&[]) {
                SolveResult::Sat(model) => {
                    assert!(brute, "solver said SAT, truth table says UNSAT");
                    for c in &clauses {
                        assert!(c.iter().any(|&(v, p)| model[vars[v] as usize] == p));
                    }
                }
                SolveResult::Unsat => assert!(!brute, "solver said UNSAT, truth table says SAT"),
            }
        }
    }

    #[test]
    fn blocking_enumeration_counts_models() {
        // x or y over 2 vars: 3 models
        let mut s = SolverInstance::new();
        let v = nvars(&mut s, 2);
        s.add_clause(&[Lit::pos(v[0]), Lit::pos(v[1])]);
        let mut count = 0;
        while let SolveResult::Sat(m) = s.solve(&[]) {
            count += 1;
            let block: Vec<Lit> = v
                .iter()
                .map(|&x| Lit::new(x, !m[x as usize]))
                .collect();
            s.add_clause(&block);
        }
        assert_eq!(count, 3);
    }
}
