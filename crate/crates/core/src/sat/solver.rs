//! Conflict-driven clause-learning solver: two watched literals per
//! clause, first-UIP conflict analysis, phase saving, learned-clause
//! reduction, and either a fixed branching order (lowest unassigned
//! variable, positive first — the default) or activity-driven branching
//! with Luby restarts. Fully deterministic: there is no randomization,
//! and every tie breaks toward the lower variable index.

use std::time::Instant;

use crate::error::{Error, Result};

use super::SolveStatus;

/// Branching heuristic selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchOrder {
    /// Lowest unassigned variable index, positive polarity first.
    Fixed,
    /// Highest conflict activity with saved phases and Luby restarts.
    Activity,
}

const NO_REASON: u32 = u32::MAX;
const RESTART_UNIT: u64 = 100;
const VAR_DECAY: f64 = 1.0 / 0.95;
const CLA_DECAY: f64 = 1.0 / 0.999;

struct Clause {
    lits: Vec<u32>,
    learned: bool,
    deleted: bool,
    activity: f64,
}

/// Max-heap over variables keyed by activity, ties toward lower index.
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<usize>, // usize::MAX = absent
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.pos.resize(n, usize::MAX);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != usize::MAX
    }

    fn before(a: u32, b: u32, act: &[f64]) -> bool {
        let (aa, ab) = (act[a as usize], act[b as usize]);
        aa > ab || (aa == ab && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if Self::before(self.heap[i], self.heap[parent], act) {
                self.heap.swap(i, parent);
                self.pos[self.heap[i] as usize] = i;
                self.pos[self.heap[parent] as usize] = parent;
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.heap.len() && Self::before(self.heap[l], self.heap[best], act) {
                best = l;
            }
            if r < self.heap.len() && Self::before(self.heap[r], self.heap[best], act) {
                best = r;
            }
            if best == i {
                break;
            }
            self.heap.swap(i, best);
            self.pos[self.heap[i] as usize] = i;
            self.pos[self.heap[best] as usize] = best;
            i = best;
        }
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v as usize], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = usize::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }
}

/// A persistent, incremental solver: clauses may be added between calls
/// and learned clauses survive across calls.
pub struct Solver {
    order: BranchOrder,
    clauses: Vec<Clause>,
    /// For each literal code, the clauses watching that literal.
    watches: Vec<Vec<u32>>,
    assigns: Vec<Option<bool>>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    reason: Vec<u32>,
    level: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    ok: bool,
    heap: VarHeap,
    fixed_hint: usize,
    seen: Vec<bool>,
    learned_count: usize,
    max_learned: usize,
    restarts: u64,
    saved_model: Vec<bool>,
}

fn code_of(l: i64) -> u32 {
    let v = (l.unsigned_abs() - 1) as u32;
    v << 1 | u32::from(l < 0)
}

impl Solver {
    pub fn new(order: BranchOrder) -> Self {
        Solver {
            order,
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            phase: Vec::new(),
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            reason: Vec::new(),
            level: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            ok: true,
            heap: VarHeap::default(),
            fixed_hint: 0,
            seen: Vec::new(),
            learned_count: 0,
            max_learned: 4000,
            restarts: 0,
            saved_model: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    /// Grows the variable universe to at least `n` variables.
    pub fn ensure_vars(&mut self, n: usize) {
        if n <= self.num_vars() {
            return;
        }
        let old = self.num_vars();
        self.assigns.resize(n, None);
        self.phase.resize(n, true);
        self.activity.resize(n, 0.0);
        self.reason.resize(n, NO_REASON);
        self.level.resize(n, 0);
        self.seen.resize(n, false);
        self.watches.resize(2 * n, Vec::new());
        self.heap.grow(n);
        for v in old..n {
            self.heap.insert(v as u32, &self.activity);
        }
    }

    fn value(&self, code: u32) -> Option<bool> {
        self.assigns[(code >> 1) as usize].map(|b| b != (code & 1 == 1))
    }

    fn enqueue(&mut self, code: u32, reason: u32) {
        let v = (code >> 1) as usize;
        debug_assert!(self.assigns[v].is_none());
        self.assigns[v] = Some(code & 1 == 0);
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(code);
    }

    /// Adds a clause (at decision level 0 only). Tautologies and clauses
    /// already satisfied at level 0 are dropped; literals false at level
    /// 0 are stripped. A clause emptied by stripping makes the solver
    /// permanently unsatisfiable.
    pub fn add_clause(&mut self, lits: &[i64]) -> Result<()> {
        assert!(
            self.trail_lim.is_empty(),
            "clauses may only be added at the root level"
        );
        for &l in lits {
            if l == 0 {
                return Err(Error::Input("literal 0 in clause".into()));
            }
        }
        if !self.ok {
            return Ok(());
        }
        let max_var = lits.iter().map(|l| l.unsigned_abs() as usize).max();
        if let Some(m) = max_var {
            self.ensure_vars(m);
        }
        let mut codes: Vec<u32> = lits.iter().map(|&l| code_of(l)).collect();
        codes.sort_unstable();
        codes.dedup();
        // A variable appearing in both polarities makes the clause true.
        if codes.windows(2).any(|w| w[0] >> 1 == w[1] >> 1) {
            return Ok(());
        }
        let mut kept = Vec::with_capacity(codes.len());
        for code in codes {
            match self.value(code) {
                Some(true) => return Ok(()),
                Some(false) => {}
                None => kept.push(code),
            }
        }
        match kept.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(kept[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(kept, false);
            }
        }
        Ok(())
    }

    fn attach(&mut self, lits: Vec<u32>, learned: bool) -> u32 {
        let idx = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(idx);
        self.watches[lits[1] as usize].push(idx);
        if learned {
            self.learned_count += 1;
        }
        self.clauses.push(Clause {
            lits,
            learned,
            deleted: false,
            activity: self.cla_inc,
        });
        idx
    }

    /// Propagates all pending assignments; returns a conflicting clause
    /// index if one arises.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let fl = p ^ 1; // this literal just became false
            let mut ws = std::mem::take(&mut self.watches[fl as usize]);
            let mut j = 0usize;
            let mut i = 0usize;
            while i < ws.len() {
                let ci = ws[i] as usize;
                i += 1;
                if self.clauses[ci].deleted {
                    continue;
                }
                if self.clauses[ci].lits[0] == fl {
                    self.clauses[ci].lits.swap(0, 1);
                }
                let first = self.clauses[ci].lits[0];
                if self.value(first) == Some(true) {
                    ws[j] = ci as u32;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].lits.len() {
                    let lk = self.clauses[ci].lits[k];
                    if self.value(lk) != Some(false) {
                        self.clauses[ci].lits.swap(1, k);
                        self.watches[lk as usize].push(ci as u32);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                // Unit under the current assignment, or conflicting.
                ws[j] = ci as u32;
                j += 1;
                if self.value(first) == Some(false) {
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    ws.truncate(j);
                    self.watches[fl as usize] = ws;
                    self.qhead = self.trail.len();
                    return Some(ci as u32);
                }
                self.enqueue(first, ci as u32);
            }
            ws.truncate(j);
            self.watches[fl as usize] = ws;
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, ci: usize) {
        self.clauses[ci].activity += self.cla_inc;
        if self.clauses[ci].activity > 1e100 {
            for c in &mut self.clauses {
                c.activity *= 1e-100;
            }
            self.cla_inc *= 1e-100;
        }
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first, a highest-level literal second) and the level to
    /// backtrack to.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, usize) {
        let cur = self.trail_lim.len() as u32;
        let mut learned: Vec<u32> = vec![0];
        let mut counter = 0usize;
        let mut idx = self.trail.len();
        let mut first_round = true;
        loop {
            let ci = confl as usize;
            if self.clauses[ci].learned {
                self.bump_clause(ci);
            }
            let start = usize::from(!first_round); // skip the propagated literal afterwards
            for pos in start..self.clauses[ci].lits.len() {
                let q = self.clauses[ci].lits[pos];
                let v = (q >> 1) as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] == cur {
                        counter += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[(self.trail[idx] >> 1) as usize] {
                    break;
                }
            }
            let pl = self.trail[idx];
            let v = (pl >> 1) as usize;
            self.seen[v] = false;
            counter -= 1;
            if counter == 0 {
                learned[0] = pl ^ 1;
                break;
            }
            confl = self.reason[v];
            first_round = false;
        }
        let mut bt = 0usize;
        let mut at = 1usize;
        for (k, &q) in learned.iter().enumerate().skip(1) {
            let lv = self.level[(q >> 1) as usize] as usize;
            if lv > bt {
                bt = lv;
                at = k;
            }
        }
        if learned.len() > 1 {
            learned.swap(1, at);
        }
        for &q in &learned {
            self.seen[(q >> 1) as usize] = false;
        }
        (learned, bt)
    }

    fn backtrack(&mut self, target: usize) {
        while self.trail_lim.len() > target {
            let mark = self.trail_lim.pop().unwrap();
            while self.trail.len() > mark {
                let code = self.trail.pop().unwrap();
                let v = (code >> 1) as usize;
                self.phase[v] = code & 1 == 0;
                self.assigns[v] = None;
                self.reason[v] = NO_REASON;
                self.heap.insert(v as u32, &self.activity);
                self.fixed_hint = self.fixed_hint.min(v);
            }
        }
        self.qhead = self.trail.len().min(self.qhead);
    }

    fn pick_branch(&mut self) -> Option<u32> {
        match self.order {
            BranchOrder::Fixed => {
                while self.fixed_hint < self.num_vars() {
                    if self.assigns[self.fixed_hint].is_none() {
                        return Some((self.fixed_hint as u32) << 1);
                    }
                    self.fixed_hint += 1;
                }
                None
            }
            BranchOrder::Activity => {
                while let Some(v) = self.heap.pop(&self.activity) {
                    if self.assigns[v as usize].is_none() {
                        let neg = u32::from(!self.phase[v as usize]);
                        return Some(v << 1 | neg);
                    }
                }
                None
            }
        }
    }

    /// Drops the lower-activity half of the learned clauses, keeping
    /// binary clauses and clauses currently acting as reasons.
    fn reduce_learned(&mut self) {
        let mut cand: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&ci| {
                let c = &self.clauses[ci as usize];
                if !c.learned || c.deleted || c.lits.len() <= 2 {
                    return false;
                }
                let head = c.lits[0];
                // A reason clause keeps its propagated literal in front.
                !(self.value(head) == Some(true) && self.reason[(head >> 1) as usize] == ci)
            })
            .collect();
        cand.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .partial_cmp(&self.clauses[b as usize].activity)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        for &ci in cand.iter().take(cand.len() / 2) {
            self.clauses[ci as usize].deleted = true;
            self.clauses[ci as usize].lits.clear();
            self.clauses[ci as usize].lits.shrink_to_fit();
            self.learned_count -= 1;
        }
        self.max_learned += self.max_learned / 2;
    }

    fn luby(mut x: u64) -> u64 {
        let (mut size, mut seq) = (1u64, 0u32);
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) / 2;
            seq -= 1;
            x %= size;
        }
        1 << seq
    }

    /// Complete search under assumption literals, honoring an optional
    /// deadline checked at decision boundaries. The solver is left at the
    /// root level afterwards and can be reused.
    pub fn solve(&mut self, assumptions: &[i64], deadline: Option<Instant>) -> Result<SolveStatus> {
        for &a in assumptions {
            if a == 0 {
                return Err(Error::Input("assumption literal 0".into()));
            }
            self.ensure_vars(a.unsigned_abs() as usize);
        }
        if !self.ok {
            return Ok(SolveStatus::Unsat);
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.ok = false;
            return Ok(SolveStatus::Unsat);
        }
        let assumed: Vec<u32> = assumptions.iter().map(|&l| code_of(l)).collect();
        let mut conflicts_since_restart = 0u64;
        let mut restart_budget = RESTART_UNIT * Self::luby(self.restarts);
        loop {
            if let Some(confl) = self.propagate() {
                if self.trail_lim.is_empty() {
                    self.ok = false;
                    return Ok(SolveStatus::Unsat);
                }
                conflicts_since_restart += 1;
                let (learned, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learned.len() == 1 {
                    self.enqueue(learned[0], NO_REASON);
                } else {
                    let head = learned[0];
                    let ci = self.attach(learned, true);
                    self.enqueue(head, ci);
                }
                self.var_inc *= VAR_DECAY;
                self.cla_inc *= CLA_DECAY;
                if self.learned_count > self.max_learned {
                    self.reduce_learned();
                }
                continue;
            }
            // Decision boundary: budget, restarts, then the next decision.
            if deadline.is_some_and(|d| Instant::now() >= d) {
                self.backtrack(0);
                return Ok(SolveStatus::Timeout);
            }
            if self.order == BranchOrder::Activity && conflicts_since_restart >= restart_budget {
                self.restarts += 1;
                conflicts_since_restart = 0;
                restart_budget = RESTART_UNIT * Self::luby(self.restarts);
                self.backtrack(0);
                continue;
            }
            let lvl = self.trail_lim.len();
            if lvl < assumed.len() {
                let a = assumed[lvl];
                match self.value(a) {
                    Some(true) => self.trail_lim.push(self.trail.len()),
                    Some(false) => {
                        self.backtrack(0);
                        return Ok(SolveStatus::Unsat);
                    }
                    None => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(a, NO_REASON);
                    }
                }
            } else {
                match self.pick_branch() {
                    None => {
                        self.saved_model = self.assigns.iter().map(|a| a.unwrap_or(false)).collect();
                        self.backtrack(0);
                        return Ok(SolveStatus::Sat);
                    }
                    Some(code) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(code, NO_REASON);
                    }
                }
            }
        }
    }

    /// The satisfying assignment found by the most recent successful
    /// [`solve`](Self::solve) call, indexed by variable minus one.
    pub fn model(&self) -> Vec<bool> {
        self.saved_model.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_sequence_prefix() {
        let got: Vec<u64> = (0..15).map(Solver::luby).collect();
        assert_eq!(got, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn propagation_chains_resolve_without_decisions() {
        let mut s = Solver::new(BranchOrder::Fixed);
        s.add_clause(&[1]).unwrap();
        s.add_clause(&[-1, 2]).unwrap();
        s.add_clause(&[-2, 3]).unwrap();
        assert_eq!(s.solve(&[], None).unwrap(), SolveStatus::Sat);
        assert_eq!(s.model(), vec![true, true, true]);
    }

    #[test]
    fn fixed_order_prefers_positive_low_variables() {
        let mut s = Solver::new(BranchOrder::Fixed);
        s.ensure_vars(3);
        s.add_clause(&[1, 2, 3]).unwrap();
        assert_eq!(s.solve(&[], None).unwrap(), SolveStatus::Sat);
        assert_eq!(s.model(), vec![true, true, true]);
    }

    #[test]
    fn tautologies_and_duplicates_are_harmless() {
        let mut s = Solver::new(BranchOrder::Fixed);
        s.add_clause(&[1, -1]).unwrap();
        s.add_clause(&[2, 2, 2]).unwrap();
        assert_eq!(s.solve(&[], None).unwrap(), SolveStatus::Sat);
        assert!(s.model()[1]);
    }

    #[test]
    fn learned_clauses_persist_across_calls() {
        let mut s = Solver::new(BranchOrder::Fixed);
        // xor-ish chain that forces some learning on the way.
        s.add_clause(&[1, 2]).unwrap();
        s.add_clause(&[-1, -2]).unwrap();
        s.add_clause(&[2, 3]).unwrap();
        s.add_clause(&[-2, -3]).unwrap();
        assert_eq!(s.solve(&[1], None).unwrap(), SolveStatus::Sat);
        assert_eq!(s.solve(&[-1], None).unwrap(), SolveStatus::Sat);
        assert_eq!(s.solve(&[1, 2], None).unwrap(), SolveStatus::Unsat);
        assert_eq!(s.solve(&[1], None).unwrap(), SolveStatus::Sat);
    }
}
