//! Weighted CNF: hard clauses plus unit soft clauses of weight 1, the
//! classic weighted-DIMACS text form, and a generic minimizer that
//! searches for a hard-satisfying model falsifying as few soft clauses
//! as possible.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::sat::{BranchOrder, Solver, SolveStatus};

use super::cardinality::at_most_k;

/// A partial MAX-SAT formula: hard clauses that must hold, and unit soft
/// clauses (stored as their single literal) of weight 1 each, to be
/// satisfied as often as possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcnfFormula {
    var_count: usize,
    hard: Vec<Vec<i64>>,
    soft: Vec<i64>,
}

impl WcnfFormula {
    pub fn new(var_count: usize) -> Self {
        WcnfFormula {
            var_count,
            hard: Vec::new(),
            soft: Vec::new(),
        }
    }

    /// Builds a formula from parts, validating every clause.
    pub fn from_parts(var_count: usize, hard: Vec<Vec<i64>>, soft: Vec<i64>) -> Result<Self> {
        let mut f = WcnfFormula::new(var_count);
        for clause in hard {
            f.add_hard(&clause)?;
        }
        for lit in soft {
            f.add_soft(lit)?;
        }
        Ok(f)
    }

    fn check_lit(&self, lit: i64) -> Result<()> {
        if lit == 0 || lit.unsigned_abs() as usize > self.var_count {
            return Err(Error::Input(format!(
                "literal {lit} outside variable range 1..={}",
                self.var_count
            )));
        }
        Ok(())
    }

    pub fn add_hard(&mut self, lits: &[i64]) -> Result<()> {
        if lits.is_empty() {
            return Err(Error::Input("empty hard clause".into()));
        }
        for &l in lits {
            self.check_lit(l)?;
        }
        self.hard.push(lits.to_vec());
        Ok(())
    }

    pub fn add_soft(&mut self, lit: i64) -> Result<()> {
        self.check_lit(lit)?;
        self.soft.push(lit);
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn hard(&self) -> &[Vec<i64>] {
        &self.hard
    }

    pub fn soft(&self) -> &[i64] {
        &self.soft
    }

    /// Number of soft literals false under `model` (indexed by variable,
    /// true-biased for variables beyond the model's length).
    pub fn falsified_soft(&self, model: &[bool]) -> usize {
        self.soft
            .iter()
            .filter(|&&l| {
                let idx = l.unsigned_abs() as usize - 1;
                let value = model.get(idx).copied().unwrap_or(false);
                value != (l > 0)
            })
            .count()
    }
}

/// Renders the weighted-DIMACS form: header `p wcnf <vars> <clauses> <top>`
/// with `top = soft count + 1`, hard clauses weighted `top`, soft clauses
/// weighted 1, each terminated by 0.
pub fn emit_wcnf(f: &WcnfFormula) -> String {
    let top = f.soft.len() + 1;
    let mut s = String::new();
    s.push_str(&format!(
        "p wcnf {} {} {}\n",
        f.var_count,
        f.hard.len() + f.soft.len(),
        top
    ));
    for clause in &f.hard {
        s.push_str(&top.to_string());
        for &l in clause {
            s.push(' ');
            s.push_str(&l.to_string());
        }
        s.push_str(" 0\n");
    }
    for &l in &f.soft {
        s.push_str(&format!("1 {l} 0\n"));
    }
    s
}

/// Parses the weighted-DIMACS form produced by [`emit_wcnf`]. Clause
/// weights must be either the header's top (hard) or 1 (soft); soft
/// clauses must be unit.
pub fn parse_wcnf(input: &str) -> Result<WcnfFormula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut tokens: Vec<i64> = Vec::new();
    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if header.is_some() {
                return Err(Error::Input("duplicate header line".into()));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "wcnf" {
                return Err(Error::Input(format!("malformed header {line:?}")));
            }
            let nums: Vec<usize> = fields[1..]
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Input(format!("bad header field {t:?}")))
                })
                .collect::<Result<_>>()?;
            header = Some((nums[0], nums[1], nums[2]));
            continue;
        }
        if header.is_none() {
            return Err(Error::Input(format!(
                "clause line {line:?} before header"
            )));
        }
        for tok in line.split_whitespace() {
            tokens.push(
                tok.parse::<i64>()
                    .map_err(|_| Error::Input(format!("bad token {tok:?}")))?,
            );
        }
    }
    let (var_count, clause_count, top) =
        header.ok_or_else(|| Error::Input("missing wcnf header".into()))?;
    if top == 0 {
        return Err(Error::Input("top weight must be positive".into()));
    }

    let mut hard = Vec::new();
    let mut soft = Vec::new();
    let mut iter = tokens.into_iter();
    while let Some(weight) = iter.next() {
        let mut lits = Vec::new();
        let mut terminated = false;
        for lit in iter.by_ref() {
            if lit == 0 {
                terminated = true;
                break;
            }
            lits.push(lit);
        }
        if !terminated {
            return Err(Error::Input("unterminated clause".into()));
        }
        if weight == top as i64 {
            if lits.is_empty() {
                return Err(Error::Input("empty hard clause".into()));
            }
            hard.push(lits);
        } else if weight == 1 {
            if lits.len() != 1 {
                return Err(Error::Input(format!(
                    "soft clause must be unit, got {} literals",
                    lits.len()
                )));
            }
            soft.push(lits[0]);
        } else {
            return Err(Error::Input(format!(
                "unsupported clause weight {weight} (expected 1 or {top})"
            )));
        }
    }
    if hard.len() + soft.len() != clause_count {
        return Err(Error::Input(format!(
            "header announced {clause_count} clauses, found {}",
            hard.len() + soft.len()
        )));
    }
    WcnfFormula::from_parts(var_count, hard, soft)
}

/// Result of [`solve_wcnf`]: `Sat` carries the best model found and its
/// cost (number of falsified soft clauses); `proved_optimal` is set when
/// the search closed the gap rather than running out of time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcnfResult {
    pub status: SolveStatus,
    pub proved_optimal: bool,
    pub model: Option<Vec<bool>>,
    pub cost: Option<u64>,
}

fn fresh_solver(f: &WcnfFormula, extra_vars: usize) -> Result<Solver> {
    let mut solver = Solver::new(BranchOrder::Activity);
    solver.ensure_vars(f.var_count() + extra_vars);
    for clause in f.hard() {
        solver.add_clause(clause)?;
    }
    Ok(solver)
}

/// Minimizes the number of falsified soft clauses subject to the hard
/// clauses, by binary search over a sequential-counter cardinality bound.
/// `budget` limits the whole search; on expiry the best model found so
/// far is returned with `proved_optimal` false.
pub fn solve_wcnf(f: &WcnfFormula, budget: Option<Duration>) -> Result<WcnfResult> {
    let deadline = budget.map(|b| Instant::now() + b);
    let mut solver = fresh_solver(f, 0)?;
    match solver.solve(&[], deadline)? {
        SolveStatus::Unsat => {
            return Ok(WcnfResult {
                status: SolveStatus::Unsat,
                proved_optimal: true,
                model: None,
                cost: None,
            })
        }
        SolveStatus::Timeout => {
            return Ok(WcnfResult {
                status: SolveStatus::Timeout,
                proved_optimal: false,
                model: None,
                cost: None,
            })
        }
        SolveStatus::Sat => {}
    }
    let mut best: Vec<bool> = solver.model();
    best.truncate(f.var_count());
    let mut hi = f.falsified_soft(&best);
    let mut lo = 0usize;
    let mut proved = true;

    // Indicators for "this soft clause is falsified".
    let falsifiers: Vec<i64> = f.soft().iter().map(|&l| -l).collect();
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let mut clauses = Vec::new();
        let mut next_var = f.var_count() + 1;
        at_most_k(&falsifiers, mid, &mut next_var, &mut clauses);
        let mut probe = fresh_solver(f, next_var - 1 - f.var_count())?;
        let mut infeasible = false;
        for clause in &clauses {
            probe.add_clause(clause)?;
        }
        match probe.solve(&[], deadline)? {
            SolveStatus::Sat => {
                let mut m = probe.model();
                m.truncate(f.var_count());
                let cost = f.falsified_soft(&m);
                debug_assert!(cost <= mid);
                best = m;
                hi = cost;
            }
            SolveStatus::Unsat => infeasible = true,
            SolveStatus::Timeout => {
                proved = false;
                break;
            }
        }
        if infeasible {
            lo = mid + 1;
        }
    }
    Ok(WcnfResult {
        status: SolveStatus::Sat,
        proved_optimal: proved,
        model: Some(best),
        cost: Some(hi as u64),
    })
}
