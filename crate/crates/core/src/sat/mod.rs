//! CNF satisfiability: the formula type, a complete conflict-driven
//! solver, DIMACS serialization, and a process adapter for external
//! solvers.

mod dimacs;
mod external;
mod solver;

pub use dimacs::{emit_cnf, parse_cnf};
pub use external::{run_external, ExternalResult};
pub use solver::{BranchOrder, Solver};

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// A CNF formula over variables `1..=var_count`, clauses as signed
/// 1-based literals. Empty clauses are rejected at input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    var_count: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(var_count: usize) -> Self {
        CnfFormula {
            var_count,
            clauses: Vec::new(),
        }
    }

    /// Appends a clause. Literals must be nonzero with variables in
    /// range, and the clause must be nonempty.
    pub fn add_clause(&mut self, lits: &[i64]) -> Result<()> {
        if lits.is_empty() {
            return Err(Error::Input("empty clause".into()));
        }
        for &l in lits {
            if l == 0 || l.unsigned_abs() as usize > self.var_count {
                return Err(Error::Input(format!(
                    "literal {l} outside ±[1..{}]",
                    self.var_count
                )));
            }
        }
        self.clauses.push(lits.to_vec());
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }
}

/// Result category of a solve call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
}

/// Outcome of a solve call; `model` is present exactly when satisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub model: Option<Vec<bool>>,
}

/// One-shot complete solve of `f` under the given assumption literals,
/// with an optional wall-clock budget (checked at decision boundaries).
/// Deterministic: fixed branching order, no randomization.
pub fn solve_cnf(
    f: &CnfFormula,
    assumptions: &[i64],
    budget: Option<Duration>,
) -> Result<SolveOutcome> {
    for &a in assumptions {
        if a == 0 || a.unsigned_abs() as usize > f.var_count {
            return Err(Error::Input(format!(
                "assumption literal {a} outside ±[1..{}]",
                f.var_count
            )));
        }
    }
    let mut solver = Solver::new(BranchOrder::Fixed);
    solver.ensure_vars(f.var_count);
    for c in f.clauses() {
        solver.add_clause(c)?;
    }
    let deadline = budget.map(|b| Instant::now() + b);
    let status = solver.solve(assumptions, deadline)?;
    let model = match status {
        SolveStatus::Sat => {
            let m = solver.model();
            debug_assert!(matches!(check_model(f, &m), Ok(true)));
            Some(m)
        }
        _ => None,
    };
    Ok(SolveOutcome { status, model })
}

/// Whether a total assignment (`model[v-1]` = value of variable `v`)
/// satisfies every clause of `f`.
pub fn check_model(f: &CnfFormula, model: &[bool]) -> Result<bool> {
    if model.len() != f.var_count {
        return Err(Error::Input(format!(
            "assignment covers {} of {} variables",
            model.len(),
            f.var_count
        )));
    }
    Ok(f.clauses().iter().all(|c| {
        c.iter()
            .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
    }))
}
