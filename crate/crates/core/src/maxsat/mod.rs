//! Layout minimization as partial MAX-SAT: encode the slot-assignment
//! problem for a bound on the array length, then shrink the occupied
//! size with an internal CDCL solver (descending on the padding chain,
//! or bisecting on the bound) or hand the weighted formula to an
//! external optimizer.

mod cardinality;
mod encoding;
mod wcnf;

pub use cardinality::{at_most_k, at_most_one, exactly_one, AmoEncoding};
pub use encoding::{decode, encode, encode_with, VarMap, VarTag};
pub use wcnf::{emit_wcnf, parse_wcnf, solve_wcnf, WcnfFormula, WcnfResult};

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::double_array::{greedy_build, BuildOrder, DoubleArray};
use crate::error::{Error, Result};
use crate::sat::{emit_cnf, run_external, BranchOrder, CnfFormula, Solver, SolveStatus};
use crate::trie::Trie;

/// How to search for the smallest layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Minimize the occupied size outright, reusing one incremental
    /// solver and descending one slot at a time (with jumps to each
    /// model's actual size).
    Full,
    /// A single feasibility probe: does a layout of length at most
    /// `bound` exist?
    Decision { bound: usize },
    /// Bisect the bound between the node count and the greedy size,
    /// treating per-probe timeouts as infeasible.
    BinarySearch,
}

/// Which solver executes the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverChoice {
    Internal,
    /// Run the given command with the problem file path appended.
    External { command: String },
}

/// Confidence in the returned layout. `Optimal` means minimality was
/// proved; `SemiOptimal` means a valid layout no larger than greedy was
/// found but time ran out before the proof; `Unknown` means the search
/// produced no evidence beyond the greedy fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptStatus {
    Optimal,
    SemiOptimal,
    Unknown,
}

/// Guards for the internal solver; beyond these the search bails out to
/// the greedy layout with `Unknown` status.
const MAX_INTERNAL_CLAUSES: usize = 5_000_000;
const MAX_INTERNAL_VARS: usize = 2_000_000;

fn over_capacity(f: &WcnfFormula) -> bool {
    f.hard().len() > MAX_INTERNAL_CLAUSES || f.var_count() > MAX_INTERNAL_VARS
}

/// The smaller of the two greedy layouts; the optimizer's starting point
/// and fallback.
fn greedy_baseline(trie: &Trie) -> DoubleArray {
    let dfs = greedy_build(trie, BuildOrder::Dfs);
    let bfs = greedy_build(trie, BuildOrder::Bfs);
    if bfs.size() < dfs.size() {
        bfs
    } else {
        dfs
    }
}

fn hard_solver(f: &WcnfFormula) -> Result<Solver> {
    let mut solver = Solver::new(BranchOrder::Activity);
    solver.ensure_vars(f.var_count());
    for clause in f.hard() {
        solver.add_clause(clause)?;
    }
    Ok(solver)
}

fn hard_cnf(f: &WcnfFormula) -> CnfFormula {
    let mut cnf = CnfFormula::new(f.var_count());
    for clause in f.hard() {
        cnf.add_clause(clause).expect("hard clauses are valid");
    }
    cnf
}

fn deadline(budget: Option<Duration>) -> Option<Instant> {
    budget.map(|b| Instant::now() + b)
}

/// Resizes an external model to the formula's variable count, treating
/// unreported variables as false.
fn fit_model(mut model: Vec<bool>, var_count: usize) -> Vec<bool> {
    model.resize(var_count, false);
    model
}

/// A uniquely named scratch file, removed on drop.
struct TempFile(PathBuf);

impl TempFile {
    fn write(extension: &str, contents: &str) -> Result<TempFile> {
        static SEQ: AtomicU64 = AtomicU64::new(0);
        let seq = SEQ.fetch_add(1, Ordering::Relaxed);
        let path = std::env::temp_dir().join(format!(
            "soda-maxsat-{}-{seq}.{extension}",
            std::process::id()
        ));
        std::fs::write(&path, contents)?;
        Ok(TempFile(path))
    }

    fn path(&self) -> &Path {
        &self.0
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

/// Outcome of one feasibility probe.
enum Probe {
    Feasible(Vec<bool>),
    Infeasible,
    TimedOut,
    OverCapacity,
}

/// Asks whether the hard clauses of `f` are satisfiable, via the chosen
/// solver, within `budget`.
fn probe(f: &WcnfFormula, solver: &SolverChoice, budget: Option<Duration>) -> Result<Probe> {
    match solver {
        SolverChoice::Internal => {
            if over_capacity(f) {
                return Ok(Probe::OverCapacity);
            }
            let mut s = hard_solver(f)?;
            Ok(match s.solve(&[], deadline(budget))? {
                SolveStatus::Sat => Probe::Feasible(s.model()),
                SolveStatus::Unsat => Probe::Infeasible,
                SolveStatus::Timeout => Probe::TimedOut,
            })
        }
        SolverChoice::External { command } => {
            let file = TempFile::write("cnf", &emit_cnf(&hard_cnf(f)))?;
            let res = run_external(file.path(), command, budget)?;
            Ok(match res.outcome.status {
                SolveStatus::Sat => Probe::Feasible(fit_model(
                    res.outcome.model.unwrap_or_default(),
                    f.var_count(),
                )),
                SolveStatus::Unsat => Probe::Infeasible,
                SolveStatus::Timeout => Probe::TimedOut,
            })
        }
    }
}

/// Searches for the smallest double array hosting `trie`, starting from
/// (and never returning anything larger than) the better greedy layout.
/// `budget` limits each individual solver call. Uses the pairwise
/// at-most-one encoding; see [`optimize_size_with`] to choose.
pub fn optimize_size(
    trie: &Trie,
    strategy: Strategy,
    budget: Option<Duration>,
    solver: &SolverChoice,
) -> Result<(DoubleArray, OptStatus)> {
    optimize_size_with(trie, strategy, budget, solver, AmoEncoding::Pairwise)
}

/// [`optimize_size`] with an explicit at-most-one encoding; `Sequential`
/// keeps the clause count near-linear on large tries.
pub fn optimize_size_with(
    trie: &Trie,
    strategy: Strategy,
    budget: Option<Duration>,
    solver: &SolverChoice,
    amo: AmoEncoding,
) -> Result<(DoubleArray, OptStatus)> {
    let greedy = greedy_baseline(trie);
    match strategy {
        Strategy::Decision { bound } => decision(trie, bound, budget, solver, amo, greedy),
        Strategy::BinarySearch => binary_search(trie, budget, solver, amo, greedy),
        Strategy::Full => match solver {
            SolverChoice::Internal => full_internal(trie, budget, amo, greedy),
            SolverChoice::External { command } => {
                full_external(trie, budget, command, amo, greedy)
            }
        },
    }
}

fn decision(
    trie: &Trie,
    bound: usize,
    budget: Option<Duration>,
    solver: &SolverChoice,
    amo: AmoEncoding,
    greedy: DoubleArray,
) -> Result<(DoubleArray, OptStatus)> {
    let (f, vm) = encode_with(trie, bound, amo)?;
    match probe(&f, solver, budget)? {
        Probe::Feasible(model) => {
            let (da, _) = decode(&model, &vm, trie)?;
            let status = if da.size() == trie.node_count() {
                OptStatus::Optimal
            } else {
                OptStatus::SemiOptimal
            };
            Ok((da, status))
        }
        Probe::Infeasible | Probe::TimedOut | Probe::OverCapacity => {
            Ok((greedy, OptStatus::Unknown))
        }
    }
}

fn binary_search(
    trie: &Trie,
    budget: Option<Duration>,
    solver: &SolverChoice,
    amo: AmoEncoding,
    greedy: DoubleArray,
) -> Result<(DoubleArray, OptStatus)> {
    let mut best = greedy;
    let mut lo = trie.node_count();
    let mut timed_out = false;
    while lo < best.size() {
        let k = lo + (best.size() - lo) / 2;
        let (f, vm) = encode_with(trie, k, amo)?;
        match probe(&f, solver, budget)? {
            Probe::Feasible(model) => {
                let (da, _) = decode(&model, &vm, trie)?;
                debug_assert!(da.size() <= k);
                best = da;
            }
            Probe::Infeasible => lo = k + 1,
            Probe::TimedOut => {
                // Conservatively treat the probed bound as infeasible.
                timed_out = true;
                lo = k + 1;
            }
            Probe::OverCapacity => return Ok((best, OptStatus::Unknown)),
        }
    }
    let status = if timed_out {
        OptStatus::SemiOptimal
    } else {
        OptStatus::Optimal
    };
    Ok((best, status))
}

fn full_internal(
    trie: &Trie,
    budget: Option<Duration>,
    amo: AmoEncoding,
    greedy: DoubleArray,
) -> Result<(DoubleArray, OptStatus)> {
    let mut best = greedy;
    if best.size() <= trie.node_count() {
        return Ok((best, OptStatus::Optimal));
    }
    let (f, vm) = encode_with(trie, best.size(), amo)?;
    if over_capacity(&f) {
        return Ok((best, OptStatus::Unknown));
    }
    let mut solver = hard_solver(&f)?;
    let status = loop {
        if best.size() <= trie.node_count() {
            break OptStatus::Optimal;
        }
        let k = best.size() - 1;
        let pad = vm.pad_var(k + 1).expect("slot within the encoded bound");
        match solver.solve(&[-pad], deadline(budget))? {
            SolveStatus::Sat => {
                let (da, _) = decode(&solver.model(), &vm, trie)?;
                debug_assert!(da.size() <= k);
                best = da;
            }
            SolveStatus::Unsat => break OptStatus::Optimal,
            SolveStatus::Timeout => break OptStatus::SemiOptimal,
        }
    };
    Ok((best, status))
}

fn full_external(
    trie: &Trie,
    budget: Option<Duration>,
    command: &str,
    amo: AmoEncoding,
    greedy: DoubleArray,
) -> Result<(DoubleArray, OptStatus)> {
    let (f, vm) = encode_with(trie, greedy.size(), amo)?;
    let file = TempFile::write("wcnf", &emit_wcnf(&f))?;
    let res = run_external(file.path(), command, budget)?;
    match res.outcome.status {
        SolveStatus::Sat => {
            let model = fit_model(res.outcome.model.unwrap_or_default(), f.var_count());
            let (da, _) = decode(&model, &vm, trie)?;
            let best = if da.size() <= greedy.size() { da } else { greedy };
            let status = if res.proved_optimal {
                OptStatus::Optimal
            } else {
                OptStatus::SemiOptimal
            };
            Ok((best, status))
        }
        SolveStatus::Unsat => Err(Error::Environment(
            "external solver reported an unsatisfiable system at a bound with a known layout"
                .into(),
        )),
        SolveStatus::Timeout => Ok((greedy, OptStatus::SemiOptimal)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double_array::validate;
    use crate::soda::exact_build;
    use crate::trie::enumerate_tries;
    use std::io::Write;

    fn chain(len: usize) -> Trie {
        Trie::from_strings(1, &[vec![1; len]]).unwrap()
    }

    fn sample_trie() -> Trie {
        // First-fit places the root's lone child at slot 3, which blocks
        // the grandchildren's window and forces five slots; choosing the
        // root's base less greedily packs everything into four.
        Trie::from_strings(2, &[vec![2, 1], vec![2, 2]]).unwrap()
    }

    #[test]
    fn unary_chain_is_proved_optimal_at_its_node_count() {
        let trie = chain(4); // five nodes
        let (da, status) =
            optimize_size(&trie, Strategy::Full, None, &SolverChoice::Internal).unwrap();
        assert_eq!(da.size(), 5);
        assert_eq!(status, OptStatus::Optimal);
        assert!(validate(&da, &trie).is_empty());
    }

    #[test]
    fn full_and_binary_search_match_the_exact_builder() {
        for sigma in 1..=2usize {
            for m in 1..=4usize {
                for trie in enumerate_tries(sigma, m).unwrap() {
                    let want = exact_build(&trie).unwrap().size();
                    for (strategy, amo) in [
                        (Strategy::Full, AmoEncoding::Pairwise),
                        (Strategy::Full, AmoEncoding::Sequential),
                        (Strategy::BinarySearch, AmoEncoding::Pairwise),
                    ] {
                        let (da, status) = optimize_size_with(
                            &trie,
                            strategy,
                            None,
                            &SolverChoice::Internal,
                            amo,
                        )
                        .unwrap();
                        assert_eq!(da.size(), want, "sigma={sigma} m={m} {strategy:?}");
                        assert_eq!(status, OptStatus::Optimal);
                        assert!(validate(&da, &trie).is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn decision_probes_report_feasibility() {
        let trie = sample_trie();
        let exact = exact_build(&trie).unwrap().size();
        let (da, status) = optimize_size(
            &trie,
            Strategy::Decision { bound: exact },
            None,
            &SolverChoice::Internal,
        )
        .unwrap();
        assert!(da.size() <= exact);
        assert_ne!(status, OptStatus::Unknown);

        let greedy = greedy_baseline(&trie);
        let (fallback, status) = optimize_size(
            &trie,
            Strategy::Decision { bound: exact - 1 },
            None,
            &SolverChoice::Internal,
        )
        .unwrap();
        assert_eq!(fallback.size(), greedy.size());
        assert_eq!(status, OptStatus::Unknown);
    }

    #[test]
    fn feasibility_is_monotone_and_padding_counts_occupancy() {
        for trie in [sample_trie(), chain(3)] {
            let exact = exact_build(&trie).unwrap().size();
            let greedy = greedy_baseline(&trie).size();
            for bound in (exact.saturating_sub(1).max(1))..=(greedy + 2) {
                let (f, vm) = encode(&trie, bound).unwrap();
                let outcome =
                    crate::sat::solve_cnf(&hard_cnf(&f), &[], None).unwrap();
                if bound < exact {
                    assert_eq!(outcome.status, SolveStatus::Unsat, "bound {bound}");
                    continue;
                }
                assert_eq!(outcome.status, SolveStatus::Sat, "bound {bound}");
                let model = outcome.model.unwrap();
                let (_, occupied) = decode(&model, &vm, &trie).unwrap();
                let true_pads = (1..=bound)
                    .filter(|&slot| {
                        model[vm.pad_var(slot).unwrap() as usize - 1]
                    })
                    .count();
                assert_eq!(true_pads, occupied, "padding is downward closed");
                assert_eq!(f.falsified_soft(&model), occupied);
            }
        }
    }

    /// Writes an executable shell script and a companion directory,
    /// mirroring the external-solver stubs used by the adapter's tests.
    struct StubDir(PathBuf);

    impl StubDir {
        fn new(tag: &str) -> Self {
            let dir = std::env::temp_dir().join(format!(
                "optimize-stubs-{}-{tag}",
                std::process::id()
            ));
            std::fs::create_dir_all(&dir).unwrap();
            StubDir(dir)
        }

        fn script(&self, name: &str, body: &str) -> PathBuf {
            let path = self.0.join(name);
            let mut file = std::fs::File::create(&path).unwrap();
            writeln!(file, "#!/bin/sh\n{body}").unwrap();
            drop(file);
            let mut perms = std::fs::metadata(&path).unwrap().permissions();
            std::os::unix::fs::PermissionsExt::set_mode(&mut perms, 0o755);
            std::fs::set_permissions(&path, perms).unwrap();
            path
        }
    }

    impl Drop for StubDir {
        fn drop(&mut self) {
            let _ = std::fs::remove_dir_all(&self.0);
        }
    }

    /// Formats a model as solver `v` lines.
    fn value_lines(model: &[bool]) -> String {
        let lits: Vec<String> = model
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let var = (i + 1) as i64;
                (if v { var } else { -var }).to_string()
            })
            .collect();
        format!("echo 'v {} 0'", lits.join(" "))
    }

    #[test]
    fn full_external_decodes_an_optimum_claim() {
        let trie = sample_trie();
        let exact = exact_build(&trie).unwrap().size();
        let greedy = greedy_baseline(&trie);
        assert!(exact < greedy.size(), "fixture must leave greedy slack");
        // Bake a genuinely optimal model into the stub.
        let (f, _) = encode(&trie, greedy.size()).unwrap();
        let solved = solve_wcnf(&f, None).unwrap();
        let model = solved.model.unwrap();
        let dir = StubDir::new("optimum");
        let stub = dir.script(
            "opt.sh",
            &format!(
                "test -f \"$1\" || exit 3\necho 's OPTIMUM FOUND'\necho 'o {}'\n{}",
                solved.cost.unwrap(),
                value_lines(&model)
            ),
        );
        let (da, status) = optimize_size(
            &trie,
            Strategy::Full,
            None,
            &SolverChoice::External {
                command: stub.to_str().unwrap().to_string(),
            },
        )
        .unwrap();
        assert_eq!(da.size(), exact);
        assert_eq!(status, OptStatus::Optimal);
    }

    #[test]
    fn full_external_without_optimum_claim_is_semi_optimal() {
        let trie = sample_trie();
        let greedy = greedy_baseline(&trie);
        let (f, _) = encode(&trie, greedy.size()).unwrap();
        // Any hard-satisfying model will do for a plain SATISFIABLE reply.
        let outcome = crate::sat::solve_cnf(&hard_cnf(&f), &[], None).unwrap();
        let model = outcome.model.unwrap();
        let dir = StubDir::new("plain-sat");
        let stub = dir.script(
            "sat.sh",
            &format!("echo 's SATISFIABLE'\n{}", value_lines(&model)),
        );
        let (da, status) = optimize_size(
            &trie,
            Strategy::Full,
            None,
            &SolverChoice::External {
                command: stub.to_str().unwrap().to_string(),
            },
        )
        .unwrap();
        assert!(da.size() <= greedy.size());
        assert_eq!(status, OptStatus::SemiOptimal);
    }

    #[test]
    fn full_external_timeout_falls_back_to_greedy() {
        let trie = sample_trie();
        let greedy = greedy_baseline(&trie);
        let dir = StubDir::new("slow");
        let stub = dir.script("slow.sh", "sleep 5\necho 's SATISFIABLE'");
        let (da, status) = optimize_size(
            &trie,
            Strategy::Full,
            Some(Duration::from_millis(60)),
            &SolverChoice::External {
                command: stub.to_str().unwrap().to_string(),
            },
        )
        .unwrap();
        assert_eq!(da.size(), greedy.size());
        assert_eq!(status, OptStatus::SemiOptimal);
    }

    #[test]
    fn full_external_unsat_reply_is_an_environment_error() {
        let trie = sample_trie();
        let dir = StubDir::new("bogus-unsat");
        let stub = dir.script("unsat.sh", "echo 's UNSATISFIABLE'");
        let err = optimize_size(
            &trie,
            Strategy::Full,
            None,
            &SolverChoice::External {
                command: stub.to_str().unwrap().to_string(),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Environment(_)));
    }

    #[test]
    fn external_decision_probe_decodes_a_witness() {
        let trie = sample_trie();
        let exact = exact_build(&trie).unwrap().size();
        let (f, _) = encode(&trie, exact).unwrap();
        let outcome = crate::sat::solve_cnf(&hard_cnf(&f), &[], None).unwrap();
        let model = outcome.model.unwrap();
        let dir = StubDir::new("decision");
        let stub = dir.script(
            "probe.sh",
            &format!("echo 's SATISFIABLE'\n{}", value_lines(&model)),
        );
        let (da, status) = optimize_size(
            &trie,
            Strategy::Decision { bound: exact },
            None,
            &SolverChoice::External {
                command: stub.to_str().unwrap().to_string(),
            },
        )
        .unwrap();
        assert_eq!(da.size(), exact);
        assert_ne!(status, OptStatus::Unknown);
    }

    #[test]
    fn zero_budget_descent_keeps_the_greedy_layout() {
        let trie = sample_trie();
        let greedy = greedy_baseline(&trie);
        let (da, status) = optimize_size(
            &trie,
            Strategy::Full,
            Some(Duration::ZERO),
            &SolverChoice::Internal,
        )
        .unwrap();
        assert_eq!(da.size(), greedy.size());
        assert_eq!(status, OptStatus::SemiOptimal);
    }
}
