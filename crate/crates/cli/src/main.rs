//! `soda` — build, minimize, and verify double-array tries, and generate
//! the hardness-reduction instance families used to stress them.
//!
//! Exit codes: 0 on success, 2 for input or verification failures, 3 when
//! a guarded search exceeds its capacity, 4 for environment trouble
//! (unwritable outputs, broken external solvers).

mod commands;
mod config;
mod formats;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use soda_core::double_array::BuildOrder;
use soda_core::maxsat::{AmoEncoding, Strategy};
use soda_core::{Error, Result};

#[derive(Parser)]
#[command(name = "soda", version, about = "Double-array trie layout workbench")]
struct Cli {
    /// Configuration file with `key = value` lines (solver, solver-cmd,
    /// timeout); `SODA_*` environment variables override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Dfs,
    Bfs,
}

impl From<OrderArg> for BuildOrder {
    fn from(order: OrderArg) -> Self {
        match order {
            OrderArg::Dfs => BuildOrder::Dfs,
            OrderArg::Bfs => BuildOrder::Bfs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Full,
    Decision,
    Binsearch,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Internal,
    External,
}

#[derive(Clone, Copy, ValueEnum)]
enum AmoArg {
    Pairwise,
    Seq,
}

impl From<AmoArg> for AmoEncoding {
    fn from(amo: AmoArg) -> Self {
        match amo {
            AmoArg::Pairwise => AmoEncoding::Pairwise,
            AmoArg::Seq => AmoEncoding::Sequential,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a double array from a word list with the greedy first-fit
    /// layout.
    Build {
        /// Word list, one word per line.
        input: PathBuf,
        /// Where to write the serialized array.
        #[arg(long, short)]
        output: PathBuf,
        /// Node placement order.
        #[arg(long, value_enum, default_value_t = OrderArg::Bfs)]
        order: OrderArg,
    },
    /// Shrink the layout with the solver pipeline (never returns anything
    /// larger than greedy).
    Optimize {
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Binsearch)]
        strategy: StrategyArg,
        /// Slot bound; required by (and only meaningful for) the decision
        /// strategy.
        #[arg(long)]
        bound: Option<usize>,
        /// Budget per solver call, e.g. 500ms, 30s, 2m.
        #[arg(long)]
        timeout: Option<String>,
        #[arg(long, value_enum)]
        solver: Option<SolverArg>,
        /// Command invoked with the problem file path appended (external
        /// solver only).
        #[arg(long)]
        solver_cmd: Option<String>,
        /// At-most-one encoding; pairwise is quadratic, seq near-linear.
        #[arg(long, value_enum, default_value_t = AmoArg::Seq)]
        amo: AmoArg,
    },
    /// Check a serialized array against the word list it should store.
    Verify {
        /// Serialized double array.
        da: PathBuf,
        /// Word list the array must represent.
        input: PathBuf,
    },
    /// Generate instance files (with a `.meta` sidecar describing them).
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run every row of a benchmark manifest and print the report table.
    Bench {
        /// Rows of `name path prefix strategy timeout`.
        manifest: PathBuf,
        /// Also write the table as tab-separated rows.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact (exponential) reference solvers on instance files.
    #[command(subcommand)]
    Exact(ExactCmd),
    /// Solve a weighted CNF file and print a result stream.
    SolveWcnf {
        file: PathBuf,
        #[arg(long)]
        timeout: Option<String>,
        #[arg(long, value_enum)]
        solver: Option<SolverArg>,
        #[arg(long)]
        solver_cmd: Option<String>,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Sample a restricted digraph with a planted source-to-sink
    /// Hamiltonian path.
    Rdhp {
        /// Vertex count (at least 4).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra random edges beyond the out-degree minimum (default n/2).
        #[arg(long)]
        extra: Option<usize>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Translate a graph file into its superstring instance.
    Scs {
        #[arg(long, value_name = "FILE")]
        from_rdhp: PathBuf,
        /// Accept out-degree-1 vertices in the input graph.
        #[arg(long)]
        relax_rdhp: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Emit a wildcard-string alignment instance, either by expanding a
    /// superstring instance or from a word list's trie.
    Soda {
        #[arg(long, value_name = "FILE")]
        from_scs: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        from_words: Option<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Sample a random graph and translate it into a shifted matrix
    /// cover instance.
    Smc {
        #[arg(long)]
        n: usize,
        /// Edge probability.
        #[arg(long, default_value_t = 0.4)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExactCmd {
    /// Brute-force alignment optimum of an index-locked instance.
    Soda {
        file: PathBuf,
        /// String-count cap guarding the factorial search.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Exact shortest-common-superstring length via subset dynamic
    /// programming.
    Scs {
        file: PathBuf,
        /// String-count cap guarding the exponential table.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Exhaustive shift search on a matrix cover instance.
    Smc { file: PathBuf },
}

fn solver_flags(
    solver: Option<SolverArg>,
    solver_cmd: Option<String>,
    timeout: Option<String>,
) -> config::Layer {
    config::Layer {
        solver: solver.map(|s| {
            match s {
                SolverArg::Internal => "internal",
                SolverArg::External => "external",
            }
            .to_string()
        }),
        solver_cmd,
        timeout,
    }
}

fn run(cli: Cli) -> Result<()> {
    let config_path = cli.config.as_deref();
    match cli.command {
        Command::Build {
            input,
            output,
            order,
        } => commands::cmd_build(&input, &output, order.into()),
        Command::Optimize {
            input,
            output,
            strategy,
            bound,
            timeout,
            solver,
            solver_cmd,
            amo,
        } => {
            let strategy = match strategy {
                StrategyArg::Full => Strategy::Full,
                StrategyArg::Binsearch => Strategy::BinarySearch,
                StrategyArg::Decision => Strategy::Decision {
                    bound: bound.ok_or_else(|| {
                        Error::Input("the decision strategy needs --bound".into())
                    })?,
                },
            };
            let cfg = config::resolve(config_path, solver_flags(solver, solver_cmd, timeout))?;
            commands::cmd_optimize(&input, &output, strategy, amo.into(), &cfg)
        }
        Command::Verify { da, input } => commands::cmd_verify(&da, &input),
        Command::Gen(gen) => match gen {
            GenCmd::Rdhp { n, seed, extra, out } => commands::cmd_gen_rdhp(n, seed, extra, &out),
            GenCmd::Scs {
                from_rdhp,
                relax_rdhp,
                out,
            } => commands::cmd_gen_scs(&from_rdhp, relax_rdhp, &out),
            GenCmd::Soda {
                from_scs,
                from_words,
                out,
            } => commands::cmd_gen_soda(from_scs.as_deref(), from_words.as_deref(), &out),
            GenCmd::Smc { n, p, seed, out } => commands::cmd_gen_smc(n, p, seed, &out),
        },
        Command::Bench { manifest, out } => {
            let cfg = config::resolve(config_path, config::Layer::default())?;
            commands::cmd_bench(&manifest, out.as_deref(), &cfg)
        }
        Command::Exact(exact) => match exact {
            ExactCmd::Soda { file, limit } => commands::cmd_exact_soda(&file, limit),
            ExactCmd::Scs { file, cap } => commands::cmd_exact_scs(&file, cap),
            ExactCmd::Smc { file } => commands::cmd_exact_smc(&file),
        },
        Command::SolveWcnf {
            file,
            timeout,
            solver,
            solver_cmd,
        } => {
            let cfg = config::resolve(config_path, solver_flags(solver, solver_cmd, timeout))?;
            commands::cmd_solve_wcnf(&file, &cfg)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        let code = match e {
            Error::Input(_) | Error::Structural(_) => 2,
            Error::Capacity(_) => 3,
            Error::Environment(_) => 4,
        };
        std::process::exit(code);
    }
}
