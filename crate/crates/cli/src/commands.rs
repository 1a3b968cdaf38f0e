//! Implementations of the subcommands: pipeline steps print their stats
//! line by line and write canonical artifacts, so identical inputs always
//! produce identical bytes.

use std::path::Path;
use std::time::Duration;

use soda_core::double_array::{greedy_build, validate, BuildOrder, DoubleArray};
use soda_core::maxsat::{
    optimize_size_with, parse_wcnf, solve_wcnf, AmoEncoding, OptStatus, SolverChoice, Strategy,
};
use soda_core::reductions::{
    brute_force_smc, coloring_to_smc, encode_scs_to_soda, exact_scs, rdhp_to_scs, sample_graph,
    sample_rdhp_with, shifts_to_coloring, Color, DEFAULT_SCS_CAP,
};
use soda_core::sat::run_external;
use soda_core::soda::{brute_force_soda, trie_to_soda, SodaSolution, DEFAULT_ORACLE_LIMIT};
use soda_core::trie::Trie;
use soda_core::{Error, Result};

use crate::config::RunConfig;
use crate::formats::{
    parse_da, parse_duration, parse_rdhp, parse_scs, parse_smc, parse_soda, read_input,
    read_words, to_soda_instance, write_da, write_meta, write_rdhp, write_scs, write_smc,
    write_soda, AlphabetMapping,
};

/// Builds the trie for a word list under the ascending character mapping.
fn trie_from_words(words: &[String]) -> Result<(AlphabetMapping, Trie)> {
    let mapping = AlphabetMapping::from_words(words);
    let symbols = mapping.encode_all(words)?;
    let trie = Trie::from_strings(mapping.sigma(), &symbols)?;
    Ok((mapping, trie))
}

fn density(nodes: usize, size: usize) -> f64 {
    nodes as f64 / size as f64
}

/// The smaller of the two greedy layouts, matching the optimizer's
/// baseline.
fn best_greedy(trie: &Trie) -> DoubleArray {
    let dfs = greedy_build(trie, BuildOrder::Dfs);
    let bfs = greedy_build(trie, BuildOrder::Bfs);
    if bfs.size() < dfs.size() {
        bfs
    } else {
        dfs
    }
}

pub fn cmd_build(input: &Path, output: &Path, order: BuildOrder) -> Result<()> {
    let words = read_words(input)?;
    let (mapping, trie) = trie_from_words(&words)?;
    let da = greedy_build(&trie, order);
    std::fs::write(output, write_da(&da))?;
    println!("words = {}", words.len());
    println!("sigma = {}", mapping.sigma());
    println!("M = {}", trie.node_count());
    println!("N = {}", da.size());
    println!("density = {:.2}", density(trie.node_count(), da.size()));
    println!("wrote {}", output.display());
    Ok(())
}

fn status_name(status: OptStatus) -> &'static str {
    match status {
        OptStatus::Optimal => "optimal",
        OptStatus::SemiOptimal => "semi-optimal",
        OptStatus::Unknown => "semi-optimal (greedy fallback)",
    }
}

pub fn cmd_optimize(
    input: &Path,
    output: &Path,
    strategy: Strategy,
    amo: AmoEncoding,
    cfg: &RunConfig,
) -> Result<()> {
    let words = read_words(input)?;
    let (mapping, trie) = trie_from_words(&words)?;
    let greedy = best_greedy(&trie);
    let (da, status) = optimize_size_with(&trie, strategy, cfg.timeout, &cfg.solver, amo)?;
    std::fs::write(output, write_da(&da))?;
    println!("words = {}", words.len());
    println!("sigma = {}", mapping.sigma());
    println!("M = {}", trie.node_count());
    println!("greedy N = {}", greedy.size());
    println!("N = {}", da.size());
    println!("density = {:.2}", density(trie.node_count(), da.size()));
    println!("status = {}", status_name(status));
    println!("wrote {}", output.display());
    Ok(())
}

pub fn cmd_verify(da_path: &Path, input: &Path) -> Result<()> {
    let da = parse_da(&read_input(da_path)?)?;
    let words = read_words(input)?;
    let (mapping, trie) = trie_from_words(&words)?;
    let mut violations = validate(&da, &trie);
    for u in 1..=trie.node_count().min(da.node_count()) {
        let flagged = da.terminal_at(da.slot_of(u));
        if flagged != trie.is_terminal(u) {
            violations.push(format!(
                "node {u}: terminal flag is {flagged}, word list implies {}",
                trie.is_terminal(u)
            ));
        }
    }
    for word in &words {
        let stored = mapping
            .encode(word)
            .and_then(|symbols| da.contains(&symbols));
        match stored {
            Ok(true) => {}
            Ok(false) => violations.push(format!("word {word:?} is not stored")),
            Err(e) => violations.push(format!("word {word:?}: {e}")),
        }
    }
    if violations.is_empty() {
        println!(
            "ok: {} words, {} nodes in {} slots",
            words.len(),
            da.node_count(),
            da.size()
        );
        Ok(())
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        Err(Error::Structural(format!(
            "verification failed with {} violation(s)",
            violations.len()
        )))
    }
}

pub fn cmd_gen_rdhp(n: usize, seed: u64, extra: Option<usize>, out: &Path) -> Result<()> {
    let extra = extra.unwrap_or(n / 2);
    let (g, planted) = sample_rdhp_with(n, extra, seed)?;
    std::fs::write(out, write_rdhp(&g))?;
    let planted_text = planted
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    write_meta(
        out,
        &[
            ("kind", "rdhp".into()),
            ("seed", seed.to_string()),
            ("n", g.n().to_string()),
            ("m", g.m().to_string()),
            ("extra", extra.to_string()),
            ("planted", planted_text),
        ],
    )?;
    println!("wrote {} (n = {}, m = {}, planted path)", out.display(), g.n(), g.m());
    Ok(())
}

pub fn cmd_gen_scs(from_rdhp: &Path, relax: bool, out: &Path) -> Result<()> {
    let g = parse_rdhp(&read_input(from_rdhp)?, relax)?;
    let scs = rdhp_to_scs(&g);
    std::fs::write(out, write_scs(&scs))?;
    write_meta(
        out,
        &[
            ("kind", "scs".into()),
            ("source", from_rdhp.display().to_string()),
            ("sigma", scs.sigma().to_string()),
            ("strings", scs.strings().len().to_string()),
            ("target", scs.target_length().to_string()),
        ],
    )?;
    println!(
        "wrote {} ({} strings over {} symbols, target {})",
        out.display(),
        scs.strings().len(),
        scs.sigma(),
        scs.target_length()
    );
    Ok(())
}

pub fn cmd_gen_soda(
    from_scs: Option<&Path>,
    from_words: Option<&Path>,
    out: &Path,
) -> Result<()> {
    match (from_scs, from_words) {
        (Some(path), None) => {
            let scs = parse_scs(&read_input(path)?)?;
            let enc = encode_scs_to_soda(&scs);
            std::fs::write(out, write_soda(enc.sigma(), enc.strings()))?;
            write_meta(
                out,
                &[
                    ("kind", "soda".into()),
                    ("source", path.display().to_string()),
                    ("sigma", enc.sigma().to_string()),
                    ("strings", enc.strings().len().to_string()),
                    ("subblock", enc.subblock().to_string()),
                    ("block", enc.block().to_string()),
                    ("target", enc.target_length().to_string()),
                ],
            )?;
            println!(
                "wrote {} ({} strings over {} letters, target {})",
                out.display(),
                enc.strings().len(),
                enc.sigma(),
                enc.target_length()
            );
        }
        (None, Some(path)) => {
            let words = read_words(path)?;
            let (_, trie) = trie_from_words(&words)?;
            let inst = trie_to_soda(&trie);
            let strings: Vec<_> = inst.strings().collect();
            std::fs::write(out, write_soda(inst.sigma(), &strings))?;
            write_meta(
                out,
                &[
                    ("kind", "soda".into()),
                    ("source", path.display().to_string()),
                    ("sigma", inst.sigma().to_string()),
                    ("strings", strings.len().to_string()),
                ],
            )?;
            println!(
                "wrote {} ({} strings over {} letters)",
                out.display(),
                strings.len(),
                inst.sigma()
            );
        }
        _ => {
            return Err(Error::Input(
                "exactly one of --from-scs and --from-words must be given".into(),
            ))
        }
    }
    Ok(())
}

pub fn cmd_gen_smc(n: usize, p: f64, seed: u64, out: &Path) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Input(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let edges = sample_graph(n, p, seed);
    let inst = coloring_to_smc(n, &edges)?;
    std::fs::write(out, write_smc(&inst))?;
    let edge_text = edges
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect::<Vec<_>>()
        .join(" ");
    write_meta(
        out,
        &[
            ("kind", "smc".into()),
            ("seed", seed.to_string()),
            ("n", n.to_string()),
            ("p", p.to_string()),
            ("edges", edge_text),
        ],
    )?;
    println!(
        "wrote {} ({} rows, {} columns, {} edges)",
        out.display(),
        inst.rows(),
        inst.cols(),
        edges.len()
    );
    Ok(())
}

fn text_tokens(text: &[Option<usize>]) -> String {
    text.iter()
        .map(|cell| match cell {
            Some(letter) => letter.to_string(),
            None => "*".into(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn offsets_tokens(solution: &SodaSolution) -> String {
    solution
        .offsets
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_exact_soda(file: &Path, limit: Option<usize>) -> Result<()> {
    let (sigma, strings) = parse_soda(&read_input(file)?)?;
    let inst = to_soda_instance(sigma, &strings)?;
    let solution = brute_force_soda(&inst, limit.unwrap_or(DEFAULT_ORACLE_LIMIT))?;
    println!("optimum = {}", solution.length());
    println!("text = {}", text_tokens(&solution.text));
    println!("offsets = {}", offsets_tokens(&solution));
    Ok(())
}

pub fn cmd_exact_scs(file: &Path, cap: Option<usize>) -> Result<()> {
    let scs = parse_scs(&read_input(file)?)?;
    let (len, witness) = exact_scs(scs.strings(), cap.unwrap_or(DEFAULT_SCS_CAP))?;
    let target = scs.target_length();
    println!("optimum = {len}");
    println!("target = {target}");
    let verdict = match len.cmp(&target) {
        std::cmp::Ordering::Less => "below-target",
        std::cmp::Ordering::Equal => "at-target",
        std::cmp::Ordering::Greater => "above-target",
    };
    println!("verdict = {verdict}");
    println!(
        "witness = {}",
        witness
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(())
}

pub fn cmd_exact_smc(file: &Path) -> Result<()> {
    let inst = parse_smc(&read_input(file)?)?;
    match brute_force_smc(&inst)? {
        Some(witness) => {
            println!(
                "witness shifts = {}",
                witness
                    .shifts
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            println!(
                "sequence = {}",
                witness
                    .sequence
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            if inst.cols() == 3 * inst.rows() && inst.k() == 3 {
                let colors = shifts_to_coloring(&inst, &witness.shifts)?;
                let names = colors
                    .iter()
                    .map(|c| match c {
                        Color::Red => "red",
                        Color::Green => "green",
                        Color::Blue => "blue",
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                println!("colors = {names}");
            }
        }
        None => println!("no witness"),
    }
    Ok(())
}

pub fn cmd_solve_wcnf(file: &Path, cfg: &RunConfig) -> Result<()> {
    let formula = parse_wcnf(&read_input(file)?)?;
    let (status, proved, cost, model) = match &cfg.solver {
        SolverChoice::Internal => {
            let res = solve_wcnf(&formula, cfg.timeout)?;
            (res.status, res.proved_optimal, res.cost, res.model)
        }
        SolverChoice::External { command } => {
            let res = run_external(file, command, cfg.timeout)?;
            (
                res.outcome.status,
                res.proved_optimal,
                res.cost,
                res.outcome.model,
            )
        }
    };
    if let Some(cost) = cost {
        println!("o {cost}");
    }
    use soda_core::sat::SolveStatus;
    let line = match status {
        SolveStatus::Sat if proved => "s OPTIMUM FOUND",
        SolveStatus::Sat => "s SATISFIABLE",
        SolveStatus::Unsat => "s UNSATISFIABLE",
        SolveStatus::Timeout => "s UNKNOWN",
    };
    println!("{line}");
    if let Some(model) = model {
        let lits = (1..=formula.var_count().min(model.len()))
            .map(|v| {
                if model[v - 1] {
                    v.to_string()
                } else {
                    format!("-{v}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ");
        println!("v {lits} 0");
    }
    Ok(())
}

/// One manifest entry: dataset name, word list path, prefix count, SAT
/// strategy, and per-call budget.
struct ManifestRow {
    name: String,
    path: std::path::PathBuf,
    prefix: Option<usize>,
    strategy: Strategy,
    timeout: Duration,
}

fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [name, path, prefix, strategy, timeout] = fields.as_slice() else {
            return Err(Error::Input(format!(
                "manifest line {}: want `name path prefix strategy timeout`",
                lineno + 1
            )));
        };
        let prefix = match *prefix {
            "all" => None,
            count => Some(count.parse::<usize>().map_err(|_| {
                Error::Input(format!("manifest line {}: bad prefix {count:?}", lineno + 1))
            })?),
        };
        let strategy = match *strategy {
            "full" => Strategy::Full,
            "binsearch" => Strategy::BinarySearch,
            other => match other.strip_prefix("decision:") {
                Some(bound) => Strategy::Decision {
                    bound: bound.parse().map_err(|_| {
                        Error::Input(format!(
                            "manifest line {}: bad decision bound {bound:?}",
                            lineno + 1
                        ))
                    })?,
                },
                None => {
                    return Err(Error::Input(format!(
                        "manifest line {}: unknown strategy {other:?}",
                        lineno + 1
                    )))
                }
            },
        };
        rows.push(ManifestRow {
            name: name.to_string(),
            path: path.into(),
            prefix,
            strategy,
            timeout: parse_duration(timeout)?,
        });
    }
    if rows.is_empty() {
        return Err(Error::Input("manifest lists no runs".into()));
    }
    Ok(rows)
}

/// A finished benchmark row; `sat` is `None` when the strategy produced
/// neither a proof nor a witness within its budget.
struct BenchOutcome {
    name: String,
    nodes: Option<usize>,
    greedy: Option<usize>,
    sat: Option<usize>,
    status: String,
}

fn cell(value: Option<usize>) -> String {
    value.map_or_else(|| "-".into(), |v| v.to_string())
}

fn density_cell(nodes: Option<usize>, size: Option<usize>) -> String {
    match (nodes, size) {
        (Some(m), Some(n)) => format!("{:.2}", density(m, n)),
        _ => "-".into(),
    }
}

fn run_bench_row(row: &ManifestRow, cfg: &RunConfig) -> Result<BenchOutcome> {
    let words = read_words(&row.path)?;
    let take = row.prefix.unwrap_or(words.len());
    if take == 0 || take > words.len() {
        return Err(Error::Input(format!(
            "prefix {take} outside 1..={} words",
            words.len()
        )));
    }
    let words = words[..take].to_vec();
    let (_, trie) = trie_from_words(&words)?;
    let greedy = best_greedy(&trie);
    let (da, status) = optimize_size_with(
        &trie,
        row.strategy,
        Some(row.timeout),
        &cfg.solver,
        AmoEncoding::Sequential,
    )?;
    let (sat, status) = match status {
        OptStatus::Optimal => (Some(da.size()), "optimal".to_string()),
        OptStatus::SemiOptimal => (Some(da.size()), "semi-optimal".to_string()),
        OptStatus::Unknown => (None, "timeout".to_string()),
    };
    Ok(BenchOutcome {
        name: row.name.clone(),
        nodes: Some(trie.node_count()),
        greedy: Some(greedy.size()),
        sat,
        status,
    })
}

fn render_table(rows: &[[String; 7]]) -> String {
    let mut widths = [0usize; 7];
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (k, (cell, width)) in row.iter().zip(widths).enumerate() {
            if k > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if k + 1 < row.len() {
                line.push_str(&" ".repeat(width - cell.len()));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn cmd_bench(manifest: &Path, out: Option<&Path>, cfg: &RunConfig) -> Result<()> {
    let rows = parse_manifest(&read_input(manifest)?)?;
    let outcomes: Vec<BenchOutcome> = rows
        .iter()
        .map(|row| {
            run_bench_row(row, cfg).unwrap_or_else(|e| BenchOutcome {
                name: row.name.clone(),
                nodes: None,
                greedy: None,
                sat: None,
                status: format!("error: {e}"),
            })
        })
        .collect();

    let header = [
        "name", "nodes", "greedy", "g-density", "sat", "s-density", "status",
    ]
    .map(String::from);
    let mut table = vec![header];
    for o in &outcomes {
        table.push([
            o.name.clone(),
            cell(o.nodes),
            cell(o.greedy),
            density_cell(o.nodes, o.greedy),
            cell(o.sat),
            density_cell(o.nodes, o.sat),
            o.status.clone(),
        ]);
    }
    print!("{}", render_table(&table));

    if let Some(path) = out {
        let mut machine = String::new();
        for row in &table {
            machine.push_str(&row.join("\t"));
            machine.push('\n');
        }
        std::fs::write(path, machine)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
