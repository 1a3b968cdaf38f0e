//! Acceptance suite: one test per release criterion, each ending with a
//! single `criterion N: pass`/`criterion N: fail` line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Criteria 1–8 exercise the library crate directly against independent
//! reference computations (exhaustive sweeps, truth tables, subset
//! dynamic programming). Criterion 9 drives the compiled `soda` binary
//! end to end through temporary directories.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soda_core::double_array::{greedy_build, BuildOrder};
use soda_core::maxsat::{
    emit_wcnf, optimize_size, optimize_size_with, parse_wcnf, AmoEncoding, OptStatus, SolverChoice,
    Strategy, WcnfFormula,
};
use soda_core::reductions::{
    audit_encoding, block_alignment_audit, brute_force_smc, coloring_to_smc, encode_scs_to_soda,
    encoded_superstring, exact_scs, ham_path_to_superstring, is_three_colorable, rdhp_to_scs,
    sample_rdhp_with, shifts_to_coloring, superstring_to_ham_path, RdhpInstance,
};
use soda_core::sat::{check_model, emit_cnf, parse_cnf, solve_cnf, CnfFormula, SolveStatus};
use soda_core::soda::{
    brute_force_soda, compatible, exact_build, occurs, solve_sigma2, solve_sigma3, trie_to_soda,
    SodaInstance, WildcardString, DEFAULT_ORACLE_LIMIT,
};
use soda_core::trie::{enumerate_tries, Trie};

const INTERNAL: SolverChoice = SolverChoice::Internal;

/// Every trie with at most `max_nodes` nodes over each alphabet size up
/// to `max_sigma`.
fn small_tries(max_sigma: usize, max_nodes: usize) -> Vec<Trie> {
    let mut out = Vec::new();
    for sigma in 1..=max_sigma {
        for m in 1..=max_nodes {
            out.extend(enumerate_tries(sigma, m).expect("enumeration within caps"));
        }
    }
    out
}

/// A random trie from a random string set, constrained to `max_nodes`.
fn random_trie(rng: &mut ChaCha8Rng, max_sigma: usize, max_nodes: usize) -> Option<Trie> {
    let sigma = rng.gen_range(1..=max_sigma);
    let count = rng.gen_range(1..=5);
    let strings: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=4);
            (0..len).map(|_| rng.gen_range(1..=sigma)).collect()
        })
        .collect();
    let trie = Trie::from_strings(sigma, &strings).expect("valid random strings");
    (trie.node_count() <= max_nodes).then_some(trie)
}

/// Asserts that the exact builder, both complete solver strategies, and
/// (for two- and three-letter alphabets) the dedicated direct solvers
/// all report the same minimal array size.
fn assert_size_triangle(trie: &Trie) {
    let exact = exact_build(trie).expect("exact build within oracle cap");
    let n = exact.size();

    let (full, full_status) =
        optimize_size(trie, Strategy::Full, None, &INTERNAL).expect("full minimization");
    assert_eq!(full_status, OptStatus::Optimal, "full search must prove optimality");
    assert_eq!(full.size(), n, "full minimization disagrees with exact builder");

    let (bin, bin_status) =
        optimize_size(trie, Strategy::BinarySearch, None, &INTERNAL).expect("binary search");
    assert_eq!(bin_status, OptStatus::Optimal, "unbudgeted binary search must prove optimality");
    assert_eq!(bin.size(), n, "binary search disagrees with exact builder");

    let inst = trie_to_soda(trie);
    match trie.sigma() {
        2 => {
            let sol = solve_sigma2(&inst).expect("two-letter solver");
            assert_eq!(sol.length() + 1, n, "two-letter solver disagrees with exact builder");
        }
        3 => {
            let sol = solve_sigma3(&inst).expect("three-letter solver");
            assert_eq!(sol.length() + 1, n, "three-letter solver disagrees with exact builder");
        }
        _ => {}
    }
}

#[test]
fn criterion_1_exact_and_solver_sizes_agree() {
    let tries = small_tries(3, 6);
    for trie in &tries {
        assert_size_triangle(trie);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xACC1);
    let mut random_count = 0usize;
    while random_count < 200 {
        let Some(trie) = random_trie(&mut rng, 4, 7) else {
            continue;
        };
        assert_size_triangle(&trie);
        random_count += 1;
    }

    println!(
        "criterion 1: pass — exact builder, full minimization, binary search, and the \
         direct small-alphabet solvers agree on {} enumerated + {random_count} random tries",
        tries.len()
    );
}

#[test]
fn criterion_2_greedy_respects_trivial_bounds() {
    let tries = small_tries(3, 6);
    for trie in &tries {
        let (m, sigma) = (trie.node_count(), trie.sigma());
        for order in [BuildOrder::Bfs, BuildOrder::Dfs] {
            let n = greedy_build(trie, order).size();
            assert!(m <= n, "array smaller than node count on {m} nodes");
            assert!(
                n <= m * sigma + sigma,
                "greedy size {n} above {m}*{sigma}+{sigma}"
            );
        }
    }

    let mut chains = 0usize;
    for sigma in 1..=4 {
        for depth in 1..=10 {
            let trie = Trie::from_strings(sigma, &[vec![1; depth]]).expect("chain");
            for order in [BuildOrder::Bfs, BuildOrder::Dfs] {
                let n = greedy_build(&trie, order).size();
                assert_eq!(n, depth + 1, "unary chain must pack with no vacancy");
            }
            chains += 1;
        }
    }

    println!(
        "criterion 2: pass — M ≤ N ≤ Mσ+σ on {} tries × 2 orders; {} unary chains pack exactly",
        tries.len(),
        chains
    );
}

#[test]
fn criterion_3_worked_alignment_examples() {
    // Two strings whose concrete positions interleave (odd vs even
    // slots) overlap completely: the optimum is one window of length σ.
    for sigma in 2..=8 {
        let odds: Vec<usize> = (1..=sigma).step_by(2).collect();
        let evens: Vec<usize> = (2..=sigma).step_by(2).collect();
        let inst = SodaInstance::new(sigma, vec![odds, evens]).expect("alternating instance");
        let sol = brute_force_soda(&inst, DEFAULT_ORACLE_LIMIT).expect("oracle");
        assert_eq!(sol.length(), sigma, "interleaved pair must fit in one window");
    }

    // Fully concrete strings share no position at any shift (each uses
    // its own letter everywhere), so n of them need exactly n·σ cells.
    for (n, sigma) in [(1, 2), (2, 3), (3, 4), (2, 5), (4, 3)] {
        let full: Vec<usize> = (1..=sigma).collect();
        let inst =
            SodaInstance::new(sigma, vec![full; n]).expect("wildcard-free instance");
        let sol = brute_force_soda(&inst, DEFAULT_ORACLE_LIMIT).expect("oracle");
        assert_eq!(sol.length(), n * sigma, "concrete strings must concatenate");
    }

    println!(
        "criterion 3: pass — interleaved pairs pack into σ cells (σ ≤ 8); \
         wildcard-free instances need exactly nσ"
    );
}

/// A deterministic flat-random word list over the 12-letter alphabet.
fn word_list(seed: u64, count: usize, lens: (usize, usize)) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words = BTreeSet::new();
    while words.len() < count {
        let len = rng.gen_range(lens.0..=lens.1);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=12)).collect();
        words.insert(word);
    }
    words.into_iter().collect()
}

/// Three-letter words `[hi, mid, lo]` that branch on the high end of
/// the alphabet before fanning out on the low end. First-fit commits
/// the high windows to the bottom of the array early, leaving the many
/// low fans nowhere tight to land — the structure where a search over
/// bases recovers slots.
fn layered_list(seed: u64, count: usize) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words = BTreeSet::new();
    while words.len() < count {
        let hi = rng.gen_range(7..=12);
        let mid = rng.gen_range(7..=12);
        let lo = rng.gen_range(1..=6);
        words.insert(vec![hi, mid, lo]);
    }
    words.into_iter().collect()
}

#[test]
fn criterion_4_solver_never_loses_to_greedy_on_word_lists() {
    // The density figures quoted for the 293-node layout: 614 slots
    // round to 0.48 occupancy and 389 slots to 0.75.
    assert_eq!(format!("{:.2}", 293.0 / 614.0), "0.48");
    assert_eq!(format!("{:.2}", 293.0 / 389.0), "0.75");

    let lists = [
        layered_list(11, 170),
        word_list(12, 90, (3, 7)),
        word_list(13, 140, (2, 8)),
        word_list(14, 160, (3, 6)),
        word_list(15, 220, (2, 7)),
    ];

    let mut strict = 0usize;
    let mut sizes = Vec::new();
    for words in &lists {
        let used: BTreeSet<usize> = words.iter().flatten().copied().collect();
        assert!(used.len() >= 10, "list must exercise at least ten letters");

        let trie = Trie::from_strings(12, words).expect("word trie");
        let m = trie.node_count();
        assert!(
            (200..=1500).contains(&m),
            "list size {m} outside the 200..=1500 node window"
        );

        let greedy = greedy_build(&trie, BuildOrder::Bfs)
            .size()
            .min(greedy_build(&trie, BuildOrder::Dfs).size());
        let (da, status) = optimize_size_with(
            &trie,
            Strategy::BinarySearch,
            Some(Duration::from_secs(2)),
            &INTERNAL,
            AmoEncoding::Sequential,
        )
        .expect("binary search on word list");
        assert_ne!(status, OptStatus::Unknown, "search must return evidence");
        assert!(da.size() <= greedy, "solver returned more than greedy slots");
        if da.size() < greedy {
            strict += 1;
        }
        sizes.push((m, greedy, da.size()));
    }
    assert!(
        strict >= 1,
        "no strict improvement over greedy across the suite: {sizes:?}"
    );

    println!(
        "criterion 4: pass — solver ≤ greedy on all {} lists, {} strict wins ({:?}); \
         density arithmetic checks out",
        lists.len(),
        strict,
        sizes
    );
}

#[test]
fn criterion_5_superstring_optimum_detects_hamiltonian_paths() {
    // Planted side: sampled degree-constrained digraphs with a known
    // source-to-sink path must hit the 2m+3n superstring target, and
    // the path survives the string/path round trip unchanged.
    let mut planted = Vec::new();
    for seed in [1, 2, 3] {
        planted.push(sample_rdhp_with(4, 0, seed).expect("planted sample"));
    }
    for seed in [4, 5] {
        planted.push(sample_rdhp_with(4, 1, seed).expect("planted sample"));
    }
    for (g, path) in &planted {
        let scs = rdhp_to_scs(g);
        let target = scs.target_length();
        assert!(scs.strings().len() <= 18, "fixture exceeds the table cap");

        let (opt, witness) = exact_scs(scs.strings(), 18).expect("subset DP");
        assert_eq!(opt, target, "planted instance must meet the 2m+3n target");

        let q = ham_path_to_superstring(g, path).expect("expand planted path");
        assert_eq!(q.len(), target);
        assert_eq!(
            superstring_to_ham_path(g, &q).expect("decode"),
            *path,
            "round trip must return the planted path"
        );

        let decoded = superstring_to_ham_path(g, &witness).expect("decode optimum witness");
        assert_eq!(decoded.first(), Some(&g.s()));
        assert_eq!(decoded.last(), Some(&g.t()));
    }

    // Negative side: every valid 4-vertex digraph without a 1→…→4 path
    // must cost strictly more than its target.
    let candidates = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 2), (3, 4)];
    let mut non_ham = 0usize;
    for mask in 0u32..(1 << candidates.len()) {
        let edges: Vec<(usize, usize)> = candidates
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let Ok(g) = RdhpInstance::new(4, 1, 4, edges, true) else {
            continue;
        };
        let has_path = [[1, 2, 3, 4], [1, 3, 2, 4]]
            .iter()
            .any(|p| p.windows(2).all(|w| g.has_edge(w[0], w[1])));
        if has_path {
            continue;
        }
        let scs = rdhp_to_scs(&g);
        let (opt, _) = exact_scs(scs.strings(), 18).expect("subset DP");
        assert!(
            opt > scs.target_length(),
            "pathless digraph {:?} met the target",
            g.edges()
        );
        non_ham += 1;
    }
    assert!(non_ham >= 10, "only {non_ham} pathless instances exercised");

    println!(
        "criterion 5: pass — {} planted instances meet 2m+3n with identity round trips; \
         {non_ham} pathless instances all exceed it",
        planted.len()
    );
}

/// A wildcard string that spells `bits` with `letter` at the set
/// positions and wildcards elsewhere.
fn spelled(letter: usize, bits: &[bool]) -> WildcardString {
    WildcardString::new(bits.iter().map(|&b| b.then_some(letter)).collect()).expect("pattern")
}

#[test]
fn criterion_6_encoding_invariants_and_expansion() {
    let samples = [(4, 0, 21), (4, 1, 22), (5, 1, 23), (6, 0, 24), (6, 2, 25)];
    for &(n, extra, seed) in &samples {
        let (g, path) = sample_rdhp_with(n, extra, seed).expect("sample");
        let scs = rdhp_to_scs(&g);
        let enc = encode_scs_to_soda(&scs);

        let findings = audit_encoding(&enc);
        assert!(
            findings.is_empty(),
            "structural audit flagged n={n} seed={seed}: {findings:?}"
        );

        // Bit-code exclusivity: a plain rendering interlocks with a
        // complemented rendering exactly when both spell the same code.
        let codes = enc.codes();
        for (i, ci) in codes.iter().enumerate() {
            for (j, cj) in codes.iter().enumerate() {
                let plain = spelled(1, ci);
                let flipped: Vec<bool> = cj.iter().map(|&b| !b).collect();
                let complement = spelled(2, &flipped);
                assert_eq!(
                    compatible(&plain, &complement),
                    i == j,
                    "codes {i} and {j} interlock incorrectly"
                );
            }
        }

        let (q, placement) = encoded_superstring(&g, &path).expect("expansion");
        assert_eq!(q.len(), enc.target_length(), "expansion length off target");
        assert_eq!(q.concrete_count(), q.len(), "expansion left wildcards");
        for (i, s) in enc.strings().iter().enumerate() {
            assert!(
                occurs(s, &q).contains(&placement[i]),
                "string {i} does not occur at its recorded offset"
            );
        }
        assert!(
            block_alignment_audit(&q, &enc, &placement).expect("audit"),
            "tight expansion must be block-aligned"
        );
    }

    println!(
        "criterion 6: pass — audits clean, bit-codes mutually exclusive, and expansions \
         tight/complete/block-aligned on {} sampled instances",
        samples.len()
    );
}

#[test]
fn criterion_7_shift_witnesses_versus_three_colorability() {
    let mut graphs = 0usize;
    let mut witnesses = 0usize;
    let mut mismatches: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();

    for n in 1..=5 {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        for mask in 0u64..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            graphs += 1;

            let inst = coloring_to_smc(n, &edges).expect("translate");
            let witness = brute_force_smc(&inst).expect("shift search");
            let colorable = is_three_colorable(n, &edges).expect("coloring oracle");

            if let Some(w) = &witness {
                witnesses += 1;
                let colors = shifts_to_coloring(&inst, &w.shifts).expect("decode witness");
                for &(u, v) in &edges {
                    assert_ne!(
                        colors[u - 1],
                        colors[v - 1],
                        "witness decoded to an improper coloring on n={n} {edges:?}"
                    );
                }
            }
            if witness.is_some() != colorable {
                mismatches.push((n, edges));
            }
        }
    }

    // Soundness holds: every witness decoded to a proper coloring.
    // Completeness is the open half of this criterion.
    if !mismatches.is_empty() {
        let (n, edges) = &mismatches[0];
        println!(
            "criterion 7: fail — witness existence and 3-colorability diverge on \
             {} of {graphs} graphs (first: n={n} edges={edges:?}); all {witnesses} \
             found witnesses did decode to proper colorings",
            mismatches.len()
        );
        panic!(
            "shift-witness search is sound but not complete for 3-colorability: \
             {} of {graphs} graphs on ≤ 5 vertices are 3-colorable yet admit no witness. \
             Smallest counterexample: the star 1–2, 1–3, 1–4. Every row's leftmost set \
             cell sits in the center vertex's column, so all four rows would need \
             pairwise distinct shifts — impossible with shifts ranging over 1..=3. \
             Witness decoding stayed sound throughout ({witnesses} witnesses, all \
             proper colorings).",
            mismatches.len()
        );
    }

    println!(
        "criterion 7: pass — witness existence matches 3-colorability on all {graphs} graphs"
    );
}

/// Truth-table satisfiability for formulas of at most 20 variables,
/// evaluated 64 assignments at a time. Bit `j` of word `w` holds
/// assignment number `w·64 + j`; variable `i` reads bit `i-1` of that
/// number.
fn exhaustive_sat(f: &CnfFormula) -> bool {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let v = f.var_count();
    assert!((1..=20).contains(&v), "oracle sized for 1..=20 variables");
    let words = if v >= 6 { 1usize << (v - 6) } else { 1 };
    let valid: u64 = if v >= 6 { !0 } else { (1u64 << (1usize << v)) - 1 };
    for w in 0..words {
        let mut acc = valid;
        for clause in f.clauses() {
            let mut sat_mask = 0u64;
            for &lit in clause {
                let k = lit.unsigned_abs() as usize - 1;
                let positive = if k < 6 {
                    LOW[k]
                } else if (w >> (k - 6)) & 1 == 1 {
                    !0
                } else {
                    0
                };
                sat_mask |= if lit > 0 { positive } else { !positive };
            }
            acc &= sat_mask;
            if acc == 0 {
                break;
            }
        }
        if acc != 0 {
            return true;
        }
    }
    false
}

fn random_cnf(rng: &mut ChaCha8Rng) -> CnfFormula {
    let vars = rng.gen_range(1..=20);
    let clause_count = ((vars as f64) * rng.gen_range(0.5..4.5)).round() as usize;
    let mut f = CnfFormula::new(vars);
    for _ in 0..clause_count {
        let width = rng.gen_range(1..=3usize.min(vars));
        let mut chosen = BTreeSet::new();
        while chosen.len() < width {
            chosen.insert(rng.gen_range(1..=vars as i64));
        }
        let clause: Vec<i64> = chosen
            .into_iter()
            .map(|v| if rng.gen_bool(0.5) { v } else { -v })
            .collect();
        f.add_clause(&clause).expect("clause within declared vars");
    }
    f
}

#[test]
fn criterion_8_sat_core_matches_exhaustive_truth_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A7);
    let mut sat_count = 0usize;
    let mut round_trips = 0usize;
    for i in 0..1000 {
        let f = random_cnf(&mut rng);
        let expected = exhaustive_sat(&f);
        let outcome = solve_cnf(&f, &[], None).expect("complete solve");
        match outcome.status {
            SolveStatus::Sat => {
                assert!(expected, "solver claims sat where the table says unsat");
                let model = outcome.model.expect("sat outcome carries a model");
                assert!(
                    check_model(&f, &model).expect("model check"),
                    "returned model violates the formula"
                );
                sat_count += 1;
            }
            SolveStatus::Unsat => {
                assert!(!expected, "solver claims unsat where the table says sat");
            }
            SolveStatus::Timeout => panic!("unbudgeted solve reported a timeout"),
        }

        if i % 10 == 0 {
            let text = emit_cnf(&f);
            let reparsed = parse_cnf(&text).expect("reparse emitted CNF");
            assert_eq!(emit_cnf(&reparsed), text, "CNF round trip not bit-exact");

            let mut wf = WcnfFormula::new(f.var_count());
            for clause in f.clauses() {
                wf.add_hard(clause).expect("hard clause");
            }
            for _ in 0..rng.gen_range(1..=f.var_count()) {
                let v = rng.gen_range(1..=f.var_count() as i64);
                wf.add_soft(if rng.gen_bool(0.5) { v } else { -v })
                    .expect("soft literal");
            }
            let text = emit_wcnf(&wf);
            let reparsed = parse_wcnf(&text).expect("reparse emitted WCNF");
            assert_eq!(emit_wcnf(&reparsed), text, "WCNF round trip not bit-exact");
            round_trips += 1;
        }
    }

    println!(
        "criterion 8: pass — 1000 formulas match the truth table ({sat_count} sat, \
         models verified); {round_trips} CNF+WCNF round trips bit-exact"
    );
}

struct Cli {
    dir: tempfile::TempDir,
}

impl Cli {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().expect("tempdir"),
        }
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }

    fn write(&self, name: &str, contents: &str) {
        std::fs::write(self.path().join(name), contents).expect("write fixture");
    }

    fn read(&self, name: &str) -> Vec<u8> {
        std::fs::read(self.path().join(name)).expect("read artifact")
    }

    fn run(&self, args: &[&str]) -> (i32, String) {
        let out = Command::new(env!("CARGO_BIN_EXE_soda"))
            .args(args)
            .current_dir(self.path())
            .output()
            .expect("launch binary");
        let code = out.status.code().unwrap_or(-1);
        let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
        let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
        (code, format!("{stdout}{stderr}"))
    }

    fn run_ok(&self, args: &[&str]) -> String {
        let (code, output) = self.run(args);
        assert_eq!(code, 0, "`soda {}` failed:\n{output}", args.join(" "));
        output
    }
}

/// The integer after `key = ` on the first line starting with that key.
fn field(output: &str, key: &str) -> usize {
    output
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` line in:\n{output}"))
        .trim()
        .parse()
        .expect("numeric field")
}

#[test]
fn criterion_9_cli_pipeline_end_to_end() {
    let cli = Cli::new();
    cli.write("words.txt", "tea\nten\ntrie\ntree\nart\narts\n");

    // Build → verify → optimize → verify, with a byte-identical rebuild.
    let build_out = cli.run_ok(&["build", "words.txt", "-o", "dict.da"]);
    let greedy_n = field(&build_out, "N = ");
    cli.run_ok(&["build", "words.txt", "-o", "dict2.da"]);
    assert_eq!(
        cli.read("dict.da"),
        cli.read("dict2.da"),
        "rebuild must be byte-identical"
    );
    let verify_out = cli.run_ok(&["verify", "dict.da", "words.txt"]);
    assert!(verify_out.starts_with("ok:"), "verify rejected the build:\n{verify_out}");

    let opt_out = cli.run_ok(&["optimize", "words.txt", "-o", "opt.da", "--timeout", "10s"]);
    let opt_n = field(&opt_out, "N = ");
    assert!(opt_n <= greedy_n, "optimizer returned {opt_n} > greedy {greedy_n}");
    assert!(
        opt_out.lines().any(|l| l == "status = optimal"),
        "ten-second budget should prove optimality on six words:\n{opt_out}"
    );
    let verify_opt = cli.run_ok(&["verify", "opt.da", "words.txt"]);
    assert!(verify_opt.starts_with("ok:"));

    // Rejections map to the input-error exit code.
    cli.write("bad.da", "da three two\n1 2\n");
    let (code, _) = cli.run(&["verify", "bad.da", "words.txt"]);
    assert_eq!(code, 2, "corrupted array file must exit 2");
    let (code, _) = cli.run(&["verify", "missing.da", "words.txt"]);
    assert_eq!(code, 2, "missing file must exit 2");

    // Seeded generation is deterministic, and the generated chain both
    // re-parses and hits its superstring target.
    cli.run_ok(&["gen", "rdhp", "--n", "4", "--extra", "0", "--seed", "7", "-o", "g1.rdhp"]);
    cli.run_ok(&["gen", "rdhp", "--n", "4", "--extra", "0", "--seed", "7", "-o", "g2.rdhp"]);
    assert_eq!(cli.read("g1.rdhp"), cli.read("g2.rdhp"), "same seed, same graph");
    assert_eq!(
        cli.read("g1.rdhp.meta"),
        cli.read("g2.rdhp.meta"),
        "same seed, same metadata"
    );
    cli.run_ok(&["gen", "scs", "--from-rdhp", "g1.rdhp", "-o", "inst.scs"]);
    cli.run_ok(&["gen", "soda", "--from-scs", "inst.scs", "-o", "inst.soda"]);
    let exact_out = cli.run_ok(&["exact", "scs", "inst.scs"]);
    assert!(
        exact_out.lines().any(|l| l == "verdict = at-target"),
        "planted instance must meet its target:\n{exact_out}"
    );
    cli.write("mini.txt", "ab\nba\naa\n");
    cli.run_ok(&["gen", "soda", "--from-words", "mini.txt", "-o", "words.soda"]);
    let exact_soda_out = cli.run_ok(&["exact", "soda", "words.soda"]);
    assert!(
        exact_soda_out.lines().any(|l| l.starts_with("optimum = ")),
        "brute-force alignment must report an optimum:\n{exact_soda_out}"
    );

    // A request beyond the exponential-search caps exits with the
    // capacity code instead of running forever.
    cli.run_ok(&["gen", "rdhp", "--n", "6", "--seed", "9", "-o", "big.rdhp"]);
    cli.run_ok(&["gen", "scs", "--from-rdhp", "big.rdhp", "-o", "big.scs"]);
    let (code, capacity_out) = cli.run(&["exact", "scs", "big.scs"]);
    assert_eq!(
        code, 3,
        "oversized subset-DP request must exit 3:\n{capacity_out}"
    );

    // Bench: solved rows print numbers; an over-budget row prints "-".
    cli.write(
        "manifest.txt",
        &format!("tiny words.txt all binsearch 10s\nstall words.txt all decision:{greedy_n} 0\n"),
    );
    let bench_out = cli.run_ok(&["bench", "manifest.txt"]);
    let tiny = bench_out
        .lines()
        .find(|l| l.starts_with("tiny"))
        .expect("tiny row");
    assert!(tiny.ends_with("optimal"), "solved row must carry numbers:\n{bench_out}");
    let stall = bench_out
        .lines()
        .find(|l| l.starts_with("stall"))
        .expect("stall row");
    assert!(
        stall.contains(" - ") && stall.ends_with("timeout"),
        "over-budget row must render '-':\n{bench_out}"
    );

    println!(
        "criterion 9: pass — pipeline, determinism, generation chain, exit codes, \
         and bench '-' convention all hold"
    );
}
