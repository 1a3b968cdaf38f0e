//! Shifted matrix cover: slide each row of a 0/1 matrix right by a
//! per-row shift in `1..=k` so that all set cells land on positions that
//! can be claimed consistently, plus the translation from graphs.
//!
//! A witness assigns every row `i` a shift `s(i)` and exhibits a single
//! claim sequence `b` over `cols + k` positions: cell `(i, j)` set means
//! position `s(i) + j` is claimed by row `i`, and cell `(i, j)` clear
//! means position `s(i) + j` is *not* claimed by row `i`. Rows whose set
//! cells overlap under their shifts must therefore claim disjoint
//! positions, which is what connects the problem to graph coloring: the
//! translated matrix of a graph is solvable exactly when rows of adjacent
//! vertices take different shifts *and* every pair of vertices with a
//! common closed neighbor does too.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest row count the exhaustive witness search accepts.
pub const SMC_ROWS_CAP: usize = 12;

/// Row count from which the witness search fans out across threads.
#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: usize = 8;

/// A 0/1 matrix together with the shift budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmcInstance {
    rows: usize,
    cols: usize,
    k: usize,
    matrix: Vec<Vec<bool>>,
}

impl SmcInstance {
    /// Validates the dimensions and builds the instance.
    pub fn new(k: usize, matrix: Vec<Vec<bool>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("the shift budget must be positive".into()));
        }
        if matrix.is_empty() {
            return Err(Error::Input("the matrix needs at least one row".into()));
        }
        let cols = matrix[0].len();
        if cols == 0 {
            return Err(Error::Input("the matrix needs at least one column".into()));
        }
        if matrix.iter().any(|row| row.len() != cols) {
            return Err(Error::Input("all matrix rows must have equal length".into()));
        }
        Ok(SmcInstance {
            rows: matrix.len(),
            cols,
            k,
            matrix,
        })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Shift budget: every row shifts right by `1..=k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Cell `(i, j)`, 0-based.
    pub fn cell(&self, i: usize, j: usize) -> bool {
        self.matrix[i][j]
    }

    /// The raw matrix.
    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.matrix
    }
}

/// A solution: per-row shifts and the claim sequence they induce
/// (`0` marks positions no row claims, otherwise the 1-based row).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmcWitness {
    pub shifts: Vec<usize>,
    pub sequence: Vec<usize>,
}

/// One of three colors for the graph side of the translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Red,
    Green,
    Blue,
}

fn validate_simple_graph(n: usize, edges: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    if n == 0 {
        return Err(Error::Input("the graph needs at least one vertex".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in edges {
        if u < 1 || u > n || v < 1 || v > n {
            return Err(Error::Input(format!("edge ({u}, {v}) leaves 1..={n}")));
        }
        if u == v {
            return Err(Error::Input(format!("vertex {u} carries a self-loop")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Input(format!("edge ({u}, {v}) appears twice")));
        }
    }
    let mut normalized: Vec<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    normalized.sort_unstable();
    Ok(normalized)
}

/// Translates an undirected graph into a matrix instance: `n` rows,
/// `3n` columns, budget 3, with row `i` set at column `3(j-1)` exactly
/// when `j` lies in the closed neighborhood of `i` (so each row claims
/// one position per neighbor plus one for itself).
pub fn coloring_to_smc(n: usize, edges: &[(usize, usize)]) -> Result<SmcInstance> {
    let edges = validate_simple_graph(n, edges)?;
    let mut matrix = vec![vec![false; 3 * n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[3 * i] = true;
    }
    for &(u, v) in &edges {
        matrix[u - 1][3 * (v - 1)] = true;
        matrix[v - 1][3 * (u - 1)] = true;
    }
    SmcInstance::new(3, matrix)
}

/// Builds the claim sequence for the given shifts, or `None` when two set
/// cells collide or a clear cell lands on a position its own row claims.
fn check_witness(inst: &SmcInstance, shifts: &[usize]) -> Option<Vec<usize>> {
    debug_assert_eq!(shifts.len(), inst.rows());
    debug_assert!(shifts.iter().all(|&s| s >= 1 && s <= inst.k()));
    let mut sequence = vec![0usize; inst.cols() + inst.k()];
    for (i, row) in inst.matrix().iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            if !cell {
                continue;
            }
            let pos = shifts[i] + j;
            if sequence[pos] != 0 {
                return None;
            }
            sequence[pos] = i + 1;
        }
    }
    for (i, row) in inst.matrix().iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            if !cell && sequence[shifts[i] + j] == i + 1 {
                return None;
            }
        }
    }
    Some(sequence)
}

fn search_from(inst: &SmcInstance, prefix: &[usize]) -> Option<SmcWitness> {
    let rows = inst.rows();
    let mut shifts = prefix.to_vec();
    shifts.resize(rows, 1);
    loop {
        if let Some(sequence) = check_witness(inst, &shifts) {
            return Some(SmcWitness {
                shifts,
                sequence,
            });
        }
        // Advance to the next assignment in ascending order, keeping the
        // fixed prefix.
        let mut i = rows;
        loop {
            if i == prefix.len() {
                return None;
            }
            i -= 1;
            if shifts[i] < inst.k() {
                shifts[i] += 1;
                break;
            }
            shifts[i] = 1;
        }
    }
}

/// Exhaustive witness search, sequential: tries shift assignments in
/// ascending order and returns the first (lexicographically smallest)
/// witness, or `None` when no assignment works.
pub fn brute_force_smc_seq(inst: &SmcInstance) -> Result<Option<SmcWitness>> {
    if inst.rows() > SMC_ROWS_CAP {
        return Err(Error::Capacity(format!(
            "witness search handles at most {SMC_ROWS_CAP} rows, got {}",
            inst.rows()
        )));
    }
    Ok(search_from(inst, &[]))
}

/// Exhaustive witness search. Returns the lexicographically smallest
/// witness; instances with many rows fan the search out over the leading
/// shift choices when the `parallel` feature is active.
pub fn brute_force_smc(inst: &SmcInstance) -> Result<Option<SmcWitness>> {
    #[cfg(feature = "parallel")]
    {
        if inst.rows() >= PARALLEL_THRESHOLD {
            if inst.rows() > SMC_ROWS_CAP {
                return Err(Error::Capacity(format!(
                    "witness search handles at most {SMC_ROWS_CAP} rows, got {}",
                    inst.rows()
                )));
            }
            let k = inst.k();
            let prefixes: Vec<Vec<usize>> = (0..k * k)
                .map(|i| vec![i / k + 1, i % k + 1])
                .collect();
            return Ok(prefixes
                .par_iter()
                .filter_map(|prefix| search_from(inst, prefix))
                .min_by(|a, b| a.shifts.cmp(&b.shifts)));
        }
    }
    brute_force_smc_seq(inst)
}

/// Reads a coloring off a witness for a translated graph instance: shift
/// 1, 2, 3 become red, green, blue. The shifts must form a valid witness
/// for the instance, which must have the translated shape.
pub fn shifts_to_coloring(inst: &SmcInstance, shifts: &[usize]) -> Result<Vec<Color>> {
    if inst.cols() != 3 * inst.rows() || inst.k() != 3 {
        return Err(Error::Input(
            "the instance does not have the translated-graph shape".into(),
        ));
    }
    if shifts.len() != inst.rows() {
        return Err(Error::Input(format!(
            "expected {} shifts, got {}",
            inst.rows(),
            shifts.len()
        )));
    }
    if shifts.iter().any(|&s| !(1..=3).contains(&s)) {
        return Err(Error::Input("shifts must lie in 1..=3".into()));
    }
    if check_witness(inst, shifts).is_none() {
        return Err(Error::Input("the shifts do not form a witness".into()));
    }
    let colors: Vec<Color> = shifts
        .iter()
        .map(|&s| match s {
            1 => Color::Red,
            2 => Color::Green,
            _ => Color::Blue,
        })
        .collect();
    // Adjacent rows share a pair of set cells three columns apart, so a
    // witness forces their shifts — and colors — to differ.
    debug_assert!((0..inst.rows()).all(|u| {
        (0..inst.rows()).all(|v| {
            u == v || !inst.cell(u, 3 * v) || !inst.cell(v, 3 * u) || colors[u] != colors[v]
        })
    }));
    Ok(colors)
}

/// Whether the graph admits a proper 3-coloring (exhaustive with
/// first-fail ordering; capped to keep the search bounded).
pub fn is_three_colorable(n: usize, edges: &[(usize, usize)]) -> Result<bool> {
    const CAP: usize = 16;
    let edges = validate_simple_graph(n, edges)?;
    if n > CAP {
        return Err(Error::Capacity(format!(
            "colorability search handles at most {CAP} vertices, got {n}"
        )));
    }
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn extend(adj: &[Vec<usize>], colors: &mut Vec<u8>, u: usize) -> bool {
        if u == adj.len() {
            return true;
        }
        for c in 1..=3u8 {
            if adj[u].iter().all(|&v| colors[v] != c) {
                colors[u] = c;
                if extend(adj, colors, u + 1) {
                    return true;
                }
                colors[u] = 0;
            }
        }
        false
    }
    Ok(extend(&adj, &mut vec![0; n + 1], 1))
}

/// Samples a simple undirected graph: each of the `n choose 2` candidate
/// edges joins with probability `p`, in shuffled order for variety.
pub fn sample_graph(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    candidates.shuffle(&mut rng);
    candidates
        .into_iter()
        .filter(|_| rng.gen_bool(p.clamp(0.0, 1.0)))
        .collect()
}
