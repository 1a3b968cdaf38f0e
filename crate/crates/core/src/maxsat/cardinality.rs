//! Cardinality constraint encoders: pairwise and sequential-counter
//! at-most-one, and a sequential-counter at-most-k.
//!
//! Encoders append clauses to a caller-supplied list and allocate any
//! auxiliary variables from `next_var` (the next unused 1-based index).

/// Choice of at-most-one encoding. `Pairwise` emits one binary clause per
/// literal pair; `Sequential` switches to a counter chain with auxiliary
/// variables once the group is large enough for the quadratic blowup to
/// matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmoEncoding {
    Pairwise,
    Sequential,
}

/// Below this group size the pairwise encoding is no larger than the
/// counter chain, so `Sequential` falls back to it.
const SEQUENTIAL_CUTOFF: usize = 5;

fn pairwise(lits: &[i64], out: &mut Vec<Vec<i64>>) {
    for (idx, &a) in lits.iter().enumerate() {
        for &b in &lits[idx + 1..] {
            out.push(vec![-a, -b]);
        }
    }
}

fn sequential_chain(lits: &[i64], next_var: &mut usize, out: &mut Vec<Vec<i64>>) {
    let n = lits.len();
    debug_assert!(n >= 2);
    // regs[i] is true when some literal among lits[..=i] is true.
    let mut regs = Vec::with_capacity(n - 1);
    for _ in 0..n - 1 {
        regs.push(*next_var as i64);
        *next_var += 1;
    }
    out.push(vec![-lits[0], regs[0]]);
    for i in 1..n - 1 {
        out.push(vec![-lits[i], regs[i]]);
        out.push(vec![-regs[i - 1], regs[i]]);
        out.push(vec![-lits[i], -regs[i - 1]]);
    }
    out.push(vec![-lits[n - 1], -regs[n - 2]]);
}

/// Appends clauses forcing at most one of `lits` to be true.
pub fn at_most_one(
    lits: &[i64],
    encoding: AmoEncoding,
    next_var: &mut usize,
    out: &mut Vec<Vec<i64>>,
) {
    if lits.len() < 2 {
        return;
    }
    match encoding {
        AmoEncoding::Pairwise => pairwise(lits, out),
        AmoEncoding::Sequential => {
            if lits.len() < SEQUENTIAL_CUTOFF {
                pairwise(lits, out);
            } else {
                sequential_chain(lits, next_var, out);
            }
        }
    }
}

/// Appends clauses forcing exactly one of `lits` to be true. The caller
/// must pass a nonempty slice.
pub fn exactly_one(
    lits: &[i64],
    encoding: AmoEncoding,
    next_var: &mut usize,
    out: &mut Vec<Vec<i64>>,
) {
    debug_assert!(!lits.is_empty());
    out.push(lits.to_vec());
    at_most_one(lits, encoding, next_var, out);
}

/// Appends a sequential-counter encoding forcing at most `k` of `lits`
/// to be true.
pub fn at_most_k(lits: &[i64], k: usize, next_var: &mut usize, out: &mut Vec<Vec<i64>>) {
    let n = lits.len();
    if k >= n {
        return;
    }
    if k == 0 {
        for &l in lits {
            out.push(vec![-l]);
        }
        return;
    }
    if k == 1 {
        at_most_one(lits, AmoEncoding::Sequential, next_var, out);
        return;
    }
    // regs[i][j] is true when at least j+1 of lits[..=i] are true.
    let mut regs: Vec<Vec<i64>> = Vec::with_capacity(n - 1);
    for _ in 0..n - 1 {
        let mut row = Vec::with_capacity(k);
        for _ in 0..k {
            row.push(*next_var as i64);
            *next_var += 1;
        }
        regs.push(row);
    }
    out.push(vec![-lits[0], regs[0][0]]);
    for &reg in &regs[0][1..] {
        out.push(vec![-reg]);
    }
    for i in 1..n - 1 {
        out.push(vec![-lits[i], regs[i][0]]);
        out.push(vec![-regs[i - 1][0], regs[i][0]]);
        for j in 1..k {
            out.push(vec![-lits[i], -regs[i - 1][j - 1], regs[i][j]]);
            out.push(vec![-regs[i - 1][j], regs[i][j]]);
        }
        out.push(vec![-lits[i], -regs[i - 1][k - 1]]);
    }
    out.push(vec![-lits[n - 1], -regs[n - 2][k - 1]]);
}
