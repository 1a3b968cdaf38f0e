//! Shortest-text alignment of wildcard strings (the SODA problem), the
//! trie↔instance mapping, and the exact layout builder on top of it.
//!
//! Positions inside a string are 1-based; offsets of a placed string inside
//! a text are 0-based, so the symbol at string position `p` of a string
//! placed at offset `o` lands on text position `o + p`.

mod oracle;
mod small_sigma;

pub use oracle::{brute_force_soda, brute_force_soda_seq, k_soda_decide, DEFAULT_ORACLE_LIMIT};
pub use small_sigma::{solve_sigma2, solve_sigma3};

use std::fmt;
use std::str::FromStr;

use crate::double_array::DoubleArray;
use crate::error::{Error, Result};
use crate::trie::Trie;

/// A string over letters `{1..}` plus the wildcard, stored as
/// `Some(letter)` / `None`. Always nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WildcardString {
    symbols: Vec<Option<usize>>,
}

impl WildcardString {
    /// Wraps a symbol sequence; the sequence must be nonempty and use
    /// letters `>= 1`.
    pub fn new(symbols: Vec<Option<usize>>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Input("wildcard string must be nonempty".into()));
        }
        if symbols.contains(&Some(0)) {
            return Err(Error::Input("letters must be >= 1".into()));
        }
        Ok(WildcardString { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty sequences
    }

    pub fn symbols(&self) -> &[Option<usize>] {
        &self.symbols
    }

    /// Number of non-wildcard positions.
    pub fn concrete_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_some()).count()
    }
}

impl fmt::Display for WildcardString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, sym) in self.symbols.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match sym {
                Some(letter) => write!(f, "{letter}")?,
                None => f.write_str("*")?,
            }
        }
        Ok(())
    }
}

impl FromStr for WildcardString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .split_whitespace()
            .map(|tok| {
                if tok == "*" {
                    Ok(None)
                } else {
                    tok.parse::<usize>()
                        .map(Some)
                        .map_err(|_| Error::Input(format!("bad symbol token {tok:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        WildcardString::new(symbols)
    }
}

fn symbols_agree(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

/// All offsets at which `pattern` matches inside `text`, position-wise:
/// offset `o` is listed iff for every position `p`, `pattern[p]` or
/// `text[o+p]` is a wildcard or they hold the same letter. Empty when the
/// pattern is longer than the text.
pub fn occurs(pattern: &WildcardString, text: &WildcardString) -> Vec<usize> {
    let (pl, tl) = (pattern.len(), text.len());
    if pl > tl {
        return Vec::new();
    }
    (0..=tl - pl)
        .filter(|&o| {
            (0..pl).all(|p| symbols_agree(pattern.symbols[p], text.symbols[o + p]))
        })
        .collect()
}

/// Overlap-join: the shortest string that `x` matches as a prefix and `y`
/// as a suffix. Picks the maximum overlap whose positions are pairwise
/// agreeable and resolves each overlapped position to the concrete letter
/// when one side has one. Overlap 0 (plain concatenation) always works, so
/// the join never fails.
pub fn wildcard_merge(x: &WildcardString, y: &WildcardString) -> WildcardString {
    let (xl, yl) = (x.len(), y.len());
    let max_overlap = xl.min(yl);
    for o in (0..=max_overlap).rev() {
        let start = xl - o;
        if (0..o).all(|k| symbols_agree(x.symbols[start + k], y.symbols[k])) {
            let mut merged = Vec::with_capacity(xl + yl - o);
            merged.extend_from_slice(&x.symbols[..start]);
            for k in 0..o {
                merged.push(x.symbols[start + k].or(y.symbols[k]));
            }
            merged.extend_from_slice(&y.symbols[o..]);
            return WildcardString { symbols: merged };
        }
    }
    unreachable!("overlap 0 always merges")
}

/// Whether two equal-length strings agree at every position (strings of
/// different lengths are never compatible).
pub fn compatible(x: &WildcardString, y: &WildcardString) -> bool {
    x.len() == y.len()
        && (0..x.len()).all(|p| symbols_agree(x.symbols[p], y.symbols[p]))
}

/// An alignment instance: `n` strings of common length `sigma`, where
/// string `i` (1-based) uses only its own letter `i` and wildcards. Each
/// string is stored as the sorted list of its concrete positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SodaInstance {
    sigma: usize,
    positions: Vec<Vec<usize>>,
}

impl SodaInstance {
    /// Builds an instance from the concrete-position sets of its strings.
    /// Positions are 1-based and must lie in `[1..sigma]`; duplicates are
    /// collapsed.
    pub fn new(sigma: usize, positions: Vec<Vec<usize>>) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::Input("string length must be >= 1".into()));
        }
        let mut normalized = Vec::with_capacity(positions.len());
        for (i, mut ps) in positions.into_iter().enumerate() {
            ps.sort_unstable();
            ps.dedup();
            if let Some(&p) = ps.iter().find(|&&p| p < 1 || p > sigma) {
                return Err(Error::Input(format!(
                    "string {}: position {} outside [1..{}]",
                    i + 1,
                    p,
                    sigma
                )));
            }
            normalized.push(ps);
        }
        Ok(SodaInstance {
            sigma,
            positions: normalized,
        })
    }

    /// Common string length (and width of every placement window).
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Number of strings.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Sorted concrete positions of string `i` (0-based index).
    pub fn positions(&self, i: usize) -> &[usize] {
        &self.positions[i]
    }

    /// String `i` (0-based index) spelled out with its letter `i + 1`.
    pub fn string(&self, i: usize) -> WildcardString {
        let mut symbols = vec![None; self.sigma];
        for &p in &self.positions[i] {
            symbols[p - 1] = Some(i + 1);
        }
        WildcardString { symbols }
    }

    /// All strings in index order.
    pub fn strings(&self) -> impl Iterator<Item = WildcardString> + '_ {
        (0..self.len()).map(|i| self.string(i))
    }
}

/// A solved instance: the aligned text (wildcards where no string forces a
/// letter) and one placement offset per input string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SodaSolution {
    /// The aligned text; its length is the objective value.
    pub text: Vec<Option<usize>>,
    /// 0-based placement offset of each input string, in input order.
    /// All-wildcard strings are reported at offset 0.
    pub offsets: Vec<usize>,
}

impl SodaSolution {
    pub fn length(&self) -> usize {
        self.text.len()
    }
}

/// Renders the text forced by the given placement: position `o_i + p`
/// holds letter `i + 1` for every concrete position `p` of string `i`.
pub(crate) fn build_text(
    inst: &SodaInstance,
    offsets: &[usize],
    length: usize,
) -> Vec<Option<usize>> {
    let mut text = vec![None; length];
    for i in 0..inst.len() {
        for &p in inst.positions(i) {
            text[offsets[i] + p - 1] = Some(i + 1);
        }
    }
    text
}

/// Maps a trie to an alignment instance: one string per internal node, in
/// node-id order, renumbered densely. The string for the k-th internal
/// node carries its letter `k` exactly at that node's edge labels. A
/// single-node trie yields an empty instance.
pub fn trie_to_soda(trie: &Trie) -> SodaInstance {
    let positions = trie
        .internal_nodes()
        .into_iter()
        .map(|u| {
            trie.label_set(u)
                .expect("internal node ids come from the trie itself")
        })
        .collect();
    SodaInstance {
        sigma: trie.sigma(),
        positions,
    }
}

/// Turns a solved trie instance back into a double array: the k-th
/// internal node gets base `offset_k + 1`, so the child reached via label
/// `c` sits at slot `offset_k + c + 1` — text position `p` corresponds to
/// slot `p + 1`, with slot 1 reserved for the root. N = text length + 1.
///
/// The pair `(text, offsets)` must be a tight solution of
/// [`trie_to_soda`]`(trie)`: every string's letters must appear in `text`
/// at its offset, `text` must carry no other letters, and it must not
/// extend past the last forced position.
pub fn materialize(trie: &Trie, text: &[Option<usize>], offsets: &[usize]) -> Result<DoubleArray> {
    let inst = trie_to_soda(trie);
    if offsets.len() != inst.len() {
        return Err(Error::Input(format!(
            "expected {} offsets, got {}",
            inst.len(),
            offsets.len()
        )));
    }
    let mut claimed = vec![false; text.len()];
    let mut last_claim = 0usize;
    for (i, &offset) in offsets.iter().enumerate() {
        for &p in inst.positions(i) {
            let pos = offset + p; // 1-based text position
            if pos > text.len() || text[pos - 1] != Some(i + 1) {
                return Err(Error::Structural(format!(
                    "string {} at offset {offset} needs its letter at text position {pos}",
                    i + 1
                )));
            }
            claimed[pos - 1] = true;
            last_claim = last_claim.max(pos);
        }
    }
    if let Some(pos) = (0..text.len()).find(|&p| text[p].is_some() && !claimed[p]) {
        return Err(Error::Structural(format!(
            "text position {} holds a letter no string forces",
            pos + 1
        )));
    }
    if last_claim != text.len() {
        return Err(Error::Structural(format!(
            "text has trailing slack: length {} but last forced position is {last_claim}",
            text.len()
        )));
    }
    let internal = trie.internal_nodes();
    let mut bases = vec![0usize; trie.node_count() + 1];
    for (k, &u) in internal.iter().enumerate() {
        bases[u] = offsets[k] + 1;
    }
    let da = DoubleArray::from_bases(trie, &bases)?;
    debug_assert_eq!(da.size(), text.len() + 1);
    Ok(da)
}

/// Builds a provably size-minimal double array by solving the trie's
/// alignment instance exactly and materializing the result.
pub fn exact_build(trie: &Trie) -> Result<DoubleArray> {
    let inst = trie_to_soda(trie);
    let sol = brute_force_soda(&inst, DEFAULT_ORACLE_LIMIT)?;
    materialize(trie, &sol.text, &sol.offsets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double_array::{greedy_build, validate, BuildOrder};

    fn ws(spec: &str) -> WildcardString {
        spec.parse().unwrap()
    }

    #[test]
    fn occurs_matches_positionwise() {
        assert_eq!(occurs(&ws("* *"), &ws("2 1 2 1")), vec![0, 1, 2]);
        assert_eq!(occurs(&ws("1 * 1"), &ws("1 2 1")), vec![0]);
        assert_eq!(occurs(&ws("1 1"), &ws("1 2")), Vec::<usize>::new());
        assert_eq!(occurs(&ws("1 2 3"), &ws("1 2")), Vec::<usize>::new());
        let x = ws("1 * 2");
        assert!(occurs(&x, &x).contains(&0));
    }

    #[test]
    fn merge_takes_maximum_agreeable_overlap() {
        assert_eq!(wildcard_merge(&ws("1 *"), &ws("* 2")), ws("1 2"));
        let x = ws("1 * 2");
        assert_eq!(wildcard_merge(&x, &x), x);
        assert_eq!(wildcard_merge(&ws("1 1"), &ws("2 2")), ws("1 1 2 2"));
        // Wildcards resolve to the concrete side.
        assert_eq!(wildcard_merge(&ws("1 2"), &ws("2 *")), ws("1 2 *"));
    }

    #[test]
    fn merge_length_bound_and_associativity_on_small_strings() {
        let letters = [None, Some(1), Some(2)];
        let mut all = Vec::new();
        for len in 1..=3usize {
            let mut idx = vec![0usize; len];
            loop {
                all.push(
                    WildcardString::new(idx.iter().map(|&k| letters[k]).collect()).unwrap(),
                );
                let mut k = 0;
                loop {
                    if k == len {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < letters.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == len {
                    break;
                }
            }
        }
        for x in &all {
            assert!(occurs(x, x).contains(&0));
            for y in &all {
                let m = wildcard_merge(x, y);
                assert!(m.len() <= x.len() + y.len());
                assert!(m.len() >= x.len().max(y.len()));
                assert_eq!(compatible(x, y), x.len() == y.len() && m.len() == x.len());
            }
        }
        // Associativity along a compatible chain.
        let (a, b, c) = (ws("1 *"), ws("* 2"), ws("2 3"));
        assert_eq!(
            wildcard_merge(&wildcard_merge(&a, &b), &c),
            wildcard_merge(&a, &wildcard_merge(&b, &c))
        );
    }

    #[test]
    fn compatible_requires_equal_length_and_agreement() {
        assert!(compatible(&ws("1 *"), &ws("* 2")));
        assert!(!compatible(&ws("1 *"), &ws("2 *")));
        assert!(compatible(&ws("* *"), &ws("5 5")));
        assert!(!compatible(&ws("1"), &ws("1 *")));
    }

    #[test]
    fn wildcard_string_parsing_round_trips() {
        for s in ["1 * 2", "*", "7 7 7"] {
            assert_eq!(ws(s).to_string(), s);
        }
        assert!("".parse::<WildcardString>().is_err());
        assert!("0".parse::<WildcardString>().is_err());
        assert!("x".parse::<WildcardString>().is_err());
    }

    #[test]
    fn trie_mapping_emits_one_string_per_internal_node() {
        let chain = Trie::from_strings(1, &[vec![1, 1]]).unwrap();
        let inst = trie_to_soda(&chain);
        assert_eq!(inst.sigma(), 1);
        assert_eq!(inst.len(), 2);
        assert_eq!(inst.string(0), ws("1"));
        assert_eq!(inst.string(1), ws("2"));

        let spread = Trie::from_strings(3, &[vec![1], vec![3]]).unwrap();
        let inst = trie_to_soda(&spread);
        assert_eq!(inst.len(), 1);
        assert_eq!(inst.string(0), ws("1 * 1"));

        let two = Trie::from_strings(3, &[vec![1, 2], vec![1, 3]]).unwrap();
        let inst = trie_to_soda(&two);
        assert_eq!(inst.len(), 2);
        assert_eq!(inst.string(0), ws("1 * *"));
        assert_eq!(inst.string(1), ws("* 2 2"));

        let lone = Trie::from_strings(4, &[]).unwrap();
        assert!(trie_to_soda(&lone).is_empty());
    }

    #[test]
    fn instance_validation() {
        assert!(SodaInstance::new(0, vec![]).is_err());
        assert!(SodaInstance::new(2, vec![vec![3]]).is_err());
        assert!(SodaInstance::new(2, vec![vec![0]]).is_err());
        let inst = SodaInstance::new(2, vec![vec![2, 1, 1]]).unwrap();
        assert_eq!(inst.positions(0), &[1, 2]);
        assert_eq!(inst.string(0), ws("1 1"));
    }

    #[test]
    fn materialize_builds_minimal_arrays() {
        // Unary chain of three nodes: strings [1] and [2] over length-1
        // windows align at offsets 0 and 1 for a text of length 2.
        let chain = Trie::from_strings(1, &[vec![1, 1]]).unwrap();
        let da = exact_build(&chain).unwrap();
        assert_eq!(da.size(), 3);
        assert!(validate(&da, &chain).is_empty());

        let lone = Trie::from_strings(4, &[]).unwrap();
        let da = exact_build(&lone).unwrap();
        assert_eq!(da.size(), 1);
        assert!(validate(&da, &lone).is_empty());

        // The crux case: a single edge with label 1 over a 2-letter
        // alphabet needs no slot for the unused second label.
        let stub = Trie::from_strings(2, &[vec![1]]).unwrap();
        let da = exact_build(&stub).unwrap();
        assert_eq!(da.size(), 2);
        assert_eq!(da.size(), greedy_build(&stub, BuildOrder::Bfs).size());
    }

    #[test]
    fn materialize_rejects_broken_solutions() {
        let chain = Trie::from_strings(1, &[vec![1, 1]]).unwrap();
        // Valid: text "1 2", offsets [0, 1].
        let good = materialize(&chain, &[Some(1), Some(2)], &[0, 1]);
        assert!(good.is_ok());
        // Wrong letter under string 2's window.
        assert!(matches!(
            materialize(&chain, &[Some(1), Some(1)], &[0, 1]),
            Err(Error::Structural(_))
        ));
        // Unforced extra letter.
        assert!(matches!(
            materialize(&chain, &[Some(1), Some(2), Some(1)], &[0, 1]),
            Err(Error::Structural(_))
        ));
        // Trailing slack.
        assert!(matches!(
            materialize(&chain, &[Some(1), Some(2), None], &[0, 1]),
            Err(Error::Structural(_))
        ));
        // Wrong offset count.
        assert!(matches!(
            materialize(&chain, &[Some(1), Some(2)], &[0]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn exact_build_never_beats_greedy_from_above() {
        for strings in [
            vec![vec![1, 2], vec![1, 3], vec![3]],
            vec![vec![1], vec![2], vec![3]],
            vec![vec![2, 1], vec![2, 2]],
            vec![vec![1, 1, 1]],
        ] {
            let trie = Trie::from_strings(3, &strings).unwrap();
            let exact = exact_build(&trie).unwrap();
            assert!(validate(&exact, &trie).is_empty());
            for order in [BuildOrder::Dfs, BuildOrder::Bfs] {
                assert!(exact.size() <= greedy_build(&trie, order).size());
            }
        }
    }
}
