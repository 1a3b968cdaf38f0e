//! Shortest-common-superstring instances derived from RDHP graphs.
//!
//! Every instance built here consists of length-3 strings over an alphabet
//! of three special symbols plus per-vertex letters: each non-source vertex
//! `u` contributes a letter, and each non-sink vertex contributes a second
//! "mark" letter that brands the gadget strings of its out-edges. A
//! Hamiltonian `s`→`t` path exists iff the strings admit a superstring of
//! length `2m + 3n`; both directions are realized constructively below and
//! an exact subset dynamic program serves as the independent optimum.

use crate::error::{Error, Result};
use crate::reductions::rdhp::RdhpInstance;

/// Default cap on the number of strings the exact superstring solver takes.
pub const DEFAULT_SCS_CAP: usize = 18;

/// Hard ceiling on the subset dynamic program regardless of the caller cap.
const SCS_HARD_CAP: usize = 24;

/// Strings-count threshold above which the subset DP runs data-parallel.
#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: usize = 10;

/// Role of one alphabet symbol of an [`ScsInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScsSymbol {
    /// Left endcap: occurs exactly once, at the start of the first
    /// separator string.
    Open,
    /// Separator: the middle symbol of every per-vertex separator string.
    Sep,
    /// Right endcap: occurs exactly once, at the end of the last separator
    /// string.
    Close,
    /// The letter of vertex `u` (every vertex except the source has one).
    Vertex(usize),
    /// The mark letter of vertex `u` (every vertex except the sink has
    /// one); it brands all gadget strings built from `u`'s out-edges.
    Mark(usize),
}

/// A validated instance: alphabet table (ids `1..=sigma`) plus the string
/// multiset. The vertex/edge counts, source, and sink are recovered from
/// the table, so instances parsed from files and instances produced by
/// [`rdhp_to_scs`] go through the same checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScsInstance {
    n_vertices: usize,
    m_edges: usize,
    s: usize,
    t: usize,
    symbols: Vec<ScsSymbol>,
    strings: Vec<Vec<usize>>,
    vertex_ids: Vec<Option<usize>>,
    mark_ids: Vec<Option<usize>>,
}

impl ScsInstance {
    /// Validates the alphabet table and strings: one symbol of each special
    /// role, vertex letters covering all vertices but one (the source),
    /// mark letters covering all but one (the sink), strings of length 3,
    /// pairwise distinct, with special symbols locked to their role
    /// positions, and the counting identity `|strings| = 2m + n`.
    pub fn new(symbols: Vec<ScsSymbol>, strings: Vec<Vec<usize>>) -> Result<Self> {
        let mut n = 0;
        for sym in &symbols {
            match *sym {
                ScsSymbol::Vertex(u) | ScsSymbol::Mark(u) => {
                    if u == 0 {
                        return Err(Error::Input("vertex numbers are 1-based".into()));
                    }
                    n = n.max(u);
                }
                _ => {}
            }
        }
        if n < 2 {
            return Err(Error::Input(
                "alphabet must mention at least two vertices".into(),
            ));
        }
        let mut vertex_ids = vec![None; n + 1];
        let mut mark_ids = vec![None; n + 1];
        let (mut open, mut sep, mut close) = (None, None, None);
        for (idx, sym) in symbols.iter().enumerate() {
            let id = idx + 1;
            let slot = match *sym {
                ScsSymbol::Open => &mut open,
                ScsSymbol::Sep => &mut sep,
                ScsSymbol::Close => &mut close,
                ScsSymbol::Vertex(u) => &mut vertex_ids[u],
                ScsSymbol::Mark(u) => &mut mark_ids[u],
            };
            if slot.is_some() {
                return Err(Error::Input(format!("symbol {sym:?} declared twice")));
            }
            *slot = Some(id);
        }
        for (name, slot) in [("open", open), ("separator", sep), ("close", close)] {
            if slot.is_none() {
                return Err(Error::Input(format!("missing {name} symbol")));
            }
        }
        let missing_vertex: Vec<usize> = (1..=n).filter(|&u| vertex_ids[u].is_none()).collect();
        let missing_mark: Vec<usize> = (1..=n).filter(|&u| mark_ids[u].is_none()).collect();
        let (s, t) = match (missing_vertex.as_slice(), missing_mark.as_slice()) {
            (&[s], &[t]) if s != t => (s, t),
            _ => {
                return Err(Error::Input(
                    "vertex letters must cover all vertices except the source and \
                     mark letters all except the sink"
                        .into(),
                ))
            }
        };

        let sigma = symbols.len();
        let inst = Self {
            n_vertices: n,
            m_edges: 0,
            s,
            t,
            symbols,
            strings,
            vertex_ids,
            mark_ids,
        };
        if inst.strings.len() < n || !(inst.strings.len() - n).is_multiple_of(2) {
            return Err(Error::Input(format!(
                "{} strings cannot decompose as 2m + {n} separator strings",
                inst.strings.len()
            )));
        }
        let m = (inst.strings.len() - n) / 2;

        let mut seen = std::collections::HashSet::new();
        let mut sep_count = 0;
        for string in &inst.strings {
            if string.len() != 3 {
                return Err(Error::Input(format!(
                    "strings must have length 3, got {:?}",
                    string
                )));
            }
            if string.iter().any(|&c| c < 1 || c > sigma) {
                return Err(Error::Input(format!(
                    "symbol id out of range in {string:?}"
                )));
            }
            if !seen.insert(string.clone()) {
                return Err(Error::Input(format!("duplicate string {string:?}")));
            }
            let roles: Vec<&ScsSymbol> =
                string.iter().map(|&c| &inst.symbols[c - 1]).collect();
            let is_sep_string = *roles[1] == ScsSymbol::Sep;
            if is_sep_string {
                sep_count += 1;
            }
            for (pos, role) in roles.iter().enumerate() {
                let ok = match role {
                    ScsSymbol::Open => pos == 0 && is_sep_string,
                    ScsSymbol::Sep => pos == 1,
                    ScsSymbol::Close => pos == 2 && is_sep_string,
                    _ => true,
                };
                if !ok {
                    return Err(Error::Input(format!(
                        "special symbol out of role position in {string:?}"
                    )));
                }
            }
        }
        if sep_count != n {
            return Err(Error::Input(format!(
                "expected {n} separator strings, found {sep_count}"
            )));
        }
        Ok(Self {
            m_edges: m,
            ..inst
        })
    }

    /// Number of graph vertices behind the instance.
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of graph edges behind the instance.
    pub fn m_edges(&self) -> usize {
        self.m_edges
    }

    /// The source vertex (the one without a vertex letter).
    pub fn s(&self) -> usize {
        self.s
    }

    /// The sink vertex (the one without a mark letter).
    pub fn t(&self) -> usize {
        self.t
    }

    /// Alphabet size.
    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    /// The alphabet table; symbol id `i` is `symbols()[i - 1]`.
    pub fn symbols(&self) -> &[ScsSymbol] {
        &self.symbols
    }

    /// Role of symbol id `id` (1-based).
    pub fn symbol(&self, id: usize) -> ScsSymbol {
        self.symbols[id - 1]
    }

    /// The strings, in emission order.
    pub fn strings(&self) -> &[Vec<usize>] {
        &self.strings
    }

    /// Superstring length witnessing a Hamiltonian path: `2m + 3n`.
    pub fn target_length(&self) -> usize {
        2 * self.m_edges + 3 * self.n_vertices
    }

    /// Symbol id of vertex `u`'s letter (none for the source).
    pub fn vertex_id(&self, u: usize) -> Option<usize> {
        self.vertex_ids.get(u).copied().flatten()
    }

    /// Symbol id of vertex `u`'s mark letter (none for the sink).
    pub fn mark_id(&self, u: usize) -> Option<usize> {
        self.mark_ids.get(u).copied().flatten()
    }

    fn role_id(&self, role: ScsSymbol) -> usize {
        self.symbols
            .iter()
            .position(|&sym| sym == role)
            .expect("validated at construction")
            + 1
    }

    /// Symbol id of the left endcap.
    pub fn open_id(&self) -> usize {
        self.role_id(ScsSymbol::Open)
    }

    /// Symbol id of the separator.
    pub fn sep_id(&self) -> usize {
        self.role_id(ScsSymbol::Sep)
    }

    /// Symbol id of the right endcap.
    pub fn close_id(&self) -> usize {
        self.role_id(ScsSymbol::Close)
    }
}

/// Length of the longest suffix of `x` that is a prefix of `y`.
fn max_overlap<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    let bound = x.len().min(y.len());
    (0..=bound)
        .rev()
        .find(|&o| x[x.len() - o..] == y[..o])
        .unwrap_or(0)
}

/// Joins two strings on their longest overlap: `x` concatenated with `y`
/// minus the longest prefix of `y` that is a suffix of `x`.
pub fn overlap_merge<T: Clone + PartialEq>(x: &[T], y: &[T]) -> Vec<T> {
    let o = max_overlap(x, y);
    let mut out = Vec::with_capacity(x.len() + y.len() - o);
    out.extend_from_slice(x);
    out.extend_from_slice(&y[o..]);
    out
}

/// Builds the string set of a graph: one separator string per vertex
/// (`open·sep·mark(s)` for the source, `vertex·sep·mark` in between,
/// `vertex·sep·close` for the sink) and, per edge considered in the cyclic
/// child order, the two gadget strings `mark·child·mark` and
/// `child·mark·next-child`. Emission order is separator strings by vertex,
/// then gadget pairs by vertex and cyclic index; this order also fixes the
/// ids later assigned by the alignment-level encoding.
pub fn rdhp_to_scs(g: &RdhpInstance) -> ScsInstance {
    let (n, s, t) = (g.n(), g.s(), g.t());
    let mut symbols = vec![ScsSymbol::Open, ScsSymbol::Sep, ScsSymbol::Close];
    for u in 1..=n {
        if u != s {
            symbols.push(ScsSymbol::Vertex(u));
        }
    }
    for u in 1..=n {
        if u != t {
            symbols.push(ScsSymbol::Mark(u));
        }
    }
    let lookup = |needle: ScsSymbol| -> usize {
        symbols.iter().position(|&sym| sym == needle).unwrap() + 1
    };
    let vertex = |u: usize| lookup(ScsSymbol::Vertex(u));
    let mark = |u: usize| lookup(ScsSymbol::Mark(u));

    let mut strings = Vec::with_capacity(2 * g.m() + n);
    for u in 1..=n {
        let first = if u == s { lookup(ScsSymbol::Open) } else { vertex(u) };
        let last = if u == t { lookup(ScsSymbol::Close) } else { mark(u) };
        strings.push(vec![first, lookup(ScsSymbol::Sep), last]);
    }
    for u in 1..=n {
        if u == t {
            continue;
        }
        for j in 1..=g.out_degree(u) {
            let child = vertex(g.cyclic_child(u, j));
            let next = vertex(g.cyclic_child(u, j + 1));
            strings.push(vec![mark(u), child, mark(u)]);
            strings.push(vec![child, mark(u), next]);
        }
    }
    ScsInstance::new(symbols, strings).expect("construction satisfies the instance invariants")
}

/// String placements: each string index paired with its symbol offset,
/// 0-based, plus the joined superstring.
pub(crate) type PiecePlan = (Vec<(usize, usize)>, Vec<usize>);

/// The canonical placement realizing a Hamiltonian path: every string index
/// paired with its offset in the joined superstring, plus the superstring
/// itself.
pub(crate) fn ham_path_pieces(
    g: &RdhpInstance,
    scs: &ScsInstance,
    path: &[usize],
) -> Result<PiecePlan> {
    if !g.is_ham_path(path) {
        return Err(Error::Input(format!(
            "not a Hamiltonian source-to-sink path: {path:?}"
        )));
    }
    let n = g.n();
    // Index arithmetic mirroring the emission order of `rdhp_to_scs`.
    let mut family_start = vec![0usize; n + 1];
    let mut running = n;
    for (u, start) in family_start.iter_mut().enumerate().skip(1) {
        if u == g.t() {
            continue;
        }
        *start = running;
        running += 2 * g.out_degree(u);
    }
    debug_assert_eq!(running, scs.strings().len());

    let mut pieces = Vec::with_capacity(scs.strings().len());
    let mut text: Vec<usize> = Vec::with_capacity(scs.target_length());
    let push = |pieces: &mut Vec<(usize, usize)>, text: &mut Vec<usize>, idx: usize| {
        let piece = &scs.strings()[idx];
        let o = max_overlap(text, piece);
        pieces.push((idx, text.len() - o));
        text.extend_from_slice(&piece[o..]);
    };

    push(&mut pieces, &mut text, path[0] - 1);
    for k in 0..n - 1 {
        let (u, succ) = (path[k], path[k + 1]);
        let d = g.out_degree(u);
        let j_base = (1..=d)
            .find(|&j| g.cyclic_child(u, j) == succ)
            .expect("path edge must appear among the successors");
        for r in 0..d {
            let raw = (j_base - 1 + r) % d;
            push(&mut pieces, &mut text, family_start[u] + 2 * raw);
            push(&mut pieces, &mut text, family_start[u] + 2 * raw + 1);
        }
        push(&mut pieces, &mut text, succ - 1);
    }
    debug_assert_eq!(text.len(), scs.target_length());
    Ok((pieces, text))
}

/// Realizes a Hamiltonian `s`→`t` path as a superstring of the instance's
/// strings with length exactly `2m + 3n`: the separator string of the
/// source, then for each path vertex all its gadget strings joined on
/// maximal overlaps starting from the edge the path takes, then the next
/// vertex's separator string, and so on to the sink.
pub fn ham_path_to_superstring(g: &RdhpInstance, path: &[usize]) -> Result<Vec<usize>> {
    let scs = rdhp_to_scs(g);
    let (_, text) = ham_path_pieces(g, &scs, path)?;
    Ok(text)
}

/// Recovers the Hamiltonian path from a target-length superstring by
/// splitting on the separator symbol: the first and last fragments must be
/// the bare endcaps, and every fragment in between alternates one vertex's
/// mark letter with letters of its successors, ending in the vertex the
/// path moves to. Any structural deviation — wrong length is an input
/// error — is reported as a structural error.
pub fn superstring_to_ham_path(g: &RdhpInstance, q: &[usize]) -> Result<Vec<usize>> {
    let scs = rdhp_to_scs(g);
    if q.len() != scs.target_length() {
        return Err(Error::Input(format!(
            "superstring length {} differs from target {}",
            q.len(),
            scs.target_length()
        )));
    }
    for string in scs.strings() {
        if !q.windows(3).any(|w| w == string.as_slice()) {
            return Err(Error::Structural(format!(
                "string {string:?} does not occur in the claimed superstring"
            )));
        }
    }
    let segments: Vec<&[usize]> = q.split(|&c| c == scs.sep_id()).collect();
    let n = g.n();
    if segments.len() != n + 1 {
        return Err(Error::Structural(format!(
            "expected {} separator symbols, found {}",
            n,
            segments.len() - 1
        )));
    }
    if segments[0] != [scs.open_id()] {
        return Err(Error::Structural(
            "superstring must start with the open endcap then a separator".into(),
        ));
    }
    if segments[n] != [scs.close_id()] {
        return Err(Error::Structural(
            "superstring must end with a separator then the close endcap".into(),
        ));
    }

    let mut path = Vec::with_capacity(n);
    for seg in &segments[1..n] {
        if seg.len() < 2 || seg.len() % 2 != 0 {
            return Err(Error::Structural(format!(
                "fragment {seg:?} is not an alternating mark/vertex walk"
            )));
        }
        let u = match scs.symbol(seg[0]) {
            ScsSymbol::Mark(u) => u,
            other => {
                return Err(Error::Structural(format!(
                    "fragment starts with {other:?} instead of a mark letter"
                )))
            }
        };
        let mut last_vertex = 0;
        for (pos, &c) in seg.iter().enumerate() {
            if pos % 2 == 0 {
                if scs.symbol(c) != ScsSymbol::Mark(u) {
                    return Err(Error::Structural(format!(
                        "fragment mixes mark letters: {seg:?}"
                    )));
                }
            } else {
                match scs.symbol(c) {
                    ScsSymbol::Vertex(v) if g.has_edge(u, v) => last_vertex = v,
                    other => {
                        return Err(Error::Structural(format!(
                            "fragment visits {other:?}, not a successor of vertex {u}"
                        )))
                    }
                }
            }
        }
        if let Some(&prev) = path.last() {
            if prev != u {
                return Err(Error::Structural(format!(
                    "fragment of vertex {u} follows a move to vertex {prev}"
                )));
            }
            path.pop();
        }
        path.push(u);
        path.push(last_vertex);
    }
    if !g.is_ham_path(&path) {
        return Err(Error::Structural(format!(
            "recovered sequence {path:?} is not a Hamiltonian source-to-sink path"
        )));
    }
    Ok(path)
}

fn check_scs_inputs(strings: &[Vec<usize>], cap: usize) -> Result<()> {
    let n = strings.len();
    if n > cap.min(SCS_HARD_CAP) {
        return Err(Error::Capacity(format!(
            "exact superstring search accepts at most {} strings, got {n}",
            cap.min(SCS_HARD_CAP)
        )));
    }
    for (i, x) in strings.iter().enumerate() {
        for (j, y) in strings.iter().enumerate() {
            if i != j && y.len() >= x.len() && y.windows(x.len()).any(|w| w == x.as_slice()) {
                return Err(Error::Input(format!(
                    "string {i} is a substring of string {j}"
                )));
            }
        }
    }
    Ok(())
}

struct ScsPrep {
    ov: Vec<Vec<i32>>,
    layers: Vec<Vec<u32>>,
}

fn prepare_scs(strings: &[Vec<usize>]) -> ScsPrep {
    let n = strings.len();
    let mut ov = vec![vec![0i32; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                ov[i][j] = max_overlap(&strings[i], &strings[j]) as i32;
            }
        }
    }
    let mut layers = vec![Vec::new(); n + 1];
    for mask in 1u32..1 << n {
        layers[mask.count_ones() as usize].push(mask);
    }
    ScsPrep { ov, layers }
}

fn scs_row(prep: &ScsPrep, dp: &[Vec<i32>], mask: u32) -> Vec<i32> {
    let n = prep.ov.len();
    let mut row = vec![-1i32; n];
    for (last, slot) in row.iter_mut().enumerate() {
        if mask & (1 << last) == 0 {
            continue;
        }
        let rest = mask ^ (1 << last);
        let mut best = -1;
        for (prev, &reach) in dp[rest as usize].iter().enumerate() {
            if rest & (1 << prev) != 0 && reach >= 0 {
                best = best.max(reach + prep.ov[prev][last]);
            }
        }
        *slot = best;
    }
    row
}

fn scs_finish(strings: &[Vec<usize>], prep: &ScsPrep, dp: &[Vec<i32>]) -> (usize, Vec<usize>) {
    let n = strings.len();
    let full = ((1u32 << n) - 1) as usize;
    let (mut last, mut best) = (0, -1);
    for (cand, &reach) in dp[full].iter().enumerate() {
        if reach > best {
            best = reach;
            last = cand;
        }
    }
    let mut order = vec![last];
    let mut mask = full as u32;
    while mask.count_ones() > 1 {
        let rest = mask ^ (1 << last);
        let target = dp[mask as usize][last];
        let prev = (0..n)
            .find(|&p| {
                rest & (1 << p) != 0
                    && dp[rest as usize][p] >= 0
                    && dp[rest as usize][p] + prep.ov[p][last] == target
            })
            .expect("dynamic program rows are consistent");
        order.push(prev);
        mask = rest;
        last = prev;
    }
    order.reverse();
    let mut text: Vec<usize> = Vec::new();
    for &i in &order {
        text = overlap_merge(&text, &strings[i]);
    }
    let total: usize = strings.iter().map(Vec::len).sum();
    debug_assert_eq!(text.len(), total - best as usize);
    (text.len(), text)
}

/// Sequential exact shortest superstring over at most `cap` pairwise
/// non-substring strings: subset dynamic programming maximizing total
/// overlap. Returns the optimal length and one witness (deterministic:
/// ties resolve toward smaller string indices).
pub fn exact_scs_seq(strings: &[Vec<usize>], cap: usize) -> Result<(usize, Vec<usize>)> {
    check_scs_inputs(strings, cap)?;
    let n = strings.len();
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let prep = prepare_scs(strings);
    let mut dp = vec![vec![-1i32; n]; 1 << n];
    for i in 0..n {
        dp[1 << i][i] = 0;
    }
    for layer in &prep.layers[2..] {
        for &mask in layer {
            dp[mask as usize] = scs_row(&prep, &dp, mask);
        }
    }
    Ok(scs_finish(strings, &prep, &dp))
}

#[cfg(feature = "parallel")]
fn exact_scs_parallel(strings: &[Vec<usize>]) -> (usize, Vec<usize>) {
    use rayon::prelude::*;

    let n = strings.len();
    let prep = prepare_scs(strings);
    let mut dp = vec![vec![-1i32; n]; 1 << n];
    for i in 0..n {
        dp[1 << i][i] = 0;
    }
    for l in 2..=n {
        let rows: Vec<(u32, Vec<i32>)> = prep.layers[l]
            .par_iter()
            .map(|&mask| (mask, scs_row(&prep, &dp, mask)))
            .collect();
        for (mask, row) in rows {
            dp[mask as usize] = row;
        }
    }
    scs_finish(strings, &prep, &dp)
}

/// Exact shortest superstring; equivalent to [`exact_scs_seq`] but runs the
/// subset layers data-parallel for larger inputs when the `parallel`
/// feature is enabled.
pub fn exact_scs(strings: &[Vec<usize>], cap: usize) -> Result<(usize, Vec<usize>)> {
    #[cfg(feature = "parallel")]
    {
        if strings.len() >= PARALLEL_THRESHOLD {
            check_scs_inputs(strings, cap)?;
            return Ok(exact_scs_parallel(strings));
        }
    }
    exact_scs_seq(strings, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::rdhp::small_fixture;

    #[test]
    fn merge_joins_on_longest_overlap() {
        assert_eq!(overlap_merge(b"ab", b"cd"), b"abcd");
        assert_eq!(overlap_merge(b"abc", b"abc"), b"abc");
        assert_eq!(overlap_merge(b"aab", b"aba"), b"aaba");
        assert_eq!(overlap_merge::<u8>(b"", b"xy"), b"xy");
    }

    #[test]
    fn gadget_pair_merges_to_four_symbols() {
        // mark·child·mark joined with child·mark·next overlaps in two
        // symbols and yields mark·child·mark·next.
        let (w, c, next) = (10, 20, 30);
        assert_eq!(
            overlap_merge(&[w, c, w], &[c, w, next]),
            vec![w, c, w, next]
        );
    }

    #[test]
    fn fixture_instance_shape() {
        let g = small_fixture();
        let scs = rdhp_to_scs(&g);
        assert_eq!(scs.strings().len(), 2 * g.m() + g.n());
        assert_eq!(scs.strings().len(), 16);
        assert_eq!(scs.target_length(), 24);
        assert_eq!(scs.n_vertices(), 4);
        assert_eq!(scs.m_edges(), 6);
        assert_eq!(scs.s(), 1);
        assert_eq!(scs.t(), 4);
        // Alphabet: three specials, three vertex letters, three marks.
        assert_eq!(scs.sigma(), 9);
        assert_eq!(scs.vertex_id(1), None);
        assert_eq!(scs.mark_id(4), None);
    }

    #[test]
    fn specials_only_in_separator_strings() {
        let scs = rdhp_to_scs(&small_fixture());
        let specials = [scs.open_id(), scs.sep_id(), scs.close_id()];
        for string in scs.strings() {
            let has_special = string.iter().any(|c| specials.contains(c));
            if has_special {
                assert_eq!(string[1], scs.sep_id());
            }
        }
        // Exactly n separator strings, one open, one close.
        let n = scs.n_vertices();
        let seps = scs
            .strings()
            .iter()
            .filter(|s| s[1] == scs.sep_id())
            .count();
        assert_eq!(seps, n);
    }

    #[test]
    fn instance_rejects_misplaced_specials() {
        let g = small_fixture();
        let scs = rdhp_to_scs(&g);
        let mut strings = scs.strings().to_vec();
        // Move the open endcap into a gadget string position.
        strings[5][1] = scs.open_id();
        assert!(matches!(
            ScsInstance::new(scs.symbols().to_vec(), strings),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn instance_rejects_duplicates() {
        let scs = rdhp_to_scs(&small_fixture());
        let mut strings = scs.strings().to_vec();
        strings[4] = strings[5].clone();
        assert!(matches!(
            ScsInstance::new(scs.symbols().to_vec(), strings),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn superstring_hits_target_length_and_contains_everything() {
        let g = small_fixture();
        let scs = rdhp_to_scs(&g);
        for path in [vec![1, 2, 3, 4], vec![1, 3, 2, 4]] {
            let q = ham_path_to_superstring(&g, &path).unwrap();
            assert_eq!(q.len(), scs.target_length());
            assert_eq!(q[0], scs.open_id());
            assert_eq!(q[1], scs.sep_id());
            assert_eq!(q[q.len() - 2], scs.sep_id());
            assert_eq!(q[q.len() - 1], scs.close_id());
            for string in scs.strings() {
                assert!(q.windows(3).any(|w| w == string.as_slice()));
            }
        }
    }

    #[test]
    fn superstring_length_decomposition() {
        // Per-vertex gadget blocks contribute 2·out-degree + 2 symbols and
        // join pairwise on one symbol; with the endcap strings and the
        // interior separator strings the total telescopes to 2m + 3n.
        let g = small_fixture();
        let (n, m) = (g.n(), g.m());
        let blocks: usize = (1..=n)
            .filter(|&u| u != g.t())
            .map(|u| 2 * g.out_degree(u) + 2)
            .sum();
        assert_eq!(blocks, 2 * m + 2 * (n - 1));
        assert_eq!(blocks + 2 * 2 + (n - 2), 2 * m + 3 * n);
        let q = ham_path_to_superstring(&g, &[1, 2, 3, 4]).unwrap();
        assert_eq!(q.len(), 2 * m + 3 * n);
    }

    #[test]
    fn ham_path_is_required() {
        let g = small_fixture();
        assert!(matches!(
            ham_path_to_superstring(&g, &[1, 2, 4, 3]),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            ham_path_to_superstring(&g, &[1, 2, 3]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn path_round_trips_through_superstring() {
        let g = small_fixture();
        for path in [vec![1, 2, 3, 4], vec![1, 3, 2, 4]] {
            let q = ham_path_to_superstring(&g, &path).unwrap();
            assert_eq!(superstring_to_ham_path(&g, &q).unwrap(), path);
        }
    }

    #[test]
    fn sampled_instances_round_trip() {
        for seed in 0..10 {
            let (g, path) = crate::reductions::rdhp::sample_rdhp(6, seed).unwrap();
            let q = ham_path_to_superstring(&g, &path).unwrap();
            assert_eq!(q.len(), 2 * g.m() + 3 * g.n());
            assert_eq!(superstring_to_ham_path(&g, &q).unwrap(), path);
        }
    }

    #[test]
    fn corrupted_superstrings_are_rejected() {
        let g = small_fixture();
        let scs = rdhp_to_scs(&g);
        let q = ham_path_to_superstring(&g, &[1, 2, 3, 4]).unwrap();
        // Wrong length is an input error.
        assert!(matches!(
            superstring_to_ham_path(&g, &q[..q.len() - 1]),
            Err(Error::Input(_))
        ));
        // Any single-symbol change must trip a structural check.
        for pos in 0..q.len() {
            for sub in 1..=scs.sigma() {
                if sub == q[pos] {
                    continue;
                }
                let mut bad = q.clone();
                bad[pos] = sub;
                assert!(
                    matches!(
                        superstring_to_ham_path(&g, &bad),
                        Err(Error::Structural(_))
                    ),
                    "mutation at {pos} to {sub} slipped through"
                );
            }
        }
    }

    #[test]
    fn exact_scs_trivial_cases() {
        assert_eq!(exact_scs(&[], 18).unwrap(), (0, vec![]));
        assert_eq!(exact_scs(&[vec![7, 8, 9]], 18).unwrap().0, 3);
        let (len, text) = exact_scs(&[vec![1, 2], vec![2, 3]], 18).unwrap();
        assert_eq!((len, text), (3, vec![1, 2, 3]));
    }

    #[test]
    fn exact_scs_rejects_substrings_and_oversize() {
        assert!(matches!(
            exact_scs(&[vec![1, 2, 3], vec![2, 3]], 18),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            exact_scs(&[vec![1, 2], vec![1, 2]], 18),
            Err(Error::Input(_))
        ));
        let many: Vec<Vec<usize>> = (0..5).map(|i| vec![i, i + 100]).collect();
        assert!(matches!(exact_scs(&many, 4), Err(Error::Capacity(_))));
    }

    /// Reference optimum: try every permutation and fold on maximal
    /// overlaps. Valid because no input is a substring of another.
    fn permutation_optimum(strings: &[Vec<usize>]) -> usize {
        fn go(strings: &[Vec<usize>], used: &mut Vec<bool>, cur: Vec<usize>, best: &mut usize) {
            if used.iter().all(|&u| u) {
                *best = (*best).min(cur.len());
                return;
            }
            for i in 0..strings.len() {
                if !used[i] {
                    used[i] = true;
                    go(strings, used, overlap_merge(&cur, &strings[i]), best);
                    used[i] = false;
                }
            }
        }
        let mut best = usize::MAX;
        go(
            strings,
            &mut vec![false; strings.len()],
            Vec::new(),
            &mut best,
        );
        best
    }

    #[test]
    fn exact_scs_matches_permutation_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5c5);
        let mut checked = 0;
        while checked < 60 {
            let n = rng.gen_range(2..=6);
            let cand: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    let len = rng.gen_range(2..=4);
                    (0..len).map(|_| rng.gen_range(1..=3)).collect()
                })
                .collect();
            if check_scs_inputs(&cand, 18).is_err() {
                continue;
            }
            let (len, text) = exact_scs(&cand, 18).unwrap();
            assert_eq!(len, permutation_optimum(&cand), "strings {cand:?}");
            assert_eq!(len, text.len());
            for s in &cand {
                assert!(text.windows(s.len()).any(|w| w == s.as_slice()));
            }
            checked += 1;
        }
    }

    #[test]
    fn planted_fixture_optimum_equals_target() {
        let g = small_fixture();
        let scs = rdhp_to_scs(&g);
        let (len, text) = exact_scs(scs.strings(), DEFAULT_SCS_CAP).unwrap();
        assert_eq!(len, scs.target_length());
        // The optimum the DP finds is itself a decodable superstring.
        let path = superstring_to_ham_path(&g, &text).unwrap();
        assert!(g.is_ham_path(&path));
    }

    #[test]
    fn pathless_instance_exceeds_target() {
        // Vertex 3 unreachable: no Hamiltonian path, so no superstring
        // reaches the target length.
        let g = RdhpInstance::new(4, 1, 4, vec![(1, 2), (2, 4), (3, 2), (3, 4), (1, 4)], true)
            .unwrap();
        assert!(!g.has_ham_path().unwrap());
        let scs = rdhp_to_scs(&g);
        let (len, _) = exact_scs(scs.strings(), DEFAULT_SCS_CAP).unwrap();
        assert!(len > scs.target_length());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let g = small_fixture();
        let scs = rdhp_to_scs(&g);
        let par = exact_scs(scs.strings(), DEFAULT_SCS_CAP).unwrap();
        let seq = exact_scs_seq(scs.strings(), DEFAULT_SCS_CAP).unwrap();
        assert_eq!(par, seq);
    }
}
