//! Expansion of an [`ScsInstance`](super::ScsInstance) into wildcard
//! strings over per-string letters.
//!
//! Every vertex and mark letter gets a binary code: a shared 8-bit prefix
//! followed by the letter's index written with every bit doubled to a
//! complementary `01`/`10` pair. A code and its bitwise flip are rendered
//! as wildcard patterns (`1` → the string's own letter, `0` → wildcard),
//! so the pattern of a code interlocks exactly with the flipped pattern of
//! the *same* code and clashes with every other. Each length-3 source
//! string becomes three sub-blocks — left, middle, right — that expose the
//! code of the covered symbol in role-specific thirds, and the three
//! special symbols expand to solid letter runs. Patch strings cover the
//! role that stays open where only two source strings meet, which is what
//! pins optimal superstrings of the expansion to the block grid.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::reductions::rdhp::RdhpInstance;
use crate::reductions::scs::{ham_path_pieces, rdhp_to_scs, ScsInstance, ScsSymbol};
use crate::soda::{compatible, wildcard_merge, WildcardString};

/// Shared code prefix; its set bits anchor every non-wildcard pattern.
const PREFIX: [bool; 8] = [false, true, false, false, false, false, true, true];

/// Position of a sub-block within an expanded string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// First third: code then flipped code, then wildcards.
    Left,
    /// Middle third: flipped code, wildcards, code.
    Middle,
    /// Last third: wildcards, then code, then flipped code.
    Right,
}

/// What one string of the expanded instance stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodedKind {
    /// The expansion of the source string with this index.
    Source { index: usize },
    /// A patch: one role's sub-block for one vertex or mark letter.
    Patch { symbol: ScsSymbol, role: Role },
}

/// The expanded instance: one wildcard string per source string plus the
/// patch strings, with letters `1..=sigma` assigned first to source
/// strings in emission order, then to vertex letters ascending, then to
/// mark letters ascending.
#[derive(Debug, Clone)]
pub struct EncodedInstance {
    n_vertices: usize,
    m_edges: usize,
    s: usize,
    t: usize,
    code_width: usize,
    base_count: usize,
    strings: Vec<WildcardString>,
    kinds: Vec<EncodedKind>,
    codes: Vec<Vec<bool>>,
    code_index: HashMap<ScsSymbol, usize>,
    patch_index: HashMap<(ScsSymbol, Role), usize>,
}

fn ceil_log2(x: usize) -> usize {
    debug_assert!(x > 0);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

fn flip(code: &[bool]) -> Vec<bool> {
    code.iter().map(|&b| !b).collect()
}

/// Renders `bits` with the given letter: set bits become the letter,
/// cleared bits become wildcards.
fn render(letter: usize, bits: &[bool]) -> Vec<Option<usize>> {
    bits.iter().map(|&b| b.then_some(letter)).collect()
}

impl EncodedInstance {
    /// Number of graph vertices behind the instance.
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of graph edges behind the instance.
    pub fn m_edges(&self) -> usize {
        self.m_edges
    }

    /// Bits appended to the shared prefix before pair-doubling.
    pub fn code_width(&self) -> usize {
        self.code_width
    }

    /// Length of one sub-block: `8 + 2 * code_width`.
    pub fn subblock(&self) -> usize {
        PREFIX.len() + 2 * self.code_width
    }

    /// Length of one block (three sub-blocks); expanded source strings
    /// span three blocks, patches one.
    pub fn block(&self) -> usize {
        3 * self.subblock()
    }

    /// Superstring length witnessing a Hamiltonian path: one block per
    /// symbol of the symbol-level target, `(2m + 3n) * block / 3 * 3`.
    pub fn target_length(&self) -> usize {
        (2 * self.m_edges + 3 * self.n_vertices) * self.block()
    }

    /// Number of expanded source strings (the patches follow them).
    pub fn base_count(&self) -> usize {
        self.base_count
    }

    /// Alphabet size: one letter per source string, vertex, and mark.
    pub fn sigma(&self) -> usize {
        self.base_count + 2 * self.n_vertices - 1
    }

    /// The expanded strings: sources in emission order, then mark patches
    /// (middle, left per vertex ascending), then vertex patches (middle,
    /// right per vertex ascending).
    pub fn strings(&self) -> &[WildcardString] {
        &self.strings
    }

    /// What string `i` stands for.
    pub fn kind(&self, i: usize) -> EncodedKind {
        self.kinds[i]
    }

    /// Letter assigned to vertex `u` (none for the source vertex).
    pub fn vertex_letter(&self, u: usize) -> Option<usize> {
        (u != self.s && u >= 1 && u <= self.n_vertices).then(|| self.base_count + u)
    }

    /// Letter assigned to vertex `u`'s mark (none for the sink).
    pub fn mark_letter(&self, u: usize) -> Option<usize> {
        if u == self.t || u < 1 || u > self.n_vertices {
            return None;
        }
        let rank = (1..=u).filter(|&v| v != self.t).count();
        Some(self.base_count + self.n_vertices + rank)
    }

    /// The binary code registered for a vertex or mark symbol.
    pub fn code(&self, symbol: ScsSymbol) -> Option<&[bool]> {
        self.code_index
            .get(&symbol)
            .map(|&i| self.codes[i].as_slice())
    }

    /// All registered codes (vertices ascending, then marks ascending).
    pub fn codes(&self) -> &[Vec<bool>] {
        &self.codes
    }

    /// Index of the patch string for `symbol` in `role`, if one exists.
    pub fn patch(&self, symbol: ScsSymbol, role: Role) -> Option<usize> {
        self.patch_index.get(&(symbol, role)).copied()
    }

    /// One sub-block of the expansion of `symbol` under `letter`: the
    /// solid run for the special symbol owning the role, the role-specific
    /// code/flip/wildcard arrangement otherwise.
    pub fn role_pattern(&self, role: Role, symbol: ScsSymbol, letter: usize) -> WildcardString {
        let sub = self.subblock();
        let solid = match (role, symbol) {
            (Role::Left, ScsSymbol::Open)
            | (Role::Middle, ScsSymbol::Sep)
            | (Role::Right, ScsSymbol::Close) => true,
            (_, ScsSymbol::Open | ScsSymbol::Sep | ScsSymbol::Close) => {
                unreachable!("special symbols are locked to their role positions")
            }
            _ => false,
        };
        let cells = if solid {
            vec![Some(letter); 3 * sub]
        } else {
            let code = self
                .code(symbol)
                .expect("vertex and mark symbols carry codes");
            let (one, other) = (render(letter, code), render(letter, &flip(code)));
            let blank = vec![None; sub];
            let mut cells = Vec::with_capacity(3 * sub);
            match role {
                Role::Left => {
                    cells.extend(one);
                    cells.extend(other);
                    cells.extend(blank);
                }
                Role::Middle => {
                    cells.extend(other);
                    cells.extend(blank);
                    cells.extend(one);
                }
                Role::Right => {
                    cells.extend(blank);
                    cells.extend(one);
                    cells.extend(other);
                }
            }
            cells
        };
        WildcardString::new(cells).expect("letters are positive")
    }
}

/// Expands an instance: assigns letters, registers codes (width
/// `max(1, ceil(log2(vertices + marks)))`), expands every source string
/// into its three role sub-blocks, and appends the patch strings.
pub fn encode_scs_to_soda(scs: &ScsInstance) -> EncodedInstance {
    let (n, s, t) = (scs.n_vertices(), scs.s(), scs.t());
    let universe = 2 * n - 1;
    let code_width = ceil_log2(universe).max(1);
    let mut codes = Vec::with_capacity(universe);
    let mut code_index = HashMap::new();
    let mut register = |symbol: ScsSymbol, codes: &mut Vec<Vec<bool>>| {
        let id = codes.len();
        let mut code = PREFIX.to_vec();
        for r in (0..code_width).rev() {
            let bit = (id >> r) & 1 == 1;
            code.push(bit);
            code.push(!bit);
        }
        codes.push(code);
        code_index.insert(symbol, id);
    };
    for u in 1..=n {
        register(ScsSymbol::Vertex(u), &mut codes);
    }
    for u in (1..=n).filter(|&u| u != t) {
        register(ScsSymbol::Mark(u), &mut codes);
    }

    let base_count = scs.strings().len();
    let mut enc = EncodedInstance {
        n_vertices: n,
        m_edges: scs.m_edges(),
        s,
        t,
        code_width,
        base_count,
        strings: Vec::with_capacity(base_count + 4 * n - 4),
        kinds: Vec::with_capacity(base_count + 4 * n - 4),
        codes,
        code_index,
        patch_index: HashMap::new(),
    };

    for (index, string) in scs.strings().iter().enumerate() {
        let letter = index + 1;
        let mut cells = Vec::with_capacity(3 * enc.block());
        for (pos, role) in [Role::Left, Role::Middle, Role::Right].into_iter().enumerate() {
            let pattern = enc.role_pattern(role, scs.symbol(string[pos]), letter);
            cells.extend_from_slice(pattern.symbols());
        }
        enc.strings
            .push(WildcardString::new(cells).expect("letters are positive"));
        enc.kinds.push(EncodedKind::Source { index });
    }
    let add_patch = |enc: &mut EncodedInstance, symbol: ScsSymbol, role: Role, letter: usize| {
        let pattern = enc.role_pattern(role, symbol, letter);
        enc.patch_index.insert((symbol, role), enc.strings.len());
        enc.strings.push(pattern);
        enc.kinds.push(EncodedKind::Patch { symbol, role });
    };
    for u in (1..=n).filter(|&u| u != t) {
        let letter = enc.mark_letter(u).expect("non-sink vertices carry marks");
        add_patch(&mut enc, ScsSymbol::Mark(u), Role::Middle, letter);
        add_patch(&mut enc, ScsSymbol::Mark(u), Role::Left, letter);
    }
    for u in (1..=n).filter(|&u| u != s) {
        let letter = enc.vertex_letter(u).expect("non-source vertices carry letters");
        add_patch(&mut enc, ScsSymbol::Vertex(u), Role::Middle, letter);
        add_patch(&mut enc, ScsSymbol::Vertex(u), Role::Right, letter);
    }
    enc
}

/// Structural checks on an expansion, returned as a list of violations
/// (empty means sound): code table invariants, the wildcard count of every
/// code/flip pair, full-coverage merges of the three roles under distinct
/// letters, and cross-code exclusivity (a rendered code interlocks with a
/// rendered flip iff both come from the same symbol).
pub fn audit_encoding(enc: &EncodedInstance) -> Vec<String> {
    let mut bad = Vec::new();
    let sub = enc.subblock();
    let symbols: Vec<ScsSymbol> = {
        let mut v: Vec<(usize, ScsSymbol)> =
            enc.code_index.iter().map(|(&sym, &i)| (i, sym)).collect();
        v.sort_by_key(|&(i, _)| i);
        v.into_iter().map(|(_, sym)| sym).collect()
    };

    for (i, code) in enc.codes.iter().enumerate() {
        if code.len() != sub {
            bad.push(format!("code {i} has length {} instead of {sub}", code.len()));
        }
        if code[..PREFIX.len()] != PREFIX {
            bad.push(format!("code {i} does not start with the shared prefix"));
        }
        for r in 0..enc.code_width() {
            let (a, b) = (code[PREFIX.len() + 2 * r], code[PREFIX.len() + 2 * r + 1]);
            if a == b {
                bad.push(format!("code {i} pair {r} is not complementary"));
            }
        }
        for (j, other) in enc.codes.iter().enumerate() {
            if i < j && code == other {
                bad.push(format!("codes {i} and {j} coincide"));
            }
        }
    }

    for &sym in &symbols {
        let code = enc.code(sym).unwrap();
        let mut pair = render(1, code);
        pair.extend(render(1, &flip(code)));
        let wildcards = pair.iter().filter(|c| c.is_none()).count();
        if wildcards != sub {
            bad.push(format!(
                "code/flip pair of {sym:?} has {wildcards} wildcards instead of {sub}"
            ));
        }

        let left = enc.role_pattern(Role::Left, sym, 1);
        let middle = enc.role_pattern(Role::Middle, sym, 2);
        let right = enc.role_pattern(Role::Right, sym, 3);
        for (a, b) in [(&left, &middle), (&left, &right), (&middle, &right)] {
            if !compatible(a, b) {
                bad.push(format!("roles of {sym:?} clash under distinct letters"));
            }
        }
        let merged = wildcard_merge(&wildcard_merge(&left, &middle), &right);
        if merged.len() != 3 * sub || merged.concrete_count() != merged.len() {
            bad.push(format!(
                "role merge of {sym:?} is not a full block: length {}, {} concrete",
                merged.len(),
                merged.concrete_count()
            ));
        }
    }

    for &c in &symbols {
        for &d in &symbols {
            let plain = WildcardString::new(render(1, enc.code(c).unwrap())).unwrap();
            let flipped = WildcardString::new(render(2, &flip(enc.code(d).unwrap()))).unwrap();
            if compatible(&plain, &flipped) != (c == d) {
                bad.push(format!(
                    "rendered code of {c:?} and rendered flip of {d:?} break exclusivity"
                ));
            }
        }
    }
    bad
}

fn paint(
    cells: &mut [Option<usize>],
    placements: &mut [Option<usize>],
    pattern: &WildcardString,
    index: usize,
    offset: usize,
) -> Result<()> {
    if placements[index].is_some() {
        return Err(Error::Structural(format!(
            "string {index} would be placed twice"
        )));
    }
    for (p, &cell) in pattern.symbols().iter().enumerate() {
        let Some(letter) = cell else { continue };
        match cells[offset + p] {
            Some(existing) if existing != letter => {
                return Err(Error::Structural(format!(
                    "conflicting letters at cell {}",
                    offset + p
                )))
            }
            _ => cells[offset + p] = Some(letter),
        }
    }
    placements[index] = Some(offset);
    Ok(())
}

/// Realizes a Hamiltonian path at the expanded level: the wildcard-free
/// text of target length together with the offset of every expanded
/// string in it. Source strings land one block per symbol of the
/// symbol-level superstring; each patch lands on the block of its symbol
/// whose role its sources leave open (for mark letters that is the
/// leftmost occurrence for the middle patch and the rightmost for the
/// left patch; vertex patches fill the first and last occurrence inside
/// the gadget block of the path predecessor).
pub fn encoded_superstring(
    g: &RdhpInstance,
    path: &[usize],
) -> Result<(WildcardString, Vec<usize>)> {
    let scs = rdhp_to_scs(g);
    let enc = encode_scs_to_soda(&scs);
    let (pieces, symbol_text) = ham_path_pieces(g, &scs, path)?;
    let block = enc.block();
    let total = enc.target_length();
    debug_assert_eq!(total, symbol_text.len() * block);

    let mut cells: Vec<Option<usize>> = vec![None; total];
    let mut placements: Vec<Option<usize>> = vec![None; enc.strings().len()];
    let mut roles = vec![[false; 3]; symbol_text.len()];
    for &(index, offset) in &pieces {
        paint(
            &mut cells,
            &mut placements,
            &enc.strings()[index],
            index,
            offset * block,
        )?;
        for r in 0..3 {
            roles[offset + r][r] = true;
        }
    }
    for (pos, &symbol_id) in symbol_text.iter().enumerate() {
        let symbol = scs.symbol(symbol_id);
        if matches!(symbol, ScsSymbol::Open | ScsSymbol::Sep | ScsSymbol::Close) {
            continue;
        }
        for (r, role) in [Role::Left, Role::Middle, Role::Right].into_iter().enumerate() {
            if roles[pos][r] {
                continue;
            }
            let index = enc.patch(symbol, role).ok_or_else(|| {
                Error::Structural(format!("no patch covers {symbol:?} in role {role:?}"))
            })?;
            paint(
                &mut cells,
                &mut placements,
                &enc.strings()[index],
                index,
                pos * block,
            )?;
        }
    }
    let placements: Vec<usize> = placements
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| Error::Structural(format!("string {i} left unplaced"))))
        .collect::<Result<_>>()?;
    if cells.iter().any(Option::is_none) {
        return Err(Error::Structural(
            "expanded superstring retains wildcards".into(),
        ));
    }
    let text = WildcardString::new(cells).expect("letters are positive");
    Ok((text, placements))
}

/// Whether a placement of all expanded strings sits on the block grid:
/// true iff every string's ending position is a multiple of the block
/// length. Offsets out of bounds are input errors; when the verdict would
/// be positive, every placed string must also match the text position-wise
/// (a mismatch is an input error).
pub fn block_alignment_audit(
    q: &WildcardString,
    enc: &EncodedInstance,
    placement: &[usize],
) -> Result<bool> {
    if placement.len() != enc.strings().len() {
        return Err(Error::Input(format!(
            "placement covers {} strings, instance has {}",
            placement.len(),
            enc.strings().len()
        )));
    }
    for (i, (&offset, pattern)) in placement.iter().zip(enc.strings()).enumerate() {
        if offset + pattern.len() > q.len() {
            return Err(Error::Input(format!(
                "string {i} at offset {offset} exceeds the text"
            )));
        }
    }
    let block = enc.block();
    if placement
        .iter()
        .zip(enc.strings())
        .any(|(&offset, pattern)| (offset + pattern.len()) % block != 0)
    {
        return Ok(false);
    }
    for (i, (&offset, pattern)) in placement.iter().zip(enc.strings()).enumerate() {
        let agrees = pattern.symbols().iter().enumerate().all(|(p, &cell)| {
            match (cell, q.symbols()[offset + p]) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
        });
        if !agrees {
            return Err(Error::Input(format!(
                "string {i} does not match the text at offset {offset}"
            )));
        }
    }
    Ok(true)
}
