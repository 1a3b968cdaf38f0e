//! The double-array layout: paired `base`/`check` arrays with vacant slots.
//!
//! Slots are 1-based; the root always sits at slot 1. For every trie edge
//! `(i, c, j)` the layout satisfies `base[slot(i)] + c = slot(j)` and
//! `check[slot(j)] = slot(i)`. Since base values are at least 1 and labels
//! at least 1, child slots start at 2 and slot 1 never receives a check
//! value. Vacant entries are stored as 0.

use crate::error::{Error, Result};
use crate::trie::Trie;

/// Node visiting order for the greedy builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildOrder {
    /// Depth-first preorder, sibling subtrees in ascending label order.
    Dfs,
    /// Breadth-first order (equal to node-id order).
    Bfs,
}

/// A double-array layout of a trie.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleArray {
    sigma: usize,
    /// `base[slot]`; 0 where the slot holds no internal node. Index 0 unused.
    base: Vec<usize>,
    /// `check[slot]` = parent slot; 0 where vacant. Index 0 unused.
    check: Vec<usize>,
    /// `terminal[slot]`: whether the node at the slot ends a stored string.
    terminal: Vec<bool>,
    /// `node_of[node]` = slot of the trie node. Index 0 unused.
    node_of: Vec<usize>,
}

impl DoubleArray {
    /// Assembles a layout from one base value per internal node
    /// (`bases[node]`, 0 elsewhere). Slots are derived: the root gets slot 1
    /// and the child of `i` via label `c` gets `bases[i] + c`. Fails if two
    /// nodes land on the same slot or an internal node lacks a base value.
    pub fn from_bases(trie: &Trie, bases: &[usize]) -> Result<Self> {
        let m = trie.node_count();
        if bases.len() != m + 1 {
            return Err(Error::Input(format!(
                "expected {} base entries, got {}",
                m + 1,
                bases.len()
            )));
        }
        let mut node_of = vec![0usize; m + 1];
        node_of[1] = 1;
        let mut max_slot = 1;
        // Node ids are in breadth-first order, so parents precede children.
        for (u, &b) in bases.iter().enumerate().skip(1) {
            if !trie.is_internal(u) {
                continue;
            }
            if b == 0 {
                return Err(Error::Structural(format!(
                    "internal node {u} has no base value"
                )));
            }
            for (c, v) in trie.edges(u) {
                node_of[v] = b + c;
                max_slot = max_slot.max(b + c);
            }
        }
        let n = max_slot;
        let mut base = vec![0usize; n + 1];
        let mut check = vec![0usize; n + 1];
        let mut terminal = vec![false; n + 1];
        let mut occupant = vec![0usize; n + 1];
        for u in 1..=m {
            let s = node_of[u];
            if occupant[s] != 0 {
                return Err(Error::Structural(format!(
                    "nodes {} and {} collide on slot {}",
                    occupant[s], u, s
                )));
            }
            occupant[s] = u;
            terminal[s] = trie.is_terminal(u);
            if trie.is_internal(u) {
                base[s] = bases[u];
            }
        }
        for u in 1..=m {
            for (_, v) in trie.edges(u) {
                check[node_of[v]] = node_of[u];
            }
        }
        Ok(DoubleArray {
            sigma: trie.sigma(),
            base,
            check,
            terminal,
            node_of,
        })
    }

    /// Rebuilds a layout from its serialized pieces. `base`, `check`, and
    /// `terminal` are slot-indexed from slot 1 (length N); `node_of` is
    /// node-indexed from node 1 (length M).
    pub fn from_raw(
        sigma: usize,
        base: Vec<usize>,
        check: Vec<usize>,
        terminal: Vec<bool>,
        node_of: Vec<usize>,
    ) -> Result<Self> {
        let n = base.len();
        if n == 0 || check.len() != n || terminal.len() != n {
            return Err(Error::Input(
                "base/check/terminal arrays must share a positive length".into(),
            ));
        }
        if node_of.is_empty() {
            return Err(Error::Input("layout must place at least the root".into()));
        }
        if let Some(&s) = node_of.iter().find(|&&s| s == 0 || s > n) {
            return Err(Error::Input(format!("node slot {s} outside [1..{n}]")));
        }
        let mut da = DoubleArray {
            sigma,
            base: Vec::with_capacity(n + 1),
            check: Vec::with_capacity(n + 1),
            terminal: Vec::with_capacity(n + 1),
            node_of: Vec::with_capacity(node_of.len() + 1),
        };
        da.base.push(0);
        da.base.extend(base);
        da.check.push(0);
        da.check.extend(check);
        da.terminal.push(false);
        da.terminal.extend(terminal);
        da.node_of.push(0);
        da.node_of.extend(node_of);
        Ok(da)
    }

    /// Array length N (the highest node slot).
    pub fn size(&self) -> usize {
        self.base.len() - 1
    }

    /// Number of placed trie nodes M.
    pub fn node_count(&self) -> usize {
        self.node_of.len() - 1
    }

    /// Alphabet size the layout was built for.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Base value at `slot` (0 = none).
    pub fn base_at(&self, slot: usize) -> usize {
        self.base[slot]
    }

    /// Check value at `slot` (0 = vacant).
    pub fn check_at(&self, slot: usize) -> usize {
        self.check[slot]
    }

    /// Terminal flag of the node at `slot`.
    pub fn terminal_at(&self, slot: usize) -> bool {
        self.terminal[slot]
    }

    /// Slot of a trie node.
    pub fn slot_of(&self, node: usize) -> usize {
        self.node_of[node]
    }

    /// The node → slot table, indexed from node 1 (entry 0 is padding).
    pub fn node_of_table(&self) -> &[usize] {
        &self.node_of
    }

    /// Follows `symbols` from the root slot: at slot `cur` and symbol `c`,
    /// moves to `j = base[cur] + c` iff `j <= N` and `check[j] = cur`.
    /// Returns the final slot, or `None` at the first failing transition.
    pub fn traverse(&self, symbols: &[usize]) -> Result<Option<usize>> {
        let n = self.size();
        let mut cur = 1usize;
        for &c in symbols {
            if c < 1 || c > self.sigma {
                return Err(Error::Input(format!(
                    "symbol {} outside [1..{}]",
                    c, self.sigma
                )));
            }
            let b = self.base[cur];
            if b == 0 {
                return Ok(None);
            }
            let j = b + c;
            if j > n || self.check[j] != cur {
                return Ok(None);
            }
            cur = j;
        }
        Ok(Some(cur))
    }

    /// Whether `symbols` spells a stored string (terminal-flagged slot).
    pub fn contains(&self, symbols: &[usize]) -> Result<bool> {
        Ok(self
            .traverse(symbols)?
            .is_some_and(|slot| self.terminal[slot]))
    }
}

/// Checks a layout against its trie. Returns the list of violations; an
/// empty list means the layout is valid.
pub fn validate(da: &DoubleArray, trie: &Trie) -> Vec<String> {
    let mut violations = Vec::new();
    let m = trie.node_count();
    let n = da.size();
    if da.node_count() != m {
        violations.push(format!(
            "layout places {} nodes but the trie has {}",
            da.node_count(),
            m
        ));
        return violations;
    }
    // Slots in range and injective.
    let mut occupant = vec![0usize; n + 1];
    for u in 1..=m {
        let s = da.slot_of(u);
        if s == 0 || s > n {
            violations.push(format!("node {u} placed at slot {s} outside [1..{n}]"));
            return violations;
        }
        if occupant[s] != 0 {
            violations.push(format!(
                "nodes {} and {} share slot {}",
                occupant[s], u, s
            ));
        }
        occupant[s] = u;
    }
    if da.slot_of(trie.root()) != 1 {
        violations.push(format!(
            "root placed at slot {} instead of 1",
            da.slot_of(trie.root())
        ));
    }
    if da.check_at(da.slot_of(trie.root())) != 0 {
        violations.push("root slot has a non-vacant check value".into());
    }
    let max_slot = (1..=m).map(|u| da.slot_of(u)).max().unwrap_or(0);
    if n != max_slot {
        violations.push(format!(
            "array length {n} differs from the highest node slot {max_slot}"
        ));
    }
    // Edge conditions.
    for u in 1..=m {
        let su = da.slot_of(u);
        let b = da.base_at(su);
        if trie.is_internal(u) && b == 0 {
            violations.push(format!("internal node {u} at slot {su} has no base value"));
            continue;
        }
        if !trie.is_internal(u) && b != 0 {
            violations.push(format!("leaf node {u} at slot {su} has a base value"));
        }
        for (c, v) in trie.edges(u) {
            let sv = da.slot_of(v);
            if b + c != sv {
                violations.push(format!(
                    "edge ({u},{c},{v}): base {b} + {c} = {} but the child sits at slot {sv}",
                    b + c
                ));
            }
            if da.check_at(sv) != su {
                violations.push(format!(
                    "edge ({u},{c},{v}): check at slot {sv} is {} instead of {su}",
                    da.check_at(sv)
                ));
            }
        }
    }
    // Every checked slot hosts exactly one non-root node; vacant slots host none.
    for (s, &host) in occupant.iter().enumerate().skip(1) {
        let checked = da.check_at(s) != 0;
        let hosts_nonroot = host != 0 && host != trie.root();
        if checked && !hosts_nonroot {
            violations.push(format!("slot {s} has a check value but hosts no node"));
        }
        if !checked && hosts_nonroot {
            violations.push(format!("slot {s} hosts node {host} but has a vacant check"));
        }
    }
    violations
}

/// Lays out each internal node in its own reserved window of `sigma` slots:
/// the p-th internal node (in id order, from 0) gets base `1 + p * sigma`.
pub fn trivial_layout(trie: &Trie) -> DoubleArray {
    let sigma = trie.sigma();
    let mut bases = vec![0usize; trie.node_count() + 1];
    for (p, u) in trie.internal_nodes().into_iter().enumerate() {
        bases[u] = 1 + p * sigma;
    }
    DoubleArray::from_bases(trie, &bases).expect("reserved windows cannot collide")
}

/// First-fit builder: visits nodes in the given order and gives each
/// internal node the minimum base `b >= 1` such that every slot `b + c`
/// (`c` in its label set) is unoccupied at that moment.
pub fn greedy_build(trie: &Trie, order: BuildOrder) -> DoubleArray {
    let m = trie.node_count();
    let visit: Vec<usize> = match order {
        BuildOrder::Bfs => (1..=m).collect(),
        BuildOrder::Dfs => {
            let mut out = Vec::with_capacity(m);
            let mut stack = vec![1usize];
            while let Some(u) = stack.pop() {
                out.push(u);
                let kids: Vec<usize> = trie.edges(u).map(|(_, v)| v).collect();
                stack.extend(kids.into_iter().rev());
            }
            out
        }
    };
    let mut occupied = vec![false, true]; // slot 1 = root
    let mut bases = vec![0usize; m + 1];
    for &u in &visit {
        let labels = match trie.max_label(u) {
            Some(_) => trie.edges(u).map(|(c, _)| c).collect::<Vec<_>>(),
            None => continue,
        };
        let mut b = 1usize;
        loop {
            let free = labels
                .iter()
                .all(|&c| !occupied.get(b + c).copied().unwrap_or(false));
            if free {
                break;
            }
            b += 1;
        }
        bases[u] = b;
        for &c in &labels {
            if b + c >= occupied.len() {
                occupied.resize(b + c + 1, false);
            }
            occupied[b + c] = true;
        }
    }
    DoubleArray::from_bases(trie, &bases).expect("first-fit claims disjoint slots")
}

/// Array length and density M/N of a layout.
pub fn size_and_density(da: &DoubleArray, trie: &Trie) -> (usize, f64) {
    (da.size(), trie.node_count() as f64 / da.size() as f64)
}
