//! Boolean encoding of the layout problem: for a bound `N` on the array
//! length, Base variables pick each internal node's base value, Check
//! variables say which internal node claims each slot, and Pad variables
//! mark slots at or below the highest claimed one. Minimizing the true
//! Pad count minimizes the array size.

use crate::double_array::DoubleArray;
use crate::error::{Error, Result};
use crate::trie::Trie;

use super::cardinality::{at_most_one, exactly_one, AmoEncoding};
use super::wcnf::WcnfFormula;

/// Meaning of one encoder variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarTag {
    /// Internal node `node` takes base value `value`.
    Base { node: usize, value: usize },
    /// Slot `slot` is claimed by a child of internal node `node`.
    Check { node: usize, slot: usize },
    /// Slot `slot` is at or below the highest claimed slot.
    Pad { slot: usize },
}

/// Bijection between encoder variables and their tags, for a fixed trie
/// shape and length bound. Auxiliary variables introduced by cardinality
/// encodings carry no tag.
#[derive(Debug, Clone)]
pub struct VarMap {
    bound: usize,
    /// Ascending ids of the internal nodes.
    internal: Vec<usize>,
    /// Node id -> index into `internal`, if internal.
    rank: Vec<Option<usize>>,
    /// Per internal node: number of admissible base values,
    /// `max(0, bound - max_label)`.
    window: Vec<usize>,
    /// Per internal node: variable index of its first base value.
    base_start: Vec<usize>,
    check_start: usize,
    pad_start: usize,
    core_count: usize,
}

impl VarMap {
    fn build(trie: &Trie, bound: usize) -> VarMap {
        let internal = trie.internal_nodes();
        let mut rank = vec![None; trie.node_count() + 1];
        for (r, &u) in internal.iter().enumerate() {
            rank[u] = Some(r);
        }
        let mut window = Vec::with_capacity(internal.len());
        let mut base_start = Vec::with_capacity(internal.len());
        let mut next = 1usize;
        for &u in &internal {
            let max_label = trie.max_label(u).expect("internal node has children");
            base_start.push(next);
            let w = bound.saturating_sub(max_label);
            window.push(w);
            next += w;
        }
        let check_start = next;
        next += internal.len() * bound;
        let pad_start = next;
        next += bound;
        VarMap {
            bound,
            internal,
            rank,
            window,
            base_start,
            check_start,
            pad_start,
            core_count: next - 1,
        }
    }

    /// The length bound `N` the encoding was built for.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Variables with tags; cardinality auxiliaries come after these.
    pub fn core_count(&self) -> usize {
        self.core_count
    }

    pub fn internal_nodes(&self) -> &[usize] {
        &self.internal
    }

    /// Admissible base values for `node` are `1..=window`.
    pub fn base_window(&self, node: usize) -> usize {
        self.rank[node].map_or(0, |r| self.window[r])
    }

    pub fn base_var(&self, node: usize, value: usize) -> Option<i64> {
        let r = (*self.rank.get(node)?)?;
        if value == 0 || value > self.window[r] {
            return None;
        }
        Some((self.base_start[r] + value - 1) as i64)
    }

    pub fn check_var(&self, node: usize, slot: usize) -> Option<i64> {
        let r = (*self.rank.get(node)?)?;
        if slot == 0 || slot > self.bound {
            return None;
        }
        Some((self.check_start + r * self.bound + slot - 1) as i64)
    }

    pub fn pad_var(&self, slot: usize) -> Option<i64> {
        if slot == 0 || slot > self.bound {
            return None;
        }
        Some((self.pad_start + slot - 1) as i64)
    }

    pub fn tag(&self, var: usize) -> Option<VarTag> {
        if var == 0 || var > self.core_count {
            return None;
        }
        if var >= self.pad_start {
            return Some(VarTag::Pad {
                slot: var - self.pad_start + 1,
            });
        }
        if var >= self.check_start {
            let idx = var - self.check_start;
            return Some(VarTag::Check {
                node: self.internal[idx / self.bound],
                slot: idx % self.bound + 1,
            });
        }
        // Base region: find the last internal node whose range starts at
        // or before `var`.
        let r = self.base_start.partition_point(|&s| s <= var) - 1;
        Some(VarTag::Base {
            node: self.internal[r],
            value: var - self.base_start[r] + 1,
        })
    }
}

/// Builds the clause system for layouts of length at most `bound`.
///
/// Hard clauses, in emission order: (1) a chosen base claims each child
/// slot; (2) every internal node takes exactly one base value (an empty
/// window yields an immediate contradiction); (3) each slot is claimed by
/// at most one node; (4) claimed slots are padded; (5) padding is
/// downward closed. Soft clauses prefer every pad variable false.
pub fn encode_with(
    trie: &Trie,
    bound: usize,
    amo: AmoEncoding,
) -> Result<(WcnfFormula, VarMap)> {
    if bound == 0 {
        return Err(Error::Input("length bound must be positive".into()));
    }
    let vm = VarMap::build(trie, bound);
    let mut hard: Vec<Vec<i64>> = Vec::new();
    let mut next_var = vm.core_count + 1;

    // Group 1: base choice forces the child slots' claims.
    for &u in &vm.internal {
        let labels = trie.label_set(u)?;
        for value in 1..=vm.base_window(u) {
            let b = vm.base_var(u, value).expect("value within window");
            for &a in &labels {
                let c = vm.check_var(u, value + a).expect("slot within bound");
                hard.push(vec![-b, c]);
            }
        }
    }

    // Group 2: exactly one base value per internal node.
    for &u in &vm.internal {
        let w = vm.base_window(u);
        if w == 0 {
            // No admissible base value: the bound cannot host this node's
            // children, so the system must be unsatisfiable.
            let p = vm.pad_var(1).expect("bound is positive");
            hard.push(vec![p]);
            hard.push(vec![-p]);
            continue;
        }
        let lits: Vec<i64> = (1..=w)
            .map(|value| vm.base_var(u, value).expect("value within window"))
            .collect();
        exactly_one(&lits, amo, &mut next_var, &mut hard);
    }

    // Group 3: at most one claim per slot.
    for slot in 1..=bound {
        let lits: Vec<i64> = vm
            .internal
            .iter()
            .map(|&u| vm.check_var(u, slot).expect("slot within bound"))
            .collect();
        at_most_one(&lits, amo, &mut next_var, &mut hard);
    }

    // Group 4: a claimed slot is padded.
    for &u in &vm.internal {
        for slot in 1..=bound {
            let c = vm.check_var(u, slot).expect("slot within bound");
            let p = vm.pad_var(slot).expect("slot within bound");
            hard.push(vec![-c, p]);
        }
    }

    // Group 5: padding is downward closed.
    for slot in 2..=bound {
        let hi = vm.pad_var(slot).expect("slot within bound");
        let lo = vm.pad_var(slot - 1).expect("slot within bound");
        hard.push(vec![-hi, lo]);
    }

    let soft: Vec<i64> = (1..=bound)
        .map(|slot| -vm.pad_var(slot).expect("slot within bound"))
        .collect();
    let formula = WcnfFormula::from_parts(next_var - 1, hard, soft)?;
    Ok((formula, vm))
}

/// [`encode_with`] using the pairwise at-most-one encoding.
pub fn encode(trie: &Trie, bound: usize) -> Result<(WcnfFormula, VarMap)> {
    encode_with(trie, bound, AmoEncoding::Pairwise)
}

/// Rebuilds the layout chosen by a model of the hard clauses. Only Base
/// variables are read for the layout; Pad variables are read for the
/// occupied-slot count (the highest padded slot, 0 if none).
pub fn decode(model: &[bool], vm: &VarMap, trie: &Trie) -> Result<(DoubleArray, usize)> {
    if model.len() < vm.core_count() {
        return Err(Error::Input(format!(
            "model covers {} variables, encoding uses {}",
            model.len(),
            vm.core_count()
        )));
    }
    let truth = |lit: i64| model[lit.unsigned_abs() as usize - 1];
    let mut bases = vec![0usize; trie.node_count() + 1];
    for &u in vm.internal_nodes() {
        let mut chosen = None;
        for value in 1..=vm.base_window(u) {
            let b = vm.base_var(u, value).expect("value within window");
            if truth(b) {
                if chosen.is_some() {
                    return Err(Error::Structural(format!(
                        "model assigns two base values to node {u}"
                    )));
                }
                chosen = Some(value);
            }
        }
        bases[u] = chosen.ok_or_else(|| {
            Error::Structural(format!("model assigns no base value to node {u}"))
        })?;
    }
    let occupied = (1..=vm.bound())
        .rev()
        .find(|&slot| truth(vm.pad_var(slot).expect("slot within bound")))
        .unwrap_or(0);
    let da = DoubleArray::from_bases(trie, &bases)?;
    Ok((da, occupied))
}
