//! Tries over small integer alphabets.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

/// A trie over the alphabet `{1, 2, ..., sigma}`.
///
/// Node ids are 1-based and assigned in breadth-first discovery order: the
/// root is node 1, its children (in ascending label order) come next, and so
/// on. Index 0 of the internal vectors is an unused placeholder so ids can
/// be used directly as indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trie {
    sigma: usize,
    children: Vec<BTreeMap<usize, usize>>,
    terminal: Vec<bool>,
}

impl Trie {
    /// Builds the trie of a set of strings over `[1..sigma]`. Duplicate
    /// strings are deduplicated silently; the empty string marks the root
    /// terminal.
    pub fn from_strings(sigma: usize, strings: &[Vec<usize>]) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::Input("alphabet size must be at least 1".into()));
        }
        let mut children: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(), BTreeMap::new()];
        let mut terminal = vec![false, false];
        for (si, s) in strings.iter().enumerate() {
            let mut node = 1;
            for (pos, &c) in s.iter().enumerate() {
                if c < 1 || c > sigma {
                    return Err(Error::Input(format!(
                        "string {} position {}: symbol {} outside [1..{}]",
                        si + 1,
                        pos + 1,
                        c,
                        sigma
                    )));
                }
                node = match children[node].get(&c) {
                    Some(&next) => next,
                    None => {
                        let id = children.len();
                        children.push(BTreeMap::new());
                        terminal.push(false);
                        children[node].insert(c, id);
                        id
                    }
                };
            }
            terminal[node] = true;
        }
        Ok(Self::renumber_bfs(sigma, &children, &terminal))
    }

    /// Rebuilds the node numbering in breadth-first order (siblings in
    /// ascending label order), making ids independent of insertion order.
    fn renumber_bfs(
        sigma: usize,
        children: &[BTreeMap<usize, usize>],
        terminal: &[bool],
    ) -> Self {
        let mut new_id = vec![0usize; children.len()];
        let mut queue = VecDeque::new();
        new_id[1] = 1;
        queue.push_back(1);
        let mut next = 2;
        let mut visit_order = vec![1];
        while let Some(u) = queue.pop_front() {
            for &v in children[u].values() {
                new_id[v] = next;
                next += 1;
                queue.push_back(v);
                visit_order.push(v);
            }
        }
        let mut out_children = vec![BTreeMap::new(); children.len()];
        let mut out_terminal = vec![false; children.len()];
        for &u in &visit_order {
            out_terminal[new_id[u]] = terminal[u];
            for (&c, &v) in &children[u] {
                out_children[new_id[u]].insert(c, new_id[v]);
            }
        }
        Trie {
            sigma,
            children: out_children,
            terminal: out_terminal,
        }
    }

    /// Alphabet size.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Number of nodes M (the root counts).
    pub fn node_count(&self) -> usize {
        self.children.len() - 1
    }

    /// Id of the root node.
    pub fn root(&self) -> usize {
        1
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.node_count() {
            return Err(Error::Input(format!(
                "node {} outside [1..{}]",
                node,
                self.node_count()
            )));
        }
        Ok(())
    }

    /// Outgoing edges of `node` as a label → child map.
    pub fn children(&self, node: usize) -> Result<BTreeMap<usize, usize>> {
        self.check_node(node)?;
        Ok(self.children[node].clone())
    }

    /// Sorted outgoing edge labels of `node` (the set `L_i`).
    pub fn label_set(&self, node: usize) -> Result<Vec<usize>> {
        self.check_node(node)?;
        Ok(self.children[node].keys().copied().collect())
    }

    /// Child of `node` along `symbol`, if present. Out-of-range nodes have
    /// no children.
    pub fn child(&self, node: usize, symbol: usize) -> Option<usize> {
        self.children.get(node)?.get(&symbol).copied()
    }

    /// `(label, child)` pairs of `node` in ascending label order.
    pub(crate) fn edges(&self, node: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children[node].iter().map(|(&c, &v)| (c, v))
    }

    /// Largest outgoing label of `node`, if it has children.
    pub fn max_label(&self, node: usize) -> Option<usize> {
        self.children[node].keys().next_back().copied()
    }

    /// Whether `node` ends a stored string.
    pub fn is_terminal(&self, node: usize) -> bool {
        self.terminal[node]
    }

    /// Whether `node` has at least one child.
    pub fn is_internal(&self, node: usize) -> bool {
        !self.children[node].is_empty()
    }

    /// Ids of all internal nodes, ascending.
    pub fn internal_nodes(&self) -> Vec<usize> {
        (1..=self.node_count())
            .filter(|&u| self.is_internal(u))
            .collect()
    }

    /// Follows `s` from the root; returns the reached node or `None` if a
    /// transition is missing.
    pub fn traverse(&self, s: &[usize]) -> Option<usize> {
        let mut node = 1;
        for &c in s {
            node = self.child(node, c)?;
        }
        Some(node)
    }

    /// Whether `s` is a member of the stored string set.
    pub fn contains(&self, s: &[usize]) -> bool {
        self.traverse(s).is_some_and(|u| self.terminal[u])
    }
}

/// A tree shape used by the exhaustive enumerator: labeled children in
/// ascending label order, each with its own shape.
#[derive(Clone)]
struct Shape(Vec<(usize, Shape)>);

impl Shape {
    fn node_count(&self) -> usize {
        1 + self.0.iter().map(|(_, s)| s.node_count()).sum::<usize>()
    }
}

/// All `k`-subsets of `{1, ..., sigma}` in ascending lexicographic order.
fn label_subsets(sigma: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(sigma: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..=sigma {
            cur.push(c);
            rec(sigma, k, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(sigma, k, 1, &mut Vec::new(), &mut out);
    out
}

/// All compositions of `total` into `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 1..=(total - (parts - 1)) {
            cur.push(first);
            rec(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
    } else if total >= parts {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// All shapes with exactly `m` nodes for each `m ≤ max`, bottom-up.
fn shapes_up_to(sigma: usize, max: usize) -> Vec<Vec<Shape>> {
    let mut table: Vec<Vec<Shape>> = vec![Vec::new(); max + 1];
    if max == 0 {
        return table;
    }
    table[1] = vec![Shape(Vec::new())];
    for m in 2..=max {
        let mut shapes = Vec::new();
        for k in 1..=sigma.min(m - 1) {
            for labels in label_subsets(sigma, k) {
                for sizes in compositions(m - 1, k) {
                    // Cartesian product of child shapes of the chosen sizes.
                    let mut partial: Vec<Vec<(usize, Shape)>> = vec![Vec::new()];
                    for (i, &sz) in sizes.iter().enumerate() {
                        let mut next = Vec::new();
                        for p in &partial {
                            for child in &table[sz] {
                                let mut q = p.clone();
                                q.push((labels[i], child.clone()));
                                next.push(q);
                            }
                        }
                        partial = next;
                    }
                    shapes.extend(partial.into_iter().map(Shape));
                }
            }
        }
        table[m] = shapes;
    }
    table
}

fn trie_from_shape(sigma: usize, shape: &Shape) -> Trie {
    let total = shape.node_count();
    let mut children = vec![BTreeMap::new(); total + 1];
    let mut terminal = vec![false; total + 1];
    let mut queue = VecDeque::new();
    queue.push_back((1usize, shape));
    let mut next = 2;
    while let Some((id, sh)) = queue.pop_front() {
        if sh.0.is_empty() {
            terminal[id] = true;
        }
        for (label, child) in &sh.0 {
            children[id].insert(*label, next);
            queue.push_back((next, child));
            next += 1;
        }
    }
    Trie {
        sigma,
        children,
        terminal,
    }
}

/// Enumerates every trie with exactly `node_count` nodes over an alphabet of
/// size `sigma` (leaves terminal, internal nodes not — terminal flags do not
/// affect layout). Capped at `sigma <= 3` and `node_count <= 8` to keep the
/// output size manageable.
pub fn enumerate_tries(sigma: usize, node_count: usize) -> Result<Vec<Trie>> {
    if sigma == 0 || node_count == 0 {
        return Err(Error::Input(
            "alphabet size and node count must be at least 1".into(),
        ));
    }
    if sigma > 3 || node_count > 8 {
        return Err(Error::Capacity(format!(
            "enumeration supports sigma <= 3 and node_count <= 8, got sigma={sigma} nodes={node_count}"
        )));
    }
    let table = shapes_up_to(sigma, node_count);
    Ok(table[node_count]
        .iter()
        .map(|s| trie_from_shape(sigma, s))
        .collect())
}
