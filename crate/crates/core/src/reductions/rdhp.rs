//! Restricted directed Hamiltonian-path (RDHP) instances.
//!
//! An instance is a simple digraph with designated endpoints `s` and `t`:
//! `s` has no incoming edges, `t` has no outgoing edges, and every other
//! vertex — as well as `s` — keeps out-degree at least two (at least one in
//! relaxed mode, which exists to admit small exploratory instances). The
//! question is whether an `s`→`t` path visits every vertex exactly once.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest vertex count accepted by the exhaustive path search.
pub const HAM_SEARCH_CAP: usize = 24;

/// A validated RDHP instance. Vertices are `1..=n`; edges are stored sorted
/// and deduplicated, and per-vertex successor lists are kept in ascending
/// order so that derived constructions are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdhpInstance {
    n: usize,
    s: usize,
    t: usize,
    edges: Vec<(usize, usize)>,
    children: Vec<Vec<usize>>,
}

impl RdhpInstance {
    /// Validates and builds an instance. With `relax` set, out-degree one is
    /// tolerated (out-degree zero on a non-`t` vertex never is, since every
    /// such vertex must be able to continue a path).
    pub fn new(
        n: usize,
        s: usize,
        t: usize,
        edges: Vec<(usize, usize)>,
        relax: bool,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input(format!(
                "instance needs at least 2 vertices, got {n}"
            )));
        }
        for (label, v) in [("s", s), ("t", t)] {
            if v < 1 || v > n {
                return Err(Error::Input(format!(
                    "{label} = {v} out of range 1..={n}"
                )));
            }
        }
        if s == t {
            return Err(Error::Input("s and t must differ".into()));
        }
        let mut sorted = edges;
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Input(format!(
                    "duplicate edge {} -> {}",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut children = vec![Vec::new(); n + 1];
        for &(u, v) in &sorted {
            if u < 1 || u > n || v < 1 || v > n {
                return Err(Error::Input(format!(
                    "edge {u} -> {v} out of range 1..={n}"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop on vertex {u}")));
            }
            if v == s {
                return Err(Error::Input(format!(
                    "edge {u} -> {v} enters the source vertex"
                )));
            }
            if u == t {
                return Err(Error::Input(format!(
                    "edge {u} -> {v} leaves the sink vertex"
                )));
            }
            children[u].push(v);
        }
        for (u, kids) in children.iter().enumerate().skip(1) {
            if u == t {
                continue;
            }
            let d = kids.len();
            if d == 0 {
                return Err(Error::Input(format!(
                    "vertex {u} has no outgoing edge"
                )));
            }
            if d < 2 && !relax {
                return Err(Error::Input(format!(
                    "vertex {u} has out-degree {d} < 2 (relax to permit)"
                )));
            }
        }
        Ok(Self {
            n,
            s,
            t,
            edges: sorted,
            children,
        })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// The start vertex (no incoming edges).
    pub fn s(&self) -> usize {
        self.s
    }

    /// The goal vertex (no outgoing edges).
    pub fn t(&self) -> usize {
        self.t
    }

    /// All edges, sorted ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Successors of `u` in ascending order.
    pub fn children(&self, u: usize) -> &[usize] {
        &self.children[u]
    }

    /// Out-degree of `u`.
    pub fn out_degree(&self, u: usize) -> usize {
        self.children[u].len()
    }

    /// Whether `u -> v` is an edge.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.children[u].binary_search(&v).is_ok()
    }

    /// The `j`-th successor of `u` under the cyclic indexing used by the
    /// string gadgets: for out-degree `d`, index `j` (1-based, unbounded)
    /// selects the `((j mod d) + 1)`-th child in ascending order, so the
    /// sequence starts at the second child and wraps with period `d`.
    pub fn cyclic_child(&self, u: usize, j: usize) -> usize {
        let d = self.children[u].len();
        assert!(d > 0, "cyclic_child on a vertex without successors");
        self.children[u][j % d]
    }

    /// Whether `path` is a Hamiltonian `s`→`t` path of this instance.
    pub fn is_ham_path(&self, path: &[usize]) -> bool {
        if path.len() != self.n || path.first() != Some(&self.s) || path.last() != Some(&self.t) {
            return false;
        }
        let mut seen = vec![false; self.n + 1];
        for &v in path {
            if v < 1 || v > self.n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        path.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// Exhaustively decides whether any Hamiltonian `s`→`t` path exists.
    /// Memoized bitmask search; refuses instances beyond
    /// [`HAM_SEARCH_CAP`] vertices.
    pub fn has_ham_path(&self) -> Result<bool> {
        if self.n > HAM_SEARCH_CAP {
            return Err(Error::Capacity(format!(
                "path search handles at most {HAM_SEARCH_CAP} vertices, got {}",
                self.n
            )));
        }
        let full: u32 = if self.n == 32 { u32::MAX } else { (1 << self.n) - 1 };
        let mut dead = std::collections::HashSet::new();
        Ok(self.search(self.s, 1 << (self.s - 1), full, &mut dead))
    }

    fn search(
        &self,
        u: usize,
        mask: u32,
        full: u32,
        dead: &mut std::collections::HashSet<(usize, u32)>,
    ) -> bool {
        if u == self.t {
            return mask == full;
        }
        if dead.contains(&(u, mask)) {
            return false;
        }
        for &v in &self.children[u] {
            let bit = 1 << (v - 1);
            if mask & bit == 0 && self.search(v, mask | bit, full, dead) {
                return true;
            }
        }
        dead.insert((u, mask));
        false
    }
}

/// Samples an instance with a planted Hamiltonian path and `extra` further
/// random edges, returning both. The path runs from vertex 1 to vertex `n`
/// through a seeded shuffle of the interior; afterwards every non-sink
/// vertex is topped up to out-degree two. Deterministic per `(n, extra,
/// seed)`.
pub fn sample_rdhp_with(n: usize, extra: usize, seed: u64) -> Result<(RdhpInstance, Vec<usize>)> {
    if n < 4 {
        return Err(Error::Input(format!(
            "out-degree constraints need at least 4 vertices, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s, t) = (1, n);
    let mut interior: Vec<usize> = (2..n).collect();
    interior.shuffle(&mut rng);
    let mut path = Vec::with_capacity(n);
    path.push(s);
    path.extend(interior);
    path.push(t);

    let mut present = vec![vec![false; n + 1]; n + 1];
    let mut edges = Vec::new();
    let add = |edges: &mut Vec<(usize, usize)>, present: &mut Vec<Vec<bool>>, u: usize, v: usize| {
        if !present[u][v] {
            present[u][v] = true;
            edges.push((u, v));
        }
    };
    for w in path.windows(2) {
        add(&mut edges, &mut present, w[0], w[1]);
    }
    for u in 1..=n {
        if u == t {
            continue;
        }
        while edges.iter().filter(|&&(a, _)| a == u).count() < 2 {
            let candidates: Vec<usize> = (1..=n)
                .filter(|&v| v != u && v != s && !present[u][v])
                .collect();
            let v = candidates[rng.gen_range(0..candidates.len())];
            add(&mut edges, &mut present, u, v);
        }
    }
    let mut open: Vec<(usize, usize)> = (1..=n)
        .filter(|&u| u != t)
        .flat_map(|u| (1..=n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && v != s && !present[u][v])
        .collect();
    open.shuffle(&mut rng);
    for (u, v) in open.into_iter().take(extra) {
        add(&mut edges, &mut present, u, v);
    }
    let inst = RdhpInstance::new(n, s, t, edges, false)?;
    debug_assert!(inst.is_ham_path(&path));
    Ok((inst, path))
}

/// [`sample_rdhp_with`] with a modest default number of extra edges.
pub fn sample_rdhp(n: usize, seed: u64) -> Result<(RdhpInstance, Vec<usize>)> {
    sample_rdhp_with(n, n / 2, seed)
}

/// Four vertices, out-degree two everywhere except the sink: the smallest
/// instance satisfying the strict degree constraints. Shared test fixture.
#[cfg(test)]
pub(crate) fn small_fixture() -> RdhpInstance {
    RdhpInstance::new(
        4,
        1,
        4,
        vec![(1, 2), (1, 3), (2, 3), (2, 4), (3, 2), (3, 4)],
        false,
    )
    .unwrap()
}
