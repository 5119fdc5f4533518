//! Labeled simple graphs on a small vertex universe.
//!
//! Adjacency is stored as one `u64` row per vertex, so every graph has at
//! most [`MAX_VERTICES`] vertices. Everything else in the crate (copy
//! enumeration, coverings, solvers) builds on these bitset rows.

mod canon;
mod color;
mod embed;
mod format;

use alloc::vec::Vec;
use core::fmt;

pub use canon::{canonical_form, canonical_form_exhaustive, canonical_relabeling, CanonicalLabel, ColoredGraph};
pub use color::{chromatic_number, clique_number};
pub use embed::{
    automorphism_count, contains_subgraph, count_copies, count_copies_complete, embeddings,
    enumerate_copies, homomorphism_exists, SubgraphCopy,
};
pub use format::ParseGraphError;

/// Hard cap on the vertex universe.
pub const MAX_VERTICES: usize = 64;

/// An unordered vertex pair, always stored with `.0 < .1`.
pub type Edge = (usize, usize);

/// Normalizes a pair so the smaller endpoint comes first.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, more than the supported {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("edge {0}-{1} has an endpoint outside the vertex range")]
    OutOfRange(usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    ///
    /// Panics if `n > MAX_VERTICES`.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph has {n} vertices, cap is {MAX_VERTICES}");
        Graph { n, adj: alloc::vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.adj[u] = mask_below(n) & !(1u64 << u);
        }
        g
    }

    /// Cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    /// Path on `n` vertices (so `n - 1` edges).
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::complete_multipartite(&[a, b])
    }

    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n = parts.iter().sum();
        let mut g = Graph::empty(n);
        let mut part_of = Vec::with_capacity(n);
        for (i, &s) in parts.iter().enumerate() {
            part_of.extend(core::iter::repeat_n(i, s));
        }
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> u64 {
        self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones() as usize
    }

    /// Mask with one bit per vertex.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        mask_below(self.n)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut higher = self.adj[u] & !mask_below(u + 1);
            while higher != 0 {
                let v = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                out.push((u, v));
            }
        }
        out
    }

    /// Vertices with no neighbours.
    pub fn isolated_vertices(&self) -> u64 {
        (0..self.n).filter(|&u| self.adj[u] == 0).fold(0, |m, u| m | 1 << u)
    }

    /// Subgraph induced by `keep`, relabeled to `0..|keep|` in increasing order.
    pub fn induced(&self, keep: u64) -> Graph {
        let verts: Vec<usize> = iter_bits(keep & self.vertex_mask()).collect();
        let mut g = Graph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// The same graph with isolated vertices dropped.
    pub fn without_isolated(&self) -> Graph {
        self.induced(self.vertex_mask() & !self.isolated_vertices())
    }

    /// Graph on `n` vertices spanned by the given edge list, relabeled
    /// compactly: the result keeps only endpoints, in increasing order.
    pub fn spanned_by(edges: &[Edge]) -> Graph {
        let support = edges.iter().fold(0u64, |m, &(u, v)| m | 1 << u | 1 << v);
        let verts: Vec<usize> = iter_bits(support).collect();
        let mut g = Graph::empty(verts.len());
        for &(u, v) in edges {
            let a = verts.binary_search(&u).unwrap();
            let b = verts.binary_search(&v).unwrap();
            g.add_edge(a, b);
        }
        g
    }

    /// Applies `perm` (old vertex -> new vertex).
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Disjoint union; `other`'s vertices are shifted past ours.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({})", self.to_edge_list())
    }
}

#[inline]
pub(crate) fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over set bit positions, lowest first.
pub(crate) fn iter_bits(mut m: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}
