//! Canonical labeling by colour refinement and individualization.
//!
//! The search tree is the usual one: refine the ordered partition to an
//! equitable one, individualize each vertex of the first smallest
//! non-singleton cell in turn, recurse. Each leaf yields a certificate (the
//! colours and adjacency matrix read in leaf order); the canonical label is
//! the smallest certificate. Siblings are skipped when a known automorphism
//! fixing the current prefix maps them onto an already explored sibling;
//! automorphisms come from twin transpositions and from leaves that tie
//! with the current best.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Graph;

/// Bytes identifying an isomorphism class of (vertex-coloured) graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLabel(Vec<u8>);

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Vertex-coloured simple graph without the 64-vertex cap, used to
/// canonicalize derived structures (coverings, solver states).
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    colors: Vec<u32>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<u32>) -> Self {
        let n = colors.len();
        let words = n.div_ceil(64).max(1);
        ColoredGraph { n, words, rows: vec![0; n * words], colors }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn certificate(&self, lab: &[usize]) -> Vec<u8> {
        let n = self.n;
        let mut out = Vec::with_capacity(2 + 4 * n + (n * n / 16) + 1);
        out.extend_from_slice(&(n as u32).to_be_bytes());
        for &v in lab {
            out.extend_from_slice(&self.colors[v].to_be_bytes());
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for i in 0..n {
            for j in i + 1..n {
                acc = acc << 1 | self.has_edge(lab[i], lab[j]) as u8;
                filled += 1;
                if filled == 8 {
                    out.push(acc);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(acc << (8 - filled));
        }
        out
    }

    fn initial_cells(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (self.colors[v], v));
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for v in order {
            match cells.last_mut() {
                Some(c) if self.colors[c[0]] == self.colors[v] => c.push(v),
                _ => cells.push(vec![v]),
            }
        }
        cells
    }

    /// Splits cells by neighbour counts into every cell until stable.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        loop {
            let k = cells.len();
            if k == self.n {
                return cells;
            }
            let masks: Vec<Vec<u64>> = cells
                .iter()
                .map(|c| {
                    let mut m = vec![0u64; self.words];
                    for &v in c {
                        m[v / 64] |= 1 << (v % 64);
                    }
                    m
                })
                .collect();
            let mut out = Vec::with_capacity(k + 4);
            for cell in &cells {
                if cell.len() == 1 {
                    out.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let row = self.row(v);
                        let sig = masks
                            .iter()
                            .map(|m| m.iter().zip(row).map(|(a, b)| (a & b).count_ones()).sum())
                            .collect();
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        out.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
            }
            if out.len() == k {
                return out;
            }
            cells = out;
        }
    }

    /// Transpositions of twin vertices (same colour, same neighbourhood
    /// apart from each other); each is an automorphism.
    fn twin_generators(&self) -> Vec<Vec<usize>> {
        let mut gens = Vec::new();
        let mut rep: Vec<Option<usize>> = vec![None; self.n];
        for u in 0..self.n {
            if rep[u].is_some() {
                continue;
            }
            let mut prev = u;
            for v in u + 1..self.n {
                if rep[v].is_some() || self.colors[u] != self.colors[v] || !self.twins(u, v) {
                    continue;
                }
                rep[v] = Some(u);
                let mut perm: Vec<usize> = (0..self.n).collect();
                perm.swap(prev, v);
                gens.push(perm);
                prev = v;
            }
        }
        gens
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.row(u), self.row(v));
        (0..self.words).all(|w| {
            let mut a = ru[w];
            let mut b = rv[w];
            if v / 64 == w {
                a &= !(1 << (v % 64));
            }
            if u / 64 == w {
                b &= !(1 << (u % 64));
            }
            a == b
        })
    }

    pub fn canonical_label(&self) -> CanonicalLabel {
        CanonicalLabel(self.best_leaf().map(|(c, _)| c).unwrap_or_default())
    }

    /// The vertex order read off by [`ColoredGraph::canonical_label`]:
    /// position `i` holds the vertex placed `i`-th.
    pub fn canonical_order(&self) -> Vec<usize> {
        self.best_leaf().map(|(_, lab)| lab).unwrap_or_default()
    }

    fn best_leaf(&self) -> Option<(Vec<u8>, Vec<usize>)> {
        let mut search = CanonSearch { g: self, best: None, gens: self.twin_generators() };
        let mut prefix = Vec::new();
        search.descend(self.initial_cells(), &mut prefix);
        search.best
    }

    /// Minimum certificate over every vertex ordering. Exponential; only
    /// meant as an oracle for small graphs.
    pub fn canonical_label_exhaustive(&self) -> CanonicalLabel {
        assert!(self.n <= 10, "exhaustive canonical form is limited to 10 vertices");
        let mut lab: Vec<usize> = (0..self.n).collect();
        let mut best = self.certificate(&lab);
        // Heap's algorithm
        let mut c = vec![0usize; self.n];
        let mut i = 0;
        while i < self.n {
            if c[i] < i {
                if i % 2 == 0 {
                    lab.swap(0, i);
                } else {
                    lab.swap(c[i], i);
                }
                let cert = self.certificate(&lab);
                if cert < best {
                    best = cert;
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        CanonicalLabel(best)
    }
}

impl From<&Graph> for ColoredGraph {
    fn from(g: &Graph) -> Self {
        let mut cg = ColoredGraph::new(vec![0; g.vertex_count()]);
        for (u, v) in g.edges() {
            cg.add_edge(u, v);
        }
        cg
    }
}

struct CanonSearch<'a> {
    g: &'a ColoredGraph,
    best: Option<(Vec<u8>, Vec<usize>)>,
    gens: Vec<Vec<usize>>,
}

impl CanonSearch<'_> {
    fn descend(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let cells = self.g.refine(cells);
        let Some(target) = (0..cells.len())
            .filter(|&i| cells[i].len() > 1)
            .min_by_key(|&i| (cells[i].len(), i))
        else {
            self.leaf(cells.iter().map(|c| c[0]).collect());
            return;
        };
        let cell = cells[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if self.equivalent_to_any(v, &tried, prefix) {
                continue;
            }
            let mut next = cells.clone();
            next[target] = vec![v];
            next.insert(target + 1, cell.iter().copied().filter(|&u| u != v).collect());
            prefix.push(v);
            self.descend(next, prefix);
            prefix.pop();
            tried.push(v);
        }
    }

    fn leaf(&mut self, lab: Vec<usize>) {
        let cert = self.g.certificate(&lab);
        match &self.best {
            None => self.best = Some((cert, lab)),
            Some((best, best_lab)) => match cert.cmp(best) {
                Ordering::Less => self.best = Some((cert, lab)),
                Ordering::Equal => {
                    let mut perm = vec![0; lab.len()];
                    for (i, &v) in best_lab.iter().enumerate() {
                        perm[v] = lab[i];
                    }
                    if perm.iter().enumerate().any(|(i, &p)| i != p) {
                        self.gens.push(perm);
                    }
                }
                Ordering::Greater => {}
            },
        }
    }

    /// Whether `v` shares an orbit with a tried sibling under the known
    /// automorphisms that fix `prefix` pointwise.
    fn equivalent_to_any(&self, v: usize, tried: &[usize], prefix: &[usize]) -> bool {
        if tried.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.g.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in self.gens.iter().filter(|g| prefix.iter().all(|&w| g[w] == w)) {
            for (x, &y) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&u| find(&mut parent, u) == root)
    }
}

/// Canonical label of an uncoloured graph.
pub fn canonical_form(g: &Graph) -> CanonicalLabel {
    ColoredGraph::from(g).canonical_label()
}

/// A relabeling (old vertex -> new vertex) under which isomorphic graphs
/// become identical.
pub fn canonical_relabeling(g: &Graph) -> Vec<usize> {
    let order = ColoredGraph::from(g).canonical_order();
    let mut perm = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        perm[v] = i;
    }
    perm
}

/// Brute-force canonical label (minimum over all vertex orderings); up to
/// 10 vertices.
pub fn canonical_form_exhaustive(g: &Graph) -> CanonicalLabel {
    ColoredGraph::from(g).canonical_label_exhaustive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_relabeling_identifies_isomorphic_graphs() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (0, 5)]).unwrap();
        let perm = [3, 5, 0, 1, 4, 2];
        let h = g.permuted(&perm);
        assert_eq!(g.permuted(&canonical_relabeling(&g)), h.permuted(&canonical_relabeling(&h)));
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn triangle_label_is_relabeling_invariant() {
        let k3 = Graph::complete(3);
        let base = canonical_form(&k3);
        for p in all_perms(3) {
            assert_eq!(canonical_form(&k3.permuted(&p)), base);
        }
    }

    #[test]
    fn path_equals_star_on_three_vertices() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let star = Graph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&path), canonical_form(&star));
    }

    #[test]
    fn c4_differs_from_triangle_plus_isolated() {
        let tri = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_ne!(canonical_form(&Graph::cycle(4)), canonical_form(&tri));
    }

    #[test]
    fn highly_symmetric_graphs_finish() {
        // twin pruning keeps cliques and empty graphs linear
        let big = Graph::complete(40);
        assert_eq!(canonical_form(&big), canonical_form(&big.permuted(&(0..40).rev().collect::<Vec<_>>())));
        let _ = canonical_form(&Graph::empty(40));
        let p = Graph::petersen();
        let perm: Vec<usize> = (0..10).map(|i| (i * 3 + 1) % 10).collect();
        assert_eq!(canonical_form(&p), canonical_form(&p.permuted(&perm)));
    }

    #[test]
    fn non_isomorphic_cospectral_pair_separated() {
        // C6 vs two disjoint triangles: same degree sequence
        let two_tri = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert_ne!(canonical_form(&Graph::cycle(6)), canonical_form(&two_tri));
    }

    #[test]
    fn colors_are_respected() {
        let mut a = ColoredGraph::new(vec![0, 0, 1]);
        a.add_edge(0, 1);
        let mut b = ColoredGraph::new(vec![0, 1, 0]);
        b.add_edge(0, 1);
        let mut c = ColoredGraph::new(vec![1, 0, 0]);
        c.add_edge(1, 2);
        assert_ne!(a.canonical_label(), b.canonical_label());
        assert_eq!(a.canonical_label(), c.canonical_label());
    }
}
