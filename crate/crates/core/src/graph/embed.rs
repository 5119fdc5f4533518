//! Backtracking embeddings over bitset adjacency: copies, containment,
//! automorphism counts and homomorphisms.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::{edge, iter_bits, Edge, Graph};

/// An unlabeled copy of a pattern inside a host, identified by its edge set
/// (and vertex support, which only matters for patterns with isolated vertices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgraphCopy {
    edges: Vec<Edge>,
    vertices: u64,
}

impl SubgraphCopy {
    /// `edges` need not be sorted or normalized.
    pub fn new(edges: impl IntoIterator<Item = Edge>, extra_vertices: u64) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().map(|(u, v)| edge(u, v)).collect();
        edges.sort_unstable();
        edges.dedup();
        let vertices = edges.iter().fold(extra_vertices, |m, &(u, v)| m | 1 << u | 1 << v);
        SubgraphCopy { edges, vertices }
    }

    /// Image of `pattern` under the vertex map `map` (pattern vertex -> host vertex).
    pub fn from_map(pattern: &Graph, map: &[usize]) -> Self {
        let vertices = map.iter().fold(0u64, |m, &v| m | 1 << v);
        SubgraphCopy::new(pattern.edges().into_iter().map(|(u, v)| (map[u], map[v])), vertices)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> u64 {
        self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// True if the two copies have at least one edge in common.
    pub fn shares_edge_with(&self, other: &SubgraphCopy) -> bool {
        if self.vertices & other.vertices == 0 {
            return false;
        }
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// The copy as a graph on the host's first `n` vertices.
    pub fn to_graph(&self, n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for &(u, v) in &self.edges {
            g.add_edge(u, v);
        }
        g
    }
}

/// Search order for a pattern: each entry is a pattern vertex plus the mask
/// of its pattern-neighbours placed earlier.
struct Plan {
    order: Vec<usize>,
    back: Vec<u64>,
}

impl Plan {
    fn new(pattern: &Graph, fixed: &[usize]) -> Plan {
        let n = pattern.vertex_count();
        let mut order: Vec<usize> = fixed.to_vec();
        let mut placed = order.iter().fold(0u64, |m, &v| m | 1 << v);
        while order.len() < n {
            // most already-placed neighbours first, then highest degree
            let next = (0..n)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| {
                    let back = (pattern.neighbors(v) & placed).count_ones();
                    (back, pattern.degree(v), core::cmp::Reverse(v))
                })
                .unwrap();
            order.push(next);
            placed |= 1 << next;
        }
        let mut back = Vec::with_capacity(n);
        let mut seen = 0u64;
        for &v in &order {
            back.push(pattern.neighbors(v) & seen);
            seen |= 1 << v;
        }
        Plan { order, back }
    }
}

struct Search<'a, F> {
    pattern: &'a Graph,
    host: &'a Graph,
    plan: Plan,
    map: Vec<usize>,
    visit: F,
}

impl<F: FnMut(&[usize]) -> ControlFlow<()>> Search<'_, F> {
    fn run(&mut self, k: usize, used: u64) -> ControlFlow<()> {
        if k == self.plan.order.len() {
            return (self.visit)(&self.map);
        }
        let pv = self.plan.order[k];
        let mut cand = self.host.vertex_mask() & !used;
        for w in iter_bits(self.plan.back[k]) {
            cand &= self.host.neighbors(self.map[w]);
        }
        let need = self.pattern.degree(pv);
        for hv in iter_bits(cand) {
            if self.host.degree(hv) < need {
                continue;
            }
            self.map[pv] = hv;
            self.run(k + 1, used | 1 << hv)?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` with every injective edge-preserving map `pattern -> host`
/// (indexed by pattern vertex), optionally with some vertices pre-assigned.
/// Stops early when `visit` breaks.
pub fn embeddings<F>(pattern: &Graph, host: &Graph, fixed: &[(usize, usize)], visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let np = pattern.vertex_count();
    if np > host.vertex_count() {
        return ControlFlow::Continue(());
    }
    let fixed_pattern: Vec<usize> = fixed.iter().map(|&(p, _)| p).collect();
    let mut search = Search {
        pattern,
        host,
        plan: Plan::new(pattern, &fixed_pattern),
        map: alloc::vec![usize::MAX; np],
        visit,
    };
    let mut used = 0u64;
    for (k, &(p, h)) in fixed.iter().enumerate() {
        if used >> h & 1 == 1 {
            return ControlFlow::Continue(());
        }
        if iter_bits(search.plan.back[k]).any(|w| !host.has_edge(search.map[w], h)) {
            return ControlFlow::Continue(());
        }
        search.map[p] = h;
        used |= 1 << h;
    }
    search.run(fixed.len(), used)
}

/// Every subgraph of `g` isomorphic to `t`, each once, in sorted order.
pub fn enumerate_copies(t: &Graph, g: &Graph) -> Vec<SubgraphCopy> {
    if t.vertex_count() == 0 {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    let _ = embeddings(t, g, &[], |map| {
        seen.insert(SubgraphCopy::from_map(t, map));
        ControlFlow::Continue(())
    });
    seen.into_iter().collect()
}

/// `N_t(g)`, the number of copies of `t` in `g`.
pub fn count_copies(t: &Graph, g: &Graph) -> usize {
    if t.vertex_count() == 0 {
        return 0;
    }
    let mut embeddings_found: u64 = 0;
    let _ = embeddings(t, g, &[], |_| {
        embeddings_found += 1;
        ControlFlow::Continue(())
    });
    (embeddings_found / automorphism_count(t)) as usize
}

/// `N_t(K_n) = n (n-1) ... (n - v_t + 1) / |Aut(t)|`.
pub fn count_copies_complete(t: &Graph, n: usize) -> u128 {
    let v = t.vertex_count();
    if v == 0 || n < v {
        return 0;
    }
    let falling = (n - v + 1..=n).fold(1u128, |acc, k| acc.checked_mul(k as u128).expect("copy count overflows u128"));
    falling / automorphism_count(t) as u128
}

/// Order of the automorphism group of `t`.
pub fn automorphism_count(t: &Graph) -> u64 {
    let mut count = 0;
    let _ = embeddings(t, t, &[], |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// True if `g` has a (not necessarily induced) subgraph isomorphic to `h`.
pub fn contains_subgraph(h: &Graph, g: &Graph) -> bool {
    if h.vertex_count() == 0 {
        return true;
    }
    if h.edge_count() > g.edge_count() {
        return false;
    }
    embeddings(h, g, &[], |_| ControlFlow::Break(())).is_break()
}

/// True if some edge-preserving map `h -> t` exists, i.e. `h` lies in a
/// blow-up of `t`.
pub fn homomorphism_exists(h: &Graph, t: &Graph) -> bool {
    let n = h.vertex_count();
    if n == 0 {
        return true;
    }
    if t.vertex_count() == 0 {
        return false;
    }
    let plan = Plan::new(h, &[]);
    let mut map = alloc::vec![usize::MAX; n];
    fn go(k: usize, t: &Graph, plan: &Plan, map: &mut [usize]) -> bool {
        if k == plan.order.len() {
            return true;
        }
        let mut cand = t.vertex_mask();
        for w in iter_bits(plan.back[k]) {
            cand &= t.neighbors(map[w]);
        }
        let hv = plan.order[k];
        for tv in iter_bits(cand) {
            map[hv] = tv;
            if go(k + 1, t, plan, map) {
                return true;
            }
        }
        false
    }
    go(0, t, &plan, &mut map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n)
    }

    #[test]
    fn copy_counts_in_small_hosts() {
        assert_eq!(enumerate_copies(&k(3), &k(4)).len(), 4);
        assert_eq!(enumerate_copies(&Graph::cycle(4), &k(4)).len(), 3);
        let g = Graph::petersen();
        assert_eq!(enumerate_copies(&k(2), &g).len(), g.edge_count());
        assert_eq!(count_copies(&Graph::cycle(5), &g), 12);
    }

    #[test]
    fn complete_host_counts() {
        assert_eq!(count_copies_complete(&k(3), 5), 10);
        assert_eq!(count_copies_complete(&Graph::cycle(4), 5), 15);
        assert_eq!(count_copies_complete(&k(2), 7), 21);
        assert_eq!(count_copies_complete(&k(4), 3), 0);
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(automorphism_count(&k(3)), 6);
        assert_eq!(automorphism_count(&Graph::cycle(4)), 8);
        assert_eq!(automorphism_count(&Graph::path(3)), 2);
        assert_eq!(automorphism_count(&Graph::petersen()), 120);
        assert_eq!(automorphism_count(&Graph::empty(3)), 6);
    }

    #[test]
    fn homomorphisms() {
        assert!(homomorphism_exists(&Graph::cycle(4), &k(3)));
        assert!(!homomorphism_exists(&k(4), &k(3)));
        assert!(!homomorphism_exists(&k(3), &Graph::cycle(5)));
        assert!(homomorphism_exists(&Graph::cycle(5), &k(3)));
        assert!(!homomorphism_exists(&Graph::cycle(5), &k(2)));
        assert!(homomorphism_exists(&Graph::empty(4), &Graph::empty(1)));
    }

    #[test]
    fn containment() {
        assert!(!contains_subgraph(&k(3), &Graph::cycle(5)));
        assert!(contains_subgraph(&Graph::path(3), &k(3)));
        let mut k4e = k(4);
        k4e.remove_edge(0, 1);
        assert!(!contains_subgraph(&k(4), &k4e));
        assert!(contains_subgraph(&k(3), &k4e));
    }

    #[test]
    fn anchored_embeddings_respect_fixed_vertices() {
        let mut n = 0;
        let _ = embeddings(&k(3), &k(5), &[(0, 1), (1, 3)], |m| {
            assert_eq!((m[0], m[1]), (1, 3));
            n += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(n, 3);
        // non-adjacent anchors in the host give nothing
        let _ = embeddings(&k(3), &Graph::path(3), &[(0, 0), (1, 2)], |_| panic!("no embedding"));
    }

    #[test]
    fn shared_edges() {
        let a = SubgraphCopy::new([(0, 1), (1, 2), (0, 2)], 0);
        let b = SubgraphCopy::new([(2, 1), (1, 3), (2, 3)], 0);
        let c = SubgraphCopy::new([(3, 4), (4, 5), (3, 5)], 0);
        assert!(a.shares_edge_with(&b));
        assert!(!a.shares_edge_with(&c));
        assert!(!b.shares_edge_with(&c));
    }
}
