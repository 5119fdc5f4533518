//! Maximum number of T-copies in an H-free subgraph of a host graph.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{ExtremalError, ExtremalResult, Guards, Witness};
use crate::graph::{
    chromatic_number, contains_subgraph, count_copies, enumerate_copies, CanonicalLabel, ColoredGraph, Edge, Graph,
};
use crate::hitting::{HittingError, HittingProblem, ItemSet, Search, SearchOutcome, StateKey, MAX_ITEMS};

/// Depth up to which searches on complete hosts reject states equivalent
/// under `Aut(K_n)`. Deeper rejection saves nodes but costs a canonical
/// labeling per node; 8 is fastest on `ex(10,K_3,K_4)`.
pub(crate) const EX_SYMMETRY_DEPTH: usize = 8;

/// Items are host edges, value sets are T-copies, constraints are H-copies.
pub struct HFreeInstance {
    host: Graph,
    t: Graph,
    h: Graph,
    problem: HittingProblem,
    incumbent: ItemSet,
    symmetry: HostSymmetry,
    symmetry_depth: usize,
}

/// States keyed up to automorphisms of the host: the host with each edge
/// subdivided by a node coloured free, protected or deleted.
pub struct HostSymmetry {
    n: usize,
    edges: Vec<Edge>,
}

impl StateKey for HostSymmetry {
    fn key(&self, deleted: &ItemSet, protected: &ItemSet) -> CanonicalLabel {
        let mut colors = vec![0u32; self.n];
        colors.extend((0..self.edges.len()).map(|i| {
            if deleted.contains(i) {
                3
            } else if protected.contains(i) {
                2
            } else {
                1
            }
        }));
        let mut g = ColoredGraph::new(colors);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            g.add_edge(self.n + i, u);
            g.add_edge(self.n + i, v);
        }
        g.canonical_label()
    }
}

impl HFreeInstance {
    pub fn new(host: &Graph, t: &Graph, h: &Graph) -> Result<Self, ExtremalError> {
        if t.edge_count() == 0 {
            return Err(ExtremalError::EmptyPattern);
        }
        if h.edge_count() == 0 {
            return Err(ExtremalError::EmptyForbidden);
        }
        let edges = host.edges();
        if edges.len() > MAX_ITEMS {
            return Err(HittingError::TooManyItems(edges.len()).into());
        }
        let index = |e: &Edge| edges.binary_search(e).unwrap();
        let values: Vec<ItemSet> =
            enumerate_copies(t, host).iter().map(|c| ItemSet::from_items(c.edges().iter().map(index))).collect();
        let constraints: BTreeSet<ItemSet> =
            enumerate_copies(h, host).iter().map(|c| ItemSet::from_items(c.edges().iter().map(index))).collect();
        let problem = HittingProblem::new(edges.len(), values, constraints.into_iter().collect())?;

        let deletions = |g: &Graph| ItemSet::from_items((0..edges.len()).filter(|&i| !g.has_edge(edges[i].0, edges[i].1)));
        let mut incumbent = deletions(&crate::sim::lower_bound_easy(host, t, h, None).graph);
        if let Some(g) = partite_heuristic(host, t, h) {
            let other = deletions(&g);
            if problem.value_of(&other) > problem.value_of(&incumbent) {
                incumbent = other;
            }
        }
        Ok(HFreeInstance {
            host: host.clone(),
            t: t.clone(),
            h: h.clone(),
            problem,
            incumbent,
            symmetry: HostSymmetry { n: host.vertex_count(), edges },
            symmetry_depth: 0,
        })
    }

    /// Rejects states equivalent under automorphisms of the host, up to
    /// `depth` deletions deep. Worth it only for symmetric hosts.
    pub fn with_symmetry_depth(mut self, depth: usize) -> Self {
        self.symmetry_depth = depth;
        self
    }

    pub fn problem(&self) -> &HittingProblem {
        &self.problem
    }

    /// The best heuristic deletion set, used as the starting incumbent.
    pub fn incumbent(&self) -> ItemSet {
        self.incumbent
    }

    /// A search seeded with the incumbent and the configured symmetry.
    pub fn search(&self) -> Search<'_> {
        let s = Search::new(&self.problem).with_incumbent(self.incumbent);
        if self.symmetry_depth > 0 {
            s.with_symmetry(&self.symmetry, self.symmetry_depth)
        } else {
            s
        }
    }

    /// Turns a finished search into a verified result.
    pub fn result(&self, outcome: SearchOutcome) -> ExtremalResult {
        let (value, deleted) = outcome.best.unwrap_or((self.problem.value_of(&self.incumbent), self.incumbent));
        let mut witness = self.host.clone();
        for i in deleted.iter() {
            let (u, v) = self.symmetry.edges[i];
            witness.remove_edge(u, v);
        }
        assert!(!contains_subgraph(&self.h, &witness), "witness contains H");
        assert_eq!(count_copies(&self.t, &witness), value, "witness value mismatch");
        ExtremalResult {
            n: self.host.vertex_count(),
            value,
            witness: Witness::Graph(witness),
            elapsed: None,
            nodes_explored: outcome.nodes,
        }
    }

    pub fn solve(&self) -> ExtremalResult {
        self.result(self.search().run())
    }
}

/// `ex(n,T,H)`: the most T-copies in an H-free graph on `n` vertices.
pub fn ex_exact(n: usize, t: &Graph, h: &Graph, guards: &Guards) -> Result<ExtremalResult, ExtremalError> {
    prepare_ex(n, t, h, guards).map(|inst| inst.solve())
}

/// The instance behind [`ex_exact`], after the same checks.
pub fn prepare_ex(n: usize, t: &Graph, h: &Graph, guards: &Guards) -> Result<HFreeInstance, ExtremalError> {
    let v_t = t.vertex_count();
    if n < v_t {
        return Err(ExtremalError::TooSmall { n, v_t });
    }
    if n > guards.max_n_ex {
        return Err(ExtremalError::Guard { what: "n", got: n, limit: guards.max_n_ex });
    }
    Ok(HFreeInstance::new(&Graph::complete(n), t, h)?.with_symmetry_depth(EX_SYMMETRY_DEPTH))
}

/// The `(χ(H)-1)`-partite subgraph of `host` with the most T-copies found
/// by moving single vertices between parts until no move helps. H-free
/// because its chromatic number is below `χ(H)`. `None` when `χ(H) = 1`.
pub fn partite_heuristic(host: &Graph, t: &Graph, h: &Graph) -> Option<Graph> {
    let n = host.vertex_count();
    let parts = (chromatic_number(h) - 1).min(n);
    if parts == 0 {
        return None;
    }
    let build = |side: &[usize]| {
        let mut g = Graph::empty(n);
        for (u, v) in host.edges() {
            if side[u] != side[v] {
                g.add_edge(u, v);
            }
        }
        g
    };
    let mut side: Vec<usize> = (0..n).map(|v| v % parts).collect();
    let mut best = count_copies(t, &build(&side));
    for _ in 0..4 * n {
        let mut improved = false;
        for v in 0..n {
            let home = side[v];
            for p in (0..parts).filter(|&p| p != home) {
                side[v] = p;
                let value = count_copies(t, &build(&side));
                if value > best {
                    best = value;
                    improved = true;
                    break;
                }
                side[v] = home;
            }
        }
        if !improved {
            break;
        }
    }
    Some(build(&side))
}
