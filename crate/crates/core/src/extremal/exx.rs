//! Maximum 𝓕-free collections of T-copies of `K_n`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{ExtremalError, ExtremalResult, Guards, Witness};
use crate::covering::{count_covering_instances, covering_instances, CoveringError, CoveringType};
use crate::graph::{canonical_form, enumerate_copies, CanonicalLabel, ColoredGraph, Edge, Graph, SubgraphCopy};
use crate::hitting::{HittingProblem, ItemSet, Search, SearchOutcome, StateKey, MAX_ITEMS};

/// Largest number of covering instances materialized as constraints.
pub const MAX_HYPEREDGES: usize = 1 << 21;

const EXX_SYMMETRY_DEPTH: usize = 2;

/// Items are the T-copies of `K_n`, each its own value set; constraints are
/// the instances of the family's coverings among them.
pub struct ExxInstance {
    n: usize,
    pool: Vec<SubgraphCopy>,
    family: Vec<CoveringType>,
    problem: HittingProblem,
    incumbent: ItemSet,
    symmetry: ExxSymmetry,
    symmetry_depth: usize,
}

/// States keyed up to permutations of `K_n`: vertices, edge nodes, and one
/// node per pool copy (coloured free, protected or deleted) joined to the
/// nodes of its edges.
pub struct ExxSymmetry {
    n: usize,
    edges: Vec<Edge>,
    copy_edges: Vec<Vec<usize>>,
}

impl StateKey for ExxSymmetry {
    fn key(&self, deleted: &ItemSet, protected: &ItemSet) -> CanonicalLabel {
        let m = self.edges.len();
        let mut colors = vec![0u32; self.n];
        colors.extend(core::iter::repeat_n(1, m));
        colors.extend((0..self.copy_edges.len()).map(|i| {
            if deleted.contains(i) {
                4
            } else if protected.contains(i) {
                3
            } else {
                2
            }
        }));
        let mut g = ColoredGraph::new(colors);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            g.add_edge(self.n + i, u);
            g.add_edge(self.n + i, v);
        }
        for (c, es) in self.copy_edges.iter().enumerate() {
            for &e in es {
                g.add_edge(self.n + m + c, self.n + e);
            }
        }
        g.canonical_label()
    }
}

impl ExxInstance {
    pub fn new(n: usize, t: &Graph, family: &[CoveringType], guards: &Guards) -> Result<Self, ExtremalError> {
        let v_t = t.vertex_count();
        if t.edge_count() == 0 {
            return Err(ExtremalError::EmptyPattern);
        }
        if n < v_t {
            return Err(ExtremalError::TooSmall { n, v_t });
        }
        let t_label = canonical_form(&t.without_isolated());
        for ty in family {
            for (i, c) in ty.representative.copies().iter().enumerate() {
                if canonical_form(&Graph::spanned_by(c.edges())) != t_label {
                    return Err(CoveringError::NotACopy(i).into());
                }
            }
        }
        let pool_size = crate::graph::count_copies_complete(t, n);
        let limit = guards.max_pool_exx.min(MAX_ITEMS);
        if pool_size > limit as u128 {
            return Err(ExtremalError::Guard { what: "pool size |T(K_n)|", got: pool_size as usize, limit });
        }
        let host = Graph::complete(n);
        let pool = enumerate_copies(t, &host);
        let mut constraints = BTreeSet::new();
        for ty in family {
            for inst in covering_instances(ty, &pool) {
                constraints.insert(ItemSet::from_items(inst));
                if constraints.len() > MAX_HYPEREDGES {
                    return Err(ExtremalError::Guard { what: "covering instances", got: constraints.len(), limit: MAX_HYPEREDGES });
                }
            }
        }
        let values = (0..pool.len()).map(|i| ItemSet::from_items([i])).collect();
        let problem = HittingProblem::new(pool.len(), values, constraints.into_iter().collect())?;
        let incumbent = greedy_hitting_set(&problem, pool.len());

        let edges = host.edges();
        let copy_edges = pool.iter().map(|c| c.edges().iter().map(|e| edges.binary_search(e).unwrap()).collect()).collect();
        Ok(ExxInstance {
            n,
            pool,
            family: family.to_vec(),
            problem,
            incumbent,
            symmetry: ExxSymmetry { n, edges, copy_edges },
            symmetry_depth: EXX_SYMMETRY_DEPTH,
        })
    }

    pub fn with_symmetry_depth(mut self, depth: usize) -> Self {
        self.symmetry_depth = depth;
        self
    }

    /// `T(K_n)` in sorted order; item `i` is `pool()[i]`.
    pub fn pool(&self) -> &[SubgraphCopy] {
        &self.pool
    }

    pub fn problem(&self) -> &HittingProblem {
        &self.problem
    }

    pub fn incumbent(&self) -> ItemSet {
        self.incumbent
    }

    pub fn search(&self) -> Search<'_> {
        let s = Search::new(&self.problem).with_incumbent(self.incumbent);
        if self.symmetry_depth > 0 {
            s.with_symmetry(&self.symmetry, self.symmetry_depth)
        } else {
            s
        }
    }

    /// Turns a finished search into a result whose witness is re-checked to
    /// contain no instance of any family member.
    pub fn result(&self, outcome: SearchOutcome) -> ExtremalResult {
        let (value, deleted) = outcome.best.unwrap_or((self.problem.value_of(&self.incumbent), self.incumbent));
        let kept: Vec<SubgraphCopy> =
            self.pool.iter().enumerate().filter(|(i, _)| !deleted.contains(*i)).map(|(_, c)| c.clone()).collect();
        assert_eq!(kept.len(), value);
        for ty in &self.family {
            assert_eq!(count_covering_instances(ty, &kept), 0, "witness contains a forbidden covering");
        }
        ExtremalResult { n: self.n, value, witness: Witness::Copies(kept), elapsed: None, nodes_explored: outcome.nodes }
    }

    pub fn solve(&self) -> ExtremalResult {
        self.result(self.search().run())
    }
}

/// Repeatedly deletes the item in the most unhit constraints (lowest index
/// on ties).
fn greedy_hitting_set(problem: &HittingProblem, items: usize) -> ItemSet {
    let constraints = problem.constraints();
    let mut deleted = ItemSet::EMPTY;
    let mut open: Vec<&ItemSet> = constraints.iter().collect();
    while !open.is_empty() {
        let mut count = vec![0usize; items];
        for c in &open {
            for i in c.iter() {
                count[i] += 1;
            }
        }
        let best = (0..items).max_by_key(|&i| (count[i], core::cmp::Reverse(i))).unwrap();
        deleted.insert(best);
        open.retain(|c| !c.contains(best));
    }
    deleted
}

/// `êx(n,T,𝓕)`: the largest collection of T-copies of `K_n` containing no
/// covering isomorphic to a member of `family`.
pub fn exx_exact(n: usize, t: &Graph, family: &[CoveringType], guards: &Guards) -> Result<ExtremalResult, ExtremalError> {
    Ok(ExxInstance::new(n, t, family, guards)?.solve())
}
