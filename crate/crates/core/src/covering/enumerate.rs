//! Exhaustive search for covering types.
//!
//! H is fixed on the vertices `0..v_H`. In a minimal covering every copy
//! carries an edge of this placement, so copies can be added one at a time,
//! each anchored on the smallest H-edge not yet covered. The other vertices
//! of a new copy go to existing universe vertices or to fresh ones (taken in
//! order, since fresh vertices are interchangeable). Leave-one-out unions only
//! grow as copies are added, so a partial collection that is already
//! non-minimal is cut immediately.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::{build_special_covering, ratio, Covering, CoveringError, CoveringType, Density};
use crate::graph::{contains_subgraph, iter_bits, CanonicalLabel, Edge, Graph, SubgraphCopy, MAX_VERTICES};
use crate::rational::Rational;

/// Placement plan for one oriented T-edge `(a, b)` laid on an H-edge: the
/// remaining T-vertices in order, each with its T-neighbours placed before it.
struct Anchor {
    a: usize,
    b: usize,
    rest: Vec<(usize, Vec<usize>)>,
}

/// A prepared covering enumeration for a pair `(T, H)`.
pub struct CoveringSearch {
    t: Graph,
    h: Graph,
    h_edges: Vec<(usize, usize)>,
    anchors: Vec<Anchor>,
    cap: usize,
    bound: Option<Rational>,
    /// Vertex sets of the induced subgraphs of H with two or more edges.
    targets: Vec<u64>,
    /// `deficit[j]`: `v_T` minus the fewest vertices spanning `j` edges of T,
    /// the most vertices a copy can add beyond the ends of `j` target edges.
    deficit: Vec<usize>,
    special: Covering,
}

struct State {
    used: Graph,
    universe: usize,
    copies: Vec<SubgraphCopy>,
}

impl CoveringSearch {
    pub fn new(t: &Graph, h: &Graph) -> Result<Self, CoveringError> {
        let special = build_special_covering(t, h)?;
        let h = h.without_isolated();
        let h_edges = h.edges();
        let cap = special.universe_size();
        let mut anchors = Vec::new();
        for (u, v) in t.edges() {
            for (a, b) in [(u, v), (v, u)] {
                anchors.push(Anchor { a, b, rest: placement_order(t, a, b) });
            }
        }
        debug_assert!(cap <= MAX_VERTICES);
        let targets = if h.vertex_count() <= MAX_TARGET_VERTICES {
            (1u64..1 << h.vertex_count()).filter(|&m| h.induced(m).edge_count() >= 2).collect()
        } else {
            vec![h.vertex_mask()]
        };
        let deficit = deficits(t);
        Ok(CoveringSearch { t: t.clone(), h, h_edges, anchors, cap, bound: None, targets, deficit, special })
    }

    /// Restricts the search to coverings with T-density at most `max`.
    /// Singletons have no T-density and are always kept.
    pub fn with_bound(mut self, max: Rational) -> Self {
        self.bound = Some(max);
        self
    }

    pub fn special(&self) -> &Covering {
        &self.special
    }

    /// Possible first copies, each an independent subtree.
    pub fn root_branches(&self) -> Vec<SubgraphCopy> {
        let state = self.root_state();
        self.children(&state, self.h_edges[0])
    }

    /// All minimal coverings (keyed by canonical label) whose first copy is
    /// `first`.
    pub fn explore(&self, first: &SubgraphCopy) -> BTreeMap<CanonicalLabel, Covering> {
        let mut found = BTreeMap::new();
        let mut state = self.root_state();
        if self.push(&mut state, first.clone()) {
            self.dfs(&mut state, &mut found);
        }
        found
    }

    /// Types from merged [`CoveringSearch::explore`] results, sorted by
    /// canonical label, with the special covering added (and flagged).
    pub fn finish(&self, mut found: BTreeMap<CanonicalLabel, Covering>) -> Vec<CoveringType> {
        let special_label = self.special.canonical_label();
        let special_fits = match self.bound {
            None => true,
            Some(b) => super::t_density(&self.special).map_or(true, |r| r.value <= Density::Finite(b)),
        };
        if special_fits {
            found.entry(special_label.clone()).or_insert_with(|| self.special.clone());
        }
        found
            .into_values()
            .map(|c| {
                let mut ty = CoveringType::from_covering(c);
                ty.special = ty.canonical == special_label;
                debug_assert!(ty.minimal || ty.special);
                ty
            })
            .collect()
    }

    pub fn run(&self) -> Vec<CoveringType> {
        let mut all = BTreeMap::new();
        for first in self.root_branches() {
            all.append(&mut self.explore(&first));
        }
        self.finish(all)
    }

    fn root_state(&self) -> State {
        State { used: Graph::empty(self.cap), universe: self.h.vertex_count(), copies: Vec::new() }
    }

    fn dfs(&self, state: &mut State, found: &mut BTreeMap<CanonicalLabel, Covering>) {
        let Some(&next) = self.h_edges.iter().find(|&&(x, y)| !state.used.has_edge(x, y)) else {
            let cov = Covering::new_unchecked(state.universe, state.copies.clone(), self.h.clone());
            debug_assert!(cov.is_minimal());
            found.entry(cov.canonical_label()).or_insert(cov);
            return;
        };
        for child in self.children(state, next) {
            let saved = state.universe;
            if self.push(state, child) {
                self.dfs(state, found);
            }
            let last = state.copies.pop().unwrap();
            for &(u, v) in last.edges() {
                state.used.remove_edge(u, v);
            }
            state.universe = saved;
        }
    }

    /// Adds `copy` and reports whether the partial collection is still
    /// minimal and within the density bound. The copy is pushed either way.
    fn push(&self, state: &mut State, copy: SubgraphCopy) -> bool {
        for &(u, v) in copy.edges() {
            state.used.add_edge(u, v);
        }
        if let Some(top) = iter_bits(copy.vertices()).last() {
            state.universe = state.universe.max(top + 1);
        }
        state.copies.push(copy);
        self.within_bound(&state.copies) && self.still_minimal(state) && self.completion_within_bound(state)
    }

    /// False if every completion has a sub-collection above the bound.
    ///
    /// For a target `H'` (an induced subgraph of H), the copies meeting `H'`
    /// in an edge form a sub-collection of the final covering. Each copy still
    /// to come that meets `H'` covers some `j >= 1` of its uncovered edges and
    /// adds at most `deficit[j]` vertices outside `H'` and the current union,
    /// so the density of that sub-collection has a lower bound computable
    /// from a partition of the uncovered edges.
    fn completion_within_bound(&self, state: &State) -> bool {
        let Some(bound) = self.bound else {
            return true;
        };
        let bound = Density::Finite(bound);
        let (v_t, e_t) = (self.t.vertex_count(), self.t.edge_count());
        let inside = |mask: u64, (x, y): Edge| x < 64 && y < 64 && mask >> x & 1 == 1 && mask >> y & 1 == 1;
        self.targets.iter().all(|&mask| {
            let open = self.h_edges.iter().filter(|&&e| inside(mask, e) && !state.used.has_edge(e.0, e.1)).count();
            if open == 0 {
                return true;
            }
            let mut k = 0;
            let mut verts = mask;
            for c in &state.copies {
                if c.edges().iter().any(|&e| inside(mask, e) && self.h.has_edge(e.0, e.1)) {
                    k += 1;
                    verts |= c.vertices();
                }
            }
            let base = verts.count_ones() as usize;
            most_added(&self.deficit, open)
                .into_iter()
                .enumerate()
                .filter_map(|(q, d)| Some((q, d?)))
                .any(|(q, d)| k + q < 2 || ratio(k + q, base + d, v_t, e_t) <= bound)
        })
    }

    fn still_minimal(&self, state: &State) -> bool {
        state.copies.iter().all(|c| {
            let mut rest = state.used.clone();
            for &(u, v) in c.edges() {
                rest.remove_edge(u, v);
            }
            !contains_subgraph(&self.h, &rest)
        })
    }

    /// Every sub-collection containing the newest copy stays within the bound.
    fn within_bound(&self, copies: &[SubgraphCopy]) -> bool {
        let Some(bound) = self.bound else {
            return true;
        };
        let bound = Density::Finite(bound);
        let (v_t, e_t) = (self.t.vertex_count(), self.t.edge_count());
        let (last, before) = copies.split_last().unwrap();
        (1u64..1 << before.len()).all(|sub| {
            let union = iter_bits(sub).fold(last.vertices(), |m, i| m | before[i].vertices());
            ratio(sub.count_ones() as usize + 1, union.count_ones() as usize, v_t, e_t) <= bound
        })
    }

    /// Distinct copies of T through the H-edge `(x, y)` using no edge of the
    /// current union.
    fn children(&self, state: &State, (x, y): (usize, usize)) -> Vec<SubgraphCopy> {
        let mut out = BTreeSet::new();
        let mut map = vec![usize::MAX; self.t.vertex_count()];
        for anchor in &self.anchors {
            map.fill(usize::MAX);
            map[anchor.a] = x;
            map[anchor.b] = y;
            let image = 1u64 << x | 1 << y;
            self.extend(state, anchor, 0, &mut map, image, state.universe, &mut out);
        }
        out.into_iter().collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        state: &State,
        anchor: &Anchor,
        k: usize,
        map: &mut [usize],
        image: u64,
        fresh: usize,
        out: &mut BTreeSet<SubgraphCopy>,
    ) {
        let Some((tv, back)) = anchor.rest.get(k) else {
            out.insert(SubgraphCopy::from_map(&self.t, map));
            return;
        };
        for w in (0..state.universe).filter(|&w| image >> w & 1 == 0) {
            if back.iter().all(|&b| !state.used.has_edge(map[b], w)) {
                map[*tv] = w;
                self.extend(state, anchor, k + 1, map, image | 1 << w, fresh, out);
            }
        }
        if fresh < self.cap {
            map[*tv] = fresh;
            self.extend(state, anchor, k + 1, map, image | 1 << fresh, fresh + 1, out);
        }
        map[*tv] = usize::MAX;
    }
}

/// Induced subgraphs of H on at most this many vertices serve as targets
/// for bound pruning; larger H use only H itself.
const MAX_TARGET_VERTICES: usize = 10;

fn deficits(t: &Graph) -> Vec<usize> {
    let v_t = t.vertex_count();
    let mut most = vec![0; v_t + 1];
    if v_t <= 16 {
        for mask in 0u64..1 << v_t {
            let s = mask.count_ones() as usize;
            most[s] = most[s].max(t.induced(mask).edge_count());
        }
    } else {
        // without the exact table, assume j edges may fit on a clique
        for (s, m) in most.iter_mut().enumerate() {
            *m = s * s.saturating_sub(1) / 2;
        }
    }
    (0..=t.edge_count()).map(|j| v_t - (0..=v_t).find(|&s| most[s] >= j).unwrap()).collect()
}

/// `out[q]`: the largest total deficit of `q` copies covering `open` edges
/// between them (each at least one), or `None` if impossible.
fn most_added(deficit: &[usize], open: usize) -> Vec<Option<usize>> {
    let jmax = deficit.len() - 1;
    // best[m]: for the current q, the largest total over parts summing to m
    let mut best: Vec<Option<usize>> = vec![None; open + 1];
    best[0] = Some(0);
    let mut out = vec![None; open + 1];
    for slot in out.iter_mut().skip(1) {
        let mut next = vec![None; open + 1];
        for m in 0..=open {
            let Some(b) = best[m] else { continue };
            for j in 1..=jmax.min(open - m) {
                let v = b + deficit[j];
                if next[m + j].is_none_or(|x| v > x) {
                    next[m + j] = Some(v);
                }
            }
        }
        *slot = next[open];
        best = next;
    }
    out
}

/// Remaining T-vertices after `a, b`, most-connected-to-placed first, each
/// with its already placed neighbours.
fn placement_order(t: &Graph, a: usize, b: usize) -> Vec<(usize, Vec<usize>)> {
    let mut placed = 1u64 << a | 1 << b;
    let mut out = Vec::new();
    while placed != t.vertex_mask() {
        let v = iter_bits(t.vertex_mask() & !placed)
            .max_by_key(|&v| ((t.neighbors(v) & placed).count_ones(), core::cmp::Reverse(v)))
            .unwrap();
        out.push((v, iter_bits(t.neighbors(v) & placed).collect()));
        placed |= 1 << v;
    }
    out
}

/// Every covering type of H by T, sorted by canonical label. Includes the
/// type of `F^e`, flagged `special` (and `minimal: false` when H ⊆ T).
pub fn enumerate_covering_types(t: &Graph, h: &Graph) -> Result<Vec<CoveringType>, CoveringError> {
    Ok(CoveringSearch::new(t, h)?.run())
}

/// The covering types whose T-density is at most `max_density`, plus any
/// singleton types.
pub fn enumerate_covering_types_bounded(
    t: &Graph,
    h: &Graph,
    max_density: Rational,
) -> Result<Vec<CoveringType>, CoveringError> {
    Ok(CoveringSearch::new(t, h)?.with_bound(max_density).run())
}
