//! T-coverings of H: construction, validation, canonical types, T-density,
//! enumeration of all types, instance counting and the T-resolution.

mod enumerate;
mod instances;
mod resolution;

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::ControlFlow;

use crate::density::DensityError;
use crate::graph::{
    canonical_relabeling, contains_subgraph, embeddings, CanonicalLabel, ColoredGraph, Edge, Graph, SubgraphCopy, MAX_VERTICES,
};
use crate::rational::Rational;

pub use enumerate::{enumerate_covering_types, enumerate_covering_types_bounded, CoveringSearch};
pub use instances::{count_covering_instances, covering_instances};
pub use resolution::{resolution_from_types, resolution_search, t_resolution, Resolution, ResolutionOptions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoveringError {
    #[error("covering universe of {0} vertices exceeds the cap of {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("copies {0} and {1} share an edge")]
    NotEdgeDisjoint(usize, usize),
    #[error("copy {0} is not a copy of the pattern T")]
    NotACopy(usize),
    #[error("the union of the copies does not contain H")]
    MissingTarget,
    #[error("universe vertex {0} is not used by any copy")]
    UnusedVertex(usize),
    #[error("T must have at least one edge and no isolated vertices")]
    BadPattern,
    #[error("H must have at least one edge")]
    EmptyTarget,
    #[error("T-density needs at least two copies, got {0}")]
    TooFewCopies(usize),
    #[error("T must be 2-balanced")]
    NotTwoBalanced,
    #[error("H lies in a blow-up of T (a homomorphism H -> T exists)")]
    TargetInBlowUp,
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// A T-density: a rational, or `+∞` for sub-collections whose union has
/// no more vertices than T itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Density {
    Finite(Rational),
    Infinite,
}

impl Density {
    pub fn finite(self) -> Option<Rational> {
        match self {
            Density::Finite(r) => Some(r),
            Density::Infinite => None,
        }
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Density::Finite(a), Density::Finite(b)) => a.cmp(b),
            (Density::Finite(_), Density::Infinite) => Ordering::Less,
            (Density::Infinite, Density::Finite(_)) => Ordering::Greater,
            (Density::Infinite, Density::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Finite(r) => r.fmt(f),
            Density::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(e_U - e_T) / (v_U - v_T)` for a sub-collection of `k` pairwise
/// edge-disjoint copies spanning `v_union` vertices.
pub(crate) fn ratio(k: usize, v_union: usize, v_t: usize, e_t: usize) -> Density {
    if v_union <= v_t {
        Density::Infinite
    } else {
        Density::Finite(Rational::new(((k - 1) * e_t) as i64, (v_union - v_t) as i64))
    }
}

/// A collection of pairwise edge-disjoint copies of T on the universe
/// `0..universe_size` whose union contains H.
#[derive(Clone, PartialEq, Eq)]
pub struct Covering {
    universe_size: usize,
    copies: Vec<SubgraphCopy>,
    target: Graph,
}

impl Covering {
    /// Validates edge-disjointness, that every copy is a copy of `pattern`,
    /// that the union contains `target` and that every universe vertex is
    /// used. Minimality is checked separately by [`Covering::is_minimal`].
    pub fn new(pattern: &Graph, universe_size: usize, copies: Vec<SubgraphCopy>, target: Graph) -> Result<Self, CoveringError> {
        if universe_size > MAX_VERTICES {
            return Err(CoveringError::TooLarge(universe_size));
        }
        let pattern_label = crate::graph::canonical_form(&pattern.without_isolated());
        for (i, c) in copies.iter().enumerate() {
            let g = Graph::spanned_by(c.edges());
            if c.vertices() >> universe_size != 0 && universe_size < 64
                || g.vertex_count() != pattern.vertex_count()
                || crate::graph::canonical_form(&g) != pattern_label
            {
                return Err(CoveringError::NotACopy(i));
            }
        }
        for i in 0..copies.len() {
            for j in i + 1..copies.len() {
                if copies[i].shares_edge_with(&copies[j]) {
                    return Err(CoveringError::NotEdgeDisjoint(i, j));
                }
            }
        }
        let used = copies.iter().fold(0u64, |m, c| m | c.vertices());
        if let Some(v) = (0..universe_size).find(|&v| used >> v & 1 == 0) {
            return Err(CoveringError::UnusedVertex(v));
        }
        let cov = Covering { universe_size, copies, target };
        if !contains_subgraph(&cov.target, &cov.union_graph()) {
            return Err(CoveringError::MissingTarget);
        }
        Ok(cov)
    }

    pub(crate) fn new_unchecked(universe_size: usize, copies: Vec<SubgraphCopy>, target: Graph) -> Self {
        Covering { universe_size, copies, target }
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn copies(&self) -> &[SubgraphCopy] {
        &self.copies
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Union of all copies on the universe `0..universe_size`.
    pub fn union_graph(&self) -> Graph {
        self.union_of(|_| true)
    }

    fn union_of(&self, keep: impl Fn(usize) -> bool) -> Graph {
        let mut g = Graph::empty(self.universe_size);
        for (i, c) in self.copies.iter().enumerate() {
            if keep(i) {
                for &(u, v) in c.edges() {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// No copy can be dropped while keeping a copy of H in the union.
    pub fn is_minimal(&self) -> bool {
        (0..self.copies.len()).all(|i| !contains_subgraph(&self.target, &self.union_of(|j| j != i)))
    }

    /// Canonical form under covering isomorphism: a bijection of the
    /// universes mapping every copy onto a copy.
    ///
    /// Encoded as the vertex-coloured graph with universe vertices, one node
    /// per edge subdividing it and one node per copy joined to the nodes of
    /// its edges.
    pub fn canonical_label(&self) -> CanonicalLabel {
        let m: usize = self.copies.iter().map(|c| c.edge_count()).sum();
        let u = self.universe_size;
        let k = self.copies.len();
        let mut colors = vec![0u32; u];
        colors.extend(core::iter::repeat_n(1, m));
        colors.extend(core::iter::repeat_n(2, k));
        let mut g = ColoredGraph::new(colors);
        let mut node = u;
        for (i, c) in self.copies.iter().enumerate() {
            for &(a, b) in c.edges() {
                g.add_edge(node, a);
                g.add_edge(node, b);
                g.add_edge(node, u + m + i);
                node += 1;
            }
        }
        g.canonical_label()
    }
}

impl fmt::Debug for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Covering")
            .field("universe_size", &self.universe_size)
            .field("copies", &self.copies.iter().map(|c| c.edges()).collect::<Vec<_>>())
            .finish()
    }
}

/// The underlying graph `U(F')` of a collection of copies: the union of
/// their edges on their joint support, relabeled to `0..v` with no
/// isolated vertices.
pub fn underlying_graph(copies: &[SubgraphCopy]) -> Graph {
    let edges: Vec<_> = copies.iter().flat_map(|c| c.edges().iter().copied()).collect();
    Graph::spanned_by(&edges)
}

/// A T-density with the sub-collection (copy indices) attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDensityReport {
    pub value: Density,
    pub witness: Vec<usize>,
}

/// `m_T(F)`: the maximum over sub-collections `F'` with `|F'| >= 2` of
/// `(e_U(F') - e_T) / (v_U(F') - v_T)`. Ties keep the first sub-collection
/// in increasing bitmask order.
pub fn t_density(f: &Covering) -> Result<TDensityReport, CoveringError> {
    let k = f.copies.len();
    if k < 2 {
        return Err(CoveringError::TooFewCopies(k));
    }
    let v_t = f.copies[0].vertex_count();
    let e_t = f.copies[0].edge_count();
    let masks: Vec<u64> = f.copies.iter().map(|c| c.vertices()).collect();
    let (value, sub) = max_subcollection_density(&masks, v_t, e_t);
    Ok(TDensityReport { value, witness: crate::graph::iter_bits(sub).collect() })
}

pub(crate) fn max_subcollection_density(masks: &[u64], v_t: usize, e_t: usize) -> (Density, u64) {
    let k = masks.len();
    assert!(k < 63, "too many copies for sub-collection enumeration");
    let mut best: Option<(Density, u64)> = None;
    for sub in 1u64..(1 << k) {
        let size = sub.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let union = crate::graph::iter_bits(sub).fold(0u64, |m, i| m | masks[i]);
        let d = ratio(size, union.count_ones() as usize, v_t, e_t);
        if best.is_none_or(|(b, _)| d > b) {
            best = Some((d, sub));
        }
    }
    best.unwrap()
}

/// `F^e_{T,H}`: one copy of T per edge of H, each meeting H in exactly that
/// edge, all other vertices fresh. H occupies vertices `0..v_H`.
///
/// Which arc of T lies on each H-edge can change the type, and can decide
/// whether the covering is minimal, when T is not arc-transitive. T and H
/// are read in canonical vertex order and, for the `i`-th H-edge in that
/// order, an arc of T is chosen up to automorphism; choice vectors are
/// tried in lexicographic order and the first minimal covering is
/// returned. With no minimal choice (or more than [`SPECIAL_CHOICE_BUDGET`]
/// vectors) the all-first choice is used. Either way the type depends only
/// on the isomorphism classes of T and H.
pub fn build_special_covering(t: &Graph, h: &Graph) -> Result<Covering, CoveringError> {
    if t.edge_count() == 0 || t.isolated_vertices() != 0 {
        return Err(CoveringError::BadPattern);
    }
    if h.edge_count() == 0 {
        return Err(CoveringError::EmptyTarget);
    }
    if h.isolated_vertices() != 0 {
        // isolated vertices of H are not touched by any copy
        return build_special_covering(t, &h.without_isolated());
    }
    let (v_h, v_t) = (h.vertex_count(), t.vertex_count());
    let universe = v_h + h.edge_count() * (v_t - 2);
    if universe > MAX_VERTICES {
        return Err(CoveringError::TooLarge(universe));
    }
    let tc = t.permuted(&canonical_relabeling(t));
    let h_perm = canonical_relabeling(h);
    let h_order = inverse(&h_perm);
    let h_edges: Vec<Edge> =
        h.permuted(&h_perm).edges().into_iter().map(|(x, y)| (h_order[x], h_order[y])).collect();
    let arcs = arc_orbit_representatives(&tc);
    let build = |choice: &[usize]| {
        let mut next = v_h;
        let copies = h_edges
            .iter()
            .zip(choice)
            .map(|(&(x, y), &c)| {
                let (a, b) = arcs[c];
                let mut map = vec![usize::MAX; v_t];
                map[a] = x;
                map[b] = y;
                for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
                    *slot = next;
                    next += 1;
                }
                SubgraphCopy::from_map(&tc, &map)
            })
            .collect();
        Covering::new_unchecked(universe, copies, h.clone())
    };
    let mut choice = vec![0; h_edges.len()];
    let first = build(&choice);
    let tries = (arcs.len() as u64).checked_pow(h_edges.len() as u32).unwrap_or(u64::MAX);
    if arcs.len() == 1 || tries > SPECIAL_CHOICE_BUDGET || first.is_minimal() {
        return Ok(first);
    }
    // odometer over the remaining choice vectors, last position fastest
    while let Some(i) = choice.iter().rposition(|&c| c + 1 < arcs.len()) {
        choice[i] += 1;
        choice[i + 1..].fill(0);
        let cov = build(&choice);
        if cov.is_minimal() {
            return Ok(cov);
        }
    }
    Ok(first)
}

/// Most arc-choice vectors [`build_special_covering`] tries.
pub const SPECIAL_CHOICE_BUDGET: u64 = 1 << 12;

/// The smallest arc `(a, b)` (an edge read in one direction) of each orbit
/// of `Aut(t)` on arcs, sorted. The first is `t`'s first edge.
fn arc_orbit_representatives(t: &Graph) -> Vec<Edge> {
    let mut autos = Vec::new();
    let _ = embeddings(t, t, &[], |m| {
        autos.push(m.to_vec());
        ControlFlow::Continue(())
    });
    let mut reps: Vec<Edge> = Vec::new();
    for (u, v) in t.edges() {
        for arc in [(u, v), (v, u)] {
            let smallest = autos.iter().map(|m| (m[arc.0], m[arc.1])).min().unwrap();
            if smallest == arc {
                reps.push(arc);
            }
        }
    }
    reps.sort_unstable();
    reps
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// The Fano plane as a decomposition of `K_7` into seven edge-disjoint
/// triangles (a `K_3`-covering of `K_7`).
pub fn fano_covering() -> Covering {
    const LINES: [[usize; 3]; 7] = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
    let copies = LINES.iter().map(|&[a, b, c]| SubgraphCopy::new([(a, b), (b, c), (a, c)], 0)).collect();
    Covering::new_unchecked(7, copies, Graph::complete(7))
}

/// An isomorphism class of coverings with a representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringType {
    pub canonical: CanonicalLabel,
    pub representative: Covering,
    pub copy_count: usize,
    pub union_vertices: usize,
    pub union_edges: usize,
    /// Whether the representative is a minimal covering. Only the special
    /// covering `F^e` can appear with `false` (when H is contained in T).
    pub minimal: bool,
    /// Whether this is the type of `F^e_{T,H}`.
    pub special: bool,
}

impl CoveringType {
    pub fn from_covering(c: Covering) -> Self {
        let union = c.union_graph();
        CoveringType {
            canonical: c.canonical_label(),
            copy_count: c.len(),
            union_vertices: union.vertex_count() - (union.isolated_vertices().count_ones() as usize),
            union_edges: union.edge_count(),
            minimal: c.is_minimal(),
            special: false,
            representative: c,
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.copy_count == 1
    }

    /// `m_T` of the representative; `None` for singletons.
    pub fn density(&self) -> Option<Density> {
        t_density(&self.representative).ok().map(|r| r.value)
    }
}
