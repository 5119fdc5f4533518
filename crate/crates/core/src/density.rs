//! 2-density, 2-balancedness and the closed-form T-density of the special
//! covering, all as exact rationals.

use crate::graph::Graph;
use crate::rational::Rational;

/// A density value together with the subgraph attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub value: Rational,
    pub witness: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("2-density is undefined: the graph has no subgraph with at least two edges")]
    TooFewEdges,
    #[error("T must have at least two edges and three vertices")]
    DegeneratePattern,
    #[error("2-density search is limited to {max} non-isolated vertices, got {got}")]
    TooLarge { max: usize, got: usize },
    #[error("exponent of a zero density is undefined")]
    ZeroDensity,
}

/// Largest number of non-isolated vertices [`two_density`] will scan.
pub const MAX_DENSITY_VERTICES: usize = 30;

/// `m_2(h)`: the maximum of `(e' - 1) / (v' - 2)` over subgraphs with at
/// least two edges.
///
/// For a fixed vertex set the induced subgraph has the most edges, so only
/// induced subgraphs on at least three vertices are scanned.
pub fn two_density(h: &Graph) -> Result<DensityReport, DensityError> {
    if h.edge_count() < 2 {
        return Err(DensityError::TooFewEdges);
    }
    let active = h.vertex_mask() & !h.isolated_vertices();
    let verts: alloc::vec::Vec<usize> = crate::graph::iter_bits(active).collect();
    if verts.len() > MAX_DENSITY_VERTICES {
        return Err(DensityError::TooLarge { max: MAX_DENSITY_VERTICES, got: verts.len() });
    }

    struct Best {
        edges: usize,
        vertices: usize,
        mask: u64,
    }
    fn better(e: usize, v: usize, best: &Option<Best>) -> bool {
        match best {
            None => true,
            // (e-1)/(v-2) > (be-1)/(bv-2)
            Some(b) => (e - 1) * (b.vertices - 2) > (b.edges - 1) * (v - 2),
        }
    }
    fn walk(h: &Graph, verts: &[usize], i: usize, mask: u64, size: usize, edges: usize, best: &mut Option<Best>) {
        if i == verts.len() {
            if size >= 3 && edges >= 2 && better(edges, size, best) {
                *best = Some(Best { edges, vertices: size, mask });
            }
            return;
        }
        let v = verts[i];
        let added = (h.neighbors(v) & mask).count_ones() as usize;
        walk(h, verts, i + 1, mask | 1 << v, size + 1, edges + added, best);
        walk(h, verts, i + 1, mask, size, edges, best);
    }

    let mut best = None;
    walk(h, &verts, 0, 0, 0, 0, &mut best);
    // at least two edges exist, so some subset of 3+ vertices qualifies
    let b = best.ok_or(DensityError::TooFewEdges)?;
    Ok(DensityReport {
        value: Rational::new(b.edges as i64 - 1, b.vertices as i64 - 2),
        witness: h.induced(b.mask),
    })
}

/// True iff the whole graph attains its 2-density.
pub fn is_two_balanced(t: &Graph) -> Result<bool, DensityError> {
    let m2 = two_density(t)?.value;
    let t = t.without_isolated();
    Ok(Rational::new(t.edge_count() as i64 - 1, t.vertex_count() as i64 - 2) == m2)
}

/// `e_T / (v_T - 2 + 1/m_2(H))`, the T-density of the covering that uses one
/// T-copy per edge of H.
pub fn fe_density_closed_form(t: &Graph, h: &Graph) -> Result<Rational, DensityError> {
    let (v_t, e_t) = (t.vertex_count() as i64, t.edge_count() as i64);
    if e_t < 2 || v_t < 3 {
        return Err(DensityError::DegeneratePattern);
    }
    let m2 = two_density(h)?.value;
    let denom = Rational::integer(v_t - 2) + m2.recip().ok_or(DensityError::ZeroDensity)?;
    Ok(Rational::integer(e_t) / denom)
}

/// Exponent `a` with `p = n^{-a}` at which a structure of density `d`
/// appears: `a = 1/d`.
pub fn threshold_exponent(density: Rational) -> Result<Rational, DensityError> {
    density.recip().ok_or(DensityError::ZeroDensity)
}

/// `v_T / e_T`, the exponent of the appearance threshold of T itself.
pub fn base_exponent(t: &Graph) -> Result<Rational, DensityError> {
    let e = t.edge_count() as i64;
    if e == 0 {
        return Err(DensityError::ZeroDensity);
    }
    Ok(Rational::new(t.vertex_count() as i64, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{iter_bits, Edge};
    use alloc::vec::Vec;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    /// Literal definition: every edge subset with at least two edges.
    fn two_density_by_edge_subsets(h: &Graph) -> Rational {
        let edges: Vec<Edge> = h.edges();
        let mut best: Option<Rational> = None;
        for s in 1u32..(1 << edges.len()) {
            if s.count_ones() < 2 {
                continue;
            }
            let support = iter_bits(s as u64).fold(0u64, |m, i| m | 1 << edges[i].0 | 1 << edges[i].1);
            let v = support.count_ones() as i64;
            let val = r(s.count_ones() as i64 - 1, v - 2);
            if best.is_none_or(|b| val > b) {
                best = Some(val);
            }
        }
        best.unwrap()
    }

    #[test]
    fn golden_values() {
        assert_eq!(two_density(&Graph::complete(4)).unwrap().value, r(5, 2));
        assert_eq!(two_density(&Graph::cycle(4)).unwrap().value, r(3, 2));
        assert_eq!(two_density(&Graph::complete_bipartite(3, 3)).unwrap().value, r(2, 1));
        assert_eq!(two_density(&Graph::complete(3)).unwrap().value, r(2, 1));
        assert_eq!(two_density(&Graph::path(3)).unwrap().value, r(1, 1));
    }

    #[test]
    fn k33_matches_edge_subset_oracle() {
        let k33 = Graph::complete_bipartite(3, 3);
        assert_eq!(two_density_by_edge_subsets(&k33), r(2, 1));
        let rep = two_density(&k33).unwrap();
        assert_eq!(rep.witness.edge_count(), 9);
    }

    #[test]
    fn witness_attains_value() {
        let tri_pendant = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let rep = two_density(&tri_pendant).unwrap();
        assert_eq!(rep.value, r(2, 1));
        let w = &rep.witness;
        assert_eq!(r(w.edge_count() as i64 - 1, w.vertex_count() as i64 - 2), rep.value);
    }

    #[test]
    fn balancedness() {
        assert!(is_two_balanced(&Graph::complete(4)).unwrap());
        assert!(is_two_balanced(&Graph::cycle(5)).unwrap());
        assert!(is_two_balanced(&Graph::complete_bipartite(3, 3)).unwrap());
        let tri_pendant = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert!(!is_two_balanced(&tri_pendant).unwrap());
        // isolated vertices do not count against balancedness
        let tri_iso = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(is_two_balanced(&tri_iso).unwrap());
    }

    #[test]
    fn undefined_density_rejected() {
        assert_eq!(two_density(&Graph::path(2)), Err(DensityError::TooFewEdges));
        let matching = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        // two disjoint edges: v'=4, (2-1)/(4-2)
        assert_eq!(two_density(&matching).unwrap().value, r(1, 2));
        assert_eq!(two_density(&Graph::empty(5)), Err(DensityError::TooFewEdges));
    }

    #[test]
    fn closed_form_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(fe_density_closed_form(&k3, &k3).unwrap(), r(2, 1));
        assert_eq!(fe_density_closed_form(&k3, &Graph::path(3)).unwrap(), r(3, 2));
        assert_eq!(fe_density_closed_form(&k3, &Graph::complete(4)).unwrap(), r(15, 7));
        assert_eq!(fe_density_closed_form(&Graph::path(2), &k3), Err(DensityError::DegeneratePattern));
    }

    #[test]
    fn exponents() {
        assert_eq!(threshold_exponent(r(2, 1)).unwrap(), r(1, 2));
        assert_eq!(threshold_exponent(r(15, 7)).unwrap(), r(7, 15));
        assert_eq!(base_exponent(&Graph::complete(3)).unwrap(), r(1, 1));
        assert_eq!(threshold_exponent(Rational::ZERO), Err(DensityError::ZeroDensity));
    }

    #[test]
    fn agrees_with_oracle_on_all_small_graphs() {
        // every labeled graph on 5 vertices with >= 2 edges
        let all: Vec<Edge> = Graph::complete(5).edges();
        for s in 0u32..(1 << all.len()) {
            if s.count_ones() < 2 {
                continue;
            }
            let es: Vec<Edge> = iter_bits(s as u64).map(|i| all[i]).collect();
            let g = Graph::from_edges(5, &es).unwrap();
            assert_eq!(two_density(&g).unwrap().value, two_density_by_edge_subsets(&g), "{g:?}");
        }
    }
}
