//! Exact small-n values of `ex(n,T,H)` and `êx(n,T,𝓕)`, and the finite-n
//! surrogate of the `(μ_i, π_i)` sequence.
//!
//! Both solvers reduce to the branch and bound in [`crate::hitting`]:
//! see [`HFreeInstance`] and [`ExxInstance`]. The instances are exposed so
//! that callers can split the root branches across threads.

mod exx;
mod hfree;

use alloc::vec::Vec;
use core::time::Duration;

use crate::covering::{t_resolution, CoveringError, ResolutionOptions};
use crate::graph::{count_copies_complete, Graph, SubgraphCopy};
use crate::hitting::HittingError;
use crate::rational::Rational;

pub use exx::{exx_exact, ExxInstance, ExxSymmetry, MAX_HYPEREDGES};
pub(crate) use hfree::EX_SYMMETRY_DEPTH;
pub use hfree::{ex_exact, partite_heuristic, prepare_ex, HFreeInstance, HostSymmetry};

/// Size limits above which the exact solvers refuse to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest `n` for `ex_exact`.
    pub max_n_ex: usize,
    /// Largest pool `|T(K_n)|` for `exx_exact`.
    pub max_pool_exx: usize,
    /// Largest host edge count for the per-sample solver.
    pub max_edges_sample_solver: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { max_n_ex: 10, max_pool_exx: 256, max_edges_sample_solver: 45 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtremalError {
    #[error("refusing exact search: {what} is {got}, above the guard of {limit}")]
    Guard { what: &'static str, got: usize, limit: usize },
    #[error("n must be at least v_T = {v_t}, got {n}")]
    TooSmall { n: usize, v_t: usize },
    #[error("T must have at least one edge")]
    EmptyPattern,
    #[error("H must have at least one edge (every graph contains an edgeless H)")]
    EmptyForbidden,
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Hitting(#[from] HittingError),
}

impl ExtremalError {
    /// True for size-guard refusals (as opposed to invalid input).
    pub fn is_guard(&self) -> bool {
        matches!(self, ExtremalError::Guard { .. } | ExtremalError::Hitting(HittingError::TooManyItems(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// An H-free graph on the host's vertices.
    Graph(Graph),
    /// An 𝓕-free collection of T-copies of `K_n`.
    Copies(Vec<SubgraphCopy>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub n: usize,
    pub value: usize,
    pub witness: Witness,
    /// Wall time, filled in by callers that have a clock.
    pub elapsed: Option<Duration>,
    pub nodes_explored: u64,
}

/// One entry of the `(μ, π)` sequence at a finite `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiEntry {
    /// Resolution index `i` (`0` is the base entry).
    pub index: usize,
    pub mu: Rational,
    /// `êx(n,T,{F_1..F_i})`, or `N_T(K_n)` for the base entry.
    pub pi_numerator: u64,
    /// `pi_numerator / n^{v_T}`.
    pub pi_value_at_n: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiSequence {
    pub n: usize,
    pub entries: Vec<PiEntry>,
    pub nodes_explored: u64,
}

/// Evaluates `êx(n,T,{F_1..F_i})` for every index `i` of the T-resolution
/// with `p_{i+1} != p_i` or `i = k`, prefixed by `(e_T/v_T, N_T(K_n))`.
///
/// At finite `n` consecutive indices can give the same value; such a run is
/// reported once, at its first (smallest) `μ`, so the reported `π` values
/// strictly decrease.
pub fn pi_sequence_surrogate(
    n: usize,
    t: &Graph,
    h: &Graph,
    options: ResolutionOptions,
    guards: &Guards,
) -> Result<PiSequence, ExtremalError> {
    let resolution = t_resolution(t, h, options)?;
    let families: Vec<Vec<crate::covering::CoveringType>> =
        (1..=resolution.len()).map(|i| resolution.types[..i].to_vec()).collect();
    let values = families
        .iter()
        .map(|f| exx_exact(n, t, f, guards))
        .collect::<Result<Vec<_>, _>>()?;
    pi_sequence_from_values(n, t, &resolution.densities, &values)
}

/// Assembles the sequence from `êx(n,T,{F_1..F_i})` for `i = 1..=k`
/// (`values[i-1]`) and the resolution densities.
pub fn pi_sequence_from_values(
    n: usize,
    t: &Graph,
    densities: &[Rational],
    values: &[ExtremalResult],
) -> Result<PiSequence, ExtremalError> {
    assert_eq!(densities.len(), values.len());
    let (v_t, e_t) = (t.vertex_count(), t.edge_count());
    if e_t == 0 {
        return Err(ExtremalError::EmptyPattern);
    }
    if n < v_t {
        return Err(ExtremalError::TooSmall { n, v_t });
    }
    let scale = (n as i64).checked_pow(v_t as u32).expect("n^{v_T} overflows i64");
    let base = count_copies_complete(t, n) as u64;
    let mut entries = alloc::vec![PiEntry {
        index: 0,
        mu: Rational::new(e_t as i64, v_t as i64),
        pi_numerator: base,
        pi_value_at_n: Rational::new(base as i64, scale),
    }];
    let k = densities.len();
    for i in 1..=k {
        if i < k && densities[i] == densities[i - 1] {
            continue;
        }
        let value = values[i - 1].value as u64;
        if entries.last().is_some_and(|e| e.pi_numerator == value) {
            continue;
        }
        entries.push(PiEntry {
            index: i,
            mu: densities[i - 1],
            pi_numerator: value,
            pi_value_at_n: Rational::new(value as i64, scale),
        });
    }
    Ok(PiSequence { n, entries, nodes_explored: values.iter().map(|v| v.nodes_explored).sum() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{build_special_covering, fano_covering, CoveringType};
    use crate::graph::{contains_subgraph, count_copies, iter_bits};
    use crate::hitting::brute_force;

    fn k(n: usize) -> Graph {
        Graph::complete(n)
    }

    /// Every labeled graph on `n` vertices.
    fn ex_by_enumeration(n: usize, t: &Graph, h: &Graph) -> usize {
        let all = k(n).edges();
        (0u32..1 << all.len())
            .map(|mask| Graph::from_edges(n, &iter_bits(mask as u64).map(|i| all[i]).collect::<Vec<_>>()).unwrap())
            .filter(|g| !contains_subgraph(h, g))
            .map(|g| count_copies(t, &g))
            .max()
            .unwrap()
    }

    fn fe(t: &Graph, h: &Graph) -> CoveringType {
        CoveringType::from_covering(build_special_covering(t, h).unwrap())
    }

    #[test]
    fn ex_matches_enumeration() {
        let g = Guards::default();
        let c4 = Graph::cycle(4);
        for (t, h) in [(k(2), k(3)), (k(3), k(4)), (k(2), c4.clone()), (Graph::path(3), k(3)), (k(3), c4), (k(3), k(7))] {
            for n in t.vertex_count()..=6 {
                let r = ex_exact(n, &t, &h, &g).unwrap();
                assert_eq!(r.value, ex_by_enumeration(n, &t, &h), "n={n} T={t:?} H={h:?}");
                let Witness::Graph(w) = &r.witness else { panic!() };
                assert!(!contains_subgraph(&h, w));
                assert_eq!(count_copies(&t, w), r.value);
            }
        }
    }

    #[test]
    fn ex_golden_values() {
        let g = Guards::default();
        assert_eq!(ex_exact(5, &k(2), &k(3), &g).unwrap().value, 6);
        assert_eq!(ex_exact(6, &k(3), &k(4), &g).unwrap().value, 8);
        assert_eq!(ex_exact(6, &k(3), &k(7), &g).unwrap().value, 20);
        for n in 2..=8 {
            assert_eq!(ex_exact(n, &k(2), &k(3), &g).unwrap().value, n * n / 4);
        }
    }

    #[test]
    fn guards_and_preconditions() {
        let g = Guards::default();
        let err = ex_exact(11, &k(3), &k(4), &g).unwrap_err();
        assert!(err.is_guard());
        assert_eq!(ex_exact(2, &k(3), &k(4), &g).unwrap_err(), ExtremalError::TooSmall { n: 2, v_t: 3 });
        assert_eq!(ex_exact(4, &k(3), &Graph::empty(2), &g).unwrap_err(), ExtremalError::EmptyForbidden);
        let small = Guards { max_pool_exx: 10, ..g };
        assert!(exx_exact(6, &k(3), &[], &small).unwrap_err().is_guard());
    }

    #[test]
    fn exx_trivial_cases() {
        let g = Guards::default();
        for n in 3..=8 {
            assert_eq!(exx_exact(n, &k(3), &[], &g).unwrap().value as u128, crate::graph::count_copies_complete(&k(3), n));
        }
        assert_eq!(exx_exact(5, &k(3), &[fe(&k(3), &k(3))], &g).unwrap().value, 10);
    }

    #[test]
    fn exx_matches_brute_force_on_small_pools() {
        let g = Guards::default();
        let families = [
            vec![fe(&k(3), &k(3))],
            vec![fe(&k(3), &Graph::path(3))],
            vec![fe(&k(3), &Graph::cycle(4))],
            vec![fe(&k(3), &k(3)), fe(&k(3), &Graph::path(3))],
        ];
        for n in 4..=6 {
            for family in &families {
                let inst = ExxInstance::new(n, &k(3), family, &g).unwrap();
                let oracle = brute_force(inst.problem()).unwrap().0;
                assert_eq!(inst.solve().value, oracle, "n={n}");
            }
        }
    }

    #[test]
    fn exx_monotone_and_dominates_ex() {
        let g = Guards::default();
        let mut family = Vec::new();
        let mut last = usize::MAX;
        for h in [k(3), Graph::path(3), Graph::cycle(4)] {
            family.push(fe(&k(3), &h));
            let v = exx_exact(6, &k(3), &family, &g).unwrap().value;
            assert!(v <= last);
            last = v;
        }
        for h in [k(3), k(4)] {
            for n in 3..=7 {
                let ex = ex_exact(n, &k(3), &h, &g).unwrap().value;
                let family = crate::covering::enumerate_covering_types(&k(3), &h).unwrap();
                assert!(exx_exact(n, &k(3), &family, &g).unwrap().value >= ex);
                assert!(exx_exact(n, &k(3), &family[..1], &g).unwrap().value >= ex);
            }
        }
    }

    #[test]
    fn fano_free_triangles_in_k7() {
        let g = Guards::default();
        let fano = CoveringType::from_covering(fano_covering());
        let r = exx_exact(7, &k(3), core::slice::from_ref(&fano), &g).unwrap();
        assert_eq!(r.value, 30);
        let crossing: Vec<SubgraphCopy> = crate::graph::enumerate_copies(&k(3), &k(7))
            .into_iter()
            .filter(|c| c.vertices() & 0b1111 != 0 && c.vertices() & 0b1110000 != 0)
            .collect();
        assert_eq!(crossing.len(), 30);
        assert_eq!(crate::covering::count_covering_instances(&fano, &crossing), 0);
    }

    #[test]
    fn pi_sequence_for_triangles() {
        let g = Guards::default();
        let seq = pi_sequence_surrogate(7, &k(3), &k(4), ResolutionOptions::default(), &g).unwrap();
        let first = &seq.entries[0];
        assert_eq!((first.mu, first.pi_numerator), (Rational::ONE, 35));
        assert_eq!(first.pi_value_at_n, Rational::new(35, 343));
        assert_eq!(first.pi_value_at_n.to_string(), "5/49");
        let last = seq.entries.last().unwrap();
        assert!(last.pi_numerator as usize >= ex_exact(7, &k(3), &k(4), &g).unwrap().value);
        assert!(seq.entries.windows(2).all(|w| w[0].mu < w[1].mu && w[0].pi_value_at_n > w[1].pi_value_at_n));
    }

    #[test]
    fn pi_sequence_dedup_rules() {
        let t = k(3);
        let r = |v: usize| ExtremalResult { n: 5, value: v, witness: Witness::Copies(Vec::new()), elapsed: None, nodes_explored: 1 };
        let d = [Rational::new(3, 2), Rational::new(3, 2), Rational::integer(2), Rational::new(5, 2)];
        // index 1 shares its threshold with index 2; index 3 repeats index 2's value
        let seq = pi_sequence_from_values(5, &t, &d, &[r(9), r(8), r(8), r(4)]).unwrap();
        let got: Vec<_> = seq.entries.iter().map(|e| (e.index, e.mu, e.pi_numerator)).collect();
        assert_eq!(got, [(0, Rational::ONE, 10), (2, Rational::new(3, 2), 8), (4, Rational::new(5, 2), 4)]);
        assert_eq!(seq.nodes_explored, 4);
        let base_only = pi_sequence_from_values(5, &t, &[], &[]).unwrap();
        assert_eq!(base_only.entries.len(), 1);
    }
}
