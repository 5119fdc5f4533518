//! Expected copy counts, the `Ψ_T` minimum and Janson's lower-tail bound.

use alloc::vec::Vec;

use crate::density::two_density;
use crate::graph::{count_copies_complete, iter_bits, Graph, SubgraphCopy};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProbabilityError {
    #[error("p must lie in {range}, got {p}")]
    BadProbability { p: f64, range: &'static str },
    #[error("T must have at least one edge")]
    EmptyPattern,
    #[error("shortfall must lie in [0, mu = {mu}], got {t}")]
    BadShortfall { t: f64, mu: f64 },
}

fn check_p(p: f64, allow_zero: bool) -> Result<(), ProbabilityError> {
    let ok = if allow_zero { (0.0..=1.0).contains(&p) } else { p > 0.0 && p <= 1.0 };
    if ok {
        Ok(())
    } else {
        Err(ProbabilityError::BadProbability { p, range: if allow_zero { "[0, 1]" } else { "(0, 1]" } })
    }
}

/// `n^v p^e` as evaluated everywhere in this module.
fn weight(n: usize, v: usize, e: usize, p: f64) -> f64 {
    libm::pow(n as f64, v as f64) * libm::pow(p, e as f64)
}

/// `N_pattern(K_n) p^{e_pattern}`.
pub fn expected_copy_count(pattern: &Graph, n: usize, p: f64) -> Result<f64, ProbabilityError> {
    check_p(p, true)?;
    Ok(count_copies_complete(pattern, n) as f64 * libm::pow(p, pattern.edge_count() as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiReport {
    pub value: f64,
    /// The subgraph `T'` attaining the minimum, without isolated vertices.
    pub witness: Graph,
}

/// `Ψ_T = min { n^{v(T')} p^{e(T')} }` over subgraphs `T'` with at least one
/// edge, each spanned by its edges. Ties keep the smallest edge subset in
/// bitmask order.
pub fn psi_t(t: &Graph, n: usize, p: f64) -> Result<PsiReport, ProbabilityError> {
    check_p(p, false)?;
    let edges = t.edges();
    if edges.is_empty() {
        return Err(ProbabilityError::EmptyPattern);
    }
    assert!(edges.len() < 32, "psi_t enumerates edge subsets");
    let mut best: Option<(f64, u32)> = None;
    for mask in 1u32..(1 << edges.len()) {
        let support = iter_bits(mask as u64).fold(0u64, |m, i| m | 1 << edges[i].0 | 1 << edges[i].1);
        let w = weight(n, support.count_ones() as usize, mask.count_ones() as usize, p);
        if best.is_none_or(|(b, _)| w < b) {
            best = Some((w, mask));
        }
    }
    let (value, mask) = best.unwrap();
    let chosen: Vec<_> = iter_bits(mask as u64).map(|i| edges[i]).collect();
    Ok(PsiReport { value, witness: Graph::spanned_by(&chosen) })
}

/// The closed form for 2-balanced `t`: `n^{v_T} p^{e_T}` if
/// `p <= n^{-1/m_2(T)}`, else `n^2 p`. A single edge gives `n^2 p`.
pub fn psi_t_closed_form(t: &Graph, n: usize, p: f64) -> Result<f64, ProbabilityError> {
    check_p(p, false)?;
    let t = t.without_isolated();
    let (v, e) = (t.vertex_count(), t.edge_count());
    if e == 0 {
        return Err(ProbabilityError::EmptyPattern);
    }
    let edge_only = weight(n, 2, 1, p);
    let Ok(m2) = two_density(&t) else {
        return Ok(edge_only);
    };
    let threshold = libm::pow(n as f64, -1.0 / m2.value.to_f64());
    Ok(if p <= threshold { weight(n, v, e, p) } else { edge_only })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JansonReport {
    pub mu: f64,
    pub delta: f64,
    pub t: f64,
    pub bound: f64,
}

fn shared_edges(a: &SubgraphCopy, b: &SubgraphCopy) -> usize {
    a.edges().iter().filter(|&&e| b.contains_edge(e)).count()
}

/// `Σ_{j != i, T_j ∩ T_i ≠ ∅} p^{e(T_i ∪ T_j)}`: the terms of Δ with first
/// index `i`, summed in index order.
pub fn janson_delta_row(pool: &[SubgraphCopy], i: usize, p: f64) -> f64 {
    let a = &pool[i];
    let mut sum = 0.0;
    for (j, b) in pool.iter().enumerate() {
        if j == i || a.vertices() & b.vertices() == 0 {
            continue;
        }
        let shared = shared_edges(a, b);
        if shared > 0 {
            sum += libm::pow(p, (a.edge_count() + b.edge_count() - shared) as f64);
        }
    }
    sum
}

/// Pairwise (tree) sum: halves are summed recursively, so the result only
/// depends on the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// `μ = Σ p^{e(T_i)}` as a pairwise sum.
pub fn janson_mu(pool: &[SubgraphCopy], p: f64) -> f64 {
    let terms: Vec<f64> = pool.iter().map(|c| libm::pow(p, c.edge_count() as f64)).collect();
    pairwise_sum(&terms)
}

/// Janson's bound `exp(-t^2 / (2(μ + Δ)))` from precomputed parts.
pub fn janson_from_parts(mu: f64, delta: f64, t: f64) -> Result<JansonReport, ProbabilityError> {
    if !(0.0..=mu).contains(&t) {
        return Err(ProbabilityError::BadShortfall { t, mu });
    }
    let denom = 2.0 * (mu + delta);
    let bound = if denom > 0.0 { libm::exp(-t * t / denom) } else { 1.0 };
    Ok(JansonReport { mu, delta, t, bound: bound.clamp(0.0, 1.0) })
}

/// `P(X <= μ - t)` bound for `X` the number of pool copies present in
/// `G(n,p)`.
pub fn janson_lower_tail(pool: &[SubgraphCopy], p: f64, shortfall: f64) -> Result<JansonReport, ProbabilityError> {
    check_p(p, false)?;
    let mu = janson_mu(pool, p);
    let rows: Vec<f64> = (0..pool.len()).map(|i| janson_delta_row(pool, i, p)).collect();
    janson_from_parts(mu, pairwise_sum(&rows), shortfall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_copies;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
    }

    #[test]
    fn expected_counts() {
        let k3 = Graph::complete(3);
        assert!(close(expected_copy_count(&k3, 10, 0.5).unwrap(), 15.0));
        assert_eq!(expected_copy_count(&Graph::cycle(4), 5, 1.0).unwrap(), 15.0);
        assert!(expected_copy_count(&k3, 10, 1.5).is_err());
    }

    #[test]
    fn psi_examples() {
        let k3 = Graph::complete(3);
        let low = psi_t(&k3, 100, 0.01).unwrap();
        assert!(close(low.value, 1.0));
        assert_eq!(low.witness, k3);
        let high = psi_t(&k3, 100, 0.5).unwrap();
        assert!(close(high.value, 5000.0));
        assert_eq!(high.witness, Graph::complete(2));
    }

    #[test]
    fn psi_matches_closed_form_on_a_grid() {
        for t in [Graph::complete(3), Graph::complete(4), Graph::cycle(5), Graph::cycle(4), Graph::complete_bipartite(2, 3)] {
            for n in [20, 50, 100] {
                for i in 0..40 {
                    let p = libm::pow(10.0, -4.0 + 4.0 * i as f64 / 39.0);
                    let a = psi_t(&t, n, p).unwrap().value;
                    let b = psi_t_closed_form(&t, n, p).unwrap();
                    assert!(close(a, b), "{t:?} n={n} p={p}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn janson_examples() {
        let tri = |a, b, c| SubgraphCopy::new([(a, b), (b, c), (a, c)], 0);
        let one = janson_lower_tail(&[tri(0, 1, 2)], 0.5, 0.125).unwrap();
        assert_eq!((one.mu, one.delta), (0.125, 0.0));
        assert!(close(one.bound, libm::exp(-1.0 / 16.0)));
        for p in [0.1, 0.9] {
            assert_eq!(janson_lower_tail(&[tri(0, 1, 2), tri(3, 4, 5)], p, 0.0).unwrap().delta, 0.0);
        }
        let sharing = janson_lower_tail(&[tri(0, 1, 2), tri(0, 1, 3)], 0.5, 0.1).unwrap();
        assert_eq!(sharing.delta, 1.0 / 16.0);
        assert!(janson_lower_tail(&[tri(0, 1, 2)], 0.5, 0.2).is_err());
    }

    #[test]
    fn janson_monotone() {
        let pool = enumerate_copies(&Graph::complete(3), &Graph::complete(6));
        let mu = janson_mu(&pool, 0.5);
        let bounds: Vec<f64> = (0..=10).map(|i| janson_lower_tail(&pool, 0.5, mu * i as f64 / 10.0).unwrap().bound).collect();
        assert!(bounds.windows(2).all(|w| w[1] <= w[0]));
        let a = janson_from_parts(mu, 1.0, mu / 2.0).unwrap().bound;
        let b = janson_from_parts(mu, 2.0, mu / 2.0).unwrap().bound;
        assert!(b > a);
    }

    #[test]
    fn pairwise_sum_is_exact_on_small_integers() {
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
