//! Reproducible `G(n,p)` samples and the constructions run on them: the
//! edge-disjoint core, the two lower-bound subgraphs, the exact per-sample
//! solver, concentration statistics and phase scans.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covering::{t_resolution, ResolutionOptions};
use crate::extremal::{ExtremalError, ExtremalResult, Guards, HFreeInstance};
use crate::graph::{contains_subgraph, count_copies, enumerate_copies, Edge, Graph, SubgraphCopy, MAX_VERTICES};
use crate::probability::expected_copy_count;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("p must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("n = {0} exceeds the vertex cap of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub graph: Graph,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub trial: u64,
}

/// `G(n,p)` from the ChaCha8 stream `trial` of key `seed`; pairs are
/// decided in lexicographic order, one `gen_bool(p)` each.
pub fn sample_gnp(n: usize, p: f64, seed: u64, trial: u64) -> Result<Sample, SimError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::BadProbability(p));
    }
    if n > MAX_VERTICES {
        return Err(SimError::TooManyVertices(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut graph = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(Sample { graph, n, p, seed, trial })
}

/// Removes every edge in two or more T-copies, then every edge in no
/// T-copy of what is left. Each remaining edge lies in exactly one T-copy.
pub fn extract_disjoint_core(g: &Graph, t: &Graph) -> Graph {
    let mut uses: BTreeMap<Edge, usize> = BTreeMap::new();
    for c in enumerate_copies(t, g) {
        for &e in c.edges() {
            *uses.entry(e).or_default() += 1;
        }
    }
    let mut first = g.clone();
    for (&(u, v), &k) in &uses {
        if k > 1 {
            first.remove_edge(u, v);
        }
    }
    let mut core = Graph::empty(g.vertex_count());
    for c in enumerate_copies(t, &first) {
        for &(u, v) in c.edges() {
            core.add_edge(u, v);
        }
    }
    core
}

/// An H-free subgraph with its number of T-copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub graph: Graph,
    pub t_copies: usize,
}

/// Deletes the first edge of the lexicographically first copy of `H'`
/// (`h_sub`, default H) until none is left. `H'` must be a subgraph of H
/// for the result to be H-free.
pub fn lower_bound_easy(g: &Graph, t: &Graph, h: &Graph, h_sub: Option<&Graph>) -> LowerBound {
    let pattern = h_sub.unwrap_or(h);
    let mut graph = g.clone();
    if pattern.edge_count() > 0 {
        while let Some(c) = enumerate_copies(pattern, &graph).into_iter().next() {
            let (u, v) = c.edges()[0];
            graph.remove_edge(u, v);
        }
    }
    let t_copies = count_copies(t, &graph);
    LowerBound { graph, t_copies }
}

/// Keeps the edges of the T-copies of the disjoint core that belong to
/// `pool`, then deletes every edge of every remaining H-copy.
pub fn lower_bound_resolution(g: &Graph, t: &Graph, h: &Graph, pool: &[SubgraphCopy]) -> LowerBound {
    let core = extract_disjoint_core(g, t);
    let pool: BTreeSet<&[Edge]> = pool.iter().map(|c| c.edges()).collect();
    let mut graph = Graph::empty(g.vertex_count());
    for c in enumerate_copies(t, &core) {
        if pool.contains(c.edges()) {
            for &(u, v) in c.edges() {
                graph.add_edge(u, v);
            }
        }
    }
    if h.edge_count() > 0 {
        for c in enumerate_copies(h, &graph.clone()) {
            for &(u, v) in c.edges() {
                graph.remove_edge(u, v);
            }
        }
    }
    debug_assert!(h.edge_count() == 0 || !contains_subgraph(h, &graph));
    let t_copies = count_copies(t, &graph);
    LowerBound { graph, t_copies }
}

/// The exact per-sample instance, after the edge-count guard.
pub fn prepare_sample_solver(g: &Graph, t: &Graph, h: &Graph, guards: &Guards) -> Result<HFreeInstance, ExtremalError> {
    let m = g.edge_count();
    if m > guards.max_edges_sample_solver {
        return Err(ExtremalError::Guard { what: "sample edge count", got: m, limit: guards.max_edges_sample_solver });
    }
    let n = g.vertex_count();
    let complete = m == n * n.saturating_sub(1) / 2;
    let depth = if complete { crate::extremal::EX_SYMMETRY_DEPTH } else { 0 };
    Ok(HFreeInstance::new(g, t, h)?.with_symmetry_depth(depth))
}

/// `ex(g,T,H)`: the most T-copies in an H-free subgraph of `g`.
pub fn max_t_h_free_subgraph(g: &Graph, t: &Graph, h: &Graph, guards: &Guards) -> Result<ExtremalResult, ExtremalError> {
    Ok(prepare_sample_solver(g, t, h, guards)?.solve())
}

/// Mean and sample standard deviation (`n-1` denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, libm::sqrt(ss / (n - 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Concentration {
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    pub expectation: f64,
    /// `mean / expectation`; `None` when the expectation is 0.
    pub ratio: Option<f64>,
}

/// Statistics of `N_T(G(n,p))` over trials `0..trials`.
pub fn concentration_check(t: &Graph, n: usize, p: f64, trials: usize, seed: u64) -> Result<Concentration, SimError> {
    let counts = (0..trials as u64)
        .map(|trial| sample_gnp(n, p, seed, trial).map(|s| count_copies(t, &s.graph) as f64))
        .collect::<Result<Vec<_>, _>>()?;
    concentration_from_counts(t, n, p, &counts)
}

/// [`concentration_check`] from per-trial counts in trial order.
pub fn concentration_from_counts(t: &Graph, n: usize, p: f64, counts: &[f64]) -> Result<Concentration, SimError> {
    if counts.is_empty() {
        return Err(SimError::NoTrials);
    }
    let expectation = expected_copy_count(t, n, p).map_err(|_| SimError::BadProbability(p))?;
    let (mean, std) = mean_std(counts);
    let ratio = (expectation > 0.0).then(|| mean / expectation);
    Ok(Concentration { trials: counts.len(), mean, std, expectation, ratio })
}

/// Per-trial result of a scan: the exact value, or a lower bound when the
/// exact solver refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialValue {
    pub ex: usize,
    pub t_copies: usize,
    pub bound_only: bool,
}

/// Exact `ex(g,T,H)` or, past the guard, the easy lower bound.
pub fn solve_sample(g: &Graph, t: &Graph, h: &Graph, guards: &Guards) -> Result<TrialValue, ExtremalError> {
    let t_copies = count_copies(t, g);
    match max_t_h_free_subgraph(g, t, h, guards) {
        Ok(r) => Ok(TrialValue { ex: r.value, t_copies, bound_only: false }),
        Err(e) if e.is_guard() => Ok(TrialValue { ex: lower_bound_easy(g, t, h, None).t_copies, t_copies, bound_only: true }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub exponent: Rational,
    pub p: f64,
    pub trials: usize,
    pub mean_ex: f64,
    pub std_ex: f64,
    /// `mean_ex / (n^{v_T} p^{e_T})`.
    pub normalized_pi: f64,
    /// `std_ex / (n^{v_T} p^{e_T})`.
    pub normalized_std: f64,
    pub mean_nt: f64,
    /// `v_T/e_T` followed by the resolution's threshold exponents (empty if
    /// the resolution is undefined for the pair).
    pub threshold_markers: Vec<Rational>,
    /// Some trial fell back to the lower-bound construction.
    pub bound_only: bool,
}

/// `p = n^{-a}`.
pub fn p_of_exponent(n: usize, a: Rational) -> f64 {
    if a.is_zero() {
        1.0
    } else {
        libm::pow(n as f64, -a.to_f64())
    }
}

/// Overlay markers for a scan of `(T, H)`.
pub fn scan_markers(t: &Graph, h: &Graph) -> Vec<Rational> {
    match t_resolution(t, h, ResolutionOptions::default()) {
        Ok(r) => core::iter::once(r.base_exponent).chain(r.threshold_exponents).collect(),
        Err(_) => Vec::new(),
    }
}

/// Aggregates per-trial values (in trial order) into a row.
pub fn scan_row(t: &Graph, n: usize, exponent: Rational, values: &[TrialValue], markers: &[Rational]) -> ScanRow {
    let p = p_of_exponent(n, exponent);
    let ex: Vec<f64> = values.iter().map(|v| v.ex as f64).collect();
    let nt: Vec<f64> = values.iter().map(|v| v.t_copies as f64).collect();
    let (mean_ex, std_ex) = mean_std(&ex);
    let (mean_nt, _) = mean_std(&nt);
    let scale = libm::pow(n as f64, t.vertex_count() as f64) * libm::pow(p, t.edge_count() as f64);
    let (normalized_pi, normalized_std) = if scale > 0.0 { (mean_ex / scale, std_ex / scale) } else { (0.0, 0.0) };
    ScanRow {
        exponent,
        p,
        trials: values.len(),
        mean_ex,
        std_ex,
        normalized_pi,
        normalized_std,
        mean_nt,
        threshold_markers: markers.to_vec(),
        bound_only: values.iter().any(|v| v.bound_only),
    }
}

/// For each exponent `a`, samples `G(n, n^{-a})` for trials `0..trials` and
/// solves each sample exactly. Identical samples are solved once.
pub fn phase_scan(
    t: &Graph,
    h: &Graph,
    n: usize,
    exponents: &[Rational],
    trials: usize,
    seed: u64,
    guards: &Guards,
) -> Result<Vec<ScanRow>, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let markers = scan_markers(t, h);
    let mut rows = Vec::with_capacity(exponents.len());
    for &a in exponents {
        let p = p_of_exponent(n, a);
        let mut solved: BTreeMap<Graph, TrialValue> = BTreeMap::new();
        let mut values = Vec::with_capacity(trials);
        for trial in 0..trials as u64 {
            let g = sample_gnp(n, p, seed, trial)?.graph;
            let v = match solved.get(&g) {
                Some(v) => *v,
                None => {
                    let v = solve_sample(&g, t, h, guards)?;
                    solved.insert(g, v);
                    v
                }
            };
            values.push(v);
        }
        rows.push(scan_row(t, n, a, &values, &markers));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::iter_bits;

    fn k(n: usize) -> Graph {
        Graph::complete(n)
    }

    fn two_triangles_sharing_an_edge() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (1, 3), (0, 3)]).unwrap()
    }

    #[test]
    fn sample_extremes_and_reproducibility() {
        assert_eq!(sample_gnp(8, 0.0, 1, 0).unwrap().graph, Graph::empty(8));
        assert_eq!(sample_gnp(8, 1.0, 1, 0).unwrap().graph, k(8));
        let a = sample_gnp(30, 0.3, 42, 7).unwrap();
        assert_eq!(a, sample_gnp(30, 0.3, 42, 7).unwrap());
        assert_ne!(a.graph, sample_gnp(30, 0.3, 42, 8).unwrap().graph);
        assert_ne!(a.graph, sample_gnp(30, 0.3, 43, 7).unwrap().graph);
        assert!(sample_gnp(8, -0.1, 1, 0).is_err());
        assert!(sample_gnp(8, f64::NAN, 1, 0).is_err());
    }

    #[test]
    fn sample_edge_count_statistics() {
        let (n, p, trials) = (50, 0.3, 1000);
        let pairs = (n * (n - 1) / 2) as f64;
        let counts: Vec<f64> = (0..trials).map(|i| sample_gnp(n, p, 5, i).unwrap().graph.edge_count() as f64).collect();
        let (mean, _) = mean_std(&counts);
        let sigma = libm::sqrt(pairs * p * (1.0 - p) / trials as f64);
        assert!((mean - pairs * p).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn core_examples() {
        let k3 = k(3);
        assert_eq!(extract_disjoint_core(&two_triangles_sharing_an_edge(), &k3).edge_count(), 0);
        let disjoint = k3.disjoint_union(&k3);
        assert_eq!(extract_disjoint_core(&disjoint, &k3), disjoint);
        assert_eq!(extract_disjoint_core(&k(4), &k3).edge_count(), 0);
    }

    #[test]
    fn core_edges_lie_in_exactly_one_copy() {
        for trial in 0..40 {
            let g = sample_gnp(20, 0.3, 11, trial).unwrap().graph;
            let core = extract_disjoint_core(&g, &k(3));
            let copies = enumerate_copies(&k(3), &core);
            for e in core.edges() {
                assert_eq!(copies.iter().filter(|c| c.contains_edge(e)).count(), 1);
            }
        }
    }

    #[test]
    fn lower_bound_easy_examples() {
        let lb = lower_bound_easy(&k(4), &k(3), &k(4), None);
        assert_eq!((lb.graph.edge_count(), lb.t_copies), (5, 2));
        let c5 = Graph::cycle(5);
        assert_eq!(lower_bound_easy(&c5, &k(2), &k(3), None).graph, c5);
        for trial in 0..100 {
            let g = sample_gnp(20, 0.2, 3, trial).unwrap().graph;
            assert!(!contains_subgraph(&k(4), &lower_bound_easy(&g, &k(3), &k(4), None).graph));
        }
        // deleting along a subgraph of H also yields an H-free graph
        let lb = lower_bound_easy(&k(6), &k(3), &k(4), Some(&k(3)));
        assert_eq!(lb.t_copies, 0);
        assert!(!contains_subgraph(&k(4), &lb.graph));
    }

    #[test]
    fn lower_bound_resolution_examples() {
        let k3 = k(3);
        let disjoint = k3.disjoint_union(&k3);
        let all = enumerate_copies(&k3, &k(6));
        let lb = lower_bound_resolution(&disjoint, &k3, &k(4), &all);
        assert_eq!(lb.graph, extract_disjoint_core(&disjoint, &k3));
        assert_eq!(lower_bound_resolution(&disjoint, &k3, &k(4), &[]).graph.edge_count(), 0);
        let crossing: Vec<SubgraphCopy> =
            all_triangles(7).into_iter().filter(|c| c.vertices() & 0b1111 != 0 && c.vertices() & 0b1110000 != 0).collect();
        let lb = lower_bound_resolution(&k(7), &k3, &k(7), &crossing);
        assert!(!contains_subgraph(&k(7), &lb.graph));
        assert!(enumerate_copies(&k3, &lb.graph).iter().all(|c| crossing.contains(c)));
    }

    fn all_triangles(n: usize) -> Vec<SubgraphCopy> {
        enumerate_copies(&k(3), &k(n))
    }

    /// Every edge subset of `g`.
    fn best_subgraph(g: &Graph, t: &Graph, h: &Graph) -> usize {
        let edges = g.edges();
        (0u32..1 << edges.len())
            .map(|m| Graph::from_edges(g.vertex_count(), &iter_bits(m as u64).map(|i| edges[i]).collect::<Vec<_>>()).unwrap())
            .filter(|s| !contains_subgraph(h, s))
            .map(|s| count_copies(t, &s))
            .max()
            .unwrap()
    }

    #[test]
    fn sample_solver_examples() {
        let g = Guards::default();
        assert_eq!(max_t_h_free_subgraph(&k(5), &k(2), &k(3), &g).unwrap().value, 6);
        assert_eq!(max_t_h_free_subgraph(&k(4), &k(3), &k(4), &g).unwrap().value, 2);
        assert_eq!(best_subgraph(&k(4), &k(3), &k(4)), 2);
        let c5 = Graph::cycle(5);
        let r = max_t_h_free_subgraph(&c5, &k(2), &k(3), &g).unwrap();
        assert_eq!((r.value, r.witness), (5, crate::extremal::Witness::Graph(c5)));
        assert!(max_t_h_free_subgraph(&k(10), &k(3), &k(4), &Guards { max_edges_sample_solver: 40, ..g }).unwrap_err().is_guard());
    }

    #[test]
    fn sample_solver_sandwich() {
        let g = Guards::default();
        for trial in 0..30 {
            let host = sample_gnp(7, 0.6, 9, trial).unwrap().graph;
            if host.edge_count() > 16 {
                continue;
            }
            let exact = max_t_h_free_subgraph(&host, &k(3), &k(4), &g).unwrap().value;
            assert_eq!(exact, best_subgraph(&host, &k(3), &k(4)));
            assert!(lower_bound_easy(&host, &k(3), &k(4), None).t_copies <= exact);
            assert!(lower_bound_resolution(&host, &k(3), &k(4), &all_triangles(7)).t_copies <= exact);
        }
    }

    #[test]
    fn concentration_extremes() {
        let c = concentration_check(&k(3), 10, 1.0, 5, 1).unwrap();
        assert_eq!((c.mean, c.std, c.ratio), (120.0, 0.0, Some(1.0)));
        let c = concentration_check(&k(3), 10, 0.0, 5, 1).unwrap();
        assert_eq!((c.mean, c.ratio), (0.0, None));
        assert_eq!(concentration_check(&k(3), 10, 0.5, 0, 1), Err(SimError::NoTrials));
    }

    #[test]
    fn scan_endpoints() {
        let g = Guards::default();
        let (t, h) = (k(3), k(4));
        let exps = [Rational::ZERO, Rational::new(3, 2)];
        let rows = phase_scan(&t, &h, 7, &exps, 10, 3, &g).unwrap();
        let ex = crate::extremal::ex_exact(7, &t, &h, &g).unwrap().value as f64;
        assert_eq!(rows[0].p, 1.0);
        assert_eq!(rows[0].std_ex, 0.0);
        assert_eq!(rows[0].normalized_pi, ex / 343.0);
        assert!(rows[1].mean_ex <= 0.1);
        assert_eq!(rows[0].threshold_markers, [Rational::ONE, Rational::new(7, 15)]);
        assert!(!rows[0].bound_only);
    }

    #[test]
    fn mean_std_basics() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - libm::sqrt(5.0 / 3.0)).abs() < 1e-15);
    }
}
