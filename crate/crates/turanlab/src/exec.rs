//! Thread pools and the parallel drivers around the core solvers.
//!
//! Every driver returns the same value at any thread count. Witnesses and
//! node counts of the branch-and-bound solvers can vary with scheduling
//! unless the executor is deterministic, in which case they run the
//! sequential search.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use turanlab_core::covering::{
    resolution_from_types, resolution_search, CoveringError, CoveringSearch, CoveringType, Resolution,
    ResolutionOptions,
};
use turanlab_core::extremal::{
    pi_sequence_from_values, prepare_ex, ExtremalError, ExtremalResult, ExxInstance, Guards, HFreeInstance,
    PiSequence,
};
use turanlab_core::hitting::{merge_outcomes, Search, SearchOutcome, SharedBest};
use turanlab_core::probability::{janson_delta_row, janson_from_parts, janson_mu, pairwise_sum, JansonReport};
use turanlab_core::probability::ProbabilityError;
use turanlab_core::sim::{
    concentration_from_counts, p_of_exponent, sample_gnp, scan_markers, scan_row, solve_sample, Concentration,
    ScanRow, SimError, TrialValue,
};
use turanlab_core::{Graph, Rational, SubgraphCopy};

/// Where and how drivers run.
pub struct Exec {
    pool: rayon::ThreadPool,
    deterministic: bool,
}

impl Exec {
    /// A pool of `threads` workers (`0` means one per core).
    pub fn new(threads: usize, deterministic: bool) -> Self {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        Exec { pool, deterministic }
    }

    pub fn sequential() -> Self {
        Exec::new(1, true)
    }

    pub fn deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

/// Incumbent value shared between branch searches; `0` means none yet.
#[derive(Default)]
pub struct AtomicBest(AtomicU64);

impl SharedBest for AtomicBest {
    fn get(&self) -> Option<usize> {
        match self.0.load(Ordering::Relaxed) {
            0 => None,
            v => Some(v as usize - 1),
        }
    }

    fn offer(&self, value: usize) {
        self.0.fetch_max(value as u64 + 1, Ordering::Relaxed);
    }
}

/// Runs a search sequentially, or split over its root branches with a
/// shared incumbent.
fn run_search<'a>(exec: &Exec, make: impl Fn() -> Search<'a> + Sync, incumbent: usize) -> SearchOutcome {
    if exec.deterministic || exec.threads() == 1 {
        return make().run();
    }
    let branches = make().root_branches();
    let shared = AtomicBest::default();
    shared.offer(incumbent);
    let outcomes: Vec<SearchOutcome> =
        exec.install(|| branches.par_iter().map(|b| make().with_shared(&shared).run_branch(b)).collect());
    merge_outcomes(outcomes)
}

fn timed(exec: &Exec, start: Instant, mut r: ExtremalResult) -> ExtremalResult {
    r.elapsed = (!exec.deterministic).then(|| start.elapsed());
    r
}

pub fn solve_hfree(exec: &Exec, inst: &HFreeInstance) -> ExtremalResult {
    let start = Instant::now();
    let incumbent = inst.problem().value_of(&inst.incumbent());
    let outcome = run_search(exec, || inst.search(), incumbent);
    timed(exec, start, inst.result(outcome))
}

pub fn solve_exx(exec: &Exec, inst: &ExxInstance) -> ExtremalResult {
    let start = Instant::now();
    let incumbent = inst.problem().value_of(&inst.incumbent());
    let outcome = run_search(exec, || inst.search(), incumbent);
    timed(exec, start, inst.result(outcome))
}

/// `ex(n,T,H)`.
pub fn ex(exec: &Exec, n: usize, t: &Graph, h: &Graph, guards: &Guards) -> Result<ExtremalResult, ExtremalError> {
    Ok(solve_hfree(exec, &prepare_ex(n, t, h, guards)?))
}

/// `êx(n,T,𝓕)`.
pub fn exx(
    exec: &Exec,
    n: usize,
    t: &Graph,
    family: &[CoveringType],
    guards: &Guards,
) -> Result<ExtremalResult, ExtremalError> {
    Ok(solve_exx(exec, &ExxInstance::new(n, t, family, guards)?))
}

/// Explores the first copies in parallel; merging in branch order keeps the
/// representatives identical to a sequential run.
pub fn run_covering_search(exec: &Exec, search: &CoveringSearch) -> Vec<CoveringType> {
    let roots = search.root_branches();
    let parts: Vec<_> = exec.install(|| roots.par_iter().map(|first| search.explore(first)).collect());
    let mut all = BTreeMap::new();
    for mut part in parts {
        all.append(&mut part);
    }
    search.finish(all)
}

/// All covering types of `H` by `T`, optionally only those of T-density at
/// most `max_density`.
pub fn covering_types(
    exec: &Exec,
    t: &Graph,
    h: &Graph,
    max_density: Option<Rational>,
) -> Result<Vec<CoveringType>, CoveringError> {
    let mut search = CoveringSearch::new(t, h)?;
    if let Some(b) = max_density {
        search = search.with_bound(b);
    }
    Ok(run_covering_search(exec, &search))
}

pub fn resolution(
    exec: &Exec,
    t: &Graph,
    h: &Graph,
    options: ResolutionOptions,
) -> Result<Resolution, CoveringError> {
    let search = resolution_search(t, h, options)?;
    resolution_from_types(t, run_covering_search(exec, &search))
}

/// The `(μ, π)` surrogate sequence at `n`.
pub fn pi_sequence(
    exec: &Exec,
    n: usize,
    t: &Graph,
    h: &Graph,
    options: ResolutionOptions,
    guards: &Guards,
) -> Result<PiSequence, ExtremalError> {
    let r = resolution(exec, t, h, options)?;
    let values = (1..=r.len()).map(|i| exx(exec, n, t, &r.types[..i], guards)).collect::<Result<Vec<_>, _>>()?;
    pi_sequence_from_values(n, t, &r.densities, &values)
}

/// Rows of Δ in parallel, reduced by a pairwise sum in index order.
pub fn janson(exec: &Exec, pool: &[SubgraphCopy], p: f64, shortfall: f64) -> Result<JansonReport, ProbabilityError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(ProbabilityError::BadProbability { p, range: "(0, 1]" });
    }
    let rows: Vec<f64> = exec.install(|| (0..pool.len()).into_par_iter().map(|i| janson_delta_row(pool, i, p)).collect());
    janson_from_parts(janson_mu(pool, p), pairwise_sum(&rows), shortfall)
}

/// Monte-Carlo frequency of `{X <= μ - t}`, with `X` the number of pool
/// copies present in `G(n,p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerTailCheck {
    pub trials: usize,
    pub frequency: f64,
    /// Standard error of a frequency whose true value is the bound.
    pub sigma: f64,
}

pub fn janson_check(
    exec: &Exec,
    pool: &[SubgraphCopy],
    n: usize,
    report: &JansonReport,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<LowerTailCheck, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let cutoff = report.mu - report.t;
    let hits: Vec<bool> = exec.install(|| {
        (0..trials as u64)
            .into_par_iter()
            .map(|trial| {
                let g = sample_gnp(n, p, seed, trial)?.graph;
                let x = pool.iter().filter(|c| c.edges().iter().all(|&(u, v)| g.has_edge(u, v))).count();
                Ok(x as f64 <= cutoff)
            })
            .collect::<Result<_, SimError>>()
    })?;
    let frequency = hits.iter().filter(|&&h| h).count() as f64 / trials as f64;
    let b = report.bound;
    Ok(LowerTailCheck { trials, frequency, sigma: (b * (1.0 - b) / trials as f64).sqrt() })
}

/// `N_T` over `trials` samples of `G(n,p)`.
pub fn concentration(exec: &Exec, t: &Graph, n: usize, p: f64, trials: usize, seed: u64) -> Result<Concentration, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let counts: Vec<f64> = exec.install(|| {
        (0..trials as u64)
            .into_par_iter()
            .map(|trial| Ok(turanlab_core::graph::count_copies(t, &sample_gnp(n, p, seed, trial)?.graph) as f64))
            .collect::<Result<_, SimError>>()
    })?;
    concentration_from_counts(t, n, p, &counts)
}

/// Phase scan: all samples are drawn in parallel, each distinct graph is
/// solved once, and rows are aggregated in trial order.
pub fn phase_scan(
    exec: &Exec,
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
    let jobs: Vec<(usize, u64)> = (0..exponents.len()).flat_map(|i| (0..trials as u64).map(move |k| (i, k))).collect();
    let samples: Vec<Graph> = exec.install(|| {
        jobs.par_iter()
            .map(|&(i, k)| Ok(sample_gnp(n, p_of_exponent(n, exponents[i]), seed, k)?.graph))
            .collect::<Result<_, SimError>>()
    })?;
    let mut distinct: Vec<&Graph> = samples.iter().collect();
    distinct.sort();
    distinct.dedup();
    let solved: Vec<TrialValue> = exec.install(|| {
        distinct.par_iter().map(|g| solve_sample(g, t, h, guards)).collect::<Result<_, ExtremalError>>()
    })?;
    let lookup: BTreeMap<&Graph, TrialValue> = distinct.into_iter().zip(solved).collect();
    let markers = scan_markers(t, h);
    Ok(exponents
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let values: Vec<TrialValue> = samples[i * trials..(i + 1) * trials].iter().map(|g| lookup[g]).collect();
            scan_row(t, n, a, &values, &markers)
        })
        .collect())
}
