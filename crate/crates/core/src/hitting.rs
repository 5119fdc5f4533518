//! Exact branch and bound for "delete items to hit every constraint while
//! keeping as many value sets intact as possible".
//!
//! All three exact solvers reduce to this:
//!
//! * `ex(n,T,H)` and the per-sample solver: items are host edges, value sets
//!   are T-copies, constraints are H-copies;
//! * `êx(n,T,𝓕)`: items are T-copies of `K_n`, every item is its own value
//!   set, constraints are the covering instances of 𝓕.
//!
//! Branching picks an unhit constraint with the fewest deletable items and
//! tries each of them, protecting the ones already tried so the branches
//! are disjoint. The bound is the number of intact value sets minus a
//! packing lower bound on the further loss: constraints are taken greedily,
//! each charged its cheapest deletion counted only over value sets no
//! earlier constraint could have destroyed.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::CanonicalLabel;

/// Largest item universe.
pub const MAX_ITEMS: usize = 256;

const WORDS: usize = MAX_ITEMS / 64;

/// Fixed-width item bitset.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemSet([u64; WORDS]);

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet([0; WORDS]);

    pub fn from_items(items: impl IntoIterator<Item = usize>) -> ItemSet {
        let mut s = ItemSet::EMPTY;
        for i in items {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &ItemSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn union(&self, other: &ItemSet) -> ItemSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
        out
    }

    #[inline]
    pub fn minus(&self, other: &ItemSet) -> ItemSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| crate::graph::iter_bits(bits).map(move |b| w * 64 + b))
    }
}

impl core::fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HittingError {
    #[error("{0} items exceed the solver limit of {MAX_ITEMS}")]
    TooManyItems(usize),
    #[error("constraint {0} is empty and can never be hit")]
    EmptyConstraint(usize),
    #[error("set {0} refers to an item outside the universe")]
    ItemOutOfRange(usize),
}

#[derive(Debug, Clone)]
pub struct HittingProblem {
    items: usize,
    values: Vec<ItemSet>,
    constraints: Vec<ItemSet>,
    item_values: Vec<Vec<u32>>,
}

impl HittingProblem {
    pub fn new(items: usize, values: Vec<ItemSet>, constraints: Vec<ItemSet>) -> Result<Self, HittingError> {
        if items > MAX_ITEMS {
            return Err(HittingError::TooManyItems(items));
        }
        if let Some(i) = constraints.iter().position(ItemSet::is_empty) {
            return Err(HittingError::EmptyConstraint(i));
        }
        let universe = ItemSet::from_items(0..items);
        if let Some(i) = values.iter().chain(&constraints).position(|s| !s.minus(&universe).is_empty()) {
            return Err(HittingError::ItemOutOfRange(i));
        }
        let mut item_values = vec![Vec::new(); items];
        for (v, set) in values.iter().enumerate() {
            for i in set.iter() {
                item_values[i].push(v as u32);
            }
        }
        Ok(HittingProblem { items, values, constraints, item_values })
    }

    pub fn item_count(&self) -> usize {
        self.items
    }

    pub fn value_count(&self) -> usize {
        self.values.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[ItemSet] {
        &self.constraints
    }

    /// Number of value sets disjoint from `deleted`.
    pub fn value_of(&self, deleted: &ItemSet) -> usize {
        self.values.iter().filter(|v| !v.intersects(deleted)).count()
    }

    /// Every constraint meets `deleted`.
    pub fn is_feasible(&self, deleted: &ItemSet) -> bool {
        self.constraints.iter().all(|c| c.intersects(deleted))
    }
}

/// Best value known across cooperating searches (e.g. threads).
pub trait SharedBest: Sync {
    fn get(&self) -> Option<usize>;
    fn offer(&self, value: usize);
}

/// Canonical key of a search state `(deleted, protected)` under the
/// problem's symmetry group. Equal keys must mean equivalent subproblems.
pub trait StateKey {
    fn key(&self, deleted: &ItemSet, protected: &ItemSet) -> CanonicalLabel;
}

/// A subtree root: deletions made so far and items fixed as kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub deleted: ItemSet,
    pub protected: ItemSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Best value found, or `None` if the (sub)problem has no feasible
    /// deletion set and no incumbent was supplied.
    pub best: Option<(usize, ItemSet)>,
    pub nodes: u64,
}

pub struct Search<'a> {
    problem: &'a HittingProblem,
    best: Option<(usize, ItemSet)>,
    shared: Option<&'a dyn SharedBest>,
    symmetry: Option<(&'a dyn StateKey, usize)>,
    seen: BTreeSet<CanonicalLabel>,
    nodes: u64,
    hits: Vec<u16>,
    alive: usize,
    claimed: Vec<u64>,
}

impl<'a> Search<'a> {
    pub fn new(problem: &'a HittingProblem) -> Self {
        Search {
            problem,
            best: None,
            shared: None,
            symmetry: None,
            seen: BTreeSet::new(),
            nodes: 0,
            hits: vec![0; problem.values.len()],
            alive: problem.values.len(),
            claimed: vec![0; problem.values.len().div_ceil(64)],
        }
    }

    /// Starts from a known feasible deletion set. Panics if it is infeasible.
    pub fn with_incumbent(mut self, deleted: ItemSet) -> Self {
        assert!(self.problem.is_feasible(&deleted), "incumbent must hit every constraint");
        let value = self.problem.value_of(&deleted);
        if self.best.is_none_or(|(b, _)| value > b) {
            self.best = Some((value, deleted));
        }
        self
    }

    pub fn with_shared(mut self, shared: &'a dyn SharedBest) -> Self {
        self.shared = Some(shared);
        self
    }

    /// Rejects states isomorphic to one already expanded, up to `depth`
    /// deletions deep.
    pub fn with_symmetry(mut self, key: &'a dyn StateKey, depth: usize) -> Self {
        self.symmetry = Some((key, depth));
        self
    }

    /// Children of the root node, for splitting the search across workers.
    /// Returns the root itself when it needs no branching.
    pub fn root_branches(&self) -> Vec<Branch> {
        let root = Branch { deleted: ItemSet::EMPTY, protected: ItemSet::EMPTY };
        let Some(c) = self.pick_constraint(&root.deleted, &root.protected) else {
            return vec![root];
        };
        let mut out = Vec::new();
        let mut protected = ItemSet::EMPTY;
        for item in self.branch_order(&self.problem.constraints[c], &protected) {
            let mut deleted = ItemSet::EMPTY;
            deleted.insert(item);
            out.push(Branch { deleted, protected });
            protected.insert(item);
        }
        out
    }

    pub fn run(self) -> SearchOutcome {
        self.run_branch(&Branch { deleted: ItemSet::EMPTY, protected: ItemSet::EMPTY })
    }

    pub fn run_branch(mut self, branch: &Branch) -> SearchOutcome {
        for item in branch.deleted.iter() {
            self.delete(item);
        }
        let depth = branch.deleted.len();
        self.dfs(branch.deleted, branch.protected, depth);
        SearchOutcome { best: self.best, nodes: self.nodes }
    }

    fn incumbent(&self) -> Option<usize> {
        let local = self.best.map(|(v, _)| v);
        match self.shared.and_then(|s| s.get()) {
            Some(s) => Some(local.map_or(s, |l| l.max(s))),
            None => local,
        }
    }

    fn delete(&mut self, item: usize) {
        for &v in &self.problem.item_values[item] {
            let h = &mut self.hits[v as usize];
            if *h == 0 {
                self.alive -= 1;
            }
            *h += 1;
        }
    }

    fn restore(&mut self, item: usize) {
        for &v in &self.problem.item_values[item] {
            let h = &mut self.hits[v as usize];
            *h -= 1;
            if *h == 0 {
                self.alive += 1;
            }
        }
    }

    /// Unhit constraint with the fewest deletable items; `Some(usize::MAX)`
    /// signals a constraint that can no longer be hit.
    fn pick_constraint(&self, deleted: &ItemSet, protected: &ItemSet) -> Option<usize> {
        let mut chosen = None;
        let mut fewest = usize::MAX;
        for (i, c) in self.problem.constraints.iter().enumerate() {
            if c.intersects(deleted) {
                continue;
            }
            let free = c.minus(protected).len();
            if free == 0 {
                return Some(usize::MAX);
            }
            if free < fewest {
                fewest = free;
                chosen = Some(i);
            }
        }
        chosen
    }

    fn cost(&self, item: usize) -> usize {
        self.problem.item_values[item].iter().filter(|&&v| self.hits[v as usize] == 0).count()
    }

    fn branch_order(&self, constraint: &ItemSet, protected: &ItemSet) -> Vec<usize> {
        let mut items: Vec<(usize, usize)> = constraint.minus(protected).iter().map(|i| (self.cost(i), i)).collect();
        items.sort_unstable();
        items.into_iter().map(|(_, i)| i).collect()
    }

    fn packing_bound(&mut self, deleted: &ItemSet, protected: &ItemSet) -> usize {
        self.claimed.iter_mut().for_each(|w| *w = 0);
        let mut total = 0;
        for c in &self.problem.constraints {
            if c.intersects(deleted) {
                continue;
            }
            let free = c.minus(protected);
            let mut cheapest = usize::MAX;
            for item in free.iter() {
                let fresh = self.problem.item_values[item]
                    .iter()
                    .filter(|&&v| self.hits[v as usize] == 0 && self.claimed[v as usize / 64] >> (v % 64) & 1 == 0)
                    .count();
                cheapest = cheapest.min(fresh);
                if cheapest == 0 {
                    break;
                }
            }
            if cheapest == 0 {
                continue;
            }
            total += cheapest;
            for item in free.iter() {
                for &v in &self.problem.item_values[item] {
                    self.claimed[v as usize / 64] |= 1 << (v % 64);
                }
            }
        }
        total
    }

    fn dfs(&mut self, deleted: ItemSet, protected: ItemSet, depth: usize) {
        self.nodes += 1;
        let incumbent = self.incumbent();
        if incumbent.is_some_and(|b| self.alive <= b) {
            return;
        }
        let Some(c) = self.pick_constraint(&deleted, &protected) else {
            // every constraint hit: a feasible leaf better than the incumbent
            self.best = Some((self.alive, deleted));
            if let Some(s) = self.shared {
                s.offer(self.alive);
            }
            return;
        };
        if c == usize::MAX {
            return;
        }
        if let Some(b) = incumbent {
            let lb = self.packing_bound(&deleted, &protected);
            if self.alive.saturating_sub(lb) <= b {
                return;
            }
        }
        if let Some((key, max_depth)) = self.symmetry {
            if depth <= max_depth && !self.seen.insert(key.key(&deleted, &protected)) {
                return;
            }
        }
        let order = self.branch_order(&self.problem.constraints[c], &protected);
        let mut prot = protected;
        for item in order {
            let mut next = deleted;
            next.insert(item);
            self.delete(item);
            self.dfs(next, prot, depth + 1);
            self.restore(item);
            prot.insert(item);
        }
    }
}

/// Combines the outcomes of separate branches: the best value wins, the
/// earliest outcome on ties, so the merge is independent of finishing order.
pub fn merge_outcomes(outcomes: impl IntoIterator<Item = SearchOutcome>) -> SearchOutcome {
    let mut merged = SearchOutcome { best: None, nodes: 0 };
    for o in outcomes {
        merged.nodes += o.nodes;
        if let Some((v, d)) = o.best {
            if merged.best.is_none_or(|(b, _)| v > b) {
                merged.best = Some((v, d));
            }
        }
    }
    merged
}

/// Exhaustive oracle: tries every deletion set. Only for tiny universes.
pub fn brute_force(problem: &HittingProblem) -> Option<(usize, ItemSet)> {
    assert!(problem.items <= 24, "brute force is limited to 24 items");
    let mut best: Option<(usize, ItemSet)> = None;
    for mask in 0u32..(1 << problem.items) {
        let deleted = ItemSet::from_items(crate::graph::iter_bits(mask as u64));
        if !problem.is_feasible(&deleted) {
            continue;
        }
        let v = problem.value_of(&deleted);
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, deleted));
        }
    }
    best
}
