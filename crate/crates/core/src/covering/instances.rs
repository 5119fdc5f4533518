//! Sub-collections of a copy pool that are isomorphic to a given covering.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::CoveringType;
use crate::graph::{iter_bits, SubgraphCopy};

struct Matcher<'a> {
    rep: Vec<&'a SubgraphCopy>,
    pool: &'a [SubgraphCopy],
    by_vertex: Vec<Vec<usize>>,
    phi: Vec<usize>,
    image: u64,
    mapped: u64,
    chosen: Vec<usize>,
    taken: Vec<bool>,
    found: BTreeSet<Vec<usize>>,
}

/// Every sub-collection of `pool` isomorphic (as a covering) to `ft`, as
/// sorted lists of pool indices, in lexicographic order.
pub fn covering_instances(ft: &CoveringType, pool: &[SubgraphCopy]) -> Vec<Vec<usize>> {
    let copies = ft.representative.copies();
    if copies.is_empty() || pool.len() < copies.len() {
        return Vec::new();
    }
    // copies sharing the most vertices with those placed so far go first
    let mut rep: Vec<&SubgraphCopy> = Vec::with_capacity(copies.len());
    let mut left: Vec<&SubgraphCopy> = copies.iter().collect();
    let mut seen = 0u64;
    while !left.is_empty() {
        let i = (0..left.len()).max_by_key(|&i| ((left[i].vertices() & seen).count_ones(), core::cmp::Reverse(i))).unwrap();
        let c = left.remove(i);
        seen |= c.vertices();
        rep.push(c);
    }
    let mut by_vertex = vec![Vec::new(); 64];
    for (i, c) in pool.iter().enumerate() {
        for v in iter_bits(c.vertices()) {
            by_vertex[v].push(i);
        }
    }
    let mut m = Matcher {
        rep,
        pool,
        by_vertex,
        phi: vec![usize::MAX; ft.representative.universe_size()],
        image: 0,
        mapped: 0,
        chosen: Vec::new(),
        taken: vec![false; pool.len()],
        found: BTreeSet::new(),
    };
    m.place(0);
    m.found.into_iter().collect()
}

/// The number of sub-collections of `pool` isomorphic to `ft`.
pub fn count_covering_instances(ft: &CoveringType, pool: &[SubgraphCopy]) -> usize {
    covering_instances(ft, pool).len()
}

impl Matcher<'_> {
    fn place(&mut self, i: usize) {
        let Some(&c) = self.rep.get(i) else {
            let mut set = self.chosen.clone();
            set.sort_unstable();
            self.found.insert(set);
            return;
        };
        let known = c.vertices() & self.mapped;
        let known_image = iter_bits(known).fold(0u64, |m, w| m | 1 << self.phi[w]);
        let candidates: Vec<usize> = match iter_bits(known).next() {
            Some(w) => self.by_vertex[self.phi[w]].clone(),
            None => (0..self.pool.len()).collect(),
        };
        let fresh: Vec<usize> = iter_bits(c.vertices() & !self.mapped).collect();
        for q in candidates {
            let target = &self.pool[q];
            if self.taken[q] || target.vertices() & self.image != known_image || target.vertex_count() != c.vertex_count() {
                continue;
            }
            let free: Vec<usize> = iter_bits(target.vertices() & !known_image).collect();
            self.taken[q] = true;
            self.chosen.push(q);
            self.assign(i, c, target, &fresh, &free, 0);
            self.chosen.pop();
            self.taken[q] = false;
        }
    }

    /// Maps the unmapped vertices of `c` bijectively onto `free` so that
    /// every edge of `c` lands on an edge of `target`.
    fn assign(&mut self, i: usize, c: &SubgraphCopy, target: &SubgraphCopy, fresh: &[usize], free: &[usize], k: usize) {
        if k == fresh.len() {
            if c.edges().iter().all(|&(a, b)| target.contains_edge(crate::graph::edge(self.phi[a], self.phi[b]))) {
                self.place(i + 1);
            }
            return;
        }
        let w = fresh[k];
        for &h in free {
            if self.image >> h & 1 == 1 {
                continue;
            }
            self.phi[w] = h;
            self.image |= 1 << h;
            self.mapped |= 1 << w;
            self.assign(i, c, target, fresh, free, k + 1);
            self.mapped &= !(1 << w);
            self.image &= !(1 << h);
            self.phi[w] = usize::MAX;
        }
    }
}
