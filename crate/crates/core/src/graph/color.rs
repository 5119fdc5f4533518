use alloc::vec;

use super::{iter_bits, Graph};

/// Size of a largest clique (simple branch and bound on bitsets).
pub fn clique_number(g: &Graph) -> usize {
    fn expand(g: &Graph, size: usize, mut cand: u64, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            expand(g, size + 1, cand & g.neighbors(v), best);
        }
    }
    let mut best = 0;
    expand(g, 0, g.vertex_mask(), &mut best);
    best
}

/// Exact chromatic number: tries `k = ω(g), ω(g)+1, ...` with a DSATUR-style
/// backtracking colouring test.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    if g.edge_count() == 0 {
        return 1;
    }
    let mut k = clique_number(g);
    while !colorable(g, k) {
        k += 1;
    }
    k
}

fn colorable(g: &Graph, k: usize) -> bool {
    // class[c] = vertices coloured c
    let mut class = vec![0u64; k];
    let mut colored = 0u64;
    fn go(g: &Graph, k: usize, class: &mut [u64], colored: &mut u64, done: usize) -> bool {
        let n = g.vertex_count();
        if done == n {
            return true;
        }
        // most saturated uncoloured vertex, ties by degree
        let uncolored = g.vertex_mask() & !*colored;
        let v = iter_bits(uncolored)
            .max_by_key(|&v| {
                let sat = class.iter().filter(|&&c| c & g.neighbors(v) != 0).count();
                (sat, g.degree(v))
            })
            .unwrap();
        let mut opened_new = false;
        for c in 0..k {
            if class[c] & g.neighbors(v) != 0 {
                continue;
            }
            // colour classes beyond the first empty one are interchangeable
            if class[c] == 0 {
                if opened_new {
                    break;
                }
                opened_new = true;
            }
            class[c] |= 1 << v;
            *colored |= 1 << v;
            if go(g, k, class, colored, done + 1) {
                return true;
            }
            class[c] &= !(1 << v);
            *colored &= !(1 << v);
        }
        false
    }
    go(g, k, &mut class, &mut colored, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_chromatic_numbers() {
        assert_eq!(chromatic_number(&Graph::complete(4)), 4);
        assert_eq!(chromatic_number(&Graph::cycle(5)), 3);
        assert_eq!(chromatic_number(&Graph::complete_bipartite(3, 3)), 2);
        assert_eq!(chromatic_number(&Graph::petersen()), 3);
        assert_eq!(chromatic_number(&Graph::empty(4)), 1);
        assert_eq!(chromatic_number(&Graph::empty(0)), 0);
    }

    #[test]
    fn grotzsch_graph_needs_four_colours() {
        // Mycielskian of C5: triangle-free, chromatic number 4
        let mut g = Graph::empty(11);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i + 5, (i + 1) % 5);
            g.add_edge(i + 5, (i + 4) % 5);
            g.add_edge(i + 5, 10);
        }
        assert_eq!(clique_number(&g), 2);
        assert_eq!(chromatic_number(&g), 4);
    }

    #[test]
    fn clique_numbers() {
        assert_eq!(clique_number(&Graph::complete(6)), 6);
        assert_eq!(clique_number(&Graph::cycle(5)), 2);
        assert_eq!(clique_number(&Graph::empty(3)), 1);
    }
}
