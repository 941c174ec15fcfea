//! Clique enumeration primitives.

use crate::graph::{Graph, VertexSet};

/// Enumerates every vertex set of size `t` inducing a complete subgraph, in
/// lexicographic order. Ordered backtracking over sorted neighborhoods, so
/// the output order is canonical. Requires `t >= 2`.
pub fn enumerate_t_cliques(g: &Graph, t: usize) -> Vec<VertexSet> {
    assert!(t >= 2, "t-clique enumeration needs t >= 2");
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(t);
    for v in g.vertices() {
        current.push(v);
        extend_clique(g, t, &mut current, &mut out);
        current.pop();
    }
    out
}

fn extend_clique(g: &Graph, t: usize, current: &mut Vec<usize>, out: &mut Vec<VertexSet>) {
    if current.len() == t {
        out.push(VertexSet::from_vec(current.clone()));
        return;
    }
    let last = *current.last().unwrap();
    // Candidates are neighbors of the last chosen vertex beyond it; each must
    // be adjacent to the whole prefix.
    for &cand in g.neighbors(last) {
        if cand <= last {
            continue;
        }
        if current[..current.len() - 1]
            .iter()
            .all(|&u| g.has_edge(u, cand))
        {
            current.push(cand);
            extend_clique(g, t, current, out);
            current.pop();
        }
    }
}

/// Whether the graph contains at least one `t`-clique; stops at the first.
pub fn contains_t_clique(g: &Graph, t: usize) -> bool {
    if t < 2 {
        return g.n() >= t;
    }
    let mut current = Vec::with_capacity(t);
    for v in g.vertices() {
        current.push(v);
        if extend_exists(g, t, &mut current) {
            return true;
        }
        current.pop();
    }
    false
}

fn extend_exists(g: &Graph, t: usize, current: &mut Vec<usize>) -> bool {
    if current.len() == t {
        return true;
    }
    let last = *current.last().unwrap();
    for &cand in g.neighbors(last) {
        if cand <= last {
            continue;
        }
        if current[..current.len() - 1]
            .iter()
            .all(|&u| g.has_edge(u, cand))
        {
            current.push(cand);
            if extend_exists(g, t, current) {
                return true;
            }
            current.pop();
        }
    }
    false
}

/// Whether the induced subgraph on `within` contains a `t`-clique.
pub fn set_contains_t_clique(g: &Graph, within: &VertexSet, t: usize) -> bool {
    if within.len() < t {
        return false;
    }
    let (sub, _) = g.induced(within);
    contains_t_clique(&sub, t)
}

/// Every clique of size in `[1, max_size]`, in size-then-lexicographic
/// order. This is the ground set for annotated families and blocking sets.
pub fn cliques_up_to(g: &Graph, max_size: usize) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    let mut stack: Vec<Vec<usize>> = g.vertices().map(|v| vec![v]).collect();
    stack.reverse();
    let mut all = Vec::new();
    while let Some(current) = stack.pop() {
        all.push(VertexSet::from_vec(current.clone()));
        if current.len() < max_size {
            let last = *current.last().unwrap();
            for &cand in g.neighbors(last).iter().rev() {
                if cand > last && current.iter().all(|&u| g.has_edge(u, cand)) {
                    let mut next = current.clone();
                    next.push(cand);
                    stack.push(next);
                }
            }
        }
    }
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.extend(all);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive oracle: filter all C(n, t) subsets by completeness.
    fn subset_filter_cliques(g: &Graph, t: usize) -> Vec<VertexSet> {
        let n = g.n();
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize != t {
                continue;
            }
            let set = VertexSet::from_mask(mask);
            if g.is_clique(&set) {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn k4_has_four_triangles() {
        let cliques = enumerate_t_cliques(&Graph::complete(4), 3);
        assert_eq!(cliques.len(), 4);
    }

    #[test]
    fn c5_is_triangle_free() {
        assert!(enumerate_t_cliques(&Graph::cycle(5), 3).is_empty());
        assert!(!contains_t_clique(&Graph::cycle(5), 3));
    }

    #[test]
    fn disjoint_triangles() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let cliques = enumerate_t_cliques(&g, 3);
        assert_eq!(cliques.len(), 2);
        assert_eq!(cliques[0].as_slice(), &[0, 1, 2]);
        assert_eq!(cliques[1].as_slice(), &[3, 4, 5]);
    }

    #[test]
    fn matches_subset_filter_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(0..=8);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            for t in 2..=4 {
                assert_eq!(enumerate_t_cliques(&g, t), subset_filter_cliques(&g, t));
            }
        }
    }

    #[test]
    fn ground_set_order_is_size_then_lex() {
        let g = Graph::complete(3);
        let ground = cliques_up_to(&g, 2);
        let sizes: Vec<usize> = ground.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 1, 1, 2, 2, 2]);
        assert_eq!(ground[3].as_slice(), &[0, 1]);
    }
}
