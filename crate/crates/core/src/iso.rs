//! Subgraph and induced-subgraph occurrence tests via plain backtracking
//! with degree pruning. Pattern graphs are capped (default 10 vertices) to
//! bound the search.

use crate::error::{CoreError, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_PATTERN_CAP: usize = 10;

/// An injective vertex map witnessing an occurrence: `witness[i]` is the
/// host vertex playing pattern vertex `i`.
pub type Embedding = Vec<usize>;

/// Tests whether `g` contains `h` as a subgraph (`induced = false`) or as an
/// induced subgraph (`induced = true`), returning one witness embedding if
/// so. Uses the default pattern cap.
pub fn occurrences_of(h: &Graph, g: &Graph, induced: bool) -> Result<Option<Embedding>> {
    occurrences_of_capped(h, g, induced, DEFAULT_PATTERN_CAP)
}

pub fn occurrences_of_capped(
    h: &Graph,
    g: &Graph,
    induced: bool,
    cap: usize,
) -> Result<Option<Embedding>> {
    if h.n() > cap {
        return Err(CoreError::CapExceeded {
            what: "pattern vertices",
            got: h.n(),
            cap,
        });
    }
    let order = matching_order(h);
    let mut assignment = vec![usize::MAX; h.n()];
    let mut used = vec![false; g.n()];
    if backtrack(h, g, induced, &order, 0, &mut assignment, &mut used) {
        Ok(Some(assignment))
    } else {
        Ok(None)
    }
}

/// Pattern vertices ordered by decreasing degree (ties by id); high-degree
/// vertices fail early.
fn matching_order(h: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = h.vertices().collect();
    order.sort_by(|&a, &b| h.degree(b).cmp(&h.degree(a)).then(a.cmp(&b)));
    order
}

fn backtrack(
    h: &Graph,
    g: &Graph,
    induced: bool,
    order: &[usize],
    depth: usize,
    assignment: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let hv = order[depth];
    'candidates: for gv in g.vertices() {
        if used[gv] || g.degree(gv) < h.degree(hv) {
            continue;
        }
        for &prev in &order[..depth] {
            let gprev = assignment[prev];
            let h_adj = h.has_edge(hv, prev);
            let g_adj = g.has_edge(gv, gprev);
            if h_adj && !g_adj {
                continue 'candidates;
            }
            if induced && !h_adj && g_adj {
                continue 'candidates;
            }
        }
        assignment[hv] = gv;
        used[gv] = true;
        if backtrack(h, g, induced, order, depth + 1, assignment, used) {
            return true;
        }
        assignment[hv] = usize::MAX;
        used[gv] = false;
    }
    false
}

/// Validates a witness embedding: injective, edge-preserving, and for the
/// induced variant also edge-reflecting.
pub fn check_embedding(h: &Graph, g: &Graph, induced: bool, emb: &[usize]) -> bool {
    if emb.len() != h.n() {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    for &v in emb {
        if v >= g.n() || !seen.insert(v) {
            return false;
        }
    }
    for u in h.vertices() {
        for v in (u + 1)..h.n() {
            let h_adj = h.has_edge(u, v);
            let g_adj = g.has_edge(emb[u], emb[v]);
            if h_adj && !g_adj {
                return false;
            }
            if induced && !h_adj && g_adj {
                return false;
            }
        }
    }
    true
}

/// All distinct vertex sets carrying a copy of `h` in `g` (as subgraph, or
/// induced subgraph when `induced` is set). The sets are the hitting targets
/// for copy-hitting problems: a copy is destroyed exactly when a vertex of
/// its set is deleted.
pub fn copy_sets(h: &Graph, g: &Graph, induced: bool) -> Result<Vec<VertexSet>> {
    if h.n() > DEFAULT_PATTERN_CAP {
        return Err(CoreError::CapExceeded {
            what: "pattern vertices",
            got: h.n(),
            cap: DEFAULT_PATTERN_CAP,
        });
    }
    let mut out: std::collections::BTreeSet<VertexSet> = Default::default();
    let order = matching_order(h);
    let mut assignment = vec![usize::MAX; h.n()];
    let mut used = vec![false; g.n()];
    collect_all(h, g, induced, &order, 0, &mut assignment, &mut used, &mut out);
    Ok(out.into_iter().collect())
}

#[allow(clippy::too_many_arguments)]
fn collect_all(
    h: &Graph,
    g: &Graph,
    induced: bool,
    order: &[usize],
    depth: usize,
    assignment: &mut [usize],
    used: &mut [bool],
    out: &mut std::collections::BTreeSet<VertexSet>,
) {
    if depth == order.len() {
        out.insert(assignment.iter().copied().collect());
        return;
    }
    let hv = order[depth];
    'candidates: for gv in g.vertices() {
        if used[gv] || g.degree(gv) < h.degree(hv) {
            continue;
        }
        for &prev in &order[..depth] {
            let gprev = assignment[prev];
            let h_adj = h.has_edge(hv, prev);
            let g_adj = g.has_edge(gv, gprev);
            if h_adj && !g_adj {
                continue 'candidates;
            }
            if induced && !h_adj && g_adj {
                continue 'candidates;
            }
        }
        assignment[hv] = gv;
        used[gv] = true;
        collect_all(h, g, induced, order, depth + 1, assignment, used, out);
        assignment[hv] = usize::MAX;
        used[gv] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_in_k4() {
        let emb = occurrences_of(&Graph::complete(3), &Graph::complete(4), false)
            .unwrap()
            .expect("K_4 contains K_3");
        assert!(check_embedding(
            &Graph::complete(3),
            &Graph::complete(4),
            false,
            &emb
        ));
    }

    #[test]
    fn no_induced_path_in_triangle() {
        assert!(occurrences_of(&Graph::path(3), &Graph::complete(3), true)
            .unwrap()
            .is_none());
        // As a plain subgraph the path is there.
        assert!(occurrences_of(&Graph::path(3), &Graph::complete(3), false)
            .unwrap()
            .is_some());
    }

    #[test]
    fn diamond_in_diamond_plus_isolated() {
        let mut g = Graph::new(5);
        for (u, v) in Graph::diamond().edges() {
            g.add_edge(u, v).unwrap();
        }
        let emb = occurrences_of(&Graph::diamond(), &g, true)
            .unwrap()
            .expect("diamond occurs induced");
        assert!(check_embedding(&Graph::diamond(), &g, true, &emb));
        let verts: VertexSet = emb.iter().copied().collect();
        assert_eq!(verts.as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn pattern_cap_enforced() {
        let err = occurrences_of(&Graph::complete(11), &Graph::complete(12), false);
        assert!(matches!(err, Err(CoreError::CapExceeded { .. })));
    }

    #[test]
    fn copy_sets_of_diamond() {
        // Two diamonds sharing the degree-3 edge {2,3}: vertex sets {0,1,2,3}
        // is one diamond; adding 4 adjacent to 2,3 makes {0,4,2,3} and
        // {1,4,2,3} diamonds too.
        let mut g = Graph::diamond();
        let mut g5 = Graph::new(5);
        for (u, v) in g.edges() {
            g5.add_edge(u, v).unwrap();
        }
        g5.add_edge(4, 2).unwrap();
        g5.add_edge(4, 3).unwrap();
        g = g5;
        let sets = copy_sets(&Graph::diamond(), &g, false).unwrap();
        assert_eq!(sets.len(), 3);
    }

    #[test]
    fn monotone_under_adding_edges() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let h = Graph::diamond();
        for _ in 0..50 {
            let n = rng.gen_range(4..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let before = occurrences_of(&h, &g, false).unwrap().is_some();
            // add one random missing edge if any
            let missing: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .filter(|&(u, v)| !g.has_edge(u, v))
                .collect();
            if missing.is_empty() {
                continue;
            }
            let (u, v) = missing[rng.gen_range(0..missing.len())];
            let mut g2 = g.clone();
            g2.add_edge(u, v).unwrap();
            let after = occurrences_of(&h, &g2, false).unwrap().is_some();
            assert!(!before || after, "occurrence vanished after adding an edge");
        }
    }
}
