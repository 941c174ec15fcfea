//! Seeded and exhaustive test corpora: random graphs and instances driven
//! by one `u64` seed, the isomorphism-free enumeration of small graphs, and
//! the exhaustive tiny-CNF generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{CliqueFamily, Graph, VertexSet};
use crate::reductions::CnfFormula;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(n: usize, edge_prob: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// A random annotated instance over a random graph: members drawn from the
/// cliques of size below `t`.
pub fn random_family(g: &Graph, t: usize, max_members: usize, rng: &mut impl Rng) -> CliqueFamily {
    let ground = crate::cliques::cliques_up_to(g, t - 1);
    let mut sets = Vec::new();
    if !ground.is_empty() {
        for _ in 0..rng.gen_range(0..=max_members) {
            sets.push(ground[rng.gen_range(0..ground.len())].clone());
        }
    }
    CliqueFamily::from_sets(sets)
}

pub fn random_subset(n: usize, pick_prob: f64, rng: &mut impl Rng) -> VertexSet {
    (0..n).filter(|_| rng.gen_bool(pick_prob)).collect()
}

// ---------------------------------------------------------------------------
// Isomorphism-free enumeration of small graphs by vertex extension with
// permutation-minimal canonical forms.

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // row-major upper triangle
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn apply_permutation(n: usize, mask: u32, perm: &[usize]) -> u32 {
    let mut out = 0u32;
    for i in 0..n {
        for j in (i + 1)..n {
            if mask & (1 << pair_index(n, i, j)) != 0 {
                let (a, b) = if perm[i] < perm[j] {
                    (perm[i], perm[j])
                } else {
                    (perm[j], perm[i])
                };
                out |= 1 << pair_index(n, a, b);
            }
        }
    }
    out
}

fn permutations_of(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permute_rec(&mut current, 0, &mut out);
    out
}

fn permute_rec(current: &mut Vec<usize>, depth: usize, out: &mut Vec<Vec<usize>>) {
    if depth == current.len() {
        out.push(current.clone());
        return;
    }
    for i in depth..current.len() {
        current.swap(depth, i);
        permute_rec(current, depth + 1, out);
        current.swap(depth, i);
    }
}

fn canonical(n: usize, mask: u32, perms: &[Vec<usize>]) -> u32 {
    perms
        .iter()
        .map(|p| apply_permutation(n, mask, p))
        .min()
        .unwrap()
}

fn mask_to_graph(n: usize, mask: u32) -> Graph {
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if mask & (1 << pair_index(n, i, j)) != 0 {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

/// One representative per isomorphism class of graphs on exactly `n`
/// vertices. Feasible up to `n = 7`.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "extension enumeration is sized for n <= 7");
    let mut masks: Vec<u32> = vec![0]; // the graph on 0 vertices
    for k in 1..=n {
        let perms = permutations_of(k);
        let mut next = std::collections::BTreeSet::new();
        for &prev in &masks {
            // lift the (k-1)-vertex mask and attach vertex k-1 every way
            for nbhd in 0u32..(1 << (k - 1)) {
                let mut mask = 0u32;
                for i in 0..k.saturating_sub(1) {
                    for j in (i + 1)..k - 1 {
                        if prev & (1 << pair_index(k - 1, i, j)) != 0 {
                            mask |= 1 << pair_index(k, i, j);
                        }
                    }
                }
                for i in 0..k - 1 {
                    if nbhd & (1 << i) != 0 {
                        mask |= 1 << pair_index(k, i, k - 1);
                    }
                }
                next.insert(canonical(k, mask, &perms));
            }
        }
        masks = next.into_iter().collect();
    }
    masks.into_iter().map(|m| mask_to_graph(n, m)).collect()
}

/// One representative per isomorphism class of connected graphs on
/// `1..=n_max` vertices.
pub fn connected_graphs_up_to_iso(n_max: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.extend(
            graphs_up_to_iso(n)
                .into_iter()
                .filter(|g| g.is_connected()),
        );
    }
    out
}

/// Chain of `l` triangles sharing consecutive bottom vertices: bottoms
/// `0..=l` form a path, top `l+1+i` is adjacent to bottoms `i` and `i+1`.
pub fn chain_of_triangles(l: usize) -> Graph {
    let mut g = Graph::new(2 * l + 1);
    for i in 0..l {
        g.add_edge(i, i + 1).unwrap();
        g.add_edge(i, l + 1 + i).unwrap();
        g.add_edge(i + 1, l + 1 + i).unwrap();
    }
    g
}

/// The top vertices of [`chain_of_triangles`].
pub fn chain_tops(l: usize) -> VertexSet {
    (l + 1..2 * l + 1).collect()
}

// ---------------------------------------------------------------------------
// Exhaustive tiny CNF corpus.

/// Every CNF with at most `max_vars` variables, at most `max_clauses`
/// clauses, and clause width at most `max_width`, deduplicated: clauses are
/// distinct literal sets, formulas are distinct clause sets, and the
/// declared variable count is the largest mentioned variable.
pub fn all_tiny_cnfs(max_vars: usize, max_clauses: usize, max_width: usize) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for n in 1..=max_vars {
        // all clauses over literals of variables 1..=n as sorted literal vecs
        let literals: Vec<i64> = (1..=n as i64).flat_map(|v| [v, -v]).collect();
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        let mut current = Vec::new();
        clause_rec(&literals, max_width, 0, &mut current, &mut clauses);
        // formulas = subsets of clauses of size 1..=max_clauses, canonical n
        let mut chosen = Vec::new();
        formula_rec(n, &clauses, max_clauses, 0, &mut chosen, &mut out);
    }
    out
}

fn clause_rec(
    literals: &[i64],
    max_width: usize,
    from: usize,
    current: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if !current.is_empty() {
        out.push(current.clone());
    }
    if current.len() == max_width {
        return;
    }
    for i in from..literals.len() {
        // skip duplicate literals (same literal twice adds nothing)
        current.push(literals[i]);
        clause_rec(literals, max_width, i + 1, current, out);
        current.pop();
    }
}

fn formula_rec(
    n: usize,
    clauses: &[Vec<i64>],
    max_clauses: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<CnfFormula>,
) {
    if !chosen.is_empty() {
        let selected: Vec<Vec<i64>> = chosen.iter().map(|&i| clauses[i].clone()).collect();
        let max_var = selected
            .iter()
            .flatten()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap();
        if max_var == n {
            out.push(CnfFormula::new(n, selected).expect("generated clauses are valid"));
        }
    }
    if chosen.len() == max_clauses {
        return;
    }
    for i in from..clauses.len() {
        chosen.push(i);
        formula_rec(n, clauses, max_clauses, i + 1, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iso_free_counts_match_the_literature() {
        // numbers of graphs on n unlabeled vertices: 1, 2, 4, 11, 34, 156, 1044
        assert_eq!(graphs_up_to_iso(1).len(), 1);
        assert_eq!(graphs_up_to_iso(2).len(), 2);
        assert_eq!(graphs_up_to_iso(3).len(), 4);
        assert_eq!(graphs_up_to_iso(4).len(), 11);
        assert_eq!(graphs_up_to_iso(5).len(), 34);
        assert_eq!(graphs_up_to_iso(6).len(), 156);
    }

    #[test]
    fn connected_counts_match_the_literature() {
        // connected graphs on n unlabeled vertices: 1, 1, 2, 6, 21, 112, 853
        let per_n: Vec<usize> = (1..=6)
            .map(|n| {
                graphs_up_to_iso(n)
                    .into_iter()
                    .filter(|g| g.is_connected())
                    .count()
            })
            .collect();
        assert_eq!(per_n, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn cnf_corpus_is_deduplicated() {
        let formulas = all_tiny_cnfs(2, 2, 2);
        let mut seen = std::collections::BTreeSet::new();
        for phi in &formulas {
            let mut canon: Vec<Vec<i64>> = phi
                .clauses
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.sort_unstable();
                    c
                })
                .collect();
            canon.sort();
            assert!(seen.insert((phi.num_vars, canon)), "duplicate {phi:?}");
            let max_var = phi
                .clauses
                .iter()
                .flatten()
                .map(|l| l.unsigned_abs() as usize)
                .max()
                .unwrap();
            assert_eq!(max_var, phi.num_vars);
        }
        assert!(!formulas.is_empty());
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let g1 = random_graph(8, 0.5, &mut seeded_rng(9));
        let g2 = random_graph(8, 0.5, &mut seeded_rng(9));
        assert_eq!(g1, g2);
    }
}
