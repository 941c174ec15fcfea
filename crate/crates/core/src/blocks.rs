//! Biconnected components (blocks) and cut vertices, via an iterative
//! Hopcroft–Tarjan DFS with an edge stack.

use crate::graph::{Graph, VertexSet};

/// Blocks (as vertex sets) and cut vertices. Blocks partition the edge set;
/// isolated vertices belong to no block. Output order is canonical: blocks
/// sorted lexicographically.
pub fn biconnected_components(g: &Graph) -> (Vec<VertexSet>, VertexSet) {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut child_count = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut timer = 0usize;

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // Iterative DFS; frame = (vertex, next neighbor index).
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;

        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(v) {
                let u = g.neighbors(v)[*idx];
                *idx += 1;
                if disc[u] == usize::MAX {
                    parent[u] = v;
                    child_count[v] += 1;
                    edge_stack.push((v, u));
                    disc[u] = timer;
                    low[u] = timer;
                    timer += 1;
                    stack.push((u, 0));
                } else if u != parent[v] && disc[u] < disc[v] {
                    // back edge
                    edge_stack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        // p separates v's subtree: pop one block.
                        let mut verts = VertexSet::new();
                        while let Some(&(a, b)) = edge_stack.last() {
                            if disc[a] >= disc[v] {
                                verts.insert(a);
                                verts.insert(b);
                                edge_stack.pop();
                            } else {
                                break;
                            }
                        }
                        // the tree edge (p, v) closes the block
                        if let Some(&(a, b)) = edge_stack.last() {
                            if (a, b) == (p, v) {
                                edge_stack.pop();
                            }
                        }
                        verts.insert(p);
                        verts.insert(v);
                        blocks.push(verts);
                        if p != root || child_count[p] > 1 {
                            is_cut[p] = true;
                        }
                    }
                }
            }
        }
        debug_assert!(edge_stack.is_empty());
    }

    blocks.sort();
    let cut: VertexSet = (0..n).filter(|&v| is_cut[v]).collect();
    (blocks, cut)
}
