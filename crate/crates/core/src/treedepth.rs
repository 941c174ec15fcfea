//! Exact treedepth with a witness elimination forest.
//!
//! Memoized recursion over vertex subsets of each connected component
//! (`2^n` states), so the cap applies per component. The treedepth of a
//! disconnected graph is the maximum over its components.

use std::collections::HashMap;

use crate::error::{CoreError, Result};
use crate::graph::Graph;

pub const DEFAULT_TREEDEPTH_CAP: usize = 16;

/// A rooted forest on the vertices of a graph: `parent[v]` is `None` for
/// roots. Witnesses treedepth when every edge of the graph joins an
/// ancestor/descendant pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationForest {
    pub parent: Vec<Option<usize>>,
}

impl EliminationForest {
    /// Maximum number of nodes on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        let n = self.parent.len();
        let mut depth = vec![0usize; n];
        let mut best = 0;
        for v in 0..n {
            let mut chain = Vec::new();
            let mut cur = v;
            while depth[cur] == 0 {
                chain.push(cur);
                match self.parent[cur] {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            let mut d = if depth[cur] == 0 { 0 } else { depth[cur] };
            for &u in chain.iter().rev() {
                d += 1;
                depth[u] = d;
            }
            best = best.max(depth[v]);
        }
        best
    }

    /// Checks the elimination-forest property for `g`: the parent relation
    /// is acyclic and every edge has ancestor/descendant endpoints.
    pub fn validates(&self, g: &Graph) -> bool {
        let n = g.n();
        if self.parent.len() != n {
            return false;
        }
        // ancestor chains must terminate
        for v in 0..n {
            let mut steps = 0;
            let mut cur = v;
            while let Some(p) = self.parent[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return false;
                }
            }
        }
        let ancestors = |v: usize| -> Vec<usize> {
            let mut out = vec![v];
            let mut cur = v;
            while let Some(p) = self.parent[cur] {
                out.push(p);
                cur = p;
            }
            out
        };
        for (u, v) in g.edges() {
            let au = ancestors(u);
            let av = ancestors(v);
            if !au.contains(&v) && !av.contains(&u) {
                return false;
            }
        }
        true
    }
}

/// Minimum elimination-forest depth with a witness, using the default cap.
pub fn treedepth_exact(g: &Graph) -> Result<(usize, EliminationForest)> {
    treedepth_exact_capped(g, DEFAULT_TREEDEPTH_CAP)
}

pub fn treedepth_exact_capped(g: &Graph, cap: usize) -> Result<(usize, EliminationForest)> {
    let mut parent = vec![None; g.n()];
    let mut best = 0usize;
    for comp in g.components() {
        if comp.len() > cap {
            return Err(CoreError::CapExceeded {
                what: "treedepth component size",
                got: comp.len(),
                cap,
            });
        }
        let (sub, map) = g.induced(&comp);
        let masks = sub.adjacency_masks().expect("component fits in 64 bits");
        let full: u64 = if sub.n() == 64 {
            u64::MAX
        } else {
            (1u64 << sub.n()) - 1
        };
        let mut memo: HashMap<u64, (usize, usize)> = HashMap::new();
        let d = td_subset(&masks, full, &mut memo);
        best = best.max(d);
        assign_forest(&masks, full, &mut memo, None, &map, &mut parent);
    }
    Ok((best, EliminationForest { parent }))
}

/// Treedepth of the induced subgraph on `mask` (splitting into connected
/// pieces first); memoizes connected masks as `(depth, chosen root)`.
fn td_subset(masks: &[u64], mask: u64, memo: &mut HashMap<u64, (usize, usize)>) -> usize {
    let mut best = 0;
    let mut rest = mask;
    while rest != 0 {
        let comp = connected_piece(masks, rest);
        rest &= !comp;
        best = best.max(td_connected(masks, comp, memo));
    }
    best
}

fn td_connected(masks: &[u64], mask: u64, memo: &mut HashMap<u64, (usize, usize)>) -> usize {
    if mask.count_ones() == 1 {
        return 1;
    }
    if let Some(&(d, _)) = memo.get(&mask) {
        return d;
    }
    let mut best = usize::MAX;
    let mut best_v = 0usize;
    let mut candidates = mask;
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        let d = 1 + td_subset(masks, mask & !(1 << v), memo);
        if d < best {
            best = d;
            best_v = v;
        }
    }
    memo.insert(mask, (best, best_v));
    best
}

/// Lowest-id vertex's connected piece within `mask`.
fn connected_piece(masks: &[u64], mask: u64) -> u64 {
    let start = mask.trailing_zeros() as usize;
    let mut piece = 1u64 << start;
    loop {
        let mut grown = piece;
        let mut bits = piece;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            grown |= masks[v] & mask;
        }
        if grown == piece {
            return piece;
        }
        piece = grown;
    }
}

fn assign_forest(
    masks: &[u64],
    mask: u64,
    memo: &mut HashMap<u64, (usize, usize)>,
    parent_of_roots: Option<usize>,
    map: &crate::graph::Relabeling,
    parent: &mut [Option<usize>],
) {
    let mut rest = mask;
    while rest != 0 {
        let comp = connected_piece(masks, rest);
        rest &= !comp;
        if comp.count_ones() == 1 {
            let v = comp.trailing_zeros() as usize;
            parent[map.to_old(v)] = parent_of_roots;
            continue;
        }
        td_connected(masks, comp, memo);
        let (_, v) = memo[&comp];
        parent[map.to_old(v)] = parent_of_roots;
        assign_forest(
            masks,
            comp & !(1 << v),
            memo,
            Some(map.to_old(v)),
            map,
            parent,
        );
    }
}
