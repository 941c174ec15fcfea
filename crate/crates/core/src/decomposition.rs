//! Structural decomposition machinery: non-K_t vertices, roots and pending
//! components, and the block-elimination parameter ("bed") computed by the
//! recursive candidate-root algorithm.
//!
//! A *root* of a connected graph is a nonempty connected K_t-free vertex set
//! `T` such that every component of `G - T` has exactly one neighbor in `T`.
//! The parameter counts how many rounds of root removal (plus free removal
//! of vertices in no t-clique, and component splitting) empty the graph.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::blocks::biconnected_components;
use crate::cliques::set_contains_t_clique;
use crate::error::{CoreError, Result};
use crate::graph::{Graph, VertexSet};

/// Vertices contained in no `t`-clique of `g` (the maximal "free" set).
pub fn non_kt_vertices(g: &Graph, t: usize) -> VertexSet {
    assert!(t >= 3, "non-K_t vertices need t >= 3");
    non_kt_within(g, &g.vertex_set(), t)
}

/// Same, restricted to the induced subgraph on `alive` (host ids).
pub fn non_kt_within(g: &Graph, alive: &VertexSet, t: usize) -> VertexSet {
    alive
        .iter()
        .filter(|&v| !in_some_t_clique(g, alive, v, t))
        .collect()
}

fn in_some_t_clique(g: &Graph, alive: &VertexSet, v: usize, t: usize) -> bool {
    let mut clique = vec![v];
    let candidates: Vec<usize> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| alive.contains(u))
        .collect();
    extend_in(g, &candidates, 0, &mut clique, t)
}

fn extend_in(g: &Graph, candidates: &[usize], from: usize, clique: &mut Vec<usize>, t: usize) -> bool {
    if clique.len() == t {
        return true;
    }
    for i in from..candidates.len() {
        let c = candidates[i];
        if clique.iter().all(|&u| g.has_edge(u, c)) {
            clique.push(c);
            if extend_in(g, candidates, i + 1, clique, t) {
                return true;
            }
            clique.pop();
        }
    }
    false
}

/// Outcome of a structural root check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootValidity {
    Valid,
    Invalid(String),
}

impl RootValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, RootValidity::Valid)
    }
}

/// Checks that `roots` is a root of `g` (one root per connected component),
/// purely per the structural definition. A misaligned root list is an error;
/// a violated clause yields `Invalid` with a diagnostic naming it.
pub fn validate_root(g: &Graph, t: usize, roots: &[VertexSet]) -> Result<RootValidity> {
    let comps = g.components();
    if roots.len() != comps.len() {
        return Err(CoreError::ComponentMismatch(format!(
            "{} roots for {} components",
            roots.len(),
            comps.len()
        )));
    }
    let mut assigned: Vec<Option<usize>> = vec![None; comps.len()];
    for (ri, root) in roots.iter().enumerate() {
        if root.is_empty() {
            return Ok(RootValidity::Invalid(format!("root #{ri} is empty")));
        }
        let Some(ci) = comps.iter().position(|c| root.is_subset(c)) else {
            return Err(CoreError::ComponentMismatch(format!(
                "root {root:?} is not contained in a single component"
            )));
        };
        if assigned[ci].is_some() {
            return Err(CoreError::ComponentMismatch(format!(
                "component {:?} carries two roots",
                comps[ci]
            )));
        }
        assigned[ci] = Some(ri);
    }
    for (ci, comp) in comps.iter().enumerate() {
        let root = &roots[assigned[ci].expect("all components assigned")];
        if g.components_within(root).len() != 1 {
            return Ok(RootValidity::Invalid(format!(
                "root {root:?} does not induce a connected subgraph"
            )));
        }
        if set_contains_t_clique(g, root, t) {
            return Ok(RootValidity::Invalid(format!(
                "root {root:?} contains a {t}-clique"
            )));
        }
        let rest = comp.difference(root);
        for pend in g.components_within(&rest) {
            let attach = g.set_neighborhood(&pend).intersection(root);
            if attach.len() != 1 {
                return Ok(RootValidity::Invalid(format!(
                    "component {pend:?} of G-T sees {} root vertices {attach:?}",
                    attach.len()
                )));
            }
        }
    }
    Ok(RootValidity::Valid)
}

/// A root of (a subgraph of) a host graph together with its pending
/// component map. All ids refer to the host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDecomposition {
    /// Vertices of the decomposed graph (the host minus any removed free
    /// set), in host ids.
    pub host: VertexSet,
    /// One root per connected component, ordered by smallest vertex.
    pub roots: Vec<VertexSet>,
    /// `v ∈ V(T) -> C(v)`, the component of `v` after deleting all edges
    /// internal to the root sets.
    pub pending: BTreeMap<usize, VertexSet>,
}

impl RootDecomposition {
    /// Union of all root sets.
    pub fn root_vertices(&self) -> VertexSet {
        self.roots
            .iter()
            .fold(VertexSet::new(), |acc, r| acc.union(r))
    }

    pub fn pending_of(&self, v: usize) -> &VertexSet {
        &self.pending[&v]
    }

    /// `C(Z) = ∪_{v∈Z} C(v)`.
    pub fn pending_of_set(&self, z: &VertexSet) -> VertexSet {
        z.iter()
            .fold(VertexSet::new(), |acc, v| acc.union(&self.pending[&v]))
    }
}

/// Computes the pending-component partition for a root of `g - n_set`.
///
/// `C(v)` is the component of `v` after deleting every edge with both
/// endpoints inside the root. Verifies the partition and anticompleteness
/// invariants before returning.
pub fn pending_partition(
    g: &Graph,
    t: usize,
    n_set: &VertexSet,
    roots: &[VertexSet],
) -> Result<RootDecomposition> {
    let free = non_kt_vertices(g, t);
    if !n_set.is_subset(&free) {
        return Err(CoreError::PreconditionViolated(format!(
            "removed set {n_set:?} contains vertices lying in {t}-cliques"
        )));
    }
    let host = g.vertex_set().difference(n_set);
    let (host_graph, map) = g.induced(&host);
    let host_roots: Vec<VertexSet> = roots.iter().map(|r| map.set_to_new(r)).collect();
    if host_roots.iter().zip(roots).any(|(h, r)| h.len() != r.len()) {
        return Err(CoreError::InvalidRoot(
            "root vertices overlap the removed set".into(),
        ));
    }
    match validate_root(&host_graph, t, &host_roots)? {
        RootValidity::Valid => {}
        RootValidity::Invalid(diag) => return Err(CoreError::InvalidRoot(diag)),
    }

    let root_union = roots.iter().fold(VertexSet::new(), |a, r| a.union(r));
    // BFS over the host with root-internal edges removed.
    let mut pending = BTreeMap::new();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for v in root_union.iter() {
        let mut comp = VertexSet::singleton(v);
        let mut stack = vec![v];
        while let Some(a) = stack.pop() {
            for &b in g.neighbors(a) {
                if !host.contains(b) || comp.contains(b) {
                    continue;
                }
                if root_union.contains(a) && root_union.contains(b) {
                    continue; // edge internal to the root is deleted
                }
                comp.insert(b);
                stack.push(b);
            }
        }
        for u in comp.iter() {
            if let Some(prev) = owner.insert(u, v) {
                return Err(CoreError::InvariantBroken(format!(
                    "vertex {u} lies in both C({prev}) and C({v})"
                )));
            }
        }
        pending.insert(v, comp);
    }
    // Partition invariant.
    let covered: VertexSet = owner.keys().copied().collect();
    if covered != host {
        return Err(CoreError::InvariantBroken(format!(
            "pending components cover {covered:?} instead of the host {host:?}"
        )));
    }
    // Anticompleteness: no edge between C(v)\{v} and the rest.
    for (&v, comp) in &pending {
        let interior = comp.difference(&VertexSet::singleton(v));
        for a in interior.iter() {
            for &b in g.neighbors(a) {
                if host.contains(b) && !comp.contains(b) {
                    return Err(CoreError::InvariantBroken(format!(
                        "edge ({a},{b}) leaves the interior of C({v})"
                    )));
                }
            }
        }
    }
    Ok(RootDecomposition {
        host,
        roots: roots.to_vec(),
        pending,
    })
}

/// Candidate roots of a connected graph with no free vertices: the
/// connected components of the union of the K_t-free blocks (host ids).
pub fn kt_free_block_components(g: &Graph, alive: &VertexSet, t: usize) -> Vec<VertexSet> {
    let (sub, map) = g.induced(alive);
    let (blocks, _) = biconnected_components(&sub);
    let free_blocks: Vec<&VertexSet> = blocks
        .iter()
        .filter(|b| !set_contains_t_clique(&sub, b, t))
        .collect();
    // Merge blocks that share a vertex.
    let mut comps: Vec<VertexSet> = Vec::new();
    for block in free_blocks {
        let mut merged = block.clone();
        let mut rest = Vec::new();
        for existing in comps.drain(..) {
            if !existing.is_disjoint(&merged) {
                merged = merged.union(&existing);
            } else {
                rest.push(existing);
            }
        }
        rest.push(merged);
        comps = rest;
    }
    let mut out: Vec<VertexSet> = comps.iter().map(|c| map.set_to_old(c)).collect();
    out.sort();
    out
}

/// Decides whether the parameter is at most `lambda`, by the recursive
/// algorithm over candidate roots: base cases, component split, free-vertex
/// removal, then branching on every single-vertex root and every component
/// of the union of K_t-free blocks.
pub fn bed_at_most(g: &Graph, t: usize, lambda: usize) -> bool {
    assert!(t >= 3);
    let mut memo = HashMap::new();
    bed_at_most_within(g, &g.vertex_set(), t, lambda, &mut memo)
}

fn bed_at_most_within(
    g: &Graph,
    alive: &VertexSet,
    t: usize,
    lambda: usize,
    memo: &mut HashMap<(Option<u64>, usize), bool>,
) -> bool {
    if alive.is_empty() {
        return true;
    }
    let key = (alive.to_mask(), lambda);
    if key.0.is_some() {
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
    }
    let result = (|| {
        if lambda == 0 {
            return !set_contains_t_clique(g, alive, t);
        }
        let comps = g.components_within(alive);
        if comps.len() > 1 {
            return comps
                .iter()
                .all(|c| bed_at_most_within(g, c, t, lambda, memo));
        }
        let free = non_kt_within(g, alive, t);
        if !free.is_empty() {
            return bed_at_most_within(g, &alive.difference(&free), t, lambda, memo);
        }
        // Connected, every vertex in a t-clique: branch on candidate roots.
        for v in alive.iter() {
            let rest = alive.difference(&VertexSet::singleton(v));
            if bed_at_most_within(g, &rest, t, lambda - 1, memo) {
                return true;
            }
        }
        for cand in kt_free_block_components(g, alive, t) {
            let rest = alive.difference(&cand);
            if bed_at_most_within(g, &rest, t, lambda - 1, memo) {
                return true;
            }
        }
        false
    })();
    if key.0.is_some() {
        memo.insert(key, result);
    }
    result
}

/// One step of the elimination replayed by a [`BedResult`] trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum BedTraceStep {
    /// Removal of the maximal free set.
    RemoveFree { vertices: VertexSet },
    /// Descent into the component attaining the maximum.
    Descend { component: VertexSet },
    /// Removal of a root; each such step accounts for one level.
    RemoveRoot { root: VertexSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BedResult {
    pub value: usize,
    pub trace: Vec<BedTraceStep>,
}

/// Smallest `lambda` with [`bed_at_most`] true, with a deterministic witness
/// trace. Linear scan over `0..=lambda_cap`.
pub fn bed_value(g: &Graph, t: usize, lambda_cap: usize) -> Result<BedResult> {
    let mut memo = HashMap::new();
    let alive = g.vertex_set();
    let value = (0..=lambda_cap)
        .find(|&l| bed_at_most_within(g, &alive, t, l, &mut memo))
        .ok_or(CoreError::CapExceeded {
            what: "bed value",
            got: lambda_cap + 1,
            cap: lambda_cap,
        })?;
    let mut trace = Vec::new();
    build_trace(g, &alive, t, &mut memo, &mut trace);
    Ok(BedResult { value, trace })
}

fn local_value(
    g: &Graph,
    alive: &VertexSet,
    t: usize,
    memo: &mut HashMap<(Option<u64>, usize), bool>,
) -> usize {
    (0..)
        .find(|&l| bed_at_most_within(g, alive, t, l, memo))
        .unwrap()
}

fn build_trace(
    g: &Graph,
    alive: &VertexSet,
    t: usize,
    memo: &mut HashMap<(Option<u64>, usize), bool>,
    trace: &mut Vec<BedTraceStep>,
) {
    if alive.is_empty() {
        return;
    }
    let free = non_kt_within(g, alive, t);
    if !free.is_empty() {
        trace.push(BedTraceStep::RemoveFree {
            vertices: free.clone(),
        });
        return build_trace(g, &alive.difference(&free), t, memo, trace);
    }
    let comps = g.components_within(alive);
    if comps.len() > 1 {
        // Follow the first component attaining the maximum.
        let values: Vec<usize> = comps
            .iter()
            .map(|c| local_value(g, c, t, memo))
            .collect();
        let max = *values.iter().max().unwrap();
        let idx = values.iter().position(|&v| v == max).unwrap();
        trace.push(BedTraceStep::Descend {
            component: comps[idx].clone(),
        });
        return build_trace(g, &comps[idx], t, memo, trace);
    }
    let value = local_value(g, alive, t, memo);
    debug_assert!(value >= 1, "connected graph with no free vertices");
    for root in candidate_roots(g, alive, t) {
        let rest = alive.difference(&root);
        if bed_at_most_within(g, &rest, t, value - 1, memo) {
            trace.push(BedTraceStep::RemoveRoot { root });
            return build_trace(g, &rest, t, memo, trace);
        }
    }
    unreachable!("a candidate root must decrease the value");
}

/// Single-vertex roots in id order, then block-union components in
/// canonical order: the deterministic tie-breaking contract.
fn candidate_roots(g: &Graph, alive: &VertexSet, t: usize) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = alive.iter().map(VertexSet::singleton).collect();
    out.extend(kt_free_block_components(g, alive, t));
    out
}

/// Replays a trace, checking each step, and returns the number of root
/// removals (the witnessed value). Used by tests and the CLI.
pub fn replay_trace(g: &Graph, t: usize, trace: &[BedTraceStep]) -> Result<usize> {
    let mut alive = g.vertex_set();
    let mut rounds = 0usize;
    for step in trace {
        match step {
            BedTraceStep::RemoveFree { vertices } => {
                let free = non_kt_within(g, &alive, t);
                if !vertices.is_subset(&free) {
                    return Err(CoreError::InvariantBroken(format!(
                        "trace removes non-free vertices {:?}",
                        vertices.difference(&free)
                    )));
                }
                alive = alive.difference(vertices);
            }
            BedTraceStep::Descend { component } => {
                let comps = g.components_within(&alive);
                if !comps.contains(component) {
                    return Err(CoreError::InvariantBroken(format!(
                        "trace descends into {component:?}, not a component"
                    )));
                }
                alive = component.clone();
            }
            BedTraceStep::RemoveRoot { root } => {
                let (sub, map) = g.induced(&alive);
                let local_roots: Vec<VertexSet> = vec![map.set_to_new(root)];
                match validate_root(&sub, t, &local_roots)? {
                    RootValidity::Valid => {}
                    RootValidity::Invalid(diag) => {
                        return Err(CoreError::InvariantBroken(format!(
                            "trace removes a non-root: {diag}"
                        )))
                    }
                }
                alive = alive.difference(root);
                rounds += 1;
            }
        }
    }
    if set_contains_t_clique(g, &alive, t) {
        return Err(CoreError::InvariantBroken(
            "trace leaves a t-clique behind".into(),
        ));
    }
    Ok(rounds)
}

/// Computes a root whose removal decreases the parameter by exactly one.
///
/// Preconditions: no free vertices, the parameter is at least 1 and at most
/// `lambda`. Tries single vertices first, then components of the union of
/// K_t-free blocks; for disconnected graphs, one root per component.
pub fn compute_bed_root(g: &Graph, t: usize, lambda: usize) -> Result<RootDecomposition> {
    let free = non_kt_vertices(g, t);
    if !free.is_empty() {
        return Err(CoreError::PreconditionViolated(format!(
            "graph still has free vertices {free:?}"
        )));
    }
    if g.n() == 0 {
        return Err(CoreError::PreconditionViolated(
            "empty graph has parameter 0; no root to compute".into(),
        ));
    }
    if !bed_at_most(g, t, lambda) {
        return Err(CoreError::PreconditionViolated(format!(
            "parameter exceeds the promised bound {lambda}"
        )));
    }
    let mut memo = HashMap::new();
    let mut roots = Vec::new();
    for comp in g.components() {
        let value = local_value(g, &comp, t, &mut memo);
        debug_assert!(value >= 1);
        let mut chosen = None;
        for cand in candidate_roots(g, &comp, t) {
            let rest = comp.difference(&cand);
            if bed_at_most_within(g, &rest, t, value - 1, &mut memo) {
                chosen = Some(cand);
                break;
            }
        }
        roots.push(chosen.expect("a candidate root must decrease the value"));
    }
    pending_partition(g, t, &VertexSet::new(), &roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Figure-like fixture: two components. Component one is the path
    /// v1-v2-v3-v4 (ids 0..4) with a K_4 hanging on v2 through w1,w2,w3
    /// (ids 4,5,6). Component two is the edge u1-u2 (ids 7,8) with a K_4 on
    /// u2,x1,x2,x3 (ids 9,10,11). With t = 4, {v1..v4} and {u1,u2} form a
    /// root; adding w1 to the first root breaks it.
    pub(crate) fn two_component_fixture() -> Graph {
        Graph::from_edges(
            12,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (1, 4),
                (1, 5),
                (1, 6),
                (4, 5),
                (4, 6),
                (5, 6),
                (7, 8),
                (8, 9),
                (8, 10),
                (8, 11),
                (9, 10),
                (9, 11),
                (10, 11),
            ],
        )
        .unwrap()
    }

    #[test]
    fn free_vertices_examples() {
        // triangle with a pendant vertex
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(non_kt_vertices(&g, 3).as_slice(), &[3]);
        assert!(non_kt_vertices(&Graph::complete(4), 4).is_empty());
        // forests are triangle-free
        assert_eq!(non_kt_vertices(&Graph::path(5), 3).len(), 5);
    }

    #[test]
    fn fixture_root_is_valid() {
        let g = two_component_fixture();
        let t1 = VertexSet::from_vec(vec![0, 1, 2, 3]);
        let t2 = VertexSet::from_vec(vec![7, 8]);
        assert!(validate_root(&g, 4, &[t1.clone(), t2.clone()])
            .unwrap()
            .is_valid());
        // extending the first root by w1 (=4) breaks it
        let t1_bad = t1.union(&VertexSet::singleton(4));
        let verdict = validate_root(&g, 4, &[t1_bad, t2]).unwrap();
        assert!(!verdict.is_valid());
    }

    #[test]
    fn single_vertex_is_always_a_root_of_a_connected_graph() {
        for g in [Graph::complete(5), Graph::path(4), Graph::cycle(6)] {
            let verdict = validate_root(&g, 3, &[VertexSet::singleton(0)]).unwrap();
            assert!(verdict.is_valid());
        }
    }

    #[test]
    fn misaligned_roots_are_an_error() {
        let g = two_component_fixture();
        let err = validate_root(&g, 4, &[VertexSet::singleton(0)]);
        assert!(matches!(err, Err(CoreError::ComponentMismatch(_))));
    }

    #[test]
    fn fixture_pending_components() {
        let g = two_component_fixture();
        let roots = vec![
            VertexSet::from_vec(vec![0, 1, 2, 3]),
            VertexSet::from_vec(vec![7, 8]),
        ];
        let dec = pending_partition(&g, 4, &VertexSet::new(), &roots).unwrap();
        assert_eq!(dec.pending_of(0).as_slice(), &[0]);
        assert_eq!(dec.pending_of(1).as_slice(), &[1, 4, 5, 6]);
        assert_eq!(dec.pending_of(8).as_slice(), &[8, 9, 10, 11]);
        // every t-clique lies inside one pending component
        for k in crate::cliques::enumerate_t_cliques(&g, 4) {
            assert!(dec.pending.values().any(|c| k.is_subset(c)));
        }
    }

    #[test]
    fn single_vertex_root_collects_everything() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let dec = pending_partition(&g, 3, &VertexSet::new(), &[VertexSet::singleton(2)]).unwrap();
        assert_eq!(dec.pending_of(2).len(), 5);
    }

    #[test]
    fn bed_base_cases() {
        assert!(bed_at_most(&Graph::path(6), 3, 0)); // triangle-free
        assert!(bed_at_most(&Graph::complete(4), 4, 1));
        assert!(!bed_at_most(&Graph::complete(4), 4, 0));
    }

    #[test]
    fn bed_value_examples() {
        assert_eq!(bed_value(&Graph::new(0), 3, 2).unwrap().value, 0);
        assert_eq!(bed_value(&Graph::complete(4), 3, 4).unwrap().value, 2);
        // two vertex-disjoint triangles joined by one edge
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
        )
        .unwrap();
        assert_eq!(bed_value(&g, 3, 3).unwrap().value, 1);
        // two triangles sharing a vertex
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(bed_value(&g, 3, 3).unwrap().value, 1);
    }

    #[test]
    fn traces_replay() {
        for (g, t) in [
            (Graph::complete(5), 3),
            (Graph::complete(4), 4),
            (two_component_fixture(), 4),
            (
                Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap(),
                3,
            ),
        ] {
            let res = bed_value(&g, t, 6).unwrap();
            let replayed = replay_trace(&g, t, &res.trace).unwrap();
            assert_eq!(replayed, res.value, "trace of {g:?} replays to the value");
        }
    }

    #[test]
    fn computed_root_decreases_value() {
        // K_t: the lowest-id single vertex is chosen.
        let dec = compute_bed_root(&Graph::complete(4), 4, 1).unwrap();
        assert_eq!(dec.roots.len(), 1);
        assert_eq!(dec.roots[0].as_slice(), &[0]);

        // disjoint union of two K_4's: one root per component
        let mut g = Graph::new(8);
        for base in [0, 4] {
            for u in 0..4 {
                for v in (u + 1)..4 {
                    g.add_edge(base + u, base + v).unwrap();
                }
            }
        }
        let dec = compute_bed_root(&g, 4, 1).unwrap();
        assert_eq!(dec.roots.len(), 2);
        for root in &dec.roots {
            assert_eq!(root.len(), 1);
        }

        // removal strictly decreases the value
        let g = Graph::complete(5);
        let before = bed_value(&g, 3, 5).unwrap().value;
        let dec = compute_bed_root(&g, 3, before).unwrap();
        let (rest, _) = g.remove_vertices(&dec.root_vertices());
        let after = bed_value(&rest, 3, 5).unwrap().value;
        assert_eq!(after + 1, before);
    }

    #[test]
    fn compute_root_preconditions() {
        // free vertices present
        let g = Graph::path(4);
        assert!(matches!(
            compute_bed_root(&g, 3, 1),
            Err(CoreError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn monotone_under_induced_subgraphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..80 {
            let n = rng.gen_range(2..=8);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let keep: VertexSet = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            let (sub, _) = g.induced(&keep);
            let whole = bed_value(&g, 3, n).unwrap().value;
            let part = bed_value(&sub, 3, n).unwrap().value;
            assert!(part <= whole, "monotonicity broken on {g:?} keep {keep:?}");
        }
    }

    /// The pending partition is additive for the plain hitting optimum:
    /// opt(G) equals the sum over pending components plus the free part.
    #[test]
    fn pending_partition_is_additive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let mut tested = 0;
        while tested < 40 {
            let n = rng.gen_range(4..=9);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let t = 3;
            let free = non_kt_vertices(&g, t);
            let host = g.vertex_set().difference(&free);
            if host.is_empty() {
                continue;
            }
            let (hg, map) = g.induced(&host);
            let Ok(local) = compute_bed_root(&hg, t, n) else {
                continue;
            };
            let roots: Vec<VertexSet> = local.roots.iter().map(|r| map.set_to_old(r)).collect();
            let dec = pending_partition(&g, t, &free, &roots).unwrap();
            let whole = crate::oracle::brute_opt_kt(&g, t).unwrap();
            let mut parts = 0;
            for comp in dec.pending.values() {
                let (sub, _) = g.induced(comp);
                parts += crate::oracle::brute_opt_kt(&sub, t).unwrap();
            }
            let (free_sub, _) = g.induced(&free);
            parts += crate::oracle::brute_opt_kt(&free_sub, t).unwrap();
            assert_eq!(whole, parts, "additivity broken on {g:?}");
            tested += 1;
        }
    }
}
