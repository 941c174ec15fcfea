//! Undirected simple graphs over dense vertex ids `0..n`, plus the sorted
//! vertex-set type used across the crate.
//!
//! Everything here is immutable after construction and keeps a canonical
//! order (sorted adjacency, sorted sets), which the rest of the crate relies
//! on for deterministic output.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// A sorted, duplicate-free set of vertex identifiers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_vec(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn min_vertex(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::new();
        let mut j = 0;
        for &v in &self.0 {
            while j < other.0.len() && other.0[j] < v {
                j += 1;
            }
            if j >= other.0.len() || other.0[j] != v {
                out.push(v);
            }
        }
        VertexSet(out)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// Bitmask representation; only valid when all members are below 64.
    pub fn to_mask(&self) -> Option<u64> {
        if self.max_vertex().map_or(true, |m| m < 64) {
            Some(self.0.iter().fold(0u64, |acc, &v| acc | (1 << v)))
        } else {
            None
        }
    }

    pub fn from_mask(mut mask: u64) -> Self {
        let mut out = Vec::new();
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            out.push(v);
            mask &= mask - 1;
        }
        VertexSet(out)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        VertexSet::from_vec(v)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vec(iter.into_iter().collect())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A family of vertex sets, each inducing a clique of size in `[1, t-1]`.
///
/// Canonical order (sorted, deduplicated) so that iteration and serialization
/// are deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CliqueFamily(Vec<VertexSet>);

impl CliqueFamily {
    pub fn empty() -> Self {
        CliqueFamily(Vec::new())
    }

    /// Builds a family without checking the clique condition; use
    /// [`CliqueFamily::validated`] where the input contract matters.
    pub fn from_sets(mut sets: Vec<VertexSet>) -> Self {
        sets.sort();
        sets.dedup();
        CliqueFamily(sets)
    }

    /// Builds a family, verifying that every member is a clique of `g` with
    /// size in `[1, t-1]`.
    pub fn validated(sets: Vec<VertexSet>, g: &Graph, t: usize) -> Result<Self> {
        for z in &sets {
            if z.is_empty() || z.len() > t - 1 {
                return Err(CoreError::PreconditionViolated(format!(
                    "family member {z:?} has size {} outside [1, {}]",
                    z.len(),
                    t - 1
                )));
            }
            if !g.is_clique(z) {
                return Err(CoreError::PreconditionViolated(format!(
                    "family member {z:?} does not induce a clique"
                )));
            }
        }
        Ok(CliqueFamily::from_sets(sets))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexSet> {
        self.0.iter()
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.0
    }

    pub fn push(&mut self, set: VertexSet) {
        if !self.0.contains(&set) {
            self.0.push(set);
            self.0.sort();
        }
    }

    pub fn union(&self, other: &CliqueFamily) -> CliqueFamily {
        let mut sets = self.0.clone();
        sets.extend(other.0.iter().cloned());
        CliqueFamily::from_sets(sets)
    }

    /// Members fully contained in `keep`.
    pub fn contained_in(&self, keep: &VertexSet) -> CliqueFamily {
        CliqueFamily::from_sets(
            self.0
                .iter()
                .filter(|z| z.is_subset(keep))
                .cloned()
                .collect(),
        )
    }

    /// Drops every member that intersects `hit`.
    pub fn unhit_by(&self, hit: &VertexSet) -> CliqueFamily {
        CliqueFamily::from_sets(
            self.0
                .iter()
                .filter(|z| z.is_disjoint(hit))
                .cloned()
                .collect(),
        )
    }

    /// Restriction: replaces each member `Z` by `Z ∩ keep`. May produce the
    /// empty set, which callers must handle.
    pub fn restricted_to(&self, keep: &VertexSet) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self.0.iter().map(|z| z.intersection(keep)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn relabel(&self, map: &Relabeling) -> CliqueFamily {
        CliqueFamily::from_sets(self.0.iter().map(|z| map.set_to_new(z)).collect())
    }
}

/// Relabeling that accompanies induced-subgraph extraction.
#[derive(Clone, Debug)]
pub struct Relabeling {
    new_to_old: Vec<usize>,
    old_to_new: Vec<Option<usize>>,
}

impl Relabeling {
    pub fn identity(n: usize) -> Self {
        Relabeling {
            new_to_old: (0..n).collect(),
            old_to_new: (0..n).map(Some).collect(),
        }
    }

    pub fn to_old(&self, new: usize) -> usize {
        self.new_to_old[new]
    }

    pub fn to_new(&self, old: usize) -> Option<usize> {
        self.old_to_new.get(old).copied().flatten()
    }

    pub fn set_to_old(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|v| self.to_old(v)).collect()
    }

    /// Maps a set of old ids into the subgraph, dropping vertices that were
    /// not kept.
    pub fn set_to_new(&self, set: &VertexSet) -> VertexSet {
        set.iter().filter_map(|v| self.to_new(v)).collect()
    }
}

/// Undirected simple graph. No self-loops, no parallel edges, adjacency
/// lists kept sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(CoreError::Edge(format!("self-loop at {u}")));
        }
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(CoreError::Edge(format!(
                "edge ({u},{v}) out of range for {n} vertices"
            )));
        }
        if self.has_edge(u, v) {
            return Err(CoreError::Edge(format!("duplicate edge ({u},{v})")));
        }
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        self.m += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.adj.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in self.vertices() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        let vs = set.as_slice();
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                if !self.has_edge(vs[i], vs[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Neighborhood of a set: `N(C) = ∪_{v∈C} N(v) \ C`.
    pub fn set_neighborhood(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in set.iter() {
            for &u in self.neighbors(v) {
                if !set.contains(u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    /// Induced subgraph on `keep` together with the relabeling map. Vertex
    /// ids in the subgraph are `0..keep.len()` in the order of `keep`.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Relabeling) {
        let new_to_old: Vec<usize> = keep.iter().collect();
        let mut old_to_new = vec![None; self.n()];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let mut g = Graph::new(new_to_old.len());
        for (new_u, &old_u) in new_to_old.iter().enumerate() {
            for &old_v in self.neighbors(old_u) {
                if let Some(new_v) = old_to_new[old_v] {
                    if new_u < new_v {
                        g.add_edge(new_u, new_v).expect("induced edge is valid");
                    }
                }
            }
        }
        (
            g,
            Relabeling {
                new_to_old,
                old_to_new,
            },
        )
    }

    pub fn remove_vertices(&self, drop: &VertexSet) -> (Graph, Relabeling) {
        let keep = self.vertex_set().difference(drop);
        self.induced(&keep)
    }

    /// Connected components, each as a sorted vertex set, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(VertexSet::from_vec(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components().len() == 1
    }

    /// Connected components of the induced subgraph on `within`, without
    /// materializing the subgraph. Ordered by smallest vertex; ids are the
    /// host graph's.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in within.iter() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in self.neighbors(v) {
                    if within.contains(u) && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(VertexSet::from_vec(comp));
        }
        out
    }

    /// Per-vertex adjacency bitmasks; available only for graphs on fewer
    /// than 65 vertices.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|ns| ns.iter().fold(0u64, |acc, &v| acc | (1 << v)))
                .collect(),
        )
    }

    // Small named graphs used by fixtures and tests.

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 1..n {
            g.add_edge(u - 1, u).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).unwrap();
        }
        g
    }

    /// `K_4` minus one edge; the four vertices are `{0,1,2,3}` with `0` and
    /// `1` non-adjacent.
    pub fn diamond() -> Graph {
        Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.m(), self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_vec(vec![3, 1, 2, 1]);
        let b = VertexSet::from_vec(vec![2, 4]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a.union(&b).as_slice(), &[1, 2, 3, 4]);
        assert_eq!(a.intersection(&b).as_slice(), &[2]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 3]);
        assert!(!a.is_disjoint(&b));
        assert!(VertexSet::from_vec(vec![1, 2]).is_subset(&a));
        assert_eq!(VertexSet::from_mask(0b1011).as_slice(), &[0, 1, 3]);
        assert_eq!(a.to_mask(), Some(0b1110));
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        let mut g = Graph::new(3);
        assert!(g.add_edge(0, 0).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
        assert!(g.add_edge(0, 5).is_err());
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = Graph::from_edges(4, &[(2, 0), (3, 1), (1, 0)]).unwrap();
        for u in g.vertices() {
            let ns = g.neighbors(u);
            assert!(ns.windows(2).all(|w| w[0] < w[1]));
            for &v in ns {
                assert!(g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn induced_subgraph_relabeling() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let keep = VertexSet::from_vec(vec![1, 2, 4]);
        let (sub, map) = g.induced(&keep);
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.m(), 1); // only (1,2) survives
        assert_eq!(map.to_old(0), 1);
        assert_eq!(map.to_new(4), Some(2));
        assert_eq!(map.to_new(0), None);
        assert_eq!(map.set_to_old(&VertexSet::from_vec(vec![0, 2])).as_slice(), &[1, 4]);
    }

    #[test]
    fn components_are_canonical() {
        let g = Graph::from_edges(6, &[(4, 5), (0, 1), (1, 2)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0].as_slice(), &[0, 1, 2]);
        assert_eq!(comps[1].as_slice(), &[3]);
        assert_eq!(comps[2].as_slice(), &[4, 5]);
    }
}
