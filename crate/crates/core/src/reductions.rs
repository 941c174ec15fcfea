//! Instance generators reducing CNF satisfiability to copy-hitting: the
//! single-level reduction (disjoint connector copies per literal) and the
//! bounded-treedepth reduction (shared connector per clause, circular
//! gadgets). Both output a graph, a modulator of size `|V(h)| * n`, and a
//! budget such that the formula is satisfiable exactly when the budget
//! suffices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::{Graph, Relabeling, VertexSet};

/// A CNF formula with variables `1..=num_vars`; a literal is a signed
/// variable index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(CoreError::PreconditionViolated(format!(
                    "clause {} is empty",
                    i + 1
                )));
            }
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var == 0 || var > num_vars {
                    return Err(CoreError::PreconditionViolated(format!(
                        "literal {lit} out of range in clause {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Exhaustive satisfiability check; test-scale formulas only.
    pub fn is_satisfiable(&self) -> Result<bool> {
        if self.num_vars > 22 {
            return Err(CoreError::CapExceeded {
                what: "satisfiability variables",
                got: self.num_vars,
                cap: 22,
            });
        }
        for assignment in 0u64..(1 << self.num_vars) {
            let ok = self.clauses.iter().all(|clause| {
                clause.iter().any(|&lit| {
                    let var = lit.unsigned_abs() as usize;
                    let value = assignment & (1 << (var - 1)) != 0;
                    (lit > 0) == value
                })
            });
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// What a vertex of a generated instance is for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum RoleTag {
    VariableCopy { var: usize },
    ClauseCopy { clause: usize, index: usize },
    GadgetAttachment { clause: usize, gadget: usize, position: usize },
    Transversal { clause: usize },
    HPrime { clause: usize, literal: usize },
}

/// A generated instance together with the audit structure.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub graph: Graph,
    /// The modulator: all variable-copy vertices.
    pub modulator: VertexSet,
    pub budget: usize,
    pub role_tags: BTreeMap<usize, RoleTag>,
    pub h: Graph,
    /// Pairwise disjoint tagged copies of `h`; exactly `budget` many.
    pub disjoint_copies: Vec<VertexSet>,
    /// The per-literal transversal copies.
    pub transversal_copies: Vec<VertexSet>,
}

/// Disjoint nonempty `A`, `B` with no edge between them, maximizing
/// `|A| + |B|`; ties broken lexicographically. Exhaustive search.
pub fn find_anticomplete_pair(h: &Graph) -> Result<(VertexSet, VertexSet)> {
    let n = h.n();
    let full: u32 = if n >= 32 { u32::MAX } else { (1 << n) - 1 };
    if n > 16 {
        return Err(CoreError::CapExceeded {
            what: "anticomplete-pair search vertices",
            got: n,
            cap: 16,
        });
    }
    let mut best: Option<(VertexSet, VertexSet)> = None;
    for a_mask in 1u32..=full {
        let a = VertexSet::from_mask(a_mask as u64);
        // vertices with no edge into A
        let mut forbidden = a.clone();
        for v in a.iter() {
            for &u in h.neighbors(v) {
                forbidden.insert(u);
            }
        }
        let pool: Vec<usize> = (0..n).filter(|&v| !forbidden.contains(v)).collect();
        if pool.is_empty() {
            continue;
        }
        for b_mask in 1u32..(1 << pool.len()) {
            let b: VertexSet = pool
                .iter()
                .enumerate()
                .filter(|(i, _)| b_mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let cand = (a.clone(), b);
            let better = match &best {
                None => true,
                Some((ba, bb)) => {
                    let score = cand.0.len() + cand.1.len();
                    let best_score = ba.len() + bb.len();
                    score > best_score
                        || (score == best_score && (&cand.0, &cand.1) < (ba, bb))
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best.ok_or(CoreError::IsClique)
}

/// Does some independent set disconnect `h`? Brute force over independent
/// sets; cap 12 vertices.
pub fn has_stable_cutset(h: &Graph) -> Result<bool> {
    if h.n() > 12 {
        return Err(CoreError::CapExceeded {
            what: "stable-cutset search vertices",
            got: h.n(),
            cap: 12,
        });
    }
    let n = h.n();
    for mask in 1u64..(1 << n) {
        let s = VertexSet::from_mask(mask);
        if s.len() == n || !independent(h, &s) {
            continue;
        }
        let rest = h.vertex_set().difference(&s);
        if h.components_within(&rest).len() > 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

fn independent(g: &Graph, s: &VertexSet) -> bool {
    let vs = s.as_slice();
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if g.has_edge(vs[i], vs[j]) {
                return false;
            }
        }
    }
    true
}

fn is_biconnected(h: &Graph) -> bool {
    if h.n() < 2 || !h.is_connected() {
        return false;
    }
    (0..h.n()).all(|v| {
        let (rest, _) = h.remove_vertices(&VertexSet::singleton(v));
        rest.is_connected()
    })
}

fn is_complete(h: &Graph) -> bool {
    h.m() == h.n() * (h.n() - 1) / 2
}

/// Growable graph wrapper tolerating repeated edge requests.
struct Builder {
    adj: Vec<Vec<usize>>,
}

impl Builder {
    fn new() -> Self {
        Builder { adj: Vec::new() }
    }

    fn fresh_block(&mut self, size: usize) -> Vec<usize> {
        let base = self.adj.len();
        self.adj.extend(std::iter::repeat_with(Vec::new).take(size));
        (base..base + size).collect()
    }

    fn connect(&mut self, u: usize, v: usize) {
        assert_ne!(u, v);
        if !self.adj[u].contains(&v) {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
    }

    fn finish(self) -> Graph {
        let mut g = Graph::new(self.adj.len());
        for (u, vs) in self.adj.iter().enumerate() {
            for &v in vs {
                if u < v {
                    g.add_edge(u, v).expect("builder edges are simple");
                }
            }
        }
        g
    }
}

/// Copies `h` onto a fresh block and returns the block (position i plays
/// h-vertex i).
fn stamp_copy(b: &mut Builder, h: &Graph) -> Vec<usize> {
    let block = b.fresh_block(h.n());
    for (u, v) in h.edges() {
        b.connect(block[u], block[v]);
    }
    block
}

/// An assembled circular gadget.
#[derive(Clone, Debug)]
pub struct AbGadget {
    pub graph: Graph,
    /// Attachment vertices `y_1..y_{2a}` in circular order.
    pub attachments: Vec<usize>,
    /// Odd-position attachments, carrying a copy of `h[A]`.
    pub a_vertices: VertexSet,
    /// Even-position attachments.
    pub b_vertices: VertexSet,
    /// The size-`b` subset of the even attachments carrying `h[B]`.
    pub b_bar: Vec<usize>,
    /// The 2a glued copies of `h`, as vertex sets.
    pub copies: Vec<VertexSet>,
    /// The `a` pairwise disjoint (even-indexed) copies.
    pub disjoint_copies: Vec<VertexSet>,
}

/// Builds the circular gadget: `2a` copies of `h` glued by identifying
/// vertex `s` of each copy with vertex `t` of the next, with `h[A]` stamped
/// on the odd attachments and `h[B]` on the lexicographically least `b`-
/// subset of the even attachments.
pub fn build_ab_gadget(
    h: &Graph,
    a_set: &VertexSet,
    b_set: &VertexSet,
    s: usize,
    t_vertex: usize,
) -> Result<AbGadget> {
    if s == t_vertex {
        return Err(CoreError::PreconditionViolated(
            "gluing vertices must be distinct".into(),
        ));
    }
    if a_set.is_empty() || b_set.is_empty() || !a_set.is_disjoint(b_set) {
        return Err(CoreError::PreconditionViolated(
            "gadget sides must be disjoint and nonempty".into(),
        ));
    }
    for u in a_set.iter() {
        for v in b_set.iter() {
            if h.has_edge(u, v) {
                return Err(CoreError::PreconditionViolated(
                    "gadget sides must be anticomplete".into(),
                ));
            }
        }
    }
    let (a_set, b_set) = if a_set.len() >= b_set.len() {
        (a_set.clone(), b_set.clone())
    } else {
        (b_set.clone(), a_set.clone()) // enforce max(a, b) on the A side
    };
    let a = a_set.len();
    let b = b_set.len();
    let copies_total = 2 * a;

    let mut builder = Builder::new();
    let attachments = builder.fresh_block(copies_total); // y_1..y_{2a}
    let mut copies = Vec::new();
    for i in 0..copies_total {
        // copy i+1 plays s at y_{i+1} and t at y_i (circularly)
        let y_s = attachments[i];
        let y_t = attachments[(i + copies_total - 1) % copies_total];
        let interior = builder.fresh_block(h.n() - 2);
        let mut slot = vec![usize::MAX; h.n()];
        slot[s] = y_s;
        slot[t_vertex] = y_t;
        let mut next = 0;
        for hv in 0..h.n() {
            if slot[hv] == usize::MAX {
                slot[hv] = interior[next];
                next += 1;
            }
        }
        for (u, v) in h.edges() {
            builder.connect(slot[u], slot[v]);
        }
        copies.push(slot.iter().copied().collect::<VertexSet>());
    }
    // h[A] on the odd attachments (positions 1,3,..), h[B] on the least b
    // even attachments
    let a_vertices: Vec<usize> = (0..copies_total).step_by(2).map(|i| attachments[i]).collect();
    let b_vertices: Vec<usize> = (1..copies_total)
        .step_by(2)
        .map(|i| attachments[i])
        .collect();
    let a_sorted: Vec<usize> = a_set.iter().collect();
    for i in 0..a {
        for j in (i + 1)..a {
            if h.has_edge(a_sorted[i], a_sorted[j]) {
                builder.connect(a_vertices[i], a_vertices[j]);
            }
        }
    }
    let b_sorted: Vec<usize> = b_set.iter().collect();
    let b_bar: Vec<usize> = b_vertices.iter().take(b).copied().collect();
    for i in 0..b {
        for j in (i + 1)..b {
            if h.has_edge(b_sorted[i], b_sorted[j]) {
                builder.connect(b_bar[i], b_bar[j]);
            }
        }
    }
    let disjoint_copies: Vec<VertexSet> = copies.iter().skip(1).step_by(2).cloned().collect();
    Ok(AbGadget {
        graph: builder.finish(),
        attachments,
        a_vertices: a_vertices.iter().copied().collect(),
        b_vertices: b_vertices.iter().copied().collect(),
        b_bar,
        copies,
        disjoint_copies,
    })
}

/// Lexicographically least non-adjacent vertex pair.
fn least_nonadjacent_pair(h: &Graph) -> Option<(usize, usize)> {
    for u in 0..h.n() {
        for v in (u + 1)..h.n() {
            if !h.has_edge(u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

/// The single-level reduction: one copy of `h` per variable, per clause a
/// chain of `c_j - 1` copies with two endpoint vertices, one fresh
/// connector copy of `h - {u,v,w}` per literal, and per-literal transversal
/// copies through the signed variable vertex.
pub fn reduce_cnf_ved(phi: &CnfFormula, h: &Graph) -> Result<ReductionOutput> {
    if !is_biconnected(h) {
        return Err(CoreError::PreconditionViolated(
            "pattern must be biconnected".into(),
        ));
    }
    if is_complete(h) {
        return Err(CoreError::PreconditionViolated(
            "pattern must not be a clique".into(),
        ));
    }
    let (u, v) = least_nonadjacent_pair(h).expect("non-clique has a non-adjacent pair");
    let w = (0..h.n()).find(|&x| x != u && x != v).expect("h has >= 4 vertices");
    let (z_plus, z_minus) = (0, 1);
    let core = VertexSet::from_vec(vec![u, v, w]);
    let keep = h.vertex_set().difference(&core);
    let (h_prime, h_prime_map) = h.induced(&keep);

    let mut b = Builder::new();
    let mut tags: BTreeMap<usize, RoleTag> = BTreeMap::new();
    let mut disjoint_copies = Vec::new();
    let mut transversal_copies = Vec::new();

    // variable copies
    let mut var_blocks = Vec::new();
    for var in 1..=phi.num_vars {
        let block = stamp_copy(&mut b, h);
        for &vertex in &block {
            tags.insert(vertex, RoleTag::VariableCopy { var });
        }
        disjoint_copies.push(block.iter().copied().collect());
        var_blocks.push(block);
    }
    let modulator: VertexSet = var_blocks.iter().flatten().copied().collect();

    for (cj, clause) in phi.clauses.iter().enumerate() {
        let width = clause.len();
        // ordered clause copies 1..width-1 plus the two endpoints
        let mut clause_blocks = Vec::new();
        for index in 1..width {
            let block = stamp_copy(&mut b, h);
            for &vertex in &block {
                tags.insert(vertex, RoleTag::ClauseCopy { clause: cj, index });
            }
            disjoint_copies.push(block.iter().copied().collect());
            clause_blocks.push(block);
        }
        let u0 = b.fresh_block(1)[0];
        let v_last = b.fresh_block(1)[0];
        tags.insert(u0, RoleTag::Transversal { clause: cj });
        tags.insert(v_last, RoleTag::Transversal { clause: cj });

        for (li, &lit) in clause.iter().enumerate() {
            let connector = b.fresh_block(h_prime.n());
            for (hu, hv) in h_prime.edges() {
                b.connect(connector[hu], connector[hv]);
            }
            for &vertex in &connector {
                tags.insert(vertex, RoleTag::HPrime { clause: cj, literal: li });
            }
            let var = lit.unsigned_abs() as usize;
            let z_role = if lit > 0 { z_plus } else { z_minus };
            let z = var_blocks[var - 1][z_role];
            let u_side = if li == 0 { u0 } else { clause_blocks[li - 1][u] };
            let v_side = if li == width - 1 {
                v_last
            } else {
                clause_blocks[li][v]
            };
            // complete the transversal copy: w -> z, u -> u_side, v -> v_side
            let slot = |hv: usize| -> usize {
                if hv == w {
                    z
                } else if hv == u {
                    u_side
                } else if hv == v {
                    v_side
                } else {
                    connector[h_prime_map.to_new(hv).expect("interior vertex")]
                }
            };
            for (hu, hv) in h.edges() {
                b.connect(slot(hu), slot(hv));
            }
            transversal_copies.push((0..h.n()).map(slot).collect());
        }
    }

    let width_sum: usize = phi.clauses.iter().map(|c| c.len()).sum();
    let budget = phi.num_vars + width_sum - phi.num_clauses();
    debug_assert_eq!(disjoint_copies.len(), budget);
    Ok(ReductionOutput {
        graph: b.finish(),
        modulator,
        budget,
        role_tags: tags,
        h: h.clone(),
        disjoint_copies,
        transversal_copies,
    })
}

/// The bounded-treedepth reduction: per clause, `c_j - 1` circular gadgets
/// plus boundary blocks, a single shared connector copy of
/// `h - (A ∪ B ∪ {w})`, and per-literal transversal copies.
pub fn reduce_cnf_td(phi: &CnfFormula, h: &Graph) -> Result<ReductionOutput> {
    if is_complete(h) {
        return Err(CoreError::PreconditionViolated(
            "pattern must not be a clique".into(),
        ));
    }
    if has_stable_cutset(h)? {
        return Err(CoreError::PreconditionViolated(
            "pattern must not have a stable cutset".into(),
        ));
    }
    let (a_raw, b_raw) = find_anticomplete_pair(h)?;
    let (a_set, b_set) = if a_raw.len() >= b_raw.len() {
        (a_raw, b_raw)
    } else {
        (b_raw, a_raw)
    };
    let a = a_set.len();
    let b_count = b_set.len();
    let ab = a_set.union(&b_set);
    let w = (0..h.n())
        .find(|&x| !ab.contains(x))
        .expect("a connected non-clique pattern has a vertex outside A ∪ B");
    let (s, t_vertex) = least_nonadjacent_pair(h).expect("non-clique");
    let (z_plus, z_minus) = (0, 1);
    let core = ab.union(&VertexSet::singleton(w));
    let keep = h.vertex_set().difference(&core);
    let (h_prime, h_prime_map) = h.induced(&keep);
    let a_sorted: Vec<usize> = a_set.iter().collect();
    let b_sorted: Vec<usize> = b_set.iter().collect();

    let mut b = Builder::new();
    let mut tags: BTreeMap<usize, RoleTag> = BTreeMap::new();
    let mut disjoint_copies = Vec::new();
    let mut transversal_copies = Vec::new();

    let mut var_blocks = Vec::new();
    for var in 1..=phi.num_vars {
        let block = stamp_copy(&mut b, h);
        for &vertex in &block {
            tags.insert(vertex, RoleTag::VariableCopy { var });
        }
        disjoint_copies.push(block.iter().copied().collect());
        var_blocks.push(block);
    }
    let modulator: VertexSet = var_blocks.iter().flatten().copied().collect();

    for (cj, clause) in phi.clauses.iter().enumerate() {
        let width = clause.len();
        // c_j - 1 gadgets; positional A-sides and B-bars
        let mut a_sides: Vec<Vec<usize>> = Vec::new(); // A_j^0 .. A_j^{width-1}
        let mut b_bars: Vec<Vec<usize>> = Vec::new(); // B̄_j^1 .. B̄_j^{width}

        // boundary A_j^0: a fresh copy of h[A]
        let a0 = b.fresh_block(a);
        for i in 0..a {
            for j in (i + 1)..a {
                if h.has_edge(a_sorted[i], a_sorted[j]) {
                    b.connect(a0[i], a0[j]);
                }
            }
        }
        for &vertex in &a0 {
            tags.insert(vertex, RoleTag::Transversal { clause: cj });
        }
        a_sides.push(a0);

        for gi in 1..width {
            let gadget = build_ab_gadget(h, &a_set, &b_set, s, t_vertex)?;
            let offset = b.adj.len();
            let block = b.fresh_block(gadget.graph.n());
            for (gu, gv) in gadget.graph.edges() {
                b.connect(block[gu], block[gv]);
            }
            for (pos, &y) in gadget.attachments.iter().enumerate() {
                tags.insert(offset + y, RoleTag::GadgetAttachment {
                    clause: cj,
                    gadget: gi,
                    position: pos + 1,
                });
            }
            for copy in &gadget.copies {
                for vertex in copy.iter() {
                    tags.entry(offset + vertex).or_insert(RoleTag::ClauseCopy {
                        clause: cj,
                        index: gi,
                    });
                }
            }
            for copy in &gadget.disjoint_copies {
                disjoint_copies.push(copy.iter().map(|v| offset + v).collect());
            }
            a_sides.push(
                gadget
                    .a_vertices
                    .iter()
                    .map(|v| offset + v)
                    .collect::<Vec<usize>>(),
            );
            b_bars.push(gadget.b_bar.iter().map(|&v| offset + v).collect());
        }

        // boundary B_j^{width}: h[B] plus isolated vertices, a vertices total
        let b_last = b.fresh_block(a);
        for i in 0..b_count {
            for j in (i + 1)..b_count {
                if h.has_edge(b_sorted[i], b_sorted[j]) {
                    b.connect(b_last[i], b_last[j]);
                }
            }
        }
        for &vertex in &b_last {
            tags.insert(vertex, RoleTag::Transversal { clause: cj });
        }
        b_bars.push(b_last[..b_count].to_vec());

        // the shared connector copy of h'
        let connector = b.fresh_block(h_prime.n());
        for (hu, hv) in h_prime.edges() {
            b.connect(connector[hu], connector[hv]);
        }
        for &vertex in &connector {
            tags.insert(vertex, RoleTag::HPrime { clause: cj, literal: 0 });
        }

        for (li, &lit) in clause.iter().enumerate() {
            let var = lit.unsigned_abs() as usize;
            let z_role = if lit > 0 { z_plus } else { z_minus };
            let z = var_blocks[var - 1][z_role];
            let a_side = &a_sides[li];
            let b_side = &b_bars[li];
            let slot = |hv: usize| -> usize {
                if hv == w {
                    z
                } else if let Ok(pos) = a_sorted.binary_search(&hv) {
                    a_side[pos]
                } else if let Ok(pos) = b_sorted.binary_search(&hv) {
                    b_side[pos]
                } else {
                    connector[h_prime_map.to_new(hv).expect("interior vertex")]
                }
            };
            for (hu, hv) in h.edges() {
                b.connect(slot(hu), slot(hv));
            }
            transversal_copies.push((0..h.n()).map(slot).collect());
        }
    }

    let budget = phi.num_vars
        + phi
            .clauses
            .iter()
            .map(|c| a * (c.len() - 1))
            .sum::<usize>();
    debug_assert_eq!(disjoint_copies.len(), budget);
    Ok(ReductionOutput {
        graph: b.finish(),
        modulator,
        budget,
        role_tags: tags,
        h: h.clone(),
        disjoint_copies,
        transversal_copies,
    })
}

/// Renders the instance as DOT for inspection.
pub fn to_dot(out: &ReductionOutput) -> String {
    use std::fmt::Write;
    let mut s = String::from("graph reduction {\n");
    for v in out.graph.vertices() {
        let label = match out.role_tags.get(&v) {
            Some(RoleTag::VariableCopy { var }) => format!("x{var}"),
            Some(RoleTag::ClauseCopy { clause, index }) => format!("c{clause}.{index}"),
            Some(RoleTag::GadgetAttachment { clause, gadget, position }) => {
                format!("y{clause}.{gadget}.{position}")
            }
            Some(RoleTag::Transversal { clause }) => format!("t{clause}"),
            Some(RoleTag::HPrime { clause, .. }) => format!("f{clause}"),
            None => String::new(),
        };
        let _ = writeln!(s, "  v{v} [label=\"{v}:{label}\"];");
    }
    for (u, v) in out.graph.edges() {
        let _ = writeln!(s, "  v{u} -- v{v};");
    }
    s.push_str("}\n");
    s
}

/// Convenience used by tests and relabeling-sensitive callers.
pub fn relabel_set(map: &Relabeling, set: &VertexSet) -> VertexSet {
    map.set_to_new(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn anticomplete_pair_examples() {
        let (a, b) = find_anticomplete_pair(&Graph::diamond()).unwrap();
        assert_eq!((a.as_slice(), b.as_slice()), (&[0][..], &[1][..]));

        let (a, b) = find_anticomplete_pair(&Graph::cycle(5)).unwrap();
        assert_eq!(a.len() + b.len(), 3);

        assert!(matches!(
            find_anticomplete_pair(&Graph::complete(4)),
            Err(CoreError::IsClique)
        ));
    }

    #[test]
    fn stable_cutset_examples() {
        assert!(!has_stable_cutset(&Graph::diamond()).unwrap());
        assert!(has_stable_cutset(&Graph::path(3)).unwrap());
        assert!(!has_stable_cutset(&Graph::complete(4)).unwrap());
        // C_5 has a stable cutset (two non-adjacent vertices)
        assert!(has_stable_cutset(&Graph::cycle(5)).unwrap());
    }

    #[test]
    fn diamond_gadget_structure() {
        let h = Graph::diamond();
        let g = build_ab_gadget(
            &h,
            &VertexSet::singleton(0),
            &VertexSet::singleton(1),
            0,
            1,
        )
        .unwrap();
        assert_eq!(g.graph.n(), 6);
        assert_eq!(g.copies.len(), 2);
        assert_eq!(g.disjoint_copies.len(), 1);
        // the two copies are edge-disjoint
        let mut edge_sets = Vec::new();
        for copy in &g.copies {
            let vs = copy.as_slice();
            let mut es = Vec::new();
            for i in 0..vs.len() {
                for j in (i + 1)..vs.len() {
                    if g.graph.has_edge(vs[i], vs[j]) {
                        es.push((vs[i], vs[j]));
                    }
                }
            }
            edge_sets.push(es);
        }
        assert!(edge_sets[0].iter().all(|e| !edge_sets[1].contains(e)));
        // every tagged copy really carries the pattern
        for copy in &g.copies {
            let (sub, _) = g.graph.induced(copy);
            assert!(crate::iso::occurrences_of(&h, &sub, false).unwrap().is_some());
        }
    }

    #[test]
    fn diamond_gadget_optimal_hitting_sets() {
        let h = Graph::diamond();
        let g = build_ab_gadget(
            &h,
            &VertexSet::singleton(0),
            &VertexSet::singleton(1),
            0,
            1,
        )
        .unwrap();
        let targets = oracle::h_copy_masks(&g.graph, &h, false).unwrap();
        // exhaustive subset scan: all minimum hitting sets
        let n = g.graph.n();
        let mut best = usize::MAX;
        let mut optima = Vec::new();
        for mask in 0u64..(1 << n) {
            if targets.iter().all(|&t| t & mask != 0) {
                let size = mask.count_ones() as usize;
                if size < best {
                    best = size;
                    optima.clear();
                }
                if size == best {
                    optima.push(VertexSet::from_mask(mask));
                }
            }
        }
        assert_eq!(best, 1);
        optima.sort();
        let mut expected = vec![g.a_vertices.clone(), g.b_vertices.clone()];
        expected.sort();
        assert_eq!(optima, expected);
    }

    fn phi(n: usize, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn ved_reduction_counts() {
        let out = reduce_cnf_ved(&phi(2, &[&[1, 2]]), &Graph::diamond()).unwrap();
        assert_eq!(out.budget, 3); // n - m + sum c_j = 2 - 1 + 2
        assert_eq!(out.modulator.len(), 8);
        assert_eq!(out.disjoint_copies.len(), 3);
        assert_eq!(out.transversal_copies.len(), 2);
        // disjointness audit
        for i in 0..out.disjoint_copies.len() {
            for j in (i + 1)..out.disjoint_copies.len() {
                assert!(out.disjoint_copies[i].is_disjoint(&out.disjoint_copies[j]));
            }
        }
        // every tagged copy is a real copy
        for copy in out.disjoint_copies.iter().chain(&out.transversal_copies) {
            let (sub, _) = out.graph.induced(copy);
            assert!(
                crate::iso::occurrences_of(&out.h, &sub, false).unwrap().is_some(),
                "missing copy at {copy:?}"
            );
        }
    }

    #[test]
    fn ved_reduction_correctness_small() {
        let h = Graph::diamond();
        for (formula, expect_sat) in [
            (phi(1, &[&[1][..]]), true),
            (phi(1, &[&[1], &[-1]]), false),
            (phi(2, &[&[1, 2], &[-1, -2]]), true),
            (phi(2, &[&[1], &[-1], &[2]]), false),
        ] {
            let out = reduce_cnf_ved(&formula, &h).unwrap();
            let sat = formula.is_satisfiable().unwrap();
            assert_eq!(sat, expect_sat);
            let hits = oracle::h_hitting_at_most(&out.graph, &h, false, out.budget).unwrap();
            assert_eq!(sat, hits, "formula {formula:?}");
        }
    }

    #[test]
    fn ved_reduction_residual_parameter() {
        let h = Graph::diamond();
        let out = reduce_cnf_ved(&phi(2, &[&[1, 2], &[-1, 2]]), &h).unwrap();
        let rest = out.graph.vertex_set().difference(&out.modulator);
        let (sub, _) = out.graph.induced(&rest);
        assert_eq!(oracle::brute_ved_plus(&sub, &h, false).unwrap(), 1);
        assert_eq!(oracle::brute_ved_plus(&sub, &h, true).unwrap(), 1);
    }

    #[test]
    fn td_reduction_counts_and_depth() {
        let h = Graph::diamond();
        let out = reduce_cnf_td(&phi(2, &[&[1, 2]]), &h).unwrap();
        assert_eq!(out.budget, 3); // n + a*(c_j - 1) = 2 + 1
        assert_eq!(out.modulator.len(), 8);
        assert_eq!(out.disjoint_copies.len(), 3);
        let rest = out.graph.vertex_set().difference(&out.modulator);
        let (sub, _) = out.graph.induced(&rest);
        let (td, _) = crate::treedepth::treedepth_exact(&sub).unwrap();
        assert!(td <= 10, "treedepth {td} exceeds 2 td(h) + |V(h)|");
    }

    #[test]
    fn td_reduction_correctness_small() {
        let h = Graph::diamond();
        for formula in [
            phi(1, &[&[1][..]]),
            phi(1, &[&[1], &[-1]]),
            phi(2, &[&[1, 2], &[-1, -2]]),
            phi(2, &[&[1, -2], &[-1, 2], &[2]]),
        ] {
            let out = reduce_cnf_td(&formula, &h).unwrap();
            let sat = formula.is_satisfiable().unwrap();
            let hits = oracle::h_hitting_at_most(&out.graph, &h, false, out.budget).unwrap();
            assert_eq!(sat, hits, "formula {formula:?}");
        }
    }

    #[test]
    fn induced_and_plain_hitting_agree_on_outputs() {
        let h = Graph::diamond();
        for formula in [phi(1, &[&[1][..]]), phi(1, &[&[1], &[-1]])] {
            for out in [
                reduce_cnf_ved(&formula, &h).unwrap(),
                reduce_cnf_td(&formula, &h).unwrap(),
            ] {
                let plain = oracle::h_hitting_at_most(&out.graph, &h, false, out.budget).unwrap();
                let induced = oracle::h_hitting_at_most(&out.graph, &h, true, out.budget).unwrap();
                assert_eq!(plain, induced);
            }
        }
    }

    #[test]
    fn rejects_bad_patterns() {
        assert!(reduce_cnf_ved(&phi(1, &[&[1]]), &Graph::complete(4)).is_err());
        assert!(reduce_cnf_ved(&phi(1, &[&[1]]), &Graph::path(4)).is_err());
        // C_5 is biconnected and not a clique: fine for the first reduction,
        // rejected by the second (stable cutset)
        assert!(reduce_cnf_ved(&phi(1, &[&[1]]), &Graph::cycle(5)).is_ok());
        assert!(reduce_cnf_td(&phi(1, &[&[1]]), &Graph::cycle(5)).is_err());
    }
}
