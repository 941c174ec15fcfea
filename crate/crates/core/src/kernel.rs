//! The kernelization pipeline for clique hitting with a modulator to
//! bounded elimination parameter: chunk enumeration, the recursive marking
//! procedure, per-round marking, removal of non-marked pending components,
//! the level-descending main loop, and the solution-size base kernel.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::blocking::chunk_bound;
use crate::cliques::{enumerate_t_cliques, set_contains_t_clique};
use crate::decomposition::{
    bed_at_most, compute_bed_root, non_kt_within, RootDecomposition,
};
use crate::ekt::{conflict_positive, solve_ekt, ExtendedInstance, SolveBudget};
use crate::error::{CoreError, Result};
use crate::graph::{CliqueFamily, Graph, VertexSet};

/// Instance of the parameterized decision problem: hit all `t`-cliques of
/// `graph` with at most `budget` vertices, given the modulator `modulator`
/// whose removal leaves elimination parameter at most `lambda`.
#[derive(Clone, Debug)]
pub struct ModulatorInstance {
    pub graph: Graph,
    pub modulator: VertexSet,
    pub budget: usize,
    pub t: usize,
    pub lambda: usize,
}

impl ModulatorInstance {
    /// Validates the modulator promise at construction.
    pub fn new(
        graph: Graph,
        modulator: VertexSet,
        budget: usize,
        t: usize,
        lambda: usize,
    ) -> Result<Self> {
        if t < 3 {
            return Err(CoreError::PreconditionViolated("t must be at least 3".into()));
        }
        if modulator.max_vertex().map_or(false, |m| m >= graph.n()) {
            return Err(CoreError::PreconditionViolated(
                "modulator vertex out of range".into(),
            ));
        }
        let rest = graph.vertex_set().difference(&modulator);
        let (sub, _) = graph.induced(&rest);
        if !bed_at_most(&sub, t, lambda) {
            return Err(CoreError::PreconditionViolated(format!(
                "removing the modulator leaves parameter above {lambda}"
            )));
        }
        Ok(ModulatorInstance {
            graph,
            modulator,
            budget,
            t,
            lambda,
        })
    }
}

/// Caps that keep the marking machinery finite in practice. When the cap is
/// below the true chunk bound `c(lambda,t)` the pipeline still produces an
/// equivalent instance, but the size guarantee is forfeited and the trace is
/// flagged accordingly.
#[derive(Clone, Copy, Debug)]
pub struct KernelCaps {
    pub chunk_cap: usize,
}

impl Default for KernelCaps {
    fn default() -> Self {
        // the true chunk bound for lambda = 1, t = 3
        KernelCaps { chunk_cap: 16 }
    }
}

impl KernelCaps {
    /// `min(c(lambda,t), cap)` and whether the cap actually bites.
    pub fn effective_chunk_bound(&self, lambda: usize, t: usize) -> (usize, bool) {
        match chunk_bound(lambda, t) {
            Ok(c) => {
                if c > BigUint::from(self.chunk_cap) {
                    (self.chunk_cap, true)
                } else {
                    (usize::try_from(c).expect("small bound fits"), false)
                }
            }
            // the true bound is astronomically large; the cap certainly bites
            Err(_) => (self.chunk_cap, true),
        }
    }
}

/// A small t-clique-free subset of the modulator, used as a conflict
/// certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chunk {
    pub members: VertexSet,
}

/// All chunks in size-then-lexicographic order: nonempty subsets of the
/// modulator with at most `min(c(lambda,t), cap)` vertices and no t-clique.
pub fn chunks(inst: &ModulatorInstance, cap: usize) -> Vec<Chunk> {
    assert!(cap >= 1);
    let caps = KernelCaps { chunk_cap: cap };
    let (bound, _) = caps.effective_chunk_bound(inst.lambda, inst.t);
    let elems: Vec<usize> = inst.modulator.iter().collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    for size in 1..=bound.min(elems.len()) {
        chunk_rec(&inst.graph, inst.t, &elems, size, 0, &mut current, &mut out);
    }
    out
}

fn chunk_rec(
    g: &Graph,
    t: usize,
    elems: &[usize],
    size: usize,
    from: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Chunk>,
) {
    if current.len() == size {
        let members: VertexSet = current.iter().copied().collect();
        if !set_contains_t_clique(g, &members, t) {
            out.push(Chunk { members });
        }
        return;
    }
    for i in from..elems.len() {
        if elems.len() - i < size - current.len() {
            break;
        }
        current.push(elems[i]);
        chunk_rec(g, t, elems, size, from.max(i + 1), current, out);
        current.pop();
    }
}

/// Conflict-test cache shared across one kernelization run. Keyed by the
/// exact vertex sets, so hits are guaranteed to be the same computation.
#[derive(Default)]
pub struct ConfCache {
    map: RefCell<HashMap<(VertexSet, VertexSet), bool>>,
}

impl ConfCache {
    fn query(
        &self,
        g: &Graph,
        s1: &VertexSet,
        s2: &VertexSet,
        t: usize,
        lambda: usize,
    ) -> Result<bool> {
        let key = (s1.clone(), s2.clone());
        if let Some(&hit) = self.map.borrow().get(&key) {
            return Ok(hit);
        }
        let result = conflict_positive(g, s1, s2, t, lambda)?;
        self.map.borrow_mut().insert(key, result);
        Ok(result)
    }
}

struct MarkCtx<'a> {
    g: &'a Graph,
    x: &'a VertexSet,
    t: usize,
    lambda: usize,
    chunk_bound: usize,
    cache: &'a ConfCache,
}

/// The recursive marking procedure. Builds a greedy packing of parts
/// `(V_i, N_i)` — pairwise disjoint `V_i`'s in the root, pairwise disjoint
/// `N_i`'s among the free vertices, each inducing a conflict with the chunk
/// — and recurses around the packed free vertices when the packing stays
/// small.
#[allow(clippy::too_many_arguments)]
pub fn mark(
    inst: &ModulatorInstance,
    dec: &RootDecomposition,
    n: &VertexSet,
    x_chunk: &Chunk,
    c: isize,
    n_prime: &VertexSet,
    m_prime: &VertexSet,
    caps: &KernelCaps,
) -> Result<VertexSet> {
    let (bound, _) = caps.effective_chunk_bound(inst.lambda, inst.t);
    let ctx = MarkCtx {
        g: &inst.graph,
        x: &inst.modulator,
        t: inst.t,
        lambda: inst.lambda,
        chunk_bound: bound,
        cache: &ConfCache::default(),
    };
    check_mark_preconditions(&ctx, dec, n, x_chunk, c, n_prime, m_prime)?;
    mark_inner(&ctx, dec, n, x_chunk, c, n_prime, m_prime)
}

fn check_mark_preconditions(
    ctx: &MarkCtx,
    dec: &RootDecomposition,
    n: &VertexSet,
    x_chunk: &Chunk,
    c: isize,
    n_prime: &VertexSet,
    m_prime: &VertexSet,
) -> Result<()> {
    let t = ctx.t;
    if !x_chunk.members.is_subset(ctx.x)
        || x_chunk.members.is_empty()
        || x_chunk.members.len() > ctx.chunk_bound
        || set_contains_t_clique(ctx.g, &x_chunk.members, t)
    {
        return Err(CoreError::PreconditionViolated(
            "chunk is not a valid conflict certificate".into(),
        ));
    }
    if !n_prime.is_subset(n) {
        return Err(CoreError::PreconditionViolated(
            "pinned free vertices must come from the free set".into(),
        ));
    }
    if set_contains_t_clique(ctx.g, &x_chunk.members.union(n_prime), t) {
        return Err(CoreError::PreconditionViolated(
            "chunk plus pinned free vertices contains a t-clique".into(),
        ));
    }
    if c < -1 || c > ctx.chunk_bound as isize {
        return Err(CoreError::PreconditionViolated(format!(
            "marking depth {c} out of range"
        )));
    }
    if n_prime.len() > ctx.chunk_bound.saturating_sub(c.max(0) as usize) {
        return Err(CoreError::PreconditionViolated(
            "too many pinned free vertices for the remaining depth".into(),
        ));
    }
    let root_vertices = dec.root_vertices();
    if !m_prime.is_subset(&root_vertices)
        || m_prime.len() > t - 2
        || !ctx.g.is_clique(m_prime)
    {
        return Err(CoreError::PreconditionViolated(
            "marked-core set must be a small clique inside the root".into(),
        ));
    }
    Ok(())
}

fn mark_inner(
    ctx: &MarkCtx,
    dec: &RootDecomposition,
    n: &VertexSet,
    x_chunk: &Chunk,
    c: isize,
    n_prime: &VertexSet,
    m_prime: &VertexSet,
) -> Result<VertexSet> {
    if c == -1 {
        return Ok(VertexSet::new());
    }
    let packing = build_packing(ctx, dec, n, x_chunk, c as usize, n_prime, m_prime)?;
    let marked_roots = packing
        .iter()
        .fold(VertexSet::new(), |acc, (v, _)| acc.union(v));
    if packing.len() == ctx.x.len() + 1 {
        return Ok(marked_roots);
    }
    let packed_free = packing
        .iter()
        .fold(VertexSet::new(), |acc, (_, ni)| acc.union(ni));
    let mut out = marked_roots;
    for g_vertex in packed_free.iter() {
        let pinned = n_prime.union(&VertexSet::singleton(g_vertex));
        out = out.union(&mark_inner(ctx, dec, n, x_chunk, c - 1, &pinned, m_prime)?);
    }
    Ok(out)
}

/// Greedy maximal packing of parts in `(V_i, N_i)` lexicographic order,
/// stopping at `|X| + 1` parts. Pairs are parts when the free side stays
/// clique-free with the chunk, the root side extends the core to a clique of
/// size below `t`, and the chunk conflicts with the assembled region.
fn build_packing(
    ctx: &MarkCtx,
    dec: &RootDecomposition,
    n: &VertexSet,
    x_chunk: &Chunk,
    c: usize,
    n_prime: &VertexSet,
    m_prime: &VertexSet,
) -> Result<Vec<(VertexSet, VertexSet)>> {
    let limit = ctx.x.len() + 1;
    let mut packing: Vec<(VertexSet, VertexSet)> = Vec::new();
    let mut used_v = VertexSet::new();
    let mut used_n = VertexSet::new();

    let v_candidates = root_side_candidates(ctx, dec, m_prime);
    let free_pool = n.difference(n_prime);
    let n_candidates = ordered_subsets(&free_pool, c);

    'outer: for v_side in &v_candidates {
        if !v_side.is_disjoint(&used_v) {
            continue;
        }
        for n_side in &n_candidates {
            if packing.len() == limit {
                break 'outer;
            }
            if v_side.is_empty() && n_side.is_empty() {
                continue; // a part must claim something
            }
            if !n_side.is_disjoint(&used_n) || !v_side.is_disjoint(&used_v) {
                continue;
            }
            let pinned_union = x_chunk.members.union(n_prime).union(n_side);
            if set_contains_t_clique(ctx.g, &pinned_union, ctx.t) {
                continue;
            }
            let region = m_prime
                .union(&dec.pending_of_set(v_side))
                .union(n_prime)
                .union(n_side);
            if !ctx
                .cache
                .query(ctx.g, &x_chunk.members, &region, ctx.t, ctx.lambda)?
            {
                continue;
            }
            packing.push((v_side.clone(), n_side.clone()));
            used_v = used_v.union(v_side);
            used_n = used_n.union(n_side);
            if !v_side.is_empty() {
                continue 'outer; // this root side is now taken
            }
        }
    }
    Ok(packing)
}

/// Root-side candidates: subsets `V` of the root vertices (including the
/// empty set) such that `V ∪ M'` is a clique on fewer than `t` vertices.
/// Size-then-lexicographic order.
fn root_side_candidates(
    ctx: &MarkCtx,
    dec: &RootDecomposition,
    m_prime: &VertexSet,
) -> Vec<VertexSet> {
    let root_vertices: Vec<usize> = dec.root_vertices().iter().collect();
    let mut out = vec![VertexSet::new()];
    let mut current = Vec::new();
    let max_size = ctx.t - 1;
    clique_side_rec(ctx.g, &root_vertices, m_prime, max_size, 0, &mut current, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn clique_side_rec(
    g: &Graph,
    pool: &[usize],
    m_prime: &VertexSet,
    max_union: usize,
    from: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<VertexSet>,
) {
    for i in from..pool.len() {
        let v = pool[i];
        let candidate: VertexSet = current
            .iter()
            .copied()
            .chain(std::iter::once(v))
            .collect();
        let unioned = candidate.union(m_prime);
        if unioned.len() > max_union || !g.is_clique(&unioned) {
            continue;
        }
        out.push(candidate);
        current.push(v);
        clique_side_rec(g, pool, m_prime, max_union, i + 1, current, out);
        current.pop();
    }
}

/// Subsets of `pool` with at most `cap` elements, size-then-lex, including
/// the empty set.
fn ordered_subsets(pool: &VertexSet, cap: usize) -> Vec<VertexSet> {
    let elems: Vec<usize> = pool.iter().collect();
    let mut out = vec![VertexSet::new()];
    let mut current = Vec::new();
    for size in 1..=cap.min(elems.len()) {
        ordered_subsets_rec(&elems, size, 0, &mut current, &mut out);
    }
    out
}

fn ordered_subsets_rec(
    elems: &[usize],
    size: usize,
    from: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<VertexSet>,
) {
    if current.len() == size {
        out.push(current.iter().copied().collect());
        return;
    }
    for i in from..elems.len() {
        if elems.len() - i < size - current.len() {
            break;
        }
        current.push(elems[i]);
        ordered_subsets_rec(elems, size, i + 1, current, out);
        current.pop();
    }
}

/// Per-round marked sets: `rounds[l]` is what round `l+1` added, pairwise
/// disjoint; `union` is their union.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MarkState {
    pub rounds: Vec<VertexSet>,
    pub union: VertexSet,
}

/// Runs the `t-1` marking rounds: round `l` marks, for every chunk and
/// every small clique core intersecting all previous rounds (plus the empty
/// core), the result of the full-depth marking procedure.
pub fn step1_mark(
    inst: &ModulatorInstance,
    dec: &RootDecomposition,
    n: &VertexSet,
    caps: &KernelCaps,
) -> Result<MarkState> {
    let cache = ConfCache::default();
    step1_mark_cached(inst, dec, n, caps, &cache)
}

fn step1_mark_cached(
    inst: &ModulatorInstance,
    dec: &RootDecomposition,
    n: &VertexSet,
    caps: &KernelCaps,
    cache: &ConfCache,
) -> Result<MarkState> {
    let (bound, _) = caps.effective_chunk_bound(inst.lambda, inst.t);
    let ctx = MarkCtx {
        g: &inst.graph,
        x: &inst.modulator,
        t: inst.t,
        lambda: inst.lambda,
        chunk_bound: bound,
        cache,
    };
    let all_chunks = chunks(inst, caps.chunk_cap);
    let mut rounds: Vec<VertexSet> = Vec::new();
    let mut union = VertexSet::new();
    for _round in 1..=inst.t - 1 {
        let cores = round_cores(&ctx, dec, &rounds);
        let mut marked = VertexSet::new();
        for chunk in &all_chunks {
            for core in &cores {
                let m = mark_inner(
                    &ctx,
                    dec,
                    n,
                    chunk,
                    ctx.chunk_bound as isize,
                    &VertexSet::new(),
                    core,
                )?;
                marked = marked.union(&m);
            }
        }
        let fresh = marked.difference(&union);
        union = union.union(&fresh);
        rounds.push(fresh);
    }
    Ok(MarkState { rounds, union })
}

/// Core candidates for a round: the empty set plus every clique of at most
/// `t-2` previously marked vertices that intersects every earlier round.
/// (Round 1 therefore only uses the empty core.)
fn round_cores(ctx: &MarkCtx, dec: &RootDecomposition, rounds: &[VertexSet]) -> Vec<VertexSet> {
    let marked_so_far = rounds
        .iter()
        .fold(VertexSet::new(), |acc, r| acc.union(r))
        .intersection(&dec.root_vertices());
    let pool: Vec<usize> = marked_so_far.iter().collect();
    let mut all = vec![VertexSet::new()];
    let mut current = Vec::new();
    clique_side_rec(
        ctx.g,
        &pool,
        &VertexSet::new(),
        ctx.t - 2,
        0,
        &mut current,
        &mut all,
    );
    all.into_iter()
        .filter(|m| m.is_empty() || rounds.iter().all(|r| !m.is_disjoint(r)))
        .collect()
}

/// Outcome of one removal step.
#[derive(Clone, Debug, Serialize)]
pub struct Step2Removal {
    /// The graph with the pending component removed (fresh ids).
    #[serde(skip)]
    pub graph: Graph,
    pub k_prime: i64,
    /// The removed pending component, in the input graph's ids.
    pub removed: VertexSet,
    /// The non-marked root vertex that anchored it.
    pub vertex: usize,
    /// Locally optimal hitting cost of the removed component.
    pub local_opt: usize,
}

/// Removes the pending component of the lowest non-marked root vertex, if
/// any, decreasing the budget by the component's exact local optimum.
pub fn step2_remove(
    inst: &ModulatorInstance,
    dec: &RootDecomposition,
    marks: &MarkState,
) -> Result<Option<Step2Removal>> {
    let unmarked = dec.root_vertices().difference(&marks.union);
    let Some(v) = unmarked.min_vertex() else {
        return Ok(None);
    };
    let removed = dec.pending_of(v).clone();
    let local_opt = pending_component_opt(&inst.graph, &removed, inst.t, inst.lambda)?;
    let keep = inst.graph.vertex_set().difference(&removed);
    let (graph, _) = inst.graph.induced(&keep);
    Ok(Some(Step2Removal {
        graph,
        k_prime: inst.budget as i64 - local_opt as i64,
        removed,
        vertex: v,
        local_opt,
    }))
}

fn pending_component_opt(g: &Graph, comp: &VertexSet, t: usize, lambda: usize) -> Result<usize> {
    let (sub, _) = g.induced(comp);
    let inst = ExtendedInstance::new(sub, CliqueFamily::empty(), t)?;
    Ok(solve_ekt(&inst, SolveBudget::new(lambda, 0)).len())
}

/// Outcome of the base kernel for the solution-size parameterization.
#[derive(Clone, Debug)]
pub enum BaseKernelOutcome {
    Decided(bool),
    /// Vertices to keep (ids of the input graph) and the unchanged budget.
    Reduced { kept: VertexSet, k: usize },
}

/// Sunflower-style kernel for hitting t-cliques with at most `k` vertices.
///
/// Whenever some core `Y` (possibly empty) has more than `k` pairwise
/// disjoint petals, a small solution must hit `Y`: an empty core decides NO,
/// otherwise all clique constraints containing `Y` beyond `k+1` witnesses
/// are dropped. At the fixpoint the constraint count is at most `t! * k^t`,
/// which stays within the documented `k^t * t! * t` bound.
pub fn base_kernel(g: &Graph, k: usize, t: usize) -> BaseKernelOutcome {
    base_kernel_detailed(g, k, t).0
}

/// Like [`base_kernel`], also reporting the number of clique constraints at
/// the sunflower fixpoint (for bound audits). The count is `None` when the
/// reduction decided NO before reaching a fixpoint.
pub fn base_kernel_detailed(g: &Graph, k: usize, t: usize) -> (BaseKernelOutcome, Option<usize>) {
    let mut constraints = enumerate_t_cliques(g, t);
    loop {
        match find_forcing_core(&constraints, k) {
            Some(CoreSearch::DisjointOverflow) => {
                // more than k pairwise disjoint cliques
                return (BaseKernelOutcome::Decided(false), None);
            }
            Some(CoreSearch::Force { core, keep }) => {
                let mut kept = Vec::new();
                for (i, c) in constraints.iter().enumerate() {
                    if !core.is_subset(c) || keep.contains(&i) {
                        kept.push(c.clone());
                    }
                }
                debug_assert!(kept.len() < constraints.len());
                constraints = kept;
            }
            None => break,
        }
    }
    let fixpoint = Some(constraints.len());
    if constraints.len() <= k {
        // one vertex per remaining constraint suffices
        return (BaseKernelOutcome::Decided(true), fixpoint);
    }
    let kept = constraints
        .iter()
        .fold(VertexSet::new(), |acc, c| acc.union(c));
    (BaseKernelOutcome::Reduced { kept, k }, fixpoint)
}

/// Number of constraints the fixpoint of [`base_kernel`] may keep.
pub fn base_kernel_constraint_bound(k: usize, t: usize) -> u128 {
    let factorial: u128 = (1..=t as u128).product();
    (k as u128).pow(t as u32) * factorial * t as u128
}

enum CoreSearch {
    /// At least `k+1` pairwise disjoint constraints: no small solution.
    DisjointOverflow,
    /// Every small solution hits `core`; keep the witness constraints and
    /// drop the rest around it.
    Force { core: VertexSet, keep: Vec<usize> },
}

/// Searches for a forcing core: a vertex set `Y` with at least `k+1`
/// constraints whose remainders outside `Y` are pairwise disjoint (found
/// greedily), recursing through cover vertices. Fires only when the
/// reduction makes progress.
fn find_forcing_core(constraints: &[VertexSet], k: usize) -> Option<CoreSearch> {
    find_core_rec(
        constraints,
        &(0..constraints.len()).collect::<Vec<_>>(),
        &VertexSet::new(),
        k,
    )
}

fn find_core_rec(
    constraints: &[VertexSet],
    active: &[usize],
    core: &VertexSet,
    k: usize,
) -> Option<CoreSearch> {
    // a constraint equal to the core forces it on its own
    if !core.is_empty() {
        if let Some(&i) = active.iter().find(|&&i| constraints[i] == *core) {
            if active.len() > 1 {
                return Some(CoreSearch::Force {
                    core: core.clone(),
                    keep: vec![i],
                });
            }
        }
    }
    // greedy pairwise-disjoint remainders
    let mut taken = VertexSet::new();
    let mut witnesses = Vec::new();
    for &i in active {
        let rem = constraints[i].difference(core);
        if rem.is_empty() {
            continue;
        }
        if rem.is_disjoint(&taken) {
            taken = taken.union(&rem);
            witnesses.push(i);
        }
    }
    if witnesses.len() >= k + 1 {
        if core.is_empty() {
            return Some(CoreSearch::DisjointOverflow);
        }
        if active.len() > k + 1 {
            return Some(CoreSearch::Force {
                core: core.clone(),
                keep: witnesses.into_iter().take(k + 1).collect(),
            });
        }
    }
    // remainders are covered by the greedy vertices; try extending the core
    for v in taken.iter() {
        if core.contains(v) {
            continue;
        }
        let with_v: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&i| constraints[i].contains(v))
            .collect();
        if with_v.len() <= k + 1 {
            continue;
        }
        let bigger = core.union(&VertexSet::singleton(v));
        if let Some(found) = find_core_rec(constraints, &with_v, &bigger, k) {
            return Some(found);
        }
    }
    None
}

/// What the pipeline produced.
#[derive(Clone, Debug)]
pub enum KernelOutcome {
    Decided(bool),
    Reduced(ModulatorInstance),
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    Theoretical,
    Capped,
}

/// One event of the kernelization run; sets are in the ids of the original
/// input graph.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Removal {
        level: usize,
        vertex: usize,
        component: VertexSet,
        local_opt: usize,
        budget_after: i64,
    },
    ModulatorGrow {
        level: usize,
        added: VertexSet,
    },
    BaseKernel {
        constraints: usize,
        kept: VertexSet,
    },
    Decision {
        answer: bool,
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelTrace {
    pub events: Vec<TraceEvent>,
    pub guarantee: Guarantee,
}

/// The main loop: per level, compute the free set and a parameter-dropping
/// root of the rest, repeatedly remove non-marked pending components, then
/// absorb the shrunken root into the modulator and descend one level.
pub fn kernelize(inst: &ModulatorInstance, caps: &KernelCaps) -> Result<(KernelOutcome, KernelTrace)> {
    let g = &inst.graph;
    let t = inst.t;
    let cache = ConfCache::default();
    let mut alive = g.vertex_set();
    let mut x = inst.modulator.clone();
    let mut k = inst.budget as i64;
    let mut events = Vec::new();
    let mut capped = false;

    for level in (1..=inst.lambda).rev() {
        capped |= caps.effective_chunk_bound(level, t).1;
        let r_alive = alive.difference(&x);
        let free = non_kt_within(g, &r_alive, t);
        let host = r_alive.difference(&free);
        let mut dec = if host.is_empty() {
            RootDecomposition {
                host,
                roots: Vec::new(),
                pending: Default::default(),
            }
        } else {
            let (sub, map) = g.induced(&host);
            let local = compute_bed_root(&sub, t, level)?;
            RootDecomposition {
                host,
                roots: local.roots.iter().map(|r| map.set_to_old(r)).collect(),
                pending: local
                    .pending
                    .iter()
                    .map(|(&v, c)| (map.to_old(v), map.set_to_old(c)))
                    .collect(),
            }
        };

        loop {
            let level_inst = ModulatorInstance {
                graph: g.clone(),
                modulator: x.clone(),
                budget: 0,
                t,
                lambda: level,
            };
            let marks = step1_mark_cached(&level_inst, &dec, &free, caps, &cache)?;
            let unmarked = dec.root_vertices().difference(&marks.union);
            let Some(v) = unmarked.min_vertex() else {
                break;
            };
            let component = dec.pending_of(v).clone();
            let local_opt = pending_component_opt(g, &component, t, level)?;
            alive = alive.difference(&component);
            k -= local_opt as i64;
            events.push(TraceEvent::Removal {
                level,
                vertex: v,
                component: component.clone(),
                local_opt,
                budget_after: k,
            });
            shrink_root(g, &mut dec, v, &component);
            if k < 0 {
                events.push(TraceEvent::Decision {
                    answer: false,
                    reason: "component removals exceeded the budget".into(),
                });
                return Ok((
                    KernelOutcome::Decided(false),
                    KernelTrace {
                        events,
                        guarantee: guarantee(capped),
                    },
                ));
            }
        }

        let absorbed = dec.root_vertices();
        if !absorbed.is_empty() {
            x = x.union(&absorbed);
            events.push(TraceEvent::ModulatorGrow {
                level,
                added: absorbed,
            });
        }
        // contract: the residual parameter dropped below the level
        let residual = alive.difference(&x);
        let (res_sub, _) = g.induced(&residual);
        if !bed_at_most(&res_sub, t, level - 1) {
            return Err(CoreError::InvariantBroken(format!(
                "residual parameter exceeds {} after level {level}",
                level - 1
            )));
        }
    }

    // level 0
    if k < 0 {
        events.push(TraceEvent::Decision {
            answer: false,
            reason: "budget exhausted".into(),
        });
        return Ok((
            KernelOutcome::Decided(false),
            KernelTrace {
                events,
                guarantee: guarantee(capped),
            },
        ));
    }
    if k >= x.len() as i64 {
        // the modulator itself is an affordable solution of the rest
        events.push(TraceEvent::Decision {
            answer: true,
            reason: "budget covers the whole modulator".into(),
        });
        return Ok((
            KernelOutcome::Decided(true),
            KernelTrace {
                events,
                guarantee: guarantee(capped),
            },
        ));
    }
    let (current, map) = g.induced(&alive);
    match base_kernel(&current, k as usize, t) {
        BaseKernelOutcome::Decided(answer) => {
            events.push(TraceEvent::Decision {
                answer,
                reason: "solution-size kernel decided".into(),
            });
            Ok((
                KernelOutcome::Decided(answer),
                KernelTrace {
                    events,
                    guarantee: guarantee(capped),
                },
            ))
        }
        BaseKernelOutcome::Reduced { kept, k } => {
            let kept_host = map.set_to_old(&kept);
            events.push(TraceEvent::BaseKernel {
                constraints: 0,
                kept: kept_host.clone(),
            });
            let (out_graph, out_map) = g.induced(&kept_host);
            let out_x = out_map.set_to_new(&x.intersection(&kept_host));
            let out = ModulatorInstance::new(out_graph, out_x, k, t, 0)?;
            Ok((
                KernelOutcome::Reduced(out),
                KernelTrace {
                    events,
                    guarantee: guarantee(capped),
                },
            ))
        }
    }
}

fn guarantee(capped: bool) -> Guarantee {
    if capped {
        Guarantee::Capped
    } else {
        Guarantee::Theoretical
    }
}

/// Removes `v` and its pending component from the decomposition, splitting
/// the root it belonged to into connected pieces. Other pending components
/// are untouched: they are anticomplete to the removed one.
fn shrink_root(g: &Graph, dec: &mut RootDecomposition, v: usize, component: &VertexSet) {
    dec.host = dec.host.difference(component);
    dec.pending.remove(&v);
    let mut new_roots = Vec::new();
    for root in dec.roots.drain(..) {
        if !root.contains(v) {
            new_roots.push(root);
            continue;
        }
        let rest = root.difference(&VertexSet::singleton(v));
        for piece in g.components_within(&rest) {
            new_roots.push(piece);
        }
    }
    new_roots.sort();
    dec.roots = new_roots;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn instance(g: Graph, x: &[usize], k: usize, t: usize, lambda: usize) -> ModulatorInstance {
        ModulatorInstance::new(g, x.to_vec().into(), k, t, lambda).unwrap()
    }

    #[test]
    fn chunk_counts() {
        // three pairwise non-adjacent modulator vertices: all 7 nonempty subsets
        let g = Graph::new(3);
        let inst = instance(g, &[0, 1, 2], 0, 3, 1);
        assert_eq!(chunks(&inst, 16).len(), 7);

        // a triangle modulator: all subsets of size <= 2
        let inst = instance(Graph::complete(3), &[0, 1, 2], 0, 3, 1);
        assert_eq!(chunks(&inst, 16).len(), 6);

        // empty modulator: no chunks
        let inst = instance(Graph::new(2), &[], 0, 3, 1);
        assert!(chunks(&inst, 16).is_empty());
    }

    /// Four disjoint triangles, modulator {x, x'} adjacent to each other and
    /// to the two low vertices of every triangle: every chunk {x,x'}
    /// conflict fires through singleton projections.
    fn packed_fixture() -> ModulatorInstance {
        // vertices 0..12: triangles (0,1,2) (3,4,5) (6,7,8) (9,10,11); x=12, x'=13
        let mut g = Graph::new(14);
        for base in [0, 3, 6, 9] {
            g.add_edge(base, base + 1).unwrap();
            g.add_edge(base, base + 2).unwrap();
            g.add_edge(base + 1, base + 2).unwrap();
            g.add_edge(12, base).unwrap();
            g.add_edge(13, base).unwrap();
            g.add_edge(12, base + 1).unwrap();
            g.add_edge(13, base + 1).unwrap();
        }
        g.add_edge(12, 13).unwrap();
        instance(g, &[12, 13], 4, 3, 1)
    }

    fn decomposition_of(inst: &ModulatorInstance) -> (RootDecomposition, VertexSet) {
        let rest = inst.graph.vertex_set().difference(&inst.modulator);
        let free = non_kt_within(&inst.graph, &rest, inst.t);
        let host = rest.difference(&free);
        let (sub, map) = inst.graph.induced(&host);
        let local = compute_bed_root(&sub, inst.t, inst.lambda).unwrap();
        (
            RootDecomposition {
                host,
                roots: local.roots.iter().map(|r| map.set_to_old(r)).collect(),
                pending: local
                    .pending
                    .iter()
                    .map(|(&v, c)| (map.to_old(v), map.set_to_old(c)))
                    .collect(),
            },
            free,
        )
    }

    #[test]
    fn mark_depth_minus_one_is_empty() {
        let inst = packed_fixture();
        let (dec, free) = decomposition_of(&inst);
        let chunk = Chunk {
            members: VertexSet::from_vec(vec![12, 13]),
        };
        let caps = KernelCaps::default();
        let m = mark(
            &inst,
            &dec,
            &free,
            &chunk,
            -1,
            &VertexSet::new(),
            &VertexSet::new(),
            &caps,
        )
        .unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn mark_without_conflicts_is_empty() {
        // modulator with no edges into the rest: no conflict anywhere
        let mut g = Graph::new(7);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            g.add_edge(u, v).unwrap();
        }
        let inst = instance(g, &[6], 2, 3, 1);
        let (dec, free) = decomposition_of(&inst);
        let caps = KernelCaps::default();
        let state = step1_mark(&inst, &dec, &free, &caps).unwrap();
        assert!(state.union.is_empty());
    }

    #[test]
    fn packed_fixture_marks_exactly_x_plus_one_parts() {
        let inst = packed_fixture();
        let (dec, free) = decomposition_of(&inst);
        assert!(free.is_empty());
        let chunk = Chunk {
            members: VertexSet::from_vec(vec![12, 13]),
        };
        let caps = KernelCaps::default();
        let m = mark(
            &inst,
            &dec,
            &free,
            &chunk,
            caps.effective_chunk_bound(1, 3).0 as isize,
            &VertexSet::new(),
            &VertexSet::new(),
            &caps,
        )
        .unwrap();
        // |X|+1 = 3 parts, one root vertex each
        assert_eq!(m.len(), 3);
        // conflicts really fire: the brute conflict agrees
        let region = dec.pending_of(0).clone();
        let pr = crate::ekt::project(&inst.graph, &chunk.members, &region, 3);
        let with = oracle::brute_opt_ekt(
            &{
                let (sub, map) = inst.graph.induced(&region);
                let _ = map;
                sub
            },
            &{
                let (_, map) = inst.graph.induced(&region);
                pr.relabel(&map)
            },
            3,
        )
        .unwrap()
        .0;
        let without = {
            let (sub, _) = inst.graph.induced(&region);
            oracle::brute_opt_kt(&sub, 3).unwrap()
        };
        assert!(with > without);
    }

    #[test]
    fn step2_removes_unmarked_component() {
        // no modulator: marking is empty, the first triangle goes
        let mut g = Graph::new(6);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            g.add_edge(u, v).unwrap();
        }
        let inst = instance(g, &[], 2, 3, 1);
        let (dec, free) = decomposition_of(&inst);
        let caps = KernelCaps::default();
        let marks = step1_mark(&inst, &dec, &free, &caps).unwrap();
        let removal = step2_remove(&inst, &dec, &marks).unwrap().unwrap();
        assert_eq!(removal.local_opt, 1);
        assert_eq!(removal.removed.len(), 3);
        assert_eq!(removal.k_prime, 1);
        assert_eq!(removal.graph.n(), 3);
    }

    #[test]
    fn step2_none_when_all_marked() {
        let inst = packed_fixture();
        let (dec, free) = decomposition_of(&inst);
        let caps = KernelCaps::default();
        let marks = step1_mark(&inst, &dec, &free, &caps).unwrap();
        // the fixture marks three of four; force-mark the rest to test None
        let all = MarkState {
            rounds: vec![dec.root_vertices()],
            union: dec.root_vertices(),
        };
        assert!(step2_remove(&inst, &dec, &all).unwrap().is_none());
        // and with the real marks, something is removable
        assert!(step2_remove(&inst, &dec, &marks).unwrap().is_some());
    }

    #[test]
    fn base_kernel_examples() {
        // k+1 disjoint triangles with budget k: NO
        let mut g = Graph::new(9);
        for base in [0, 3, 6] {
            g.add_edge(base, base + 1).unwrap();
            g.add_edge(base, base + 2).unwrap();
            g.add_edge(base + 1, base + 2).unwrap();
        }
        assert!(matches!(base_kernel(&g, 2, 3), BaseKernelOutcome::Decided(false)));
        // t-clique-free: YES
        assert!(matches!(
            base_kernel(&Graph::path(5), 10, 3),
            BaseKernelOutcome::Decided(true)
        ));
        // single clique, k = 1: YES
        assert!(matches!(
            base_kernel(&Graph::complete(4), 1, 4),
            BaseKernelOutcome::Decided(true)
        ));
    }

    #[test]
    fn kernelize_examples() {
        // K_t-free graph, k = 0: YES
        let inst = instance(Graph::path(4), &[], 0, 3, 1);
        let (outcome, _) = kernelize(&inst, &KernelCaps::default()).unwrap();
        assert!(matches!(outcome, KernelOutcome::Decided(true)));

        // five disjoint triangles, k = 4: NO with five removals
        let mut g = Graph::new(15);
        for base in [0, 3, 6, 9, 12] {
            g.add_edge(base, base + 1).unwrap();
            g.add_edge(base, base + 2).unwrap();
            g.add_edge(base + 1, base + 2).unwrap();
        }
        let inst = instance(g.clone(), &[], 4, 3, 1);
        let (outcome, trace) = kernelize(&inst, &KernelCaps::default()).unwrap();
        assert!(matches!(outcome, KernelOutcome::Decided(false)));
        let removals = trace
            .events
            .iter()
            .filter(|e| matches!(e, TraceEvent::Removal { .. }))
            .count();
        assert_eq!(removals, 5);
        assert_eq!(trace.guarantee, Guarantee::Theoretical);

        // same with k = 5: YES
        let inst = instance(g, &[], 5, 3, 1);
        let (outcome, _) = kernelize(&inst, &KernelCaps::default()).unwrap();
        assert!(matches!(outcome, KernelOutcome::Decided(true)));
    }

    #[test]
    fn kernelize_preserves_answers_on_small_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mut done = 0;
        while done < 40 {
            let n = rng.gen_range(4..=9);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.45) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let x: VertexSet = (0..n).filter(|_| rng.gen_bool(0.25)).collect();
            let rest = g.vertex_set().difference(&x);
            let (sub, _) = g.induced(&rest);
            if !bed_at_most(&sub, 3, 1) {
                continue;
            }
            let opt = oracle::brute_opt_kt(&g, 3).unwrap();
            for k in opt.saturating_sub(1)..=opt + 1 {
                let inst = instance(g.clone(), x.as_slice(), k, 3, 1);
                let (outcome, _) = kernelize(&inst, &KernelCaps::default()).unwrap();
                let expected = opt <= k;
                match outcome {
                    KernelOutcome::Decided(ans) => assert_eq!(ans, expected, "graph {g:?} k={k}"),
                    KernelOutcome::Reduced(out) => {
                        let out_opt = oracle::brute_opt_kt(&out.graph, 3).unwrap();
                        assert_eq!(out_opt <= out.budget, expected, "graph {g:?} k={k}");
                    }
                }
            }
            done += 1;
        }
    }
}
