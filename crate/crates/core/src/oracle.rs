//! Brute-force reference implementations, used to validate every other
//! module and to compute expected values in tests. Each oracle follows the
//! defining recursion or an exhaustive scan directly and shares no code with
//! the module it validates. The caps are contracts: exceeding them is an
//! error, not a performance bug.

use std::collections::{HashMap, HashSet};
use std::time::Duration;

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::{CliqueFamily, Graph, VertexSet};

pub const OPT_EKT_CAP: usize = 20;
pub const BED_CAP: usize = 10;
pub const VED_COMPONENT_CAP: usize = 14;
pub const VED_PATTERN_CAP: usize = 6;
pub const GROUND_SET_CAP: usize = 18;

/// Result wrapper for CLI-facing oracle calls.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub computed: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub elapsed_micros: u128,
}

impl OracleReport {
    pub fn new(
        computed: serde_json::Value,
        witness: Option<serde_json::Value>,
        elapsed: Duration,
    ) -> Self {
        OracleReport {
            computed,
            witness,
            elapsed_micros: elapsed.as_micros(),
        }
    }
}

// ---------------------------------------------------------------------------
// Shared hitting-set core over bitmask targets (n <= 64).

fn require_mask_width(n: usize, what: &'static str, cap: usize) -> Result<()> {
    if n > cap || n > 64 {
        return Err(CoreError::CapExceeded {
            what,
            got: n,
            cap: cap.min(64),
        });
    }
    Ok(())
}

/// All `t`-cliques of the induced subgraph as masks, by exhaustive subset
/// filtering (independent of the backtracking enumerator).
fn clique_masks(g: &Graph, t: usize) -> Vec<u64> {
    let n = g.n();
    let adj = g.adjacency_masks().expect("graph fits in 64 bits");
    let mut out = Vec::new();
    let mut members = vec![0usize; t];
    subsets_of_size(n, t, &mut members, 0, 0, &mut |chosen: &[usize]| {
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(i, &u)| chosen[i + 1..].iter().all(|&v| adj[u] & (1 << v) != 0));
        if ok {
            out.push(chosen.iter().fold(0u64, |m, &v| m | (1 << v)));
        }
    });
    out
}

fn subsets_of_size(
    n: usize,
    k: usize,
    buf: &mut [usize],
    depth: usize,
    from: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(&buf[..k]);
        return;
    }
    for v in from..n {
        if n - v < k - depth {
            break;
        }
        buf[depth] = v;
        subsets_of_size(n, k, buf, depth + 1, v + 1, f);
    }
}

/// Greedy count of pairwise-disjoint targets not hit by `hit`; a lower
/// bound on the number of extra vertices any hitting set still needs.
fn disjoint_lower_bound(targets: &[u64], hit: u64) -> usize {
    let mut taken = 0u64;
    let mut count = 0;
    for &t in targets {
        if t & hit == 0 && t & taken == 0 {
            taken |= t;
            count += 1;
        }
    }
    count
}

/// Exact minimum hitting set of the target masks, by branching on the first
/// unhit target with a greedy-packing bound. Deterministic: the first
/// minimum found (vertices tried in ascending order) is kept.
fn min_hitting(targets: &[u64]) -> (usize, u64) {
    let mut best_mask = {
        // greedy start: hit the first unhit target with its lowest vertex
        let mut hit = 0u64;
        for &t in targets {
            if t & hit == 0 {
                hit |= 1 << t.trailing_zeros();
            }
        }
        hit
    };
    let mut best = best_mask.count_ones() as usize;
    branch_hitting(targets, 0, 0, &mut best, &mut best_mask);
    (best, best_mask)
}

fn branch_hitting(targets: &[u64], hit: u64, size: usize, best: &mut usize, best_mask: &mut u64) {
    let unhit = targets.iter().find(|&&t| t & hit == 0);
    match unhit {
        None => {
            if size < *best {
                *best = size;
                *best_mask = hit;
            }
        }
        Some(&target) => {
            if size + disjoint_lower_bound(targets, hit) >= *best {
                return;
            }
            let mut bits = target;
            while bits != 0 {
                let v = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                branch_hitting(targets, hit | (1 << v), size + 1, best, best_mask);
            }
        }
    }
}

/// Is there a hitting set of size at most `k`? Bounded-depth search.
fn hitting_at_most(targets: &[u64], hit: u64, k: usize) -> bool {
    let unhit = targets.iter().find(|&&t| t & hit == 0);
    let Some(&target) = unhit else {
        return true;
    };
    if k == 0 || disjoint_lower_bound(targets, hit) > k {
        return false;
    }
    let mut bits = target;
    while bits != 0 {
        let v = bits.trailing_zeros() as u64;
        bits &= bits - 1;
        if hitting_at_most(targets, hit | (1 << v), k - 1) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Extended clique hitting.

fn ekt_targets(g: &Graph, family: &CliqueFamily, t: usize) -> Vec<u64> {
    let mut targets = clique_masks(g, t);
    for z in family.iter() {
        targets.push(z.to_mask().expect("family fits in 64 bits"));
    }
    targets.sort();
    targets.dedup();
    targets
}

/// Exact optimum of the extended instance, with a witness, by exhaustive
/// branching on uncovered targets. Cap: 20 vertices.
pub fn brute_opt_ekt(g: &Graph, family: &CliqueFamily, t: usize) -> Result<(usize, VertexSet)> {
    require_mask_width(g.n(), "brute extended-hitting vertices", OPT_EKT_CAP)?;
    let targets = ekt_targets(g, family, t);
    let (opt, mask) = min_hitting(&targets);
    Ok((opt, VertexSet::from_mask(mask)))
}

/// Plain clique-hitting optimum (empty family).
pub fn brute_opt_kt(g: &Graph, t: usize) -> Result<usize> {
    Ok(brute_opt_ekt(g, &CliqueFamily::empty(), t)?.0)
}

// ---------------------------------------------------------------------------
// Copy hitting for an arbitrary small pattern graph.

/// Vertex sets of all copies of `h` in `g` (spanning subgraph of the induced
/// subgraph; isomorphic induced subgraph when `induced`). Exhaustive subset
/// scan with a permutation check, independent of the backtracking matcher.
pub fn h_copy_masks(g: &Graph, h: &Graph, induced: bool) -> Result<Vec<u64>> {
    require_mask_width(g.n(), "copy-hitting host vertices", 64)?;
    if h.n() > VED_PATTERN_CAP {
        return Err(CoreError::CapExceeded {
            what: "copy-hitting pattern vertices",
            got: h.n(),
            cap: VED_PATTERN_CAP,
        });
    }
    let k = h.n();
    if k == 0 || k > g.n() {
        return Ok(Vec::new());
    }
    let h_edges = h.edges();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    permutations(k, &mut (0..k).collect::<Vec<_>>(), 0, &mut perms);
    let mut out = Vec::new();
    let mut buf = vec![0usize; k];
    subsets_of_size(g.n(), k, &mut buf, 0, 0, &mut |chosen: &[usize]| {
        // cheap filter: enough edges inside the subset
        let mut inner = 0;
        for i in 0..k {
            for j in (i + 1)..k {
                if g.has_edge(chosen[i], chosen[j]) {
                    inner += 1;
                }
            }
        }
        if inner < h_edges.len() || (induced && inner != h_edges.len()) {
            return;
        }
        for perm in &perms {
            let ok = (0..k).all(|u| {
                (u + 1..k).all(|v| {
                    let g_adj = g.has_edge(chosen[perm[u]], chosen[perm[v]]);
                    let h_adj = h.has_edge(u, v);
                    if induced {
                        g_adj == h_adj
                    } else {
                        !h_adj || g_adj
                    }
                })
            });
            if ok {
                out.push(chosen.iter().fold(0u64, |m, &v| m | (1 << v)));
                return;
            }
        }
    });
    Ok(out)
}

fn permutations(k: usize, current: &mut Vec<usize>, depth: usize, out: &mut Vec<Vec<usize>>) {
    if depth == k {
        out.push(current.clone());
        return;
    }
    for i in depth..k {
        current.swap(depth, i);
        permutations(k, current, depth + 1, out);
        current.swap(depth, i);
    }
}

/// Exact optimum for hitting all (induced) copies of `h` in `g`.
pub fn brute_opt_h(g: &Graph, h: &Graph, induced: bool) -> Result<(usize, VertexSet)> {
    let targets = h_copy_masks(g, h, induced)?;
    let (opt, mask) = min_hitting(&targets);
    Ok((opt, VertexSet::from_mask(mask)))
}

/// Decision variant: is there a set of at most `k` vertices hitting all
/// (induced) copies of `h`? Faster than the exact optimum for tight budgets.
pub fn h_hitting_at_most(g: &Graph, h: &Graph, induced: bool, k: usize) -> Result<bool> {
    let targets = h_copy_masks(g, h, induced)?;
    Ok(hitting_at_most(&targets, 0, k))
}

// ---------------------------------------------------------------------------
// Definitional recursion for the block-elimination parameter, enumerating
// ALL roots (not only candidate roots).

/// Definitional value of the parameter: free removal applied exhaustively,
/// component maximum, and `1 + min` over every root (every nonempty
/// connected K_t-free subset whose removal leaves components with exactly
/// one root neighbor). Cap: 10 vertices.
pub fn brute_bed_plus(g: &Graph, t: usize) -> Result<usize> {
    require_mask_width(g.n(), "brute bed vertices", BED_CAP)?;
    let adj = g.adjacency_masks().expect("fits");
    let cliques = clique_masks(g, t);
    let full: u64 = if g.n() == 0 { 0 } else { (1 << g.n()) - 1 };
    let mut memo = HashMap::new();
    Ok(bed_rec(&adj, &cliques, full, &mut memo))
}

fn bed_rec(adj: &[u64], cliques: &[u64], alive: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if alive == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&alive) {
        return v;
    }
    let result = (|| {
        // free vertices first, exhaustively
        let mut covered = 0u64;
        for &k in cliques {
            if k & !alive == 0 {
                covered |= k;
            }
        }
        let free = alive & !covered;
        if free != 0 {
            return bed_rec(adj, cliques, alive & !free, memo);
        }
        let comps = mask_components(adj, alive);
        if comps.len() > 1 {
            return comps
                .iter()
                .map(|&c| bed_rec(adj, cliques, c, memo))
                .max()
                .unwrap();
        }
        1 + all_roots(adj, cliques, alive)
            .into_iter()
            .map(|root| bed_rec(adj, cliques, alive & !root, memo))
            .min()
            .expect("a connected nonempty graph has a root")
    })();
    memo.insert(alive, result);
    result
}

fn mask_components(adj: &[u64], alive: u64) -> Vec<u64> {
    let mut rest = alive;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        loop {
            let mut grown = comp;
            let mut bits = comp;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                grown |= adj[v] & alive;
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

/// Every root of the connected graph on `alive`: BFS over the subset
/// lattice from singletons, filtered by K_t-freeness and the one-neighbor
/// condition.
fn all_roots(adj: &[u64], cliques: &[u64], alive: u64) -> Vec<u64> {
    let mut connected: HashSet<u64> = HashSet::new();
    let mut queue: Vec<u64> = Vec::new();
    let mut bits = alive;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let m = 1u64 << v;
        connected.insert(m);
        queue.push(m);
    }
    let mut idx = 0;
    while idx < queue.len() {
        let set = queue[idx];
        idx += 1;
        // grow by any adjacent alive vertex
        let mut boundary = 0u64;
        let mut b = set;
        while b != 0 {
            let v = b.trailing_zeros() as usize;
            b &= b - 1;
            boundary |= adj[v] & alive & !set;
        }
        while boundary != 0 {
            let u = boundary.trailing_zeros() as usize;
            boundary &= boundary - 1;
            let bigger = set | (1 << u);
            if connected.insert(bigger) {
                queue.push(bigger);
            }
        }
    }
    let mut roots: Vec<u64> = connected
        .into_iter()
        .filter(|&set| {
            if cliques.iter().any(|&k| k & !set == 0) {
                return false; // contains a t-clique
            }
            mask_components(adj, alive & !set).into_iter().all(|comp| {
                let mut nb = 0u64;
                let mut b = comp;
                while b != 0 {
                    let v = b.trailing_zeros() as usize;
                    b &= b - 1;
                    nb |= adj[v] & set;
                }
                nb.count_ones() == 1
            })
        })
        .collect();
    roots.sort();
    roots
}

// ---------------------------------------------------------------------------
// Definitional recursion for the vertex-elimination variant (single-vertex
// removals) for an arbitrary pattern graph.

/// Definitional recursion: free removal of vertices in no (induced) copy of
/// `h`, component maximum, otherwise `1 + min` over single-vertex
/// deletions. Caps: 14 vertices per component, 6 pattern vertices.
pub fn brute_ved_plus(g: &Graph, h: &Graph, induced: bool) -> Result<usize> {
    require_mask_width(g.n(), "brute ved vertices", 64)?;
    let comps = g.components();
    let mut best = 0;
    for comp in comps {
        if comp.len() > VED_COMPONENT_CAP {
            return Err(CoreError::CapExceeded {
                what: "brute ved component size",
                got: comp.len(),
                cap: VED_COMPONENT_CAP,
            });
        }
        let (sub, _) = g.induced(&comp);
        let adj = sub.adjacency_masks().expect("fits");
        let copies = h_copy_masks(&sub, h, induced)?;
        let full: u64 = if sub.n() == 0 { 0 } else { (1 << sub.n()) - 1 };
        let mut memo = HashMap::new();
        best = best.max(ved_rec(&adj, &copies, full, &mut memo));
    }
    Ok(best)
}

fn ved_rec(adj: &[u64], copies: &[u64], alive: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if alive == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&alive) {
        return v;
    }
    let result = (|| {
        let mut covered = 0u64;
        for &c in copies {
            if c & !alive == 0 {
                covered |= c;
            }
        }
        let free = alive & !covered;
        if free != 0 {
            return ved_rec(adj, copies, alive & !free, memo);
        }
        let comps = mask_components(adj, alive);
        if comps.len() > 1 {
            return comps
                .iter()
                .map(|&c| ved_rec(adj, copies, c, memo))
                .max()
                .unwrap();
        }
        let mut best = usize::MAX;
        let mut bits = alive;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            best = best.min(1 + ved_rec(adj, copies, alive & !(1 << v), memo));
        }
        best
    })();
    memo.insert(alive, result);
    result
}

// ---------------------------------------------------------------------------
// Blocking sets.

/// All optimal solutions of the extended instance, as masks, by exhaustive
/// subset scan. Used by the blocking-set oracles.
fn optimal_solution_masks(g: &Graph, family: &CliqueFamily, t: usize) -> Result<(usize, Vec<u64>)> {
    require_mask_width(g.n(), "blocking-set instance vertices", 16)?;
    let targets = ekt_targets(g, family, t);
    let n = g.n();
    let mut opt = usize::MAX;
    let mut sols = Vec::new();
    for mask in 0u64..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > opt {
            continue;
        }
        if targets.iter().all(|&t| t & mask != 0) {
            if size < opt {
                opt = size;
                sols.clear();
            }
            sols.push(mask);
        }
    }
    Ok((opt, sols))
}

/// Does adding `b` to the annotations strictly raise the optimum? Also
/// checks the member conditions (cliques of size in `[1, t-1]`).
pub fn is_blocking_set(
    g: &Graph,
    family: &CliqueFamily,
    b: &CliqueFamily,
    t: usize,
) -> Result<bool> {
    for z in b.iter() {
        if z.is_empty() || z.len() > t - 1 || !g.is_clique(z) {
            return Ok(false);
        }
    }
    let base = brute_opt_ekt(g, family, t)?.0;
    let with = brute_opt_ekt(g, &family.union(b), t)?.0;
    Ok(with > base)
}

/// Convenience: is `b` an inclusion-minimal blocking set of `(g, family)`?
pub fn is_minimal_blocking_set(
    g: &Graph,
    family: &CliqueFamily,
    b: &CliqueFamily,
    t: usize,
) -> Result<bool> {
    if !is_blocking_set(g, family, b, t)? {
        return Ok(false);
    }
    for drop in b.iter() {
        let rest = CliqueFamily::from_sets(
            b.iter().filter(|z| *z != drop).cloned().collect(),
        );
        if is_blocking_set(g, family, &rest, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All inclusion-minimal blocking sets of `(g, family)` with at most
/// `size_cap` members, over the ground set of cliques of size `< t`.
///
/// A family blocks exactly when every optimal solution misses one of its
/// members, so minimal blocking sets are the irredundant covers of the
/// optimal-solution universe by "missed by" sets.
pub fn minimal_blocking_sets(
    g: &Graph,
    family: &CliqueFamily,
    t: usize,
    size_cap: usize,
) -> Result<Vec<CliqueFamily>> {
    let ground = crate::cliques::cliques_up_to(g, t - 1);
    if ground.len() > GROUND_SET_CAP {
        return Err(CoreError::CapExceeded {
            what: "blocking-set ground set",
            got: ground.len(),
            cap: GROUND_SET_CAP,
        });
    }
    let (_, sols) = optimal_solution_masks(g, family, t)?;
    if sols.len() > 128 {
        return Err(CoreError::CapExceeded {
            what: "optimal-solution universe",
            got: sols.len(),
            cap: 128,
        });
    }
    let miss: Vec<u128> = ground
        .iter()
        .map(|c| {
            let cm = c.to_mask().unwrap();
            sols.iter()
                .enumerate()
                .filter(|(_, &s)| s & cm == 0)
                .fold(0u128, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let universe: u128 = if sols.is_empty() {
        0
    } else {
        (1u128 << sols.len()) - 1
    };
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    enumerate_irredundant_covers(
        &miss,
        universe,
        0,
        &mut chosen,
        0,
        size_cap,
        &mut |cover: &[usize]| {
            out.push(CliqueFamily::from_sets(
                cover.iter().map(|&i| ground[i].clone()).collect(),
            ));
        },
    );
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// DFS over candidate indices in order; emits every irredundant cover of
/// `universe` with at most `cap` sets.
fn enumerate_irredundant_covers(
    miss: &[u128],
    universe: u128,
    from: usize,
    chosen: &mut Vec<usize>,
    covered: u128,
    cap: usize,
    emit: &mut impl FnMut(&[usize]),
) {
    if covered & universe == universe {
        // cover complete; irredundant iff every member has a private element
        let irredundant = chosen.iter().all(|&i| {
            let others = chosen
                .iter()
                .filter(|&&j| j != i)
                .fold(0u128, |m, &j| m | miss[j]);
            miss[i] & universe & !others != 0
        });
        if irredundant {
            emit(chosen);
        }
        return;
    }
    if chosen.len() == cap {
        return;
    }
    for i in from..miss.len() {
        if miss[i] & universe == 0 {
            continue;
        }
        // keep the irredundancy invariant: every chosen set must retain a
        // private element after adding i
        let ok = chosen.iter().all(|&j| {
            let others = chosen
                .iter()
                .filter(|&&k| k != j)
                .fold(miss[i], |m, &k| m | miss[k]);
            miss[j] & universe & !others != 0
        }) && {
            let others = chosen.iter().fold(0u128, |m, &j| m | miss[j]);
            miss[i] & universe & !others != 0
        };
        if !ok {
            continue;
        }
        chosen.push(i);
        enumerate_irredundant_covers(miss, universe, i + 1, chosen, covered | miss[i], cap, emit);
        chosen.pop();
    }
}

/// Result of the max-minimal-blocking-set search. `exact` is false when the
/// search budget ran out, in which case `value` is a lower bound.
#[derive(Debug, Clone, Serialize)]
pub struct MmbsResult {
    pub value: usize,
    pub exact: bool,
    /// A clean family and a minimal blocking set of that instance attaining
    /// `value`, when one exists.
    pub witness: Option<(CliqueFamily, CliqueFamily)>,
}

const MMBS_NODE_BUDGET: u64 = 20_000_000;

/// Maximum size of an inclusion-minimal blocking set over all clean
/// annotated instances of `g`.
///
/// Search space: a blocking set of a clean instance is an irredundant cover
/// of the surviving optimal solutions by "missed by" sets, where annotating
/// with a clean family removes the solutions it misses. The search branches
/// over irredundant families and checks that some clean family realizes a
/// compatible universe.
pub fn mmbs_graph(g: &Graph, t: usize) -> Result<MmbsResult> {
    let ground = crate::cliques::cliques_up_to(g, t - 1);
    let (_, sols) = optimal_solution_masks(g, &CliqueFamily::empty(), t)?;
    if sols.len() > 64 {
        return Err(CoreError::CapExceeded {
            what: "optimal-solution universe",
            got: sols.len(),
            cap: 64,
        });
    }
    let miss: Vec<u64> = ground
        .iter()
        .map(|c| {
            let cm = c.to_mask().unwrap();
            sols.iter()
                .enumerate()
                .filter(|(_, &s)| s & cm == 0)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let universe: u64 = if sols.is_empty() {
        0
    } else if sols.len() == 64 {
        u64::MAX
    } else {
        (1u64 << sols.len()) - 1
    };
    // candidates ordered by miss-set size; empty-miss members can never be
    // irredundant
    let mut order: Vec<usize> = (0..ground.len()).filter(|&i| miss[i] != 0).collect();
    order.sort_by_key(|&i| (miss[i].count_ones(), i));

    let mut search = MmbsSearch {
        miss: &miss,
        universe,
        order: &order,
        budget: MMBS_NODE_BUDGET,
        best: 0,
        best_witness: None,
        chosen: Vec::new(),
    };
    search.run(0);
    let exact = search.budget > 0;
    // The witness family is the maximal one whose missed solutions all lie
    // in the allowed removed part D*; its surviving universe carries the
    // blocking set's private solutions.
    let witness = search.best_witness.map(|(bs, dstar)| {
        let b = CliqueFamily::from_sets(bs.iter().map(|&i| ground[i].clone()).collect());
        let f = CliqueFamily::from_sets(
            (0..ground.len())
                .filter(|&i| miss[i] & !dstar == 0)
                .map(|i| ground[i].clone())
                .collect(),
        );
        (f, b)
    });
    Ok(MmbsResult {
        value: search.best,
        exact,
        witness,
    })
}

struct MmbsSearch<'a> {
    miss: &'a [u64],
    universe: u64,
    order: &'a [usize],
    budget: u64,
    best: usize,
    /// chosen indices and the union of allowed "forbidden" solutions D*.
    best_witness: Option<(Vec<usize>, u64)>,
    chosen: Vec<usize>,
}

impl<'a> MmbsSearch<'a> {
    fn run(&mut self, from: usize) {
        if self.budget == 0 {
            return;
        }
        self.budget -= 1;
        // try to certify the current family before extending
        if self.chosen.len() > self.best {
            if let Some(dstar) = self.realizable() {
                self.best = self.chosen.len();
                self.best_witness = Some((self.chosen.clone(), dstar));
            }
        }
        let remaining = self.order.len() - from;
        let cap = (self.universe.count_ones() as usize).min(self.chosen.len() + remaining);
        if cap <= self.best {
            return;
        }
        for pos in from..self.order.len() {
            let idx = self.order[pos];
            if !self.extendable(idx) {
                continue;
            }
            self.chosen.push(idx);
            self.run(pos + 1);
            self.chosen.pop();
            if self.budget == 0 {
                return;
            }
        }
    }

    /// Every chosen member (and the newcomer) must keep a private optimal
    /// solution it alone misses.
    fn extendable(&self, idx: usize) -> bool {
        let newcomer = self.miss[idx];
        for (i, &a) in self.chosen.iter().enumerate() {
            let mut others = newcomer;
            for (j, &b) in self.chosen.iter().enumerate() {
                if i != j {
                    others |= self.miss[b];
                }
            }
            if self.miss[a] & self.universe & !others == 0 {
                return false;
            }
        }
        let others = self
            .chosen
            .iter()
            .fold(0u64, |m, &b| m | self.miss[b]);
        newcomer & self.universe & !others != 0
    }

    /// Is there a clean family whose surviving universe makes the chosen
    /// family a minimal blocking set? Requires privates outside the removed
    /// part and full coverage of the surviving universe.
    fn realizable(&mut self) -> Option<u64> {
        let covered = self
            .chosen
            .iter()
            .fold(0u64, |m, &i| m | self.miss[i]);
        let residue = self.universe & !covered;
        // private candidate sets (pairwise disjoint by construction)
        let privs: Vec<u64> = self
            .chosen
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let others = self
                    .chosen
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(0u64, |m, (_, &b)| m | self.miss[b]);
                self.miss[a] & self.universe & !others
            })
            .collect();
        if residue == 0 {
            // the empty family realizes it; pick the lowest private of each
            // member (privates are pairwise disjoint, so OR-fold suffices)
            let p = privs
                .iter()
                .fold(0u64, |acc, pv| acc | (pv & pv.wrapping_neg()));
            return Some(self.dstar(p));
        }
        // search for one private per member so that the residue can be
        // removed by a clean family avoiding the privates
        self.assign_privates(&privs, 0, 0, residue)
    }

    fn dstar(&self, privates: u64) -> u64 {
        self.miss
            .iter()
            .filter(|&&m| m & privates == 0)
            .fold(0u64, |acc, &m| acc | m)
    }

    fn assign_privates(&mut self, privs: &[u64], i: usize, picked: u64, residue: u64) -> Option<u64> {
        if self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        let d = self.dstar(picked);
        if residue & !d != 0 {
            return None; // monotone: more privates only shrink D*
        }
        if i == privs.len() {
            return Some(d);
        }
        let mut bits = privs[i];
        while bits != 0 {
            let s = bits & bits.wrapping_neg();
            bits &= bits - 1;
            if let Some(full) = self.assign_privates(privs, i + 1, picked | s, residue) {
                return Some(full);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opt_ekt_examples() {
        let (opt, witness) = brute_opt_ekt(&Graph::complete(4), &CliqueFamily::empty(), 3).unwrap();
        assert_eq!(opt, 2);
        // the witness re-validates: no triangle survives
        let (rest, _) = Graph::complete(4).remove_vertices(&witness);
        assert!(!crate::cliques::contains_t_clique(&rest, 3));

        for t in 3..=5 {
            assert_eq!(brute_opt_kt(&Graph::complete(t), t).unwrap(), 1);
        }

        let fam = CliqueFamily::from_sets(vec![VertexSet::singleton(0), VertexSet::singleton(1)]);
        assert_eq!(brute_opt_ekt(&Graph::complete(3), &fam, 3).unwrap().0, 2);
    }

    #[test]
    fn exhaustive_subset_scan_agrees_with_branching() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let n = rng.gen_range(1..=7);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let t = rng.gen_range(3..=4);
            let (opt, sols) = optimal_solution_masks(&g, &CliqueFamily::empty(), t).unwrap();
            assert_eq!(opt, brute_opt_kt(&g, t).unwrap());
            assert!(!sols.is_empty());
        }
    }

    #[test]
    fn bed_examples() {
        assert_eq!(brute_bed_plus(&Graph::path(5), 3).unwrap(), 0);
        assert_eq!(brute_bed_plus(&Graph::complete(4), 4).unwrap(), 1);
        // two K_4's sharing vertex 3
        let mut g = Graph::new(7);
        for u in 0..4 {
            for v in (u + 1)..4 {
                g.add_edge(u, v).unwrap();
            }
        }
        for u in 3..7 {
            for v in (u + 1)..7 {
                g.add_edge(u, v).unwrap();
            }
        }
        assert_eq!(brute_bed_plus(&g, 4).unwrap(), 1);
        assert_eq!(brute_bed_plus(&Graph::complete(4), 3).unwrap(), 2);
    }

    #[test]
    fn ved_examples() {
        let h = Graph::diamond();
        assert_eq!(brute_ved_plus(&Graph::path(6), &h, false).unwrap(), 0);
        assert_eq!(brute_ved_plus(&h, &h, false).unwrap(), 1);
        // disjoint union of two copies: component maximum
        let mut g = Graph::new(8);
        for (u, v) in h.edges() {
            g.add_edge(u, v).unwrap();
            g.add_edge(u + 4, v + 4).unwrap();
        }
        assert_eq!(brute_ved_plus(&g, &h, false).unwrap(), 1);
    }

    #[test]
    fn blocking_set_examples() {
        let g = Graph::complete(3);
        let empty = CliqueFamily::empty();
        let ab = CliqueFamily::from_sets(vec![VertexSet::singleton(0), VertexSet::singleton(1)]);
        let a = CliqueFamily::from_sets(vec![VertexSet::singleton(0)]);
        let edge = CliqueFamily::from_sets(vec![VertexSet::from_vec(vec![0, 1])]);
        assert!(is_blocking_set(&g, &empty, &ab, 3).unwrap());
        assert!(!is_blocking_set(&g, &empty, &a, 3).unwrap());
        assert!(!is_blocking_set(&g, &empty, &edge, 3).unwrap());
    }

    #[test]
    fn minimal_blocking_sets_of_triangle() {
        let g = Graph::complete(3);
        let all = minimal_blocking_sets(&g, &CliqueFamily::empty(), 3, 4).unwrap();
        let ab = CliqueFamily::from_sets(vec![VertexSet::singleton(0), VertexSet::singleton(1)]);
        assert!(all.contains(&ab));
        assert!(all.iter().all(|b| b.len() >= 2), "no singleton blocks K_3");
        // every reported family re-validates as a minimal blocking set
        for b in &all {
            assert!(is_minimal_blocking_set(&g, &CliqueFamily::empty(), b, 3).unwrap());
        }
    }

    #[test]
    fn single_edge_graph_has_singleton_blocking_sets() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let all = minimal_blocking_sets(&g, &CliqueFamily::empty(), 3, 2).unwrap();
        let u = CliqueFamily::from_sets(vec![VertexSet::singleton(0)]);
        let v = CliqueFamily::from_sets(vec![VertexSet::singleton(1)]);
        assert!(all.contains(&u) && all.contains(&v));
    }

    #[test]
    fn mmbs_small_graphs() {
        // K_t-free graphs have mmbs at most 1
        let r = mmbs_graph(&Graph::path(4), 3).unwrap();
        assert!(r.exact);
        assert!(r.value <= 1);
        // brute cross-check on tiny graphs with few cliques
        for (g, t) in [
            (Graph::complete(3), 3),
            (Graph::cycle(4), 3),
            (Graph::from_edges(3, &[(0, 1)]).unwrap(), 3),
        ] {
            let fast = mmbs_graph(&g, t).unwrap();
            assert!(fast.exact);
            assert_eq!(fast.value, mmbs_doubly_exhaustive(&g, t));
            if let Some((fam, bs)) = &fast.witness {
                // witness re-validates
                let base = brute_opt_ekt(&g, &CliqueFamily::empty(), t).unwrap().0;
                assert_eq!(brute_opt_ekt(&g, fam, t).unwrap().0, base, "family is clean");
                assert!(is_minimal_blocking_set(&g, fam, bs, t).unwrap());
                assert_eq!(bs.len(), fast.value);
            }
        }
    }

    /// Definition-shaped cross-check: enumerate every family over the
    /// ground set, keep the clean ones, and take the largest minimal
    /// blocking set. Only viable for tiny ground sets.
    fn mmbs_doubly_exhaustive(g: &Graph, t: usize) -> usize {
        let ground = crate::cliques::cliques_up_to(g, t - 1);
        assert!(ground.len() <= 10);
        let opt = brute_opt_kt(g, t).unwrap();
        let mut best = 0;
        for fmask in 0u32..(1 << ground.len()) {
            let fam = CliqueFamily::from_sets(
                (0..ground.len())
                    .filter(|&i| fmask & (1 << i) != 0)
                    .map(|i| ground[i].clone())
                    .collect(),
            );
            if brute_opt_ekt(g, &fam, t).unwrap().0 != opt {
                continue; // not clean
            }
            for bmask in 1u32..(1 << ground.len()) {
                let b = CliqueFamily::from_sets(
                    (0..ground.len())
                        .filter(|&i| bmask & (1 << i) != 0)
                        .map(|i| ground[i].clone())
                        .collect(),
                );
                if b.len() > best && is_minimal_blocking_set(g, &fam, &b, t).unwrap() {
                    best = b.len();
                }
            }
        }
        best
    }

    #[test]
    fn mmbs_of_cliques() {
        // For K_t the facets ((t-1)-subsets) form a minimal blocking set of
        // size t, and no larger one exists.
        for t in [3usize, 4] {
            let g = Graph::complete(t);
            let r = mmbs_graph(&g, t).unwrap();
            assert!(r.exact);
            assert_eq!(r.value, t);
        }
    }
}
