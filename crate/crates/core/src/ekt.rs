//! Exact solver for the annotated clique-hitting problem on graphs with a
//! bounded elimination parameter.
//!
//! The solver always returns a valid solution (hitting every t-clique and
//! every annotated set). When the graph's parameter is at most `lambda` and
//! the annotation gap `opt(G,F) - opt(G)` is at most `kappa`, the returned
//! solution is optimal. The recursion mirrors the parameter's definition:
//! component split, guessing the solution's intersection with the free
//! vertices, and per-pending-component subproblems around a computed root.

use crate::cliques::{contains_t_clique, enumerate_t_cliques};
use crate::decomposition::{bed_at_most, compute_bed_root, non_kt_vertices};
use crate::error::{CoreError, Result};
use crate::graph::{CliqueFamily, Graph, VertexSet};

/// Input of the annotated problem: hit all `t`-cliques of `graph` plus
/// every member of `family`.
#[derive(Clone, Debug)]
pub struct ExtendedInstance {
    pub graph: Graph,
    pub family: CliqueFamily,
    pub t: usize,
}

impl ExtendedInstance {
    pub fn new(graph: Graph, family: CliqueFamily, t: usize) -> Result<Self> {
        if t < 3 {
            return Err(CoreError::PreconditionViolated(
                "annotated clique hitting needs t >= 3".into(),
            ));
        }
        let family = CliqueFamily::validated(family.sets().to_vec(), &graph, t)?;
        Ok(ExtendedInstance { graph, family, t })
    }

    /// Does `s` hit every `t`-clique and every family member?
    pub fn is_solution(&self, s: &VertexSet) -> bool {
        enumerate_t_cliques(&self.graph, self.t)
            .iter()
            .all(|k| !k.is_disjoint(s))
            && self.family.iter().all(|z| !z.is_disjoint(s))
    }
}

/// Promised bounds under which the solver is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveBudget {
    /// Bound on the elimination parameter of the graph.
    pub lambda: usize,
    /// Bound on the annotation gap `opt(G,F) - opt(G)`.
    pub kappa: usize,
}

impl SolveBudget {
    pub fn new(lambda: usize, kappa: usize) -> Self {
        SolveBudget { lambda, kappa }
    }
}

/// Projection `pr^t_A(B)`: the traces on `B` of `t`-cliques of `G[A ∪ B]`
/// crossing between `A` and `B`, deduplicated, canonical order.
pub fn project(g: &Graph, a: &VertexSet, b: &VertexSet, t: usize) -> CliqueFamily {
    assert!(a.is_disjoint(b), "projection needs disjoint sets");
    let union = a.union(b);
    let (sub, map) = g.induced(&union);
    let mut out = Vec::new();
    for k in enumerate_t_cliques(&sub, t) {
        let k_host = map.set_to_old(&k);
        let in_a = k_host.intersection(a);
        let in_b = k_host.intersection(b);
        if !in_a.is_empty() && !in_b.is_empty() {
            out.push(in_b);
        }
    }
    CliqueFamily::from_sets(out)
}

/// Solves the annotated instance. Unconditionally valid; optimal under the
/// budget's promises.
pub fn solve_ekt(inst: &ExtendedInstance, budget: SolveBudget) -> VertexSet {
    let s = solve(
        &inst.graph,
        &inst.family,
        inst.t,
        budget.lambda,
        budget.kappa,
    );
    debug_assert!(inst.is_solution(&s));
    s
}

fn solve(g: &Graph, fam: &CliqueFamily, t: usize, lambda: usize, kappa: usize) -> VertexSet {
    if g.n() == 0 {
        return VertexSet::new();
    }
    if lambda == 0 {
        return solve_flat(g, fam, t, kappa);
    }
    let comps = g.components();
    if comps.len() > 1 {
        let mut out = VertexSet::new();
        for comp in comps {
            let (sub, map) = g.induced(&comp);
            let local = fam.contained_in(&comp).relabel(&map);
            out = out.union(&map.set_to_old(&solve(&sub, &local, t, lambda, kappa)));
        }
        return out;
    }
    let free = non_kt_vertices(g, t);
    if !free.is_empty() {
        return solve_guess_free(g, fam, t, lambda, kappa, &free);
    }
    // Connected, every vertex in a t-clique.
    if !bed_at_most(g, t, lambda) {
        return g.vertex_set(); // promise violated
    }
    solve_rooted(g, fam, t, lambda, kappa)
}

/// Base case: the parameter bound is zero, so the graph must be t-clique
/// free; what remains is a bounded-depth search on the annotations.
fn solve_flat(g: &Graph, fam: &CliqueFamily, t: usize, kappa: usize) -> VertexSet {
    if contains_t_clique(g, t) {
        return g.vertex_set(); // promise violated
    }
    if fam.is_empty() {
        return VertexSet::new();
    }
    if kappa == 0 {
        return g.vertex_set(); // gap promise violated
    }
    let first = &fam.sets()[0];
    let mut best: Option<VertexSet> = None;
    for v in first.iter() {
        let vset = VertexSet::singleton(v);
        let (sub, map) = g.remove_vertices(&vset);
        let rest = fam.unhit_by(&vset).relabel(&map);
        let cand = map.set_to_old(&solve_flat(&sub, &rest, t, kappa - 1)).union(&vset);
        if best.as_ref().map_or(true, |b| cand.len() < b.len()) {
            best = Some(cand);
        }
    }
    best.expect("family members are nonempty")
}

/// Guess the solution's intersection with the free vertices (at most
/// `kappa` of them), in size-then-lexicographic order.
fn solve_guess_free(
    g: &Graph,
    fam: &CliqueFamily,
    t: usize,
    lambda: usize,
    kappa: usize,
    free: &VertexSet,
) -> VertexSet {
    let keep = g.vertex_set().difference(free);
    let (sub, map) = g.induced(&keep);
    let mut best: Option<VertexSet> = None;
    for guess in subsets_up_to(free, kappa) {
        let mut projected = Vec::new();
        let mut dead_guess = false;
        for z in fam.iter() {
            if !z.is_disjoint(&guess) {
                continue; // already hit
            }
            let trace = z.intersection(&keep);
            if trace.is_empty() {
                dead_guess = true; // this member lives inside the free part and is missed
                break;
            }
            projected.push(trace);
        }
        if dead_guess {
            continue;
        }
        let local = CliqueFamily::from_sets(projected).relabel(&map);
        let s = map.set_to_old(&solve(&sub, &local, t, lambda, kappa - guess.len()));
        let cand = s.union(&guess);
        if best.as_ref().map_or(true, |b| cand.len() < b.len()) {
            best = Some(cand);
        }
    }
    best.unwrap_or_else(|| g.vertex_set())
}

/// All subsets of `set` with at most `cap` elements, by size then
/// lexicographic order.
fn subsets_up_to(set: &VertexSet, cap: usize) -> Vec<VertexSet> {
    let elems: Vec<usize> = set.iter().collect();
    let mut out = vec![VertexSet::new()];
    let mut current = Vec::new();
    for size in 1..=cap.min(elems.len()) {
        subsets_rec(&elems, size, 0, &mut current, &mut out);
    }
    out
}

fn subsets_rec(
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
        subsets_rec(elems, size, i + 1, current, out);
        current.pop();
    }
}

/// Connected graph, no free vertices: compute a root that decreases the
/// parameter and solve each pending component twice (attachment vertex
/// forced in / kept out), then patch up leftover annotations inside the
/// root with a bounded-depth search.
fn solve_rooted(g: &Graph, fam: &CliqueFamily, t: usize, lambda: usize, kappa: usize) -> VertexSet {
    let dec = compute_bed_root(g, t, lambda).expect("preconditions checked by caller");
    let root = dec.root_vertices();
    let mut chosen_union = VertexSet::new();
    for v in root.iter() {
        let comp = dec.pending_of(v);
        let vset = VertexSet::singleton(v);
        let interior = comp.difference(&vset);
        let (sub, map) = g.induced(&interior);

        // Solution through the attachment vertex: v plus a solution of the
        // interior with the members not hit by v.
        let fam_plus = fam.contained_in(&interior).relabel(&map);
        let s_plus = map
            .set_to_old(&solve(&sub, &fam_plus, t, lambda - 1, kappa))
            .union(&vset);

        // Solution avoiding the attachment vertex: project the members of
        // the component onto the interior and force the cliques through v
        // to be hit elsewhere.
        let mut minus_members: Vec<VertexSet> = Vec::new();
        let mut forced_everything = false;
        for z in fam.contained_in(comp).iter() {
            let trace = z.intersection(&interior);
            if trace.is_empty() {
                forced_everything = true; // the member was exactly {v}
                break;
            }
            minus_members.push(trace);
        }
        if !forced_everything {
            let (comp_sub, comp_map) = g.induced(comp);
            for k in enumerate_t_cliques(&comp_sub, t) {
                let k_host = comp_map.set_to_old(&k);
                if k_host.contains(v) {
                    minus_members.push(k_host.difference(&vset));
                }
            }
        }
        let s_minus = if forced_everything {
            interior.clone()
        } else {
            let local = CliqueFamily::from_sets(minus_members).relabel(&map);
            map.set_to_old(&solve(&sub, &local, t, lambda - 1, kappa + 1))
        };

        if s_plus.len() <= s_minus.len() {
            chosen_union = chosen_union.union(&s_plus);
        } else {
            chosen_union = chosen_union.union(&s_minus);
        }
    }
    // Leftover annotations (necessarily inside the root) get a bounded-depth
    // hitting search of depth kappa.
    let unhit: Vec<VertexSet> = fam
        .iter()
        .filter(|z| z.is_disjoint(&chosen_union))
        .cloned()
        .collect();
    match bounded_hitting(&unhit, kappa) {
        Some(patch) => chosen_union.union(&patch),
        None => g.vertex_set(),
    }
}

/// Minimum hitting set of the members using at most `budget` vertices, or
/// `None`. Branches on the first unhit member, vertices in ascending order.
fn bounded_hitting(members: &[VertexSet], budget: usize) -> Option<VertexSet> {
    let Some(first) = members.first() else {
        return Some(VertexSet::new());
    };
    if budget == 0 {
        return None;
    }
    let mut best: Option<VertexSet> = None;
    for v in first.iter() {
        let vset = VertexSet::singleton(v);
        let rest: Vec<VertexSet> = members[1..]
            .iter()
            .filter(|z| !z.contains(v))
            .cloned()
            .collect();
        if let Some(sub) = bounded_hitting(&rest, budget - 1) {
            let cand = sub.union(&vset);
            if best.as_ref().map_or(true, |b| cand.len() < b.len()) {
                best = Some(cand);
            }
        }
    }
    best
}

/// The plain optimum of the graph and whether the annotated instance is
/// clean (`opt(G,F) = opt(G)`), per the two-run recipe.
pub fn opt_and_clean(inst: &ExtendedInstance, lambda: usize) -> (usize, bool) {
    let plain = ExtendedInstance {
        graph: inst.graph.clone(),
        family: CliqueFamily::empty(),
        t: inst.t,
    };
    let opt_g = solve_ekt(&plain, SolveBudget::new(lambda, 0)).len();
    let with_family = solve_ekt(inst, SolveBudget::new(lambda, 0)).len();
    (opt_g, with_family == opt_g)
}

/// Decides whether avoiding all of `s1` forces an overpay inside `s2`:
/// `opt(G[s2], pr^t_{s1}(s2)) > opt(G[s2])`. Two solver runs, with gap
/// budgets 0 and 1.
pub fn conflict_positive(
    g: &Graph,
    s1: &VertexSet,
    s2: &VertexSet,
    t: usize,
    lambda: usize,
) -> Result<bool> {
    if !s1.is_disjoint(s2) {
        return Err(CoreError::PreconditionViolated(
            "conflict sides must be disjoint".into(),
        ));
    }
    if crate::cliques::set_contains_t_clique(g, s1, t) {
        return Err(CoreError::PreconditionViolated(
            "the avoided side contains a t-clique".into(),
        ));
    }
    if s1.is_empty() {
        return Ok(false); // empty projection
    }
    let pr = project(g, s1, s2, t);
    let (sub, map) = g.induced(s2);
    let plain = ExtendedInstance::new(sub.clone(), CliqueFamily::empty(), t)?;
    let opt_plain = solve_ekt(&plain, SolveBudget::new(lambda, 0)).len();
    let projected = ExtendedInstance::new(sub, pr.relabel(&map), t)?;
    let opt_projected = solve_ekt(&projected, SolveBudget::new(lambda, 1)).len();
    Ok(opt_projected > opt_plain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};

    fn fam(sets: &[&[usize]]) -> CliqueFamily {
        CliqueFamily::from_sets(sets.iter().map(|s| s.to_vec().into()).collect())
    }

    #[test]
    fn projection_examples() {
        // triangle {0,1,2} plus x=3 adjacent to 0,1
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1)]).unwrap();
        let pr = project(
            &g,
            &VertexSet::singleton(3),
            &VertexSet::from_vec(vec![0, 1, 2]),
            3,
        );
        assert_eq!(pr.sets(), &[VertexSet::from_vec(vec![0, 1])]);

        // anticomplete sides project to nothing
        let g2 = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let pr2 = project(
            &g2,
            &VertexSet::from_vec(vec![0, 1]),
            &VertexSet::from_vec(vec![2, 3]),
            3,
        );
        assert!(pr2.is_empty());

        let k3 = Graph::complete(3);
        let pr3 = project(
            &k3,
            &VertexSet::singleton(0),
            &VertexSet::from_vec(vec![1, 2]),
            3,
        );
        assert_eq!(pr3.sets(), &[VertexSet::from_vec(vec![1, 2])]);
    }

    #[test]
    fn solver_examples() {
        let k3 = Graph::complete(3);
        let inst = ExtendedInstance::new(k3.clone(), CliqueFamily::empty(), 3).unwrap();
        let s = solve_ekt(&inst, SolveBudget::new(1, 0));
        assert_eq!(s.len(), 1);

        let inst = ExtendedInstance::new(k3.clone(), fam(&[&[0]]), 3).unwrap();
        let s = solve_ekt(&inst, SolveBudget::new(1, 0));
        assert_eq!(s.as_slice(), &[0]);

        let inst = ExtendedInstance::new(k3, fam(&[&[0], &[1]]), 3).unwrap();
        let s = solve_ekt(&inst, SolveBudget::new(1, 1));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn opt_and_clean_examples() {
        let k3 = Graph::complete(3);
        let inst = ExtendedInstance::new(k3.clone(), fam(&[&[0]]), 3).unwrap();
        assert_eq!(opt_and_clean(&inst, 1), (1, true));
        let inst = ExtendedInstance::new(k3, fam(&[&[0], &[1]]), 3).unwrap();
        assert_eq!(opt_and_clean(&inst, 1), (1, false));
        let inst =
            ExtendedInstance::new(Graph::path(5), CliqueFamily::empty(), 3).unwrap();
        assert_eq!(opt_and_clean(&inst, 1), (0, true));
    }

    #[test]
    fn conflict_examples() {
        // edge {0,1} plus x=2 adjacent to both: avoiding x forces both ends
        let g = Graph::from_edges(3, &[(0, 1), (2, 0), (2, 1)]).unwrap();
        assert!(conflict_positive(
            &g,
            &VertexSet::singleton(2),
            &VertexSet::from_vec(vec![0, 1]),
            3,
            1
        )
        .unwrap());

        // empty avoided side never conflicts
        assert!(!conflict_positive(
            &g,
            &VertexSet::new(),
            &VertexSet::from_vec(vec![0, 1]),
            3,
            1
        )
        .unwrap());

        // triangle {0,1,2} plus x=3 adjacent to 0,1: taking 0 hits both
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1)]).unwrap();
        assert!(!conflict_positive(
            &g,
            &VertexSet::singleton(3),
            &VertexSet::from_vec(vec![0, 1, 2]),
            3,
            1
        )
        .unwrap());

        // a t-clique inside the avoided side is a precondition violation
        let k4 = Graph::complete(4);
        assert!(matches!(
            conflict_positive(
                &k4,
                &VertexSet::from_vec(vec![0, 1, 2]),
                &VertexSet::singleton(3),
                3,
                1
            ),
            Err(CoreError::PreconditionViolated(_))
        ));
    }

    fn random_instance(rng: &mut impl Rng, n_max: usize) -> ExtendedInstance {
        let n = rng.gen_range(1..=n_max);
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(0.45) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let t = rng.gen_range(3..=4);
        let ground = crate::cliques::cliques_up_to(&g, t - 1);
        let mut sets = Vec::new();
        if !ground.is_empty() {
            for _ in 0..rng.gen_range(0..=4usize) {
                sets.push(ground[rng.gen_range(0..ground.len())].clone());
            }
        }
        ExtendedInstance::new(g, CliqueFamily::from_sets(sets), t).unwrap()
    }

    #[test]
    fn always_valid_even_with_violated_promises() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let inst = random_instance(&mut rng, 8);
            let lambda = rng.gen_range(0..=2);
            let kappa = rng.gen_range(0..=2);
            let s = solve_ekt(&inst, SolveBudget::new(lambda, kappa));
            assert!(inst.is_solution(&s), "invalid output on {:?}", inst.graph);
        }
    }

    #[test]
    fn optimal_under_promises() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..150 {
            let inst = random_instance(&mut rng, 8);
            let (opt, _) = oracle::brute_opt_ekt(&inst.graph, &inst.family, inst.t).unwrap();
            let plain = oracle::brute_opt_kt(&inst.graph, inst.t).unwrap();
            let bed = oracle::brute_bed_plus(&inst.graph, inst.t).unwrap();
            let gap = opt - plain;
            let s = solve_ekt(&inst, SolveBudget::new(bed, gap));
            assert_eq!(s.len(), opt, "suboptimal on {:?} {:?}", inst.graph, inst.family);
        }
    }

    /// Avoiding a set plus free vertices is the same as avoiding the set
    /// and absorbing the free vertices into the observed side.
    #[test]
    fn conflict_free_vertex_transfer() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let mut tested = 0;
        while tested < 60 {
            let n = rng.gen_range(4..=8);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let t = 3;
            // split: X' from the first half, R' and N' from the rest
            let xs: VertexSet = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let rest = g.vertex_set().difference(&xs);
            let free_in_rest = non_kt_vertices(&g, t).intersection(&rest);
            if free_in_rest.is_empty() {
                continue;
            }
            let nprime: VertexSet = free_in_rest.iter().filter(|_| rng.gen_bool(0.5)).collect();
            let rprime = rest.difference(&nprime);
            if crate::cliques::set_contains_t_clique(&g, &xs.union(&nprime), t) {
                continue;
            }
            let bed = oracle::brute_bed_plus(&g, t).unwrap();
            let lhs = conflict_positive(&g, &xs.union(&nprime), &rprime, t, bed).unwrap();
            let rhs = conflict_positive(&g, &xs, &rprime.union(&nprime), t, bed).unwrap();
            assert_eq!(lhs, rhs);
            tested += 1;
        }
    }

    /// A conflict certified by a large avoided side is already certified by
    /// a small subset of it.
    #[test]
    fn small_conflict_certificates() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        let mut tested = 0;
        while tested < 40 {
            let n = rng.gen_range(4..=7);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let t = 3;
            let s1: VertexSet = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            if s1.is_empty() || crate::cliques::set_contains_t_clique(&g, &s1, t) {
                continue;
            }
            let s2 = g.vertex_set().difference(&s1);
            let (sub, _) = g.induced(&s2);
            let bed2 = oracle::brute_bed_plus(&sub, t).unwrap();
            if !conflict_positive(&g, &s1, &s2, t, bed2).unwrap() {
                continue;
            }
            let mmbs = oracle::mmbs_graph(&sub, t).unwrap();
            assert!(mmbs.exact);
            let cert_cap = (t - 1) * mmbs.value;
            let found = subsets_up_to(&s1, cert_cap.min(s1.len()))
                .into_iter()
                .any(|sub1| {
                    !sub1.is_empty() && conflict_positive(&g, &sub1, &s2, t, bed2).unwrap()
                });
            assert!(found, "no small certificate on {:?}", g);
            tested += 1;
        }
    }
}
