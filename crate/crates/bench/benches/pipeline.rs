//! Benchmarks for the hot paths: clique enumeration, the parameter
//! decision, the annotated solver, and the full kernelization loop.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use kthit_core::corpus;
use kthit_core::decomposition::bed_value;
use kthit_core::ekt::{solve_ekt, ExtendedInstance, SolveBudget};
use kthit_core::graph::{CliqueFamily, Graph, VertexSet};
use kthit_core::kernel::{kernelize, KernelCaps, ModulatorInstance};
use kthit_core::oracle;

fn bench_graph(n: usize, p: f64, seed: u64) -> Graph {
    corpus::random_graph(n, p, &mut corpus::seeded_rng(seed))
}

fn clique_enumeration(c: &mut Criterion) {
    let g = bench_graph(40, 0.3, 1);
    c.bench_function("enumerate_triangles_n40", |b| {
        b.iter(|| kthit_core::cliques::enumerate_t_cliques(&g, 3))
    });
}

fn parameter_value(c: &mut Criterion) {
    let g = bench_graph(12, 0.4, 2);
    c.bench_function("bed_value_n12", |b| b.iter(|| bed_value(&g, 3, 12).unwrap()));
}

fn brute_parameter(c: &mut Criterion) {
    let g = bench_graph(8, 0.45, 3);
    c.bench_function("brute_bed_n8", |b| {
        b.iter(|| oracle::brute_bed_plus(&g, 3).unwrap())
    });
}

fn annotated_solver(c: &mut Criterion) {
    let g = bench_graph(10, 0.45, 4);
    let family = CliqueFamily::from_sets(vec![
        VertexSet::singleton(0),
        VertexSet::singleton(1),
    ]);
    let inst = ExtendedInstance::new(g, family, 3).unwrap();
    c.bench_function("solve_ekt_n10", |b| {
        b.iter(|| solve_ekt(&inst, SolveBudget::new(2, 2)))
    });
}

fn kernel_pipeline(c: &mut Criterion) {
    // five disjoint triangles plus two modulator vertices touching each
    let mut g = Graph::new(17);
    for base in [0usize, 3, 6, 9, 12] {
        g.add_edge(base, base + 1).unwrap();
        g.add_edge(base, base + 2).unwrap();
        g.add_edge(base + 1, base + 2).unwrap();
        g.add_edge(15, base).unwrap();
        g.add_edge(16, base).unwrap();
    }
    g.add_edge(15, 16).unwrap();
    let inst = ModulatorInstance::new(g, VertexSet::from_vec(vec![15, 16]), 6, 3, 1).unwrap();
    let caps = KernelCaps::default();
    c.bench_function("kernelize_5_triangles", |b| {
        b.iter_batched(
            || inst.clone(),
            |inst| kernelize(&inst, &caps).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    clique_enumeration,
    parameter_value,
    brute_parameter,
    annotated_solver,
    kernel_pipeline
);
criterion_main!(benches);
