//! Parallel vs sequential comparison of the heavy sweeps.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use lexalg::algebra::gen::enumerate_preorders;
use lexalg::algebra::{element_coordinates, radical_trace_oracle, spans_equal};
use lexalg::limits::{limit_radical_dimension, limit_radical_dimension_seq, scan_links, scan_links_seq};
use lexalg::order::parse_order;
use lexalg::tower::{build_chain, build_chain_with, check_embed_multiplicative, check_embed_multiplicative_seq, SegmentFactors};

fn bench_radical_dimension(c: &mut Criterion) {
    let w = parse_order("w[2] + z[2]").unwrap();
    let chain = build_chain_with(&w, 3, 1 << 20, &SegmentFactors::new()).unwrap();
    let stage = chain.stage(2); // n_F = 512
    let mut group = c.benchmark_group("radical_dimension_512");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(limit_radical_dimension(black_box(stage))))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(limit_radical_dimension_seq(black_box(stage))))
    });
    group.finish();
}

fn bench_link_scan(c: &mut Criterion) {
    let w = parse_order("z[2]").unwrap();
    let chain = build_chain(&w, 3).unwrap();
    let mut group = c.benchmark_group("link_scan_t16");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(scan_links(black_box(&chain), 1, 1).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(scan_links_seq(black_box(&chain), 1, 1).unwrap()))
    });
    group.finish();
}

fn bench_embed_multiplicative(c: &mut Criterion) {
    let w = parse_order("z[2]").unwrap();
    let chain = build_chain(&w, 3).unwrap();
    let (f, g) = (chain.stage(1), chain.stage(2)); // T16 into T64
    let mut group = c.benchmark_group("embed_multiplicative_t16_t64");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(check_embed_multiplicative(black_box(f), black_box(g)).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(check_embed_multiplicative_seq(black_box(f), black_box(g)).unwrap()))
    });
    group.finish();
}

fn bench_oracle_sweep(c: &mut Criterion) {
    use rayon::prelude::*;
    let algebras: Vec<_> = enumerate_preorders(4)
        .into_iter()
        .map(std::sync::Arc::new)
        .collect();
    let check = |a: &std::sync::Arc<lexalg::DigraphAlgebra>| {
        let oracle: Vec<_> = radical_trace_oracle(a)
            .unwrap()
            .iter()
            .map(element_coordinates)
            .collect();
        let combinatorial: Vec<_> = lexalg::radical_combinatorial(a)
            .edges()
            .iter()
            .map(|&(i, j)| {
                element_coordinates(&lexalg::Element::unit(a, i, j).unwrap())
            })
            .collect();
        spans_equal(a.dim(), &combinatorial, &oracle)
    };
    let mut group = c.benchmark_group("oracle_sweep_n4");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(algebras.par_iter().all(|a| check(black_box(a)))))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(algebras.iter().all(|a| check(black_box(a)))))
    });
    group.finish();
}

criterion_group!(
    kernels,
    bench_radical_dimension,
    bench_link_scan,
    bench_embed_multiplicative,
    bench_oracle_sweep
);
criterion_main!(kernels);
