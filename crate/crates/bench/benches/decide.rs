use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dualgraph_core::classify::{is_regular, is_sandwiched};
use dualgraph_core::corpus::{self, random_regular};
use dualgraph_core::embed::find_embeddings;
use dualgraph_core::selfsim::{extract_sandwich, plant_witness, DEFAULT_K_MAX};
use dualgraph_core::{named, SandwichVerdict};

fn determinant(c: &mut Criterion) {
    let mut group = c.benchmark_group("determinant");
    for n in [8, 32, 96] {
        let m = named::a_n(n).intersection_matrix();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| black_box(m).determinant()));
    }
    group.finish();
}

fn regularity(c: &mut Criterion) {
    let mut rng = corpus::rng(1);
    let graphs: Vec<_> = (0..32).map(|_| random_regular(&mut rng).0).collect();
    c.bench_function("is_regular/corpus32", |b| {
        b.iter(|| graphs.iter().filter(|g| is_regular(black_box(g)).is_ok()).count())
    });
}

fn sandwich(c: &mut Criterion) {
    let mut rng = corpus::rng(2);
    let graphs: Vec<_> = (0..32).map(|_| corpus::random_sandwiched(&mut rng)).collect();
    c.bench_function("is_sandwiched/corpus32", |b| {
        b.iter(|| {
            for g in &graphs {
                black_box(is_sandwiched(black_box(g), 16).unwrap());
            }
        })
    });
    let e8 = named::e_n(8);
    c.bench_function("is_sandwiched/E8_budget8", |b| b.iter(|| is_sandwiched(black_box(&e8), 8).unwrap()));
}

fn embeddings(c: &mut Criterion) {
    let big = named::d_n(8);
    let small = named::a_n(4);
    c.bench_function("find_embeddings/A4_in_D8", |b| {
        b.iter(|| find_embeddings(black_box(&small), black_box(&big), usize::MAX).len())
    });
}

fn extraction(c: &mut Criterion) {
    let mut rng = corpus::rng(3);
    let witnesses: Vec<_> = (0..16)
        .map(|_| {
            let g = corpus::random_sandwiched(&mut rng);
            let SandwichVerdict::Sandwiched(s) = is_sandwiched(&g, 16).unwrap() else { unreachable!() };
            plant_witness(&g, &s, None).unwrap()
        })
        .collect();
    c.bench_function("extract_sandwich/corpus16", |b| {
        b.iter(|| witnesses.iter().map(|w| extract_sandwich(black_box(w), DEFAULT_K_MAX).unwrap().k).sum::<usize>())
    });
}

criterion_group!(benches, determinant, regularity, sandwich, embeddings, extraction);
criterion_main!(benches);
