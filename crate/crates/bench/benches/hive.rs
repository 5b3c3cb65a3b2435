use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lrc_core::geometry::{facet_center, lp_solve, rounding_for, Sense};
use lrc_core::sampling::{dikin_step, WalkParams, WalkState};
use lrc_core::volume::{estimate_volume, VolumeParams};
use lrc_core::{exact_count, ratio, rng, Body, HPolytope, PartitionTriple};

fn triples() -> Vec<(&'static str, PartitionTriple)> {
    vec![
        ("n3", PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1]).unwrap()),
        ("n4", PartitionTriple::from_parts(&[8, 5, 3, 0], &[6, 4, 2, 0], &[12, 9, 5, 2]).unwrap()),
        ("n5", PartitionTriple::from_parts(&[8, 6, 4, 2, 0], &[7, 5, 3, 1, 0], &[12, 10, 7, 5, 2]).unwrap()),
    ]
}

fn bench_exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_count");
    for (name, t) in triples() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &t, |b, t| {
            b.iter(|| exact_count(black_box(t), u64::MAX).unwrap())
        });
    }
    group.finish();
}

fn bench_lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_solve");
    for (name, t) in triples() {
        let p = HPolytope::for_triple(&t, Body::Hive);
        let objective = vec![ratio::int(1); p.dim()];
        group.bench_function(name, |b| b.iter(|| lp_solve(black_box(&p), &objective, Sense::Maximize).unwrap()));
    }
    group.finish();
}

fn bench_dikin_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("dikin_step");
    for (name, t) in triples() {
        let q = HPolytope::for_triple(&t, Body::Outer).deduplicated();
        let start: Vec<f64> = facet_center(&q).unwrap().iter().map(ratio::to_f64).collect();
        let radius = WalkParams::for_body(&q, 0).radius;
        let mut state = WalkState::new(&q, &start, rng::stream(0, 0)).unwrap();
        group.bench_function(name, |b| b.iter(|| dikin_step(&mut state, &q, radius)));
    }
    group.finish();
}

fn bench_volume(c: &mut Criterion) {
    let t = PartitionTriple::from_parts(&[4, 2, 1, 0], &[3, 2, 1, 0], &[6, 4, 2, 1]).unwrap();
    let q = HPolytope::for_triple(&t, Body::Outer).deduplicated();
    let rounding = rounding_for(&q).unwrap();
    let params = VolumeParams::new(0.5, 0.25, 0);
    let mut group = c.benchmark_group("volume");
    group.sample_size(10);
    group.bench_function("n4_q", |b| b.iter(|| estimate_volume(black_box(&q), &rounding, &params).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_exact, bench_lp, bench_dikin_step, bench_volume);
criterion_main!(benches);
