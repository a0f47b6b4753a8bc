use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use surftsp_core::complex::{delaunay_complex, greedy_complex, DualGraph, IncidenceGraph};
use surftsp_core::instance::{RandomMode, TspInstance};
use surftsp_core::model::TreeVariant;
use surftsp_core::solve::write_lp;
use surftsp_core::surface_model::{build_general, build_planar};

fn triangulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("triangulation");
    for n in [100, 400] {
        let inst = TspInstance::random(n, 1, RandomMode::Euclidean).unwrap();
        g.bench_with_input(BenchmarkId::new("delaunay", n), &inst, |b, i| {
            b.iter(|| delaunay_complex(black_box(i)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("greedy", n), &inst, |b, i| {
            b.iter(|| greedy_complex(black_box(i)).unwrap())
        });
    }
    g.finish();
}

fn model_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("model_build");
    for n in [100, 400] {
        let inst = TspInstance::random(n, 2, RandomMode::Euclidean).unwrap();
        let ts = delaunay_complex(&inst).unwrap();
        let inc = IncidenceGraph::build(&inst, &ts);
        let dual = DualGraph::build(&inst, &ts).unwrap();
        g.bench_with_input(BenchmarkId::new("general_flow", n), &inc, |b, inc| {
            b.iter(|| build_general(black_box(inc), TreeVariant::Flow).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("planar_flow", n), &dual, |b, d| {
            b.iter(|| build_planar(black_box(d), TreeVariant::Flow).unwrap())
        });
    }
    g.finish();
}

fn lp_write(c: &mut Criterion) {
    let inst = TspInstance::random(200, 3, RandomMode::Euclidean).unwrap();
    let ts = delaunay_complex(&inst).unwrap();
    let m = build_general(&IncidenceGraph::build(&inst, &ts), TreeVariant::Flow).unwrap();
    c.bench_function("write_lp/general_flow/200", |b| b.iter(|| write_lp(black_box(&m))));
}

criterion_group!(benches, triangulation, model_build, lp_write);
criterion_main!(benches);
