use criterion::{criterion_group, criterion_main, Criterion};

use ruletree::bounds::{class_bounds, BoundQuery, Extremum};
use ruletree::solver::{min_depth, SolveLimits};
use ruletree::verify::verify;
use ruletree::ProblemKind;
use ruletree_bench::solver_workloads;

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_depth");
    group.sample_size(10);
    for w in solver_workloads() {
        group.bench_function(&w.name, |b| {
            b.iter(|| {
                min_depth(&w.system, w.problem, SolveLimits::default())
                    .unwrap()
                    .depth
            })
        });
    }
    group.finish();
}

fn check(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    for w in solver_workloads() {
        let tree = min_depth(&w.system, w.problem, SolveLimits::default())
            .unwrap()
            .tree;
        group.bench_function(&w.name, |b| {
            b.iter(|| verify(&tree, &w.system, w.problem).unwrap().is_solving())
        });
    }
    group.finish();
}

fn bounds(c: &mut Criterion) {
    c.bench_function("class_bounds_esr_reduced", |b| {
        b.iter(|| {
            class_bounds(&BoundQuery {
                problem: ProblemKind::ESR,
                reduced: true,
                extremum: Extremum::Min,
                n: 1000,
                d: 7,
                k: 5,
            })
            .unwrap()
        })
    });
}

criterion_group!(benches, solve, check, bounds);
criterion_main!(benches);
