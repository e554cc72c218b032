use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ftl_core::fgl::Fgl;
use ftl_core::groebner::IncrementalOptions;
use ftl_core::relgen::{generate_relations, Arity, DegreeWindow, RelOptions};
use ftl_core::{ftl, twofgl, CoefficientRing, Polynomial};

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for name in ["chow", "hmw", "ko"] {
        let law = ftl::named_law(name, 8).unwrap();
        g.bench_function(name, |b| b.iter(|| ftl::verify_ftl(black_box(&law)).unwrap()));
    }
    g.finish();
}

fn functors(c: &mut Criterion) {
    let a = Polynomial::parse(CoefficientRing::Integers, "a").unwrap();
    let f = Fgl::multiplicative(&a, 12);
    c.bench_function("W(multiplicative)", |b| b.iter(|| twofgl::functor_w(black_box(&f)).unwrap()));
}

fn relations(c: &mut Criterion) {
    let w = DegreeWindow::new(-2, 0).unwrap();
    let mut g = c.benchmark_group("relations");
    g.sample_size(10);
    g.bench_function("generate [-2,0]", |b| {
        b.iter(|| generate_relations(w, Arity::Ftl, RelOptions::default()).count())
    });
    g.finish();
}

fn solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    g.bench_function("B0", |b| b.iter(|| twofgl::compute_b0(false, IncrementalOptions::default()).unwrap()));
    g.bench_function("epsilon one [-4,2]", |b| b.iter(|| ftl_bench::solve_epsilon_one().unwrap()));
    g.bench_function("inverted [-4,0]", |b| b.iter(|| ftl_bench::solve_inverted().unwrap()));
    g.finish();
}

criterion_group!(benches, verify, functors, relations, solve);
criterion_main!(benches);
