use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use score_bench::fixtures;
use score_core::harness::{exhaustive_pop_push_inverse, run_campaign, GenConfig, OracleBounds};
use score_core::{eval, invert, parse, pretty, Semantics, Term};
use std::hint::black_box;

fn evaluators(c: &mut Criterion) {
    let mut g = c.benchmark_group("eval");
    for (name, p, s) in fixtures() {
        for sem in Semantics::ALL {
            let id = BenchmarkId::new(sem.name(), name);
            g.bench_with_input(id, &(&p, &s), |b, (p, s)| b.iter(|| eval(p, s, sem).unwrap()));
        }
    }
    g.finish();
}

fn syntax(c: &mut Criterion) {
    let (_, p, _) = fixtures().remove(2);
    let text = pretty(&p);
    c.bench_function("parse", |b| b.iter(|| parse(black_box(&text)).unwrap()));
    c.bench_function("invert", |b| b.iter(|| invert(black_box(&p))));
    c.bench_function("round-trip term", |b| b.iter(|| Term::seq(p.clone(), invert(&p))));
}

fn harness(c: &mut Criterion) {
    c.bench_function("oracle default grid", |b| {
        b.iter(|| exhaustive_pop_push_inverse(OracleBounds::default()))
    });
    let mut g = c.benchmark_group("campaign");
    g.sample_size(10);
    g.bench_function("1000 cases", |b| b.iter(|| run_campaign(&GenConfig::default(), 1000)));
    g.finish();
}

criterion_group!(benches, evaluators, syntax, harness);
criterion_main!(benches);
