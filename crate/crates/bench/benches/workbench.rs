use criterion::{black_box, criterion_group, criterion_main, Criterion};
use srank_core::finite::{property_report, sr_exact_finite, validate};
use srank_core::harness::oracle::random_finite_monoids;
use srank_core::kernel::{complete, DEFAULT_COMPLETION_BUDGET};
use srank_core::presentation::{parse_cayley, parse_presentation, ExponentVector};
use srank_core::rank::{Analyzer, RadiusPolicy};

fn completion(c: &mut Criterion) {
    let (p, _) = parse_presentation("gens a b; rel 7 a = a + b; rel 12 a = 2 b;").unwrap();
    c.bench_function("complete/height_seven", |b| {
        b.iter(|| complete(black_box(&p), DEFAULT_COMPLETION_BUDGET).unwrap())
    });
}

fn normal_forms(c: &mut Criterion) {
    let (p, _) = parse_presentation("gens a b; rel 5 a = a + b; rel 8 a = 2 b;").unwrap();
    let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
    let v = ExponentVector(vec![37, 11]);
    c.bench_function("normal_form/deep_vector", |b| {
        b.iter(|| rs.normal_form(black_box(&v)))
    });
    c.bench_function("enumerate_window/radius_24", |b| {
        b.iter(|| rs.enumerate_window(black_box(24)))
    });
}

fn brackets(c: &mut Criterion) {
    let (p, _) = parse_presentation("gens a b; rel 4 a = 2 a + b; rel 2 a + b = 2 b;").unwrap();
    let rs = complete(&p, DEFAULT_COMPLETION_BUDGET).unwrap();
    let a = ExponentVector(vec![1, 0]);
    c.bench_function("sr_bracket/universal_fixture", |b| {
        b.iter(|| {
            let an = Analyzer::new(&rs);
            an.sr_bracket(black_box(&a), RadiusPolicy::with_radius(12))
        })
    });
}

fn finite_monoids(c: &mut Criterion) {
    let monoids = random_finite_monoids(16, 8, 99);
    c.bench_function("property_report/random_8", |b| {
        b.iter(|| {
            for m in &monoids {
                black_box(property_report(m));
            }
        })
    });
    let doc = parse_cayley(
        r#"{"elements": ["0","a","2a"], "zero": "0",
            "table": [["0","a","2a"],["a","2a","a"],["2a","a","2a"]]}"#,
    )
    .unwrap();
    let m = validate(&doc).unwrap();
    c.bench_function("sr_exact_finite/torsion", |b| {
        b.iter(|| sr_exact_finite(black_box(&m), 1))
    });
}

criterion_group!(benches, completion, normal_forms, brackets, finite_monoids);
criterion_main!(benches);
