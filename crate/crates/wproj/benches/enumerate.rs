//! Compares the rayon-partitioned enumeration kernel against the
//! sequential fallback, and batch ingestion against a loop.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use num_rational::BigRational;
use wproj::db;
use wproj::{enumerate_bounded, enumerate_bounded_seq, Weights};

fn bench_enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_bounded");
    let cases = [
        (vec![1u32, 1, 1], BigRational::from(BigInt::from(6))),
        (vec![1, 2, 3], BigRational::from(BigInt::from(4))),
        (
            vec![2, 4, 6, 10],
            BigRational::new(BigInt::from(3), BigInt::from(2)),
        ),
    ];
    for (weights, bound) in &cases {
        let w = Weights::new(weights.clone()).unwrap();
        let label = format!("{}_c{}", w, bound);
        group.bench_with_input(BenchmarkId::new("parallel", &label), &w, |b, w| {
            b.iter(|| enumerate_bounded(w, bound))
        });
        group.bench_with_input(BenchmarkId::new("sequential", &label), &w, |b, w| {
            b.iter(|| enumerate_bounded_seq(w, bound))
        });
    }
    group.finish();
}

fn bench_ingest(c: &mut Criterion) {
    let mut lines = String::new();
    for i in 0..500 {
        let base = 3 * (i as i64 + 1);
        lines.push_str(&format!(
            "{{\"label\":\"r{}\",\"preset\":\"genus2-igusa\",\"coords\":[\"{}\",\"{}\",\"{}\",\"{}\"]}}\n",
            i,
            base * 240,
            base * base * 1620,
            base * base * base * 119_880,
            base * base * base * base * 46_656,
        ));
    }
    c.bench_function("db_ingest_500", |b| {
        b.iter(|| db::ingest(lines.as_bytes()).unwrap())
    });
}

criterion_group!(benches, bench_enumerate, bench_ingest);
criterion_main!(benches);
