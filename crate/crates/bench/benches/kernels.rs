use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use trisearch_core::campaigns::table::pair_triangle;
use trisearch_core::campaigns::{cover_scan, CoverConfig};
use trisearch_core::diophantine::{min_multiplier_in_window, min_multiplier_scan, valid_multipliers};
use trisearch_core::oracle::exact_S;
use trisearch_core::witness::{best_bound, build_witness, verify_certificate};
use trisearch_core::{BigRational, QuadValue};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn quad(c: &mut Criterion) {
    let x = QuadValue::new(r(-97_361, 56_212), r(1, 1));
    c.bench_function("quad/sign_near_zero", |b| b.iter(|| black_box(&x).sign()));
    let y = QuadValue::new(r(3, 7), r(-11, 5));
    c.bench_function("quad/mul", |b| b.iter(|| black_box(&x) * black_box(&y)));
}

fn windows(c: &mut Criterion) {
    let (lo, hi) = (r(123_456, 1_000_000), r(123_556, 1_000_000));
    c.bench_function("window/euclid", |b| b.iter(|| min_multiplier_in_window(black_box(&lo), &hi).unwrap()));
    c.bench_function("window/scan", |b| b.iter(|| min_multiplier_scan(black_box(&lo), &hi, 1_000_000).unwrap()));
    c.bench_function("window/valid_list_1e5", |b| b.iter(|| valid_multipliers(black_box(100_000), &r(1, 17))));
}

fn witnesses(c: &mut Criterion) {
    let q = BigRational::from_integer(13421.into());
    c.bench_function("witness/build_13421", |b| b.iter(|| build_witness(black_box(&q), &r(1, 17)).unwrap()));
    let cert = build_witness(&q, &r(1, 17)).unwrap();
    c.bench_function("witness/verify_13421", |b| b.iter(|| verify_certificate(black_box(&cert)).unwrap()));
    let big = BigRational::from_integer(1_000_000_000i64.into());
    c.bench_function("witness/best_bound_1e9", |b| b.iter(|| best_bound(black_box(&big)).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_S");
    g.sample_size(10);
    for q in [100i64, 1000, 10_000] {
        let qr = BigRational::from_integer(q.into());
        g.bench_with_input(BenchmarkId::from_parameter(q), &qr, |b, qr| b.iter(|| exact_S(qr).unwrap()));
    }
    g.finish();
}

fn campaigns(c: &mut Criterion) {
    c.bench_function("table/pair_triangle", |b| b.iter(|| pair_triangle(black_box(7839), black_box(26337))));
    let mut g = c.benchmark_group("cover");
    g.sample_size(10);
    let cfg = CoverConfig::new(20_000, r(1, 17), None);
    g.bench_function("x_max_2e4", |b| b.iter(|| cover_scan(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, quad, windows, witnesses, oracle, campaigns);
criterion_main!(benches);
