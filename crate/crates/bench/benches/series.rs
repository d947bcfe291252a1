use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use opa_bench::{decaying_series, test_polynomial};
use opa_core::coeffseries::{exp_recurrence, exp_spectral};
use opa_core::{multiply, zero_free_on_closed_disc};
use std::hint::black_box;

fn exponential(c: &mut Criterion) {
    let mut group = c.benchmark_group("exp_series");
    for n in [128usize, 512, 2048] {
        let a = decaying_series(n);
        group.bench_with_input(BenchmarkId::new("recurrence", n), &n, |b, _| b.iter(|| exp_recurrence(black_box(a.coeffs()))));
        group.bench_with_input(BenchmarkId::new("spectral", n), &n, |b, &n| b.iter(|| exp_spectral(black_box(a.coeffs()), n)));
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiply");
    for d in [64usize, 1024, 8192] {
        let (a, b) = (test_polynomial(d), decaying_series(d));
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |bch, _| bch.iter(|| multiply(black_box(&a), black_box(&b))));
    }
    group.finish();
}

fn zero_free(c: &mut Criterion) {
    let mut group = c.benchmark_group("zero_free_certificate");
    group.sample_size(20);
    for d in [16usize, 256, 4096] {
        let p = test_polynomial(d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| b.iter(|| zero_free_on_closed_disc(black_box(&p)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, exponential, products, zero_free);
criterion_main!(benches);
