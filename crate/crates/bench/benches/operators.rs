use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracvec::frac1d::{caputo_derivative, rl_integral};
use fracvec::fracint::gauss_residual;
use fracvec::fracvec3d::{curl_alpha, div_alpha};
use fracvec::maxwell::{maxwell_step, MaxwellParams};
use fracvec::special::{mittag_leffler, wright, MLParams, WrightParams};
use fracvec::FracOrder;
use fracvec_bench::{em_state, field, line};
use num_complex::Complex64;
use std::hint::black_box;

fn one_dimensional(c: &mut Criterion) {
    let ord = FracOrder::new(0.5).unwrap();
    let mut g = c.benchmark_group("frac1d");
    for m in [256usize, 1024, 4096] {
        let f = line(m);
        g.bench_with_input(BenchmarkId::new("rl_integral", m), &f, |b, f| {
            b.iter(|| rl_integral(black_box(f), ord).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("caputo_derivative", m), &f, |b, f| {
            b.iter(|| caputo_derivative(black_box(f), ord).unwrap())
        });
    }
    g.finish();
}

fn vector_operators(c: &mut Criterion) {
    let ord = FracOrder::new(0.5).unwrap();
    let mut g = c.benchmark_group("fracvec3d");
    g.sample_size(20);
    for m in [16usize, 32] {
        let f = field(m);
        g.bench_with_input(BenchmarkId::new("curl_alpha", m), &f, |b, f| {
            b.iter(|| curl_alpha(black_box(f), ord).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("div_alpha", m), &f, |b, f| {
            b.iter(|| div_alpha(black_box(f), ord).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gauss_residual", m), &f, |b, f| {
            b.iter(|| gauss_residual(black_box(f), ord).unwrap())
        });
    }
    g.finish();
}

fn special(c: &mut Criterion) {
    let ml = MLParams::new(0.5, 1.0).unwrap();
    let z = Complex64::new(-3.0, 4.0);
    c.bench_function("mittag_leffler(0.5,1; -3+4i)", |b| b.iter(|| mittag_leffler(ml, black_box(z)).unwrap()));
    let w = WrightParams::new(-0.4, 0.6).unwrap();
    c.bench_function("wright(-0.4,0.6; -5)", |b| b.iter(|| wright(w, black_box(-5.0)).unwrap()));
}

fn maxwell(c: &mut Criterion) {
    let mut g = c.benchmark_group("maxwell");
    g.sample_size(10);
    for alpha in [0.8, 1.0] {
        let p = MaxwellParams::uniform(alpha).unwrap();
        let s = em_state(16);
        g.bench_with_input(BenchmarkId::new("rk4_step_16", alpha), &s, |b, s| {
            b.iter(|| maxwell_step(black_box(s), &p, 1e-3).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, one_dimensional, vector_operators, special, maxwell);
criterion_main!(benches);
