use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gmml_bench::{figure, phase_type, subintensity};
use gmml_core::gmml::{correlation_power, mml_cdf, mml_density};
use gmml_core::models::{bivariate_ml_density, FigureName};
use gmml_core::sampling::{sample_batch, RngState};
use gmml_core::{ml_matrix, ml_real, MLParams};
use std::hint::black_box;

fn scalar(c: &mut Criterion) {
    let p = MLParams::new(0.6, 0.6).unwrap();
    let mut g = c.benchmark_group("ml_real");
    // one point per evaluation regime
    for z in [-1.0, -20.0, -200.0] {
        g.bench_with_input(BenchmarkId::from_parameter(z), &z, |b, &z| b.iter(|| ml_real(p, black_box(z))));
    }
    g.finish();
}

fn matrix(c: &mut Criterion) {
    let p = MLParams::new(0.7, 0.7).unwrap();
    let mut g = c.benchmark_group("ml_matrix");
    for d in [2, 5, 10, 20] {
        let a = subintensity(d);
        g.bench_with_input(BenchmarkId::from_parameter(d), &a, |b, a| b.iter(|| ml_matrix(p, black_box(a))));
    }
    g.finish();
}

fn univariate(c: &mut Criterion) {
    let rep = phase_type(4);
    c.bench_function("mml_density/4", |b| b.iter(|| mml_density(0.7, &rep, black_box(1.3))));
    c.bench_function("mml_cdf/4", |b| b.iter(|| mml_cdf(0.7, &rep, black_box(1.3))));
}

fn figures(c: &mut Criterion) {
    let fig1 = figure(FigureName::Fig1);
    let cfg = fig1.orderstat.clone().unwrap();
    c.bench_function("fig1_density/generic", |b| b.iter(|| fig1.density(black_box(&[0.8, 1.1]))));
    c.bench_function("fig1_density/eigenbasis", |b| {
        b.iter(|| bivariate_ml_density(&cfg, (0.6, 0.7), black_box((0.8, 1.1))))
    });
    let fig3 = figure(FigureName::Fig3);
    c.bench_function("fig3_correlation", |b| b.iter(|| correlation_power(&fig3.ff, &fig3.nu)));
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_batch");
    g.sample_size(10);
    for name in [FigureName::Fig1, FigureName::Fig3] {
        let s = figure(name).sampler().unwrap();
        g.bench_function(name.as_str(), |b| b.iter(|| sample_batch(&s, 10_000, RngState::new(1))));
    }
    g.finish();
}

criterion_group!(benches, scalar, matrix, univariate, figures, sampling);
criterion_main!(benches);
