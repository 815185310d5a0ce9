use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dissform::dynamics::{rk4, NumericSystem};
use dissform::series::weighted_norm;
use dissform::build_normal_form;
use dissform_bench::{damped_two_harmonic, golden_start};
use std::hint::black_box;

fn normal_form(c: &mut Criterion) {
    let spec = damped_two_harmonic();
    let mut g = c.benchmark_group("normal_form");
    g.sample_size(10);
    for n in [1, 2, 3] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| build_normal_form(&spec, n, 20).unwrap()));
    }
    g.finish();
}

fn norm(c: &mut Criterion) {
    let nf = build_normal_form(&damped_two_harmonic(), 3, 20).unwrap();
    let y0 = golden_start().y;
    c.bench_function("weighted_norm/remainder", |b| {
        b.iter(|| weighted_norm(black_box(&nf.g_next[0]), &y0, 0.057, 0.025, 1.2e-4, 2e-4).unwrap())
    });
}

fn integrate(c: &mut Criterion) {
    let spec = damped_two_harmonic();
    let nf = build_normal_form(&spec, 2, 20).unwrap();
    let sys = NumericSystem::new(&spec, &nf.drift_in_original(), 1e-3, 1e-3).unwrap();
    let s0 = golden_start();
    c.bench_function("rk4/1000_steps", |b| b.iter(|| rk4(&sys, black_box(&s0), 1e-2, 10.0, 1000).unwrap()));
}

criterion_group!(benches, normal_form, norm, integrate);
criterion_main!(benches);
