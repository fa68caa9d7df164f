use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use turnover::continuous::integrate;
use turnover::periodic::{construct_period2, search_period2};
use turnover::simulate::trajectory;
use turnover::StateVector;
use turnover_bench::{excluding_model, interior_state, oscillating_model, wide_model};

fn bench_step(c: &mut Criterion) {
    let model = wide_model();
    let state = interior_state(10);
    c.bench_function("step_k10_ricker", |b| {
        b.iter(|| black_box(&model).step(black_box(&state)).unwrap())
    });
}

fn bench_trajectory(c: &mut Criterion) {
    let model = excluding_model();
    let x0 = StateVector::new(vec![0.3, 0.3]).unwrap();
    c.bench_function("trajectory_10k_steps", |b| {
        b.iter(|| trajectory(black_box(&model), black_box(&x0), 10_000).unwrap())
    });
}

fn bench_construct_period2(c: &mut Criterion) {
    let model = oscillating_model();
    c.bench_function("construct_period2", |b| {
        b.iter(|| construct_period2(black_box(&model)).unwrap())
    });
}

fn bench_search_period2(c: &mut Criterion) {
    let model = oscillating_model();
    c.bench_function("search_period2_grid12", |b| {
        b.iter(|| search_period2(black_box(&model), 12, 0).unwrap())
    });
}

fn bench_rk4(c: &mut Criterion) {
    let model = turnover::CompetitionModel::new_continuous(
        vec![4.0, 1.0],
        vec![1.0, 0.3],
        turnover::SuppressionKernel::logistic(1.0),
    )
    .unwrap();
    let x0 = StateVector::new(vec![0.3, 0.3]).unwrap();
    c.bench_function("rk4_1k_steps", |b| {
        b.iter(|| integrate(black_box(&model), black_box(&x0), 10.0, 0.01).unwrap())
    });
}

criterion_group!(
    benches,
    bench_step,
    bench_trajectory,
    bench_construct_period2,
    bench_search_period2,
    bench_rk4
);
criterion_main!(benches);
