use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwskel::qwrw::{sample_qwrw, transition_fields};
use qwskel::sampler::SampleOptions;
use qwskel::skeleton::{sample_qsrw, PeakSign, SkeletonFn};
use qwskel::spectral::{osc_integral, PhaseFunctions};
use qwskel::{CoinSpec, Complex64, Convention, InitialState, WalkState};

fn evolve(c: &mut Criterion) {
    let coin = CoinSpec::hadamard();
    let phi = InitialState::symmetric();
    let mut group = c.benchmark_group("evolve");
    for steps in [100usize, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(steps), &steps, |b, &n| {
            b.iter(|| WalkState::run(&coin, &phi, Convention::Ambainis, black_box(n)))
        });
    }
    group.finish();
}

fn fields(c: &mut Criterion) {
    let coin = CoinSpec::hadamard();
    let phi = InitialState::left();
    c.bench_function("transition_fields/500", |b| {
        b.iter(|| transition_fields(&coin, &phi, black_box(500)))
    });
}

fn sampling(c: &mut Criterion) {
    let coin = CoinSpec::hadamard();
    let phi = InitialState::symmetric();
    let skeleton = SkeletonFn::from_coin(&coin);
    let mut group = c.benchmark_group("sample");
    group.sample_size(10);
    group.bench_function("qwrw/200x20000", |b| {
        b.iter(|| {
            sample_qwrw(
                &coin,
                &phi,
                200,
                black_box(20_000),
                1,
                SampleOptions::default(),
            )
            .unwrap()
        })
    });
    group.bench_function("qsrw/200x20000", |b| {
        b.iter(|| {
            sample_qsrw(
                &skeleton,
                200,
                black_box(20_000),
                1,
                SampleOptions::default(),
            )
            .unwrap()
        })
    });
    group.finish();
}

fn oscillatory(c: &mut Criterion) {
    let phase = PhaseFunctions::from_coin(&CoinSpec::hadamard());
    let mut group = c.benchmark_group("osc_integral");
    for n in [10u64, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                osc_integral(
                    &phase,
                    |_| Complex64::new(1.0, 0.0),
                    phase.abs_a(),
                    black_box(n),
                    PeakSign::Plus,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, evolve, fields, sampling, oscillatory);
criterion_main!(benches);
