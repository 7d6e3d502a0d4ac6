//! Hand-derived reference values and statistical checks of the samplers.

use std::f64::consts::FRAC_1_SQRT_2;

use qwskel::qwrw::{qwrw_marginal, sample_qwrw, transition_fields};
use qwskel::sampler::SampleOptions;
use qwskel::skeleton::{around_peak_grid, sample_qsrw, PeakSign, SkeletonFn};
use qwskel::{CoinSpec, Convention, Distribution, Histogram, InitialState, WalkState};

#[test]
fn frozen_skeleton_values() {
    let t = SkeletonFn::new(FRAC_1_SQRT_2).unwrap();
    // (0.8 - 0.5 + √0.5·√0.14) / 1.6, evaluated by hand: 0.352859456941537
    assert!((t.tau2(0.8).unwrap() - 0.352_859_456_941_537).abs() < 1e-14);
    // (0.9 - 0.5 + √0.5·√0.31) / 1.8
    assert!((t.tau2(0.9).unwrap() - 0.440_944_663_166_995).abs() < 1e-14);
    assert!((t.tau_circ(PeakSign::Plus) - 0.146_446_609_406_726).abs() < 1e-14);
}

#[test]
fn hadamard_peaks_at_ballistic_positions() {
    let mu = WalkState::run(
        &CoinSpec::hadamard(),
        &InitialState::symmetric(),
        Convention::Ambainis,
        500,
    )
    .distribution();
    let peaks = mu.argmax_positions();
    assert_eq!(peaks.len(), 2);
    let expected = 500.0 * FRAC_1_SQRT_2;
    assert!((peaks[0] as f64 + expected).abs() <= 10.0, "{peaks:?}");
    assert!((peaks[1] as f64 - expected).abs() <= 10.0, "{peaks:?}");
    assert!(mu.mean().abs() < 1e-10);
}

#[test]
fn norm_survives_long_runs() {
    let state = WalkState::run(
        &CoinSpec::new(
            qwskel::Complex64::new(0.3, 0.4),
            qwskel::Complex64::new(0.0, -(0.75f64).sqrt()),
            1.0,
        )
        .unwrap(),
        &InitialState::left(),
        Convention::Ambainis,
        2000,
    );
    assert!((state.total_probability() - 1.0).abs() < 1e-10);
}

#[test]
fn qwrw_histogram_matches_exact_marginal() {
    let coin = CoinSpec::hadamard();
    let phi = InitialState::left();
    let exact = WalkState::run(&coin, &phi, Convention::Ambainis, 100).distribution();
    let batch = sample_qwrw(&coin, &phi, 100, 1_000_000, 17, SampleOptions::default()).unwrap();
    assert_eq!(batch.endpoints.total(), 1_000_000);
    let tv = batch.endpoints.to_distribution().total_variation(&exact);
    assert!(tv < 5e-3, "tv = {tv}");
}

#[test]
fn qwrw_error_shrinks_with_trials() {
    let coin = CoinSpec::hadamard();
    let phi = InitialState::symmetric();
    let exact = qwrw_marginal(&coin, &phi, 60).unwrap().pop().unwrap();
    let tv = |trials| {
        sample_qwrw(&coin, &phi, 60, trials, 3, SampleOptions::default())
            .unwrap()
            .endpoints
            .to_distribution()
            .total_variation(&exact)
    };
    let (small, large) = (tv(10_000), tv(1_000_000));
    // statistical rate: roughly a factor √100 = 10 between the two
    assert!(large < small / 3.0, "{small} vs {large}");
}

#[test]
fn first_step_is_bernoulli() {
    let coin = CoinSpec::new(
        qwskel::Complex64::new(0.6, 0.0),
        qwskel::Complex64::new(0.0, 0.8),
        0.0,
    )
    .unwrap();
    let phi = InitialState::symmetric();
    let p0 = transition_fields(&coin, &phi, 1)[0].get(0).unwrap().p;
    // ‖P φ‖² = |0.6/√2 + 0.8i·i/√2|² = (0.6 - 0.8)²/2 = 0.02
    assert!((p0 - 0.02).abs() < 1e-15);
    let trials = 200_000u64;
    let batch = sample_qwrw(&coin, &phi, 1, trials, 8, SampleOptions::default()).unwrap();
    let left = batch.endpoints.count(-1) as f64 / trials as f64;
    let sigma = (p0 * (1.0 - p0) / trials as f64).sqrt();
    assert!((left - p0).abs() < 3.0 * sigma, "{left} vs {p0}");

    let q = sample_qsrw(
        &SkeletonFn::from_coin(&coin),
        1,
        trials,
        8,
        SampleOptions::default(),
    )
    .unwrap();
    let left = q.endpoints.count(-1) as f64 / trials as f64;
    assert!((left - 0.5).abs() < 3.0 * (0.25 / trials as f64).sqrt());
}

fn ks_distance(a: &Histogram, b: &Histogram) -> f64 {
    // empirical CDFs of x/N on the union of both supports
    let mut points: Vec<(f64, f64, f64)> = Vec::new();
    let (ta, tb) = (a.total() as f64, b.total() as f64);
    for (x, c) in a.nonzero() {
        points.push((x as f64 / a.horizon() as f64, c as f64 / ta, 0.0));
    }
    for (x, c) in b.nonzero() {
        points.push((x as f64 / b.horizon() as f64, 0.0, c as f64 / tb));
    }
    points.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (mut fa, mut fb, mut worst) = (0.0f64, 0.0f64, 0.0f64);
    for (_, da, db) in points {
        fa += da;
        fb += db;
        worst = worst.max((fa - fb).abs());
    }
    worst
}

#[test]
fn qsrw_scales_ballistically() {
    let skeleton = SkeletonFn::new(FRAC_1_SQRT_2).unwrap();
    let short = sample_qsrw(&skeleton, 250, 100_000, 21, SampleOptions::default()).unwrap();
    let long = sample_qsrw(&skeleton, 500, 100_000, 22, SampleOptions::default()).unwrap();
    let ks = ks_distance(&short.endpoints, &long.endpoints);
    assert!(ks < 0.05, "ks = {ks}");
}

#[test]
fn peak_grid_is_monotone() {
    for c in [0.0, 0.5, 2.0] {
        let grid = around_peak_grid(1000, FRAC_1_SQRT_2, PeakSign::Plus, c).unwrap();
        assert!(grid.windows(2).all(|w| w[1].1 >= w[0].1), "c = {c}");
        assert!(grid
            .iter()
            .all(|&(n, x)| (x + n as i64) % 2 == 0 && x.abs() <= n as i64));
    }
}

#[test]
fn distribution_total_variation() {
    let a = Distribution::from_sites(1, vec![0.5, 0.5]).unwrap();
    let b = Distribution::from_sites(1, vec![1.0, 0.0]).unwrap();
    assert_eq!(a.total_variation(&b), 0.5);
}
