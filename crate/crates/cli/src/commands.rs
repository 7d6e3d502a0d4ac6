//! One function per subcommand. Each returns its output in memory; writing is left to the caller.

use std::path::PathBuf;

use qwskel::coin::ambainis_to_gudder_factor;
use qwskel::qwrw::{sample_qwrw, transition_fields, GudderRoute};
use qwskel::sampler::SampleOptions;
use qwskel::skeleton::{sample_qsrw, PeakSign, SkeletonFn};
use qwskel::spectral::{osc_integral, weak_residual, PhaseFunctions, QUADRATURE_TARGET};
use qwskel::{
    CoinSpec, Complex64, Convention, Histogram, PathWeights, TrajectoryBatch, TransitionField,
    WalkState,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::error::CliResult;
use crate::table::{Cell, Table};

/// Tolerance of the two identity checks run by `verify`.
pub const IDENTITY_TOL: f64 = 1e-10;
/// `verify` wants `|I_last| < |I_first| / RL_DECAY_FACTOR`.
pub const RL_DECAY_FACTOR: f64 = 3.0;
/// `compare` summarises `|p - τ|` over `|a| + margin < |s| < upper`.
pub const COMPARE_MARGIN: f64 = 0.05;
pub const COMPARE_UPPER: f64 = 0.95;

#[derive(Debug, Clone)]
pub enum Body {
    Table(Table),
    Json(Value),
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub body: Body,
    /// Command-specific summary, recorded in the manifest.
    pub results: Value,
    /// Additional tables written to their own files.
    pub side_tables: Vec<(PathBuf, Table)>,
    /// Set when a verification check failed; the output is still written.
    pub failure: Option<String>,
}

impl CommandOutput {
    fn table(table: Table, results: Value) -> Self {
        CommandOutput {
            body: Body::Table(table),
            results,
            side_tables: Vec::new(),
            failure: None,
        }
    }

    pub fn as_table(&self) -> Option<&Table> {
        match &self.body {
            Body::Table(t) => Some(t),
            Body::Json(_) => None,
        }
    }
}

pub fn execute(cfg: &RunConfig) -> CliResult<CommandOutput> {
    match cfg.command {
        Command::QwRun => qw_run(cfg),
        Command::QwrwField => qwrw_field(cfg),
        Command::QwrwSample | Command::QsrwSample => sample(cfg),
        Command::SkeletonEval => skeleton_eval(cfg),
        Command::Compare => compare(cfg),
        Command::Verify => verify(cfg),
    }
}

pub fn qw_run(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let state = WalkState::run(
        &cfg.coin_spec()?,
        &cfg.initial_state()?,
        cfg.convention,
        cfg.steps,
    );
    let mu = state.distribution();
    let mut table = Table::new(&["n", "x", "mu"]);
    for (x, m) in mu.iter() {
        table.push(vec![cfg.steps.into(), x.into(), m.into()]);
    }
    let results = json!({
        "n": cfg.steps,
        "mean": mu.mean(),
        "variance": mu.variance(),
        "argmax_positions": mu.argmax_positions(),
        "total_probability": mu.total(),
    });
    Ok(CommandOutput::table(table, results))
}

pub fn qwrw_field(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let fields = transition_fields(&cfg.coin_spec()?, &cfg.initial_state()?, cfg.steps + 1);
    let mut table = Table::new(&["n", "x", "p", "q", "defined"]);
    let mut undefined = 0usize;
    for field in &fields {
        for (x, site) in field.iter() {
            undefined += usize::from(!site.defined);
            table.push(vec![
                field.n().into(),
                x.into(),
                site.p.into(),
                site.q.into(),
                site.defined.into(),
            ]);
        }
    }
    let results = json!({ "steps": cfg.steps, "undefined_sites": undefined });
    Ok(CommandOutput::table(table, results))
}

pub fn histogram_table(hist: &Histogram) -> Table {
    let mut table = Table::new(&["x", "count"]);
    for (x, c) in hist.nonzero() {
        table.push(vec![x.into(), c.into()]);
    }
    table
}

pub fn sample(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let coin = cfg.coin_spec()?;
    let options = SampleOptions {
        threads: cfg.threads,
        record_paths: false,
    };
    let batch: TrajectoryBatch = match cfg.command {
        Command::QsrwSample => sample_qsrw(
            &SkeletonFn::from_coin(&coin),
            cfg.steps,
            cfg.trials,
            cfg.seed,
            options,
        )?,
        _ => sample_qwrw(
            &coin,
            &cfg.initial_state()?,
            cfg.steps,
            cfg.trials,
            cfg.seed,
            options,
        )?,
    };
    let hist = &batch.endpoints;
    let results = json!({
        "trials": batch.trials,
        "horizon": batch.horizon,
        "mode_left": hist.argmax_where(|x| x < 0),
        "mode_right": hist.argmax_where(|x| x > 0),
    });
    Ok(CommandOutput::table(histogram_table(hist), results))
}

pub fn skeleton_eval(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let skeleton = SkeletonFn::from_coin(&cfg.coin_spec()?);
    let grid: Vec<f64> = match &cfg.s {
        Some(s) => s.clone(),
        None => {
            let k = cfg.grid;
            (1..=k)
                .map(|j| -1.0 + 2.0 * j as f64 / (k + 1) as f64)
                .collect()
        }
    };
    let mut table = Table::new(&["s", "tau"]);
    for &s in &grid {
        table.push(vec![s.into(), skeleton.eval(s, cfg.branch)?.into()]);
    }
    let results = json!({
        "abs_a": skeleton.abs_a(),
        "tau_circ_plus": skeleton.tau_circ(PeakSign::Plus),
        "tau_circ_minus": skeleton.tau_circ(PeakSign::Minus),
        "points": grid.len(),
    });
    Ok(CommandOutput::table(table, results))
}

pub fn compare(cfg: &RunConfig) -> CliResult<CommandOutput> {
    if cfg.steps == 0 {
        return Err(
            qwskel::Error::InvalidArgument("compare needs --steps of at least 1".into()).into(),
        );
    }
    let coin = cfg.coin_spec()?;
    let skeleton = SkeletonFn::from_coin(&coin);
    let state = WalkState::run(
        &coin,
        &cfg.initial_state()?,
        Convention::Ambainis,
        cfg.steps,
    );
    let field = TransitionField::from_state(&state, &coin);
    let nf = cfg.steps as f64;
    let lo = skeleton.abs_a() + COMPARE_MARGIN;

    let mut table = Table::new(&["x", "s", "p_n", "tau", "defined"]);
    let (mut dev_sum, mut dev_sites) = (0.0, 0usize);
    for (x, site) in field.iter() {
        let s = x as f64 / nf;
        let tau = if s.abs() < 1.0 {
            Some(skeleton.tau(s)?)
        } else {
            None
        };
        if let (true, Some(t)) = (site.defined, tau) {
            if s.abs() > lo && s.abs() < COMPARE_UPPER {
                dev_sum += (site.p - t).abs();
                dev_sites += 1;
            }
        }
        table.push(vec![
            x.into(),
            s.into(),
            site.p.into(),
            Cell::from(tau),
            site.defined.into(),
        ]);
    }
    let results = json!({
        "n": cfg.steps,
        "outside_window": [lo, COMPARE_UPPER],
        "outside_sites": dev_sites,
        "outside_mean_abs_dev": if dev_sites > 0 { Some(dev_sum / dev_sites as f64) } else { None },
    });
    Ok(CommandOutput::table(table, results))
}

/// Largest entry-wise gap between the Ambainis path weights and the rotated Gudder ones.
pub fn lemma_max_dev(coin: &CoinSpec, max_n: usize) -> CliResult<f64> {
    let gudder = coin.with_delta(0.0)?;
    let theta = *coin.theta();
    let mut worst = 0.0f64;
    for n in 0..=max_n {
        let amb = PathWeights::compute(n, coin, Convention::Ambainis);
        let gud = PathWeights::compute(n, &gudder, Convention::Gudder);
        for (x, lhs) in amb.iter() {
            let factor = ambainis_to_gudder_factor(n, x, coin.delta())?;
            let g = gud.get(x).expect("same light cone");
            let rhs = (theta.adjoint() * *g * theta).scale(factor);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(worst)
}

pub fn verify(cfg: &RunConfig) -> CliResult<CommandOutput> {
    let coin = cfg.coin_spec()?;
    let phi = cfg.initial_state()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut coins = vec![coin];
    coins.extend((0..cfg.lemma_coins).map(|_| CoinSpec::random(&mut rng)));

    let mut lemma_dev = 0.0f64;
    for c in &coins {
        lemma_dev = lemma_dev.max(lemma_max_dev(c, cfg.lemma_n)?);
    }

    // p_n(x) from the Gudder route against the direct amplitude route
    let (mut route_dev, mut route_mismatch) = (0.0f64, 0usize);
    for field in transition_fields(&coin, &phi, cfg.lemma_n + 1) {
        let route = GudderRoute::new(field.n(), &coin)?;
        for (x, site) in field.iter() {
            match (route.at(x, &phi)?, site.defined) {
                (Some((p, _)), true) => route_dev = route_dev.max((p - site.p).abs()),
                (None, false) => {}
                _ => route_mismatch += 1,
            }
        }
    }

    let phase = PhaseFunctions::from_coin(&coin);
    let mut rl = Vec::new();
    let mut rl_table = Table::new(&["n", "abs_In", "err_est"]);
    for &n in &cfg.rl_n {
        let i = osc_integral(
            &phase,
            |_| Complex64::new(1.0, 0.0),
            phase.abs_a(),
            n,
            PeakSign::Plus,
        )?;
        rl_table.push(vec![
            n.into(),
            i.value.norm().into(),
            i.error_estimate.into(),
        ]);
        rl.push(json!({ "n": n, "abs_In": i.value.norm(), "err_est": i.error_estimate }));
    }
    let abs: Vec<f64> = rl
        .iter()
        .map(|r| r["abs_In"].as_f64().unwrap_or(f64::NAN))
        .collect();
    let errs_ok = rl
        .iter()
        .all(|r| r["err_est"].as_f64().is_some_and(|e| e < QUADRATURE_TARGET));
    let decays = match (abs.first(), abs.last()) {
        (Some(first), Some(last)) if abs.len() > 1 => *last < *first / RL_DECAY_FACTOR,
        _ => true,
    };
    let rl_decreasing = abs.windows(2).all(|w| w[1] < w[0]);

    let mut residuals = Vec::new();
    let mut residual_table = Table::new(&["n", "residual"]);
    for &n in &cfg.residual_n {
        let r = weak_residual(&coin, &phi, n, cfg.window, |_| 1.0)?;
        residual_table.push(vec![n.into(), r.into()]);
        residuals.push(json!({ "n": n, "residual": r }));
    }

    let lemma_pass = lemma_dev < IDENTITY_TOL;
    let route_pass = route_dev < IDENTITY_TOL && route_mismatch == 0;
    let rl_pass = errs_ok && decays;
    let pass = lemma_pass && route_pass && rl_pass;
    let report = json!({
        "pass": pass,
        "lemma_tf_max_dev": lemma_dev,
        "lemma_tf_tol": IDENTITY_TOL,
        "lemma_tf_pass": lemma_pass,
        "lemma_coins": coins.len(),
        "lemma_n": cfg.lemma_n,
        "route_max_dev": route_dev,
        "route_mismatched_sites": route_mismatch,
        "route_pass": route_pass,
        "rl": rl,
        "rl_decreasing": rl_decreasing,
        "rl_pass": rl_pass,
        "residuals": residuals,
        "window": [cfg.window.0, cfg.window.1],
    });

    let mut side_tables = Vec::new();
    if let Some(p) = &cfg.rl_csv {
        side_tables.push((p.clone(), rl_table));
    }
    if let Some(p) = &cfg.residual_csv {
        side_tables.push((p.clone(), residual_table));
    }
    let failure = (!pass).then(|| {
        let failed: Vec<&str> = [
            (lemma_pass, "lemma"),
            (route_pass, "route"),
            (rl_pass, "rl"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect();
        format!("failed checks: {}", failed.join(", "))
    });
    Ok(CommandOutput {
        results: report.clone(),
        body: Body::Json(report),
        side_tables,
        failure,
    })
}
