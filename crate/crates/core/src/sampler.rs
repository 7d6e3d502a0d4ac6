//! Seed-deterministic Monte Carlo sampling of time-inhomogeneous nearest-neighbour walks.
//!
//! Trajectory `t` draws from its own ChaCha8 stream (`seed`, stream `t`), so the
//! endpoint histogram depends only on `(table, trials, seed)` and never on the number
//! of worker threads or on how rayon splits the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::walk::{site_position, Distribution};

/// Trajectories handled by one rayon work item.
const BATCH: u64 = 2048;

/// Probability of moving left from every reachable site `(n, x)`, `0 ≤ n < horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    /// `left[n][i]` for `x = 2i - n`.
    left: Vec<Vec<f64>>,
    defined: Vec<Vec<bool>>,
}

impl TransitionTable {
    /// Builds a table from per-step rows; row `n` must hold `n + 1` entries.
    pub fn from_rows(left: Vec<Vec<f64>>, defined: Vec<Vec<bool>>) -> Result<Self> {
        if left.len() != defined.len() {
            return Err(Error::InvalidArgument(
                "left/defined rows differ in length".into(),
            ));
        }
        for (n, (l, d)) in left.iter().zip(&defined).enumerate() {
            if l.len() != n + 1 || d.len() != n + 1 {
                return Err(Error::InvalidArgument(format!(
                    "row {n} must have {} sites",
                    n + 1
                )));
            }
            if let Some(p) = l.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidArgument(format!(
                    "left probability {p} at step {n} is not in [0, 1]"
                )));
            }
        }
        Ok(TransitionTable { left, defined })
    }

    /// Table with every site defined and `left(n, x)` supplied by `f`.
    pub fn from_fn<F: Fn(usize, i64) -> f64>(horizon: usize, f: F) -> Result<Self> {
        let left: Vec<Vec<f64>> = (0..horizon)
            .map(|n| (0..=n).map(|i| f(n, site_position(n, i))).collect())
            .collect();
        let defined = (0..horizon).map(|n| vec![true; n + 1]).collect();
        TransitionTable::from_rows(left, defined)
    }

    /// Number of steps the table covers.
    pub fn horizon(&self) -> usize {
        self.left.len()
    }

    pub fn left(&self, n: usize, i: usize) -> f64 {
        self.left[n][i]
    }

    pub fn is_defined(&self, n: usize, i: usize) -> bool {
        self.defined[n][i]
    }

    /// Exact marginals `ν_0 … ν_horizon` of the walk started at the origin.
    ///
    /// `ν_{n+1}(x) = p_n(x+1) ν_n(x+1) + q_n(x-1) ν_n(x-1)`. Mass above `tol` on an
    /// undefined site is an error.
    pub fn marginals(&self, tol: f64) -> Result<Vec<Distribution>> {
        let mut out = vec![Distribution::origin()];
        let mut nu = vec![1.0];
        for n in 0..self.horizon() {
            let mut next = vec![0.0; n + 2];
            for (i, &mass) in nu.iter().enumerate() {
                if !self.defined[n][i] {
                    if mass > tol {
                        return Err(Error::UndefinedTransitionReached {
                            n,
                            x: site_position(n, i),
                            mass,
                        });
                    }
                    continue;
                }
                let p = self.left[n][i];
                // left move keeps index i at step n + 1, right move goes to i + 1
                next[i] += p * mass;
                next[i + 1] += (1.0 - p) * mass;
            }
            nu = next;
            out.push(Distribution::from_sites(n + 1, nu.clone())?);
        }
        Ok(out)
    }
}

/// Endpoint counts over the reachable sites at the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    horizon: usize,
    counts: Vec<u64>,
}

impl Histogram {
    pub fn empty(horizon: usize) -> Self {
        Histogram {
            horizon,
            counts: vec![0; horizon + 1],
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn count(&self, x: i64) -> u64 {
        crate::walk::site_index(self.horizon, x).map_or(0, |i| self.counts[i])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(x, count)` for sites with a non-zero count, left to right.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        let n = self.horizon;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| (site_position(n, i), c))
    }

    /// Adds another histogram over the same horizon.
    pub fn merge(mut self, other: &Histogram) -> Histogram {
        debug_assert_eq!(self.horizon, other.horizon);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }

    /// Empirical distribution; all zeros when the histogram is empty.
    pub fn to_distribution(&self) -> Distribution {
        let total = self.total().max(1) as f64;
        Distribution::from_sites(
            self.horizon,
            self.counts.iter().map(|&c| c as f64 / total).collect(),
        )
        .expect("histogram covers every reachable site")
    }

    /// Position with the largest count among `x` accepted by `filter`.
    pub fn argmax_where<F: Fn(i64) -> bool>(&self, filter: F) -> Option<i64> {
        let n = self.horizon;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (site_position(n, i), c))
            .filter(|(x, _)| filter(*x))
            .fold(None::<(i64, u64)>, |acc, (x, c)| match acc {
                Some((_, best)) if best >= c => acc,
                _ => Some((x, c)),
            })
            .map(|(x, _)| x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBatch {
    pub trials: u64,
    pub horizon: usize,
    pub seed: u64,
    pub endpoints: Histogram,
    /// Full paths `x_0 … x_horizon`, only when requested.
    pub paths: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SampleOptions {
    /// Caps the worker count; `None` uses rayon's global pool.
    pub threads: Option<usize>,
    pub record_paths: bool,
}

fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Walks one trajectory, returning the final site index; records positions into `path`.
fn walk_one(
    table: &TransitionTable,
    rng: &mut ChaCha8Rng,
    mut path: Option<&mut Vec<i64>>,
) -> Result<usize> {
    let mut i = 0usize;
    if let Some(p) = path.as_deref_mut() {
        p.push(0);
    }
    for n in 0..table.horizon() {
        if !table.defined[n][i] {
            return Err(Error::UndefinedTransitionReached {
                n,
                x: site_position(n, i),
                mass: f64::NAN,
            });
        }
        let u: f64 = rng.random();
        if u >= table.left[n][i] {
            i += 1;
        }
        if let Some(p) = path.as_deref_mut() {
            p.push(site_position(n + 1, i));
        }
    }
    Ok(i)
}

/// Samples `trials` trajectories from the origin through `table`.
pub fn sample(
    table: &TransitionTable,
    trials: u64,
    seed: u64,
    options: SampleOptions,
) -> Result<TrajectoryBatch> {
    let horizon = table.horizon();
    let run = || -> Result<(Histogram, Option<Vec<Vec<i64>>>)> {
        let batches = trials.div_ceil(BATCH);
        let parts: Vec<(Histogram, Vec<Vec<i64>>)> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut hist = Histogram::empty(horizon);
                let mut paths = Vec::new();
                for t in b * BATCH..((b + 1) * BATCH).min(trials) {
                    let mut rng = trajectory_rng(seed, t);
                    let end = if options.record_paths {
                        let mut path = Vec::with_capacity(horizon + 1);
                        let end = walk_one(table, &mut rng, Some(&mut path))?;
                        paths.push(path);
                        end
                    } else {
                        walk_one(table, &mut rng, None)?
                    };
                    hist.counts[end] += 1;
                }
                Ok((hist, paths))
            })
            .collect::<Result<_>>()?;
        let mut hist = Histogram::empty(horizon);
        let mut paths = Vec::new();
        for (h, p) in parts {
            hist = hist.merge(&h);
            paths.extend(p);
        }
        Ok((hist, options.record_paths.then_some(paths)))
    };

    let (endpoints, paths) = match options.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(TrajectoryBatch {
        trials,
        horizon,
        seed,
        endpoints,
        paths,
    })
}
