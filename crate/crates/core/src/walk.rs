//! Exact amplitude evolution of the one-dimensional quantum walk.
//!
//! States are stored densely over the reachable sublattice: at step `n` the sites
//! `x = -n, -n + 2, …, n` map to indices `0..=n` via `i = (x + n) / 2`.
//!
//! Left chirality moves to `x - 1`, right chirality to `x + 1`. With this shift the
//! Ambainis step (`U = SC`) reads `Ψ_{n+1}(x) = P Ψ_n(x+1) + Q Ψ_n(x-1)` and the
//! Gudder step (`U' = CS`) reads `Ψ_{n+1}(x) = C (Ψ_n(x+1)_L, Ψ_n(x-1)_R)ᵀ`.

use num_complex::Complex64;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::coin::CoinSpec;
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};

/// Tolerance on `‖φ‖ = 1`.
pub const INITIAL_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `U = SC`: coin first, then shift.
    Ambainis,
    /// `U' = CS`: shift first, then coin.
    Gudder,
}

/// Site index of `x` at step `n`, if reachable.
#[inline]
pub(crate) fn site_index(n: usize, x: i64) -> Option<usize> {
    let n_i = n as i64;
    if x.abs() > n_i || (x + n_i).rem_euclid(2) != 0 {
        None
    } else {
        Some(((x + n_i) / 2) as usize)
    }
}

#[inline]
pub(crate) fn site_position(n: usize, i: usize) -> i64 {
    2 * i as i64 - n as i64
}

/// A unit-norm initial chirality state `φ` placed at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    phi: Vec2,
}

impl InitialState {
    pub fn new(phi: Vec2) -> Result<Self> {
        let norm = phi.norm();
        if !((norm - 1.0).abs() <= INITIAL_NORM_TOL) {
            return Err(Error::NonNormalizedState(norm));
        }
        Ok(InitialState { phi })
    }

    /// From `(Re φ_L, Im φ_L, Re φ_R, Im φ_R)`.
    pub fn from_reals(l_re: f64, l_im: f64, r_re: f64, r_im: f64) -> Result<Self> {
        InitialState::new(Vec2::new(
            Complex64::new(l_re, l_im),
            Complex64::new(r_re, r_im),
        ))
    }

    /// `|L⟩`
    pub fn left() -> Self {
        InitialState { phi: Vec2::LEFT }
    }

    /// `(|L⟩ + i|R⟩)/√2`, which gives a symmetric Hadamard walk.
    pub fn symmetric() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        InitialState {
            phi: Vec2::new(Complex64::new(s, 0.0), Complex64::new(0.0, s)),
        }
    }

    /// A uniformly random point on the unit sphere of `ℂ²`.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let mut g = || -> f64 { rng.sample(StandardNormal) };
        loop {
            let v = Vec2::new(Complex64::new(g(), g()), Complex64::new(g(), g()));
            let norm = v.norm();
            if norm > 1e-6 {
                return InitialState {
                    phi: v.scale(Complex64::new(1.0 / norm, 0.0)),
                };
            }
        }
    }

    pub fn phi(&self) -> &Vec2 {
        &self.phi
    }

    pub fn reals(&self) -> [f64; 4] {
        [
            self.phi[0].re,
            self.phi[0].im,
            self.phi[1].re,
            self.phi[1].im,
        ]
    }
}

/// `Ψ_n` on the reachable sublattice at step `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    n: usize,
    convention: Convention,
    amplitudes: Vec<Vec2>,
}

impl WalkState {
    pub fn initial(phi: &InitialState, convention: Convention) -> Self {
        WalkState {
            n: 0,
            convention,
            amplitudes: vec![*phi.phi()],
        }
    }

    /// A state from raw amplitudes ordered `x = -n, -n+2, …, n`; the norm is not checked.
    pub fn from_amplitudes(
        n: usize,
        convention: Convention,
        amplitudes: Vec<Vec2>,
    ) -> Result<Self> {
        if amplitudes.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} sites at step {n}, got {}",
                n + 1,
                amplitudes.len()
            )));
        }
        Ok(WalkState {
            n,
            convention,
            amplitudes,
        })
    }

    /// Runs `steps` steps from `φ`.
    pub fn run(coin: &CoinSpec, phi: &InitialState, convention: Convention, steps: usize) -> Self {
        let mut state = WalkState::initial(phi, convention);
        for _ in 0..steps {
            state = state.evolve(coin);
        }
        state
    }

    /// Like [`WalkState::run`] but hands every intermediate state `Ψ_0 … Ψ_steps` to `visit`.
    pub fn run_with<F: FnMut(&WalkState)>(
        coin: &CoinSpec,
        phi: &InitialState,
        convention: Convention,
        steps: usize,
        mut visit: F,
    ) -> Self {
        let mut state = WalkState::initial(phi, convention);
        visit(&state);
        for _ in 0..steps {
            state = state.evolve(coin);
            visit(&state);
        }
        state
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// `Ψ_n(x)`; zero off the reachable sublattice.
    pub fn amplitude(&self, x: i64) -> Vec2 {
        site_index(self.n, x)
            .map(|i| self.amplitudes[i])
            .unwrap_or(Vec2::ZERO)
    }

    /// `(x, Ψ_n(x))` over reachable sites, left to right.
    pub fn sites(&self) -> impl Iterator<Item = (i64, &Vec2)> + '_ {
        let n = self.n;
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, v)| (site_position(n, i), v))
    }

    pub(crate) fn amplitudes(&self) -> &[Vec2] {
        &self.amplitudes
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes.iter().map(Vec2::norm_sqr).sum()
    }

    /// One step of `U = SC` or `U' = CS`, according to the state's convention.
    pub fn evolve(&self, coin: &CoinSpec) -> WalkState {
        let n = self.n;
        let old = &self.amplitudes;
        let c = coin.matrix();
        let mut next = Vec::with_capacity(n + 2);
        match self.convention {
            Convention::Ambainis => {
                let (p0, p1) = (c[(0, 0)], c[(0, 1)]);
                let (q0, q1) = (c[(1, 0)], c[(1, 1)]);
                for i in 0..=n + 1 {
                    // P Ψ_n(x+1) lives in the top entry, Q Ψ_n(x-1) in the bottom.
                    let top = old
                        .get(i)
                        .map_or(Complex64::ZERO, |v| p0 * v[0] + p1 * v[1]);
                    let bottom = match i.checked_sub(1) {
                        Some(j) => q0 * old[j][0] + q1 * old[j][1],
                        None => Complex64::ZERO,
                    };
                    next.push(Vec2::new(top, bottom));
                }
            }
            Convention::Gudder => {
                for i in 0..=n + 1 {
                    let shifted = Vec2::new(
                        old.get(i).map_or(Complex64::ZERO, |v| v[0]),
                        i.checked_sub(1).map_or(Complex64::ZERO, |j| old[j][1]),
                    );
                    next.push(*c * shifted);
                }
            }
        }
        WalkState {
            n: n + 1,
            convention: self.convention,
            amplitudes: next,
        }
    }

    /// `μ_n(x) = ‖Ψ_n(x)‖²`.
    pub fn distribution(&self) -> Distribution {
        Distribution {
            n: self.n,
            mu: self.amplitudes.iter().map(Vec2::norm_sqr).collect(),
        }
    }
}

/// Probability mass over the reachable sites at step `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n: usize,
    mu: Vec<f64>,
}

impl Distribution {
    /// Point mass at the origin.
    pub fn origin() -> Self {
        Distribution {
            n: 0,
            mu: vec![1.0],
        }
    }

    /// Builds from per-site values ordered `x = -n, -n+2, …, n`.
    pub fn from_sites(n: usize, mu: Vec<f64>) -> Result<Self> {
        if mu.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} sites at step {n}, got {}",
                n + 1,
                mu.len()
            )));
        }
        Ok(Distribution { n, mu })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: i64) -> f64 {
        site_index(self.n, x).map_or(0.0, |i| self.mu[i])
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.n;
        self.mu
            .iter()
            .enumerate()
            .map(move |(i, &m)| (site_position(n, i), m))
    }

    pub fn total(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, m)| x as f64 * m).sum::<f64>() / self.total()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.iter()
            .map(|(x, m)| (x as f64 - mean).powi(2) * m)
            .sum::<f64>()
            / self.total()
    }

    /// Position of the largest mass on the left half (`x ≤ 0`) and on the right half
    /// (`x ≥ 0`); a single entry when both coincide.
    pub fn argmax_positions(&self) -> Vec<i64> {
        let best = |it: &mut dyn Iterator<Item = (i64, f64)>| {
            it.fold(None::<(i64, f64)>, |acc, (x, m)| match acc {
                Some((_, bm)) if bm >= m => acc,
                _ => Some((x, m)),
            })
            .map(|(x, _)| x)
        };
        let left = best(&mut self.iter().filter(|(x, _)| *x <= 0));
        let right = best(&mut self.iter().filter(|(x, _)| *x >= 0));
        let mut out: Vec<i64> = left.into_iter().chain(right).collect();
        out.dedup();
        out
    }

    /// `max_x |μ(x) - ν(x)|` over the union of both supports.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let n = self.n.max(other.n) as i64;
        (-n..=n)
            .map(|x| (self.get(x) - other.get(x)).abs())
            .fold(0.0, f64::max)
    }

    /// Total-variation distance `½ Σ_x |μ(x) - ν(x)|`.
    pub fn total_variation(&self, other: &Distribution) -> f64 {
        let n = self.n.max(other.n) as i64;
        0.5 * (-n..=n)
            .map(|x| (self.get(x) - other.get(x)).abs())
            .sum::<f64>()
    }
}

/// `Ξ_n(x)` over the reachable sites at step `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathWeights {
    n: usize,
    convention: Convention,
    delta: f64,
    weights: Vec<Mat2>,
}

impl PathWeights {
    /// Matrix-valued evolution from `Ξ_0(0) = I`, using the same recursion as
    /// [`WalkState::evolve`].
    pub fn compute(n: usize, coin: &CoinSpec, convention: Convention) -> Self {
        let c = *coin.matrix();
        let p = *coin.p();
        let q = *coin.q();
        let mut weights = vec![Mat2::IDENTITY];
        for step in 0..n {
            let mut next = Vec::with_capacity(step + 2);
            for i in 0..=step + 1 {
                let from_right = weights.get(i).copied();
                let from_left = i.checked_sub(1).map(|j| weights[j]);
                let xi = match convention {
                    Convention::Ambainis => {
                        from_right.map_or(Mat2::ZERO, |m| p * m)
                            + from_left.map_or(Mat2::ZERO, |m| q * m)
                    }
                    Convention::Gudder => {
                        let shifted = from_right.map_or(Mat2::ZERO, |m| m.project_row(0))
                            + from_left.map_or(Mat2::ZERO, |m| m.project_row(1));
                        c * shifted
                    }
                };
                next.push(xi);
            }
            weights = next;
        }
        PathWeights {
            n,
            convention,
            delta: coin.delta(),
            weights,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn get(&self, x: i64) -> Option<&Mat2> {
        site_index(self.n, x).map(|i| &self.weights[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Mat2)> + '_ {
        let n = self.n;
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, m)| (site_position(n, i), m))
    }

    /// `Ψ_n(x) = Ξ_n(x) φ` for every site.
    pub fn apply(&self, phi: &InitialState) -> WalkState {
        WalkState {
            n: self.n,
            convention: self.convention,
            amplitudes: self.weights.iter().map(|m| *m * *phi.phi()).collect(),
        }
    }
}
