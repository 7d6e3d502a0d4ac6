//! Quantum-walk-replicating random walk (QWRW).
//!
//! At step `n` a walker on `x` moves left with probability
//! `p_n(x) = ‖P Ψ_n(x)‖² / ‖Ψ_n(x)‖²` and right with `q_n(x) = ‖Q Ψ_n(x)‖² / ‖Ψ_n(x)‖²`.
//! The resulting classical walk has exactly the quantum walk's position marginals.

use crate::coin::{right_moves, CoinSpec};
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};
use crate::sampler::{self, SampleOptions, TrajectoryBatch, TransitionTable};
use crate::walk::{
    site_index, site_position, Convention, Distribution, InitialState, PathWeights, WalkState,
};

/// Sites with `μ_n(x)` below this are treated as carrying no mass.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;
/// Largest mass an undefined site may carry in the marginal recursion.
pub const UNDEFINED_MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSite {
    pub p: f64,
    pub q: f64,
    /// `false` where `μ_n(x)` is zero or below [`UNDERFLOW_FLOOR`]; `p = q = 1/2` there.
    pub defined: bool,
}

impl TransitionSite {
    const PLACEHOLDER: TransitionSite = TransitionSite {
        p: 0.5,
        q: 0.5,
        defined: false,
    };
}

/// `p_n`, `q_n` over the reachable sites at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionField {
    n: usize,
    sites: Vec<TransitionSite>,
}

impl TransitionField {
    /// Transition probabilities of `state` under `coin`.
    pub fn from_state(state: &WalkState, coin: &CoinSpec) -> Self {
        let top = coin.matrix().row(0);
        let bottom = coin.matrix().row(1);
        let sites = state
            .amplitudes()
            .iter()
            .map(|psi| {
                let mu = psi.norm_sqr();
                if !(mu >= UNDERFLOW_FLOOR) {
                    return TransitionSite::PLACEHOLDER;
                }
                // ‖PΨ‖² = |⟨L|CΨ⟩|², ‖QΨ‖² = |⟨R|CΨ⟩|²
                let left = (top[0] * psi[0] + top[1] * psi[1]).norm_sqr();
                let right = (bottom[0] * psi[0] + bottom[1] * psi[1]).norm_sqr();
                let total = left + right;
                TransitionSite {
                    p: left / total,
                    q: right / total,
                    defined: true,
                }
            })
            .collect();
        TransitionField {
            n: state.n(),
            sites,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Site at `x`; `None` when `x` is not reachable at step `n`.
    pub fn get(&self, x: i64) -> Option<&TransitionSite> {
        site_index(self.n, x).map(|i| &self.sites[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &TransitionSite)> + '_ {
        let n = self.n;
        self.sites
            .iter()
            .enumerate()
            .map(move |(i, s)| (site_position(n, i), s))
    }
}

/// `p_n`, `q_n` for `n = 0 … count - 1` along the Ambainis walk from `φ`.
pub fn transition_fields(
    coin: &CoinSpec,
    phi: &InitialState,
    count: usize,
) -> Vec<TransitionField> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    WalkState::run_with(coin, phi, Convention::Ambainis, count - 1, |state| {
        out.push(TransitionField::from_state(state, coin));
    });
    out
}

/// Materialises `p_n(x)` for `n < horizon` as a sampler table.
pub fn transition_table(coin: &CoinSpec, phi: &InitialState, horizon: usize) -> TransitionTable {
    let fields = transition_fields(coin, phi, horizon);
    let left = fields
        .iter()
        .map(|f| f.sites.iter().map(|s| s.p).collect())
        .collect();
    let defined = fields
        .iter()
        .map(|f| f.sites.iter().map(|s| s.defined).collect())
        .collect();
    TransitionTable::from_rows(left, defined).expect("field rows are well formed")
}

/// Evaluates `p_n(x)` through the `δ = 0` Gudder path weights:
///
/// `p = |⟨L|Ξ φ̃⟩|² / (|⟨L̃|Ξ φ̃⟩|² + |⟨R̃|Ξ φ̃⟩|²)` with `φ̃ = Θφ` and `Ξ = Ξ_n^{(0,G)}(x)`.
///
/// Independent of the direct route through `Ψ_n`; the two must agree.
#[derive(Debug, Clone)]
pub struct GudderRoute {
    coin: CoinSpec,
    weights: PathWeights,
}

impl GudderRoute {
    pub fn new(n: usize, coin: &CoinSpec) -> Result<Self> {
        let gudder_coin = coin.with_delta(0.0)?;
        Ok(GudderRoute {
            coin: *coin,
            weights: PathWeights::compute(n, &gudder_coin, Convention::Gudder),
        })
    }

    /// `(p_n(x), q_n(x))`; `None` when `μ_n(x)` is below the underflow floor.
    pub fn at(&self, x: i64, phi: &InitialState) -> Result<Option<(f64, f64)>> {
        let n = self.weights.n();
        right_moves(n, x)?;
        let xi: &Mat2 = self.weights.get(x).ok_or(Error::ParityViolation { n, x })?;
        let phi_t = self.coin.tilde_transform(phi.phi());
        let l_t = self.coin.tilde_transform(&Vec2::LEFT);
        let r_t = self.coin.tilde_transform(&Vec2::RIGHT);
        let w = *xi * phi_t;
        let numerator = w[0].norm_sqr();
        let q_numerator = w[1].norm_sqr();
        let denominator = l_t.inner(&w).norm_sqr() + r_t.inner(&w).norm_sqr();
        if !(denominator >= UNDERFLOW_FLOOR) {
            return Ok(None);
        }
        Ok(Some((numerator / denominator, q_numerator / denominator)))
    }
}

/// One-shot form of [`GudderRoute::at`].
pub fn path_weight_transition(
    n: usize,
    x: i64,
    coin: &CoinSpec,
    phi: &InitialState,
) -> Result<Option<(f64, f64)>> {
    right_moves(n, x)?;
    GudderRoute::new(n, coin)?.at(x, phi)
}

/// Exact QWRW marginals `ν_0 … ν_horizon`.
pub fn qwrw_marginal(
    coin: &CoinSpec,
    phi: &InitialState,
    horizon: usize,
) -> Result<Vec<Distribution>> {
    transition_table(coin, phi, horizon).marginals(UNDEFINED_MASS_TOL)
}

/// Samples QWRW trajectories of length `horizon` from the origin.
pub fn sample_qwrw(
    coin: &CoinSpec,
    phi: &InitialState,
    horizon: usize,
    trials: u64,
    seed: u64,
    options: SampleOptions,
) -> Result<TrajectoryBatch> {
    let table = transition_table(coin, phi, horizon);
    sampler::sample(&table, trials, seed, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec2;
    use num_complex::Complex64;

    #[test]
    fn origin_field() {
        let coin = CoinSpec::hadamard();
        let state = WalkState::initial(&InitialState::left(), Convention::Ambainis);
        let f = TransitionField::from_state(&state, &coin);
        let s = f.get(0).unwrap();
        assert!((s.p - 0.5).abs() < 1e-15);
        assert!(s.defined);
        assert!(f.get(1).is_none());
    }

    #[test]
    fn hadamard_step_two_goes_left() {
        let coin = CoinSpec::hadamard();
        let state = WalkState::run(&coin, &InitialState::left(), Convention::Ambainis, 2);
        // Ψ_2(0) = (1/2, 1/2); ⟨L|C Ψ⟩ = 1/√2, ⟨R|C Ψ⟩ = 0
        let s = *TransitionField::from_state(&state, &coin).get(0).unwrap();
        assert!((s.p - 1.0).abs() < 1e-15);
        assert!(s.q.abs() < 1e-15);
    }

    #[test]
    fn zero_and_underflowed_sites_are_undefined() {
        let z = Complex64::new(0.0, 0.0);
        let tiny = Complex64::new(1e-160, 0.0);
        let state = WalkState::from_amplitudes(
            2,
            Convention::Ambainis,
            vec![
                Vec2::new(z, z),
                Vec2::new(tiny, z),
                Vec2::new(Complex64::new(1.0, 0.0), z),
            ],
        )
        .unwrap();
        let f = TransitionField::from_state(&state, &CoinSpec::hadamard());
        for x in [-2, 0] {
            let s = f.get(x).unwrap();
            assert!(!s.defined);
            assert_eq!((s.p, s.q), (0.5, 0.5));
        }
        let s = f.get(2).unwrap();
        assert!(s.defined);
        assert!((s.p + s.q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gudder_route_at_origin() {
        let coin = CoinSpec::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), 1.1).unwrap();
        let phi = InitialState::symmetric();
        let (p, q) = path_weight_transition(0, 0, &coin, &phi).unwrap().unwrap();
        let expected = (*coin.p() * *phi.phi()).norm_sqr();
        assert!((p - expected).abs() < 1e-14);
        assert!((p + q - 1.0).abs() < 1e-14);
        assert!(matches!(
            path_weight_transition(3, 0, &coin, &phi),
            Err(Error::ParityViolation { .. })
        ));
    }

    #[test]
    fn two_step_marginal() {
        let nu = qwrw_marginal(&CoinSpec::hadamard(), &InitialState::left(), 2).unwrap();
        assert_eq!(nu.len(), 3);
        assert_eq!(nu[0], Distribution::origin());
        assert!((nu[2].get(-2) - 0.25).abs() < 1e-15);
        assert!((nu[2].get(0) - 0.5).abs() < 1e-15);
        assert!((nu[2].get(2) - 0.25).abs() < 1e-15);
    }
}
