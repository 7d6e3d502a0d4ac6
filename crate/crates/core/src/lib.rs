//! One-dimensional discrete-time quantum walks and the classical walks built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! - [`coin`]: the coin matrix, its chirality split `C = P + Q` and the `Θ` transform.
//! - [`walk`]: exact amplitude evolution (Ambainis `U = SC` and Gudder `U' = CS` orderings),
//!   matrix-valued path weights and position distributions.
//! - [`qwrw`]: the quantum-walk-replicating random walk, i.e. the time- and site-dependent
//!   transition field `p_n(x)`, `q_n(x)`, its exact marginals and a trajectory sampler.
//! - [`skeleton`]: the initial-state independent skeleton `τ(s)` and the random walk driven by it.
//! - [`spectral`]: analytic helpers (`h`, `u`, `v`, phase function `θ`), oscillatory integrals
//!   and the weak-convergence residual for the inside-the-peaks regime.
//! - [`sampler`]: the shared, seed-deterministic Monte Carlo engine used by both random walks.

// `!(x < y)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coin;
pub mod error;
pub mod linalg;
pub mod qwrw;
pub mod sampler;
pub mod skeleton;
pub mod spectral;
pub mod walk;

mod quadrature;

pub use coin::{ChiralityDecomposition, CoinSpec, ThetaMatrix};
pub use error::{Error, Result};
pub use linalg::{Mat2, Vec2};
pub use num_complex::Complex64;
pub use qwrw::{TransitionField, TransitionSite};
pub use sampler::{Histogram, TrajectoryBatch, TransitionTable};
pub use skeleton::{Branch, PeakSign, SkeletonFn};
pub use spectral::{OscIntegral, PhaseFunctions, SpectralVectors};
pub use walk::{Convention, Distribution, InitialState, PathWeights, WalkState};
