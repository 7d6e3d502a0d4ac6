//! Coin matrix `C`, its chirality decomposition and the `Θ` transform relating walk conventions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};

/// Tolerance for every unitarity check on coin data.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Smallest admissible `|a|` and `|b|`.
pub const MIN_COMPONENT: f64 = 1e-9;

/// The five real numbers a coin is specified by on the command line and in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    pub a_re: f64,
    pub a_im: f64,
    pub b_re: f64,
    pub b_im: f64,
    pub delta: f64,
}

impl CoinParams {
    pub const HADAMARD: CoinParams = CoinParams {
        a_re: FRAC_1_SQRT_2,
        a_im: 0.0,
        b_re: FRAC_1_SQRT_2,
        b_im: 0.0,
        delta: -PI,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralityDecomposition {
    /// `|L⟩⟨L| C`: top row of `C`, moves the walker left.
    pub p: Mat2,
    /// `|R⟩⟨R| C`: bottom row of `C`, moves the walker right.
    pub q: Mat2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaMatrix {
    /// `Θ = [[a, b], [-b̄, ā]]`
    pub theta: Mat2,
}

/// A validated, time- and site-homogeneous coin
/// `C = [[a, b], [-e^{iδ} b̄, e^{iδ} ā]]` with `arg det C = δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinSpec {
    a: Complex64,
    b: Complex64,
    delta: f64,
    c: Mat2,
    decomposition: ChiralityDecomposition,
    theta: ThetaMatrix,
}

impl CoinSpec {
    /// Validates `(a, b, δ)` and caches `C`, `P`, `Q` and `Θ`.
    pub fn new(a: Complex64, b: Complex64, delta: f64) -> Result<Self> {
        let (abs_a, abs_b) = (a.norm(), b.norm());
        if !(abs_a >= MIN_COMPONENT && abs_b >= MIN_COMPONENT) {
            return Err(Error::DegenerateCoin { abs_a, abs_b });
        }
        let norm = a.norm_sqr() + b.norm_sqr();
        let deviation = (norm - 1.0).abs();
        if !(deviation <= UNITARITY_TOL) {
            return Err(Error::NonUnitary { norm, deviation });
        }
        if !(-PI..PI).contains(&delta) {
            return Err(Error::DeltaOutOfRange(delta));
        }

        let phase = Complex64::from_polar(1.0, delta);
        let c = Mat2::new(a, b, -phase * b.conj(), phase * a.conj());
        let theta = Mat2::new(a, b, -b.conj(), a.conj());
        Ok(CoinSpec {
            a,
            b,
            delta,
            c,
            decomposition: ChiralityDecomposition {
                p: c.project_row(0),
                q: c.project_row(1),
            },
            theta: ThetaMatrix { theta },
        })
    }

    pub fn from_params(p: &CoinParams) -> Result<Self> {
        CoinSpec::new(
            Complex64::new(p.a_re, p.a_im),
            Complex64::new(p.b_re, p.b_im),
            p.delta,
        )
    }

    /// `C = (1/√2)[[1, 1], [1, -1]]`, i.e. `a = b = 1/√2`, `δ = -π`.
    pub fn hadamard() -> Self {
        CoinSpec::from_params(&CoinParams::HADAMARD).expect("hadamard coin is valid")
    }

    /// A coin with Haar-like random phases and `|a|` drawn uniformly from `[0.05, 0.95]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let abs_a: f64 = rng.random_range(0.05..0.95);
        let abs_b = (1.0 - abs_a * abs_a).sqrt();
        let a = Complex64::from_polar(abs_a, rng.random_range(-PI..PI));
        let b = Complex64::from_polar(abs_b, rng.random_range(-PI..PI));
        let delta = rng.random_range(-PI..PI);
        // |a|² + |b|² rounds to 1 within a few ulps.
        CoinSpec::new(a, b, delta).expect("random coin is valid")
    }

    /// Same `a`, `b` with a different determinant phase.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        CoinSpec::new(self.a, self.b, delta)
    }

    pub fn params(&self) -> CoinParams {
        CoinParams {
            a_re: self.a.re,
            a_im: self.a.im,
            b_re: self.b.re,
            b_im: self.b.im,
            delta: self.delta,
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn abs_a(&self) -> f64 {
        self.a.norm()
    }

    pub fn abs_b(&self) -> f64 {
        self.b.norm()
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.c
    }

    pub fn decomposition(&self) -> &ChiralityDecomposition {
        &self.decomposition
    }

    pub fn p(&self) -> &Mat2 {
        &self.decomposition.p
    }

    pub fn q(&self) -> &Mat2 {
        &self.decomposition.q
    }

    pub fn theta(&self) -> &Mat2 {
        &self.theta.theta
    }

    /// `|ṽ⟩ = Θ|v⟩`.
    pub fn tilde_transform(&self, v: &Vec2) -> Vec2 {
        self.theta.theta * *v
    }
}

/// Phase `e^{iδ(n+x)/2}` relating the Ambainis path weight to the `δ = 0` Gudder one.
pub fn ambainis_to_gudder_factor(n: usize, x: i64, delta: f64) -> Result<Complex64> {
    let rights = right_moves(n, x)?;
    Ok(Complex64::from_polar(1.0, delta * rights as f64))
}

/// `(n + x) / 2`, the number of right moves on any path from the origin to `x` in `n` steps.
pub(crate) fn right_moves(n: usize, x: i64) -> Result<u64> {
    let n_i = n as i64;
    if x.abs() > n_i || (n_i + x).rem_euclid(2) != 0 {
        return Err(Error::ParityViolation { n, x });
    }
    Ok(((n_i + x) / 2) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_matrix_and_determinant() {
        let h = CoinSpec::hadamard();
        let s = FRAC_1_SQRT_2;
        let expected = Mat2::new(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0));
        assert!(h.matrix().max_abs_diff(&expected) < 1e-15);
        // det = -1/2 - 1/2 = -1 by hand
        assert!((h.matrix().det() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(h.matrix().unitarity_defect() < UNITARITY_TOL);
    }

    #[test]
    fn pythagorean_coin() {
        let coin = CoinSpec::new(c(0.6, 0.0), c(0.0, 0.8), 0.0).unwrap();
        let det = coin.matrix().det();
        // 0.36 - (0.8i)(-(-0.8i)) = 0.36 + 0.64
        assert!((det - c(1.0, 0.0)).norm() < 1e-15);
        assert!(det.arg().abs() < 1e-15);
        assert!(coin.matrix().unitarity_defect() < UNITARITY_TOL);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            CoinSpec::new(c(1.0, 0.0), c(0.0, 0.0), 0.0),
            Err(Error::DegenerateCoin { .. })
        ));
        assert!(matches!(
            CoinSpec::new(c(0.0, 0.0), c(1.0, 0.0), 0.0),
            Err(Error::DegenerateCoin { .. })
        ));
        let short = (0.45f64).sqrt();
        assert!(matches!(
            CoinSpec::new(c(short, 0.0), c(short, 0.0), 0.0),
            Err(Error::NonUnitary { .. })
        ));
        let s = FRAC_1_SQRT_2;
        assert!(matches!(
            CoinSpec::new(c(s, 0.0), c(s, 0.0), PI),
            Err(Error::DeltaOutOfRange(_))
        ));
        assert!(CoinSpec::new(c(s, 0.0), c(s, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn decomposition_and_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let coin = CoinSpec::random(&mut rng);
            let p = *coin.p();
            let q = *coin.q();
            assert_eq!(p + q, *coin.matrix());
            assert!((p * q.adjoint()).max_abs_diff(&Mat2::ZERO) < 1e-15);
            assert!(coin.theta().unitarity_defect() < UNITARITY_TOL);
            assert!(coin.matrix().unitarity_defect() < UNITARITY_TOL);
            assert!(
                (coin.matrix().det().arg() - coin.delta()).abs() < 1e-12
                    || (coin.matrix().det().arg() - coin.delta()).abs() > 2.0 * PI - 1e-12
            );
            // ⟨L| P Θ† = ⟨L|
            let row = Mat2::bra_mul(&Vec2::LEFT, &(p * coin.theta().adjoint()));
            assert!((row[0] - c(1.0, 0.0)).norm() < 1e-12);
            assert!(row[1].norm() < 1e-12);
        }
    }

    #[test]
    fn gudder_factor() {
        let f = ambainis_to_gudder_factor(2, 0, PI / 2.0).unwrap();
        assert!((f - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(ambainis_to_gudder_factor(0, 0, 1.234).unwrap(), c(1.0, 0.0));
        let f = ambainis_to_gudder_factor(3, 1, -PI).unwrap();
        assert!((f - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            ambainis_to_gudder_factor(3, 0, 0.0),
            Err(Error::ParityViolation { .. })
        ));
        assert!(ambainis_to_gudder_factor(1, 3, 0.0).is_err());
    }

    #[test]
    fn tilde_of_left_is_first_column() {
        let h = CoinSpec::hadamard();
        let v = h.tilde_transform(&Vec2::LEFT);
        let s = FRAC_1_SQRT_2;
        assert!(v.max_abs_diff(&Vec2::new(c(s, 0.0), c(-s, 0.0))) < 1e-15);
        assert_eq!(h.tilde_transform(&Vec2::ZERO), Vec2::ZERO);
    }
}
