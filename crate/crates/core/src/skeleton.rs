//! The skeleton structure `τ(s)` of the transition probabilities and the
//! quantum-skeleton random walk (QSRW) whose left-move probability is `τ(x/n)`.
//!
//! ```text
//! τ(s) = (1 - s)/2                                  |s| < |a|
//!        (1 ∓ |a|)/2                                s = ±|a|
//!        (s - |a|² + |b|·√(s² - |a|²)) / (2s)       |a| < |s| < 1
//! ```
//!
//! Only `|a|` (and `|b| = √(1 - |a|²)`) enter; phases of the coin and the initial
//! state do not.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coin::CoinSpec;
use crate::error::{Error, Result};
use crate::sampler::{self, SampleOptions, TrajectoryBatch, TransitionTable};

/// Relative tolerance for treating `|s|` as equal to `|a|`.
pub const PEAK_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeakSign {
    Plus,
    Minus,
}

impl PeakSign {
    pub fn signum(self) -> f64 {
        match self {
            PeakSign::Plus => 1.0,
            PeakSign::Minus => -1.0,
        }
    }
}

/// Which formula [`SkeletonFn::eval`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Piecewise dispatch on `|s|` versus `|a|`.
    #[default]
    Auto,
    /// Always `τ₁`; a domain error outside `(-|a|, |a|)`.
    Inside,
    /// Always `τ₂`; a domain error outside `|a| < |s| < 1`.
    Outside,
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Branch::Auto),
            "inside" => Ok(Branch::Inside),
            "outside" => Ok(Branch::Outside),
            other => Err(Error::InvalidArgument(format!("unknown branch `{other}`"))),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Auto => "auto",
            Branch::Inside => "inside",
            Branch::Outside => "outside",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonFn {
    abs_a: f64,
    abs_b: f64,
}

impl SkeletonFn {
    pub fn new(abs_a: f64) -> Result<Self> {
        if !(abs_a > 0.0 && abs_a < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "|a| = {abs_a} must lie in (0, 1)"
            )));
        }
        Ok(SkeletonFn {
            abs_a,
            abs_b: (1.0 - abs_a * abs_a).sqrt(),
        })
    }

    pub fn from_coin(coin: &CoinSpec) -> Self {
        SkeletonFn {
            abs_a: coin.abs_a(),
            abs_b: coin.abs_b(),
        }
    }

    pub fn abs_a(&self) -> f64 {
        self.abs_a
    }

    pub fn abs_b(&self) -> f64 {
        self.abs_b
    }

    /// `τ₁(s) = (1 - s)/2` on `|s| < |a|`.
    pub fn tau1(&self, s: f64) -> Result<f64> {
        if !(s.abs() < self.abs_a) {
            return Err(Error::DomainError { s, branch: "tau1" });
        }
        Ok((1.0 - s) / 2.0)
    }

    /// `τ₂(s)` on `|a| < |s| < 1`.
    pub fn tau2(&self, s: f64) -> Result<f64> {
        if !(s.abs() > self.abs_a && s.abs() < 1.0) {
            return Err(Error::DomainError { s, branch: "tau2" });
        }
        Ok(self.tau2_formula(s))
    }

    /// The `τ₂` expression without domain checks; finite on `|a| ≤ |s| ≤ 1`.
    fn tau2_formula(&self, s: f64) -> f64 {
        let a2 = self.abs_a * self.abs_a;
        let root = (s * s - a2).max(0.0).sqrt();
        ((s - a2 + self.abs_b * root) / (2.0 * s)).clamp(0.0, 1.0)
    }

    /// `τ_∘^± = (1 ∓ |a|)/2`.
    pub fn tau_circ(&self, sign: PeakSign) -> f64 {
        (1.0 - sign.signum() * self.abs_a) / 2.0
    }

    /// `τ(s)` on `(-1, 1)`.
    pub fn tau(&self, s: f64) -> Result<f64> {
        if !(s.abs() < 1.0) {
            return Err(Error::DomainError { s, branch: "tau" });
        }
        let gap = s.abs() - self.abs_a;
        if gap.abs() <= PEAK_MATCH_TOL * self.abs_a {
            let sign = if s > 0.0 {
                PeakSign::Plus
            } else {
                PeakSign::Minus
            };
            Ok(self.tau_circ(sign))
        } else if gap < 0.0 {
            Ok((1.0 - s) / 2.0)
        } else {
            Ok(self.tau2_formula(s))
        }
    }

    pub fn eval(&self, s: f64, branch: Branch) -> Result<f64> {
        match branch {
            Branch::Auto => self.tau(s),
            Branch::Inside => self.tau1(s),
            Branch::Outside => self.tau2(s),
        }
    }

    /// Left-move probability of the QSRW at `(n, x)`.
    ///
    /// `1/2` at `n = 0`; at `|x| = n` the `τ₂` formula is continued to `s = ±1`,
    /// where it equals `|b|²` (`s = 1`) and `|a|²` (`s = -1`).
    pub fn qsrw_left(&self, n: usize, x: i64) -> f64 {
        if n == 0 {
            return 0.5;
        }
        let s = x as f64 / n as f64;
        if s.abs() >= 1.0 {
            self.tau2_formula(s.signum())
        } else {
            self.tau(s).expect("|s| < 1")
        }
    }

    /// Transition table of the QSRW for steps `n < horizon`.
    pub fn qsrw_table(&self, horizon: usize) -> TransitionTable {
        TransitionTable::from_fn(horizon, |n, x| self.qsrw_left(n, x)).expect("tau lies in [0, 1]")
    }
}

/// Samples QSRW trajectories of length `horizon` from the origin.
pub fn sample_qsrw(
    skeleton: &SkeletonFn,
    horizon: usize,
    trials: u64,
    seed: u64,
    options: SampleOptions,
) -> Result<TrajectoryBatch> {
    sampler::sample(&skeleton.qsrw_table(horizon), trials, seed, options)
}

/// Reachable site nearest `±n|a| + c·n^{1/3}`.
///
/// The target is rounded to the nearest integer; if that has the wrong parity it is
/// moved one site toward the origin.
pub fn around_peak_site(n: usize, abs_a: f64, sign: PeakSign, c: f64) -> Result<i64> {
    if !(c >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "c = {c} must be non-negative"
        )));
    }
    let nf = n as f64;
    let target = sign.signum() * nf * abs_a + c * nf.cbrt();
    let n_i = n as i64;
    let mut x = (target.round() as i64).clamp(-n_i, n_i);
    if (x + n_i).rem_euclid(2) != 0 {
        x += match x.signum() {
            1 => -1,
            -1 => 1,
            _ => sign.signum() as i64,
        };
    }
    Ok(x)
}

/// `(n, x_n^±)` for `n = N mod 2, N mod 2 + 2, …, N`.
///
/// Consecutive steps cannot give a monotone sequence (every move is ±1 while the
/// peak advances by `|a| < 1`), so the grid keeps one parity class.
pub fn around_peak_grid(
    horizon: usize,
    abs_a: f64,
    sign: PeakSign,
    c: f64,
) -> Result<Vec<(usize, i64)>> {
    (horizon % 2..=horizon)
        .step_by(2)
        .map(|n| around_peak_site(n, abs_a, sign, c).map(|x| (n, x)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn hadamard() -> SkeletonFn {
        SkeletonFn::new(FRAC_1_SQRT_2).unwrap()
    }

    #[test]
    fn inside_branch() {
        let t = hadamard();
        assert_eq!(t.tau1(0.0).unwrap(), 0.5);
        assert_eq!(t.tau1(0.5).unwrap(), 0.25);
        let slope = (t.tau1(0.3).unwrap() - t.tau1(-0.2).unwrap()) / 0.5;
        assert_eq!(slope, -0.5);
        assert!(t.tau1(0.8).is_err());
        assert!(t.tau1(FRAC_1_SQRT_2).is_err());
    }

    #[test]
    fn outside_branch() {
        let t = hadamard();
        // (0.9 - 0.5 + (1/√2)·√0.31) / 1.8
        let expected = (0.4 + FRAC_1_SQRT_2 * 0.31f64.sqrt()) / 1.8;
        assert!((t.tau2(0.9).unwrap() - expected).abs() < 1e-15);
        assert!((t.tau2(0.9).unwrap() - 0.440945).abs() < 1e-6);
        assert!((t.tau2(-0.9).unwrap() - (1.0 - t.tau2(0.9).unwrap())).abs() < 1e-15);
        assert!((t.tau2(1.0 - 1e-12).unwrap() - 0.5).abs() < 1e-6);
        assert!(t.tau2(0.5).is_err());
        assert!(t.tau2(1.0).is_err());
    }

    #[test]
    fn peak_values() {
        let t = hadamard();
        assert!((t.tau_circ(PeakSign::Plus) - 0.146447).abs() < 1e-6);
        assert!((t.tau_circ(PeakSign::Minus) - 0.853553).abs() < 1e-6);
        assert_eq!(
            t.tau_circ(PeakSign::Plus) + t.tau_circ(PeakSign::Minus),
            1.0
        );
        assert_eq!(t.tau(FRAC_1_SQRT_2).unwrap(), t.tau_circ(PeakSign::Plus));
        assert_eq!(t.tau(-FRAC_1_SQRT_2).unwrap(), t.tau_circ(PeakSign::Minus));
    }

    #[test]
    fn dispatch_and_domain() {
        let t = hadamard();
        assert_eq!(t.tau(0.0).unwrap(), 0.5);
        assert!(t.tau(1.0).is_err());
        assert!(t.tau(-1.0).is_err());
        assert!(t.tau(f64::NAN).is_err());
        assert_eq!(t.eval(0.9, Branch::Auto).unwrap(), t.tau2(0.9).unwrap());
        assert!(t.eval(0.9, Branch::Inside).is_err());
        assert!(t.eval(0.1, Branch::Outside).is_err());
        assert_eq!("outside".parse::<Branch>().unwrap(), Branch::Outside);
        assert!("sideways".parse::<Branch>().is_err());
        assert!(SkeletonFn::new(1.0).is_err());
        assert!(SkeletonFn::new(0.0).is_err());
    }

    #[test]
    fn qsrw_edges() {
        let t = SkeletonFn::new(0.6).unwrap();
        assert_eq!(t.qsrw_left(0, 0), 0.5);
        assert!((t.qsrw_left(7, 7) - 0.64).abs() < 1e-15);
        assert!((t.qsrw_left(7, -7) - 0.36).abs() < 1e-15);
        assert_eq!(t.qsrw_left(4, 2), 0.25);
    }

    #[test]
    fn peak_grid() {
        assert_eq!(
            around_peak_site(0, FRAC_1_SQRT_2, PeakSign::Plus, 0.0).unwrap(),
            0
        );
        // 1000/√2 = 707.1 → 707, odd, moved to 706
        assert_eq!(
            around_peak_site(1000, FRAC_1_SQRT_2, PeakSign::Plus, 0.0).unwrap(),
            706
        );
        assert_eq!(
            around_peak_site(1000, FRAC_1_SQRT_2, PeakSign::Minus, 0.0).unwrap(),
            -706
        );
        assert_eq!(
            around_peak_site(1001, FRAC_1_SQRT_2, PeakSign::Plus, 0.0).unwrap(),
            707
        );
        assert!(around_peak_site(10, 0.5, PeakSign::Plus, -1.0).is_err());
        let grid = around_peak_grid(9, 0.5, PeakSign::Plus, 0.0).unwrap();
        assert_eq!(
            grid.iter().map(|g| g.0).collect::<Vec<_>>(),
            vec![1, 3, 5, 7, 9]
        );
    }
}
