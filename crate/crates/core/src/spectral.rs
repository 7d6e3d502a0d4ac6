//! Analytic helpers for the inside-the-peaks regime.
//!
//! - `h(z)`, `|u(z)⟩`, `|v(z)⟩` on the unit circle.
//! - The phase function `θ(s)` on `[-|a|, |a|]`, through the substitution
//!   `s = σ(t) = sin t / √(|b/a|² + sin² t)`, its inverse `t = k(s)` and
//!   `ρ(t) = 2θ(σ(t)) = 2(arccos(|a| cos t) - t σ(t))`.
//! - Oscillatory integrals `∫_{-|a|}^{y} F(s) e^{±2inθ(s)} ds`.
//! - The weak residual `∫_ℓ^r (p_n(ns) - τ₁(s)) g(s) ds`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::CoinSpec;
use crate::error::{Error, Result};
use crate::linalg::Vec2;
use crate::quadrature::CompositeRule;
use crate::qwrw::TransitionField;
use crate::skeleton::{PeakSign, SkeletonFn};
use crate::walk::{Convention, InitialState, WalkState};

/// Quadrature error target for [`osc_integral`].
pub const QUADRATURE_TARGET: f64 = 1e-8;
/// Error estimate above which [`osc_integral`] fails.
pub const QUADRATURE_LIMIT: f64 = 1e-6;
/// Gauss–Legendre nodes per panel; each panel spans at most one oscillation.
const NODES_PER_PANEL: usize = 20;

/// `h(z) = |a| cos(arg z) + i √(1 - |a|² cos²(arg z))`.
pub fn h_of(abs_a: f64, z_angle: f64) -> Complex64 {
    let c = abs_a * z_angle.cos();
    Complex64::new(c, (1.0 - c * c).max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralVectors {
    pub z_angle: f64,
    pub u: Vec2,
    pub v: Vec2,
    pub h: Complex64,
    /// `N(z)`, the Euclidean norm of the unnormalised `u`.
    pub norm: f64,
}

/// Builds `|u(z)⟩` and `|v(z)⟩` for `z = e^{i·z_angle}`.
pub fn uv_of(z_angle: f64, coin: &CoinSpec) -> Result<SpectralVectors> {
    let abs_a = coin.abs_a();
    let z = Complex64::from_polar(1.0, z_angle);
    let h = h_of(abs_a, z_angle);
    let ab = coin.a() * coin.b();
    let u_raw = Vec2::new(ab * z / abs_a, h - z.conj() * abs_a);
    let v_raw = Vec2::new(-h.conj() + z * abs_a, (ab * z).conj() / abs_a);
    let norm = u_raw.norm();
    if !(norm >= 1e-12) {
        return Err(Error::DegenerateVector(z_angle));
    }
    let inv = Complex64::new(1.0 / norm, 0.0);
    Ok(SpectralVectors {
        z_angle,
        u: u_raw.scale(inv),
        v: v_raw.scale(inv),
        h,
        norm,
    })
}

/// `σ`, `k = σ⁻¹`, `θ` and `ρ` for a given `|a|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseFunctions {
    abs_a: f64,
    abs_b: f64,
}

impl PhaseFunctions {
    pub fn new(abs_a: f64) -> Result<Self> {
        let skeleton = SkeletonFn::new(abs_a)?;
        Ok(PhaseFunctions {
            abs_a,
            abs_b: skeleton.abs_b(),
        })
    }

    pub fn from_coin(coin: &CoinSpec) -> Self {
        PhaseFunctions {
            abs_a: coin.abs_a(),
            abs_b: coin.abs_b(),
        }
    }

    pub fn abs_a(&self) -> f64 {
        self.abs_a
    }

    fn ratio_sqr(&self) -> f64 {
        (self.abs_b / self.abs_a).powi(2)
    }

    /// `σ(t) = sin t / √(|b/a|² + sin² t)`.
    pub fn sigma(&self, t: f64) -> f64 {
        let s = t.sin();
        s / (self.ratio_sqr() + s * s).sqrt()
    }

    /// `σ'(t) = |b/a|² cos t / (|b/a|² + sin² t)^{3/2}`.
    pub fn sigma_prime(&self, t: f64) -> f64 {
        let beta2 = self.ratio_sqr();
        let s = t.sin();
        beta2 * t.cos() / (beta2 + s * s).powf(1.5)
    }

    /// `k(s) = arcsin(s|b| / (|a|√(1 - s²)))` on `|s| ≤ |a|`.
    pub fn k(&self, s: f64) -> Result<f64> {
        if !(s.abs() <= self.abs_a) {
            return Err(Error::DomainError { s, branch: "k" });
        }
        let arg = s * self.abs_b / (self.abs_a * (1.0 - s * s).sqrt());
        Ok(arg.clamp(-1.0, 1.0).asin())
    }

    /// `θ(s) = arccos(|a| cos k(s)) - k(s)·s`.
    pub fn theta(&self, s: f64) -> Result<f64> {
        let t = self.k(s)?;
        Ok((self.abs_a * t.cos()).acos() - t * s)
    }

    /// `ρ(t) = 2θ(σ(t))`.
    pub fn rho(&self, t: f64) -> f64 {
        2.0 * ((self.abs_a * t.cos()).acos() - t * self.sigma(t))
    }

    /// `ρ'(t) = -2t σ'(t)`: the derivative of `arccos(|a| cos t)` equals `σ(t)`.
    pub fn rho_prime(&self, t: f64) -> f64 {
        -2.0 * t * self.sigma_prime(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscIntegral {
    pub y: f64,
    pub n: u64,
    pub sign: PeakSign,
    pub value: Complex64,
    /// `|I(2P panels) - I(P panels)|`.
    pub error_estimate: f64,
    /// Integrand evaluations in the reported (finer) pass.
    pub nodes: usize,
}

/// `I_n = ∫_{-|a|}^{y} F(s) exp(±2inθ(s)) ds`.
///
/// Integrates in `t = k(s)`, where the integrand `F(σ(t)) e^{±inρ(t)} σ'(t)` is smooth
/// up to the endpoints. Panels are sized so that each spans at most one period of
/// `nρ(t)`; the finer of two passes (P and 2P panels) is returned.
pub fn osc_integral<F: Fn(f64) -> Complex64>(
    phase: &PhaseFunctions,
    f: F,
    y: f64,
    n: u64,
    sign: PeakSign,
) -> Result<OscIntegral> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let t_hi = phase.k(y)?;
    let t_lo = -FRAC_PI_2;
    if y <= -phase.abs_a || t_hi <= t_lo {
        return Ok(OscIntegral {
            y,
            n,
            sign,
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            nodes: 0,
        });
    }

    let nf = n as f64;
    let integrand = |t: f64| {
        let angle = sign.signum() * nf * phase.rho(t);
        f(phase.sigma(t)) * Complex64::from_polar(phase.sigma_prime(t), angle)
    };

    // total phase swept by nρ over [t_lo, t_hi], bounded via sampled |ρ'|
    let samples = 512;
    let width = t_hi - t_lo;
    let max_rate = (0..=samples)
        .map(|j| {
            phase
                .rho_prime(t_lo + width * j as f64 / samples as f64)
                .abs()
        })
        .fold(0.0, f64::max);
    let periods = nf * max_rate * width / std::f64::consts::TAU;
    let panels = (periods.ceil() as usize).max(4);

    let rule = CompositeRule::new(NODES_PER_PANEL);
    let coarse = rule.integrate(&integrand, t_lo, t_hi, panels);
    let fine = rule.integrate(&integrand, t_lo, t_hi, 2 * panels);
    let error_estimate = (fine - coarse).norm();
    if error_estimate > QUADRATURE_LIMIT {
        return Err(Error::QuadratureFailure {
            estimate: error_estimate,
            limit: QUADRATURE_LIMIT,
        });
    }
    Ok(OscIntegral {
        y,
        n,
        sign,
        value: fine,
        error_estimate,
        nodes: 2 * panels * rule.nodes_per_panel(),
    })
}

/// Midpoint Riemann sum of `(p_n(x) - τ₁(x/n))·g(x/n)` over reachable `x` with
/// `x/n ∈ [ℓ, r]`, each site weighted by its cell width `2/n`.
///
/// Sites whose `p_n` is undefined contribute nothing.
pub fn weak_residual_from_field<G: Fn(f64) -> f64>(
    field: &TransitionField,
    skeleton: &SkeletonFn,
    window: (f64, f64),
    g: G,
) -> Result<f64> {
    let (l, r) = window;
    let n = field.n();
    if !(l < r) || l <= -skeleton.abs_a() || r >= skeleton.abs_a() {
        return Err(Error::InvalidArgument(format!(
            "window [{l}, {r}] must be an interval inside (-|a|, |a|)"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyWindow { l, r, n });
    }
    let nf = n as f64;
    let cell = 2.0 / nf;
    let mut sites = 0usize;
    let mut sum = 0.0;
    for (x, site) in field.iter() {
        let s = x as f64 / nf;
        if s < l || s > r {
            continue;
        }
        sites += 1;
        if site.defined {
            sum += (site.p - skeleton.tau1(s)?) * g(s) * cell;
        }
    }
    if sites == 0 {
        return Err(Error::EmptyWindow { l, r, n });
    }
    Ok(sum)
}

/// [`weak_residual_from_field`] for the Ambainis walk from `φ` after `n` steps.
pub fn weak_residual<G: Fn(f64) -> f64>(
    coin: &CoinSpec,
    phi: &InitialState,
    n: usize,
    window: (f64, f64),
    g: G,
) -> Result<f64> {
    let state = WalkState::run(coin, phi, Convention::Ambainis, n);
    let field = TransitionField::from_state(&state, coin);
    weak_residual_from_field(&field, &SkeletonFn::from_coin(coin), window, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn hadamard() -> PhaseFunctions {
        PhaseFunctions::new(FRAC_1_SQRT_2).unwrap()
    }

    #[test]
    fn h_values() {
        let h = h_of(FRAC_1_SQRT_2, 0.0);
        assert!((h - Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
        let h = h_of(0.3, FRAC_PI_2);
        assert!((h - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn uv_at_quarter_turn() {
        let coin = CoinSpec::hadamard();
        let sv = uv_of(FRAC_PI_2, &coin).unwrap();
        let a = FRAC_1_SQRT_2;
        // u ∝ (ab·i/|a|, i + |a|·i)
        let raw = Vec2::new(Complex64::new(0.0, a * a / a), Complex64::new(0.0, 1.0 + a));
        let expected = raw.scale(Complex64::new(1.0 / raw.norm(), 0.0));
        assert!(sv.u.max_abs_diff(&expected) < 1e-15);
        assert!((sv.norm - raw.norm()).abs() < 1e-15);
    }

    #[test]
    fn k_values() {
        let ph = hadamard();
        assert_eq!(ph.k(0.0).unwrap(), 0.0);
        assert!((ph.k(FRAC_1_SQRT_2).unwrap() - FRAC_PI_2).abs() < 1e-7);
        assert!((ph.k(-FRAC_1_SQRT_2).unwrap() + FRAC_PI_2).abs() < 1e-7);
        // arcsin(0.5 / √0.75) = arcsin(0.57735…)
        let t = ph.k(0.5).unwrap();
        assert!((t - (0.5f64 / 0.75f64.sqrt()).asin()).abs() < 1e-15);
        assert!((t - 0.61548).abs() < 1e-5);
        assert!((ph.sigma(t) - 0.5).abs() < 1e-12);
        assert!(ph.k(0.8).is_err());
    }

    #[test]
    fn theta_values() {
        let ph = hadamard();
        assert!((ph.theta(0.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        let a = FRAC_1_SQRT_2;
        assert!((ph.theta(a).unwrap() - (FRAC_PI_2 - PI * a / 2.0)).abs() < 1e-7);
        assert!((ph.theta(-a).unwrap() - (FRAC_PI_2 - PI * a / 2.0)).abs() < 1e-7);
        for j in 0..=50 {
            let s = -0.7 + 1.4 * j as f64 / 50.0;
            assert!((ph.theta(s).unwrap() - ph.theta(-s).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let ph = PhaseFunctions::new(0.4).unwrap();
        let h = 1e-6;
        for j in 1..40 {
            let t = -FRAC_PI_2 + PI * j as f64 / 40.0;
            let fd = (ph.rho(t + h) - ph.rho(t - h)) / (2.0 * h);
            assert!((fd - ph.rho_prime(t)).abs() < 1e-7, "t = {t}");
            let fd = (ph.sigma(t + h) - ph.sigma(t - h)) / (2.0 * h);
            assert!((fd - ph.sigma_prime(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn osc_integral_trivia() {
        let ph = hadamard();
        let one = |_: f64| Complex64::new(1.0, 0.0);
        let empty = osc_integral(&ph, one, -FRAC_1_SQRT_2, 5, PeakSign::Plus).unwrap();
        assert_eq!(empty.value, Complex64::new(0.0, 0.0));
        assert!(osc_integral(&ph, one, 0.9, 5, PeakSign::Plus).is_err());
        assert!(osc_integral(&ph, one, 0.1, 0, PeakSign::Plus).is_err());

        let plus = osc_integral(&ph, one, 0.3, 50, PeakSign::Plus).unwrap();
        let minus = osc_integral(&ph, one, 0.3, 50, PeakSign::Minus).unwrap();
        assert!((plus.value - minus.value.conj()).norm() < 1e-12);
        assert!(plus.error_estimate < QUADRATURE_TARGET);
    }

    #[test]
    fn osc_integral_against_direct_s_quadrature() {
        // Independent route: plain composite Simpson in s on a dense grid, away from
        // the square-root endpoints (y well inside, integrand smooth there).
        let ph = PhaseFunctions::new(0.6).unwrap();
        let n = 7u64;
        let (lo, hi) = (-0.6, 0.45);
        let f = |s: f64| Complex64::new(1.0 + s * s, 0.0);
        let g = |s: f64| f(s) * Complex64::from_polar(1.0, 2.0 * n as f64 * ph.theta(s).unwrap());
        // the endpoint −|a| has a (s + |a|)^{3/2} term; fine grid keeps Simpson at ~1e-9
        let m = 2_000_000;
        let h = (hi - lo) / m as f64;
        let mut acc = g(lo) + g(hi);
        for j in 1..m {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += g(lo + j as f64 * h) * w;
        }
        let simpson = acc * (h / 3.0);
        let got = osc_integral(&ph, f, hi, n, PeakSign::Plus).unwrap();
        assert!(
            (got.value - simpson).norm() < 1e-7,
            "{} vs {}",
            got.value,
            simpson
        );
    }

    #[test]
    fn residual_edge_cases() {
        let coin = CoinSpec::hadamard();
        let phi = InitialState::symmetric();
        let zero = weak_residual(&coin, &phi, 40, (-0.5, 0.5), |_| 0.0).unwrap();
        assert_eq!(zero, 0.0);
        assert!(matches!(
            weak_residual(&coin, &phi, 10, (0.01, 0.02), |_| 1.0),
            Err(Error::EmptyWindow { .. })
        ));
        assert!(weak_residual(&coin, &phi, 10, (-0.9, 0.5), |_| 1.0).is_err());

        // one lattice cell: x = 2 at n = 40
        let state = WalkState::run(&coin, &phi, Convention::Ambainis, 40);
        let field = TransitionField::from_state(&state, &coin);
        let p = field.get(2).unwrap().p;
        let one = weak_residual(&coin, &phi, 40, (0.04, 0.06), |_| 3.0).unwrap();
        assert!((one - (p - (1.0 - 0.05) / 2.0) * 3.0 * 0.05).abs() < 1e-15);
        assert!(one.abs() <= 0.05 * 3.0);
    }
}
