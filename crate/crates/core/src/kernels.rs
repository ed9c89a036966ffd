//! Closed-form time dependence of the Gaussian solutions.
//!
//! Every `1/γ^k` factor of the damped forms is rewritten with the entire
//! functions of [`crate::series`], so `γ = 0` (and `γ t ≪ 1`) is evaluated
//! without cancellation or division by zero.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{EnvironmentParams, GaussianAnsatz, GaussianPacketSpec, LinearPotential};
use crate::series::{phi1, phi2, phi3};

/// Position, momentum and relaxed time of the damped classical particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalTrajectory {
    pub x: f64,
    pub p: f64,
    pub tau: f64,
}

/// Coefficients of the two-packet diagonal cross density `P₁₂(p, t)` for
/// minimum-uncertainty packets of (possibly) different widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossGaussianCoeffs {
    /// Overlap exponent, time independent and `≤ 0`.
    pub b0: f64,
    /// Centre of the cross density.
    pub b1: f64,
    /// Width parameter, `(p − b1)²/(4 b2)` in the exponent.
    pub b2: f64,
}

/// Relaxed time `τ(t) = (1 − e^{−2γt}) / (2γ)`, equal to `t` when `γ = 0`.
pub fn tau(t: f64, env: &EnvironmentParams) -> f64 {
    debug_assert!(t >= 0.0);
    t * phi1(-2.0 * env.gamma() * t)
}

/// `∫₀ᵗ τ(s)² ds`.
fn tau_squared_integral(t: f64, gamma: f64) -> f64 {
    let z = -2.0 * gamma * t;
    t * t * t * (4.0 * phi3(2.0 * z) - 2.0 * phi3(z))
}

/// `(1 − e^{−4γt}) / (4γ)`.
fn quarter_relaxed_time(t: f64, gamma: f64) -> f64 {
    t * phi1(-4.0 * gamma * t)
}

pub fn classical_trajectory(
    t: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> ClassicalTrajectory {
    let gamma = env.gamma();
    let m = env.mass();
    let g = potential.g;
    let z = -2.0 * gamma * t;
    let tau = tau(t, env);
    // g (τ − t)/(2γ) = −g t² φ₂(−2γt)
    let x = spec.x0 + spec.p0 * tau / m - g * t * t * phi2(z);
    let p = spec.p0 * (-2.0 * gamma * t).exp() - m * g * tau;
    ClassicalTrajectory { x, p, tau }
}

/// Width parameter `d₂(t)` shared by every term built from packets of
/// width `sigma0`.
pub fn width_parameter(t: f64, sigma0: f64, env: &EnvironmentParams) -> f64 {
    let hbar = env.hbar();
    let decay = (-4.0 * env.gamma() * t).exp();
    hbar * hbar * decay / (8.0 * sigma0 * sigma0)
        + env.diffusion() * quarter_relaxed_time(t, env.gamma())
}

/// Coefficient `d₁₁(t)` (imaginary slope of `d₁`), the same for every
/// packet pair with common `σ₀` and `η`.
fn slope_coefficient(t: f64, sigma0: f64, eta: f64, env: &EnvironmentParams) -> f64 {
    let (m, hbar) = (env.mass(), env.hbar());
    let tau = tau(t, env);
    let decay = (-2.0 * env.gamma() * t).exp();
    decay * (hbar * tau / (4.0 * m * sigma0 * sigma0) + 0.5 * eta)
        + env.diffusion() * tau * tau / (m * hbar)
}

/// Coefficient `d₀₂(t)` (minus the `v²` coefficient of `d₀`).
fn curvature_coefficient(t: f64, sigma0: f64, eta: f64, env: &EnvironmentParams) -> f64 {
    let (m, hbar) = (env.mass(), env.hbar());
    let tau = tau(t, env);
    (1.0 + eta * eta) * sigma0 * sigma0 / (2.0 * hbar * hbar)
        + eta * tau / (2.0 * m * hbar)
        + tau * tau / (8.0 * m * m * sigma0 * sigma0)
        + env.diffusion() * tau_squared_integral(t, env.gamma()) / (m * m * hbar * hbar)
}

/// Evolution of `φ_a(p) φ_b*(p')` for packets sharing `x0`, `σ₀` and `η`.
fn pair_ansatz(
    t: f64,
    pa: f64,
    pb: f64,
    x0: f64,
    sigma0: f64,
    eta: f64,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> GaussianAnsatz {
    let (m, hbar) = (env.mass(), env.hbar());
    let gamma = env.gamma();
    let g = potential.g;
    let z = -2.0 * gamma * t;
    let tau = tau(t, env);
    let decay = z.exp();

    let a = sigma0 * sigma0 / (hbar * hbar);
    let stretch = 1.0 + eta * eta;
    let diff = pa - pb;
    let sum = pa + pb;

    let c0 = Complex64::new(-0.5 * a * diff * diff * stretch, x0 * diff / hbar);
    let c1 = Complex64::new(
        a * diff * stretch + tau * eta * diff / (2.0 * m * hbar),
        (-tau * sum / (2.0 * m) - x0 + g * t * t * phi2(z)) / hbar,
    );
    let c2 = Complex64::new(-curvature_coefficient(t, sigma0, eta, env), 0.0);
    let e0 = Complex64::new(0.5 * decay * sum - m * g * tau, 0.5 * decay * eta * diff);
    let e1 = Complex64::new(0.0, -slope_coefficient(t, sigma0, eta, env));
    GaussianAnsatz {
        c0,
        c1,
        c2,
        e0,
        e1,
        d2: width_parameter(t, sigma0, env),
    }
}

/// Density-matrix coefficients of a single stretched packet at time `t`.
pub fn single_packet_ansatz(
    t: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> GaussianAnsatz {
    debug_assert!(t >= 0.0);
    pair_ansatz(
        t,
        spec.p0,
        spec.p0,
        spec.x0,
        spec.sigma0,
        spec.eta,
        env,
        potential,
    )
}

/// Coefficients of the cross term `ρ_ab` evolved from `φ_a(p) φ_b*(p')`.
///
/// The packets must be co-centred and share `σ₀` and `η`; only the kick
/// momenta may differ.
pub fn cross_term_ansatz(
    t: f64,
    a: &GaussianPacketSpec,
    b: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> Result<GaussianAnsatz> {
    debug_assert!(t >= 0.0);
    if a.sigma0 != b.sigma0 {
        return Err(Error::Unsupported(format!(
            "cross term needs equal widths, got {} and {}",
            a.sigma0, b.sigma0
        )));
    }
    if a.eta != b.eta {
        return Err(Error::Unsupported(format!(
            "cross term needs equal stretching, got {} and {}",
            a.eta, b.eta
        )));
    }
    if a.x0 != b.x0 {
        return Err(Error::Unsupported(format!(
            "cross term needs co-centred packets, got x0 = {} and {}",
            a.x0, b.x0
        )));
    }
    Ok(pair_ansatz(
        t, a.p0, b.p0, a.x0, a.sigma0, a.eta, env, potential,
    ))
}

/// Width `w_t` of the momentum distribution, `w_t² = 2 d₂(t)`.
pub fn momentum_width(t: f64, spec: &GaussianPacketSpec, env: &EnvironmentParams) -> f64 {
    (2.0 * width_parameter(t, spec.sigma0, env)).sqrt()
}

/// `b`-coefficients of `P₁₂` for minimum-uncertainty packets `phi` (width
/// `σ₀`, momentum `p₀`) and `chi` (width `δ₀`, momentum `q₀`).
pub fn cross_pair_coeffs(
    t: f64,
    phi: &GaussianPacketSpec,
    chi: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> Result<CrossGaussianCoeffs> {
    if phi.eta != 0.0 || chi.eta != 0.0 {
        return Err(Error::Unsupported(
            "two-particle cross densities need minimum-uncertainty packets (eta = 0)".into(),
        ));
    }
    if phi.x0 != 0.0 || chi.x0 != 0.0 {
        return Err(Error::Unsupported(
            "two-particle cross densities need packets centred at x0 = 0".into(),
        ));
    }
    let hbar = env.hbar();
    let s2 = phi.sigma0 * phi.sigma0;
    let d2 = chi.sigma0 * chi.sigma0;
    let total = s2 + d2;
    let dp = phi.p0 - chi.p0;
    let gamma = env.gamma();
    let b0 = -(s2 * d2 / total) * dp * dp / (hbar * hbar);
    let b1 = (-2.0 * gamma * t).exp() * (phi.p0 * s2 + chi.p0 * d2) / total
        - env.mass() * potential.g * tau(t, env);
    let b2 = (-4.0 * gamma * t).exp() * hbar * hbar / (4.0 * total)
        + env.diffusion() * quarter_relaxed_time(t, gamma);
    Ok(CrossGaussianCoeffs { b0, b1, b2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(gamma: f64, kbt: f64) -> EnvironmentParams {
        EnvironmentParams::natural(gamma, kbt).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(0.0, &env(0.005, 2.0)), 0.0);
        let expected = (1.0 - (-1.0f64).exp()) / 0.01;
        assert!(rel(tau(100.0, &env(0.005, 2.0)), expected) < 1e-14);
        assert!((tau(100.0, &env(0.005, 2.0)) - 63.2121).abs() < 1e-4);
        assert_eq!(tau(5.0, &env(0.0, 2.0)), 5.0);
    }

    #[test]
    fn tau_monotone_and_bounded() {
        for gamma in [0.005, 0.05, 0.2] {
            let e = env(gamma, 2.0);
            let mut prev = -1.0;
            // strict growth until τ saturates in double precision
            for i in 0..2000 {
                let t = i as f64 * 0.25;
                if 2.0 * gamma * t > 30.0 {
                    break;
                }
                let tt = tau(t, &e);
                assert!(tt > prev, "gamma {gamma}, t {t}");
                assert!(tt < 1.0 / (2.0 * gamma));
                prev = tt;
            }
        }
    }

    #[test]
    fn trajectory_values() {
        let e = env(0.005, 2.0);
        let spec = GaussianPacketSpec::minimal(-1.0, 5.0).unwrap();
        let start = classical_trajectory(0.0, &spec, &e, &LinearPotential::free());
        assert_eq!((start.x, start.p), (0.0, -1.0));
        let tr = classical_trajectory(100.0, &spec, &e, &LinearPotential::free());
        assert!((tr.x + 63.2121).abs() < 1e-4);
        assert!((tr.p + 0.367879).abs() < 1e-6);
    }

    #[test]
    fn trajectory_long_time_momentum() {
        let e = env(0.05, 2.0);
        let spec = GaussianPacketSpec::minimal(1.0, 5.0).unwrap();
        let pot = LinearPotential::new(0.3).unwrap();
        let tr = classical_trajectory(2000.0, &spec, &e, &pot);
        assert!(rel(tr.p, -0.3 / 0.1) < 1e-12);
    }

    #[test]
    fn momentum_is_mass_times_velocity() {
        let e = EnvironmentParams::new(0.07, 1.5, 2.5, 1.0).unwrap();
        let spec = GaussianPacketSpec::new(0.4, 1.3, 2.0, 1.0).unwrap();
        let pot = LinearPotential::new(-0.8).unwrap();
        let h = 1e-5;
        for t in [0.5, 3.0, 17.0] {
            let xp = classical_trajectory(t + h, &spec, &e, &pot).x;
            let xm = classical_trajectory(t - h, &spec, &e, &pot).x;
            let p = classical_trajectory(t, &spec, &e, &pot).p;
            let fd = e.mass() * (xp - xm) / (2.0 * h);
            assert!((fd - p).abs() < 1e-8, "t = {t}: {fd} vs {p}");
        }
    }

    #[test]
    fn undamped_limit_matches_free_fall() {
        let e = env(1e-12, 2.0);
        let spec = GaussianPacketSpec::new(0.5, 1.2, 2.0, 0.0).unwrap();
        let pot = LinearPotential::new(0.7).unwrap();
        for t in [0.3, 2.0, 10.0, 50.0] {
            let tr = classical_trajectory(t, &spec, &e, &pot);
            let x = spec.x0 + spec.p0 * t - 0.5 * 0.7 * t * t;
            let p = spec.p0 - 0.7 * t;
            assert!(rel(tr.x, x) < 1e-6, "x at t = {t}");
            assert!(rel(tr.p, p) < 1e-6, "p at t = {t}");
        }
    }

    #[test]
    fn ansatz_initial_values() {
        let spec = GaussianPacketSpec::minimal(-1.0, 5.0).unwrap();
        let an = single_packet_ansatz(0.0, &spec, &env(0.005, 2.0), &LinearPotential::free());
        assert!((an.d2 - 0.005).abs() < 1e-17);
        assert_eq!(an.d01(), 0.0);
        assert!((an.d02() - 12.5).abs() < 1e-14);
        assert_eq!(an.d10(), 1.0);
        assert_eq!(an.d11(), 0.0);
        assert!(an.is_hermitian(0.0));
    }

    #[test]
    fn ansatz_thermal_width() {
        let spec = GaussianPacketSpec::minimal(-1.0, 5.0).unwrap();
        let an = single_packet_ansatz(5000.0, &spec, &env(0.005, 2.0), &LinearPotential::free());
        assert!(rel(an.d2, 1.0) < 1e-12);
    }

    #[test]
    fn width_formula_identity() {
        // Literal form of w_t with the exponential growth factor.
        for &(gamma, kbt) in &[(0.005, 2.0), (0.05, 5.0), (0.2, 2.0), (0.01, 0.5)] {
            let e = env(gamma, kbt);
            let d = e.diffusion();
            for sigma0 in [0.5, 2.0, 5.0] {
                let spec = GaussianPacketSpec::minimal(0.0, sigma0).unwrap();
                for t in [0.0, 0.1, 1.0, 7.5, 40.0] {
                    let literal = (-2.0 * gamma * t).exp() / (2.0 * sigma0)
                        * (1.0 + d * 2.0 * sigma0 * sigma0 / gamma * ((4.0 * gamma * t).exp() - 1.0))
                            .sqrt();
                    let w = momentum_width(t, &spec, &e);
                    assert!(rel(w, literal) < 1e-12, "{gamma} {kbt} {sigma0} {t}");
                    let d2 = single_packet_ansatz(t, &spec, &e, &LinearPotential::free()).d2;
                    assert!(rel(w * w, 2.0 * d2) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn width_values() {
        let spec = GaussianPacketSpec::minimal(0.0, 5.0).unwrap();
        assert!(rel(momentum_width(0.0, &spec, &env(0.005, 2.0)), 0.1) < 1e-15);
        let w = momentum_width(1e4, &spec, &env(0.005, 2.0));
        assert!(rel(w, 2f64.sqrt()) < 1e-12);
        for t in [0.0, 3.0, 300.0] {
            assert!(rel(momentum_width(t, &spec, &env(0.0, 2.0)), 0.1) < 1e-15);
        }
    }

    #[test]
    fn small_gamma_series_is_smooth() {
        // The damped forms must approach the undamped ones continuously.
        let spec = GaussianPacketSpec::new(0.2, -0.4, 1.5, 1.0).unwrap();
        let pot = LinearPotential::new(0.25).unwrap();
        let t = 3.0;
        let reference = single_packet_ansatz(t, &spec, &env(0.0, 0.0), &pot);
        for gamma in [1e-13, 1e-10, 1e-8] {
            let e = env(gamma, 0.0);
            let an = single_packet_ansatz(t, &spec, &e, &pot);
            assert!((an.c1 - reference.c1).norm() < 1e-7);
            assert!((an.c2 - reference.c2).norm() < 1e-7);
            assert!((an.e0 - reference.e0).norm() < 1e-7);
            assert!((an.e1 - reference.e1).norm() < 1e-7);
        }
    }

    #[test]
    fn curvature_diffusion_term_without_damping() {
        // With γ → 0 and D fixed the D-term of d₀₂ tends to D t³ / (3 m² ħ²).
        let t = 2.0;
        let gamma = 1e-9;
        let kbt = 0.05 / (2.0 * gamma);
        let e = EnvironmentParams::new(gamma, kbt, 1.0, 1.0).unwrap();
        let with = curvature_coefficient(t, 1.0, 0.0, &e);
        let without = curvature_coefficient(t, 1.0, 0.0, &env(0.0, 0.0));
        let expected = 0.05 * t * t * t / 3.0;
        assert!(rel(with - without, expected) < 1e-6);
    }

    #[test]
    fn cross_reduces_to_single() {
        let e = env(0.01, 3.0);
        let pot = LinearPotential::new(0.2).unwrap();
        let a = GaussianPacketSpec::new(0.0, 0.7, 3.0, 1.5).unwrap();
        for t in [0.0, 1.0, 9.0] {
            let cross = cross_term_ansatz(t, &a, &a, &e, &pot).unwrap();
            let single = single_packet_ansatz(t, &a, &e, &pot);
            assert_eq!(cross, single);
        }
    }

    #[test]
    fn cross_constant_term() {
        let a = GaussianPacketSpec::minimal(-1.0, 5.0).unwrap();
        let b = GaussianPacketSpec::minimal(1.0, 5.0).unwrap();
        let an = cross_term_ansatz(0.0, &a, &b, &env(0.005, 2.0), &LinearPotential::free()).unwrap();
        assert_eq!(an.c0, Complex64::new(-50.0, 0.0));
    }

    #[test]
    fn potential_only_moves_linear_terms() {
        let e = env(0.02, 2.0);
        let a = GaussianPacketSpec::new(0.0, -1.0, 2.0, 1.0).unwrap();
        let b = GaussianPacketSpec::new(0.0, 0.5, 2.0, 1.0).unwrap();
        for t in [0.5, 4.0] {
            let free = cross_term_ansatz(t, &a, &b, &e, &LinearPotential::free()).unwrap();
            let field = cross_term_ansatz(t, &a, &b, &e, &LinearPotential::new(0.4).unwrap()).unwrap();
            assert_eq!(free.c2, field.c2);
            assert_eq!(free.e1, field.e1);
            assert_eq!(free.c0, field.c0);
            assert_eq!(free.d2, field.d2);
            assert_ne!(free.c1, field.c1);
            assert_ne!(free.e0, field.e0);
        }
    }

    #[test]
    fn cross_rejects_mismatched_packets() {
        let e = env(0.01, 1.0);
        let pot = LinearPotential::free();
        let a = GaussianPacketSpec::minimal(1.0, 2.0).unwrap();
        let wide = GaussianPacketSpec::minimal(-1.0, 3.0).unwrap();
        let stretched = GaussianPacketSpec::new(0.0, -1.0, 2.0, 1.0).unwrap();
        let shifted = GaussianPacketSpec::new(1.0, -1.0, 2.0, 0.0).unwrap();
        assert!(cross_term_ansatz(1.0, &a, &wide, &e, &pot).is_err());
        assert!(cross_term_ansatz(1.0, &a, &stretched, &e, &pot).is_err());
        assert!(cross_term_ansatz(1.0, &a, &shifted, &e, &pot).is_err());
    }

    #[test]
    fn pair_coefficient_values() {
        let e = env(0.005, 5.0);
        let pot = LinearPotential::free();
        let phi = GaussianPacketSpec::minimal(-0.3, 2.0).unwrap();
        let chi = GaussianPacketSpec::minimal(0.3, 2.0).unwrap();
        let b = cross_pair_coeffs(0.0, &phi, &chi, &e, &pot).unwrap();
        assert!(rel(b.b0, -0.72) < 1e-14);
        assert!(b.b1.abs() < 1e-16);
        assert!(rel(b.b2, 0.03125) < 1e-15);
        let same = cross_pair_coeffs(3.0, &phi, &phi, &e, &pot).unwrap();
        assert_eq!(same.b0, 0.0);
        for t in [0.0, 1.0, 10.0, 100.0] {
            let b = cross_pair_coeffs(t, &phi, &chi, &e, &pot).unwrap();
            let w = momentum_width(t, &phi, &e);
            assert!(rel(b.b2, 0.5 * w * w) < 1e-14);
        }
        let stretched = GaussianPacketSpec::new(0.0, 0.3, 2.0, 1.0).unwrap();
        assert!(cross_pair_coeffs(1.0, &phi, &stretched, &e, &pot).is_err());
    }
}
