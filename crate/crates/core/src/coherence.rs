//! Scalar decoherence diagnostics.

use crate::error::{Error, Result};
use crate::kernels::tau;
use crate::params::{EnvironmentParams, GaussianAnsatz, GaussianPacketSpec, LinearPotential};
use crate::series::sinhc;

/// Purity and coherence length both need `4 d₂ d₀₂ − d₁₁² > 0`.
const DISCRIMINANT_FLOOR: f64 = 1e-300;

fn discriminant(ansatz: &GaussianAnsatz) -> Result<f64> {
    let d11 = ansatz.d11();
    let disc = 4.0 * ansatz.d2 * ansatz.d02() - d11 * d11;
    if disc > DISCRIMINANT_FLOOR {
        Ok(disc)
    } else {
        Err(Error::NonPhysical(format!(
            "purity discriminant 4 d2 d02 - d11^2 = {disc:e} is not positive"
        )))
    }
}

/// Purity `ξ = Tr ρ² = 1 / (2 √(4 d₂ d₀₂ − d₁₁²))` of a single-packet state.
///
/// Not clamped: at low temperature the Markovian equation lets `ξ` exceed 1
/// transiently.
pub fn purity(ansatz: &GaussianAnsatz) -> Result<f64> {
    Ok(0.5 / discriminant(ansatz)?.sqrt())
}

/// First-order expansion `1 + [2γ − 4σ₀²(1 + η²) D / ħ²] t`, valid for
/// `t ≪ 1/γ`.
pub fn purity_short_time(t: f64, spec: &GaussianPacketSpec, env: &EnvironmentParams) -> f64 {
    1.0 + purity_initial_slope(spec, env) * t
}

/// `dξ/dt` at `t = 0`.
pub fn purity_initial_slope(spec: &GaussianPacketSpec, env: &EnvironmentParams) -> f64 {
    let hbar = env.hbar();
    2.0 * env.gamma()
        - 4.0 * spec.sigma0 * spec.sigma0 * (1.0 + spec.eta * spec.eta) * env.diffusion()
            / (hbar * hbar)
}

/// Coherence length `μ = √(d₂ / (2 [4 d₂ d₀₂ − d₁₁²]))` along `p = −p'`.
pub fn coherence_length(ansatz: &GaussianAnsatz) -> Result<f64> {
    Ok((ansatz.d2 / (2.0 * discriminant(ansatz)?)).sqrt())
}

/// Leading long-time behaviour `μ ≈ m γ ħ / √(2 D t)`.
pub fn coherence_length_asymptote(t: f64, env: &EnvironmentParams) -> Result<f64> {
    let d = env.diffusion();
    if d <= 0.0 || t <= 0.0 {
        return Err(Error::Undefined(
            "long-time coherence length needs D > 0 and t > 0".into(),
        ));
    }
    Ok(env.mass() * env.gamma() * env.hbar() / (2.0 * d * t).sqrt())
}

/// Time `t_d = 4 ħ² m² γ² / (D v²)` needed to damp coherences at separation `v`.
pub fn decoherence_time_td(v: f64, env: &EnvironmentParams) -> Result<f64> {
    let d = env.diffusion();
    if v == 0.0 {
        return Err(Error::Undefined("decoherence time at v = 0".into()));
    }
    if d == 0.0 {
        return Err(Error::Undefined("decoherence time without diffusion (D = 0)".into()));
    }
    let (m, hbar, gamma) = (env.mass(), env.hbar(), env.gamma());
    Ok(4.0 * hbar * hbar * m * m * gamma * gamma / (d * v * v))
}

/// `sinh(2γt) / γ`, finite at `γ = 0`.
fn sinh_over_gamma(t: f64, gamma: f64) -> f64 {
    2.0 * t * sinhc(2.0 * gamma * t)
}

/// Limit of the cat decoherence function, `−2 p₀² σ₀² (1 + η²) / ħ²`.
fn gamma_limit(p0: f64, spec: &GaussianPacketSpec, hbar: f64) -> f64 {
    -2.0 * p0 * p0 * spec.sigma0 * spec.sigma0 * (1.0 + spec.eta * spec.eta) / (hbar * hbar)
}

/// Decoherence function `Γ(t) ≤ 0` of the symmetric cat `±p₀`.
///
/// `spec` supplies the common `σ₀` and `η`; its `p0` is ignored.
pub fn cat_decoherence_function(
    t: f64,
    p0: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
) -> f64 {
    let d = env.diffusion();
    if t == 0.0 || d == 0.0 || p0 == 0.0 {
        return 0.0;
    }
    let hbar = env.hbar();
    let grow = 4.0 * d * spec.sigma0 * spec.sigma0 * sinh_over_gamma(t, env.gamma());
    let decay = hbar * hbar * (-2.0 * env.gamma() * t).exp();
    // Γ∞ · grow / (decay + grow), arranged to survive grow = ∞
    gamma_limit(p0, spec, hbar) / (1.0 + decay / grow)
}

/// Long-time value and short-time scale of the cat decoherence function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatAsymptotics {
    /// `Γ∞ = −p₀² (1 + η²) / (2 σ_p²)`.
    pub gamma_inf: f64,
    /// `τ_D = σ_p⁴ / ((1 + η²) p₀² D)`, so that `Γ(t) ≈ −t / τ_D`.
    pub tau_d: f64,
}

pub fn cat_decoherence_asymptotics(
    p0: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
) -> Result<CatAsymptotics> {
    if p0 == 0.0 {
        return Err(Error::Undefined("decoherence time of a cat with p0 = 0".into()));
    }
    let d = env.diffusion();
    if d == 0.0 {
        return Err(Error::Undefined("decoherence time without diffusion (D = 0)".into()));
    }
    let sp = spec.momentum_width(env.hbar());
    let stretch = 1.0 + spec.eta * spec.eta;
    Ok(CatAsymptotics {
        gamma_inf: gamma_limit(p0, spec, env.hbar()),
        tau_d: sp.powi(4) / (stretch * p0 * p0 * d),
    })
}

/// Interference phase `Θ(p, t)` of the symmetric cat (packet `+p₀` first).
pub fn cat_phase(
    t: f64,
    p: f64,
    p0: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> f64 {
    let hbar = env.hbar();
    let shifted = p + env.mass() * potential.g * tau(t, env);
    let denom = hbar * hbar * (-2.0 * env.gamma() * t).exp()
        + 4.0 * env.diffusion() * spec.sigma0 * spec.sigma0 * sinh_over_gamma(t, env.gamma());
    4.0 * p0 * spec.eta * spec.sigma0 * spec.sigma0 * shifted / denom
}

/// `(Γ, Θ)` with the damping term of the master equation dropped.
pub fn negligible_dissipation_forms(
    t: f64,
    p: f64,
    p0: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> (f64, f64) {
    let hbar = env.hbar();
    let d = env.diffusion();
    let s2 = spec.sigma0 * spec.sigma0;
    let denom = hbar * hbar + 8.0 * d * s2 * t;
    let gamma = -16.0 * p0 * p0 * s2 * s2 * (1.0 + spec.eta * spec.eta) * d * t / (hbar * hbar * denom);
    let shifted = p + env.mass() * potential.g * tau(t, env);
    let theta = spec.eta * 4.0 * p0 * s2 * shifted / denom;
    (gamma, theta)
}

/// Attenuation coefficient `e^Γ` of the interference term.
pub fn attenuation(gamma: f64) -> f64 {
    debug_assert!(gamma <= 0.0);
    gamma.exp()
}
