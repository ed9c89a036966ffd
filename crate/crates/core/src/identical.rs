//! Two non-interacting particles in independent baths: distinguishable
//! particles, bosons and fermions.
//!
//! Both one-particle states are minimum-uncertainty packets centred at the
//! position origin, so every cross density is real.

use num_complex::Complex64;

use crate::density::marginal_density;
use crate::error::{Error, Result};
use crate::kernels::{cross_pair_coeffs, CrossGaussianCoeffs};
use crate::params::{
    DetectorWindow, EnvironmentParams, GaussianPacketSpec, LinearPotential, StatisticsFlavor,
};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::series::phi1;

const UNDERFLOW_EXPONENT: f64 = -745.0;

/// Product state `φ ⊗ χ`, symmetrized according to `flavor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleState {
    phi: GaussianPacketSpec,
    chi: GaussianPacketSpec,
    flavor: StatisticsFlavor,
}

impl TwoParticleState {
    pub fn new(
        phi: GaussianPacketSpec,
        chi: GaussianPacketSpec,
        flavor: StatisticsFlavor,
    ) -> Result<Self> {
        for (name, spec) in [("phi", &phi), ("chi", &chi)] {
            if spec.eta != 0.0 {
                return Err(Error::Unsupported(format!(
                    "packet `{name}` must be minimum-uncertainty (eta = 0)"
                )));
            }
            if spec.x0 != 0.0 {
                return Err(Error::Unsupported(format!(
                    "packet `{name}` must be centred at x0 = 0"
                )));
            }
        }
        if flavor == StatisticsFlavor::FermiDirac && phi.sigma0 == chi.sigma0 && phi.p0 == chi.p0 {
            return Err(Error::PauliExclusion);
        }
        Ok(Self { phi, chi, flavor })
    }

    pub fn phi(&self) -> &GaussianPacketSpec {
        &self.phi
    }

    pub fn chi(&self) -> &GaussianPacketSpec {
        &self.chi
    }

    pub fn flavor(&self) -> StatisticsFlavor {
        self.flavor
    }

    pub fn with_flavor(&self, flavor: StatisticsFlavor) -> Result<Self> {
        Self::new(self.phi, self.chi, flavor)
    }

    fn sign(&self) -> f64 {
        self.flavor.exchange_sign()
    }
}

fn width_prefactor(state: &TwoParticleState) -> f64 {
    let (s, d) = (state.phi.sigma0, state.chi.sigma0);
    (2.0 * s * d / (s * s + d * d)).sqrt()
}

fn coeffs(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> CrossGaussianCoeffs {
    // the constructor already enforced the packet restrictions
    cross_pair_coeffs(t, &state.phi, &state.chi, env, potential).unwrap()
}

/// One-particle overlap `s = ⟨χ|φ⟩ = √(2σ₀δ₀/(σ₀² + δ₀²)) e^{b₀}`, constant in time.
pub fn overlap_s(state: &TwoParticleState, hbar: f64) -> f64 {
    let (s2, d2) = (state.phi.sigma0.powi(2), state.chi.sigma0.powi(2));
    let dp = state.phi.p0 - state.chi.p0;
    let b0 = -(s2 * d2 / (s2 + d2)) * dp * dp / (hbar * hbar);
    width_prefactor(state) * b0.exp()
}

/// `N± = [2(1 ± |s|²)]^{-1/2}` for bosons and fermions, `1/√2` for
/// distinguishable particles.
pub fn pair_normalization(state: &TwoParticleState, hbar: f64) -> f64 {
    match state.flavor {
        StatisticsFlavor::MaxwellBoltzmann => std::f64::consts::FRAC_1_SQRT_2,
        _ => normalization_squared(state, hbar).sqrt(),
    }
}

fn normalization_squared(state: &TwoParticleState, hbar: f64) -> f64 {
    let s = overlap_s(state, hbar);
    0.5 / (1.0 + state.sign() * s * s)
}

/// Initial two-particle amplitude `N± [φ(p₁)χ(p₂) ± χ(p₁)φ(p₂)]`.
pub fn pair_wavefunction(state: &TwoParticleState, p1: f64, p2: f64, hbar: f64) -> Result<Complex64> {
    if state.flavor == StatisticsFlavor::MaxwellBoltzmann {
        return Err(Error::Unsupported(
            "distinguishable particles are described by a mixture, not a pair amplitude".into(),
        ));
    }
    let n = pair_normalization(state, hbar);
    let direct = state.phi.wavefunction(p1, hbar) * state.chi.wavefunction(p2, hbar);
    let exchanged = state.chi.wavefunction(p1, hbar) * state.phi.wavefunction(p2, hbar);
    Ok((direct + exchanged * state.sign()) * n)
}

/// `∫∫ |Φ±(p₁, p₂)|² dp₁ dp₂` by tensor-product Gauss-Legendre quadrature on
/// panels adapted to both packet widths.
pub fn pair_norm_quadrature(state: &TwoParticleState, hbar: f64) -> Result<f64> {
    pair_wavefunction(state, 0.0, 0.0, hbar)?;
    let mut breaks = Vec::new();
    for spec in [&state.phi, &state.chi] {
        let w = spec.momentum_width(hbar);
        breaks.extend((-14..=14).map(|k| spec.p0 + k as f64 * w));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let rule = GaussLegendre::new(16);
    let (nodes, weights) = rule.composite_nodes(&breaks);
    let n2 = normalization_squared(state, hbar);
    let phi: Vec<Complex64> = nodes.iter().map(|&p| state.phi.wavefunction(p, hbar)).collect();
    let chi: Vec<Complex64> = nodes.iter().map(|&p| state.chi.wavefunction(p, hbar)).collect();
    let sign = state.sign();
    let rows: Vec<f64> = (0..nodes.len())
        .map(|i| {
            let row: Vec<f64> = (0..nodes.len())
                .map(|j| weights[j] * (phi[i] * chi[j] + chi[i] * phi[j] * sign).norm_sqr())
                .collect();
            weights[i] * pairwise_sum(&row)
        })
        .collect();
    Ok(n2 * pairwise_sum(&rows))
}

/// `ln P₁₂(p, t)`.
fn log_cross_density(state: &TwoParticleState, b: &CrossGaussianCoeffs, p: f64) -> f64 {
    let dp = p - b.b1;
    width_prefactor(state).ln() - 0.5 * (4.0 * std::f64::consts::PI * b.b2).ln() + b.b0
        - dp * dp / (4.0 * b.b2)
}

/// Diagonal cross density `P₁₂(p, t)`, the evolution of `φ(p) χ*(p)`.
/// Here `P₂₁ = P₁₂*` and both are real.
pub fn cross_density_p12(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let b = coeffs(t, state, env, potential);
    let z = log_cross_density(state, &b, p);
    if z < UNDERFLOW_EXPONENT {
        0.0
    } else {
        z.exp()
    }
}

/// Current `J₁₂ = [−mg − 2γp + (D / 2b₂)(p − b₁)] P₁₂`.
pub fn cross_current_j12(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let b = coeffs(t, state, env, potential);
    let factor = -env.mass() * potential.g - 2.0 * env.gamma() * p
        + env.diffusion() / (2.0 * b.b2) * (p - b.b1);
    factor * cross_density_p12(t, state, env, potential, p)
}

/// Joint density of finding the particles at `p₁` and `p₂`.
pub fn joint_density(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p1: f64,
    p2: f64,
) -> f64 {
    let p11 = |p| marginal_density(t, &state.phi, env, potential, p);
    let p22 = |p| marginal_density(t, &state.chi, env, potential, p);
    let direct = p11(p1) * p22(p2) + p22(p1) * p11(p2);
    match state.flavor {
        StatisticsFlavor::MaxwellBoltzmann => 0.5 * direct,
        _ => {
            let n2 = normalization_squared(state, env.hbar());
            let b = coeffs(t, state, env, potential);
            let exchange = (log_cross_density(state, &b, p1) + log_cross_density(state, &b, p2)).exp();
            n2 * (direct + 2.0 * state.sign() * exchange)
        }
    }
}

/// One-particle density `N±² [P₁₁ + P₂₂ ± 2 Re(P₁₂ s)]` (MB: `½ [P₁₁ + P₂₂]`).
pub fn single_particle_density(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let p11 = marginal_density(t, &state.phi, env, potential, p);
    let p22 = marginal_density(t, &state.chi, env, potential, p);
    match state.flavor {
        StatisticsFlavor::MaxwellBoltzmann => 0.5 * (p11 + p22),
        _ => {
            let n2 = normalization_squared(state, env.hbar());
            let s = overlap_s(state, env.hbar());
            let p12 = cross_density_p12(t, state, env, potential, p);
            n2 * (p11 + p22 + 2.0 * state.sign() * p12 * s)
        }
    }
}

/// Two-particle decoherence function `Γ₁₂(t)` for equal widths `δ₀ = σ₀`.
pub fn gamma12(t: f64, state: &TwoParticleState, env: &EnvironmentParams) -> Result<f64> {
    let sigma0 = state.phi.sigma0;
    if state.chi.sigma0 != sigma0 {
        return Err(Error::Unsupported(
            "closed-form two-particle decoherence needs equal widths; use gamma12_profile".into(),
        ));
    }
    let hbar = env.hbar();
    let dp = state.phi.p0 - state.chi.p0;
    let scale = sigma0 * sigma0 * dp * dp / (2.0 * hbar * hbar);
    let gamma = env.gamma();
    // (e^{4γt} − 1)/γ = 4t φ₁(4γt)
    let growth = 2.0 * sigma0 * sigma0 * env.diffusion() / (hbar * hbar) * 4.0 * t * phi1(4.0 * gamma * t);
    Ok(-scale * (1.0 - 1.0 / (1.0 + growth)))
}

/// `ln(|P₁₂| / √(P₁₁ P₂₂))` evaluated at one momentum.
pub fn gamma12_pointwise(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let b = coeffs(t, state, env, potential);
    let log_p11 = log_marginal(t, &state.phi, env, potential, p);
    let log_p22 = log_marginal(t, &state.chi, env, potential, p);
    log_cross_density(state, &b, p) - 0.5 * (log_p11 + log_p22)
}

fn log_marginal(
    t: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let w = crate::kernels::momentum_width(t, spec, env);
    let c = crate::kernels::classical_trajectory(t, spec, env, potential).p;
    let z = (p - c) / w;
    -0.5 * z * z - 0.5 * (2.0 * std::f64::consts::PI * w * w).ln()
}

/// `Γ₁₂` from the density ratio for arbitrary widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gamma12Profile {
    /// Value at the cross-density centre `p = b₁(t)`.
    pub at_centre: f64,
    /// Largest `|Γ₁₂(p) − at_centre|` over the probed momenta.
    pub max_deviation: f64,
}

pub fn gamma12_profile(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p_grid: &[f64],
) -> Gamma12Profile {
    let b1 = coeffs(t, state, env, potential).b1;
    let at_centre = gamma12_pointwise(t, state, env, potential, b1);
    let max_deviation = p_grid
        .iter()
        .map(|&p| (gamma12_pointwise(t, state, env, potential, p) - at_centre).abs())
        .fold(0.0, f64::max);
    Gamma12Profile {
        at_centre,
        max_deviation,
    }
}

/// Windowed integrals `(∫P₁₁, ∫P₂₂, ∫P₁₂)` over a detector.
pub fn window_integrals(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    window: &DetectorWindow,
) -> (f64, f64, f64) {
    let rule = GaussLegendre::new(64);
    let (lo, hi) = (window.lower(), window.upper());
    let i11 = rule.integrate(|p| marginal_density(t, &state.phi, env, potential, p), lo, hi);
    let i22 = rule.integrate(|p| marginal_density(t, &state.chi, env, potential, p), lo, hi);
    let i12 = rule.integrate(|p| cross_density_p12(t, state, env, potential, p), lo, hi);
    (i11, i22, i12)
}

/// Simultaneous-detection ratio `p = 2N² {1 ± |∫P₁₂|² / (∫P₁₁ ∫P₂₂)}` relative
/// to distinguishable particles, for the flavor of `state`.
pub fn detection_ratio(
    t: f64,
    state: &TwoParticleState,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    window: &DetectorWindow,
) -> Result<f64> {
    let (i11, i22, i12) = window_integrals(t, state, env, potential, window);
    let denom = i11 * i22;
    if !(denom > 1e-300) {
        return Err(Error::NumericalGuard(format!(
            "detector window [{}, {}] sees no probability (product {denom:e})",
            window.lower(),
            window.upper()
        )));
    }
    let n2 = normalization_squared(state, env.hbar());
    Ok(2.0 * n2 * (1.0 + state.sign() * i12 * i12 / denom))
}
