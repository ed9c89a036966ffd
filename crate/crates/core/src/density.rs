//! Pointwise evaluation of density matrices, currents and marginals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{classical_trajectory, momentum_width};
use crate::params::{EnvironmentParams, GaussianAnsatz, GaussianPacketSpec, LinearPotential};

/// Below this real exponent `exp` underflows and the value is reported as 0.
const UNDERFLOW_EXPONENT: f64 = -745.0;

/// Complex logarithm of `ρ(u, v)`: real part `ln|ρ|`, imaginary part the
/// phase (not reduced to `(−π, π]`).
pub fn log_rho(ansatz: &GaussianAnsatz, u: f64, v: f64) -> Complex64 {
    let shift = Complex64::new(u, 0.0) - ansatz.d1(v);
    let exponent = ansatz.d0(v) - shift * shift / (4.0 * ansatz.d2);
    exponent - 0.5 * (4.0 * std::f64::consts::PI * ansatz.d2).ln()
}

/// `ρ(u, v) = (4π d₂)^{-1/2} exp[d₀(v) − (u − d₁(v))² / (4 d₂)]`.
pub fn eval_rho(ansatz: &GaussianAnsatz, u: f64, v: f64) -> Complex64 {
    debug_assert!(ansatz.d2 > 0.0);
    let z = log_rho(ansatz, u, v);
    if z.re < UNDERFLOW_EXPONENT {
        Complex64::new(0.0, 0.0)
    } else {
        z.exp()
    }
}

/// Drift-diffusion factor of the current, `j = factor · ρ`.
fn current_factor(
    ansatz: &GaussianAnsatz,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    u: f64,
    v: f64,
) -> Complex64 {
    let drift = -env.mass() * potential.g - 2.0 * env.gamma() * u;
    let spread = env.diffusion() / (2.0 * ansatz.d2);
    Complex64::new(drift, 0.0) + (Complex64::new(u, 0.0) - ansatz.d1(v)) * spread
}

/// Current density matrix `j(u, v) = [−mg − 2γu + (D / 2d₂)(u − d₁(v))] ρ(u, v)`.
pub fn eval_current(
    ansatz: &GaussianAnsatz,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    u: f64,
    v: f64,
) -> Complex64 {
    current_factor(ansatz, env, potential, u, v) * eval_rho(ansatz, u, v)
}

/// Momentum distribution `P(p, t)` of a single packet.
pub fn marginal_density(
    t: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let w = momentum_width(t, spec, env);
    let centre = classical_trajectory(t, spec, env, potential).p;
    gaussian(p, centre, w)
}

/// Probability current `J(p, t)` of a single packet.
pub fn marginal_current(
    t: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let w = momentum_width(t, spec, env);
    let centre = classical_trajectory(t, spec, env, potential).p;
    let factor = -env.mass() * potential.g - 2.0 * env.gamma() * p
        + env.diffusion() / (w * w) * (p - centre);
    factor * gaussian(p, centre, w)
}

fn gaussian(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    let exponent = -0.5 * z * z;
    if exponent < UNDERFLOW_EXPONENT {
        0.0
    } else {
        exponent.exp() / ((2.0 * std::f64::consts::PI).sqrt() * sd)
    }
}

/// Maximum of `|∂P/∂t + ∂J/∂p|` over `p_grid`, with second-order finite
/// differences of steps `dt` and `dp`.
///
/// `density` and `current` take `(t, p)`. Complex values are allowed so that
/// cross densities can be checked too. Close to `t = 0` a one-sided
/// three-point stencil replaces the central time difference.
pub fn continuity_residual<F, G>(
    density: F,
    current: G,
    t: f64,
    p_grid: &[f64],
    dt: f64,
    dp: f64,
) -> Result<f64>
where
    F: Fn(f64, f64) -> Complex64,
    G: Fn(f64, f64) -> Complex64,
{
    if p_grid.len() < 8 {
        return Err(Error::invalid(
            "p_grid",
            format!("needs at least 8 points, got {}", p_grid.len()),
        ));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be > 0, got {dt}")));
    }
    if !(dp > 0.0 && dp.is_finite()) {
        return Err(Error::invalid("dp", format!("must be > 0, got {dp}")));
    }
    if t < 0.0 {
        return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
    }
    let mut worst: f64 = 0.0;
    for &p in p_grid {
        let dpdt = if t >= dt {
            (density(t + dt, p) - density(t - dt, p)) / (2.0 * dt)
        } else {
            (density(t, p) * -3.0 + density(t + dt, p) * 4.0 - density(t + 2.0 * dt, p))
                / (2.0 * dt)
        };
        let djdp = (current(t, p + dp) - current(t, p - dp)) / (2.0 * dp);
        worst = worst.max((dpdt + djdp).norm());
    }
    Ok(worst)
}

/// [`continuity_residual`] for the marginal of a single packet.
pub fn packet_continuity_residual(
    t: f64,
    spec: &GaussianPacketSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p_grid: &[f64],
    dt: f64,
    dp: f64,
) -> Result<f64> {
    continuity_residual(
        |t, p| marginal_density(t, spec, env, potential, p).into(),
        |t, p| marginal_current(t, spec, env, potential, p).into(),
        t,
        p_grid,
        dt,
        dp,
    )
}
