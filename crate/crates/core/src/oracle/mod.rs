//! Finite-difference oracle for the master equation in `(u, v)` form,
//!
//! ```text
//! ∂ρ/∂t = ∂/∂u[(mg + 2γu) ρ] + D ∂²ρ/∂u² − (i / mħ) u v ρ
//! ```
//!
//! Each `v` enters only multiplicatively, so slices evolve independently.
//! The scheme is Crank-Nicolson with centred differences and Dirichlet-zero
//! edges, guarded by an edge-mass watchdog.

mod map;
mod tridiag;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{classical_trajectory, momentum_width};
use crate::params::{EnvironmentParams, GaussianAnsatz, GaussianPacketSpec, LinearPotential};
use crate::density::eval_rho;
use crate::quad::linspace;
use tridiag::{Factored, Tridiagonal};

pub use map::{linf, quadrature_purity, slice_trace, DensityMap};

const DEFAULT_HALF_SPAN: f64 = 8.0;
const DEFAULT_POINTS: usize = 4097;
const DEFAULT_DT: f64 = 1e-3;
const MIN_POINTS: usize = 64;
/// Initial profiles must be this small (relative to their peak) at the edges.
const EDGE_DECAY: f64 = 1e-14;
/// Largest tolerated share of `Σ|ρ|` inside the outer bands.
const EDGE_MASS: f64 = 1e-6;
const WATCHDOG_INTERVAL: usize = 512;

/// Uniform `u` grid of one `v` slice together with the time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub n_u: usize,
    pub v: f64,
    pub dt: f64,
}

impl SliceGrid {
    pub fn new(u_min: f64, u_max: f64, n_u: usize, v: f64, dt: f64) -> Result<Self> {
        if !(u_min.is_finite() && u_max.is_finite() && u_max > u_min) {
            return Err(Error::invalid(
                "u_range",
                format!("needs finite u_min < u_max, got [{u_min}, {u_max}]"),
            ));
        }
        if n_u < MIN_POINTS {
            return Err(Error::invalid("n_u", format!("must be >= {MIN_POINTS}, got {n_u}")));
        }
        if !v.is_finite() {
            return Err(Error::invalid("v", format!("must be finite, got {v}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be > 0, got {dt}")));
        }
        Ok(Self {
            u_min,
            u_max,
            n_u,
            v,
            dt,
        })
    }

    /// `u ∈ [−8, 8]` with 4097 points (`du = 1/256`) and `dt = 10⁻³`.
    pub fn default_for(v: f64) -> Self {
        Self {
            u_min: -DEFAULT_HALF_SPAN,
            u_max: DEFAULT_HALF_SPAN,
            n_u: DEFAULT_POINTS,
            v,
            dt: DEFAULT_DT,
        }
    }

    /// Grid with the default spacing whose range contains both the default
    /// range and `[lo, hi]`.
    pub fn covering(lo: f64, hi: f64, v: f64) -> Self {
        let base = Self::default_for(v);
        Self::covering_with(lo, hi, base.du(), v)
    }

    /// Range containing `[−8, 8] ∪ [lo, hi]` at spacing `du`.
    pub fn covering_with(lo: f64, hi: f64, du: f64, v: f64) -> Self {
        let u_min = lo.min(-DEFAULT_HALF_SPAN);
        let top = hi.max(DEFAULT_HALF_SPAN);
        let n_u = (((top - u_min) / du).ceil() as usize + 1).max(MIN_POINTS);
        Self {
            u_min,
            u_max: u_min + (n_u - 1) as f64 * du,
            n_u,
            v,
            dt: DEFAULT_DT,
        }
    }

    pub fn du(&self) -> f64 {
        (self.u_max - self.u_min) / (self.n_u - 1) as f64
    }

    pub fn u(&self) -> Vec<f64> {
        linspace(self.u_min, self.u_max, self.n_u)
    }

    pub fn with_v(&self, v: f64) -> Self {
        Self { v, ..*self }
    }

    /// Same range with both the spacing and `dt` halved.
    pub fn refined(&self) -> Self {
        let n_u = 2 * self.n_u - 1;
        Self {
            n_u,
            dt: 0.5 * self.dt,
            ..*self
        }
    }
}

/// Interval that holds the packets to `widths` momentum widths at every
/// time in `[0, t_final]`.
pub fn packet_span(
    packets: &[GaussianPacketSpec],
    env: &EnvironmentParams,
    potential: &LinearPotential,
    t_final: f64,
    widths: f64,
) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for spec in packets {
        for t in linspace(0.0, t_final, 257) {
            let c = classical_trajectory(t, spec, env, potential).p;
            let w = momentum_width(t, spec, env);
            lo = lo.min(c - widths * w);
            hi = hi.max(c + widths * w);
        }
    }
    (lo, hi)
}

/// `L` restricted to the interior points `1..n_u-1`.
fn operator(grid: &SliceGrid, env: &EnvironmentParams, potential: &LinearPotential) -> Tridiagonal {
    let du = grid.du();
    let n = grid.n_u - 2;
    let d = env.diffusion();
    let coupling = grid.v / (env.mass() * env.hbar());
    let drift = |u: f64| env.mass() * potential.g + 2.0 * env.gamma() * u;
    let u_at = |i: usize| grid.u_min + i as f64 * du;
    let mut lower = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for k in 0..n {
        let i = k + 1;
        let u = u_at(i);
        lower.push(Complex64::new(-drift(u_at(i - 1)) / (2.0 * du) + d / (du * du), 0.0));
        diag.push(Complex64::new(-2.0 * d / (du * du), -coupling * u));
        upper.push(Complex64::new(drift(u_at(i + 1)) / (2.0 * du) + d / (du * du), 0.0));
    }
    Tridiagonal { lower, diag, upper }
}

/// `I + s L` for the interior block.
fn shifted(l: &Tridiagonal, s: f64) -> Tridiagonal {
    Tridiagonal {
        lower: l.lower.iter().map(|x| x * s).collect(),
        diag: l.diag.iter().map(|x| x * s + 1.0).collect(),
        upper: l.upper.iter().map(|x| x * s).collect(),
    }
}

struct Stepper {
    explicit: Tridiagonal,
    implicit: Factored,
}

impl Stepper {
    fn new(l: &Tridiagonal, dt: f64) -> Result<Self> {
        let implicit = shifted(l, -0.5 * dt)
            .factor()
            .ok_or_else(|| Error::NumericalGuard("singular Crank-Nicolson matrix".into()))?;
        Ok(Self {
            explicit: shifted(l, 0.5 * dt),
            implicit,
        })
    }

    /// One step on the interior values `x`, using `work` as scratch.
    fn step(&self, x: &mut [Complex64], work: &mut [Complex64]) {
        self.explicit.apply(x, work);
        self.implicit.solve(work);
        x.copy_from_slice(work);
    }
}

fn magnitude_sum(values: &[Complex64]) -> f64 {
    let mags: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    crate::quad::pairwise_sum(&mags)
}

fn edge_share(values: &[Complex64]) -> f64 {
    let band = (values.len() / 20).max(4);
    let total = magnitude_sum(values);
    if total == 0.0 {
        return 0.0;
    }
    let n = values.len();
    (magnitude_sum(&values[..band]) + magnitude_sum(&values[n - band..])) / total
}

/// Samples an ansatz on the slice.
pub fn sample_ansatz(ansatz: &GaussianAnsatz, grid: &SliceGrid) -> Vec<Complex64> {
    grid.u().into_iter().map(|u| eval_rho(ansatz, u, grid.v)).collect()
}

/// Evolves one `v` slice from `initial` (values on `grid.u()`) to `t_final`.
///
/// The step is shortened to `t_final / ceil(t_final / dt)` so the final time
/// is hit exactly.
pub fn evolve_slice(
    initial: &[Complex64],
    grid: &SliceGrid,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    t_final: f64,
) -> Result<Vec<Complex64>> {
    if initial.len() != grid.n_u {
        return Err(Error::invalid(
            "initial",
            format!("has {} values for a {}-point grid", initial.len(), grid.n_u),
        ));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::invalid("t_final", format!("must be >= 0, got {t_final}")));
    }
    let peak = initial.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let edge = initial[0].norm().max(initial[grid.n_u - 1].norm());
    if edge > EDGE_DECAY * peak {
        return Err(Error::NumericalGuard(format!(
            "initial profile is {:e} of its peak at the grid edge (limit {EDGE_DECAY:e})",
            edge / peak
        )));
    }
    let steps = (t_final / grid.dt).ceil() as usize;
    let mut state = initial.to_vec();
    if steps == 0 {
        return Ok(state);
    }
    let dt = t_final / steps as f64;
    let stepper = Stepper::new(&operator(grid, env, potential), dt)?;
    let n = grid.n_u;
    let mut interior = state[1..n - 1].to_vec();
    let mut work = vec![Complex64::new(0.0, 0.0); n - 2];
    for k in 1..=steps {
        stepper.step(&mut interior, &mut work);
        if k % WATCHDOG_INTERVAL == 0 || k == steps {
            let share = edge_share(&interior);
            if !(share <= EDGE_MASS) {
                return Err(Error::NumericalGuard(format!(
                    "edge bands hold {share:e} of the slice at t = {:.6} (limit {EDGE_MASS:e}); widen the u range",
                    k as f64 * dt
                )));
            }
        }
    }
    state[1..n - 1].copy_from_slice(&interior);
    state[0] = Complex64::new(0.0, 0.0);
    state[n - 1] = Complex64::new(0.0, 0.0);
    Ok(state)
}

/// Evolves every slice of `initial` (one row per entry of `v_slices`) on the
/// `u` grid of `grid`. Rows are processed in parallel; each row's result is
/// independent of scheduling.
pub fn evolve_grid(
    initial: &[Vec<Complex64>],
    v_slices: &[f64],
    grid: &SliceGrid,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    t_final: f64,
) -> Result<DensityMap> {
    if initial.len() != v_slices.len() {
        return Err(Error::invalid(
            "initial",
            format!("has {} rows for {} slices", initial.len(), v_slices.len()),
        ));
    }
    let rows = initial
        .par_iter()
        .zip(v_slices.par_iter())
        .map(|(row, &v)| evolve_slice(row, &grid.with_v(v), env, potential, t_final))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityMap {
        u: grid.u(),
        v: v_slices.to_vec(),
        values: rows,
    })
}

/// Largest discrete Crank-Nicolson residual of an exact solution,
/// `|(ρ(t+dt) − ρ(t))/dt − ½ L[ρ(t) + ρ(t+dt)]|`, over interior points and
/// the requested start times.
pub fn residual_check<F>(
    solution: F,
    grid: &SliceGrid,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    t_samples: &[f64],
) -> Result<f64>
where
    F: Fn(f64) -> GaussianAnsatz,
{
    let l = operator(grid, env, potential);
    let n = grid.n_u;
    let dt = grid.dt;
    let mut worst: f64 = 0.0;
    let mut lsum = vec![Complex64::new(0.0, 0.0); n - 2];
    for &t in t_samples {
        let now = sample_ansatz(&solution(t), grid);
        let next = sample_ansatz(&solution(t + dt), grid);
        let mean: Vec<Complex64> = now[1..n - 1]
            .iter()
            .zip(&next[1..n - 1])
            .map(|(a, b)| a + b)
            .collect();
        l.apply(&mean, &mut lsum);
        // boundary values enter through the first and last rows
        lsum[0] += l.lower[0] * (now[0] + next[0]);
        lsum[n - 3] += l.upper[n - 3] * (now[n - 1] + next[n - 1]);
        for k in 0..n - 2 {
            let r = (next[k + 1] - now[k + 1]) / dt - lsum[k] * 0.5;
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}
