//! Superpositions of two Gaussian packets.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coherence::{cat_decoherence_function, cat_phase};
use crate::density::{eval_rho, log_rho, marginal_density};
use crate::error::{Error, Result};
use crate::kernels::{cross_term_ansatz, single_packet_ansatz};
use crate::params::{EnvironmentParams, GaussianAnsatz, GaussianPacketSpec, LinearPotential};
use crate::quad::linspace;

/// Equal-weight superposition `N (φ_a + φ_b)` of two co-centred packets with
/// common width and stretching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superposition {
    pub a: GaussianPacketSpec,
    pub b: GaussianPacketSpec,
}

/// The four evolved terms `ρ_aa`, `ρ_bb`, `ρ_ab`, `ρ_ba` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionTerms {
    pub aa: GaussianAnsatz,
    pub bb: GaussianAnsatz,
    pub ab: GaussianAnsatz,
    pub ba: GaussianAnsatz,
    /// `N²`.
    pub weight: f64,
}

impl SuperpositionTerms {
    /// `N² Σ ρ_ij(u, v)`.
    pub fn rho(&self, u: f64, v: f64) -> Complex64 {
        (eval_rho(&self.aa, u, v)
            + eval_rho(&self.bb, u, v)
            + eval_rho(&self.ab, u, v)
            + eval_rho(&self.ba, u, v))
            * self.weight
    }
}

impl Superposition {
    pub fn new(a: GaussianPacketSpec, b: GaussianPacketSpec) -> Result<Self> {
        if a.sigma0 != b.sigma0 || a.eta != b.eta || a.x0 != b.x0 {
            return Err(Error::Unsupported(
                "superposed packets must share x0, sigma0 and eta".into(),
            ));
        }
        Ok(Self { a, b })
    }

    /// `N = [2 + 2 Re⟨φ_b|φ_a⟩]^{-1/2}`.
    pub fn normalization(&self, hbar: f64) -> f64 {
        let a = self.a.sigma0 * self.a.sigma0 / (hbar * hbar);
        let dp = self.a.p0 - self.b.p0;
        let stretch = 1.0 + self.a.eta * self.a.eta;
        let overlap = (-0.5 * a * dp * dp * stretch).exp() * (self.a.x0 * dp / hbar).cos();
        1.0 / (2.0 + 2.0 * overlap).sqrt()
    }

    pub fn terms(
        &self,
        t: f64,
        env: &EnvironmentParams,
        potential: &LinearPotential,
    ) -> SuperpositionTerms {
        let n = self.normalization(env.hbar());
        SuperpositionTerms {
            aa: single_packet_ansatz(t, &self.a, env, potential),
            bb: single_packet_ansatz(t, &self.b, env, potential),
            // validated in `new`
            ab: cross_term_ansatz(t, &self.a, &self.b, env, potential).unwrap(),
            ba: cross_term_ansatz(t, &self.b, &self.a, env, potential).unwrap(),
            weight: n * n,
        }
    }
}

/// Symmetric cat: packets at `+p₀` and `−p₀` around the momentum origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatStateSpec {
    pub p0: f64,
    pub sigma0: f64,
    pub eta: f64,
}

impl CatStateSpec {
    pub fn new(p0: f64, sigma0: f64, eta: f64) -> Result<Self> {
        // validates through the packet constructor
        GaussianPacketSpec::new(0.0, p0, sigma0, eta)?;
        Ok(Self { p0, sigma0, eta })
    }

    /// Packet at `+p₀`, listed first in cross terms.
    pub fn upper(&self) -> GaussianPacketSpec {
        GaussianPacketSpec {
            x0: 0.0,
            p0: self.p0,
            sigma0: self.sigma0,
            eta: self.eta,
        }
    }

    pub fn lower(&self) -> GaussianPacketSpec {
        GaussianPacketSpec {
            p0: -self.p0,
            ..self.upper()
        }
    }

    pub fn superposition(&self) -> Superposition {
        Superposition {
            a: self.upper(),
            b: self.lower(),
        }
    }

    pub fn normalization(&self, hbar: f64) -> f64 {
        cat_normalization(self.p0, self.sigma0, self.eta, hbar)
    }
}

/// `N = {2 + 2 exp[−2 p₀² (1 + η²) σ₀² / ħ²]}^{-1/2}`.
pub fn cat_normalization(p0: f64, sigma0: f64, eta: f64, hbar: f64) -> f64 {
    let x = 2.0 * p0 * p0 * (1.0 + eta * eta) * sigma0 * sigma0 / (hbar * hbar);
    1.0 / (2.0 + 2.0 * (-x).exp()).sqrt()
}

/// Momentum distribution of the cat from the four evolved terms.
pub fn cat_density(
    t: f64,
    cat: &CatStateSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    cat.superposition().terms(t, env, potential).rho(p, 0.0).re
}

/// Momentum distribution in interference form
/// `N² [P_aa + P_bb + 2 √(P_aa P_bb) e^Γ cos Θ]`.
pub fn cat_density_visibility(
    t: f64,
    cat: &CatStateSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    p: f64,
) -> f64 {
    let (a, b) = (cat.upper(), cat.lower());
    let paa = marginal_density(t, &a, env, potential, p);
    let pbb = marginal_density(t, &b, env, potential, p);
    let gamma = cat_decoherence_function(t, cat.p0, &a, env);
    let theta = cat_phase(t, p, cat.p0, &a, env, potential);
    let n = cat.normalization(env.hbar());
    n * n * (paa + pbb + 2.0 * (paa * pbb).sqrt() * gamma.exp() * theta.cos())
}

/// Decoherence function and phase read off the evolved terms at momentum `p`:
/// `Γ + iΘ = ln ρ_ab(p, p) − ½ ln(P_aa P_bb)`.
pub fn extract_decoherence(terms: &SuperpositionTerms, p: f64) -> (f64, f64) {
    let ab = log_rho(&terms.ab, p, 0.0);
    let aa = log_rho(&terms.aa, p, 0.0).re;
    let bb = log_rho(&terms.bb, p, 0.0).re;
    (ab.re - 0.5 * (aa + bb), ab.im)
}

/// Rectangular `(u, v)` grid for density-matrix maps.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGrid {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Default for MapGrid {
    /// `u ∈ [−3, 3]` with 241 points, `v ∈ [−4, 4]` with 321 points.
    fn default() -> Self {
        Self {
            u: linspace(-3.0, 3.0, 241),
            v: linspace(-4.0, 4.0, 321),
        }
    }
}

/// `|ρ(u, v, t)|` of the cat on `grid`, stored row-major with one row per
/// `v` value: entry `i_v * u.len() + i_u`.
pub fn cat_density_matrix_map(
    t: f64,
    cat: &CatStateSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
    grid: &MapGrid,
) -> Result<Vec<f64>> {
    if grid.u.is_empty() || grid.v.is_empty() {
        return Err(Error::invalid("grid", "density-matrix map needs a non-empty grid"));
    }
    if grid.u.iter().chain(&grid.v).any(|x| !x.is_finite()) {
        return Err(Error::invalid("grid", "grid values must be finite"));
    }
    let terms = cat.superposition().terms(t, env, potential);
    let rows: Vec<Vec<f64>> = grid
        .v
        .par_iter()
        .map(|&v| grid.u.iter().map(|&u| terms.rho(u, v).norm()).collect())
        .collect();
    Ok(rows.concat())
}

/// Location and height of the maximum of `N² |ρ_ab(u, v)|`, the coherence
/// blob of the map near `v = 2 p₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherencePeak {
    pub u: f64,
    pub v: f64,
    /// `ln(N² |ρ_ab|)` at the peak.
    pub log_height: f64,
}

pub fn coherence_peak(
    t: f64,
    cat: &CatStateSpec,
    env: &EnvironmentParams,
    potential: &LinearPotential,
) -> CoherencePeak {
    let terms = cat.superposition().terms(t, env, potential);
    let ab = &terms.ab;
    // ln|ρ_ab| = c0 + r1 v − d02 v² + (β v − i0)²/(4 d2) − (u − Re e0)²/(4 d2) − ½ ln(4π d2)
    let beta = ab.d11();
    let i0 = ab.e0.im;
    let r1 = ab.c1.re;
    let curvature = ab.d02() - beta * beta / (4.0 * ab.d2);
    let slope = r1 - beta * i0 / (2.0 * ab.d2);
    let v = slope / (2.0 * curvature);
    let u = ab.e0.re + ab.e1.re * v;
    let log_height = log_rho(ab, u, v).re + terms.weight.ln();
    CoherencePeak { u, v, log_height }
}
