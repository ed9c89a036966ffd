//! Physical parameters and state descriptors shared by every module.
//!
//! All types are plain `Copy` values. Units are whatever the caller picks;
//! the figure presets use `m = ħ = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {x}")))
    }
}

/// Bath and particle parameters of the Caldeira-Leggett equation.
///
/// The diffusion coefficient `D = 2 m γ k_B T` is always recomputed from the
/// stored fields so that an inconsistent `(γ, T, D)` triple cannot exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    gamma: f64,
    kbt: f64,
    mass: f64,
    hbar: f64,
}

impl EnvironmentParams {
    pub fn new(gamma: f64, kbt: f64, mass: f64, hbar: f64) -> Result<Self> {
        let gamma = finite("gamma", gamma)?;
        let kbt = finite("kBT", kbt)?;
        let mass = finite("mass", mass)?;
        let hbar = finite("hbar", hbar)?;
        if gamma < 0.0 {
            return Err(Error::invalid("gamma", format!("must be >= 0, got {gamma}")));
        }
        if kbt < 0.0 {
            return Err(Error::invalid("kBT", format!("must be >= 0, got {kbt}")));
        }
        if mass <= 0.0 {
            return Err(Error::invalid("mass", format!("must be > 0, got {mass}")));
        }
        if hbar <= 0.0 {
            return Err(Error::invalid("hbar", format!("must be > 0, got {hbar}")));
        }
        Ok(Self {
            gamma,
            kbt,
            mass,
            hbar,
        })
    }

    /// Environment in units where `m = ħ = 1`.
    pub fn natural(gamma: f64, kbt: f64) -> Result<Self> {
        Self::new(gamma, kbt, 1.0, 1.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kbt(&self) -> f64 {
        self.kbt
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Momentum diffusion coefficient `D = 2 m γ k_B T`.
    pub fn diffusion(&self) -> f64 {
        2.0 * self.mass * self.gamma * self.kbt
    }
}

/// One-particle stretched Gaussian packet in momentum space.
///
/// `eta = 0` is the minimum-uncertainty packet; a nonzero stretch widens the
/// position distribution without touching the momentum distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacketSpec {
    pub x0: f64,
    pub p0: f64,
    pub sigma0: f64,
    pub eta: f64,
}

impl GaussianPacketSpec {
    pub fn new(x0: f64, p0: f64, sigma0: f64, eta: f64) -> Result<Self> {
        let x0 = finite("x0", x0)?;
        let p0 = finite("p0", p0)?;
        let sigma0 = finite("sigma0", sigma0)?;
        let eta = finite("eta", eta)?;
        if sigma0 <= 0.0 {
            return Err(Error::invalid("sigma0", format!("must be > 0, got {sigma0}")));
        }
        Ok(Self {
            x0,
            p0,
            sigma0,
            eta,
        })
    }

    /// Minimum-uncertainty packet centred at the position origin.
    pub fn minimal(p0: f64, sigma0: f64) -> Result<Self> {
        Self::new(0.0, p0, sigma0, 0.0)
    }

    /// `σ_p = ħ / (2 σ₀)`.
    pub fn momentum_width(&self, hbar: f64) -> f64 {
        hbar / (2.0 * self.sigma0)
    }

    /// `Δx = σ₀ √(1 + η²)`.
    pub fn position_width(&self) -> f64 {
        self.sigma0 * (1.0 + self.eta * self.eta).sqrt()
    }

    pub fn uncertainty_product(&self, hbar: f64) -> f64 {
        self.position_width() * self.momentum_width(hbar)
    }

    /// Initial momentum-space wavefunction `φ₀(p)`.
    pub fn wavefunction(&self, p: f64, hbar: f64) -> Complex64 {
        let a = self.sigma0 * self.sigma0 / (hbar * hbar);
        let norm = (2.0 * a / std::f64::consts::PI).powf(0.25);
        let dp = p - self.p0;
        let exponent = Complex64::new(-a * dp * dp, -self.eta * a * dp * dp - dp * self.x0 / hbar);
        norm * exponent.exp()
    }
}

/// External potential `V = m g x` (constant force `-m g`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinearPotential {
    pub g: f64,
}

impl LinearPotential {
    pub fn new(g: f64) -> Result<Self> {
        Ok(Self { g: finite("g", g)? })
    }

    pub fn free() -> Self {
        Self { g: 0.0 }
    }
}

/// Coefficients of the Gaussian density-matrix ansatz
///
/// ```text
/// ρ(u, v) = (4π d₂)^{-1/2} exp[d₀(v) − (u − d₁(v))² / (4 d₂)]
/// d₀(v) = c0 + c1 v + c2 v²,   d₁(v) = e0 + e1 v
/// ```
///
/// Raw polynomial coefficients are stored because cross terms carry a
/// nonzero constant `c0`. The purity-style decomposition
/// `d₀ = −d₀₂ v² − i d₀₁ v`, `d₁ = −d₁₀ − i d₁₁ v` is exposed through accessors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianAnsatz {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub e0: Complex64,
    pub e1: Complex64,
    pub d2: f64,
}

impl GaussianAnsatz {
    pub fn d0(&self, v: f64) -> Complex64 {
        self.c0 + self.c1 * v + self.c2 * (v * v)
    }

    pub fn d1(&self, v: f64) -> Complex64 {
        self.e0 + self.e1 * v
    }

    pub fn d01(&self) -> f64 {
        -self.c1.im
    }

    pub fn d02(&self) -> f64 {
        -self.c2.re
    }

    pub fn d10(&self) -> f64 {
        -self.e0.re
    }

    pub fn d11(&self) -> f64 {
        -self.e1.im
    }

    /// Checks the structure of a Hermitian single-packet ansatz up to `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.c0.norm() <= tol
            && self.c1.re.abs() <= tol
            && self.c2.im.abs() <= tol
            && self.c2.re <= tol
            && self.e0.im.abs() <= tol
            && self.e1.re.abs() <= tol
            && self.d2 > 0.0
    }
}

/// Exchange statistics of a two-particle state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatisticsFlavor {
    /// Distinguishable particles.
    MaxwellBoltzmann,
    /// Symmetric spatial wavefunction.
    BoseEinstein,
    /// Antisymmetric spatial wavefunction.
    FermiDirac,
}

impl StatisticsFlavor {
    pub const ALL: [StatisticsFlavor; 3] = [
        StatisticsFlavor::MaxwellBoltzmann,
        StatisticsFlavor::BoseEinstein,
        StatisticsFlavor::FermiDirac,
    ];

    /// Sign of the exchange term: `+1` bosons, `-1` fermions, `0` otherwise.
    pub fn exchange_sign(self) -> f64 {
        match self {
            StatisticsFlavor::MaxwellBoltzmann => 0.0,
            StatisticsFlavor::BoseEinstein => 1.0,
            StatisticsFlavor::FermiDirac => -1.0,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            StatisticsFlavor::MaxwellBoltzmann => "MB",
            StatisticsFlavor::BoseEinstein => "BE",
            StatisticsFlavor::FermiDirac => "FD",
        }
    }
}

impl std::str::FromStr for StatisticsFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "MB" => Ok(StatisticsFlavor::MaxwellBoltzmann),
            "BE" => Ok(StatisticsFlavor::BoseEinstein),
            "FD" => Ok(StatisticsFlavor::FermiDirac),
            _ => Err(Error::invalid("flavor", format!("expected MB, BE or FD, got `{s}`"))),
        }
    }
}

/// Momentum-space detector window `[center − width/2, center + width/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorWindow {
    pub center: f64,
    pub width: f64,
}

impl DetectorWindow {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        let center = finite("center", center)?;
        let width = finite("width", width)?;
        if width <= 0.0 {
            return Err(Error::invalid("width", format!("must be > 0, got {width}")));
        }
        Ok(Self { center, width })
    }

    pub fn lower(&self) -> f64 {
        self.center - 0.5 * self.width
    }

    pub fn upper(&self) -> f64 {
        self.center + 0.5 * self.width
    }
}
