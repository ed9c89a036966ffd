//! Momentum-space Caldeira-Leggett dynamics of Gaussian wave packets.
//!
//! The master equation for a particle in a linear potential, coupled to an
//! Ohmic bath at temperature `T`, keeps Gaussian density matrices Gaussian.
//! This crate evaluates those solutions in closed form:
//!
//! - single stretched packets ([`kernels`], [`density`]);
//! - purity, coherence length and decoherence functions ([`coherence`]);
//! - two-packet superpositions and their interference ([`cat`]);
//! - two identical or distinguishable particles ([`identical`]);
//! - a Crank-Nicolson solver that checks all of the above ([`oracle`]).
//!
//! ```
//! use cl_momentum::{purity, single_packet_ansatz, EnvironmentParams, GaussianPacketSpec, LinearPotential};
//!
//! let env = EnvironmentParams::natural(0.005, 2.0)?;
//! let packet = GaussianPacketSpec::minimal(-1.0, 5.0)?;
//! let rho = single_packet_ansatz(10.0, &packet, &env, &LinearPotential::free());
//! let xi = purity(&rho)?;
//! assert!(xi < 1.0);
//! # Ok::<(), cl_momentum::Error>(())
//! ```

pub mod cat;
pub mod coherence;
pub mod density;
pub mod error;
pub mod identical;
pub mod kernels;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod series;

pub use cat::{
    cat_density, cat_density_matrix_map, cat_density_visibility, cat_normalization,
    coherence_peak, CatStateSpec, MapGrid, Superposition,
};
pub use coherence::{
    attenuation, cat_decoherence_asymptotics, cat_decoherence_function, cat_phase,
    coherence_length, coherence_length_asymptote, decoherence_time_td,
    negligible_dissipation_forms, purity, purity_short_time, CatAsymptotics,
};
pub use density::{
    continuity_residual, eval_current, eval_rho, marginal_current, marginal_density,
    packet_continuity_residual,
};
pub use error::{Error, Result};
pub use identical::{
    cross_current_j12, cross_density_p12, detection_ratio, gamma12, joint_density,
    overlap_s, pair_normalization, single_particle_density, TwoParticleState,
};
pub use kernels::{
    classical_trajectory, cross_pair_coeffs, cross_term_ansatz, momentum_width,
    single_packet_ansatz, tau, ClassicalTrajectory, CrossGaussianCoeffs,
};
pub use params::{
    DetectorWindow, EnvironmentParams, GaussianAnsatz, GaussianPacketSpec, LinearPotential,
    StatisticsFlavor,
};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gaussian-solutions.md")]
    mod gaussian_solutions {}
    #[doc = include_str!("../../../book/src/purity.md")]
    mod purity {}
    #[doc = include_str!("../../../book/src/cat-states.md")]
    mod cat_states {}
    #[doc = include_str!("../../../book/src/identical-particles.md")]
    mod identical_particles {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
}
