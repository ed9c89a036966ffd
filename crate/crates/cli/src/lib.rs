//! Scenario runner for `cl-momentum`: TOML scenarios in, CSV tables out.
//!
//! The `clmom` binary is a thin wrapper around [`config::load`],
//! [`run_scenario`] and [`figure_preset`].

use std::path::PathBuf;

pub mod config;
pub mod presets;
pub mod scenario;
pub mod table;

pub use config::{load, Mode, Scenario, ScenarioConfig};
pub use presets::{figure_preset, FIGURE_IDS};
pub use scenario::{run_scenario, RunOutput};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed TOML; the message carries line and column.
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error(transparent)]
    Model(#[from] cl_momentum::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// `2` for numerical-guard aborts, `1` for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/csv-output.md")]
    mod csv_output {}
}
