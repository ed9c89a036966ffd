use thiserror::Error;

/// Errors raised by constructors, closed forms and the finite-difference oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The Gaussian ansatz has a non-positive purity discriminant.
    #[error("non-physical state: {0}")]
    NonPhysical(String),

    /// A quantity whose closed form is singular for the given inputs.
    #[error("undefined quantity: {0}")]
    Undefined(String),

    /// Two identical fermions cannot occupy the same one-particle state.
    #[error("Pauli exclusion: identical one-particle states can only be occupied by bosons")]
    PauliExclusion,

    /// Inputs fall outside the regime covered by the closed forms.
    #[error("unsupported regime: {0}")]
    Unsupported(String),

    /// A numerical watchdog (edge mass, vanishing denominator) tripped.
    #[error("numerical guard tripped: {0}")]
    NumericalGuard(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that come from a numerical safeguard rather than from
    /// malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalGuard(_) | Error::NonPhysical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
