use thiserror::Error;

/// Errors raised by state construction, protocol validation and simulation
/// configuration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside its documented domain (non-finite angle,
    /// unnormalized state, probability outside `[0, 1]`, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A measurement protocol does not support the requested operation.
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    /// A question angle that is not part of the protocol.
    #[error("invalid question: {0}° is not one of the protocol angles")]
    InvalidQuestion(f64),

    /// A simplex grid resolution of zero.
    #[error("invalid resolution: p must be at least 1")]
    InvalidResolution,

    /// A simulation configuration that cannot run (for example zero runs).
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A computed quantity violated an internal invariant by more than the
    /// floating-point guard. Indicates a bug, not bad input.
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
