use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid truncation: dim={dim}, buffer={buffer} (need dim >= 2 and buffer < dim)")]
    InvalidTruncation { dim: usize, buffer: usize },

    #[error("truncation unsound: displacement {theta} needs theta^2 <= {limit} at dim={dim}")]
    TruncationUnsound { theta: f64, dim: usize, limit: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("site index {site} out of range for {m} atoms")]
    SiteOutOfRange { site: usize, m: usize },

    #[error("atom count {0} not supported (1..=6)")]
    AtomCount(usize),

    #[error("{operation} needs {expected} atoms, model has {got}")]
    WrongAtomCount { operation: &'static str, expected: usize, got: usize },

    #[error("{operation} is only available for the Heisenberg (N) algebra")]
    UnsupportedAlgebra { operation: &'static str },

    #[error("key formula domain violation: {0}")]
    KeyFormulaDomain(String),

    #[error("Fock level {n} lies in the buffer zone (trusted levels: 0..{trusted})")]
    BufferZone { n: usize, trusted: usize },

    #[error("no resonance: {0}")]
    NoResonance(String),

    #[error("strong-coupling regime violated: g1/|delta| = {ratio} below threshold {threshold}")]
    RegimeViolation { ratio: f64, threshold: f64 },

    #[error("step size underflow at t={t} (h={h})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integration needs at least ~{required:.3e} steps, budget is {budget:.3e}")]
    StepBudget { required: f64, budget: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
