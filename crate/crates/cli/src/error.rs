use crate::config::FieldError;
use cavity_core::Error as CoreError;
use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_NO_RESULT: i32 = 3;

/// Version of every JSON document and error record the CLI writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration has {} error(s)", .0.len())]
    Config(Vec<FieldError>),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },

    #[error("no result: {0}")]
    NoResult(String),
}

impl CliError {
    pub fn io(path: impl Into<String>, err: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.into(), message: err.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_VALIDATION,
            CliError::ChecksFailed { .. } => EXIT_NUMERICAL,
            CliError::NoResult(_) => EXIT_NO_RESULT,
            CliError::Core(e) => match e {
                CoreError::NoResonance(_) => EXIT_NO_RESULT,
                CoreError::StepUnderflow { .. } | CoreError::StepBudget { .. } | CoreError::TruncationUnsound { .. } => {
                    EXIT_NUMERICAL
                }
                _ => EXIT_VALIDATION,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::ChecksFailed { .. } => "checks_failed",
            CliError::NoResult(_) => "no_result",
            CliError::Core(e) => match e {
                CoreError::InvalidTruncation { .. } => "invalid_truncation",
                CoreError::TruncationUnsound { .. } => "truncation_unsound",
                CoreError::InvalidParameter { .. } => "invalid_parameter",
                CoreError::SiteOutOfRange { .. } => "site_out_of_range",
                CoreError::AtomCount(_) => "atom_count",
                CoreError::WrongAtomCount { .. } => "wrong_atom_count",
                CoreError::UnsupportedAlgebra { .. } => "unsupported_algebra",
                CoreError::KeyFormulaDomain(_) => "key_formula_domain",
                CoreError::BufferZone { .. } => "buffer_zone",
                CoreError::NoResonance(_) => "no_resonance",
                CoreError::RegimeViolation { .. } => "regime_violation",
                CoreError::StepUnderflow { .. } => "step_underflow",
                CoreError::StepBudget { .. } => "step_budget",
                CoreError::Dimension { .. } => "dimension",
            },
        }
    }

    /// One JSON object per line: a record per configuration field error, otherwise a single one.
    pub fn records(&self) -> Vec<ErrorRecord> {
        let base = |kind: String, key: Option<String>, line: Option<usize>, message: String| ErrorRecord {
            schema_version: SCHEMA_VERSION,
            status: "error",
            exit_code: self.exit_code(),
            kind,
            key,
            line,
            message,
        };
        match self {
            CliError::Config(errors) => errors
                .iter()
                .map(|e| base(e.kind.to_string(), Some(e.key.clone()), e.line, e.message.clone()))
                .collect(),
            other => vec![base(other.kind().into(), None, None, other.to_string())],
        }
    }
}

impl From<Vec<FieldError>> for CliError {
    fn from(e: Vec<FieldError>) -> Self {
        CliError::Config(e)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub schema_version: u32,
    pub status: &'static str,
    pub exit_code: i32,
    pub kind: String,
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(CoreError::NoResonance("x".into())).exit_code(), 3);
        assert_eq!(CliError::Core(CoreError::StepBudget { required: 1.0, budget: 0.5 }).exit_code(), 2);
        assert_eq!(CliError::Core(CoreError::RegimeViolation { ratio: 1.0, threshold: 10.0 }).exit_code(), 1);
        assert_eq!(CliError::ChecksFailed { failed: 1, total: 3 }.exit_code(), 2);
        assert_eq!(CliError::Config(vec![]).exit_code(), 1);
    }
}
