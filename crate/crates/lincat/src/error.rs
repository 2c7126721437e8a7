/// Failures surfaced to the command line, each with its exit code.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LincatError {
    /// Malformed document, dangling reference or failed axiom.
    #[error("workspace is invalid ({} finding(s))", .0.len())]
    Invalid(Vec<String>),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] lincat_core::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_TRUNCATION: i32 = 2;
pub const EXIT_CERTIFICATION: i32 = 3;

impl LincatError {
    pub fn invalid(finding: impl Into<String>) -> Self {
        LincatError::Invalid(vec![finding.into()])
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            LincatError::Engine(lincat_core::Error::TruncationExceeded { .. }) => EXIT_TRUNCATION,
            LincatError::Engine(lincat_core::Error::CertificationFailed(_)) => EXIT_CERTIFICATION,
            _ => EXIT_VALIDATION,
        }
    }

    pub fn findings(&self) -> Vec<String> {
        match self {
            LincatError::Invalid(found) => found.clone(),
            other => vec![other.to_string()],
        }
    }
}
