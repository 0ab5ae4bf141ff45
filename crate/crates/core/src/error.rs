use thiserror::Error;

/// Errors surfaced by the engine. Each variant maps to a distinct nonzero
/// exit code in the CLI.
#[derive(Debug, Clone, Error)]
pub enum EngineError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("complex is not admissible:\n{0}")]
    Validation(String),

    #[error("attachment not closed: obstruction at generator `{generator}` is not u-divisible (coefficient {coefficient})")]
    AttachmentNotClosed {
        generator: String,
        coefficient: String,
    },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("wedge-fixed-part error: {0}")]
    WedgeFixedPart(String),

    #[error("smash-model error: product failed validation:\n{0}")]
    SmashModel(String),

    #[error("fixed-sphere mismatch: source ell {source_ell} != target ell {target_ell}")]
    FixedSphereMismatch { source_ell: i64, target_ell: i64 },

    #[error("invalid cochain map: {0}")]
    InvalidMap(String),

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("scan cap {given} rejected: must be at least the guaranteed bound {bound}")]
    ScanCap { given: i64, bound: i64 },

    #[error("internal invariant failure (model bug): {0}")]
    InternalInvariant(String),

    #[error("experimental module error: {0}")]
    Experimental(String),
}

impl EngineError {
    /// Stable CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::Parse { .. } => 3,
            EngineError::Validation(_) => 4,
            EngineError::AttachmentNotClosed { .. } => 5,
            EngineError::InvalidRing(_) => 6,
            EngineError::WedgeFixedPart(_) => 7,
            EngineError::SmashModel(_) => 8,
            EngineError::FixedSphereMismatch { .. } => 9,
            EngineError::InvalidMap(_) => 10,
            EngineError::Hypothesis(_) => 11,
            EngineError::ScanCap { .. } => 12,
            EngineError::InternalInvariant(_) => 13,
            EngineError::Experimental(_) => 14,
        }
    }
}
