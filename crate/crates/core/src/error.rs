use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra at {path}: {message}")]
    InvalidAlgebra { path: String, message: String },

    #[error("algebra has no designated bounded lattice")]
    NoLattice,

    #[error("algebra is not semi-primal: {0}")]
    NotSemiPrimal(String),

    #[error("not an FLew-algebra: {0}")]
    NotFLew(String),

    #[error("not a Boolean algebra: {0}")]
    NotBoolean(String),

    #[error("not an isomorphism: {0}")]
    NotIso(String),

    #[error("size bound exceeded: {what} needs {needed}, limit is {limit}")]
    SizeBound { what: String, needed: u128, limit: u128 },

    #[error("check failed in {component}: {detail}")]
    CheckFailed { component: String, detail: String },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid Set_D data at {path}: {message}")]
    InvalidObject { path: String, message: String },

    #[error("compatibility violated: {0}")]
    CompatibilityViolation(String),

    #[error("modality mismatch: {0}")]
    ModalityMismatch(String),

    #[error("partition is not a bisimulation: {0}")]
    NotABisimulation(String),

    #[error("depth {depth} too small: formula theories not saturated")]
    DepthTooSmall { depth: usize },

    #[error("value outside marking at point {point}: {detail}")]
    OutsideMarking { point: String, detail: String },

    #[error(transparent)]
    Formula(#[from] crate::logic::parse::ParseError),

    #[error("json error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

impl Error {
    pub(crate) fn check(component: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::CheckFailed { component: component.into(), detail: detail.into() }
    }

    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidAlgebra { path: path.into(), message: message.into() }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
