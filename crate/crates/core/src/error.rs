use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid Cartan type: {0}")]
    InvalidCartanType(String),

    #[error("group not compact: lattice parts of the kernel generators span rank {found}, torus rank is {expected}")]
    NotCompact { found: usize, expected: usize },

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("invalid Kac point: {0}")]
    InvalidKacPoint(String),

    #[error("unknown group name: {0}")]
    UnknownGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a rotation matrix: {0}")]
    NotARotation(String),

    #[error("class mismatch: {0}")]
    ClassMismatch(String),

    #[error("relation residual too large: {0:e}")]
    ResidualTooLarge(f64),

    #[error("lifted word is not central: residual {0:e}")]
    ObstructionNotCentral(f64),

    #[error("flat-bundle report requires a closed surface (r = 0)")]
    FlatBundleNeedsClosed,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
