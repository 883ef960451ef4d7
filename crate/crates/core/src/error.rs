use thiserror::Error;

pub type Result<T> = std::result::Result<T, QamError>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QamError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("state vector must have at least one amplitude")]
    EmptyVector,

    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("vector norm {norm:e} is at or below the zero tolerance")]
    ZeroVector { norm: f64 },

    #[error("state norm {norm} is not within {tol:e} of 1")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("invalid measurement basis: {0}")]
    Basis(String),

    #[error("field mismatch: {0}")]
    Field(String),

    #[error("patterns {i} and {j} are not orthogonal (|overlap| = {overlap:e})")]
    Orthogonality { i: usize, j: usize, overlap: f64 },

    #[error("{copies} copies cannot cover {channels} filters")]
    InsufficientCopies { copies: usize, channels: usize },

    #[error("all {count} images are degenerate or linearly dependent")]
    AllDegenerate { count: usize },

    #[error("input has no component in the stored span (projection norm {projection_norm:e})")]
    OutOfSpan { projection_norm: f64 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("pixel {index} has value {value} above maxval {maxval}")]
    Range { index: usize, value: u32, maxval: u32 },

    #[error("duplicate pattern label {0:?}")]
    DuplicateLabel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl QamError {
    /// Stable name of the error class, used as the prefix of CLI diagnostics.
    pub fn kind_name(&self) -> &'static str {
        match self {
            QamError::Dimension { .. } => "DimensionError",
            QamError::EmptyVector => "DimensionError",
            QamError::NonFinite { .. } => "NonFiniteError",
            QamError::ZeroVector { .. } => "ZeroVectorError",
            QamError::NotNormalized { .. } => "NormError",
            QamError::Basis(_) => "BasisError",
            QamError::Field(_) => "FieldError",
            QamError::Orthogonality { .. } => "OrthogonalityError",
            QamError::InsufficientCopies { .. } => "InsufficientCopiesError",
            QamError::AllDegenerate { .. } => "AllDegenerateError",
            QamError::OutOfSpan { .. } => "OutOfSpanError",
            QamError::Format(_) => "FormatError",
            QamError::Range { .. } => "RangeError",
            QamError::DuplicateLabel(_) => "LabelError",
            QamError::InvalidArgument(_) => "ArgumentError",
        }
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(QamError::Dimension { expected, found })
    }
}
