//! Error type shared by every module.

use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("inhomogeneous relation: {0}")]
    InhomogeneousRelation(String),
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),
    #[error("non-composable path: {0}")]
    NonComposablePath(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("degree-0 subalgebra does not saturate: {0}")]
    Degree0Blowup(String),
    #[error("dimension cap exceeded: dim A_{degree} = {dim} > {cap}")]
    CapExceeded { degree: usize, dim: usize, cap: usize },
    #[error("radical computation unsupported: {0}")]
    RadicalUnsupported(String),
    #[error("algebra is not basic: {0}")]
    NotBasic(String),
    #[error("twisted algebra is not N-graded: {0}")]
    NotNNGraded(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("module is not finite-dimensional: {0}")]
    NotFiniteDimensional(String),
    #[error("missing AS-Gorenstein data: {0}")]
    MissingGorensteinData(String),
}

impl Error {
    /// Process exit code: 2 for input errors, 3 for computation errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax(_)
            | Error::InhomogeneousRelation(_)
            | Error::UnknownSymbol(_)
            | Error::NonComposablePath(_)
            | Error::BadInput(_)
            | Error::NotBasic(_)
            | Error::NotNNGraded(_)
            | Error::MissingGorensteinData(_) => 2,
            Error::Degree0Blowup(_)
            | Error::CapExceeded { .. }
            | Error::RadicalUnsupported(_)
            | Error::WindowTooSmall(_)
            | Error::NotFiniteDimensional(_) => 3,
        }
    }

    /// Stable kind name used in JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax(_) => "SyntaxError",
            Error::InhomogeneousRelation(_) => "InhomogeneousRelation",
            Error::UnknownSymbol(_) => "UnknownSymbol",
            Error::NonComposablePath(_) => "NonComposablePath",
            Error::BadInput(_) => "BadInput",
            Error::Degree0Blowup(_) => "Degree0Blowup",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::RadicalUnsupported(_) => "RadicalUnsupported",
            Error::NotBasic(_) => "NotBasic",
            Error::NotNNGraded(_) => "NotNNGraded",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::NotFiniteDimensional(_) => "NotFiniteDimensional",
            Error::MissingGorensteinData(_) => "MissingGorensteinData",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
