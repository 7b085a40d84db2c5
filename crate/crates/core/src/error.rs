use thiserror::Error;

/// Everything that can go wrong inside the workbench.
///
/// `NotComputable` and `WindowInsufficient` are ordinary outcomes of bounded
/// computation, not bugs; `ConstructionInvariant` is the only variant that
/// signals an internal defect.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid module map: {0}")]
    InvalidMap(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("window [{lo}, {hi}] cannot certify degree {degree}")]
    WindowInsufficient { degree: i64, lo: i64, hi: i64 },
    #[error("not computable: {0}")]
    NotComputable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction invariant violated: {0}")]
    ConstructionInvariant(String),
    #[error("unknown theorem tag `{0}`")]
    UnknownTag(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
