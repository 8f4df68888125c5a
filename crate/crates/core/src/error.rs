use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A point that should lie on the upper hyperboloid sheet does not.
    #[error("point off the hyperboloid: {0}")]
    ManifoldViolation(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("loss diverged at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("AUC undefined: held-out pairs contain a single class")]
    UndefinedAuc,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
