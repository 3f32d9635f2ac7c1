use thiserror::Error;

#[derive(Debug, Error)]
pub enum HncError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("derivation is inconsistent: {0}")]
    InconsistentDerivation(String),

    #[error("element is not central: {0}")]
    NotCentral(String),

    #[error("reconstruction mismatch: {0}")]
    ReconstructionMismatch(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("not a projection: {0}")]
    NotProjection(String),

    #[error("not unitary: {0}")]
    NotUnitary(String),

    #[error("index did not stabilize: {0}")]
    NotStabilized(String),

    #[error("trace did not converge: {0}")]
    NotConverged(String),

    #[error("gapless family: {0}")]
    Gapless(String),

    #[error("insufficient Fourier decay: {0}")]
    InsufficientDecay(String),

    #[error("lattice sum not quantized: {0}")]
    NotQuantized(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HncError>;
