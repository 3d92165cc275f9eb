use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid strip geometry: {0}")]
    InvalidGeometry(String),

    #[error("edge {0} is not part of the graph")]
    EdgeNotInGraph(String),

    #[error("mode index {index} out of range for width {width}")]
    ModeOutOfRange { index: f64, width: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cross-section mismatch: {0}")]
    Mismatch(String),

    #[error("root bracketing failed for width {width}, k = {k}")]
    Bracketing { width: usize, k: f64 },

    #[error("singular matrix at pivot {0}")]
    SingularMatrix(usize),

    #[error("projection mismatch {residual:e} at corner {corner}")]
    ProjectionMismatch { corner: String, residual: f64 },

    #[error("loop closure residual {0:e} exceeds tolerance")]
    LoopClosure(f64),

    #[error("iteration did not converge after {iterations} sweeps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("point {0} lies outside the domain")]
    OutsideDomain(String),

    #[error("quadrature missed tolerance: last two estimates differ by {0:e}")]
    Quadrature(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
