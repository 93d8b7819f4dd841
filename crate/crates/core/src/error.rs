use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("brute-force limit exceeded: {0}")]
    BruteForceLimitExceeded(String),

    #[error("antisymmetric projection has norm {norm:e}")]
    ZeroProjection { norm: f64 },
    #[error("orbitals are not orthonormal (Gram deviation {deviation:e})")]
    NonOrthonormalInput { deviation: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("register {0} appears more than once")]
    DuplicateRegister(usize),
    #[error("state is not antisymmetric (deviation {deviation:e})")]
    NotAntisymmetric { deviation: f64 },

    #[error("singular potential: {0}")]
    SingularPotential(String),
    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("Givens decomposition failed (residual {residual:e})")]
    DecompositionFailure { residual: f64 },
    #[error("second-quantized window not disentangled (residual population {population:e})")]
    ResidualPopulation { population: f64 },
    #[error("ordering violation: label {label} written after {previous}")]
    OrderingViolation { previous: usize, label: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("insufficient samples: need {needed}, have {have}")]
    InsufficientSamples { needed: usize, have: usize },
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("Clifford group enumeration unavailable for n = {0}")]
    EnumerationUnavailable(usize),

    #[error("finite-temperature density-matrix cost requires M")]
    MissingM,
    #[error("eta = {0} is too small (need eta >= 2)")]
    EtaTooSmall(usize),

    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical assumption (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroProjection { .. }
                | Error::NonOrthonormalInput { .. }
                | Error::NonUnitary { .. }
                | Error::NotAntisymmetric { .. }
                | Error::SingularPotential(_)
                | Error::ConvergenceFailure { .. }
                | Error::DecompositionFailure { .. }
                | Error::ResidualPopulation { .. }
                | Error::OrderingViolation { .. }
                | Error::AssumptionViolated(_)
        )
    }
}
