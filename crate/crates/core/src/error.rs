use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element is nilpotent and has no inverse")]
    NotInvertible,
    #[error("square root undefined: {0}")]
    Domain(&'static str),
    #[error("expected a unit element (deviation {deviation:e})")]
    NotUnit { deviation: f64 },
    #[error("recovered translation quaternion is not pure (first coordinate {first:e})")]
    NotPure { first: f64 },
    #[error("matrix is not an SE(3) pose: {0}")]
    NotAPose(&'static str),
    #[error("zero input has no projection")]
    ZeroInput,
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("power iterate has a nilpotent norm; normalization is undefined")]
    ZeroIterate,
    #[error("measurement graph is disconnected")]
    DisconnectedGraph,
    #[error("eigenvector entry {index} is nilpotent and cannot be rounded")]
    RoundingDegenerate { index: usize },
    #[error("4th and 5th eigenvalues are not separated (relative gap {gap:e})")]
    DegenerateSpectrum { gap: f64 },
    #[error("alignment sum vanishes; estimates are antipodally spread")]
    DegenerateAlignment,
    #[error("eigen-solver failed: {0}")]
    EigenSolver(&'static str),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
