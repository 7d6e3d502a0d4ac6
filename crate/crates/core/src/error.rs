use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coin is not unitary: |a|^2 + |b|^2 = {norm} (deviation {deviation:e})")]
    NonUnitary { norm: f64, deviation: f64 },
    #[error("degenerate coin: |a| = {abs_a:e}, |b| = {abs_b:e}; both must be non-zero")]
    DegenerateCoin { abs_a: f64, abs_b: f64 },
    #[error("delta = {0} is outside [-pi, pi)")]
    DeltaOutOfRange(f64),
    #[error("position {x} is not reachable at step {n} (parity or light-cone violation)")]
    ParityViolation { n: usize, x: i64 },
    #[error("initial state is not normalised: |phi| = {0}")]
    NonNormalizedState(f64),
    #[error("s = {s} is outside the domain of {branch}")]
    DomainError { s: f64, branch: &'static str },
    #[error("degenerate spectral vector at arg z = {0}")]
    DegenerateVector(f64),
    #[error("quadrature error estimate {estimate:e} exceeds {limit:e}")]
    QuadratureFailure { estimate: f64, limit: f64 },
    #[error("window [{l}, {r}] contains no lattice sites at n = {n}")]
    EmptyWindow { l: f64, r: f64, n: usize },
    #[error("undefined transition reached at n = {n}, x = {x} (mass {mass:e})")]
    UndefinedTransitionReached { n: usize, x: i64, mass: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code, used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonUnitary { .. } => "NonUnitary",
            Error::DegenerateCoin { .. } => "DegenerateCoin",
            Error::DeltaOutOfRange(_) => "DeltaOutOfRange",
            Error::ParityViolation { .. } => "ParityViolation",
            Error::NonNormalizedState(_) => "NonNormalizedState",
            Error::DomainError { .. } => "DomainError",
            Error::DegenerateVector(_) => "DegenerateVector",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::EmptyWindow { .. } => "EmptyWindow",
            Error::UndefinedTransitionReached { .. } => "UndefinedTransitionReached",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
