use thiserror::Error;

/// Errors raised by state construction, estimation and protocol simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("N must be even, got {0}")]
    OddParticleCount(usize),

    #[error("N must be at least {min}, got {n}")]
    TooFewParticles { n: usize, min: usize },

    #[error("basis mismatch: left operand has N = {left}, right operand has N = {right}")]
    BasisMismatch { left: usize, right: usize },

    #[error("amplitude vector has length {got}, basis has {expected} states")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian")]
    NonHermitian,

    #[error("expectation value has imaginary residue {0:e}")]
    ComplexExpectation(f64),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("exponential series needs more than {max_terms} terms to reach tolerance {tol:e}")]
    NonConvergence { tol: f64, max_terms: usize },

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("cannot parse half-integer from {0:?}")]
    ParseHalfInteger(String),

    #[error("quantum Fisher information must be positive, got {0}")]
    NonPositiveFisher(f64),

    #[error("generator has a single eigenvalue for spin {0}; no phase accumulates")]
    DegenerateGenerator(String),

    #[error("invalid estimation context: {0}")]
    InvalidContext(String),

    #[error("variance {0:e} is negative beyond rounding")]
    NegativeVariance(f64),

    #[error("signal slope vanishes at kt = {kt}; precision is unbounded")]
    UnboundedPrecision { kt: f64 },

    #[error("every grid point has a vanishing signal slope")]
    AllUnbounded,

    #[error("closed-form parity is undefined for odd N = {0}")]
    ClosedFormUndefined(usize),

    #[error("derivative cross-check failed at kt = {kt}: finite difference {finite_difference:e}, commutator {commutator:e}")]
    DerivativeMismatch {
        kt: f64,
        finite_difference: f64,
        commutator: f64,
    },

    #[error("power-law fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("power-law fit needs positive data, got ({n}, {y})")]
    NonPositiveData { n: f64, y: f64 },

    #[error("power-law fit needs distinct abscissae, {0} is repeated")]
    RepeatedAbscissa(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid sensitivity input: {0}")]
    InvalidSensitivity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
