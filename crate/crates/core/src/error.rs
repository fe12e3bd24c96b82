use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("evaluation point {0} is within tolerance of a pole or atom")]
    PoleOnEvaluationPoint(Complex64),
    #[error("degenerate symbol pair: {0}")]
    DegeneratePair(String),
    #[error("ill-conditioned computation: {0}")]
    IllConditioned(String),
    #[error("function is not in H2+: {0}")]
    NotInHardySpace(String),
    #[error("symbol is not bounded on the circle: {0}")]
    UnboundedSymbol(String),
    #[error("point {0} is not a regular point of the symbol")]
    NotRegularPoint(Complex64),
    #[error("polynomials share the root {0}")]
    NotCoprime(Complex64),
    #[error("unsupported symbol: {0}")]
    UnsupportedSymbol(String),
    #[error("function is not in the kernel (residual {0:e})")]
    NotInKernel(f64),
    #[error("the Toeplitz kernel is trivial")]
    EmptyKernel,
    #[error("containment failed: {0}")]
    NotContained(String),
    #[error("kernel of dimension {dim} is too small to peel off {k} layers")]
    KernelTooSmall { dim: usize, k: usize },
    #[error("dim K_alpha = {deg_alpha} is smaller than m = {m}")]
    AlphaTooSmall { deg_alpha: usize, m: usize },
    #[error("pole region violation: {0}")]
    PoleRegionViolation(String),
    #[error("pole on the sampling grid: {0}")]
    PoleOnGrid(String),
    #[error("rank-deficient input to subspace comparison")]
    RankDeficientInput,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("kernel routes disagree: {0}")]
    RouteMismatch(String),
    #[error("unknown kernel route `{0}`")]
    UnknownRoute(String),
    #[error("schema error: {0}")]
    Schema(String),
}
