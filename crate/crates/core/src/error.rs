use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Numerical payloads are widened to
/// `f64` so the error type does not depend on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NotFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (most negative eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("trace {trace} exceeds 1")]
    TraceAboveOne { trace: f64 },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("operator norm {norm} exceeds 1")]
    NormExceeded { norm: f64 },
    #[error("invalid system permutation: {0}")]
    InvalidPermutation(String),
    #[error("subspace basis is not orthonormal (max Gram deviation {deviation:e})")]
    DegenerateBasis { deviation: f64 },
    #[error("subspace has dimension {found}, expected {expected}")]
    WrongSubspaceDimension { expected: usize, found: usize },
    #[error("state is not in the W class (range classified as {class})")]
    NotWClass { class: String },
    #[error("peeled remainder is not rank one (eigenvalue ratio {ratio:e})")]
    RankDeficientPeel { ratio: f64 },
    #[error("invalid canonical-form parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid canonical form for protocol construction: {0}")]
    InvalidForm(String),
    #[error("input state does not match the protocol's canonical form (residual {residual:e})")]
    InconsistentInput { residual: f64 },
    #[error("filtered output is not rank one (eigenvalue ratio {ratio:e})")]
    OutputNotRankOne { ratio: f64 },
    #[error("output probability {actual} differs from expected {expected}")]
    ProbabilityMismatch { expected: f64, actual: f64 },
    #[error("output is not maximally entangled (Schmidt margin {margin:e})")]
    NotMaximallyEntangled { margin: f64 },
    #[error("pure state is a product state; no entanglement to concentrate")]
    ProductState,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("malformed input: {0}")]
    Parse(String),
}
