use thiserror::Error;

/// Errors raised across the crate.
///
/// Most variants signal a violated precondition on the input. `Numerical`
/// and `NonConvergence` indicate floating-point trouble in a computation
/// that cannot fail in exact arithmetic.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not symmetric (deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("matrix is numerically singular (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("product closure did not stabilise after {rounds} rounds")]
    NonConvergence { rounds: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid involutive space: {0}")]
    InvalidSpace(String),

    #[error("type classification failed: {0}")]
    Classification(String),

    #[error("map is not completely positive (most negative eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive {
        min_eigenvalue: f64,
        witness: Vec<f64>,
    },

    #[error("map is not unital (deviation {deviation:.3e})")]
    NotUnital { deviation: f64 },

    #[error("map is not self-adjoint (deviation {deviation:.3e})")]
    NotSelfAdjoint { deviation: f64 },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("operation requires a {expected} domain")]
    WrongDomain { expected: &'static str },

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("point {0}: {1}")]
    Point(String, &'static str),

    #[error("invalid C*-convex combination: {0}")]
    InvalidCombination(String),

    #[error("map is not dominated: {0}")]
    NotDominated(String),

    #[error("matrix is not skew-symmetric (deviation {deviation:.3e})")]
    NotSkew { deviation: f64 },

    #[error("norm {norm} exceeds 1")]
    NotContractive { norm: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
