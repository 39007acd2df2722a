use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not self-adjoint (max asymmetry {deviation:.3e})")]
    NotSelfAdjoint { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("matrix is not an orthogonal projection (‖P²−P‖ = {deviation:.3e})")]
    NotProjection { deviation: f64 },

    #[error("matrix is not a contraction (‖T‖ = {norm})")]
    NotContraction { norm: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("polynomial is not real-rooted (root {root})")]
    NotRealRooted { root: Complex64 },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("polynomials in a family must share one degree ({0})")]
    DegreeMismatch(String),

    #[error("invalid convex weights: {0}")]
    BadWeights(String),

    #[error("invalid evaluation points: {0}")]
    BadPoints(String),

    #[error("point {point} is not strictly above the largest root {root}")]
    PointNotAboveRoots { point: f64, root: f64 },

    #[error("variable index {index} out of range for {nvars} variables")]
    BadIndex { index: usize, nvars: usize },

    #[error("{required} evaluations exceed the interpolation budget {budget}")]
    DimensionTooLarge { required: u128, budget: u128 },

    #[error("Σ x_i A_i is singular at the requested point")]
    SingularPoint,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("precondition could not be verified: {0}")]
    PreconditionUnverifiable(String),

    #[error("independent computations disagree (deviation {deviation:.3e} > {tolerance:.1e})")]
    CrossCheckFailed { deviation: f64, tolerance: f64 },

    #[error("matrix {index} is not rank one")]
    NotRankOne { index: usize },

    #[error("{required} candidates exceed the search budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),

    #[error("diagonal must vanish (max |T_ii| = {max:.3e})")]
    NonzeroDiagonal { max: f64 },

    #[error("blocks do not partition the index set: {0}")]
    BadPartition(String),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
