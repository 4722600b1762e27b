use thiserror::Error;

/// Errors raised by the library. The CLI maps every variant except
/// [`Error::Spec`] and [`Error::UnknownSuite`] to the "domain error" exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("support function not positive (origin not interior): min h = {min_h:e}")]
    NotStarShaped { min_h: f64 },

    #[error("body is not convex: min curvature radius {min_rho:e} below floor {floor:e}")]
    Nonconvex { min_rho: f64, floor: f64 },

    #[error("origin is not interior to the polygon: {0}")]
    OriginOutside(String),

    #[error("polar resampling failed: {0}")]
    Resampling(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("function class mismatch: {0}")]
    ClassMismatch(String),

    #[error("body centroid is not at the origin: |g| = {0:e}")]
    Uncentered(f64),

    #[error("random body generator exhausted its rejection budget after {0} draws")]
    Generator(usize),

    #[error("optimizer found no feasible witness: {0}")]
    Infeasible(String),

    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed spec: {0}")]
    Spec(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
