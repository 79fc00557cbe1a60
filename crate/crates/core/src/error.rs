use thiserror::Error;

/// Errors raised by the simulator. Numerical diagnostics are carried as `f64`
/// regardless of the scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U^dagger U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("C is not Hermitian-unitary (max |C^2 - I| = {deviation:e})")]
    NotHermitianUnitary { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid probability weights: {0}")]
    InvalidWeights(String),

    #[error("map is not trace preserving (first affine row deviates by {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("environment of {particles} particles exceeds the dense cap of {cap}")]
    CapExceeded { particles: usize, cap: usize },

    #[error("invalid environment: {0}")]
    InvalidEnv(String),

    #[error("invalid random-unitary spec: {0}")]
    InvalidSpec(String),

    #[error("family map is singular at t = {t} (|det| = {det:e})")]
    SingularAt { t: f64, det: f64 },

    #[error("printed formula undefined at t = {t}: {reason}")]
    FormulaUndefined { t: f64, reason: &'static str },

    #[error("non-finite generator coefficient")]
    NonFinite,

    #[error("convention calibration failed for the {term} term (residual {residual:e})")]
    Calibration { term: &'static str, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
