use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("operator is not Hermitian (max |M - M^dagger| = {0:e})")]
    NonHermitianOperator(f64),
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("family `{family}` needs parameter `{param}`")]
    MissingParameter { family: &'static str, param: &'static str },
    #[error("sweep grid is empty: {0}")]
    EmptyGrid(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamilyParams(String),
    #[error("sharpness {0} outside [0, 1]")]
    InvalidSharpness(f64),
    #[error("epsilon must be a finite positive number, got {0}")]
    InvalidEpsilon(f64),
    #[error("lambda1_sq = {value} must lie in (0, 1)")]
    Lambda1OutOfRange { value: f64 },
    #[error("lambda1_sq = {value} does not exceed the first-pair detection threshold {threshold}")]
    Lambda1BelowThreshold { value: f64, threshold: f64 },
    #[error("sequence length must be at least 1")]
    EmptySequence,
    #[error("family has non-positive initial XX+YY correlator ({0}); no detection threshold exists")]
    DegenerateFamily(f64),
    #[error("monotonicity check needs at least 3 values, got {0}")]
    TooShort(usize),
    #[error("engine mismatch at pair {k}: closed form {closed:e} vs simulation {sim:e}")]
    EngineMismatch { k: usize, closed: f64, sim: f64 },
    #[error("plan does not belong to the requested family")]
    PlanFamilyMismatch,
    #[error("greedy value at pair {k} left the representable range ({value:e})")]
    NumericRange { k: usize, value: f64 },
}
