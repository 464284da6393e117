use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds tolerance {tolerance:.3e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e} below {tolerance:.3e})")]
    NotPositive { eigenvalue: f64, tolerance: f64 },

    #[error("mean requires strictly positive definite inputs (min eigenvalue {min_eigenvalue:.3e})")]
    NotStrictlyPositive { min_eigenvalue: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("singular matrix function: f({eigenvalue:e}) is not finite")]
    SingularFunction { eigenvalue: f64 },

    #[error("empty sum")]
    EmptySum,

    #[error("invalid Ky Fan index {k} for dimension {n}")]
    InvalidKyFanIndex { k: usize, n: usize },

    #[error("invalid Schatten exponent {0} (must be >= 1)")]
    InvalidSchattenExponent(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("inputs do not commute (commutator norm {commutator:.3e} exceeds {tolerance:.3e})")]
    NotCommuting { commutator: f64, tolerance: f64 },

    #[error("unregistered function: {0}")]
    UnregisteredFunction(String),

    #[error("function {function} is not registered as {direction}")]
    DirectionMismatch {
        function: String,
        direction: &'static str,
    },

    #[error("invalid rank {rank} for dimension {n}")]
    InvalidRank { rank: usize, n: usize },

    #[error("invalid norm spec: {0}")]
    InvalidNormSpec(String),

    #[error("term {label} evaluated to a non-finite value")]
    NonFiniteTerm { label: String },

    #[error("matrix file: {0}")]
    MatrixFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
