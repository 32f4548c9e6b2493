use thiserror::Error;

/// Errors raised by the library. Each variant names the rule that was violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    ParseRational(String),

    #[error("decimal rendering of {0} is not exact")]
    LossyDecimal(String),

    #[error("twist parameter must lie in [0, 1), got {0}")]
    TwistOutOfRange(String),

    #[error("series diverges: need s > {bound}, got s = {s}")]
    Divergent { s: f64, bound: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("lattice type must be a divisibility chain of positive integers: {0}")]
    LatticeType(String),

    #[error("weight is not dominant and integral: {0}")]
    NotDominant(String),

    #[error("representation mismatch: {0}")]
    RepMismatch(String),

    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("Dirac system invariant violated: {0}")]
    InvalidSystem(String),

    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("diagonalization failed: {0}")]
    Diagonalization(String),

    #[error("missing bulk term: {0}")]
    MissingBulk(String),

    #[error("L2 index undetermined: {0}")]
    NonLocal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
