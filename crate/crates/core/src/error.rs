use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("particle counts must be positive (got na={na}, nb={nb})")]
    EmptyWell { na: u32, nb: u32 },

    #[error("Dicke |N/2,0> undefined for odd N (N={0})")]
    OddTotal(u32),

    #[error("state supports only even particle counts per well (na={na}, nb={nb})")]
    OddWell { na: u32, nb: u32 },

    #[error("operator is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigenvalue cutoff dropped {0:.3e} of QFI weight")]
    CutoffCollision(f64),

    #[error("inconsistent precision bound {0:.3e} (expected non-negative)")]
    NegativeBound(f64),

    #[error("polytope is empty for the given homogeneous-field QFIs")]
    EmptyPolytope,

    #[error("operator count mismatch: formula gives {formula}, enumeration gives {enumerated}")]
    CountMismatch { formula: usize, enumerated: usize },

    #[error("degenerate input state: no variance on any retained operator")]
    DegenerateState,

    #[error("insensitive observable: variance {0:.3e}")]
    InsensitiveObservable(f64),

    #[error("slope too small for linear inversion: {0:.3e}")]
    ZeroSlope(f64),

    #[error("formula undefined for {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("export failed: {0}")]
    Export(String),
}

pub type Result<T> = std::result::Result<T, Error>;
