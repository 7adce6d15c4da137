//! Numerical tolerances shared by every module.

/// Algebraic identities such as commutators and conjugation relations.
pub const IDENTITY: f64 = 1e-10;
/// Hermiticity and unitarity residuals.
pub const HERMITIAN: f64 = 1e-12;
/// State normalization.
pub const NORM: f64 = 1e-12;
/// Eigenvalue pairs with `p + q` below this are skipped in QFI sums.
pub const QFI_PAIR_CUTOFF: f64 = 1e-12;
/// Largest QFI weight that may be dropped by the pair cutoff.
pub const QFI_CUTOFF_DIAGNOSTIC: f64 = 1e-8;
/// Polytope saturation and membership.
pub const SATURATION: f64 = 1e-8;
/// Vertex deduplication distance.
pub const VERTEX_DEDUP: f64 = 1e-7;
/// Relative spectral cutoff for the covariance pseudo-inverse.
pub const PSEUDO_INVERSE: f64 = 1e-10;
/// Degenerate-eigenvalue merging for projective measurements.
pub const EIGEN_MERGE: f64 = 1e-9;
/// Classification of the optimal operator's entries.
pub const BLOCK_ENTRY: f64 = 1e-9;
/// Observables with smaller variance are treated as insensitive.
pub const MIN_VARIANCE: f64 = 1e-14;
/// Smallest usable slope for the method-of-moments estimator.
pub const MIN_SLOPE: f64 = 1e-12;
/// Diagonal QFI entries below this are treated as zero.
pub const QFI_ZERO: f64 = 1e-10;
/// Entanglement-witness comparison.
pub const WITNESS: f64 = 1e-10;
