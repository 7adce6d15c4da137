//! Quantum Fisher information and the two-parameter Cramér-Rao bounds.
//!
//! For a state `rho = sum_k p_k |k><k|` the extended QFI is
//! `F[rho, A, B] = 2 sum_{k != l} (p_k - p_l)^2 / (p_k + p_l) <k|A|l><l|B|k>`,
//! and `F[rho, A] = F[rho, A, A]`. For pure states this collapses to four
//! times the (co)variance, which is what [`qfi_pure`] evaluates.

use crate::error::{Error, Result};
use crate::linalg::{ensure_hermitian, hermitian_eigen, CMatrix};
use crate::spin::{Axis, SpaceOperators};
use crate::states::StateVector;
use crate::tolerance;

/// `4 Var(A)` on a pure state.
pub fn qfi_pure(state: &StateVector, a: &CMatrix) -> Result<f64> {
    ensure_hermitian(a, tolerance::IDENTITY)?;
    Ok(4.0 * state.variance(a))
}

/// `4 (<{A,B}>/2 - <A><B>)` on a pure state.
pub fn qfi_pure_extended(state: &StateVector, a: &CMatrix, b: &CMatrix) -> Result<f64> {
    ensure_hermitian(a, tolerance::IDENTITY)?;
    ensure_hermitian(b, tolerance::IDENTITY)?;
    Ok(4.0 * state.covariance(a, b))
}

/// A density matrix with its eigendecomposition computed once.
#[derive(Debug, Clone)]
pub struct MixedState {
    probabilities: Vec<f64>,
    eigenvectors: CMatrix,
}

impl MixedState {
    pub fn from_density(rho: &CMatrix) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::DimensionMismatch { expected: rho.nrows(), got: rho.ncols() });
        }
        ensure_hermitian(rho, tolerance::IDENTITY)
            .map_err(|e| Error::InvalidDensityMatrix(e.to_string()))?;
        let (values, vectors) = hermitian_eigen(rho);
        if let Some(&min) = values.last() {
            if min < -1e-12 {
                return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
            }
        }
        let trace: f64 = values.iter().sum();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let probabilities = values.into_iter().map(|p| p.max(0.0)).collect();
        Ok(Self { probabilities, eigenvectors: vectors })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let psi = state.amplitudes();
        let rho = psi * psi.adjoint();
        Self::from_density(&rho).expect("projector onto a normalized vector is a valid state")
    }

    /// The maximally mixed state on `dim` levels.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { probabilities: vec![1.0 / dim as f64; dim], eigenvectors: CMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }
}

/// Extended QFI of a mixed state.
pub fn qfi_extended(rho: &MixedState, a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let n = rho.dim();
    for m in [a, b] {
        if m.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.nrows() });
        }
        ensure_hermitian(m, tolerance::IDENTITY)?;
    }
    let v = rho.eigenvectors();
    let ae = v.adjoint() * a * v;
    let be = v.adjoint() * b * v;
    let p = rho.probabilities();
    let mut total = 0.0;
    let mut dropped = 0.0;
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let s = p[k] + p[l];
            let term = ae[(k, l)] * be[(l, k)];
            if s < tolerance::QFI_PAIR_CUTOFF {
                dropped += 2.0 * s * term.norm();
                continue;
            }
            let d = p[k] - p[l];
            total += 2.0 * d * d / s * term.re;
        }
    }
    if dropped > tolerance::QFI_CUTOFF_DIAGNOSTIC {
        return Err(Error::CutoffCollision(dropped));
    }
    Ok(total)
}

pub fn qfi_mixed(rho: &MixedState, a: &CMatrix) -> Result<f64> {
    qfi_extended(rho, a, a)
}

/// QFI matrix for the parameters `(b0, b1)` along one axis, with its
/// decomposition into local terms.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QfiMatrix2 {
    pub f00: f64,
    pub f01: f64,
    pub f11: f64,
    /// `F[rho, J_{l,a}]`.
    pub fa: f64,
    /// `F[rho, J_{l,b}]`.
    pub fb: f64,
    /// `F[rho, J_{l,a}, J_{l,b}]`.
    pub fab: f64,
}

impl QfiMatrix2 {
    pub fn from_local(fa: f64, fb: f64, fab: f64) -> Self {
        Self { f00: fa + 2.0 * fab + fb, f01: fa - fb, f11: fa - 2.0 * fab + fb, fa, fb, fab }
    }

    pub fn determinant(&self) -> f64 {
        self.f00 * self.f11 - self.f01 * self.f01
    }

    /// `F_{l,+} + F_{l,-} = 2 (F_a + F_b)`.
    pub fn sum(&self) -> f64 {
        self.f00 + self.f11
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.f00 >= -tol && self.f11 >= -tol && self.determinant() >= -tol * (1.0 + self.sum().abs())
    }
}

/// Pure-state QFI matrix along `axis`.
pub fn qfi_matrix(state: &StateVector, axis: Axis) -> QfiMatrix2 {
    let ops = SpaceOperators::new(state.space());
    qfi_matrix_with(state, &ops, axis)
}

pub fn qfi_matrix_with(state: &StateVector, ops: &SpaceOperators, axis: Axis) -> QfiMatrix2 {
    let (a, b) = (ops.a(axis), ops.b(axis));
    QfiMatrix2::from_local(
        4.0 * state.variance(a),
        4.0 * state.variance(b),
        4.0 * state.covariance(a, b),
    )
}

/// Mixed-state QFI matrix along `axis`.
pub fn qfi_matrix_mixed(rho: &MixedState, ops: &SpaceOperators, axis: Axis) -> Result<QfiMatrix2> {
    let (a, b) = (ops.a(axis), ops.b(axis));
    Ok(QfiMatrix2::from_local(qfi_mixed(rho, a)?, qfi_mixed(rho, b)?, qfi_extended(rho, a, b)?))
}

/// Upper bounds on the inverse variances of `b0` and `b1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PrecisionBounds {
    pub bound_b0: f64,
    pub bound_b1: f64,
    /// `F_{l,+} + F_{l,-}`, which bounds `bound_b0 + bound_b1`.
    pub qfi_sum: f64,
}

/// Diagonal entries of the inverse QFI matrix, inverted.
///
/// When one generator has vanishing QFI the state is insensitive to that
/// parameter and the other bound reduces to its single-parameter QFI.
pub fn precision_bounds(qm: &QfiMatrix2) -> Result<PrecisionBounds> {
    let bound_b1 = if qm.f00.abs() < tolerance::QFI_ZERO { qm.f11 } else { qm.f11 - qm.f01 * qm.f01 / qm.f00 };
    let bound_b0 = if qm.f11.abs() < tolerance::QFI_ZERO { qm.f00 } else { qm.f00 - qm.f01 * qm.f01 / qm.f11 };
    for v in [bound_b0, bound_b1] {
        if v < -tolerance::IDENTITY {
            return Err(Error::NegativeBound(v));
        }
    }
    Ok(PrecisionBounds { bound_b0: bound_b0.max(0.0), bound_b1: bound_b1.max(0.0), qfi_sum: qm.sum() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::spin::TwoWellSpace;
    use crate::states::{dicke_state, flipped_dicke_state, haar_random_state, product_dicke_state};
    use crate::spin::{spin_matrices, Spin};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(na: u32, nb: u32) -> TwoWellSpace {
        TwoWellSpace::new(na, nb).unwrap()
    }

    #[test]
    fn pure_values() {
        let sp = space(4, 4);
        let ops = SpaceOperators::new(sp);
        let d = dicke_state(sp).unwrap();
        assert!(qfi_pure(&d, &ops.plus(Axis::Z)).unwrap().abs() < 1e-12);
        assert!((qfi_pure(&d, &ops.plus(Axis::X)).unwrap() - 40.0).abs() < 1e-10);
        let f = flipped_dicke_state(sp).unwrap();
        assert!((qfi_pure(&f, &ops.minus(Axis::Z)).unwrap() - 64.0 / 7.0).abs() < 1e-10);
    }

    #[test]
    fn non_hermitian_rejected() {
        let sp = space(2, 2);
        let ops = SpaceOperators::new(sp);
        let d = dicke_state(sp).unwrap();
        let bad = ops.a(Axis::X) * ops.b(Axis::Y) * c(0.0) + ops.a(Axis::X) * crate::linalg::I;
        assert!(matches!(qfi_pure(&d, &bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn mixed_matches_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (na, nb) in [(2, 2), (1, 3), (2, 4)] {
            let sp = space(na, nb);
            let ops = SpaceOperators::new(sp);
            let psi = haar_random_state(sp, &mut rng);
            let rho = MixedState::from_pure(&psi);
            for ax in Axis::ALL {
                let (a, b) = (ops.a(ax), ops.b(ax));
                let pure = qfi_pure_extended(&psi, a, b).unwrap();
                let mixed = qfi_extended(&rho, a, b).unwrap();
                assert!((pure - mixed).abs() < 1e-9);
                let g = ops.minus(ax);
                assert!((qfi_pure(&psi, &g).unwrap() - qfi_mixed(&rho, &g).unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn extended_qfi_is_symmetric_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sp = space(2, 3);
        let ops = SpaceOperators::new(sp);
        let psi = haar_random_state(sp, &mut rng);
        let phi = haar_random_state(sp, &mut rng);
        let rho_m = (psi.amplitudes() * psi.amplitudes().adjoint()) * c(0.7)
            + (phi.amplitudes() * phi.amplitudes().adjoint()) * c(0.3);
        let rho = MixedState::from_density(&rho_m).unwrap();
        let (a, b, z) = (ops.a(Axis::X), ops.b(Axis::Y), ops.a(Axis::Z));
        let ab = qfi_extended(&rho, a, b).unwrap();
        let ba = qfi_extended(&rho, b, a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        let combo = a * c(2.0) + z * c(-0.5);
        let lhs = qfi_extended(&rho, &combo, b).unwrap();
        let rhs = 2.0 * ab - 0.5 * qfi_extended(&rho, z, b).unwrap();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn maximally_mixed_has_no_information() {
        let sp = space(2, 2);
        let ops = SpaceOperators::new(sp);
        let rho = MixedState::maximally_mixed(sp.dim());
        assert_eq!(qfi_mixed(&rho, &ops.minus(Axis::Y)).unwrap(), 0.0);
    }

    #[test]
    fn invalid_density_rejected() {
        let m = CMatrix::identity(2, 2);
        assert!(MixedState::from_density(&m).is_err());
    }

    #[test]
    fn flipped_dicke_cross_term() {
        let sp = space(4, 4);
        let ops = SpaceOperators::new(sp);
        let rho = MixedState::from_pure(&flipped_dicke_state(sp).unwrap());
        let v = qfi_extended(&rho, ops.a(Axis::Y), ops.b(Axis::Y)).unwrap();
        assert!((v + 64.0 / 7.0).abs() < 1e-9);
    }

    #[test]
    fn matrix_for_flipped_dicke() {
        let qm = qfi_matrix(&flipped_dicke_state(space(4, 4)).unwrap(), Axis::Y);
        assert!((qm.f00 - 24.0 / 7.0).abs() < 1e-10);
        assert!(qm.f01.abs() < 1e-10);
        assert!((qm.f11 - 40.0).abs() < 1e-10);
        let b = precision_bounds(&qm).unwrap();
        assert!((b.bound_b1 - 40.0).abs() < 1e-10);

        let qm = qfi_matrix(&flipped_dicke_state(space(2, 6)).unwrap(), Axis::Y);
        assert!((qm.f01 + 20.0).abs() < 1e-10);
        let b = precision_bounds(&qm).unwrap();
        assert!((b.bound_b1 - 90.0 / 11.0).abs() < 1e-10);
        let alt = 4.0 * (qm.fa * qm.fb - qm.fab * qm.fab) / qm.f00;
        assert!((alt - b.bound_b1).abs() < 1e-10);
    }

    #[test]
    fn product_of_local_dicke_states() {
        let qm = qfi_matrix(&product_dicke_state(space(4, 4)).unwrap(), Axis::Y);
        let b = precision_bounds(&qm).unwrap();
        // (N/2)(N/2 + 2) at N = 8
        assert!((b.bound_b1 - 24.0).abs() < 1e-10);
    }

    #[test]
    fn state_in_one_effective_well_is_singular() {
        // well b sits in a J_y eigenstate, so only J_{y,a} acts nontrivially
        let sp = space(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a_part = haar_random_state(sp, &mut rng).amplitudes().rows(0, 3).into_owned();
        let jy_b = spin_matrices(Spin::of_particles(2)).jy;
        let (_, local) = hermitian_eigen(&jy_b);
        let psi = StateVector::new(sp, a_part.kronecker(&local.column(0).into_owned())).unwrap();
        let qm = qfi_matrix(&psi, Axis::Y);
        assert!((qm.f00 - qm.f11).abs() < 1e-10);
        assert!(qm.determinant().abs() < 1e-9);
        assert!(precision_bounds(&qm).unwrap().bound_b1.abs() < 1e-9);
    }

    #[test]
    fn bounds_never_exceed_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let psi = haar_random_state(space(2, 4), &mut rng);
            for ax in Axis::ALL {
                let qm = qfi_matrix(&psi, ax);
                assert!(qm.is_psd(1e-10));
                let b = precision_bounds(&qm).unwrap();
                assert!(b.bound_b1 <= qm.f11 + 1e-12);
                assert!(b.bound_b0 <= qm.f00 + 1e-12);
                assert!(b.bound_b0 + b.bound_b1 <= b.qfi_sum + 1e-9);
                assert!((qm.sum() - 2.0 * (qm.fa + qm.fb)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_diagonal_falls_back_to_single_parameter() {
        let qm = QfiMatrix2::from_local(10.0, 10.0, -10.0);
        assert!(qm.f00.abs() < 1e-15);
        let b = precision_bounds(&qm).unwrap();
        assert_eq!(b.bound_b1, 40.0);
        assert_eq!(b.bound_b0, 0.0);
    }

    #[test]
    fn negative_bound_reported() {
        let qm = QfiMatrix2 { f00: 1.0, f01: 3.0, f11: 1.0, fa: 0.0, fb: 0.0, fab: 0.0 };
        assert!(matches!(precision_bounds(&qm), Err(Error::NegativeBound(_))));
    }
}
