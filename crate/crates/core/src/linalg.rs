//! Dense complex helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Frobenius norm of `a - a^dagger`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

pub fn ensure_hermitian(a: &CMatrix, tol: f64) -> Result<()> {
    let r = hermiticity_residual(a);
    if r > tol {
        Err(Error::NotHermitian(r))
    } else {
        Ok(())
    }
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted descending.
///
/// Columns of the returned matrix are the corresponding orthonormal eigenvectors.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    // symmetrize first so the solver only ever sees an exactly Hermitian input
    let h = (a + a.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// `exp(-i * angle * generator)` for a Hermitian generator.
pub fn unitary_exp(generator: &CMatrix, angle: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(generator);
    let phases = CVector::from_iterator(
        values.len(),
        values.iter().map(|&l| Complex64::from_polar(1.0, -angle * l)),
    );
    let scaled = CMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, col| {
        vectors[(r, col)] * phases[col]
    });
    scaled * vectors.adjoint()
}

/// Frobenius norm of `u^dagger u - 1`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n)).norm()
}

/// Moore-Penrose pseudo-inverse of a real symmetric matrix.
///
/// Eigenvalues with magnitude below `rel_cutoff * max|lambda|` are treated as zero.
/// Returns the inverse together with its rank.
pub fn symmetric_pseudo_inverse(a: &DMatrix<f64>, rel_cutoff: f64) -> (DMatrix<f64>, usize) {
    let n = a.nrows();
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let largest = eig.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut out = DMatrix::<f64>::zeros(n, n);
    let mut rank = 0;
    if largest == 0.0 {
        return (out, 0);
    }
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= rel_cutoff * largest {
            continue;
        }
        rank += 1;
        let v = eig.eigenvectors.column(k);
        out += (v * v.transpose()) / lambda;
    }
    (out, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_descending() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(1.0)],
        );
        let (vals, vecs) = hermitian_eigen(&a);
        assert!((vals[0] - 2.0).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12);
        let recon = &vecs * CMatrix::from_diagonal(&CVector::from_vec(vals.iter().map(|&v| c(v)).collect())) * vecs.adjoint();
        assert!((recon - a).norm() < 1e-12);
    }

    #[test]
    fn exp_of_zero_angle_is_identity() {
        let a = CMatrix::from_fn(3, 3, |r, col| c((r + col) as f64));
        let u = unitary_exp(&a, 0.0);
        assert!((u - CMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_rank_one() {
        let v = DVector::from_vec(vec![1.0, 2.0, 2.0]);
        let a = &v * v.transpose();
        let (pinv, rank) = symmetric_pseudo_inverse(&a, 1e-10);
        assert_eq!(rank, 1);
        assert!((&a * &pinv * &a - &a).norm() < 1e-12);
    }
}
