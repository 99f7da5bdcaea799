//! Dense complex matrix helpers.
//!
//! Storage is `nalgebra::DMatrix<Complex64>`. Everything here works on the
//! max-entry deviation, which is the tolerance metric used across the crate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Default tolerance for Hermiticity, unitarity and idempotence checks.
pub const DEFAULT_TOL: f64 = 1e-10;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Kronecker product, leftmost factor most significant.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_vectors(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// Builds a matrix from row-major entries.
pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "expected {} entries for a {rows}x{cols} matrix, got {}",
            rows * cols,
            entries.len()
        )));
    }
    Ok(ComplexMatrix::from_row_slice(rows, cols, entries))
}

pub fn to_row_major(a: &ComplexMatrix) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.nrows() * a.ncols());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out.push(a[(i, j)]);
        }
    }
    out
}

/// Like `f64::max`, but a NaN on either side wins, so a NaN entry cannot
/// hide inside a maximum.
pub fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, nan_max)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, nan_max)
}

pub fn hermitian_deviation(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = nan_max(dev, (a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()) * c64(0.5, 0.0)
}

pub fn is_hermitian(a: &ComplexMatrix, tol: f64) -> bool {
    hermitian_deviation(a) <= tol
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    let id = identity(a.nrows());
    max_abs_diff(&(a.adjoint() * a), &id) <= tol && max_abs_diff(&(a * a.adjoint()), &id) <= tol
}

/// Hermitian and smallest eigenvalue at least `-tol`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> bool {
    is_hermitian(a, tol.max(DEFAULT_TOL)) && min_eigenvalue(a) >= -tol
}

pub fn is_idempotent(a: &ComplexMatrix, tol: f64) -> bool {
    a.is_square() && max_abs_diff(&(a * a), a) <= tol
}

/// Spectrum of the Hermitian part of `a`, ascending, with matching
/// eigenvector columns.
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = a.nrows();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(a))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(a: &ComplexMatrix) -> f64 {
    eigenvalues(a).first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(a: &ComplexMatrix) -> f64 {
    eigenvalues(a).last().copied().unwrap_or(0.0)
}

pub fn largest_singular_value(a: &ComplexMatrix) -> f64 {
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Re Tr(A B) for Hermitian arguments, without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// Frobenius inner product Re Tr(A† B).
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    frobenius_inner(a, a).sqrt()
}

pub fn trace_re(a: &ComplexMatrix) -> f64 {
    a.trace().re
}

/// z† A z (real part) for Hermitian `a`, plus the imaginary residue.
pub fn quadratic_form(a: &ComplexMatrix, z: &ComplexVector) -> Complex64 {
    (z.adjoint() * a * z)[(0, 0)]
}

/// `V† A V`.
pub fn conj_sandwich(v: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    v.adjoint() * a * v
}

pub fn outer(z: &ComplexVector) -> ComplexMatrix {
    z * z.adjoint()
}

/// Orthonormal basis (as columns) of the range of a Hermitian projector.
pub fn projector_range_basis(projector: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(projector);
    let cols: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| i)
        .collect();
    let mut basis = ComplexMatrix::zeros(projector.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        basis.set_column(dst, &vectors.column(src));
    }
    basis
}

/// Euclidean projection of a real vector onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Nearest unit-trace PSD matrix in Frobenius norm.
pub fn project_to_density(a: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(a);
    let clipped = project_to_simplex(&values);
    let d = DVector::from_iterator(clipped.len(), clipped.iter().map(|&x| c64(x, 0.0)));
    &vectors * ComplexMatrix::from_diagonal(&d) * vectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_of_identities_is_identity() {
        assert_eq!(tensor_product(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn simplex_projection_basic() {
        assert_eq!(project_to_simplex(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);
        let p = project_to_simplex(&[2.0, 0.0]);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1] == 0.0);
        let p = project_to_simplex(&[-1.0, -1.0]);
        assert!((p[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn density_projection_lands_on_spectraplex() {
        let a = from_row_major(2, 2, &[c64(3.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(-2.0, 0.0)])
            .unwrap();
        let p = project_to_density(&a);
        assert!((trace_re(&p) - 1.0).abs() < 1e-12);
        assert!(min_eigenvalue(&p) > -1e-12);
    }

    #[test]
    fn range_basis_dimension() {
        let mut p = ComplexMatrix::zeros(3, 3);
        p[(0, 0)] = c64(1.0, 0.0);
        p[(2, 2)] = c64(1.0, 0.0);
        assert_eq!(projector_range_basis(&p).ncols(), 2);
    }
}
