//! Dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::Tensor;
use crate::error::{Error, Result};

impl Tensor<Complex64> {
    /// The tensor as a `rows × cols` nalgebra matrix.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows(), self.cols(), self.data())
    }

    /// A tensor with the given legs from a matrix of matching size.
    pub fn from_matrix(m: &DMatrix<Complex64>, out: &[usize], inp: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push(m[(i, j)]);
            }
        }
        Tensor::new(out, inp, data)
    }

    /// The vector of a state or effect.
    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(self.data())
    }

    /// Real-part view for real-valued checks: largest imaginary part.
    pub fn max_imag(&self) -> f64 {
        self.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Hermitian within `tol` and no eigenvalue below `-tol`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(psd_report(self, tol)?.is_psd)
    }
}

/// Eigen-decomposition of the Hermitian part of a square matrix, eigenvalues
/// ascending, eigenvectors as matching columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
    /// Largest entry of `A - A†`.
    pub hermitian_residual: f64,
}

pub fn hermitian_eigen(t: &Tensor<Complex64>) -> Result<HermitianEigen> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    Ok(hermitian_eigen_matrix(&t.to_matrix()))
}

pub(crate) fn hermitian_eigen_matrix(m: &DMatrix<Complex64>) -> HermitianEigen {
    let adj = m.adjoint();
    let hermitian_residual = (m - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let h = (m + adj).scale(0.5);
    let n = h.nrows();
    if n == 0 {
        return HermitianEigen { values: vec![], vectors: h, hermitian_residual };
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors, hermitian_residual }
}

/// Diagnosable positivity test.
#[derive(Debug, Clone)]
pub struct PsdReport {
    pub is_psd: bool,
    pub hermitian_residual: f64,
    pub min_eigenvalue: f64,
    /// Eigenvector of the smallest eigenvalue.
    pub min_vector: Vec<Complex64>,
}

pub fn psd_report(t: &Tensor<Complex64>, tol: f64) -> Result<PsdReport> {
    let e = hermitian_eigen(t)?;
    let min_eigenvalue = e.values.first().copied().unwrap_or(0.0);
    let min_vector = if e.values.is_empty() { vec![] } else { e.vectors.column(0).iter().copied().collect() };
    Ok(PsdReport {
        is_psd: e.hermitian_residual <= tol && min_eigenvalue >= -tol,
        hermitian_residual: e.hermitian_residual,
        min_eigenvalue,
        min_vector,
    })
}

/// Square root of a positive semidefinite matrix, negative eigenvalues
/// clipped to zero.
pub(crate) fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let e = hermitian_eigen_matrix(m);
    let n = m.nrows();
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(e.values[i].max(0.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &e.vectors * d * e.vectors.adjoint()
}
