//! Seeded sampling of complex vectors, matrices and unitaries.
//!
//! Everything randomized in this crate draws from a [`ChaCha8Rng`] so runs
//! are reproducible from a single `u64` seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::Tensor;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian sample.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// A random element of a `d`-dimensional carrier.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Tensor<Complex64> {
    Tensor::state((0..d).map(|_| complex_normal(rng)).collect())
}

/// A random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<Complex64> {
    let g = random_matrix(rng, d, d);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of the
/// diagonal of R divided out.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<Complex64> {
    let qr = random_matrix(rng, d, d).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// [`random_unitary`] as a `d ← d` tensor.
pub fn random_unitary_tensor<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Tensor<Complex64> {
    Tensor::from_matrix(&random_unitary(rng, d), &[d], &[d]).expect("square")
}
