//! Solving the CP*-condition directly from the Frobenius structure.
//!
//! With `coaction: A* ⊗ A → A` and its dagger `action`, the condition asks
//! that `action_B ∘ f ∘ coaction_A` be of the form `Σ_x conj(g_x) ⊗ g_x`.
//! Reading that operator as a matrix indexed by `(b, a)` pairs, this is
//! positive semidefiniteness, and an eigendecomposition yields `g`. The
//! normaliser identity `z² ∘ coaction ∘ action = id` then rebuilds `f` in
//! convolution form, which serves as an independent consistency check.

use num_complex::Complex64;

use super::{require_normalisers, CPStarMorphism, KrausWitness};
use crate::error::{Error, Result};
use crate::tensor::linalg::hermitian_eigen_matrix;
use crate::tensor::{contract, Tensor};

type C = Complex64;

#[derive(Debug, Clone)]
pub struct DirectSolution {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
    pub hermitian_residual: f64,
    pub witness: KrausWitness,
    /// `f` rebuilt from the witness through the convolution form.
    pub convolution_residual: f64,
}

pub(crate) struct Factorization {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub hermitian_residual: f64,
    pub witness: KrausWitness,
}

/// Factor `p`, legs `[B̄, B | Ā, A]`, as `Σ_x conj(g_x) ⊗ g_x`.
pub(crate) fn factorize(p: &Tensor<C>, tol: f64) -> Result<Factorization> {
    let dims = p.dims();
    if dims.len() != 4 || dims[0] != dims[1] || dims[2] != dims[3] {
        return Err(Error::Shape(format!("expected legs [B, B | A, A], got {dims:?}")));
    }
    let (db, da) = (dims[0], dims[2]);
    let choi = p.permute(&[1, 3, 0, 2], 2)?.to_matrix();
    let e = hermitian_eigen_matrix(&choi);
    let scale = 1.0 + p.max_abs();
    let min_eigenvalue = e.values.first().copied().unwrap_or(0.0);
    let is_psd = e.hermitian_residual <= tol * scale && min_eigenvalue >= -tol * scale;
    let kept: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i] > tol * scale).rev().collect();
    let rank = kept.len();
    let mut g = Tensor::<C>::zeros(&[rank.max(1), db], &[da]);
    for (x, &i) in kept.iter().enumerate() {
        let s = e.values[i].sqrt();
        for b in 0..db {
            for a in 0..da {
                g.set(x * db + b, a, e.vectors[(b * da + a, i)] * s);
            }
        }
    }
    let rebuilt = contract("xBA,xba->Bb|Aa", &[&g.conj(), &g])?;
    let residual = rebuilt.distance(p)?;
    Ok(Factorization {
        is_psd,
        min_eigenvalue,
        hermitian_residual: e.hermitian_residual,
        witness: KrausWitness { ancilla_dim: rank, g, residual },
    })
}

/// Decide the CP*-condition without passing through standard forms.
pub fn solve_cpstar_condition(f: &CPStarMorphism, tol: f64) -> Result<DirectSolution> {
    require_normalisers(f)?;
    let (da, db) = (f.dom.dim(), f.cod.dim());
    let p = f.cod.action().compose(&f.map)?.compose(&f.dom.coaction())?;
    let fac = factorize(&p.reshape(&[db, db], &[da, da])?, tol)?;

    let za = f.dom.normaliser().expect("checked");
    let zb = f.cod.normaliser().expect("checked");
    let g = &fac.witness.g;
    let condition = contract("xBA,xba->Bb|Aa", &[&g.conj(), g])?.reshape(&[db * db], &[da * da])?;
    let rebuilt = zb
        .compose(zb)?
        .compose(&f.cod.coaction())?
        .compose(&condition)?
        .compose(&f.dom.action())?
        .compose(za)?
        .compose(za)?;
    let convolution_residual = rebuilt.distance(&f.map)?;
    let scale = 1.0 + f.map.max_abs();
    let completely_positive = fac.is_psd
        && fac.witness.residual <= tol.sqrt() * (1.0 + p.max_abs())
        && convolution_residual <= tol.sqrt() * scale;
    Ok(DirectSolution {
        completely_positive,
        min_eigenvalue: fac.min_eigenvalue,
        hermitian_residual: fac.hermitian_residual,
        witness: fac.witness,
        convolution_residual,
    })
}
