//! Maps between full matrix algebras `𝕄ₙ`, presented as pair-of-pants
//! algebras, and the usual CPM constructions on them.

use num_complex::Complex64;

use super::direct::factorize;
use super::{CPStarMorphism, KrausWitness};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::tensor::Tensor;

type C = Complex64;

#[derive(Debug, Clone)]
pub struct CpmVerdict {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
    /// Kraus map of minimal ancilla dimension, the Choi rank.
    pub witness: Option<KrausWitness>,
}

fn pants_size(a: &FrobeniusAlgebra<C>, tol: f64) -> Result<usize> {
    let n = (a.dim() as f64).sqrt().round() as usize;
    if n * n != a.dim() || !a.approx_same(&FrobeniusAlgebra::pair_of_pants(n), tol) {
        return Err(Error::NotPants(format!("algebra of dimension {} is not a pair of pants", a.dim())));
    }
    Ok(n)
}

/// Choi test for a map `𝕄_m → 𝕄_n` given on the carrier `H* ⊗ H`.
pub fn cpm_check(f: &CPStarMorphism, tol: f64) -> Result<CpmVerdict> {
    let m = pants_size(&f.dom, tol)?;
    let n = pants_size(&f.cod, tol)?;
    let fac = factorize(&f.map.reshape(&[n, n], &[m, m])?, tol)?;
    Ok(CpmVerdict {
        completely_positive: fac.is_psd,
        min_eigenvalue: fac.min_eigenvalue,
        witness: fac.is_psd.then_some(fac.witness),
    })
}

/// The pure map `conj(u) ⊗ u` induced by `u: H_A → H_B`.
pub fn pure_embed(u: &Tensor<C>) -> CPStarMorphism {
    let (b, a) = (u.rows(), u.cols());
    let map = u.conj().kron(u).reshape(&[b * b], &[a * a]).expect("kron shape");
    CPStarMorphism { dom: FrobeniusAlgebra::pair_of_pants(a), cod: FrobeniusAlgebra::pair_of_pants(b), map }
}

/// The *-isomorphism `𝕄_{ab} ≅ 𝕄_a ⊗ 𝕄_b`, regrouping legs
/// `[i, i', j, j']` as `[i, j, i', j']`.
pub fn reshuffle(da: usize, db: usize) -> CPStarMorphism {
    let d = da * da * db * db;
    let dom_index = |i: usize, i2: usize, j: usize, j2: usize| ((i * db + i2) * da + j) * db + j2;
    let cod_index = |i: usize, i2: usize, j: usize, j2: usize| ((i * da + j) * db + i2) * db + j2;
    let mut map = Tensor::<C>::zeros(&[d], &[d]);
    for i in 0..da {
        for j in 0..da {
            for i2 in 0..db {
                for j2 in 0..db {
                    map.set(cod_index(i, i2, j, j2), dom_index(i, i2, j, j2), C::new(1.0, 0.0));
                }
            }
        }
    }
    let pa = FrobeniusAlgebra::pair_of_pants(da);
    let pb = FrobeniusAlgebra::pair_of_pants(db);
    CPStarMorphism { dom: FrobeniusAlgebra::pair_of_pants(da * db), cod: pa.tensor_algebra(&pb), map }
}

/// `e_ij ↦ e_ji` on `𝕄ₙ`: positive but not completely positive.
pub fn transpose_map(n: usize) -> CPStarMorphism {
    let p = FrobeniusAlgebra::pair_of_pants(n);
    let map = Tensor::from_fn(&[n * n], &[n * n], |r, c| {
        let (i, j) = (c / n, c % n);
        if r == j * n + i {
            C::new(1.0, 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    });
    CPStarMorphism { dom: p.clone(), cod: p, map }
}

/// `x ↦ (1 - p) x + p Tr(x) 1/n` on `𝕄ₙ`.
pub fn depolarizing(n: usize, p: f64) -> CPStarMorphism {
    let a = FrobeniusAlgebra::pair_of_pants(n);
    let map = Tensor::from_fn(&[n * n], &[n * n], |r, c| {
        let keep = if r == c { 1.0 - p } else { 0.0 };
        let (ri, rj) = (r / n, r % n);
        let (ci, cj) = (c / n, c % n);
        let mix = if ri == rj && ci == cj { p / n as f64 } else { 0.0 };
        C::new(keep + mix, 0.0)
    });
    CPStarMorphism { dom: a.clone(), cod: a, map }
}
