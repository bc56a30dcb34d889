//! Classical channels: CP maps between commutative algebras.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_cpstar, is_normalised, CPStarMorphism};
use crate::cstar::copyable_points;
use crate::error::{Error, Result};
use crate::frobenius::{classify, FrobeniusAlgebra};
use crate::tensor::Tensor;

type C = Complex64;

#[derive(Debug, Clone)]
pub struct ClassicalChannel {
    /// Both objects commutative and the map completely positive.
    pub classical: bool,
    pub normalised: bool,
    /// `S[i][j]`: weight of the `i`-th codomain point in the image of the
    /// `j`-th domain point. Present for every classical map.
    pub stochastic: Option<DMatrix<f64>>,
    /// Real, entrywise non-negative, columns summing to one.
    pub stochastic_valid: bool,
}

fn inner(x: &Tensor<C>, y: &Tensor<C>) -> C {
    x.data().iter().zip(y.data()).map(|(a, b)| a.conj() * b).sum()
}

/// Express `f` as a matrix over copyable points when it is a classical
/// channel.
pub fn is_classical_channel(f: &CPStarMorphism, tol: f64) -> Result<ClassicalChannel> {
    let not_classical =
        ClassicalChannel { classical: false, normalised: false, stochastic: None, stochastic_valid: false };
    if !classify(&f.dom, tol)?.commutative.pass || !classify(&f.cod, tol)?.commutative.pass {
        return Ok(not_classical);
    }
    if !check_cpstar(f, tol)?.is_cp() {
        return Ok(not_classical);
    }
    let normalised = is_normalised(f, tol)?.pass;
    let pa = copyable_points(&f.dom, tol)?;
    let pb = copyable_points(&f.cod, tol)?;
    let mut s = DMatrix::zeros(pb.points.len(), pa.points.len());
    let mut max_imag: f64 = 0.0;
    for (j, p) in pa.points.iter().enumerate() {
        let image = f.map.compose(p)?;
        for (i, q) in pb.points.iter().enumerate() {
            let w = inner(q, &image) / pb.norms[i];
            max_imag = max_imag.max(w.im.abs());
            s[(i, j)] = w.re;
        }
    }
    let stochastic_valid = max_imag <= tol.sqrt()
        && s.iter().all(|&x| x >= -tol.sqrt())
        && s.column_iter().all(|c| (c.sum() - 1.0).abs() <= tol.sqrt());
    Ok(ClassicalChannel { classical: true, normalised, stochastic: Some(s), stochastic_valid })
}

/// The map sending the `j`-th copyable point of `dom` to `Σ_i S[i][j] p'_i`.
pub fn stochastic_channel(
    s: &DMatrix<f64>,
    dom: &FrobeniusAlgebra<C>,
    cod: &FrobeniusAlgebra<C>,
    tol: f64,
) -> Result<CPStarMorphism> {
    let pa = copyable_points(dom, tol)?;
    let pb = copyable_points(cod, tol)?;
    if s.nrows() != pb.points.len() || s.ncols() != pa.points.len() {
        return Err(Error::Shape(format!(
            "stochastic matrix is {} x {} but the objects have {} and {} points",
            s.nrows(),
            s.ncols(),
            pb.points.len(),
            pa.points.len()
        )));
    }
    let (da, db) = (dom.dim(), cod.dim());
    let mut map = Tensor::<C>::zeros(&[db], &[da]);
    // Copyable points are orthogonal, so p / ‖p‖² is the dual basis.
    for (j, p) in pa.points.iter().enumerate() {
        for (i, q) in pb.points.iter().enumerate() {
            let w = s[(i, j)] / pa.norms[j];
            for r in 0..db {
                for c in 0..da {
                    let v = map.at(r, c) + q.data()[r] * p.data()[c].conj() * w;
                    map.set(r, c, v);
                }
            }
        }
    }
    CPStarMorphism::new(dom.clone(), cod.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::transpose_map;
    use crate::frobenius::FrobeniusAlgebra as F;

    const TOL: f64 = 1e-9;

    #[test]
    fn stochastic_round_trip() {
        let s = DMatrix::from_row_slice(3, 2, &[0.5, 0.1, 0.25, 0.0, 0.25, 0.9]);
        let f = stochastic_channel(&s, &F::copying(2), &F::copying(3), TOL).unwrap();
        let ch = is_classical_channel(&f, TOL).unwrap();
        assert!(ch.classical && ch.normalised && ch.stochastic_valid);
        assert!((ch.stochastic.unwrap() - s).norm() < 1e-12);
    }

    #[test]
    fn scaled_bases_round_trip() {
        let z = C::new(0.0, 0.0);
        let two = C::new(2.0, 0.0);
        let a = F::from_orthogonal_basis(&[vec![two, z], vec![z, two]]).unwrap();
        let s = DMatrix::from_row_slice(2, 2, &[0.3, 1.0, 0.7, 0.0]);
        let f = stochastic_channel(&s, &a, &F::copying(2), TOL).unwrap();
        let ch = is_classical_channel(&f, TOL).unwrap();
        assert!(ch.classical && ch.stochastic_valid);
        assert!((ch.stochastic.unwrap() - s).norm() < 1e-12);
    }

    #[test]
    fn negative_entries_are_not_cp() {
        let s = DMatrix::from_row_slice(2, 2, &[1.5, 0.0, -0.5, 1.0]);
        let f = stochastic_channel(&s, &F::copying(2), &F::copying(2), TOL).unwrap();
        assert!(!is_classical_channel(&f, TOL).unwrap().classical);
    }

    #[test]
    fn quantum_objects_are_not_classical() {
        assert!(!is_classical_channel(&transpose_map(2), TOL).unwrap().classical);
    }

    #[test]
    fn unnormalised_scaling() {
        let s = DMatrix::from_row_slice(1, 1, &[2.0]);
        let f = stochastic_channel(&s, &F::copying(1), &F::copying(1), TOL).unwrap();
        let ch = is_classical_channel(&f, TOL).unwrap();
        assert!(ch.classical && !ch.normalised && !ch.stochastic_valid);
    }
}
