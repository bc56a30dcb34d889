use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::axioms::{central_residual, verify_axioms, Check};
use super::FrobeniusAlgebra;
use crate::cstar;
use crate::error::{Error, Result};
use crate::tensor::linalg::psd_sqrt;
use crate::tensor::{hermitian_eigen, Scalar, Tensor};

/// How well a candidate `z` satisfies the normaliser conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct NormaliserCheck {
    pub central: Check,
    /// `Tr_A(mult) ∘ z² = counit`.
    pub equation: Check,
    /// Smallest eigenvalue of `z`, complex model only.
    pub min_eigenvalue: Option<f64>,
}

impl NormaliserCheck {
    pub fn pass(&self) -> bool {
        self.central.pass && self.equation.pass && self.min_eigenvalue.is_none_or(|v| v > 0.0)
    }
}

/// Check centrality and the defining equation for `z`.
pub fn check_normaliser<S: Scalar>(
    a: &FrobeniusAlgebra<S>,
    z: &Tensor<S>,
    tol: f64,
) -> Result<NormaliserCheck> {
    let central = central_residual(a, z, tol)?;
    let z = z.reshape(&[a.dim()], &[a.dim()])?;
    let lhs = a.loop_left().compose(&z.compose(&z)?)?;
    let equation = Check::compare(&lhs, &a.counit(), tol)?;
    let complex: Option<Vec<Complex64>> = z.data().iter().map(|x| x.to_complex()).collect();
    let min_eigenvalue = match complex {
        Some(data) => {
            let e = hermitian_eigen(&Tensor::new(&[a.dim()], &[a.dim()], data)?)?;
            Some(if e.hermitian_residual > tol { f64::NEG_INFINITY } else { e.values[0] })
        }
        None => None,
    };
    Ok(NormaliserCheck { central, equation, min_eigenvalue })
}

/// Find the central positive-definite `z` with `Tr_A(mult) ∘ z² = counit`.
///
/// `z²` is left multiplication by a central element `w`, found by solving
/// `Tr(L_{w·e_a}) = counit(e_a)` over the centre. `z` is the positive
/// square root of `L_w`.
pub fn solve_normaliser(a: &FrobeniusAlgebra<Complex64>, tol: f64) -> Result<Tensor<Complex64>> {
    let report = verify_axioms(a, tol)?;
    if let Some(name) = report.first_failure() {
        return Err(Error::NotAnAlgebra(format!("{name} fails")));
    }
    let d = a.dim();
    let centre = cstar::center(a, tol)?;
    let trace = a.loop_left();
    let counit = a.counit();

    // M[a, k] = Tr(L_{c_k · e_a})
    let mut m = DMatrix::<Complex64>::zeros(d, centre.len());
    for (k, ck) in centre.iter().enumerate() {
        let lk = a.left_mult(ck)?;
        let row = trace.compose(&lk)?;
        for i in 0..d {
            m[(i, k)] = row.data()[i];
        }
    }
    let rhs = DVector::from_column_slice(counit.data());
    let svd = m.clone().svd(true, true);
    let beta = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::NoNormaliser(format!("least squares failed: {e}")))?;
    let scale = 1.0 + counit.max_abs();
    let fit = (&m * &beta - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if fit > tol * scale {
        return Err(Error::NoNormaliser(format!("no central solution (residual {fit:e})")));
    }

    let mut w = Tensor::<Complex64>::zeros(&[d], &[]);
    for (k, ck) in centre.iter().enumerate() {
        w = w.add(&ck.scale(beta[k]))?;
    }
    let z_squared = a.left_mult(&w)?;
    let e = hermitian_eigen(&z_squared)?;
    if e.hermitian_residual > tol * scale || e.values[0] <= tol {
        return Err(Error::NoNormaliser(format!(
            "z² is not positive definite (smallest eigenvalue {:e}, hermitian residual {:e})",
            e.values[0], e.hermitian_residual
        )));
    }
    let z = Tensor::from_matrix(&psd_sqrt(&z_squared.to_matrix()), &[d], &[d])?;

    let check = check_normaliser(a, &z, tol * scale)?;
    if !check.pass() {
        return Err(Error::NoNormaliser(format!(
            "solution fails verification (central {:e}, equation {:e})",
            check.central.residual, check.equation.residual
        )));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex64;
    const TOL: f64 = 1e-9;

    #[test]
    fn pants_normaliser_is_inverse_root_dimension() {
        for n in 1..=4 {
            let p = FrobeniusAlgebra::<C>::pair_of_pants(n);
            let z = solve_normaliser(&p, TOL).unwrap();
            let expected = Tensor::<C>::identity(n * n).scale(C::new(1.0 / (n as f64).sqrt(), 0.0));
            assert!(z.distance(&expected).unwrap() < TOL, "n = {n}");
        }
    }

    #[test]
    fn direct_sum_normaliser_is_blockwise() {
        let a = FrobeniusAlgebra::<C>::block_model(&[1, 2]).unwrap().without_normaliser();
        let z = solve_normaliser(&a, TOL).unwrap();
        let mut expected = Tensor::<C>::identity(5).scale(C::new(0.5f64.sqrt(), 0.0));
        expected.set(0, 0, C::new(1.0, 0.0));
        assert!(z.distance(&expected).unwrap() < TOL);
    }

    #[test]
    fn orthonormal_basis_has_identity_normaliser() {
        let z = solve_normaliser(&FrobeniusAlgebra::<C>::copying(3), TOL).unwrap();
        assert!(z.distance(&Tensor::identity(3)).unwrap() < TOL);
    }

    #[test]
    fn scaled_basis_normaliser_matches_closed_form() {
        let two = C::new(2.0, 0.0);
        let zero = C::new(0.0, 0.0);
        let a = FrobeniusAlgebra::from_orthogonal_basis(&[vec![two, zero], vec![zero, two]]).unwrap();
        let z = solve_normaliser(&a, TOL).unwrap();
        assert!(z.distance(&Tensor::<C>::identity(2).scale(C::new(0.5, 0.0))).unwrap() < TOL);
        assert!(z.distance(a.normaliser().unwrap()).unwrap() < TOL);
    }

    #[test]
    fn attached_normalisers_check_out() {
        let a = FrobeniusAlgebra::<C>::block_model(&[2, 1, 1]).unwrap();
        assert!(check_normaliser(&a, a.normaliser().unwrap(), TOL).unwrap().pass());
        let wrong = Tensor::<C>::identity(6);
        assert!(!check_normaliser(&a, &wrong, TOL).unwrap().pass());
        let b = FrobeniusAlgebra::<bool>::pair_of_pants(2);
        let c = check_normaliser(&b, b.normaliser().unwrap(), 0.0).unwrap();
        assert!(c.pass() && c.min_eigenvalue.is_none());
    }

    #[test]
    fn non_algebras_are_rejected() {
        let p = FrobeniusAlgebra::<C>::pair_of_pants(2);
        let mut m = p.mult().clone();
        m.set(1, 3, C::new(0.5, 0.0));
        let q = FrobeniusAlgebra::new(m, p.unit().clone(), None).unwrap();
        assert!(matches!(solve_normaliser(&q, TOL), Err(Error::NotAnAlgebra(_))));
    }
}
