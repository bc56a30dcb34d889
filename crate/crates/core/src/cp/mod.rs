//! Completely positive maps between abstract C*-algebras.
//!
//! A [`CPStarMorphism`] is any linear map between two normalisable complex
//! Frobenius algebras; whether it is completely positive is decided by
//! [`check_cpstar`], never assumed.

mod classical;
mod cpm;
mod direct;

pub use classical::{is_classical_channel, stochastic_channel, ClassicalChannel};
pub use cpm::{cpm_check, depolarizing, pure_embed, reshuffle, transpose_map, CpmVerdict};
pub use direct::{solve_cpstar_condition, DirectSolution};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cstar::{positive_in_algebra, standard_form, PositivityWitness, StandardForm};
use crate::error::{Error, Result};
use crate::frobenius::{Check, FrobeniusAlgebra};
use crate::tensor::linalg::hermitian_eigen_matrix;
use crate::tensor::{contract, Tensor};

type C = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CPStarMorphism {
    pub dom: FrobeniusAlgebra<C>,
    pub cod: FrobeniusAlgebra<C>,
    /// `d_cod ← d_dom`.
    pub map: Tensor<C>,
}

impl CPStarMorphism {
    pub fn new(dom: FrobeniusAlgebra<C>, cod: FrobeniusAlgebra<C>, map: Tensor<C>) -> Result<Self> {
        if map.rows() != cod.dim() || map.cols() != dom.dim() {
            return Err(Error::Shape(format!(
                "map is {} x {} but the objects need {} x {}",
                map.rows(),
                map.cols(),
                cod.dim(),
                dom.dim()
            )));
        }
        let map = map.reshape(&[cod.dim()], &[dom.dim()])?;
        Ok(CPStarMorphism { dom, cod, map })
    }

    pub fn identity(a: &FrobeniusAlgebra<C>) -> Self {
        CPStarMorphism { dom: a.clone(), cod: a.clone(), map: Tensor::identity(a.dim()) }
    }
}

/// A Kraus map `g: A → X ⊗ B` reproducing the morphism through the
/// CP*-condition, legs `[X, B | A]`.
#[derive(Debug, Clone)]
pub struct KrausWitness {
    pub ancilla_dim: usize,
    pub g: Tensor<C>,
    /// Deviation when `g` is substituted back into the condition.
    pub residual: f64,
}

/// Where complete positivity fails.
#[derive(Debug, Clone)]
pub struct NegativeCertificate {
    pub dom_block: usize,
    pub cod_block: usize,
    /// Smallest eigenvalue of the block's Choi matrix.
    pub eigenvalue: f64,
    pub eigenvector: Vec<C>,
    pub hermitian_residual: f64,
}

#[derive(Debug, Clone)]
pub enum CpVerdict {
    Positive(KrausWitness),
    Negative(NegativeCertificate),
}

impl CpVerdict {
    pub fn is_cp(&self) -> bool {
        matches!(self, CpVerdict::Positive(_))
    }

    pub fn witness(&self) -> Option<&KrausWitness> {
        match self {
            CpVerdict::Positive(w) => Some(w),
            CpVerdict::Negative(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&NegativeCertificate> {
        match self {
            CpVerdict::Positive(_) => None,
            CpVerdict::Negative(c) => Some(c),
        }
    }
}

fn require_normalisers(f: &CPStarMorphism) -> Result<()> {
    if f.dom.normaliser().is_none() || f.cod.normaliser().is_none() {
        return Err(Error::MissingNormaliser);
    }
    Ok(())
}

/// The map between block models, `iso_B ∘ f ∘ iso_A⁻¹`.
pub fn block_map(f: &CPStarMorphism, sa: &StandardForm, sb: &StandardForm) -> Result<Tensor<C>> {
    sb.iso.compose(&f.map)?.compose(&sa.iso_inverse)
}

/// Choi matrix `Σ_ab e_ab ⊗ f(e_ab)` of the component from block `p` of the
/// domain to block `q` of the codomain.
pub fn block_choi(
    fb: &Tensor<C>,
    sa: &StandardForm,
    p: usize,
    sb: &StandardForm,
    q: usize,
) -> DMatrix<C> {
    let (m, n) = (sa.block_sizes[p], sb.block_sizes[q]);
    let (oa, ob) = (sa.offsets()[p], sb.offsets()[q]);
    DMatrix::from_fn(m * n, m * n, |r, c| {
        let (a, i) = (r / n, r % n);
        let (b, j) = (c / n, c % n);
        fb.at(ob + i * n + j, oa + a * m + b)
    })
}

/// Decide complete positivity through blockwise Choi matrices.
///
/// On success the Kraus witness comes from factorising the CP*-condition
/// directly; on failure the certificate names the most negative block.
pub fn check_cpstar(f: &CPStarMorphism, tol: f64) -> Result<CpVerdict> {
    require_normalisers(f)?;
    let sa = standard_form(&f.dom, tol)?;
    let sb = standard_form(&f.cod, tol)?;
    let fb = block_map(f, &sa, &sb)?;
    let scale = 1.0 + fb.max_abs();
    let mut worst: Option<NegativeCertificate> = None;
    for p in 0..sa.block_sizes.len() {
        for q in 0..sb.block_sizes.len() {
            let choi = block_choi(&fb, &sa, p, &sb, q);
            let e = hermitian_eigen_matrix(&choi);
            let bad = e.hermitian_residual > tol * scale || e.values[0] < -tol * scale;
            let is_worse = worst.as_ref().is_none_or(|w| e.values[0] < w.eigenvalue);
            if bad && is_worse {
                worst = Some(NegativeCertificate {
                    dom_block: p,
                    cod_block: q,
                    eigenvalue: e.values[0],
                    eigenvector: e.vectors.column(0).iter().copied().collect(),
                    hermitian_residual: e.hermitian_residual,
                });
            }
        }
    }
    match worst {
        Some(c) => Ok(CpVerdict::Negative(c)),
        None => Ok(CpVerdict::Positive(solve_cpstar_condition(f, tol)?.witness)),
    }
}

/// `g ∘ f`, defined when the codomain of `f` matches the domain of `g`.
pub fn compose(g: &CPStarMorphism, f: &CPStarMorphism, tol: f64) -> Result<CPStarMorphism> {
    if !f.cod.approx_same(&g.dom, tol) {
        return Err(Error::ObjectMismatch("codomain of the first map is not the domain of the second".into()));
    }
    Ok(CPStarMorphism { dom: f.dom.clone(), cod: g.cod.clone(), map: g.map.compose(&f.map)? })
}

/// `f ⊗ g` between tensor product algebras.
pub fn tensor(f: &CPStarMorphism, g: &CPStarMorphism) -> CPStarMorphism {
    let dom = f.dom.tensor_algebra(&g.dom);
    let cod = f.cod.tensor_algebra(&g.cod);
    let map = f.map.kron(&g.map).reshape(&[cod.dim()], &[dom.dim()]).expect("kron shape");
    CPStarMorphism { dom, cod, map }
}

/// Reverse direction, dagger of the map.
pub fn dagger_morphism(f: &CPStarMorphism) -> CPStarMorphism {
    CPStarMorphism { dom: f.cod.clone(), cod: f.dom.clone(), map: f.map.dagger() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarHomReport {
    /// `f ∘ mult = mult ∘ (f ⊗ f)`.
    pub multiplicative: Check,
    /// `star ∘ f = f ∘ star`.
    pub star_preserving: Check,
}

impl StarHomReport {
    pub fn pass(&self) -> bool {
        self.multiplicative.pass && self.star_preserving.pass
    }
}

pub fn star_homomorphism_report(f: &CPStarMorphism, tol: f64) -> Result<StarHomReport> {
    require_normalisers(f)?;
    let (da, db) = (f.dom.dim(), f.cod.dim());
    let lhs = contract("cx,xab->c|ab", &[&f.map, f.dom.mult()])?;
    let rhs = contract("cxy,xa,yb->c|ab", &[f.cod.mult(), &f.map, &f.map])?;
    let multiplicative = Check::compare(&lhs, &rhs, tol)?;
    // star(x) = J conj(x) with J[b, a] = frob_cup[a, b]
    let ja = contract("ab->b|a", &[&f.dom.frob_cup().reshape(&[da, da], &[])?])?;
    let jb = contract("ab->b|a", &[&f.cod.frob_cup().reshape(&[db, db], &[])?])?;
    let star_lhs = jb.compose(&f.map.conj())?;
    let star_rhs = f.map.compose(&ja)?;
    let star_preserving = Check::compare(&star_lhs, &star_rhs, tol)?;
    Ok(StarHomReport { multiplicative, star_preserving })
}

/// Whether `f` preserves multiplication and the involution.
pub fn is_star_homomorphism(f: &CPStarMorphism, tol: f64) -> Result<bool> {
    Ok(star_homomorphism_report(f, tol)?.pass())
}

/// For a state out of the trivial algebra: is its element positive?
pub fn is_positive_element(state: &CPStarMorphism, tol: f64) -> Result<PositivityWitness> {
    let trivial = FrobeniusAlgebra::<C>::pair_of_pants(1);
    if !state.dom.approx_same(&trivial, tol) {
        return Err(Error::NotTrivialDomain);
    }
    let x = state.map.reshape(&[state.cod.dim()], &[])?;
    positive_in_algebra(&state.cod, &x, tol)
}

/// `counit_cod ∘ f = counit_dom`.
pub fn is_normalised(f: &CPStarMorphism, tol: f64) -> Result<Check> {
    let lhs = f.cod.counit().compose(&f.map)?;
    Check::compare(&lhs, &f.dom.counit(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::FrobeniusAlgebra as F;

    const TOL: f64 = 1e-9;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn trace_map(n: usize) -> CPStarMorphism {
        let p = F::pair_of_pants(n);
        CPStarMorphism::new(p.clone(), F::pair_of_pants(1), p.counit().reshape(&[1], &[n * n]).unwrap()).unwrap()
    }

    fn unital_embedding(n: usize) -> CPStarMorphism {
        let p = F::pair_of_pants(n);
        CPStarMorphism::new(F::pair_of_pants(1), p.clone(), p.unit().reshape(&[n * n], &[1]).unwrap()).unwrap()
    }

    #[test]
    fn identity_is_cp() {
        let v = check_cpstar(&CPStarMorphism::identity(&F::pair_of_pants(2)), TOL).unwrap();
        let w = v.witness().unwrap();
        assert!(w.residual < 1e-9);
        assert_eq!(w.ancilla_dim, 4);
    }

    #[test]
    fn transpose_is_not_cp() {
        let v = check_cpstar(&transpose_map(2), TOL).unwrap();
        let cert = v.certificate().unwrap();
        assert!((cert.eigenvalue + 1.0).abs() < 1e-9);
    }

    #[test]
    fn trace_and_unital_embedding() {
        let t = trace_map(2);
        assert!(check_cpstar(&t, TOL).unwrap().is_cp());
        assert!(is_normalised(&t, TOL).unwrap().pass);
        let u = dagger_morphism(&t);
        assert!(u.map.distance(&unital_embedding(2).map).unwrap() < 1e-15);
        assert!(check_cpstar(&u, TOL).unwrap().is_cp());
        let s = compose(&t, &u, TOL).unwrap();
        assert!((s.map.data()[0] - c(2.0)).norm() < 1e-12);
        assert!(check_cpstar(&s, TOL).unwrap().is_cp());
    }

    #[test]
    fn compose_checks_objects() {
        let t = trace_map(2);
        assert!(matches!(compose(&t, &t, TOL), Err(Error::ObjectMismatch(_))));
        let id = CPStarMorphism::identity(&t.dom);
        assert_eq!(compose(&t, &id, TOL).unwrap(), t);
    }

    #[test]
    fn tensor_with_trivial_identity_is_a_copy() {
        let t = transpose_map(2);
        let one = CPStarMorphism::identity(&F::pair_of_pants(1));
        let tt = tensor(&t, &one);
        assert_eq!(tt.map, t.map);
        assert!(!check_cpstar(&tensor(&CPStarMorphism::identity(&F::pair_of_pants(2)), &t), TOL).unwrap().is_cp());
    }

    #[test]
    fn dagger_is_an_involution() {
        let t = trace_map(3);
        assert_eq!(dagger_morphism(&dagger_morphism(&t)), t);
        let id = CPStarMorphism::identity(&F::pair_of_pants(2));
        assert_eq!(dagger_morphism(&id), id);
    }

    #[test]
    fn star_homomorphisms() {
        let p = F::pair_of_pants(2);
        let h = C::new(0.5f64.sqrt(), 0.0);
        let u = Tensor::matrix(2, 2, vec![h, h, h, -h]).unwrap();
        assert!(is_star_homomorphism(&pure_embed(&u), TOL).unwrap());
        let r = star_homomorphism_report(&transpose_map(2), TOL).unwrap();
        assert!(!r.multiplicative.pass && r.star_preserving.pass);
        let mut bare = CPStarMorphism::identity(&p);
        bare.dom = bare.dom.without_normaliser();
        assert!(matches!(is_star_homomorphism(&bare, TOL), Err(Error::MissingNormaliser)));
    }

    #[test]
    fn positive_elements() {
        let p = F::pair_of_pants(2);
        let state = |v: Vec<C>| CPStarMorphism::new(F::pair_of_pants(1), p.clone(), Tensor::matrix(4, 1, v).unwrap()).unwrap();
        assert!(is_positive_element(&unital_embedding(2), TOL).unwrap().positive);
        assert!(!is_positive_element(&state(vec![c(1.0), c(0.0), c(0.0), c(-1.0)]), TOL).unwrap().positive);
        let mixed = state(vec![c(0.5), c(0.0), c(0.0), c(0.5)]);
        assert!(is_positive_element(&mixed, TOL).unwrap().positive);
        assert!(check_cpstar(&mixed, TOL).unwrap().is_cp());
        assert!(matches!(is_positive_element(&transpose_map(2), TOL), Err(Error::NotTrivialDomain)));
    }

    #[test]
    fn doubling_is_not_normalised() {
        let p = F::pair_of_pants(2);
        let f = CPStarMorphism::new(p.clone(), p, Tensor::<C>::identity(4).scale(c(2.0))).unwrap();
        assert!(!is_normalised(&f, TOL).unwrap().pass);
        assert!(is_normalised(&CPStarMorphism::identity(&F::pair_of_pants(3)), TOL).unwrap().pass);
    }

    #[test]
    fn missing_normaliser_is_reported() {
        let p = F::pair_of_pants(2).without_normaliser();
        assert!(matches!(check_cpstar(&CPStarMorphism::identity(&p), TOL), Err(Error::MissingNormaliser)));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let p = F::pair_of_pants(2);
        assert!(CPStarMorphism::new(p.clone(), p, Tensor::identity(3)).is_err());
    }
}
