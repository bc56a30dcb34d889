//! Dagger Frobenius algebras in a category of matrices.
//!
//! The multiplication is stored as a `d ← d·d` tensor and the unit as a
//! `d ← 1` state. The comultiplication and counit are their daggers and are
//! never stored.

mod axioms;
mod normaliser;

pub use axioms::{
    actions_identity_residual, classify, is_central, normalisability_identity_residual,
    symmetric_trace_residual, verify_axioms, verify_coalgebra, AxiomReport, Check, CoalgebraReport,
};
pub use normaliser::{check_normaliser, solve_normaliser, NormaliserCheck};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{contract, Scalar, Tensor};

#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusAlgebra<S> {
    dim: usize,
    mult: Tensor<S>,
    unit: Tensor<S>,
    normaliser: Option<Tensor<S>>,
}

impl<S: Scalar> FrobeniusAlgebra<S> {
    /// Assemble an algebra from structure tensors. Only shapes are checked;
    /// the axioms are a matter for [`verify_axioms`].
    pub fn new(mult: Tensor<S>, unit: Tensor<S>, normaliser: Option<Tensor<S>>) -> Result<Self> {
        let d = unit.rows();
        if unit.cols() != 1 {
            return Err(Error::Shape(format!("unit must be a state, got {} columns", unit.cols())));
        }
        if mult.rows() != d || mult.cols() != d * d {
            return Err(Error::Shape(format!(
                "multiplication of a {d}-dimensional algebra must be {d} x {}, got {} x {}",
                d * d,
                mult.rows(),
                mult.cols()
            )));
        }
        let normaliser = match normaliser {
            Some(z) if z.rows() != d || z.cols() != d => {
                return Err(Error::Shape(format!("normaliser must be {d} x {d}")))
            }
            Some(z) => Some(z.reshape(&[d], &[d])?),
            None => None,
        };
        Ok(FrobeniusAlgebra {
            dim: d,
            mult: mult.reshape(&[d], &[d, d])?,
            unit: unit.reshape(&[d], &[])?,
            normaliser,
        })
    }

    /// Matrix algebra on `H* ⊗ H` for a `d`-dimensional `H`, multiplying by
    /// capping off the middle two legs. Basis element `e_ij` has index
    /// `i·d + j`, and `e_ij · e_kl = δ_jk e_il`.
    pub fn pair_of_pants(d: usize) -> Self {
        let id = Tensor::<S>::identity(d);
        let (cup, cap) = Tensor::<S>::cup_cap(d);
        let mult = contract("ai,jk,lm->al|ijkm", &[&id, &cap, &id])
            .expect("pants contraction is well formed")
            .reshape(&[d * d], &[d * d, d * d])
            .expect("pants shape");
        let unit = cup.reshape(&[d * d], &[]).expect("cup shape");
        let z = Tensor::<S>::identity(d * d).scale(S::dimension_normaliser(d));
        FrobeniusAlgebra { dim: d * d, mult, unit, normaliser: Some(z) }
    }

    /// The algebra copying the standard basis: `e_i · e_j = δ_ij e_i`.
    pub fn copying(d: usize) -> Self {
        let mult = Tensor::from_fn(&[d], &[d, d], |c, ab| {
            if ab / d == c && ab % d == c {
                S::one()
            } else {
                S::zero()
            }
        });
        let unit = Tensor::state(vec![S::one(); d]);
        FrobeniusAlgebra { dim: d, mult, unit, normaliser: Some(Tensor::identity(d)) }
    }

    /// Block-diagonal direct sum. The normaliser is kept when both summands
    /// carry one.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da + db;
        let mult = Tensor::from_fn(&[d], &[d, d], |c, ab| {
            let (a, b) = (ab / d, ab % d);
            if c < da && a < da && b < da {
                self.mult.at(c, a * da + b)
            } else if c >= da && a >= da && b >= da {
                other.mult.at(c - da, (a - da) * db + (b - da))
            } else {
                S::zero()
            }
        });
        let unit = Tensor::state(self.unit.data().iter().chain(other.unit.data()).copied().collect());
        let normaliser = match (&self.normaliser, &other.normaliser) {
            (Some(za), Some(zb)) => Some(Tensor::from_fn(&[d], &[d], |r, c| {
                if r < da && c < da {
                    za.at(r, c)
                } else if r >= da && c >= da {
                    zb.at(r - da, c - da)
                } else {
                    S::zero()
                }
            })),
            _ => None,
        };
        FrobeniusAlgebra { dim: d, mult, unit, normaliser }
    }

    /// Direct sum of several algebras; the empty sum is rejected.
    pub fn direct_sum_all(parts: &[Self]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::Shape("direct sum of no algebras".into()))?;
        Ok(rest.iter().fold(first.clone(), |acc, p| acc.direct_sum(p)))
    }

    /// Componentwise algebra on `A ⊗ B`, basis index `a·d_B + b`.
    pub fn tensor_algebra(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mult = self
            .mult
            .kron(&other.mult)
            .permute(&[0, 1, 2, 4, 3, 5], 2)
            .and_then(|t| t.reshape(&[d], &[d, d]))
            .expect("tensor algebra shape");
        let unit = self.unit.kron(&other.unit).reshape(&[d], &[]).expect("unit shape");
        let normaliser = match (&self.normaliser, &other.normaliser) {
            (Some(za), Some(zb)) => Some(za.kron(zb).reshape(&[d], &[d]).expect("normaliser shape")),
            _ => None,
        };
        FrobeniusAlgebra { dim: d, mult, unit, normaliser }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn mult(&self) -> &Tensor<S> {
        &self.mult
    }
    pub fn unit(&self) -> &Tensor<S> {
        &self.unit
    }
    pub fn normaliser(&self) -> Option<&Tensor<S>> {
        self.normaliser.as_ref()
    }

    /// Same structure with `z` attached as normaliser (not checked).
    pub fn with_normaliser(&self, z: Tensor<S>) -> Result<Self> {
        Self::new(self.mult.clone(), self.unit.clone(), Some(z))
    }

    pub fn without_normaliser(&self) -> Self {
        FrobeniusAlgebra { normaliser: None, ..self.clone() }
    }

    pub fn comult(&self) -> Tensor<S> {
        self.mult.dagger()
    }

    pub fn counit(&self) -> Tensor<S> {
        self.unit.dagger()
    }

    /// `comult ∘ unit`, a state of `A ⊗ A`.
    pub fn frob_cup(&self) -> Tensor<S> {
        self.comult().compose(&self.unit).expect("cup shape")
    }

    /// `counit ∘ mult`, an effect on `A ⊗ A`.
    pub fn frob_cap(&self) -> Tensor<S> {
        self.counit().compose(&self.mult).expect("cap shape")
    }

    /// The effect `a ↦ Tr(L_a)`: multiplication with its output traced
    /// against its second input.
    pub fn loop_left(&self) -> Tensor<S> {
        self.mult.partial_trace(0, 1).expect("square legs")
    }

    /// The effect `a ↦ Tr(R_a)`.
    pub fn loop_right(&self) -> Tensor<S> {
        self.mult.partial_trace(0, 0).expect("square legs")
    }

    /// `L_x = mult ∘ (x ⊗ id)`.
    pub fn left_mult(&self, x: &Tensor<S>) -> Result<Tensor<S>> {
        self.check_element(x)?;
        contract("cab,a->c|b", &[&self.mult, x])
    }

    /// `R_x = mult ∘ (id ⊗ x)`.
    pub fn right_mult(&self, x: &Tensor<S>) -> Result<Tensor<S>> {
        self.check_element(x)?;
        contract("cab,b->c|a", &[&self.mult, x])
    }

    /// `mult ∘ (x ⊗ y)`.
    pub fn product(&self, x: &Tensor<S>, y: &Tensor<S>) -> Result<Tensor<S>> {
        self.check_element(x)?;
        self.check_element(y)?;
        contract("cab,a,b->c", &[&self.mult, x, y])
    }

    /// The involution `x ↦ (x† ⊗ id) ∘ frob_cup`, antilinear.
    pub fn star(&self, x: &Tensor<S>) -> Result<Tensor<S>> {
        self.check_element(x)?;
        let cup = self.frob_cup().reshape(&[self.dim, self.dim], &[])?;
        contract("ab,a->b", &[&cup, &x.conj()])
    }

    /// Map `A* ⊗ A → A`, sending `x̄ ⊗ y` to `star(x)·y`.
    pub fn coaction(&self) -> Tensor<S> {
        let d = self.dim;
        Tensor::from_fn(&[d], &[d, d], |q, ij| {
            let (i, j) = (ij / d, ij % d);
            self.mult.at(j, i * d + q).conj()
        })
    }

    /// Dagger of [`Self::coaction`], a map `A → A* ⊗ A`.
    pub fn action(&self) -> Tensor<S> {
        self.coaction().dagger()
    }

    /// Transport the structure along an invertible `u` whose inverse is `u†`.
    pub fn transport(&self, u: &Tensor<S>) -> Result<Self> {
        let d = self.dim;
        if u.rows() != d || u.cols() != d {
            return Err(Error::Shape(format!("transport needs a {d} x {d} map")));
        }
        let u = u.reshape(&[d], &[d])?;
        let ud = u.dagger();
        let mult = contract("cx,xyz,ya,zb->c|ab", &[&u, &self.mult, &ud, &ud])?;
        let unit = u.compose(&self.unit)?;
        let normaliser = match &self.normaliser {
            Some(z) => Some(u.compose(z)?.compose(&ud)?),
            None => None,
        };
        Ok(FrobeniusAlgebra { dim: d, mult, unit, normaliser })
    }

    /// Same multiplication and unit up to `tol`.
    pub fn approx_same(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self.mult.approx_eq(&other.mult, tol)
            && self.unit.approx_eq(&other.unit, tol)
    }

    fn check_element(&self, x: &Tensor<S>) -> Result<()> {
        if x.rows() != self.dim || x.cols() != 1 {
            return Err(Error::Shape(format!(
                "expected an element of a {}-dimensional algebra, got {} x {}",
                self.dim,
                x.rows(),
                x.cols()
            )));
        }
        Ok(())
    }
}

impl FrobeniusAlgebra<Complex64> {
    /// The commutative algebra whose copyable points are `vectors`.
    ///
    /// Each vector `p` is copied, `comult(p) = p ⊗ p`, so `p·p = ‖p‖² p`.
    pub fn from_orthogonal_basis(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let d = vectors.len();
        if d == 0 {
            return Err(Error::NotABasis("no vectors".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::NotABasis(format!("{d} vectors of length {}", v.len())));
        }
        let norms: Vec<f64> =
            vectors.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>()).collect();
        if norms.iter().any(|&n| n <= 1e-24) {
            return Err(Error::NotABasis("zero vector".into()));
        }
        for i in 0..d {
            for j in 0..i {
                let ip: Complex64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a.conj() * b).sum();
                if ip.norm() > 1e-9 * (norms[i] * norms[j]).sqrt() {
                    return Err(Error::NotABasis(format!("vectors {j} and {i} are not orthogonal")));
                }
            }
        }
        // comult = Σ (p ⊗ p) p̃†, with p̃ = p / ‖p‖² the dual basis.
        let mut comult = Tensor::<Complex64>::zeros(&[d, d], &[d]);
        let mut unit = vec![Complex64::new(0.0, 0.0); d];
        let mut z = Tensor::<Complex64>::zeros(&[d], &[d]);
        for (p, &n) in vectors.iter().zip(&norms) {
            for a in 0..d {
                let dual = p[a].conj() / n;
                unit[a] += p[a] / n;
                for b in 0..d {
                    for c in 0..d {
                        let v = comult.at(b * d + c, a) + p[b] * p[c] * dual;
                        comult.set(b * d + c, a, v);
                    }
                    z.set(b, a, z.at(b, a) + p[b] * dual / n.sqrt());
                }
            }
        }
        Ok(FrobeniusAlgebra { dim: d, mult: comult.dagger(), unit: Tensor::state(unit), normaliser: Some(z) })
    }

    /// Direct sum of matrix algebras of the given sizes, in order.
    pub fn block_model(sizes: &[usize]) -> Result<Self> {
        let parts: Vec<_> = sizes.iter().map(|&n| Self::pair_of_pants(n)).collect();
        Self::direct_sum_all(&parts)
    }
}
