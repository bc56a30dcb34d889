use super::FrobeniusAlgebra;
use crate::error::{Error, Result};
use crate::tensor::{contract, Scalar, Tensor};

/// Outcome of one equation: pass flag and largest entrywise deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    pub fn compare<S: Scalar>(lhs: &Tensor<S>, rhs: &Tensor<S>, tol: f64) -> Result<Self> {
        let residual = lhs.distance(rhs)?;
        Ok(Check::from_residual::<S>(residual, tol))
    }

    pub fn from_residual<S: Scalar>(residual: f64, tol: f64) -> Self {
        let pass = if S::EXACT { residual == 0.0 } else { residual <= tol };
        Check { pass, residual }
    }

    fn worst(self, other: Check) -> Check {
        Check { pass: self.pass && other.pass, residual: self.residual.max(other.residual) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub associative: Check,
    pub unital: Check,
    pub frobenius_law: Check,
    pub symmetric: Check,
    pub commutative: Check,
    pub special: Check,
    pub frobenius_snake: Check,
}

impl AxiomReport {
    /// Associative, unital and satisfying the Frobenius law.
    pub fn is_frobenius(&self) -> bool {
        self.associative.pass && self.unital.pass && self.frobenius_law.pass
    }

    /// Special and symmetric.
    pub fn is_normal(&self) -> bool {
        self.special.pass && self.symmetric.pass
    }

    /// All checks by name, in a fixed order.
    pub fn checks(&self) -> [(&'static str, Check); 7] {
        [
            ("associative", self.associative),
            ("unital", self.unital),
            ("frobenius_law", self.frobenius_law),
            ("frobenius_snake", self.frobenius_snake),
            ("symmetric", self.symmetric),
            ("commutative", self.commutative),
            ("special", self.special),
        ]
    }

    /// Name of the first failing defining axiom, if any.
    pub fn first_failure(&self) -> Option<&'static str> {
        self.checks()[..4].iter().find(|(_, c)| !c.pass).map(|(n, _)| *n)
    }
}

/// Evaluate every defining equation and classification property.
pub fn verify_axioms<S: Scalar>(a: &FrobeniusAlgebra<S>, tol: f64) -> Result<AxiomReport> {
    let d = a.dim();
    let m = a.mult();
    let u = a.unit();
    let delta = a.comult();
    let id = Tensor::<S>::identity(d);

    let assoc_l = contract("cxk,xab->c|abk", &[m, m])?;
    let assoc_r = contract("cax,xbk->c|abk", &[m, m])?;
    let associative = Check::compare(&assoc_l, &assoc_r, tol)?;

    let left_unit = contract("cea,e->c|a", &[m, u])?;
    let right_unit = contract("cae,e->c|a", &[m, u])?;
    let unital = Check::compare(&left_unit, &id, tol)?.worst(Check::compare(&right_unit, &id, tol)?);

    let middle = contract("pqc,cab->pq|ab", &[&delta, m])?;
    let right_side = contract("pax,xqb->pq|ab", &[m, &delta])?;
    let left_side = contract("pxa,qxb->pq|ab", &[&delta, m])?;
    let frobenius_law =
        Check::compare(&right_side, &middle, tol)?.worst(Check::compare(&left_side, &middle, tol)?);

    let cup = a.frob_cup().reshape(&[d, d], &[])?;
    let cap = a.frob_cap().reshape(&[], &[d, d])?;
    let snake_l = contract("ax,xc->c|a", &[&cap, &cup])?;
    let snake_r = contract("cx,xa->c|a", &[&cup, &cap])?;
    let frobenius_snake =
        Check::compare(&snake_l, &id, tol)?.worst(Check::compare(&snake_r, &id, tol)?);

    let cap_swapped = contract("ab->|ba", &[&cap])?;
    let symmetric = Check::compare(&cap, &cap_swapped, tol)?;

    let m_swapped = contract("cab->c|ba", &[m])?;
    let commutative = Check::compare(m, &m_swapped, tol)?;

    let special = Check::compare(&m.compose(&delta)?, &id, tol)?;

    Ok(AxiomReport { associative, unital, frobenius_law, symmetric, commutative, special, frobenius_snake })
}

/// [`verify_axioms`], failing unless the defining axioms hold.
pub fn classify<S: Scalar>(a: &FrobeniusAlgebra<S>, tol: f64) -> Result<AxiomReport> {
    let report = verify_axioms(a, tol)?;
    match report.first_failure() {
        Some(name) => Err(Error::NotAnAlgebra(format!("{name} fails"))),
        None => Ok(report),
    }
}

/// Whether `m` commutes with the multiplication on both sides:
/// `mult ∘ (m ⊗ id) = mult ∘ (id ⊗ m) = m ∘ mult`.
pub fn is_central<S: Scalar>(a: &FrobeniusAlgebra<S>, m: &Tensor<S>, tol: f64) -> Result<bool> {
    Ok(central_residual(a, m, tol)?.pass)
}

pub(crate) fn central_residual<S: Scalar>(
    a: &FrobeniusAlgebra<S>,
    m: &Tensor<S>,
    tol: f64,
) -> Result<Check> {
    let d = a.dim();
    if m.rows() != d || m.cols() != d {
        return Err(Error::Shape(format!("central map must be {d} x {d}")));
    }
    let m = m.reshape(&[d], &[d])?;
    let after = m.compose(a.mult())?;
    let left = contract("cxb,xa->c|ab", &[a.mult(), &m])?;
    let right = contract("cax,xb->c|ab", &[a.mult(), &m])?;
    Ok(Check::compare(&left, &after, tol)?.worst(Check::compare(&right, &after, tol)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoalgebraReport {
    pub coassociative: Check,
    pub counital: Check,
}

/// Coassociativity and counitality of the comultiplication.
pub fn verify_coalgebra<S: Scalar>(a: &FrobeniusAlgebra<S>, tol: f64) -> Result<CoalgebraReport> {
    let d = a.dim();
    let delta = a.comult();
    let eps = a.counit();
    let id = Tensor::<S>::identity(d);
    let l = contract("abx,xkc->abk|c", &[&delta, &delta])?;
    let r = contract("axc,bkx->abk|c", &[&delta, &delta])?;
    let coassociative = Check::compare(&l, &r, tol)?;
    let cl = contract("e,eac->a|c", &[&eps, &delta])?;
    let cr = contract("e,aec->a|c", &[&eps, &delta])?;
    let counital = Check::compare(&cl, &id, tol)?.worst(Check::compare(&cr, &id, tol)?);
    Ok(CoalgebraReport { coassociative, counital })
}

/// Deviation between the two partial traces of the multiplication.
pub fn symmetric_trace_residual<S: Scalar>(a: &FrobeniusAlgebra<S>) -> Result<f64> {
    a.loop_left().distance(&a.loop_right())
}

/// Deviation in `action ∘ coaction = Σ_x conj(δ_x) ⊗ δ_x`, where `δ_x` are
/// the components of the comultiplication. Holds for symmetric algebras.
pub fn actions_identity_residual<S: Scalar>(a: &FrobeniusAlgebra<S>) -> Result<f64> {
    let lhs = a.action().compose(&a.coaction())?;
    let g = a.comult();
    let rhs = contract("xBA,xba->Bb|Aa", &[&g.conj(), &g])?;
    lhs.distance(&rhs)
}

/// Deviation in `z² ∘ coaction ∘ action = id`. Needs a normaliser.
pub fn normalisability_identity_residual<S: Scalar>(a: &FrobeniusAlgebra<S>) -> Result<f64> {
    let z = a.normaliser().ok_or(Error::MissingNormaliser)?;
    let lhs = z.compose(z)?.compose(&a.coaction())?.compose(&a.action())?;
    lhs.distance(&Tensor::identity(a.dim()))
}
