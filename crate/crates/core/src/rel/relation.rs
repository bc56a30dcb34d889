use super::{groupoid_to_algebra, Groupoid};
use crate::error::{Error, Result};
use crate::tensor::{contract, Tensor};

/// A relation `R ⊆ A × B` as a boolean `B ← A` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    entries: Tensor<bool>,
}

impl Relation {
    pub fn empty(source: usize, target: usize) -> Self {
        Relation { entries: Tensor::zeros(&[target], &[source]) }
    }

    pub fn from_pairs(source: usize, target: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Relation::empty(source, target);
        for &(a, b) in pairs {
            if a >= source || b >= target {
                return Err(Error::Shape(format!("pair ({a}, {b}) outside {source} x {target}")));
            }
            r.entries.set(b, a, true);
        }
        Ok(r)
    }

    pub fn from_tensor(entries: Tensor<bool>) -> Result<Self> {
        let (t, s) = (entries.rows(), entries.cols());
        Ok(Relation { entries: entries.reshape(&[t], &[s])? })
    }

    /// The graph of a function `a ↦ f[a]`.
    pub fn graph(f: &[usize], target: usize) -> Result<Self> {
        let pairs: Vec<_> = f.iter().copied().enumerate().collect();
        Relation::from_pairs(f.len(), target, &pairs)
    }

    pub fn source(&self) -> usize {
        self.entries.cols()
    }
    pub fn target(&self) -> usize {
        self.entries.rows()
    }
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.entries.at(b, a)
    }
    pub fn as_tensor(&self) -> &Tensor<bool> {
        &self.entries
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let t = self.target();
        (0..self.source() * t).map(move |i| (i / t, i % t)).filter(|&(a, b)| self.contains(a, b))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Relation) -> Result<Relation> {
        Ok(Relation { entries: other.entries.compose(&self.entries)? })
    }

    pub fn converse(&self) -> Relation {
        Relation { entries: self.entries.dagger() }
    }
}

fn check_sizes(r: &Relation, g: &Groupoid, h: &Groupoid) -> Result<()> {
    if r.source() != g.n_morphisms() || r.target() != h.n_morphisms() {
        return Err(Error::Shape(format!(
            "relation is {} -> {} but the groupoids have {} and {} morphisms",
            r.source(),
            r.target(),
            g.n_morphisms(),
            h.n_morphisms()
        )));
    }
    Ok(())
}

/// `(x, y) ∈ R` implies `(x⁻¹, y⁻¹) ∈ R` and `(id_dom x, id_dom y) ∈ R`.
pub fn respects_inverses(r: &Relation, g: &Groupoid, h: &Groupoid) -> Result<bool> {
    check_sizes(r, g, h)?;
    Ok(r.pairs().all(|(x, y)| {
        r.contains(g.inv(x), h.inv(y)) && r.contains(g.id(g.dom(x)), h.id(h.dom(y)))
    }))
}

/// The CP*-condition evaluated in Rel.
///
/// Any Kraus family must contain, for every `((b̄,b),(ā,a))` in
/// `action ∘ R ∘ coaction`, a relation joining `ā` to `b̄` and `a` to `b`.
/// The family of exactly those relations is therefore the largest candidate,
/// and the condition holds iff it reproduces the operator.
pub fn check_cpstar_rel(r: &Relation, g: &Groupoid, h: &Groupoid) -> Result<bool> {
    Ok(cpstar_rel_witness(r, g, h)?.is_some())
}

/// Kraus relations `X × B ← A`, legs `[X, B | A]`, when the condition holds.
pub fn cpstar_rel_witness(r: &Relation, g: &Groupoid, h: &Groupoid) -> Result<Option<Tensor<bool>>> {
    check_sizes(r, g, h)?;
    let a = groupoid_to_algebra(g)?;
    let b = groupoid_to_algebra(h)?;
    let (da, db) = (a.dim(), b.dim());
    let p = b.action().compose(&r.entries)?.compose(&a.coaction())?.reshape(&[db, db], &[da, da])?;
    let mut members = Vec::new();
    for bb in 0..db * db {
        for aa in 0..da * da {
            if p.at(bb, aa) {
                members.push((bb / db, bb % db, aa / da, aa % da));
            }
        }
    }
    let mut kraus = Tensor::<bool>::zeros(&[members.len().max(1), db], &[da]);
    for (x, &(b_bar, b_, a_bar, a_)) in members.iter().enumerate() {
        kraus.set(x * db + b_bar, a_bar, true);
        kraus.set(x * db + b_, a_, true);
    }
    let rebuilt = contract("xBA,xba->Bb|Aa", &[&kraus, &kraus])?;
    Ok((rebuilt == p).then_some(kraus))
}
