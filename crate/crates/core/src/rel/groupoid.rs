use crate::error::{Error, Result};
use crate::frobenius::{verify_axioms, FrobeniusAlgebra};
use crate::tensor::Tensor;

/// A finite groupoid stored as explicit tables over morphisms `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Groupoid {
    n_objects: usize,
    dom: Vec<usize>,
    cod: Vec<usize>,
    /// `comp[g * n + f] = g ∘ f` where defined.
    comp: Vec<Option<usize>>,
    inv: Vec<usize>,
    ids: Vec<usize>,
}

impl Groupoid {
    /// Build from tables, rejecting dangling references. The groupoid laws
    /// are a matter for [`verify_groupoid`].
    pub fn new(
        n_objects: usize,
        dom: Vec<usize>,
        cod: Vec<usize>,
        comp: Vec<Option<usize>>,
        inv: Vec<usize>,
        ids: Vec<usize>,
    ) -> Result<Self> {
        let n = dom.len();
        let bad = |what: &str| Err(Error::MalformedGroupoid(what.to_string()));
        if cod.len() != n || inv.len() != n || comp.len() != n * n {
            return bad("table lengths disagree with the number of morphisms");
        }
        if ids.len() != n_objects {
            return bad("need exactly one identity per object");
        }
        if dom.iter().chain(&cod).any(|&o| o >= n_objects) {
            return bad("dom or cod names a missing object");
        }
        if inv.iter().chain(&ids).chain(comp.iter().flatten()).any(|&m| m >= n) {
            return bad("a table names a missing morphism");
        }
        Ok(Groupoid { n_objects, dom, cod, comp, inv, ids })
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }
    pub fn n_morphisms(&self) -> usize {
        self.dom.len()
    }
    pub fn dom(&self, f: usize) -> usize {
        self.dom[f]
    }
    pub fn cod(&self, f: usize) -> usize {
        self.cod[f]
    }
    pub fn inv(&self, f: usize) -> usize {
        self.inv[f]
    }
    pub fn id(&self, object: usize) -> usize {
        self.ids[object]
    }
    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    /// `g ∘ f`.
    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.n_morphisms() + f]
    }

    /// `n` objects and only identities.
    pub fn discrete(n: usize) -> Self {
        let objects: Vec<usize> = (0..n).collect();
        let comp = (0..n * n).map(|i| (i / n == i % n).then_some(i % n)).collect();
        Groupoid::new(n, objects.clone(), objects.clone(), comp, objects.clone(), objects).expect("well formed")
    }

    /// The cyclic group `ℤ_k` on one object, morphism `i` being `i mod k`.
    pub fn cyclic(k: usize) -> Self {
        let comp = (0..k * k).map(|i| Some((i / k + i % k) % k)).collect();
        let inv = (0..k).map(|f| (k - f) % k).collect();
        Groupoid::new(1, vec![0; k], vec![0; k], comp, inv, vec![0]).expect("well formed")
    }

    /// One morphism `(a₂, a₁): a₁ → a₂` between any two objects, with index
    /// `a₂·n + a₁`.
    pub fn indiscrete(n: usize) -> Self {
        let m = n * n;
        let dom = (0..m).map(|f| f % n).collect();
        let cod = (0..m).map(|f| f / n).collect();
        let comp = (0..m * m)
            .map(|i| {
                let (g, f) = (i / m, i % m);
                (g % n == f / n).then_some((g / n) * n + f % n)
            })
            .collect();
        let inv = (0..m).map(|f| (f % n) * n + f / n).collect();
        let ids = (0..n).map(|a| a * n + a).collect();
        Groupoid::new(n, dom, cod, comp, inv, ids).expect("well formed")
    }

    /// Disjoint union; morphisms and objects of `other` come after those of
    /// `self`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n_morphisms(), other.n_morphisms());
        let n = n1 + n2;
        let o1 = self.n_objects;
        let mut comp = vec![None; n * n];
        for g in 0..n1 {
            for f in 0..n1 {
                comp[g * n + f] = self.comp(g, f);
            }
        }
        for g in 0..n2 {
            for f in 0..n2 {
                comp[(n1 + g) * n + n1 + f] = other.comp(g, f).map(|h| h + n1);
            }
        }
        let cat = |a: &[usize], b: &[usize], shift: usize| -> Vec<usize> {
            a.iter().copied().chain(b.iter().map(|x| x + shift)).collect()
        };
        Groupoid::new(
            o1 + other.n_objects,
            cat(&self.dom, &other.dom, o1),
            cat(&self.cod, &other.cod, o1),
            comp,
            cat(&self.inv, &other.inv, n1),
            cat(&self.ids, &other.ids, n1),
        )
        .expect("well formed")
    }
}

/// Every violated groupoid law, described; empty when `g` is a groupoid.
pub fn verify_groupoid(g: &Groupoid) -> Vec<String> {
    let n = g.n_morphisms();
    let mut out = Vec::new();
    for (o, &e) in g.ids.iter().enumerate() {
        if g.dom[e] != o || g.cod[e] != o {
            out.push(format!("identity {e} of object {o} is not an endomorphism of it"));
        }
    }
    for h in 0..n {
        for f in 0..n {
            let composable = g.dom[h] == g.cod[f];
            match g.comp(h, f) {
                Some(_) if !composable => out.push(format!("{h} ∘ {f} defined but not composable")),
                None if composable => out.push(format!("{h} ∘ {f} composable but undefined")),
                Some(x) if g.dom[x] != g.dom[f] || g.cod[x] != g.cod[h] => {
                    out.push(format!("{h} ∘ {f} = {x} has the wrong endpoints"))
                }
                _ => {}
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in 0..n {
        if g.comp(g.ids[g.cod[f]], f) != Some(f) || g.comp(f, g.ids[g.dom[f]]) != Some(f) {
            out.push(format!("identities are not neutral on {f}"));
        }
        let i = g.inv[f];
        if g.comp(i, f) != Some(g.ids[g.dom[f]]) || g.comp(f, i) != Some(g.ids[g.cod[f]]) {
            out.push(format!("{i} is not an inverse of {f}"));
        }
    }
    for h in 0..n {
        for k in 0..n {
            for f in 0..n {
                let left = g.comp(h, k).and_then(|hk| g.comp(hk, f));
                let right = g.comp(k, f).and_then(|kf| g.comp(h, kf));
                if left != right {
                    out.push(format!("composition of {h}, {k}, {f} is not associative"));
                }
            }
        }
    }
    out
}

/// The Frobenius algebra on the morphism set: `g ⊗ f ↦ g ∘ f`, unit the sum
/// of identities, normaliser the identity.
pub fn groupoid_to_algebra(g: &Groupoid) -> Result<FrobeniusAlgebra<bool>> {
    if let Some(v) = verify_groupoid(g).into_iter().next() {
        return Err(Error::InvalidGroupoid(v));
    }
    let n = g.n_morphisms();
    let mult = Tensor::from_fn(&[n], &[n, n], |h, gf| g.comp(gf / n, gf % n) == Some(h));
    let unit = Tensor::from_fn(&[n], &[], |e, _| g.ids.contains(&e));
    FrobeniusAlgebra::new(mult, unit, Some(Tensor::identity(n)))
}

/// Largest vertex group [`canonical_form`] accepts.
pub const MAX_VERTEX_GROUP: usize = 8;

/// Complete isomorphism invariant: one `objects*order:table` entry per
/// connected component, sorted, where `table` is the least Cayley table of
/// the vertex group over relabellings fixing the identity.
pub fn canonical_form(g: &Groupoid) -> Result<String> {
    if let Some(v) = verify_groupoid(g).into_iter().next() {
        return Err(Error::InvalidGroupoid(v));
    }
    // every object is connected to the least object it has a morphism from
    let root: Vec<usize> =
        (0..g.n_objects).map(|o| (0..g.n_morphisms()).filter(|&f| g.cod[f] == o).map(|f| g.dom[f]).min().unwrap_or(o)).collect();
    let mut parts: Vec<String> = Vec::new();
    for x in (0..g.n_objects).filter(|&o| root[o] == o) {
        let objects = root.iter().filter(|&&r| r == x).count();
        let e = g.ids[x];
        let mut group: Vec<usize> = vec![e];
        group.extend((0..g.n_morphisms()).filter(|&f| f != e && g.dom[f] == x && g.cod[f] == x));
        let m = group.len();
        if m > MAX_VERTEX_GROUP {
            return Err(Error::SizeBound { got: m, max: MAX_VERTEX_GROUP });
        }
        let index = |f: usize| group.iter().position(|&h| h == f).expect("closed under composition");
        let table: Vec<usize> =
            (0..m * m).map(|i| index(g.comp(group[i / m], group[i % m]).expect("endomorphisms compose"))).collect();
        let best = super::enumerate::permutations(m - 1)
            .into_iter()
            .map(|p| {
                let label = |i: usize| if i == 0 { 0 } else { p[i - 1] + 1 };
                let mut t = vec![0u8; m * m];
                for a in 0..m {
                    for b in 0..m {
                        t[label(a) * m + label(b)] = label(table[a * m + b]) as u8;
                    }
                }
                t
            })
            .min()
            .unwrap_or_default();
        let digits: String = best.iter().map(|d| char::from_digit(u32::from(*d), 16).expect("order at most 8")).collect();
        parts.push(format!("{objects}*{m}:{digits}"));
    }
    parts.sort();
    Ok(parts.join("+"))
}

fn unique(mut it: impl Iterator<Item = usize>, what: impl Fn() -> String) -> Result<usize> {
    match (it.next(), it.next()) {
        (Some(x), None) => Ok(x),
        _ => Err(Error::NotAGroupoidAlgebra(what())),
    }
}

/// Read a groupoid off a normalisable boolean Frobenius algebra.
pub fn algebra_to_groupoid(a: &FrobeniusAlgebra<bool>) -> Result<Groupoid> {
    let report = verify_axioms(a, 0.0)?;
    if let Some(name) = report.first_failure() {
        return Err(Error::NotAGroupoidAlgebra(format!("{name} fails")));
    }
    // In Rel the only positive invertible central relation is the identity,
    // so normalisability means the loop equals the counit.
    if a.loop_left() != a.counit() {
        return Err(Error::NotAGroupoidAlgebra("not normalisable".into()));
    }
    let n = a.dim();
    let m = a.mult();
    let ids: Vec<usize> = (0..n).filter(|&e| a.unit().at(e, 0)).collect();
    let mut comp = vec![None; n * n];
    for g in 0..n {
        for f in 0..n {
            let mut out = (0..n).filter(|&h| m.at(h, g * n + f));
            comp[g * n + f] = out.next();
            if out.next().is_some() {
                return Err(Error::NotAGroupoidAlgebra(format!("{g} · {f} is not a single element")));
            }
        }
    }
    let at = |g: usize, f: usize| comp[g * n + f];
    let mut dom = Vec::with_capacity(n);
    let mut cod = Vec::with_capacity(n);
    for f in 0..n {
        dom.push(unique((0..ids.len()).filter(|&o| at(f, ids[o]) == Some(f)), || format!("{f} has no unique source"))?);
        cod.push(unique((0..ids.len()).filter(|&o| at(ids[o], f) == Some(f)), || format!("{f} has no unique target"))?);
    }
    let mut inv = Vec::with_capacity(n);
    for f in 0..n {
        inv.push(unique((0..n).filter(|&h| at(h, f) == Some(ids[dom[f]])), || format!("{f} has no unique inverse"))?);
    }
    let g = Groupoid::new(ids.len(), dom, cod, comp, inv, ids).map_err(|e| Error::NotAGroupoidAlgebra(e.to_string()))?;
    match verify_groupoid(&g).into_iter().next() {
        Some(v) => Err(Error::NotAGroupoidAlgebra(v)),
        None => Ok(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::FrobeniusAlgebra as F;

    fn not_a_group() -> Groupoid {
        // {e, a, z} with a·a = z and z absorbing: a monoid, not a group.
        let table = [0, 1, 2, 1, 2, 2, 2, 2, 2];
        Groupoid::new(1, vec![0; 3], vec![0; 3], table.iter().map(|&x| Some(x)).collect(), vec![0, 1, 2], vec![0])
            .unwrap()
    }

    #[test]
    fn canonical_form_separates_exactly_the_algebra_classes() {
        use crate::rel::enumerate::{canonical_form as table_form, enumerate_groupoids};
        let all: Vec<Groupoid> = (1..=4).flat_map(|n| enumerate_groupoids(n).unwrap()).collect();
        for g in &all {
            for h in &all {
                let same_table = g.n_morphisms() == h.n_morphisms()
                    && table_form(&groupoid_to_algebra(g).unwrap()).unwrap()
                        == table_form(&groupoid_to_algebra(h).unwrap()).unwrap();
                assert_eq!(canonical_form(g).unwrap() == canonical_form(h).unwrap(), same_table);
            }
        }
    }

    #[test]
    fn canonical_form_examples() {
        let klein = Groupoid::new(
            1,
            vec![0; 4],
            vec![0; 4],
            (0..16).map(|i| Some((i / 4) ^ (i % 4))).collect(),
            vec![0, 1, 2, 3],
            vec![0],
        )
        .unwrap();
        assert_ne!(canonical_form(&klein).unwrap(), canonical_form(&Groupoid::cyclic(4)).unwrap());
        assert_eq!(canonical_form(&Groupoid::indiscrete(3)).unwrap(), "3*1:0");
        assert_eq!(canonical_form(&Groupoid::discrete(2)).unwrap(), "1*1:0+1*1:0");
        let u = Groupoid::cyclic(2).disjoint_union(&Groupoid::indiscrete(2));
        let v = Groupoid::indiscrete(2).disjoint_union(&Groupoid::cyclic(2));
        assert_eq!(canonical_form(&u).unwrap(), canonical_form(&v).unwrap());
        assert!(matches!(canonical_form(&not_a_group()), Err(Error::InvalidGroupoid(_))));
        assert!(matches!(canonical_form(&Groupoid::cyclic(9)), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn constructors_are_groupoids() {
        for g in [Groupoid::cyclic(2), Groupoid::cyclic(3), Groupoid::discrete(3), Groupoid::indiscrete(3)] {
            assert!(verify_groupoid(&g).is_empty(), "{:?}", verify_groupoid(&g));
        }
        let u = Groupoid::cyclic(2).disjoint_union(&Groupoid::indiscrete(2));
        assert_eq!((u.n_objects(), u.n_morphisms()), (3, 6));
        assert!(verify_groupoid(&u).is_empty());
    }

    #[test]
    fn monoid_without_inverses_is_rejected() {
        let v = verify_groupoid(&not_a_group());
        assert!(v.iter().any(|s| s.contains("inverse")));
        assert!(matches!(groupoid_to_algebra(&not_a_group()), Err(Error::InvalidGroupoid(_))));
    }

    #[test]
    fn dangling_references_are_malformed() {
        let r = Groupoid::new(1, vec![0], vec![1], vec![Some(0)], vec![0], vec![0]);
        assert!(matches!(r, Err(Error::MalformedGroupoid(_))));
    }

    #[test]
    fn z2_table() {
        let a = groupoid_to_algebra(&Groupoid::cyclic(2)).unwrap();
        let m = a.mult();
        // (e,e)→e, (e,g)→g, (g,e)→g, (g,g)→e
        for (g, f, h) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)] {
            assert!(m.at(h, g * 2 + f) && !m.at(1 - h, g * 2 + f));
        }
    }

    #[test]
    fn indiscrete_is_boolean_pants() {
        for n in 1..=4 {
            assert_eq!(groupoid_to_algebra(&Groupoid::indiscrete(n)).unwrap(), F::<bool>::pair_of_pants(n));
        }
    }

    #[test]
    fn discrete_is_copying() {
        assert_eq!(groupoid_to_algebra(&Groupoid::discrete(3)).unwrap(), F::<bool>::copying(3));
    }

    #[test]
    fn round_trips() {
        for g in [Groupoid::cyclic(2), Groupoid::indiscrete(3), Groupoid::cyclic(3).disjoint_union(&Groupoid::discrete(1))] {
            let back = algebra_to_groupoid(&groupoid_to_algebra(&g).unwrap()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn dual_numbers_break_the_frobenius_law() {
        // {e, a} with a·a = 0
        let mult = Tensor::from_fn(&[2], &[2, 2], |h, gf| matches!((gf / 2, gf % 2, h), (0, 0, 0) | (0, 1, 1) | (1, 0, 1)));
        let unit = Tensor::from_fn(&[2], &[], |e, _| e == 0);
        let a = F::new(mult, unit, None).unwrap();
        match algebra_to_groupoid(&a) {
            Err(Error::NotAGroupoidAlgebra(msg)) => assert!(msg.contains("frobenius_law")),
            other => panic!("{other:?}"),
        }
    }
}
