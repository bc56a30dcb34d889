//! Exhaustive search over small carriers.
//!
//! Two independent routes: [`enumerate_frobenius_rel`] searches boolean
//! multiplication tables and keeps normalisable Frobenius algebras, while
//! [`enumerate_groupoids`] fills in groupoid composition tables directly.
//! Both produce labelled structures on the carrier `0..n`.

use rayon::prelude::*;

use super::{algebra_to_groupoid, verify_groupoid, Groupoid};
use crate::error::{Error, Result};
use crate::frobenius::{verify_axioms, FrobeniusAlgebra};
use crate::tensor::Tensor;

pub const MAX_CARRIER: usize = 4;

/// Products as bitmasks: `prod[a * n + b]` is the set `a · b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Table {
    n: usize,
    units: u8,
    prod: Vec<u8>,
}

impl Table {
    fn to_algebra(&self) -> FrobeniusAlgebra<bool> {
        let n = self.n;
        let mult = Tensor::from_fn(&[n], &[n, n], |c, ab| self.prod[ab] >> c & 1 == 1);
        let unit = Tensor::from_fn(&[n], &[], |e, _| self.units >> e & 1 == 1);
        FrobeniusAlgebra::new(mult, unit, Some(Tensor::identity(n))).expect("shapes")
    }

    fn relabel(&self, perm: &[usize]) -> Vec<u8> {
        let n = self.n;
        let map = |set: u8| (0..n).filter(|&i| set >> i & 1 == 1).fold(0u8, |acc, i| acc | 1 << perm[i]);
        let mut prod = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                prod[perm[a] * n + perm[b]] = map(self.prod[a * n + b]);
            }
        }
        std::iter::once(map(self.units)).chain(prod).collect()
    }

    /// Lexicographically least encoding over all relabellings.
    fn canonical(&self) -> Vec<u8> {
        permutations(self.n).iter().map(|p| self.relabel(p)).min().unwrap_or_default()
    }
}

pub(super) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// A surviving structure and what it converts to.
#[derive(Debug, Clone)]
pub struct EnumeratedStructure {
    pub algebra: FrobeniusAlgebra<bool>,
    /// `None` would be a counterexample to the groupoid correspondence.
    pub groupoid: Option<Groupoid>,
    /// Least relabelled table, shared exactly by isomorphic structures.
    pub canonical: Vec<u8>,
}

fn set_product(prod: &[u8], n: usize, xs: u8, y: usize) -> u8 {
    (0..n).filter(|&x| xs >> x & 1 == 1).fold(0, |acc, x| acc | prod[x * n + y])
}

fn product_set(prod: &[u8], n: usize, x: usize, ys: u8) -> u8 {
    (0..n).filter(|&y| ys >> y & 1 == 1).fold(0, |acc, y| acc | prod[x * n + y])
}

/// Associativity on every triple whose products are already assigned.
fn associative_so_far(prod: &[u8], assigned: &[bool], n: usize) -> bool {
    let known = |a: usize, set: u8, right: bool| {
        (0..n).filter(|&x| set >> x & 1 == 1).all(|x| if right { assigned[x * n + a] } else { assigned[a * n + x] })
    };
    for a in 0..n {
        for b in 0..n {
            if !assigned[a * n + b] {
                continue;
            }
            for c in 0..n {
                if !assigned[b * n + c] {
                    continue;
                }
                let (ab, bc) = (prod[a * n + b], prod[b * n + c]);
                if known(c, ab, true) && known(a, bc, false) && set_product(prod, n, ab, c) != product_set(prod, n, a, bc) {
                    return false;
                }
            }
        }
    }
    true
}

fn search(n: usize, units: u8, allowed: &[u8], slot: usize, prod: &mut Vec<u8>, assigned: &mut Vec<bool>, out: &mut Vec<Table>) {
    if slot == n * n {
        out.push(Table { n, units, prod: prod.clone() });
        return;
    }
    let mask = allowed[slot];
    let mut sub = mask;
    loop {
        prod[slot] = sub;
        assigned[slot] = true;
        if associative_so_far(prod, assigned, n) {
            search(n, units, allowed, slot + 1, prod, assigned, out);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    assigned[slot] = false;
    prod[slot] = 0;
}

/// Cheap exact necessary conditions before the full axiom check.
fn unital_and_normalisable(t: &Table) -> bool {
    let n = t.n;
    let is_unit = |e: usize| t.units >> e & 1 == 1;
    (0..n).all(|a| {
        let left = (0..n).filter(|&e| is_unit(e)).fold(0, |acc, e| acc | t.prod[e * n + a]);
        let right = (0..n).filter(|&e| is_unit(e)).fold(0, |acc, e| acc | t.prod[a * n + e]);
        let traced = (0..n).any(|b| t.prod[a * n + b] >> b & 1 == 1);
        left == 1 << a && right == 1 << a && traced == is_unit(a)
    })
}

/// All boolean Frobenius algebras on `0..n` that are normalisable, sorted by
/// canonical form and then by table.
///
/// Unit and normaliser fix most entries before searching: a unit `e` forces
/// `e·b ⊆ {b}` and `b·e ⊆ {b}`, and since the only possible normaliser in
/// Rel is the identity, the loop equation forces `b ∉ a·b` for non-units `a`.
pub fn enumerate_frobenius_rel(n: usize) -> Result<Vec<EnumeratedStructure>> {
    if n > MAX_CARRIER {
        return Err(Error::SizeBound { got: n, max: MAX_CARRIER });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let full = ((1u16 << n) - 1) as u8;
    let tables: Vec<Table> = (1u8..=full)
        .into_par_iter()
        .flat_map_iter(|units| {
            let allowed: Vec<u8> = (0..n * n)
                .map(|ab| {
                    let (a, b) = (ab / n, ab % n);
                    let mut m = full;
                    if units >> a & 1 == 1 {
                        m &= 1 << b;
                    } else {
                        m &= !(1 << b);
                    }
                    if units >> b & 1 == 1 {
                        m &= 1 << a;
                    }
                    m
                })
                .collect();
            let mut out = Vec::new();
            search(n, units, &allowed, 0, &mut vec![0; n * n], &mut vec![false; n * n], &mut out);
            out.into_iter().filter(unital_and_normalisable)
        })
        .collect();
    let mut found: Vec<(Vec<u8>, Table, FrobeniusAlgebra<bool>)> = tables
        .into_par_iter()
        .filter_map(|t| {
            let a = t.to_algebra();
            let report = verify_axioms(&a, 0.0).ok()?;
            (report.first_failure().is_none() && a.loop_left() == a.counit()).then(|| (t.canonical(), t, a))
        })
        .collect();
    found.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    Ok(found
        .into_iter()
        .map(|(canonical, _, algebra)| {
            let groupoid = algebra_to_groupoid(&algebra).ok();
            EnumeratedStructure { algebra, groupoid, canonical }
        })
        .collect())
}

/// Largest carrier [`canonical_form`] accepts.
pub const MAX_CANONICAL: usize = 8;

/// Relabelling-invariant encoding of a boolean algebra's unit and
/// multiplication: equal exactly for isomorphic algebras.
pub fn canonical_form(a: &FrobeniusAlgebra<bool>) -> Result<Vec<u8>> {
    let n = a.dim();
    if n > MAX_CANONICAL {
        return Err(Error::SizeBound { got: n, max: MAX_CANONICAL });
    }
    let bits = |it: &mut dyn Iterator<Item = bool>| it.enumerate().fold(0u8, |acc, (i, b)| acc | (u8::from(b) << i));
    let prod = (0..n * n).map(|ab| bits(&mut (0..n).map(|c| a.mult().at(c, ab)))).collect();
    let units = bits(&mut (0..n).map(|e| a.unit().at(e, 0)));
    Ok(Table { n, units, prod }.canonical())
}

/// Number of isomorphism classes among enumerated structures.
pub fn isomorphism_classes(structures: &[EnumeratedStructure]) -> usize {
    structures.iter().map(|s| &s.canonical).collect::<std::collections::BTreeSet<_>>().len()
}

/// All groupoids whose morphism set is `0..n`, found by choosing the
/// identities, endpoints and composition table directly.
pub fn enumerate_groupoids(n: usize) -> Result<Vec<Groupoid>> {
    if n > MAX_CARRIER {
        return Err(Error::SizeBound { got: n, max: MAX_CARRIER });
    }
    let mut out = Vec::new();
    for units in 1u32..1 << n {
        let ids: Vec<usize> = (0..n).filter(|&e| units >> e & 1 == 1).collect();
        let k = ids.len();
        let others: Vec<usize> = (0..n).filter(|&f| units >> f & 1 == 0).collect();
        let mut ends = vec![0usize; 2 * others.len()];
        loop {
            let mut dom = vec![0; n];
            let mut cod = vec![0; n];
            for (o, &e) in ids.iter().enumerate() {
                dom[e] = o;
                cod[e] = o;
            }
            for (i, &f) in others.iter().enumerate() {
                dom[f] = ends[2 * i];
                cod[f] = ends[2 * i + 1];
            }
            fill_compositions(n, &ids, &dom, &cod, &mut out);
            if !advance(&mut ends, k) {
                break;
            }
        }
    }
    Ok(out)
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn fill_compositions(n: usize, ids: &[usize], dom: &[usize], cod: &[usize], out: &mut Vec<Groupoid>) {
    let is_id = |f: usize| ids.contains(&f);
    let mut comp = vec![None; n * n];
    let mut free = Vec::new();
    for g in 0..n {
        for f in 0..n {
            if dom[g] != cod[f] {
                continue;
            }
            if is_id(g) {
                comp[g * n + f] = Some(f);
            } else if is_id(f) {
                comp[g * n + f] = Some(g);
            } else {
                let options: Vec<usize> = (0..n).filter(|&h| dom[h] == dom[f] && cod[h] == cod[g]).collect();
                if options.is_empty() {
                    return;
                }
                free.push((g * n + f, options));
            }
        }
    }
    let mut choice = vec![0usize; free.len()];
    loop {
        for (i, (slot, options)) in free.iter().enumerate() {
            comp[*slot] = Some(options[choice[i]]);
        }
        let inv: Option<Vec<usize>> = (0..n)
            .map(|f| (0..n).find(|&h| comp[h * n + f] == Some(ids[dom[f]]) && comp[f * n + h] == Some(ids[cod[f]])))
            .collect();
        if let Some(inv) = inv {
            let g = Groupoid::new(ids.len(), dom.to_vec(), cod.to_vec(), comp.clone(), inv, ids.to_vec())
                .expect("tables in range");
            if verify_groupoid(&g).is_empty() {
                out.push(g);
            }
        }
        let mut i = 0;
        loop {
            if i == free.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < free[i].1.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
