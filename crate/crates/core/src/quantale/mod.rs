//! Matrices over quantales and the collapse to relations.
//!
//! A quantale here is a complete order whose join is `max` and whose
//! multiplication distributes over it. Tensors over a quantale reuse the
//! generic tensor machinery; the dagger is plain transposition.

mod really_cp;

pub use really_cp::{really_cp_check, RcpReport};

use std::fmt;

use crate::error::{Error, Result};
use crate::frobenius::{check_normaliser, verify_axioms, FrobeniusAlgebra};
use crate::rel::{algebra_to_groupoid, Groupoid};
use crate::tensor::{Scalar, ScalarModel, Tensor};

/// Scalars that form a quantale with an identity involution.
pub trait Quantale: Scalar + PartialOrd {
    /// `x·y = x·z` forces `y = z` unless `x = 0`.
    const CANCELLATIVE: bool;

    /// Join of finitely many elements.
    fn join_all(xs: impl IntoIterator<Item = Self>) -> Self {
        xs.into_iter().fold(Self::zero(), Self::add)
    }
}

macro_rules! interval_scalar {
    ($name:ident, $label:literal, $mul:expr) => {
        impl Scalar for $name {
            const EXACT: bool = true;

            fn zero() -> Self {
                $name(0.0)
            }
            fn one() -> Self {
                $name(1.0)
            }
            fn add(self, rhs: Self) -> Self {
                $name(self.0.max(rhs.0))
            }
            fn mul(self, rhs: Self) -> Self {
                $name($mul(self.0, rhs.0))
            }
            fn conj(self) -> Self {
                self
            }
            fn distance(self, other: Self) -> f64 {
                if self.0 == other.0 {
                    0.0
                } else {
                    (self.0 - other.0).abs()
                }
            }
            fn model() -> ScalarModel {
                ScalarModel::Quantale($label)
            }
            fn dimension_normaliser(_d: usize) -> Self {
                $name(1.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

/// `[0, 1]` with `max` and ordinary multiplication.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnitInterval(pub f64);

/// `[0, ∞]` with `max` and multiplication, `0·∞ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtendedReal(pub f64);

/// `[0, 1]` with `max` and the Łukasiewicz product `max(0, x + y − 1)`.
/// Has zero divisors, so collapsing it to relations is not functorial.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Lukasiewicz(pub f64);

interval_scalar!(UnitInterval, "unit-interval", |x: f64, y: f64| x * y);
interval_scalar!(ExtendedReal, "extended-real", |x: f64, y: f64| if x == 0.0 || y == 0.0 { 0.0 } else { x * y });
interval_scalar!(Lukasiewicz, "lukasiewicz", |x: f64, y: f64| (x + y - 1.0).max(0.0));

impl Quantale for UnitInterval {
    const CANCELLATIVE: bool = true;
}
impl Quantale for ExtendedReal {
    // ∞·1 = ∞·2
    const CANCELLATIVE: bool = false;
}
impl Quantale for Lukasiewicz {
    const CANCELLATIVE: bool = false;
}
impl Quantale for bool {
    const CANCELLATIVE: bool = true;
}

/// Entrywise support: nonzero entries become `true`.
pub fn collapse<Q: Quantale>(t: &Tensor<Q>) -> Tensor<bool> {
    t.map(|x| !x.is_zero())
}

/// Collapse multiplication, unit and normaliser.
pub fn collapse_algebra<Q: Quantale>(a: &FrobeniusAlgebra<Q>) -> FrobeniusAlgebra<bool> {
    FrobeniusAlgebra::new(collapse(a.mult()), collapse(a.unit()), a.normaliser().map(collapse))
        .expect("collapse keeps shapes")
}

/// The groupoid underlying a normalisable Frobenius algebra over `Q`.
pub fn q_algebra_groupoid<Q: Quantale>(a: &FrobeniusAlgebra<Q>) -> Result<Groupoid> {
    let report = verify_axioms(a, 0.0)?;
    if let Some(name) = report.first_failure() {
        return Err(Error::NotAnAlgebra(format!("{name} fails")));
    }
    let z = a.normaliser().ok_or(Error::MissingNormaliser)?;
    if !check_normaliser(a, z, 0.0)?.pass() {
        return Err(Error::NoNormaliser("the attached normaliser fails its equations".into()));
    }
    algebra_to_groupoid(&collapse_algebra(a))
}

/// Every normalisable Frobenius algebra on `0..n` with multiplication, unit
/// and normaliser entries drawn from `grid`. Exhaustive, so only for tiny
/// inputs.
pub fn grid_frobenius_algebras<Q: Quantale>(n: usize, grid: &[Q]) -> Result<Vec<FrobeniusAlgebra<Q>>> {
    let k = grid.len();
    let count = |len: usize| k.checked_pow(len as u32).filter(|&c| c <= 1 << 24);
    let (mult_len, unit_len, z_len) = (n * n * n, n, n * n);
    let total = count(mult_len + unit_len).zip(count(z_len));
    let Some((structures, normalisers)) = total else {
        return Err(Error::SizeBound { got: n, max: 2 });
    };
    let decode = |mut index: usize, len: usize| -> Vec<Q> {
        (0..len)
            .map(|_| {
                let x = grid[index % k];
                index /= k;
                x
            })
            .collect()
    };
    let zs: Vec<Tensor<Q>> = (0..normalisers).map(|i| Tensor::new(&[n], &[n], decode(i, z_len))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for index in 0..structures {
        let entries = decode(index, mult_len + unit_len);
        let mult = Tensor::new(&[n], &[n, n], entries[..mult_len].to_vec())?;
        let unit = Tensor::new(&[n], &[], entries[mult_len..].to_vec())?;
        let a = FrobeniusAlgebra::new(mult, unit, None)?;
        if verify_axioms(&a, 0.0)?.first_failure().is_some() {
            continue;
        }
        for z in &zs {
            if check_normaliser(&a, z, 0.0)?.pass() {
                out.push(a.with_normaliser(z.clone())?);
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel::groupoid_to_algebra;
    use proptest::prelude::*;

    const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

    fn u(x: f64) -> UnitInterval {
        UnitInterval(x)
    }

    fn z2_over_unit_interval(weight: f64) -> FrobeniusAlgebra<UnitInterval> {
        let table = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)];
        let mult = Tensor::from_fn(&[2], &[2, 2], |h, gf| {
            let hit = table.iter().any(|&(g, f, out)| gf == g * 2 + f && h == out);
            if !hit {
                u(0.0)
            } else if gf == 3 {
                u(weight)
            } else {
                u(1.0)
            }
        });
        let unit = Tensor::from_fn(&[2], &[], |e, _| u(if e == 0 { 1.0 } else { 0.0 }));
        FrobeniusAlgebra::new(mult, unit, Some(Tensor::identity(2))).unwrap()
    }

    #[test]
    fn one_by_one_composition() {
        let half = Tensor::matrix(1, 1, vec![u(0.5)]).unwrap();
        assert_eq!(half.compose(&half).unwrap().data(), &[u(0.25)]);
        let id = Tensor::<UnitInterval>::identity(3);
        let t = Tensor::from_fn(&[3], &[3], |r, c| u(GRID[(r + 2 * c) % 5]));
        assert_eq!(id.compose(&t).unwrap(), t);
        assert_eq!(t.compose(&id).unwrap(), t);
        assert_eq!(t.dagger().dagger(), t);
    }

    #[test]
    fn extended_reals_absorb_at_zero() {
        let inf = ExtendedReal(f64::INFINITY);
        assert_eq!(inf.mul(ExtendedReal(0.0)), ExtendedReal(0.0));
        assert_eq!(inf.mul(ExtendedReal(2.0)), inf);
        assert_eq!(inf.distance(inf), 0.0);
        assert_eq!(inf.add(ExtendedReal(3.0)), inf);
    }

    #[test]
    fn z2_with_unit_weights_gives_z2() {
        let a = z2_over_unit_interval(1.0);
        assert_eq!(q_algebra_groupoid(&a).unwrap(), Groupoid::cyclic(2));
    }

    #[test]
    fn mismatched_weights_break_the_axioms() {
        assert!(matches!(q_algebra_groupoid(&z2_over_unit_interval(0.5)), Err(Error::NotAnAlgebra(_))));
    }

    #[test]
    fn boolean_route_is_the_identity() {
        let a = groupoid_to_algebra(&Groupoid::indiscrete(2)).unwrap();
        assert_eq!(collapse_algebra(&a), a);
        assert_eq!(q_algebra_groupoid(&a).unwrap(), Groupoid::indiscrete(2));
    }

    #[test]
    fn collapse_marks_support() {
        let t = Tensor::matrix(1, 3, vec![u(0.0), u(0.5), u(0.0)]).unwrap();
        assert_eq!(collapse(&t).data(), &[false, true, false]);
    }

    #[test]
    fn lukasiewicz_collapse_is_not_functorial() {
        let half = Tensor::matrix(1, 1, vec![Lukasiewicz(0.5)]).unwrap();
        let lhs = collapse(&half.compose(&half).unwrap());
        let rhs = collapse(&half).compose(&collapse(&half)).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn grid_search_on_two_points() {
        let grid = [u(0.0), u(0.5), u(1.0)];
        let found = grid_frobenius_algebras(2, &grid).unwrap();
        assert!(!found.is_empty());
        for a in &found {
            let g = q_algebra_groupoid(a).unwrap();
            assert_eq!(g.n_morphisms(), 2);
        }
    }

    fn grid_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Tensor<UnitInterval>> {
        prop::collection::vec(prop::sample::select(vec![0.0, 0.3, 0.7]), rows * cols)
            .prop_map(move |v| Tensor::matrix(rows, cols, v.into_iter().map(UnitInterval).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn collapse_is_functorial_on_the_unit_interval(
            (a, b) in (1usize..=4, 1usize..=4, 1usize..=4).prop_flat_map(|(n, m, k)| (grid_matrix(n, m), grid_matrix(m, k)))
        ) {
            prop_assert_eq!(collapse(&a.compose(&b).unwrap()), collapse(&a).compose(&collapse(&b)).unwrap());
            prop_assert_eq!(collapse(&a.kron(&b)), collapse(&a).kron(&collapse(&b)));
            prop_assert_eq!(collapse(&a.dagger()), collapse(&a).dagger());
        }

        #[test]
        fn quantale_laws(x in 0.0f64..=1.0, y in 0.0f64..=1.0, z in 0.0f64..=1.0) {
            let (x, y, z) = (u(x), u(y), u(z));
            prop_assert_eq!(x.mul(y.add(z)), x.mul(y).add(x.mul(z)));
            prop_assert_eq!(y.add(z).mul(x), y.mul(x).add(z.mul(x)));
            if x.mul(y) == x.mul(z) && !x.is_zero() {
                prop_assert!((y.0 - z.0).abs() < 1e-12);
            }
            let (lx, ly, lz) = (Lukasiewicz(x.0), Lukasiewicz(y.0), Lukasiewicz(z.0));
            prop_assert_eq!(lx.mul(ly.add(lz)), lx.mul(ly).add(lx.mul(lz)));
        }
    }
}
