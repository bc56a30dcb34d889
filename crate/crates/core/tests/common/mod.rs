//! Instance generators shared by the integration suites.
//!
//! Maps are built on block models from their Choi blocks, which is the
//! independent side of every CP comparison, then moved to a disguised basis
//! by random unitaries.

#![allow(dead_code)]

use cpstar_core::cp::CPStarMorphism;
use cpstar_core::random::{random_matrix, random_unitary, random_unitary_tensor, Rng64};
use cpstar_core::{FrobeniusAlgebra, Tensor};
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::Rng;

pub type Algebra = FrobeniusAlgebra<C>;

/// Block sizes of every semisimple algebra of dimension at most 9.
pub const BLOCK_SHAPES: &[&[usize]] = &[
    &[1],
    &[1, 1],
    &[1, 1, 1],
    &[2],
    &[1, 1, 1, 1],
    &[2, 1],
    &[1, 1, 1, 1, 1],
    &[2, 1, 1],
    &[1, 1, 1, 1, 1, 1],
    &[2, 1, 1, 1],
    &[2, 2],
    &[2, 2, 1],
    &[3],
    &[2, 1, 1, 1, 1, 1],
];

pub fn dim_of(sizes: &[usize]) -> usize {
    sizes.iter().map(|n| n * n).sum()
}

pub fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().scan(0, |acc, n| {
        let o = *acc;
        *acc += n * n;
        Some(o)
    }).collect()
}

/// An object in a disguised basis: the block model transported by `u`.
#[derive(Clone)]
pub struct Disguised {
    pub sizes: Vec<usize>,
    pub algebra: Algebra,
    pub u: Tensor<C>,
}

impl Disguised {
    pub fn plain(sizes: &[usize]) -> Self {
        let algebra = Algebra::block_model(sizes).unwrap();
        let u = Tensor::identity(algebra.dim());
        Disguised { sizes: sizes.to_vec(), algebra, u }
    }

    pub fn random(sizes: &[usize], rng: &mut Rng64) -> Self {
        let model = Algebra::block_model(sizes).unwrap();
        let u = random_unitary_tensor(rng, model.dim());
        Disguised { sizes: sizes.to_vec(), algebra: model.transport(&u).unwrap(), u }
    }
}

/// `Σ_{p,q}` of block maps with `C_qp[(a,i),(b,j)] = f(e_ab)_ij`.
pub fn map_from_choi(
    sa: &[usize],
    sb: &[usize],
    mut choi: impl FnMut(usize, usize) -> DMatrix<C>,
) -> Tensor<C> {
    let (oa, ob) = (offsets(sa), offsets(sb));
    let mut f = Tensor::<C>::zeros(&[dim_of(sb)], &[dim_of(sa)]);
    for (p, &m) in sa.iter().enumerate() {
        for (q, &n) in sb.iter().enumerate() {
            let c = choi(p, q);
            for a in 0..m {
                for i in 0..n {
                    for b in 0..m {
                        for j in 0..n {
                            f.set(ob[q] + i * n + j, oa[p] + a * m + b, c[(a * n + i, b * n + j)]);
                        }
                    }
                }
            }
        }
    }
    f
}

pub fn random_psd(rng: &mut Rng64, dim: usize, rank: usize) -> DMatrix<C> {
    let g = random_matrix(rng, dim, rank);
    &g * g.adjoint()
}

/// Hermitian with smallest eigenvalue exactly `-gap`, the rest in `[0.2, 1]`.
pub fn planted_negative(rng: &mut Rng64, dim: usize, gap: f64) -> DMatrix<C> {
    let u = random_unitary(rng, dim);
    let d = DMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            C::new(0.0, 0.0)
        } else if i == 0 {
            C::new(-gap, 0.0)
        } else {
            C::new(rng.random_range(0.2..1.0), 0.0)
        }
    });
    &u * d * u.adjoint()
}

/// Move a block-model map to the disguised objects: `u_B f u_A†`.
pub fn disguise(f: &Tensor<C>, a: &Disguised, b: &Disguised) -> CPStarMorphism {
    let map = b.u.compose(f).unwrap().compose(&a.u.dagger()).unwrap();
    CPStarMorphism::new(a.algebra.clone(), b.algebra.clone(), map).unwrap()
}

/// A CP map with random Kraus operators on every pair of blocks.
pub fn random_cp(rng: &mut Rng64, a: &Disguised, b: &Disguised) -> CPStarMorphism {
    let (sa, sb) = (a.sizes.clone(), b.sizes.clone());
    let f = map_from_choi(&sa, &sb, |p, q| {
        let dim = sa[p] * sb[q];
        let rank = rng.random_range(1..=dim);
        random_psd(rng, dim, rank)
    });
    disguise(&f, a, b)
}

/// A map whose Choi block for one random pair has eigenvalue `-gap`.
pub fn planted_non_cp(rng: &mut Rng64, a: &Disguised, b: &Disguised, gap: f64) -> CPStarMorphism {
    let (sa, sb) = (a.sizes.clone(), b.sizes.clone());
    let bad = (rng.random_range(0..sa.len()), rng.random_range(0..sb.len()));
    let f = map_from_choi(&sa, &sb, |p, q| {
        let dim = sa[p] * sb[q];
        if (p, q) == bad {
            planted_negative(rng, dim, gap)
        } else {
            random_psd(rng, dim, dim)
        }
    });
    disguise(&f, a, b)
}

/// Entries drawn independently: neither Hermiticity- nor positivity-preserving.
pub fn random_generic(rng: &mut Rng64, a: &Disguised, b: &Disguised) -> CPStarMorphism {
    let m = random_matrix(rng, b.algebra.dim(), a.algebra.dim());
    let f = Tensor::from_matrix(&m, &[b.algebra.dim()], &[a.algebra.dim()]).unwrap();
    CPStarMorphism::new(a.algebra.clone(), b.algebra.clone(), f).unwrap()
}

/// `x* x` for a random element `x`.
pub fn random_positive(rng: &mut Rng64, a: &Algebra) -> Tensor<C> {
    let x = cpstar_core::random::random_state(rng, a.dim());
    a.product(&a.star(&x).unwrap(), &x).unwrap()
}

pub fn random_shape(rng: &mut Rng64, max_dim: usize) -> &'static [usize] {
    let fitting: Vec<_> = BLOCK_SHAPES.iter().filter(|s| dim_of(s) <= max_dim).collect();
    fitting[rng.random_range(0..fitting.len())]
}
