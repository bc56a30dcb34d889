//! Dense tensors over a scalar model, with the dagger compact structure.
//!
//! A morphism `A → B` is stored with the legs of `B` first (rows) and the
//! legs of `A` second (columns), each group flattened row-major. States
//! `I → A` have no column legs and effects `A → I` no row legs.

mod einsum;
pub(crate) mod linalg;
mod scalar;

pub use einsum::contract;
pub use linalg::{hermitian_eigen, psd_report, HermitianEigen, PsdReport};
pub use scalar::{Scalar, ScalarModel};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    dims: Vec<usize>,
    n_out: usize,
    data: Vec<S>,
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

impl<S: Scalar> Tensor<S> {
    /// Build a tensor from row legs, column legs and row-major entries.
    pub fn new(out: &[usize], inp: &[usize], data: Vec<S>) -> Result<Self> {
        let expected = product(out) * product(inp);
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "{} entries for legs {out:?} <- {inp:?} (expected {expected})",
                data.len()
            )));
        }
        let dims = out.iter().chain(inp).copied().collect();
        Ok(Tensor { dims, n_out: out.len(), data })
    }

    pub(crate) fn from_parts(dims: Vec<usize>, n_out: usize, data: Vec<S>) -> Self {
        debug_assert_eq!(product(&dims), data.len());
        Tensor { dims, n_out, data }
    }

    /// Entries given by a function of the flattened row and column index.
    pub fn from_fn(out: &[usize], inp: &[usize], f: impl Fn(usize, usize) -> S) -> Self {
        let (r, c) = (product(out), product(inp));
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                data.push(f(i, j));
            }
        }
        Tensor { dims: out.iter().chain(inp).copied().collect(), n_out: out.len(), data }
    }

    pub fn zeros(out: &[usize], inp: &[usize]) -> Self {
        Self::from_fn(out, inp, |_, _| S::zero())
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(&[d], &[d], |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// A `rows × cols` matrix with one leg on each side.
    pub fn matrix(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        Self::new(&[rows], &[cols], data)
    }

    /// A scalar, i.e. a morphism `I → I`.
    pub fn scalar(s: S) -> Self {
        Tensor { dims: vec![], n_out: 0, data: vec![s] }
    }

    /// A state `I → A` with one leg.
    pub fn state(data: Vec<S>) -> Self {
        Tensor { dims: vec![data.len()], n_out: 1, data }
    }

    /// An effect `A → I` with one leg.
    pub fn effect(data: Vec<S>) -> Self {
        Tensor { dims: vec![data.len()], n_out: 0, data }
    }

    /// The basis state `e_i` of a `d`-dimensional space.
    pub fn basis_state(d: usize, i: usize) -> Self {
        Self::state((0..d).map(|k| if k == i { S::one() } else { S::zero() }).collect())
    }

    /// The cup `I → A ⊗ A` with entries δ_ij and the cap `A ⊗ A → I`.
    pub fn cup_cap(d: usize) -> (Self, Self) {
        let cup = Self::from_fn(&[d, d], &[], |r, _| if r / d == r % d { S::one() } else { S::zero() });
        let cap = cup.dagger();
        (cup, cap)
    }

    /// The symmetry `A ⊗ B → B ⊗ A`.
    pub fn swap(a: usize, b: usize) -> Self {
        Self::from_fn(&[b, a], &[a, b], |r, c| {
            let (rb, ra) = (r / a, r % a);
            let (ca, cb) = (c / b, c % b);
            if ra == ca && rb == cb {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn out_dims(&self) -> &[usize] {
        &self.dims[..self.n_out]
    }
    pub fn in_dims(&self) -> &[usize] {
        &self.dims[self.n_out..]
    }
    pub fn rows(&self) -> usize {
        product(self.out_dims())
    }
    pub fn cols(&self) -> usize {
        product(self.in_dims())
    }
    pub fn data(&self) -> &[S] {
        &self.data
    }
    pub fn into_data(self) -> Vec<S> {
        self.data
    }
    pub fn model(&self) -> ScalarModel {
        S::model()
    }

    /// Entry at flattened row `r` and column `c`.
    pub fn at(&self, r: usize, c: usize) -> S {
        self.data[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: S) {
        let cols = self.cols();
        self.data[r * cols + c] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Regroup the legs without touching the entries.
    pub fn reshape(&self, out: &[usize], inp: &[usize]) -> Result<Self> {
        if product(out) != self.rows() || product(inp) != self.cols() {
            return Err(Error::Shape(format!(
                "cannot reshape {:?} <- {:?} into {out:?} <- {inp:?}",
                self.out_dims(),
                self.in_dims()
            )));
        }
        Tensor::new(out, inp, self.data.clone())
    }

    /// Same entries viewed as a single `rows × cols` matrix.
    pub fn flatten(&self) -> Self {
        Tensor { dims: vec![self.rows(), self.cols()], n_out: 1, data: self.data.clone() }
    }

    /// Composition `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::Shape(format!(
                "cannot compose {:?} <- {:?} after {:?} <- {:?}",
                self.out_dims(),
                self.in_dims(),
                rhs.out_dims(),
                rhs.in_dims()
            )));
        }
        let (n, k, m) = (self.rows(), self.cols(), rhs.cols());
        let mut data = vec![S::zero(); n * m];
        for i in 0..n {
            let row = &mut data[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[l * m..(l + 1) * m];
                for (o, &b) in row.iter_mut().zip(rrow) {
                    if !b.is_zero() {
                        *o = o.add(a.mul(b));
                    }
                }
            }
        }
        Ok(Tensor {
            dims: self.out_dims().iter().chain(rhs.in_dims()).copied().collect(),
            n_out: self.n_out,
            data,
        })
    }

    /// Monoidal product: row legs `self, rhs`, column legs `self, rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows(), self.cols(), rhs.rows(), rhs.cols());
        let cols = c1 * c2;
        let mut data = vec![S::zero(); r1 * r2 * cols];
        for i1 in 0..r1 {
            for j1 in 0..c1 {
                let a = self.data[i1 * c1 + j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..r2 {
                    for j2 in 0..c2 {
                        data[(i1 * r2 + i2) * cols + j1 * c2 + j2] = a.mul(rhs.data[i2 * c2 + j2]);
                    }
                }
            }
        }
        let dims = self
            .out_dims()
            .iter()
            .chain(rhs.out_dims())
            .chain(self.in_dims())
            .chain(rhs.in_dims())
            .copied()
            .collect();
        Tensor { dims, n_out: self.n_out + rhs.n_out, data }
    }

    /// Entrywise involution, no transposition.
    pub fn conj(&self) -> Self {
        self.map(S::conj)
    }

    /// Transpose the row and column legs and apply the involution.
    pub fn dagger(&self) -> Self {
        let (r, c) = (self.rows(), self.cols());
        let mut data = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                data.push(self.data[i * c + j].conj());
            }
        }
        Tensor {
            dims: self.in_dims().iter().chain(self.out_dims()).copied().collect(),
            n_out: self.dims.len() - self.n_out,
            data,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Tensor<T> {
        Tensor { dims: self.dims.clone(), n_out: self.n_out, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|x| s.mul(x))
    }

    /// Entrywise sum (or join).
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dims != rhs.dims || self.n_out != rhs.n_out {
            return Err(Error::Shape(format!("cannot add {:?} and {:?}", self.dims, rhs.dims)));
        }
        Ok(Tensor {
            dims: self.dims.clone(),
            n_out: self.n_out,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a.add(b)).collect(),
        })
    }

    /// Reorder legs: new leg `i` is old leg `perm[i]`, and the first `n_out`
    /// new legs are rows.
    pub fn permute(&self, perm: &[usize], n_out: usize) -> Result<Self> {
        let rank = self.dims.len();
        let mut seen = vec![false; rank];
        if perm.len() != rank || n_out > rank {
            return Err(Error::Shape(format!("bad permutation {perm:?} of {rank} legs")));
        }
        for &p in perm {
            if p >= rank || seen[p] {
                return Err(Error::Shape(format!("bad permutation {perm:?} of {rank} legs")));
            }
            seen[p] = true;
        }
        let old_strides = strides(&self.dims);
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let src_strides: Vec<usize> = perm.iter().map(|&p| old_strides[p]).collect();
        let total = self.data.len();
        let mut data = Vec::with_capacity(total);
        let mut idx = vec![0usize; rank];
        let mut off = 0usize;
        for _ in 0..total {
            data.push(self.data[off]);
            let mut k = rank;
            while k > 0 {
                k -= 1;
                idx[k] += 1;
                off += src_strides[k];
                if idx[k] < new_dims[k] {
                    break;
                }
                off -= src_strides[k] * new_dims[k];
                idx[k] = 0;
            }
        }
        Ok(Tensor { dims: new_dims, n_out, data })
    }

    /// Trace out row leg `out_leg` against column leg `in_leg` (indices
    /// within their groups).
    pub fn partial_trace(&self, out_leg: usize, in_leg: usize) -> Result<Self> {
        let n_in = self.dims.len() - self.n_out;
        if out_leg >= self.n_out || in_leg >= n_in {
            return Err(Error::Shape(format!(
                "no leg pair ({out_leg}, {in_leg}) in {:?} <- {:?}",
                self.out_dims(),
                self.in_dims()
            )));
        }
        let (a, b) = (self.dims[out_leg], self.dims[self.n_out + in_leg]);
        if a != b {
            return Err(Error::UnequalTracedDims(a, b));
        }
        let labels: Vec<u8> = (0..self.dims.len()).map(|i| b'a' + i as u8).collect();
        let mut spec_in = labels.clone();
        spec_in[self.n_out + in_leg] = labels[out_leg];
        let outs: String =
            (0..self.n_out).filter(|&i| i != out_leg).map(|i| labels[i] as char).collect();
        let ins: String = (0..n_in)
            .filter(|&i| i != in_leg)
            .map(|i| labels[self.n_out + i] as char)
            .collect();
        let spec = format!("{}->{outs}|{ins}", String::from_utf8(spec_in).expect("ascii labels"));
        contract(&spec, &[self])
    }

    /// Full trace of a square tensor.
    pub fn trace(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        let n = self.rows();
        Ok((0..n).fold(S::zero(), |acc, i| acc.add(self.data[i * n + i])))
    }

    /// Largest entrywise distance, or an error if the shapes differ.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::Shape(format!(
                "cannot compare {:?} with {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self.data.iter().zip(&other.data).map(|(&a, &b)| a.distance(b)).fold(0.0, f64::max))
    }

    /// Equality up to `tol` (exactly for exact models).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match self.distance(other) {
            Ok(d) if S::EXACT => d == 0.0,
            Ok(d) => d <= tol,
            Err(_) => false,
        }
    }

    /// Largest entry size: distance from the zero tensor.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|&x| x.distance(S::zero())).fold(0.0, f64::max)
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cmat(rows: usize, cols: usize, v: &[f64]) -> Tensor<Complex64> {
        Tensor::from_fn(&[rows], &[cols], |r, col| {
            let k = 2 * (r * cols + col);
            c(v[k % v.len()], v[(k + 1) % v.len()])
        })
    }

    fn entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-2.0..2.0f64, n)
    }

    #[test]
    fn identity_composes_to_identity() {
        let id = Tensor::<Complex64>::identity(4);
        assert_eq!(id.compose(&id).unwrap(), id);
        let idb = Tensor::<bool>::identity(3);
        assert_eq!(idb.compose(&idb).unwrap(), idb);
    }

    #[test]
    fn boolean_swap_is_an_involution() {
        let s = Tensor::<bool>::from_fn(&[2], &[2], |i, j| i != j);
        assert_eq!(s.compose(&s).unwrap(), Tensor::identity(2));
        let sw = Tensor::<bool>::swap(2, 3);
        assert_eq!(Tensor::<bool>::swap(3, 2).compose(&sw).unwrap(), Tensor::identity(6).reshape(&[2, 3], &[2, 3]).unwrap());
    }

    #[test]
    fn compose_entry_matches_direct_summation() {
        let a = cmat(3, 3, &[0.3, -1.2, 0.7, 2.0, -0.4, 0.1, 1.1, -0.9]);
        let b = cmat(3, 3, &[1.5, 0.2, -0.6, 0.8, 0.05, -1.3, 0.9]);
        let p = a.compose(&b).unwrap();
        let mut s = c(0.0, 0.0);
        for k in 0..3 {
            s += a.at(0, k) * b.at(k, 0);
        }
        assert!((p.at(0, 0) - s).norm() < 1e-14);
    }

    #[test]
    fn kron_basics() {
        let k = Tensor::<Complex64>::identity(2).kron(&Tensor::identity(3));
        assert_eq!(k.flatten(), Tensor::identity(6).flatten());
        let mut e11 = Tensor::<Complex64>::zeros(&[2], &[2]);
        e11.set(0, 0, c(1.0, 0.0));
        let k = e11.kron(&e11);
        assert_eq!(k.at(0, 0), c(1.0, 0.0));
        assert!((k.max_abs() - 1.0).abs() < 1e-15 && k.data().iter().filter(|x| x.norm() > 0.0).count() == 1);
    }

    #[test]
    fn dagger_examples() {
        let d = Tensor::matrix(2, 2, vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0)]).unwrap();
        assert_eq!(d.dagger(), d);
        let m = Tensor::matrix(2, 2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let expected = Tensor::matrix(2, 2, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(m.dagger(), expected);
        // A relation's dagger is its converse.
        let r = Tensor::<bool>::from_fn(&[3], &[2], |b, a| (a, b) == (0, 2) || (a, b) == (1, 0));
        let rd = r.dagger();
        assert!(rd.at(0, 2) && rd.at(1, 0));
        assert_eq!(rd.data().iter().filter(|&&x| x).count(), 2);
    }

    #[test]
    fn cups_and_caps() {
        let (cup, _) = Tensor::<Complex64>::cup_cap(1);
        assert_eq!(cup.data(), &[c(1.0, 0.0)]);
        let (cup, cap) = Tensor::<Complex64>::cup_cap(2);
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert_eq!(cup.data(), &[one, zero, zero, one]);
        for d in 1..=6 {
            let (cup, cap) = Tensor::<Complex64>::cup_cap(d);
            assert!((cap.compose(&cup).unwrap().data()[0] - c(d as f64, 0.0)).norm() < 1e-12);
            let id = Tensor::<Complex64>::identity(d);
            let left = cap.kron(&id).compose(&id.kron(&cup)).unwrap().flatten();
            let right = id.kron(&cap).compose(&cup.kron(&id)).unwrap().flatten();
            assert!(left.distance(&id).unwrap() < 1e-10);
            assert!(right.distance(&id).unwrap() < 1e-10);
            let (bcup, bcap) = Tensor::<bool>::cup_cap(d);
            let bid = Tensor::<bool>::identity(d);
            assert_eq!(bcap.kron(&bid).compose(&bid.kron(&bcup)).unwrap().flatten(), bid);
        }
        let _ = cap;
    }

    #[test]
    fn traces() {
        assert_eq!(Tensor::<Complex64>::identity(3).trace().unwrap(), c(3.0, 0.0));
        let a = cmat(2, 2, &[0.5, 1.0, -2.0, 0.25, 3.0, 0.0, 1.0, -1.0]);
        let k = a.kron(&Tensor::identity(2));
        let t = k.partial_trace(1, 1).unwrap();
        assert!(t.distance(&a.scale(c(2.0, 0.0))).unwrap() < 1e-14);
        let bad = Tensor::<Complex64>::zeros(&[2, 3], &[2, 2]);
        assert_eq!(bad.partial_trace(1, 1), Err(Error::UnequalTracedDims(3, 2)));
    }

    #[test]
    fn shape_errors() {
        let a = Tensor::<Complex64>::zeros(&[2], &[3]);
        assert!(matches!(a.compose(&a), Err(Error::Shape(_))));
        assert!(Tensor::<bool>::new(&[2], &[2], vec![true; 3]).is_err());
        assert!(a.reshape(&[3], &[2]).is_err());
        assert!(a.permute(&[0, 0], 1).is_err());
    }

    #[test]
    fn permute_inverse_roundtrip() {
        let t = Tensor::<Complex64>::from_fn(&[2, 3], &[4], |r, col| c((r * 4 + col) as f64, 0.0));
        let p = t.permute(&[2, 0, 1], 1).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        // p[c, a, b] = t[a, b, c] at (a, b, c) = (1, 2, 1)
        assert_eq!(p.data()[6 + 3 + 2], t.data()[12 + 2 * 4 + 1]);
        let back = p.permute(&[1, 2, 0], 2).unwrap();
        assert_eq!(back, t);
    }

    proptest! {
        #[test]
        fn dagger_is_a_contravariant_involution(a in entries(18), b in entries(24)) {
            let x = cmat(3, 3, &a);
            let y = cmat(3, 4, &b);
            prop_assert_eq!(x.dagger().dagger(), x.clone());
            let lhs = x.compose(&y).unwrap().dagger();
            let rhs = y.dagger().compose(&x.dagger()).unwrap();
            prop_assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        }

        #[test]
        fn kron_is_bifunctorial(a in entries(8), b in entries(8), x in entries(8), y in entries(8)) {
            let (a, b, x, y) = (cmat(2, 2, &a), cmat(2, 2, &b), cmat(2, 2, &x), cmat(2, 2, &y));
            let lhs = a.kron(&b).compose(&x.kron(&y)).unwrap();
            let rhs = a.compose(&x).unwrap().kron(&b.compose(&y).unwrap());
            prop_assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        }

        #[test]
        fn kron_is_associative_up_to_reshape(a in entries(8), b in entries(12), x in entries(4)) {
            let (a, b, x) = (cmat(2, 2, &a), cmat(3, 2, &b), cmat(1, 2, &x));
            let l = a.kron(&b).kron(&x);
            let r = a.kron(&b.kron(&x));
            prop_assert_eq!(l.dims(), r.dims());
            prop_assert!(l.distance(&r).unwrap() < 1e-14);
        }

        #[test]
        fn boolean_composition_is_associative(bits in proptest::collection::vec(any::<bool>(), 27)) {
            let r = Tensor::from_fn(&[3], &[3], |i, j| bits[i * 3 + j]);
            let s = Tensor::from_fn(&[3], &[3], |i, j| bits[9 + i * 3 + j]);
            let t = Tensor::from_fn(&[3], &[3], |i, j| bits[18 + i * 3 + j]);
            prop_assert_eq!(r.compose(&s).unwrap().compose(&t).unwrap(), r.compose(&s.compose(&t).unwrap()).unwrap());
        }
    }
}
