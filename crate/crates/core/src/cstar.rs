//! The concrete C*-algebra behind a complex Frobenius algebra: centre,
//! block decomposition into full matrix algebras, operator norm, positivity
//! and copyable points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::frobenius::{classify, verify_axioms, FrobeniusAlgebra};
use crate::random::{self, complex_normal, random_state};
use crate::tensor::linalg::hermitian_eigen_matrix;
use crate::tensor::Tensor;

type C = Complex64;

/// Attempts with fresh random elements before a spectrum is declared degenerate.
const MAX_RETRIES: usize = 24;

fn inner(x: &Tensor<C>, y: &Tensor<C>) -> C {
    x.data().iter().zip(y.data()).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sq(x: &Tensor<C>) -> f64 {
    x.data().iter().map(|z| z.norm_sqr()).sum()
}

/// Orthonormal basis of the centre, the joint kernel of `L_b - R_b`.
///
/// The rank cut sits at `√tol` relative to the largest singular value; a
/// singular value within a factor of 10 of the cut is reported rather than
/// guessed.
pub fn center(a: &FrobeniusAlgebra<C>, tol: f64) -> Result<Vec<Tensor<C>>> {
    let d = a.dim();
    let m = a.mult();
    let k = DMatrix::from_fn(d * d, d, |row, col| {
        let (b, c) = (row / d, row % d);
        m.at(c, b * d + col) - m.at(c, col * d + b)
    });
    let svd = k.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let scale = sigma.iter().copied().fold(1.0, f64::max);
    let cut = tol.sqrt() * scale;
    let mut basis = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        if s > cut / 10.0 && s < cut * 10.0 {
            return Err(Error::RankAmbiguity { value: s, cut });
        }
        if s <= cut {
            basis.push(Tensor::state(v_t.row(i).iter().map(|z| z.conj()).collect()));
        }
    }
    // nalgebra returns min(d², d) = d singular values, so the kernel is complete.
    Ok(basis)
}

/// A `*`-isomorphism from an algebra onto a direct sum of matrix algebras.
///
/// `iso` sends the matrix unit `E_ij` of block `k` to the basis vector
/// `e_ij` of the block model. It is unitary exactly when every block weight
/// is 1; in general it rescales block `k` by `1/√weight_k`.
#[derive(Debug, Clone)]
pub struct StandardForm {
    /// Block sizes, descending.
    pub block_sizes: Vec<usize>,
    /// Squared norm of the first diagonal matrix unit of each block.
    pub weights: Vec<f64>,
    pub iso: Tensor<C>,
    pub iso_inverse: Tensor<C>,
    pub block_model: FrobeniusAlgebra<C>,
    /// Minimal central idempotents, in block order.
    pub central_idempotents: Vec<Tensor<C>>,
}

impl StandardForm {
    /// Offset of each block inside the block model's carrier.
    pub fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.block_sizes.len());
        let mut acc = 0;
        for &n in &self.block_sizes {
            o.push(acc);
            acc += n * n;
        }
        o
    }

    /// The image of `x` as one square matrix per block.
    pub fn to_blocks(&self, x: &Tensor<C>) -> Result<Vec<DMatrix<C>>> {
        let y = self.iso.compose(x)?;
        Ok(self
            .block_sizes
            .iter()
            .zip(self.offsets())
            .map(|(&n, o)| DMatrix::from_fn(n, n, |i, j| y.data()[o + i * n + j]))
            .collect())
    }

    /// Inverse of [`Self::to_blocks`].
    pub fn from_blocks(&self, blocks: &[DMatrix<C>]) -> Result<Tensor<C>> {
        if blocks.len() != self.block_sizes.len() {
            return Err(Error::Shape(format!("expected {} blocks", self.block_sizes.len())));
        }
        let mut data = Vec::new();
        for (b, &n) in blocks.iter().zip(&self.block_sizes) {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Shape(format!("block must be {n} x {n}")));
            }
            for i in 0..n {
                for j in 0..n {
                    data.push(b[(i, j)]);
                }
            }
        }
        self.iso_inverse.compose(&Tensor::state(data))
    }
}

/// [`standard_form_seeded`] with seed 0.
pub fn standard_form(a: &FrobeniusAlgebra<C>, tol: f64) -> Result<StandardForm> {
    standard_form_seeded(a, tol, 0)
}

/// Decompose `a` into full matrix blocks.
///
/// The centre is split by the eigenspaces of left multiplication by a
/// random self-adjoint central element; each block gets matrix units from
/// the eigenprojections of a random self-adjoint element of that block.
pub fn standard_form_seeded(a: &FrobeniusAlgebra<C>, tol: f64, seed: u64) -> Result<StandardForm> {
    let report = verify_axioms(a, tol)?;
    if let Some(name) = report.first_failure() {
        return Err(Error::NotAnAlgebra(format!("{name} fails")));
    }
    let d = a.dim();
    let mut rng = random::rng(seed);
    let idempotents = minimal_central_idempotents(a, tol, &mut rng)?;

    struct Block {
        n: usize,
        units: Vec<Tensor<C>>,
        weight: f64,
        trace: f64,
        idempotent: Tensor<C>,
    }
    let mut blocks = Vec::new();
    for e in idempotents {
        let t = a.loop_left().compose(&e)?.data()[0];
        let n = t.re.max(0.0).sqrt().round() as usize;
        if n == 0 || (t - C::new((n * n) as f64, 0.0)).norm() > 1e-6 * (1.0 + t.norm()) {
            return Err(Error::StandardForm(format!("block trace {t} is not a square")));
        }
        let units = matrix_units(a, &e, n, tol, &mut rng)?;
        let weight = norm_sq(&units[0]);
        let trace = a.counit().compose(&e)?.data()[0].re;
        blocks.push(Block { n, units, weight, trace, idempotent: e });
    }
    blocks.sort_by(|x, y| y.n.cmp(&x.n).then(x.trace.total_cmp(&y.trace)));

    let block_sizes: Vec<usize> = blocks.iter().map(|b| b.n).collect();
    if block_sizes.iter().map(|n| n * n).sum::<usize>() != d {
        return Err(Error::StandardForm("block dimensions do not add up".into()));
    }
    let mut iso_inverse = Tensor::<C>::zeros(&[d], &[d]);
    let mut iso = Tensor::<C>::zeros(&[d], &[d]);
    let mut col = 0;
    for b in &blocks {
        for u in &b.units {
            for r in 0..d {
                iso_inverse.set(r, col, u.data()[r]);
                iso.set(col, r, u.data()[r].conj() / b.weight);
            }
            col += 1;
        }
    }
    let round_trip = iso.compose(&iso_inverse)?.distance(&Tensor::identity(d))?;
    if round_trip > tol.sqrt() {
        return Err(Error::StandardForm(format!("matrix units are not a basis ({round_trip:e})")));
    }
    Ok(StandardForm {
        weights: blocks.iter().map(|b| b.weight).collect(),
        central_idempotents: blocks.iter().map(|b| b.idempotent.clone()).collect(),
        block_model: FrobeniusAlgebra::block_model(&block_sizes)?,
        block_sizes,
        iso,
        iso_inverse,
    })
}

/// Random self-adjoint element `y + star(y)` with `y = e·r`.
fn random_self_adjoint<R: Rng>(a: &FrobeniusAlgebra<C>, e: &Tensor<C>, rng: &mut R) -> Result<Tensor<C>> {
    let r = random_state(rng, a.dim());
    let y = a.product(e, &r)?;
    y.add(&a.star(&y)?)
}

/// Group sorted eigenvalues into clusters separated by more than `gap`.
fn clusters(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn minimal_central_idempotents<R: Rng>(
    a: &FrobeniusAlgebra<C>,
    tol: f64,
    rng: &mut R,
) -> Result<Vec<Tensor<C>>> {
    let centre = center(a, tol)?;
    let m = centre.len();
    if m == 0 {
        return Err(Error::StandardForm("trivial centre".into()));
    }
    if m == 1 {
        return Ok(vec![a.unit().clone()]);
    }
    for _ in 0..MAX_RETRIES {
        let coeffs: Vec<C> = (0..m).map(|_| complex_normal(rng)).collect();
        let mut w = Tensor::<C>::zeros(&[a.dim()], &[]);
        for (c, ck) in coeffs.iter().zip(&centre) {
            w = w.add(&ck.scale(*c))?;
        }
        let h = w.add(&a.star(&w)?)?;
        let lh = a.left_mult(&h)?;
        // Matrix of L_h on the centre.
        let images: Vec<Tensor<C>> =
            centre.iter().map(|c| lh.compose(c)).collect::<Result<_>>()?;
        let mat = DMatrix::from_fn(m, m, |i, j| inner(&centre[i], &images[j]));
        let eig = hermitian_eigen_matrix(&mat);
        let spread = eig.values.iter().map(|v| v.abs()).fold(1.0, f64::max);
        let gap = 1e-6 * spread;
        if eig.values.windows(2).any(|p| p[1] - p[0] <= gap) {
            continue;
        }
        let mut out = Vec::with_capacity(m);
        for k in 0..m {
            let mut v = Tensor::<C>::zeros(&[a.dim()], &[]);
            for (i, c) in centre.iter().enumerate() {
                v = v.add(&c.scale(eig.vectors[(i, k)]))?;
            }
            let vv = a.product(&v, &v)?;
            let kappa = inner(&v, &vv) / C::new(norm_sq(&v), 0.0);
            if kappa.norm() < tol.sqrt() {
                return Err(Error::StandardForm("central eigenvector squares to zero".into()));
            }
            let e = v.scale(C::new(1.0, 0.0) / kappa);
            let residual = a.product(&e, &e)?.distance(&e)?;
            if residual > tol.sqrt() {
                return Err(Error::StandardForm(format!("central idempotent residual {residual:e}")));
            }
            out.push(e);
        }
        return Ok(out);
    }
    Err(Error::StandardForm("degenerate centre spectrum on every retry".into()))
}

/// Matrix units `E_ij` of the simple block `e·A`, row-major.
fn matrix_units<R: Rng>(
    a: &FrobeniusAlgebra<C>,
    e: &Tensor<C>,
    n: usize,
    tol: f64,
    rng: &mut R,
) -> Result<Vec<Tensor<C>>> {
    if n == 1 {
        return Ok(vec![e.clone()]);
    }
    let d = a.dim();
    // Orthonormal basis of the block: range of the projector L_e.
    let le = a.left_mult(e)?.to_matrix();
    let pe = hermitian_eigen_matrix(&le);
    let basis_cols: Vec<usize> = (0..d).filter(|&i| pe.values[i] > 0.5).collect();
    if basis_cols.len() != n * n {
        return Err(Error::StandardForm(format!(
            "block has dimension {} but trace suggests {}",
            basis_cols.len(),
            n * n
        )));
    }
    let b = DMatrix::from_fn(d, n * n, |r, c| pe.vectors[(r, basis_cols[c])]);

    for _ in 0..MAX_RETRIES {
        let y = random_self_adjoint(a, e, rng)?;
        let ly = a.left_mult(&y)?.to_matrix();
        let restricted = b.adjoint() * ly * &b;
        let eig = hermitian_eigen_matrix(&restricted);
        let spread = eig.values.iter().map(|v| v.abs()).fold(1.0, f64::max);
        let groups = clusters(&eig.values, 1e-6 * spread);
        if groups.len() != n || groups.iter().any(|g| g.len() != n) {
            continue;
        }
        // Minimal projections p_i = P_i(e), P_i the eigenprojection.
        let ev = e.to_vector();
        let mut projections = Vec::with_capacity(n);
        for g in &groups {
            let w = &b * eig.vectors.columns(g.start, g.len());
            let p = &w * (w.adjoint() * &ev);
            projections.push(Tensor::state(p.iter().copied().collect()));
        }
        let p1 = &projections[0];
        if a.product(p1, p1)?.distance(p1)? > tol.sqrt() {
            continue;
        }
        // Partial isometries E_i1 from p_i · r · p_1.
        let mut column = vec![p1.clone()];
        let mut ok = true;
        for p in &projections[1..] {
            let r = random_state(rng, d);
            let x = a.product(&a.product(p, &r)?, p1)?;
            let xx = a.product(&a.star(&x)?, &x)?;
            let kappa = inner(p1, &xx).re / norm_sq(p1);
            if kappa < tol.sqrt() {
                ok = false;
                break;
            }
            column.push(x.scale(C::new(1.0 / kappa.sqrt(), 0.0)));
        }
        if !ok {
            continue;
        }
        let row: Vec<Tensor<C>> = column.iter().map(|x| a.star(x)).collect::<Result<_>>()?;
        let mut units = Vec::with_capacity(n * n);
        for x in &column {
            for y in &row {
                units.push(a.product(x, y)?);
            }
        }
        return Ok(units);
    }
    Err(Error::StandardForm("degenerate block spectrum on every retry".into()))
}

/// Largest singular value over the blocks of `x`.
pub fn operator_norm(a: &FrobeniusAlgebra<C>, x: &Tensor<C>, tol: f64) -> Result<f64> {
    let sf = standard_form(a, tol)?;
    operator_norm_in(&sf, x)
}

/// [`operator_norm`] with a precomputed standard form.
pub fn operator_norm_in(sf: &StandardForm, x: &Tensor<C>) -> Result<f64> {
    Ok(sf
        .to_blocks(x)?
        .into_iter()
        .map(|b| b.singular_values().iter().copied().fold(0.0, f64::max))
        .fold(0.0, f64::max))
}

/// Positivity decision with the spectrum of every block.
#[derive(Debug, Clone)]
pub struct PositivityWitness {
    pub positive: bool,
    pub block_min_eigenvalues: Vec<f64>,
    pub hermitian_residual: f64,
}

/// Whether `x` is positive: each block of its image is positive semidefinite.
pub fn positive_in_algebra(a: &FrobeniusAlgebra<C>, x: &Tensor<C>, tol: f64) -> Result<PositivityWitness> {
    let sf = standard_form(a, tol)?;
    positive_in(&sf, x, tol)
}

/// [`positive_in_algebra`] with a precomputed standard form.
pub fn positive_in(sf: &StandardForm, x: &Tensor<C>, tol: f64) -> Result<PositivityWitness> {
    let mut mins = Vec::new();
    let mut herm: f64 = 0.0;
    for b in sf.to_blocks(x)? {
        let e = hermitian_eigen_matrix(&b);
        herm = herm.max(e.hermitian_residual);
        mins.push(e.values[0]);
    }
    let scale = 1.0 + x.max_abs();
    let positive = herm <= tol * scale && mins.iter().all(|&v| v >= -tol * scale);
    Ok(PositivityWitness { positive, block_min_eigenvalues: mins, hermitian_residual: herm })
}

/// Copyable points of a commutative algebra and their squared norms.
#[derive(Debug, Clone)]
pub struct CopyablePointSet {
    pub points: Vec<Tensor<C>>,
    pub norms: Vec<f64>,
}

/// The copyable points: minimal idempotents `e` rescaled to `e / ‖e‖²`.
pub fn copyable_points(a: &FrobeniusAlgebra<C>, tol: f64) -> Result<CopyablePointSet> {
    let report = classify(a, tol)?;
    if !report.commutative.pass {
        return Err(Error::NotCommutative(report.commutative.residual));
    }
    let sf = standard_form(a, tol)?;
    let mut points = Vec::with_capacity(a.dim());
    let mut norms = Vec::with_capacity(a.dim());
    let comult = a.comult();
    for e in &sf.central_idempotents {
        let n = norm_sq(e);
        let p = e.scale(C::new(1.0 / n, 0.0));
        let copied = comult.compose(&p)?;
        let residual = copied.distance(&p.kron(&p).reshape(&[a.dim(), a.dim()], &[])?)?;
        if residual > tol.sqrt() {
            return Err(Error::StandardForm(format!("point is not copyable ({residual:e})")));
        }
        points.push(p);
    }
    // Canonical order: by the position of the dominant component.
    let dominant = |p: &Tensor<C>| {
        let d = p.data();
        (0..d.len()).fold(0, |best, i| if d[i].norm() > d[best].norm() + 1e-9 { i } else { best })
    };
    points.sort_by_key(|p| dominant(p));
    norms.extend(points.iter().map(norm_sq));
    Ok(CopyablePointSet { points, norms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::FrobeniusAlgebra as F;
    use crate::random::random_unitary_tensor;

    const TOL: f64 = 1e-9;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn centre_dimensions() {
        assert_eq!(center(&F::pair_of_pants(3), TOL).unwrap().len(), 1);
        assert_eq!(center(&F::copying(3), TOL).unwrap().len(), 3);
        assert_eq!(center(&F::block_model(&[1, 2]).unwrap(), TOL).unwrap().len(), 2);
    }

    #[test]
    fn centre_vectors_commute_with_everything() {
        let a = F::block_model(&[2, 1]).unwrap();
        for z in center(&a, TOL).unwrap() {
            for i in 0..a.dim() {
                let e = Tensor::basis_state(a.dim(), i);
                let l = a.product(&z, &e).unwrap();
                let r = a.product(&e, &z).unwrap();
                assert!(l.distance(&r).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn block_sizes_of_simple_examples() {
        assert_eq!(standard_form(&F::pair_of_pants(3), TOL).unwrap().block_sizes, vec![3]);
        assert_eq!(standard_form(&F::copying(4), TOL).unwrap().block_sizes, vec![1, 1, 1, 1]);
        let mut rng = random::rng(11);
        let a = F::block_model(&[1, 2, 1]).unwrap();
        let conj = a.transport(&random_unitary_tensor(&mut rng, 6)).unwrap();
        let sf = standard_form(&conj, TOL).unwrap();
        assert_eq!(sf.block_sizes, vec![2, 1, 1]);
    }

    #[test]
    fn iso_is_a_unitary_star_isomorphism_for_conjugates() {
        let mut rng = random::rng(5);
        let a = F::block_model(&[2, 1]).unwrap();
        let conj = a.transport(&random_unitary_tensor(&mut rng, 5)).unwrap();
        let sf = standard_form(&conj, TOL).unwrap();
        let iso = &sf.iso;
        let lhs = iso.compose(conj.mult()).unwrap();
        let rhs = sf.block_model.mult().compose(&iso.kron(iso)).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-8);
        assert!(iso.dagger().compose(iso).unwrap().distance(&Tensor::identity(5)).unwrap() < 1e-8);
        assert!(sf.weights.iter().all(|w| (w - 1.0).abs() < 1e-8));
        // Rebuilding the algebra through the inverse reproduces it.
        let back = sf.block_model.transport(&sf.iso_inverse).unwrap();
        assert!(back.approx_same(&conj, 1e-8));
    }

    #[test]
    fn scaled_algebras_have_weighted_blocks() {
        let two = c(2.0);
        let zero = c(0.0);
        let a = F::from_orthogonal_basis(&[vec![two, zero], vec![zero, two]]).unwrap();
        let sf = standard_form(&a, TOL).unwrap();
        assert!(sf.weights.iter().all(|w| (w - 0.25).abs() < 1e-12));
        let lhs = sf.iso.compose(a.mult()).unwrap();
        let rhs = sf.block_model.mult().compose(&sf.iso.kron(&sf.iso)).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-8);
    }

    #[test]
    fn norms() {
        let p = F::pair_of_pants(2);
        assert!((operator_norm(&p, p.unit(), TOL).unwrap() - 1.0).abs() < 1e-9);
        assert!((operator_norm(&p, &Tensor::basis_state(4, 1), TOL).unwrap() - 1.0).abs() < 1e-9);
        let mut rng = random::rng(2);
        let x = random_state(&mut rng, 4);
        let xx = p.product(&p.star(&x).unwrap(), &x).unwrap();
        let n = operator_norm(&p, &x, TOL).unwrap();
        assert!((operator_norm(&p, &xx, TOL).unwrap() - n * n).abs() < 1e-6);
    }

    #[test]
    fn positivity() {
        let p = F::pair_of_pants(2);
        assert!(positive_in_algebra(&p, p.unit(), TOL).unwrap().positive);
        let diag = Tensor::state(vec![c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let w = positive_in_algebra(&p, &diag, TOL).unwrap();
        assert!(!w.positive && (w.block_min_eigenvalues[0] + 1.0).abs() < 1e-9);
        let b = random_state(&mut random::rng(4), 4);
        let bb = p.product(&p.star(&b).unwrap(), &b).unwrap();
        assert!(positive_in_algebra(&p, &bb, TOL).unwrap().positive);
    }

    #[test]
    fn copyable_points_of_basis_algebras() {
        let pts = copyable_points(&F::copying(3), TOL).unwrap();
        assert_eq!(pts.points.len(), 3);
        for p in &pts.points {
            let hits = (0..3).filter(|&i| p.distance(&Tensor::basis_state(3, i)).unwrap() < 1e-9).count();
            assert_eq!(hits, 1);
        }
        let one = copyable_points(&F::pair_of_pants(1), TOL).unwrap();
        assert!(one.points[0].distance(&Tensor::state(vec![c(1.0)])).unwrap() < 1e-12);
        assert!(matches!(copyable_points(&F::pair_of_pants(2), TOL), Err(Error::NotCommutative(_))));
    }

    #[test]
    fn copyable_points_follow_a_unitary() {
        let mut rng = random::rng(9);
        let u = random_unitary_tensor(&mut rng, 3);
        let a = F::copying(3).transport(&u).unwrap();
        let pts = copyable_points(&a, TOL).unwrap();
        for i in 0..3 {
            let image = u.compose(&Tensor::basis_state(3, i)).unwrap();
            assert!(pts.points.iter().any(|p| p.distance(&image).unwrap() < 1e-8));
        }
    }

    #[test]
    fn non_algebras_have_no_standard_form() {
        let bad = F::new(Tensor::<C>::zeros(&[2], &[4]), Tensor::zeros(&[2], &[]), None).unwrap();
        assert!(matches!(standard_form(&bad, TOL), Err(Error::NotAnAlgebra(_))));
    }
}
