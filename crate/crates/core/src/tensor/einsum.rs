//! Index-label contraction of several tensors at once.
//!
//! A spec like `"cxk,xab->c|abk"` names every leg of every operand with a
//! single character. Labels shared between operands are summed over, as are
//! labels that appear in no output. The output legs before `|` become row
//! (codomain) legs and those after it column (domain) legs. A label repeated
//! inside one operand picks out the diagonal.

use super::{Scalar, Tensor};
use crate::error::{Error, Result};

/// Upper bound on the number of entries of any intermediate tensor.
const MAX_ENTRIES: usize = 1 << 28;

struct Operand<'a, S> {
    labels: Vec<u8>,
    dims: Vec<usize>,
    data: &'a [S],
}

/// Contract `operands` according to `spec`.
pub fn contract<S: Scalar>(spec: &str, operands: &[&Tensor<S>]) -> Result<Tensor<S>> {
    let bad = || Error::BadSpec(spec.to_owned());
    let (lhs, rhs) = spec.split_once("->").ok_or_else(bad)?;
    let inputs: Vec<&str> = lhs.split(',').collect();
    if inputs.len() != operands.len() {
        return Err(Error::Shape(format!(
            "spec `{spec}` names {} operands, got {}",
            inputs.len(),
            operands.len()
        )));
    }
    let (out_part, in_part) = rhs.split_once('|').unwrap_or((rhs, ""));
    if in_part.contains('|') {
        return Err(bad());
    }
    let out_labels: Vec<u8> = out_part.bytes().collect();
    let in_labels: Vec<u8> = in_part.bytes().collect();

    // Label dimensions, checked for consistency.
    let mut label_dim = [0usize; 256];
    let mut ops = Vec::with_capacity(operands.len());
    for (text, t) in inputs.iter().zip(operands) {
        let labels: Vec<u8> = text.bytes().collect();
        if labels.len() != t.dims().len() {
            return Err(Error::Shape(format!(
                "operand `{text}` has {} labels but the tensor has {} legs",
                labels.len(),
                t.dims().len()
            )));
        }
        for (&l, &d) in labels.iter().zip(t.dims()) {
            if !l.is_ascii_alphanumeric() {
                return Err(bad());
            }
            match label_dim[l as usize] {
                0 => label_dim[l as usize] = d,
                e if e == d => {}
                e => {
                    return Err(Error::Shape(format!(
                        "label `{}` used with dimensions {e} and {d}",
                        l as char
                    )))
                }
            }
        }
        ops.push(Operand { labels, dims: t.dims().to_vec(), data: t.data() });
    }
    let result_labels: Vec<u8> = out_labels.iter().chain(&in_labels).copied().collect();
    for (i, l) in result_labels.iter().enumerate() {
        if result_labels[..i].contains(l) || !ops.iter().any(|o| o.labels.contains(l)) {
            return Err(bad());
        }
    }

    // Fold the operands left to right, summing each label as soon as no
    // later operand or the output needs it.
    let mut acc_labels: Vec<u8> = Vec::new();
    let mut acc_data: Vec<S> = vec![S::one()];
    for k in 0..ops.len() {
        let keep = |l: &u8| {
            result_labels.contains(l) || ops[k + 1..].iter().any(|o| o.labels.contains(l))
        };
        let (labels, data) = pair(&acc_labels, &acc_data, &ops[k], &label_dim, &keep)?;
        acc_labels = labels;
        acc_data = data;
    }

    // Reorder to the requested leg order.
    let out_dims: Vec<usize> = out_labels.iter().map(|&l| label_dim[l as usize]).collect();
    let in_dims: Vec<usize> = in_labels.iter().map(|&l| label_dim[l as usize]).collect();
    let acc_dims: Vec<usize> = acc_labels.iter().map(|&l| label_dim[l as usize]).collect();
    let perm: Vec<usize> = result_labels
        .iter()
        .map(|l| acc_labels.iter().position(|a| a == l).expect("label survives the fold"))
        .collect();
    let acc = Tensor::from_parts(acc_dims, acc_labels.len(), acc_data);
    let permuted = acc.permute(&perm, out_labels.len())?;
    debug_assert_eq!(permuted.out_dims(), &out_dims[..]);
    debug_assert_eq!(permuted.in_dims(), &in_dims[..]);
    Ok(permuted)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Per-label stride of a tensor: the sum of strides of the legs carrying it.
fn label_strides(labels: &[u8], dims: &[usize], universe: &[u8]) -> Vec<usize> {
    let s = strides(dims);
    universe
        .iter()
        .map(|u| labels.iter().zip(&s).filter(|(l, _)| *l == u).map(|(_, st)| *st).sum())
        .collect()
}

fn dedup(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    for &l in labels {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// Contract an accumulator (unique labels) with one operand.
fn pair<S: Scalar>(
    acc_labels: &[u8],
    acc_data: &[S],
    op: &Operand<'_, S>,
    label_dim: &[usize; 256],
    keep: &dyn Fn(&u8) -> bool,
) -> Result<(Vec<u8>, Vec<S>)> {
    let op_unique = dedup(&op.labels);
    let b_only: Vec<u8> = op_unique.iter().filter(|l| !acc_labels.contains(l)).copied().collect();
    let universe: Vec<u8> = acc_labels.iter().chain(&b_only).copied().collect();
    let result: Vec<u8> = universe.iter().filter(|l| keep(l)).copied().collect();
    let result_dims: Vec<usize> = result.iter().map(|&l| label_dim[l as usize]).collect();
    let size: usize = result_dims.iter().product();
    if size > MAX_ENTRIES {
        return Err(Error::SizeBound { got: size, max: MAX_ENTRIES });
    }

    let acc_dims: Vec<usize> = acc_labels.iter().map(|&l| label_dim[l as usize]).collect();
    let na = acc_labels.len();
    let dims_u: Vec<usize> = universe.iter().map(|&l| label_dim[l as usize]).collect();
    let a_str = label_strides(acc_labels, &acc_dims, &universe);
    let b_str = label_strides(&op.labels, &op.dims, &universe);
    let r_str = label_strides(&result, &result_dims, &universe);

    let mut out = vec![S::zero(); size];
    if dims_u.contains(&0) {
        return Ok((result, out));
    }

    // Outer odometer over the accumulator's labels, inner over the rest.
    let mut ia = vec![0usize; na];
    let (mut off_a, mut off_b_outer, mut off_r_outer) = (0usize, 0usize, 0usize);
    loop {
        let a = acc_data[off_a];
        if !a.is_zero() {
            let mut ib = vec![0usize; universe.len() - na];
            let (mut off_b, mut off_r) = (off_b_outer, off_r_outer);
            loop {
                let b = op.data[off_b];
                if !b.is_zero() {
                    out[off_r] = out[off_r].add(a.mul(b));
                }
                let mut k = ib.len();
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    let u = na + k;
                    ib[k] += 1;
                    off_b += b_str[u];
                    off_r += r_str[u];
                    if ib[k] < dims_u[u] {
                        done = false;
                        break;
                    }
                    off_b -= b_str[u] * dims_u[u];
                    off_r -= r_str[u] * dims_u[u];
                    ib[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
        // advance outer
        let mut k = na;
        let mut done = true;
        while k > 0 {
            k -= 1;
            ia[k] += 1;
            off_a += a_str[k];
            off_b_outer += b_str[k];
            off_r_outer += r_str[k];
            if ia[k] < dims_u[k] {
                done = false;
                break;
            }
            off_a -= a_str[k] * dims_u[k];
            off_b_outer -= b_str[k] * dims_u[k];
            off_r_outer -= r_str[k] * dims_u[k];
            ia[k] = 0;
        }
        if done {
            break;
        }
    }
    Ok((result, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mat(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Tensor<Complex64> {
        Tensor::from_fn(&[rows], &[cols], |r, col| c(f(r, col)))
    }

    #[test]
    fn matrix_product_matches_direct_sum() {
        let a = mat(2, 3, |i, j| (i * 3 + j) as f64 + 0.5);
        let b = mat(3, 4, |i, j| (i as f64) - (j as f64) * 0.25);
        let p = contract("ij,jk->i|k", &[&a, &b]).unwrap();
        for i in 0..2 {
            for k in 0..4 {
                let mut s = c(0.0);
                for j in 0..3 {
                    s += a.at(i, j) * b.at(j, k);
                }
                assert!((p.at(i, k) - s).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_and_diagonal() {
        let a = mat(3, 3, |i, j| (i * 3 + j) as f64);
        let t = contract("ii->", &[&a]).unwrap();
        assert_eq!(t.data()[0], c(0.0 + 4.0 + 8.0));
        let d = contract("ii->i", &[&a]).unwrap();
        assert_eq!(d.data(), &[c(0.0), c(4.0), c(8.0)]);
    }

    #[test]
    fn outer_product_and_transpose() {
        let u = Tensor::state(vec![c(1.0), c(2.0)]);
        let v = Tensor::state(vec![c(3.0), c(5.0), c(7.0)]);
        let o = contract("a,b->ab", &[&u, &v]).unwrap();
        assert_eq!(o.dims(), &[2, 3]);
        assert_eq!(o.data()[4], c(10.0));
        let a = mat(2, 3, |i, j| (i * 3 + j) as f64);
        let at = contract("ij->j|i", &[&a]).unwrap();
        assert_eq!(at.at(2, 1), a.at(1, 2));
    }

    #[test]
    fn three_operand_chain_equals_compose() {
        let a = mat(2, 2, |i, j| (i + 2 * j) as f64 + 1.0);
        let b = mat(2, 2, |i, j| (i * j) as f64 - 1.0);
        let d = mat(2, 2, |i, j| (3 * i + j) as f64);
        let e = contract("ij,jk,kl->i|l", &[&a, &b, &d]).unwrap();
        let f = a.compose(&b).unwrap().compose(&d).unwrap();
        assert!(e.distance(&f).unwrap() < 1e-12);
    }

    #[test]
    fn boolean_relation_composition() {
        // R: {0->1, 1->0}, S: {0->0, 1->0}; S∘R = {0->0, 1->0}
        let r = Tensor::from_fn(&[2], &[2], |b, a| a != b);
        let s = Tensor::from_fn(&[2], &[2], |c, _b| c == 0);
        let sr = contract("cb,ba->c|a", &[&s, &r]).unwrap();
        assert_eq!(sr, s.compose(&r).unwrap());
        assert!(sr.at(0, 0) && sr.at(0, 1) && !sr.at(1, 0) && !sr.at(1, 1));
    }

    #[test]
    fn rejects_malformed_specs() {
        let a = mat(2, 2, |_, _| 1.0);
        assert!(contract("ij->", &[&a, &a]).is_err());
        assert!(contract("ij,jk", &[&a, &a]).is_err());
        assert!(contract("ij->k", &[&a]).is_err());
        assert!(contract("ij->ii", &[&a]).is_err());
        assert!(contract("ijk->i", &[&a]).is_err());
        let b = mat(3, 3, |_, _| 1.0);
        assert!(contract("ij,jk->i|k", &[&a, &b]).is_err());
    }
}
