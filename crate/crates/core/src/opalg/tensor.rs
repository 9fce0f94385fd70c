//! Matrices on tensor products of flat bases.
//!
//! A tensor of factors with dimensions `d_0, …, d_{r-1}` is indexed
//! lexicographically, factor `0` most significant.

use crate::exactla::{ExactMatrix, Ring, Q};
use num_traits::One;

pub fn kron_all(ring: Ring, ms: &[&ExactMatrix]) -> ExactMatrix {
    ms.iter().fold(ExactMatrix::identity(ring, 1), |acc, m| acc.kron(m))
}

/// Splits a lexicographic index into per-factor indices.
pub fn unflatten(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for f in (0..dims.len()).rev() {
        out[f] = idx % dims[f];
        idx /= dims[f];
    }
    out
}

pub fn flatten(parts: &[usize], dims: &[usize]) -> usize {
    parts.iter().zip(dims).fold(0, |acc, (p, d)| acc * d + p)
}

/// Koszul sign of permuting graded factors: the factor with degree
/// `degs[order[p]]` ends up at position `p`.
pub fn koszul_sign(degs: &[i64], order: &[usize]) -> i32 {
    let mut odd = 0usize;
    for p in 0..order.len() {
        for q in p + 1..order.len() {
            if order[p] > order[q] && (degs[order[p]] * degs[order[q]]).rem_euclid(2) == 1 {
                odd += 1;
            }
        }
    }
    if odd.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Graded swap moving input factor `order[p]` to output position `p`.
pub fn reorder_matrix(ring: Ring, degrees: &[Vec<i64>], order: &[usize]) -> ExactMatrix {
    let dims: Vec<usize> = degrees.iter().map(Vec::len).collect();
    let out_dims: Vec<usize> = order.iter().map(|f| dims[*f]).collect();
    let total: usize = dims.iter().product();
    let mut entries = Vec::with_capacity(total);
    for idx in 0..total {
        let parts = unflatten(idx, &dims);
        let degs: Vec<i64> = parts.iter().enumerate().map(|(f, i)| degrees[f][*i]).collect();
        let out_parts: Vec<usize> = order.iter().map(|f| parts[*f]).collect();
        let sign = koszul_sign(&degs, order);
        entries.push((flatten(&out_parts, &out_dims), idx, if sign == 1 { Q::one() } else { -Q::one() }));
    }
    ExactMatrix::from_triplets(ring, total, total, entries).expect("permutation matrix")
}

/// Degrees of every basis element of a tensor product.
pub fn tensor_degrees(degrees: &[Vec<i64>]) -> Vec<i64> {
    let dims: Vec<usize> = degrees.iter().map(Vec::len).collect();
    let total: usize = dims.iter().product();
    (0..total)
        .map(|idx| unflatten(idx, &dims).iter().enumerate().map(|(f, i)| degrees[f][*i]).sum())
        .collect()
}

/// Block permutation `σ ∘_a τ` in `Σ_{m+n-1}` (all 0-based).
pub fn block_perm(sigma: &[usize], a: usize, tau: &[usize]) -> Vec<usize> {
    let (m, n) = (sigma.len(), tau.len());
    let target_a = sigma[a];
    let pos = |i: usize, at: usize| if i < at { i } else { i + n - 1 };
    let mut p = vec![0; m + n - 1];
    for i in 0..m {
        if i != a {
            p[pos(i, a)] = pos(sigma[i], target_a);
        }
    }
    for j in 0..n {
        p[a + j] = target_a + tau[j];
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_swap_has_sign() {
        let m = reorder_matrix(Ring::Int, &[vec![1], vec![1]], &[1, 0]);
        assert_eq!(m.get(0, 0), -Q::one());
        let m = reorder_matrix(Ring::Int, &[vec![0, 1], vec![2]], &[1, 0]);
        assert_eq!(m.get(0, 0), Q::one());
        assert_eq!(m.get(1, 1), Q::one());
    }

    #[test]
    fn block_permutation() {
        // x has inputs 0,1; y at input 0 with 2 inputs; swap x's inputs
        assert_eq!(block_perm(&[1, 0], 0, &[0, 1]), vec![1, 2, 0]);
        assert_eq!(block_perm(&[0, 1], 1, &[1, 0]), vec![0, 2, 1]);
    }
}
