//! Sorted sparse vectors with rational entries.

use super::Q;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse vector as `(index, value)` pairs, strictly increasing indices, no zeros.
pub type SparseVec = Vec<(usize, Q)>;

/// Builds a sparse vector from unsorted entries, summing repeated indices.
pub fn from_entries<I: IntoIterator<Item = (usize, Q)>>(entries: I) -> SparseVec {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, v) in entries {
        if v.is_zero() {
            continue;
        }
        let slot = acc.entry(i).or_insert_with(Q::zero);
        *slot += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn unit(i: usize) -> SparseVec {
    vec![(i, Q::one())]
}

/// Returns `a + c·b`.
pub fn axpy(a: &[(usize, Q)], c: &Q, b: &[(usize, Q)]) -> SparseVec {
    if c.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(a: &[(usize, Q)], c: &Q) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

pub fn get(a: &[(usize, Q)], i: usize) -> Q {
    match a.binary_search_by_key(&i, |(k, _)| *k) {
        Ok(p) => a[p].1.clone(),
        Err(_) => Q::zero(),
    }
}

pub fn dot(a: &[(usize, Q)], b: &[(usize, Q)]) -> Q {
    let (mut i, mut j) = (0, 0);
    let mut s = Q::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &a[i].1 * &b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}
