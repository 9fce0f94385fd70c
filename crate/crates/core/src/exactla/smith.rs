//! Smith normal form and rank by sparse elimination.
//!
//! Unit pivots are eliminated sparsely first (cheapest rows first), then the
//! leftover block is diagonalized densely and the diagonal is normalized into
//! a divisibility chain.

use super::{ExactMatrix, LinAlgError, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

type IntRow = Vec<(usize, BigInt)>;

struct Eliminator {
    rows: Vec<IntRow>,
    col_rows: Vec<BTreeSet<usize>>,
    units: usize,
}

impl Eliminator {
    fn new(rows: Vec<IntRow>, ncols: usize) -> Self {
        let mut col_rows = vec![BTreeSet::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].insert(r);
            }
        }
        Eliminator { rows, col_rows, units: 0 }
    }

    fn entry(&self, r: usize, c: usize) -> &BigInt {
        let row = &self.rows[r];
        let p = row.binary_search_by_key(&c, |(k, _)| *k).expect("indexed entry");
        &row[p].1
    }

    /// `row[r] -= f · row[p]`, keeping the column index in sync.
    fn row_sub(&mut self, r: usize, f: &BigInt, p: usize) {
        let a = std::mem::take(&mut self.rows[r]);
        let b = &self.rows[p];
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, -(f * &b[j].1)));
                self.col_rows[b[j].0].insert(r);
                j += 1;
            } else {
                let v = &a[i].1 - f * &b[j].1;
                if v.is_zero() {
                    self.col_rows[a[i].0].remove(&r);
                } else {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[r] = out;
    }

    fn eliminate_units(&mut self) {
        loop {
            let mut progress = false;
            let mut order: Vec<usize> = (0..self.col_rows.len()).filter(|c| !self.col_rows[*c].is_empty()).collect();
            order.sort_by_key(|c| self.col_rows[*c].len());
            for c in order {
                let mut best: Option<(usize, usize)> = None;
                for &r in &self.col_rows[c] {
                    if self.entry(r, c).abs().is_one() {
                        let len = self.rows[r].len();
                        if best.is_none_or(|(_, l)| len < l) {
                            best = Some((r, len));
                        }
                    }
                }
                let Some((p, _)) = best else { continue };
                let pivot = self.entry(p, c).clone();
                let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|r| *r != p).collect();
                for r in others {
                    let f = self.entry(r, c) * &pivot;
                    self.row_sub(r, &f, p);
                }
                for (col, _) in std::mem::take(&mut self.rows[p]) {
                    self.col_rows[col].remove(&p);
                }
                self.units += 1;
                progress = true;
            }
            if !progress {
                break;
            }
        }
    }

    /// Remaining nonzero block as a dense matrix.
    fn residual(&self) -> Vec<Vec<BigInt>> {
        let cols: Vec<usize> = (0..self.col_rows.len()).filter(|c| !self.col_rows[*c].is_empty()).collect();
        let mut pos = vec![usize::MAX; self.col_rows.len()];
        for (k, c) in cols.iter().enumerate() {
            pos[*c] = k;
        }
        self.rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut dense = vec![BigInt::zero(); cols.len()];
                for (c, v) in r {
                    dense[pos[*c]] = v.clone();
                }
                dense
            })
            .collect()
    }
}

fn int_rows(m: &ExactMatrix) -> Vec<IntRow> {
    m.row_vectors()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, v.to_integer())).collect())
        .collect()
}

/// Invariant factors `d_1 | d_2 | …` of an integer matrix; their count is the rank.
pub fn smith_normal_form(m: &ExactMatrix) -> Result<Vec<BigInt>, LinAlgError> {
    if m.ring() != Ring::Int {
        m.with_ring(Ring::Int)?;
    }
    let mut e = Eliminator::new(int_rows(m), m.cols());
    e.eliminate_units();
    let mut diag = vec![BigInt::one(); e.units];
    diag.extend(dense_diagonalize(e.residual()));
    Ok(normalize_chain(diag))
}

/// Rank over `ℚ`; columns are scaled to clear denominators first.
pub fn rank_over_q(m: &ExactMatrix) -> usize {
    let mut rows: Vec<IntRow> = vec![Vec::new(); m.rows()];
    for (c, col) in m.columns().iter().enumerate() {
        let l = col.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        for (r, v) in col {
            rows[*r].push((c, (v * num_rational::BigRational::from_integer(l.clone())).to_integer()));
        }
    }
    let mut e = Eliminator::new(rows, m.cols());
    e.eliminate_units();
    e.units + dense_rank(e.residual())
}

fn dense_diagonalize(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs(&a, t, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][t..n].iter_mut().zip(&top[t][t..n]) {
                        *x -= &q * y;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    for row in a.iter_mut().skip(t) {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
            // a smaller remainder exists in row or column t: bring it to the pivot
            let mut best = (t, t);
            for i in t..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn min_abs(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, v) in row.iter().enumerate().skip(c0) {
            if !v.is_zero() && best.as_ref().is_none_or(|(_, _, b)| v.abs() < *b) {
                best = Some((i, j, v.abs()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn dense_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..m {
            if a[i][c].is_zero() {
                continue;
            }
            let (x, y) = (a[rank][c].clone(), a[i][c].clone());
            let (top, rest) = a.split_at_mut(i);
            for (u, w) in rest[0][c..n].iter_mut().zip(&top[rank][c..n]) {
                *u = &x * &*u - &y * w;
            }
            let g = a[i].iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if g > BigInt::one() {
                for v in a[i].iter_mut() {
                    *v /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = ExactMatrix::from_dense_i64(Ring::Int, rows);
        smith_normal_form(&m).unwrap().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert!(snf(&[vec![0, 0], vec![0, 0]]).is_empty());
        assert_eq!(snf(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(snf(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf(&[vec![6, 0, 0], vec![0, 10, 0], vec![0, 0, 15]]), vec![1, 30, 30]);
    }

    #[test]
    fn rank_q_ignores_torsion() {
        let m = ExactMatrix::from_dense_i64(Ring::Int, &[vec![2, 4], vec![6, 8], vec![4, 8]]);
        assert_eq!(rank_over_q(&m), 2);
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let r = ExactMatrix::from_triplets(Ring::Rat, 2, 2, [(0, 0, half.clone()), (1, 1, half)]).unwrap();
        assert_eq!(rank_over_q(&r), 2);
    }
}
