use super::sparse::{self, SparseVec};
use super::{LinAlgError, Ring, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Sparse matrix with exact entries, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let columns = (0..n).map(sparse::unit).collect();
        ExactMatrix { ring, rows: n, cols: n, columns }
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions are summed.
    pub fn from_triplets<I>(ring: Ring, rows: usize, cols: usize, entries: I) -> Result<Self, LinAlgError>
    where
        I: IntoIterator<Item = (usize, usize, Q)>,
    {
        let mut buckets: Vec<Vec<(usize, Q)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(LinAlgError::Shape(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            buckets[c].push((r, v));
        }
        let columns = buckets.into_iter().map(sparse::from_entries).collect();
        let m = ExactMatrix { ring, rows, cols, columns };
        m.check_ring()?;
        Ok(m)
    }

    /// Builds a matrix from already normalized sparse columns.
    pub fn from_columns(ring: Ring, rows: usize, columns: Vec<SparseVec>) -> Result<Self, LinAlgError> {
        for col in &columns {
            if col.iter().any(|(r, v)| *r >= rows || v.is_zero()) {
                return Err(LinAlgError::Shape("column entry out of range or zero".into()));
            }
            if col.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(LinAlgError::Shape("column entries not strictly increasing".into()));
            }
        }
        let m = ExactMatrix { ring, rows, cols: columns.len(), columns };
        m.check_ring()?;
        Ok(m)
    }

    pub fn from_dense_i64(ring: Ring, data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let entries = data.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().map(move |(j, v)| (i, j, super::q_int(*v)))
        });
        Self::from_triplets(ring, rows, cols, entries).expect("integer entries")
    }

    fn check_ring(&self) -> Result<(), LinAlgError> {
        if self.ring == Ring::Int {
            for (c, col) in self.columns.iter().enumerate() {
                for (r, v) in col {
                    if !v.is_integer() {
                        return Err(LinAlgError::NotIntegral { row: *r, col: c, value: v.to_string() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Same entries viewed over another ring; fails if they are not integral for `Ring::Int`.
    pub fn with_ring(&self, ring: Ring) -> Result<Self, LinAlgError> {
        let m = ExactMatrix { ring, ..self.clone() };
        m.check_ring()?;
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, Q)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        sparse::get(&self.columns[c], r)
    }

    /// All nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Rows as sparse vectors.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c, v.clone()));
            }
        }
        rows
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix { ring: self.ring, rows: self.cols, cols: self.rows, columns: self.row_vectors() }
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &[(usize, Q)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (j, x) in v {
            for (i, a) in &self.columns[*j] {
                *acc.entry(*i).or_insert_with(Q::zero) += a * x;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        Ok(ExactMatrix { ring: join(self.ring, other.ring), rows: self.rows, cols: other.cols, columns })
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinAlgError> {
        self.axpy(&Q::one(), other)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinAlgError> {
        self.axpy(&-Q::one(), other)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &Q, other: &ExactMatrix) -> Result<ExactMatrix, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| sparse::axpy(a, c, b))
            .collect();
        let ring = if c.is_integer() { join(self.ring, other.ring) } else { Ring::Rat };
        Ok(ExactMatrix { ring, rows: self.rows, cols: self.cols, columns })
    }

    pub fn scaled(&self, c: &Q) -> ExactMatrix {
        let columns = self.columns.iter().map(|col| sparse::scale(col, c)).collect();
        let ring = if c.is_integer() { self.ring } else { Ring::Rat };
        ExactMatrix { ring, rows: self.rows, cols: self.cols, columns }
    }

    /// Kronecker product; index `(i, j)` of the product space is `i * dim_right + j`.
    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let rows = self.rows * other.rows;
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for a in &self.columns {
            for b in &other.columns {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (k, y) in b {
                        col.push((i * other.rows + k, x * y));
                    }
                }
                columns.push(col);
            }
        }
        ExactMatrix { ring: join(self.ring, other.ring), rows, cols: self.cols * other.cols, columns }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).fold(Q::zero(), |a, b| a + b)
    }

    /// Dense integer copy; panics on non-integral entries.
    pub fn to_dense_int(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            assert!(v.is_integer(), "non-integral entry");
            out[r][c] = v.to_integer();
        }
        out
    }

    /// Stable text export: a header line and one `row col value` triple per line.
    pub fn export_text(&self) -> String {
        let mut s = format!("matrix {} {} {}\n", self.ring, self.rows, self.cols);
        let mut triples: Vec<(usize, usize, &Q)> = self.entries().collect();
        triples.sort_by_key(|(r, c, _)| (*r, *c));
        for (r, c, v) in triples {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<ExactMatrix, LinAlgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| LinAlgError::Parse("empty matrix".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "matrix" {
            return Err(LinAlgError::Parse(format!("bad matrix header `{header}`")));
        }
        let ring: Ring = h[1].parse()?;
        let rows = parse_usize(h[2])?;
        let cols = parse_usize(h[3])?;
        let mut entries = Vec::new();
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(LinAlgError::Parse(format!("bad matrix entry `{line}`")));
            }
            let v: Q = t[2].parse().map_err(|_| LinAlgError::Parse(format!("bad number `{}`", t[2])))?;
            entries.push((parse_usize(t[0])?, parse_usize(t[1])?, v));
        }
        ExactMatrix::from_triplets(ring, rows, cols, entries)
    }
}

fn parse_usize(s: &str) -> Result<usize, LinAlgError> {
    s.parse().map_err(|_| LinAlgError::Parse(format!("expected a non-negative integer, got `{s}`")))
}

fn join(a: Ring, b: Ring) -> Ring {
    if a == Ring::Int && b == Ring::Int {
        Ring::Int
    } else {
        Ring::Rat
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = ExactMatrix::from_dense_i64(Ring::Int, &[vec![1, 2], vec![0, 1]]);
        let b = ExactMatrix::from_dense_i64(Ring::Int, &[vec![1, 0], vec![3, 1]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, ExactMatrix::from_dense_i64(Ring::Int, &[vec![7, 2], vec![3, 1]]));
        assert_eq!(ab.transpose().transpose(), ab);
    }

    #[test]
    fn text_round_trip() {
        let a = ExactMatrix::from_dense_i64(Ring::Int, &[vec![1, -2, 0], vec![0, 0, 5]]);
        assert_eq!(ExactMatrix::parse_text(&a.export_text()).unwrap(), a);
    }

    #[test]
    fn int_ring_rejects_fractions() {
        let half = Q::new(1.into(), 2.into());
        assert!(ExactMatrix::from_triplets(Ring::Int, 1, 1, [(0, 0, half)]).is_err());
    }
}
