use super::sparse::{self, SparseVec};
use super::Q;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Incremental echelon basis over `ℚ` whose rows remember how they were built.
///
/// Each stored row has a pivot (its lowest nonzero index, normalized to 1) and a
/// `track` vector expressing the row in some auxiliary coordinates chosen by
/// the caller.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(SparseVec, SparseVec)>,
    by_pivot: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.by_pivot.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Reduces `v` against the stored rows. Returns the residual and the
    /// accumulated track of the subtracted combination.
    pub fn reduce(&self, v: &[(usize, Q)]) -> (SparseVec, SparseVec) {
        let mut work: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let mut combo: BTreeMap<usize, Q> = BTreeMap::new();
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).find(|(k, _)| self.by_pivot.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let (row, track) = &self.rows[self.by_pivot[&k]];
            for (i, x) in row {
                let e = work.entry(*i).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    work.remove(i);
                }
            }
            for (i, x) in track {
                let e = combo.entry(*i).or_insert_with(Q::zero);
                *e += &c * x;
                if e.is_zero() {
                    combo.remove(i);
                }
            }
            cursor = k + 1;
        }
        (work.into_iter().collect(), combo.into_iter().collect())
    }

    /// Inserts `v` (with its track) if it is independent of the stored rows.
    /// Returns the new pivot, or `None` when `v` was already in the span.
    pub fn insert(&mut self, v: &[(usize, Q)], track: &[(usize, Q)]) -> Option<usize> {
        let (res, combo) = self.reduce(v);
        if res.is_empty() {
            return None;
        }
        let track = sparse::axpy(track, &-Q::one(), &combo);
        let pivot = res[0].0;
        let inv = Q::one() / &res[0].1;
        let row = sparse::scale(&res, &inv);
        let track = sparse::scale(&track, &inv);
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push((row, track));
        Some(pivot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q_int;

    #[test]
    fn tracks_combinations() {
        let mut e = Echelon::new();
        let a = vec![(0, q_int(1)), (1, q_int(1))];
        let b = vec![(1, q_int(1)), (2, q_int(1))];
        e.insert(&a, &sparse::unit(0));
        e.insert(&b, &sparse::unit(1));
        // a + 2b
        let v = vec![(0, q_int(1)), (1, q_int(3)), (2, q_int(2))];
        let (res, combo) = e.reduce(&v);
        assert!(res.is_empty());
        assert_eq!(combo, vec![(0, q_int(1)), (1, q_int(2))]);
        assert!(e.insert(&v, &[]).is_none());
    }
}
