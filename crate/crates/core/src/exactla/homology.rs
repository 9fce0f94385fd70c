use super::sparse::{self, SparseVec};
use super::{rank_over_q, smith_normal_form, ChainComplex, ChainMap, Echelon, ExactMatrix, LinAlgError, Ring, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DegreeHomology {
    pub rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

/// Free rank and torsion per degree; degrees with trivial homology are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub ring: Ring,
    pub degrees: BTreeMap<i64, DegreeHomology>,
}

impl HomologySummary {
    pub fn rank(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, |h| h.rank)
    }

    pub fn torsion(&self, degree: i64) -> &[BigInt] {
        self.degrees.get(&degree).map_or(&[], |h| h.torsion.as_slice())
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.values().all(|h| h.torsion.is_empty())
    }

    pub fn total_rank(&self) -> usize {
        self.degrees.values().map(|h| h.rank).sum()
    }

    /// Nonzero free ranks by degree.
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().filter(|(_, h)| h.rank > 0).map(|(d, h)| (*d, h.rank)).collect()
    }

    /// True if all homology (free and torsion) sits in `degree`.
    pub fn is_concentrated_in(&self, degree: i64) -> bool {
        self.degrees.keys().all(|d| *d == degree)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|(d, h)| if d.rem_euclid(2) == 0 { h.rank as i64 } else { -(h.rank as i64) }).sum()
    }

    /// Degrees negated; torsion is moved by one as for cochains of a free complex.
    pub fn negated(&self) -> HomologySummary {
        let mut degrees: BTreeMap<i64, DegreeHomology> = BTreeMap::new();
        for (d, h) in &self.degrees {
            if h.rank > 0 {
                degrees.entry(-d).or_default().rank = h.rank;
            }
            if !h.torsion.is_empty() {
                degrees.entry(-d - 1).or_default().torsion = h.torsion.clone();
            }
        }
        HomologySummary { ring: self.ring, degrees }
    }

    /// One `degree <k> rank <r> torsion [..]` line per nonzero degree.
    pub fn export_text(&self) -> String {
        let mut s = format!("homology {}\n", self.ring);
        for (d, h) in &self.degrees {
            let t: Vec<String> = h.torsion.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "degree {d} rank {} torsion [{}]", h.rank, t.join(","));
        }
        s
    }
}

/// Homology of a complex: Smith normal form over `ℤ`, ranks over `ℚ`.
pub fn homology(c: &ChainComplex) -> Result<HomologySummary, LinAlgError> {
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    let mut torsion: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    for k in c.degrees().into_iter().chain(c.degrees().into_iter().map(|d| d + 1)) {
        if ranks.contains_key(&k) {
            continue;
        }
        let Some(d) = c.differential(k) else {
            ranks.insert(k, 0);
            continue;
        };
        match c.ring() {
            Ring::Int => {
                let inv = smith_normal_form(d)?;
                ranks.insert(k, inv.len());
                let tors: Vec<BigInt> = inv.into_iter().filter(|x| !x.is_one()).collect();
                if !tors.is_empty() {
                    torsion.insert(k - 1, tors);
                }
            }
            Ring::Rat => {
                ranks.insert(k, rank_over_q(d));
            }
        }
    }
    let mut degrees = BTreeMap::new();
    for k in c.degrees() {
        let free = c.rank(k) - ranks.get(&k).copied().unwrap_or(0) - ranks.get(&(k + 1)).copied().unwrap_or(0);
        let tors = torsion.remove(&k).unwrap_or_default();
        if free > 0 || !tors.is_empty() {
            degrees.insert(k, DegreeHomology { rank: free, torsion: tors });
        }
    }
    Ok(HomologySummary { ring: c.ring(), degrees })
}

/// Rational homology basis in one degree with a coordinate reader.
///
/// Representatives are the cycles of a column-echelon kernel basis that stay
/// independent modulo boundaries, taken in increasing order.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: i64,
    reps: Vec<SparseVec>,
    solver: Echelon,
}

impl HomologyBasis {
    pub fn new(c: &ChainComplex, degree: i64) -> Self {
        let cycles = kernel_basis(c, degree);
        Self::from_candidates(c, degree, cycles).0
    }

    /// Uses caller-supplied cycles as candidates; returns the basis and whether
    /// every candidate was kept (i.e. the candidates were independent in homology).
    pub fn from_candidates(c: &ChainComplex, degree: i64, candidates: Vec<SparseVec>) -> (Self, bool) {
        let mut solver = Echelon::new();
        if let Some(d) = c.differential(degree + 1) {
            for col in d.columns() {
                solver.insert(col, &[]);
            }
        }
        let mut reps = Vec::new();
        let mut all = true;
        for z in candidates {
            if solver.insert(&z, &sparse::unit(reps.len())).is_some() {
                reps.push(z);
            } else {
                all = false;
            }
        }
        (HomologyBasis { degree, reps, solver }, all)
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Coordinates of the class of a cycle.
    pub fn coordinates(&self, cycle: &[(usize, Q)]) -> Result<Vec<Q>, LinAlgError> {
        let (res, combo) = self.solver.reduce(cycle);
        if !res.is_empty() {
            return Err(LinAlgError::NotInSpan);
        }
        let mut out = vec![Q::zero(); self.reps.len()];
        for (i, v) in combo {
            out[i] = v;
        }
        Ok(out)
    }

    /// Matrix of a chain-level map between two homology bases.
    pub fn induced(&self, target: &HomologyBasis, component: &ExactMatrix) -> Result<ExactMatrix, LinAlgError> {
        let mut entries = Vec::new();
        for (j, z) in self.reps.iter().enumerate() {
            for (i, v) in target.coordinates(&component.apply(z))?.into_iter().enumerate() {
                if !v.is_zero() {
                    entries.push((i, j, v));
                }
            }
        }
        ExactMatrix::from_triplets(Ring::Rat, target.dim(), self.dim(), entries)
    }
}

/// Kernel basis of `d_degree` by column reduction; vector `j` ends at index `j`.
pub(crate) fn kernel_basis(c: &ChainComplex, degree: i64) -> Vec<SparseVec> {
    let n = c.rank(degree);
    let Some(d) = c.differential(degree) else {
        return (0..n).map(sparse::unit).collect();
    };
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for j in 0..n {
        let col = d.column(j);
        let (res, combo) = ech.reduce(col);
        if res.is_empty() {
            out.push(sparse::axpy(&sparse::unit(j), &-Q::one(), &combo));
        } else {
            ech.insert(col, &sparse::unit(j));
        }
    }
    out
}

/// Matrix of the map induced on rational homology in `degree`.
pub fn induced_map_on_homology(f: &ChainMap, degree: i64) -> Result<ExactMatrix, LinAlgError> {
    let src = HomologyBasis::new(&f.source, degree);
    let tgt = HomologyBasis::new(&f.target, degree);
    src.induced(&tgt, &f.component(degree))
}

/// Lefschetz number `Σ (−1)^k tr(g_k)` of a chain automorphism.
pub fn alternating_trace(c: &ChainComplex, g: &BTreeMap<i64, ExactMatrix>) -> Result<BigInt, LinAlgError> {
    let get = |k: i64| {
        g.get(&k).cloned().unwrap_or_else(|| ExactMatrix::zeros(c.ring(), c.rank(k), c.rank(k)))
    };
    let mut total = Q::zero();
    for k in c.degrees() {
        let gk = get(k);
        if gk.rows() != c.rank(k) || gk.cols() != c.rank(k) {
            return Err(LinAlgError::Shape(format!("automorphism at degree {k} has wrong shape")));
        }
        let lhs = c.differential_or_zero(k).mul(&gk)?;
        let rhs = get(k - 1).mul(&c.differential_or_zero(k))?;
        if lhs.sub(&rhs)?.nnz() != 0 {
            return Err(LinAlgError::NotEquivariant { degree: k });
        }
        let t = gk.trace();
        if k.rem_euclid(2) == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    if !total.is_integer() {
        return Err(LinAlgError::NonIntegralTrace(total.to_string()));
    }
    Ok(total.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::GradedFreeModule;

    fn two_term(factor: i64) -> ChainComplex {
        let mut m = GradedFreeModule::new();
        m.push(1, "a".into());
        m.push(0, "b".into());
        let d = ExactMatrix::from_dense_i64(Ring::Int, &[vec![factor]]);
        ChainComplex::new(Ring::Int, m, BTreeMap::from([(1, d)])).unwrap()
    }

    #[test]
    fn identity_and_multiplication() {
        let h = homology(&two_term(1)).unwrap();
        assert!(h.degrees.is_empty());
        let h = homology(&two_term(2)).unwrap();
        assert_eq!(h.rank(0), 0);
        assert_eq!(h.torsion(0), &[BigInt::from(2)]);
        assert_eq!(h.rank(1), 0);
    }

    #[test]
    fn single_generator() {
        let c = ChainComplex::zero_differential(Ring::Int, GradedFreeModule::uniform(0, 1, "x")).unwrap();
        assert_eq!(homology(&c).unwrap().rank(0), 1);
    }

    #[test]
    fn swap_trace_vanishes() {
        let c = ChainComplex::zero_differential(Ring::Int, GradedFreeModule::uniform(1, 2, "x")).unwrap();
        let flip = ExactMatrix::from_dense_i64(Ring::Int, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(alternating_trace(&c, &BTreeMap::from([(1, flip)])).unwrap(), BigInt::zero());
        let id = ExactMatrix::identity(Ring::Int, 2);
        assert_eq!(alternating_trace(&c, &BTreeMap::from([(1, id)])).unwrap(), BigInt::from(-2));
    }
}
