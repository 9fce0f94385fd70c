use super::{ExactMatrix, LinAlgError, Ring, Q};
use num_traits::One;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

/// Graded free module: for each degree an ordered list of basis labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedFreeModule {
    parts: BTreeMap<i64, Vec<String>>,
}

impl GradedFreeModule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(parts: BTreeMap<i64, Vec<String>>) -> Result<Self, LinAlgError> {
        let m = GradedFreeModule { parts: parts.into_iter().filter(|(_, v)| !v.is_empty()).collect() };
        m.check_labels()?;
        Ok(m)
    }

    /// Module with `rank` generators in one degree, labelled `prefix0, prefix1, …`.
    pub fn uniform(degree: i64, rank: usize, prefix: &str) -> Self {
        let mut parts = BTreeMap::new();
        if rank > 0 {
            parts.insert(degree, (0..rank).map(|i| format!("{prefix}{i}")).collect());
        }
        GradedFreeModule { parts }
    }

    fn check_labels(&self) -> Result<(), LinAlgError> {
        for (d, labels) in &self.parts {
            let mut seen = HashSet::with_capacity(labels.len());
            for l in labels {
                if !seen.insert(l.as_str()) {
                    return Err(LinAlgError::DuplicateLabel { degree: *d, label: l.clone() });
                }
            }
        }
        Ok(())
    }

    /// Appends a generator and returns its position within its degree.
    pub fn push(&mut self, degree: i64, label: String) -> usize {
        let v = self.parts.entry(degree).or_default();
        v.push(label);
        v.len() - 1
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.parts.get(&degree).map_or(0, Vec::len)
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.parts.get(&degree).map_or(&[], Vec::as_slice)
    }

    /// Degrees with nonzero rank, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.parts.keys().copied().collect()
    }

    pub fn total_rank(&self) -> usize {
        self.parts.values().map(Vec::len).sum()
    }

    /// `(degree, position)` of every generator in the flat order (degree ascending).
    pub fn flat(&self) -> Vec<(i64, usize)> {
        self.parts.iter().flat_map(|(d, v)| (0..v.len()).map(move |i| (*d, i))).collect()
    }

    pub fn flat_degrees(&self) -> Vec<i64> {
        self.flat().into_iter().map(|(d, _)| d).collect()
    }

    /// Flat index of `(degree, position)`.
    pub fn flat_index(&self, degree: i64, pos: usize) -> usize {
        self.parts.range(..degree).map(|(_, v)| v.len()).sum::<usize>() + pos
    }

    pub fn shifted(&self, by: i64) -> Self {
        GradedFreeModule { parts: self.parts.iter().map(|(d, v)| (d + by, v.clone())).collect() }
    }

    pub fn negated(&self) -> Self {
        GradedFreeModule { parts: self.parts.iter().map(|(d, v)| (-d, v.clone())).collect() }
    }

    /// Rank per degree, for compact comparisons.
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.parts.iter().map(|(d, v)| (*d, v.len())).collect()
    }
}

/// Chain complex of graded free modules; `d_k` maps degree `k` to degree `k − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    module: GradedFreeModule,
    diffs: BTreeMap<i64, ExactMatrix>,
}

impl ChainComplex {
    /// Validates shapes, ring and `d ∘ d = 0`.
    pub fn new(ring: Ring, module: GradedFreeModule, diffs: BTreeMap<i64, ExactMatrix>) -> Result<Self, LinAlgError> {
        module.check_labels()?;
        let mut kept = BTreeMap::new();
        for (k, d) in diffs {
            if d.rows() != module.rank(k - 1) || d.cols() != module.rank(k) {
                return Err(LinAlgError::Shape(format!(
                    "differential at degree {k} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    module.rank(k - 1),
                    module.rank(k)
                )));
            }
            let d = if ring == Ring::Int { d.with_ring(Ring::Int)? } else { d.with_ring(Ring::Rat)? };
            if !d.is_zero() {
                kept.insert(k, d);
            }
        }
        for (k, d) in &kept {
            if let Some(below) = kept.get(&(k - 1)) {
                if !below.mul(d)?.is_zero() {
                    return Err(LinAlgError::NotDifferential { degree: *k });
                }
            }
        }
        Ok(ChainComplex { ring, module, diffs: kept })
    }

    /// Complex with zero differential.
    pub fn zero_differential(ring: Ring, module: GradedFreeModule) -> Result<Self, LinAlgError> {
        Self::new(ring, module, BTreeMap::new())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Same complex over `ring`; fails if an entry is not integral.
    pub fn with_ring(&self, ring: Ring) -> Result<Self, LinAlgError> {
        Self::new(ring, self.module.clone(), self.diffs.clone())
    }

    pub fn module(&self) -> &GradedFreeModule {
        &self.module
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.module.rank(degree)
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.module.degrees()
    }

    /// The stored differential out of `degree`, if nonzero.
    pub fn differential(&self, degree: i64) -> Option<&ExactMatrix> {
        self.diffs.get(&degree)
    }

    pub fn differential_or_zero(&self, degree: i64) -> ExactMatrix {
        self.diffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.ring, self.rank(degree - 1), self.rank(degree)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.module.ranks().iter().map(|(d, r)| if d.rem_euclid(2) == 0 { *r as i64 } else { -(*r as i64) }).sum()
    }

    /// Linear dual: degrees negated, differentials transposed (cohomological reindexing).
    pub fn dual(&self) -> ChainComplex {
        let diffs = self.diffs.iter().map(|(k, d)| (-(k - 1), d.transpose())).collect();
        ChainComplex { ring: self.ring, module: self.module.negated(), diffs }
    }

    /// Stable text export: generators per degree, then sparse differential triples.
    pub fn export_text(&self) -> String {
        let mut s = format!("complex {}\n", self.ring);
        for d in self.module.degrees() {
            s.push_str(&format!("degree {d} rank {}\n", self.rank(d)));
            for (i, l) in self.module.labels(d).iter().enumerate() {
                s.push_str(&format!("  {i} {l}\n"));
            }
        }
        for (k, d) in &self.diffs {
            s.push_str(&format!("differential {k}\n"));
            for (r, c, v) in d.entries() {
                s.push_str(&format!("  {r} {c} {v}\n"));
            }
        }
        s
    }
}

/// n-fold tensor product with index bookkeeping.
#[derive(Clone, Debug)]
pub struct MultiTensor {
    pub complex: ChainComplex,
    factor_flat: Vec<Vec<(i64, usize)>>,
    factor_offsets: Vec<BTreeMap<i64, usize>>,
    index: HashMap<Vec<usize>, (i64, usize)>,
    tuples: BTreeMap<i64, Vec<Vec<usize>>>,
}

impl MultiTensor {
    /// Position of the tensor of the given factor generators, as `(degree, position)`.
    pub fn index_of(&self, parts: &[(i64, usize)]) -> Option<(i64, usize)> {
        let key: Vec<usize> = parts.iter().enumerate().map(|(f, (d, p))| self.factor_offsets[f].get(d).map(|o| o + p)).collect::<Option<_>>()?;
        self.index.get(&key).copied()
    }

    /// Factor generators of the tensor generator at `(degree, position)`.
    pub fn factors_of(&self, degree: i64, pos: usize) -> Vec<(i64, usize)> {
        self.tuples[&degree][pos].iter().enumerate().map(|(f, g)| self.factor_flat[f][*g]).collect()
    }

    pub fn arity(&self) -> usize {
        self.factor_flat.len()
    }
}

/// Tensor product of several complexes with the Koszul sign rule
/// `d(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy`.
pub fn tensor_many(factors: &[&ChainComplex]) -> Result<MultiTensor, LinAlgError> {
    let ring = factors.first().map_or(Ring::Int, |c| c.ring);
    for c in factors {
        if c.ring != ring {
            return Err(LinAlgError::RingMismatch { expected: ring, found: c.ring });
        }
    }
    let factor_flat: Vec<Vec<(i64, usize)>> = factors.iter().map(|c| c.module.flat()).collect();
    let factor_offsets: Vec<BTreeMap<i64, usize>> = factors
        .iter()
        .map(|c| {
            let mut off = BTreeMap::new();
            let mut acc = 0;
            for d in c.module.degrees() {
                off.insert(d, acc);
                acc += c.rank(d);
            }
            off
        })
        .collect();
    let mut tuples: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
    let mut current = Vec::with_capacity(factors.len());
    fn rec(
        f: usize,
        deg: i64,
        flat: &[Vec<(i64, usize)>],
        cur: &mut Vec<usize>,
        out: &mut BTreeMap<i64, Vec<Vec<usize>>>,
    ) {
        if f == flat.len() {
            out.entry(deg).or_default().push(cur.clone());
            return;
        }
        for (g, (d, _)) in flat[f].iter().enumerate() {
            cur.push(g);
            rec(f + 1, deg + d, flat, cur, out);
            cur.pop();
        }
    }
    if factors.iter().all(|c| c.module.total_rank() > 0) {
        rec(0, 0, &factor_flat, &mut current, &mut tuples);
    }
    let mut index = HashMap::new();
    let mut module = GradedFreeModule::new();
    for (d, ts) in &tuples {
        for (p, t) in ts.iter().enumerate() {
            index.insert(t.clone(), (*d, p));
            let label = t
                .iter()
                .enumerate()
                .map(|(f, g)| {
                    let (fd, fp) = factor_flat[f][*g];
                    factors[f].module.labels(fd)[fp].clone()
                })
                .collect::<Vec<_>>()
                .join(" ⊗ ");
            module.push(*d, label);
        }
    }
    let mut diffs = BTreeMap::new();
    for (d, ts) in &tuples {
        let mut entries = Vec::new();
        for (col, t) in ts.iter().enumerate() {
            let mut sign_deg = 0i64;
            for (f, g) in t.iter().enumerate() {
                let (fd, fp) = factor_flat[f][*g];
                if let Some(df) = factors[f].differential(fd) {
                    let sign = if sign_deg.rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
                    for (r, v) in df.column(fp) {
                        let mut nt = t.clone();
                        nt[f] = factor_offsets[f][&(fd - 1)] + r;
                        let (nd, np) = index[&nt];
                        debug_assert_eq!(nd, d - 1);
                        entries.push((np, col, &sign * v));
                    }
                }
                sign_deg += fd;
            }
        }
        if !entries.is_empty() {
            diffs.insert(*d, ExactMatrix::from_triplets(ring, module.rank(d - 1), ts.len(), entries)?);
        }
    }
    let complex = ChainComplex::new(ring, module, diffs)?;
    Ok(MultiTensor { complex, factor_flat, factor_offsets, index, tuples })
}

/// Tensor product of two complexes; generators are ordered pairs.
pub fn tensor(c: &ChainComplex, d: &ChainComplex) -> Result<ChainComplex, LinAlgError> {
    Ok(tensor_many(&[c, d])?.complex)
}

/// Degree-preserving chain map, verified on construction.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    components: BTreeMap<i64, ExactMatrix>,
}

impl ChainMap {
    pub fn new(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        components: BTreeMap<i64, ExactMatrix>,
    ) -> Result<Self, LinAlgError> {
        for (k, f) in &components {
            if f.rows() != target.rank(*k) || f.cols() != source.rank(*k) {
                return Err(LinAlgError::Shape(format!("chain map component at degree {k} has wrong shape")));
            }
        }
        let map = ChainMap { source, target, components };
        let mut degrees: Vec<i64> = map.source.degrees();
        degrees.extend(map.target.degrees());
        degrees.sort_unstable();
        degrees.dedup();
        for k in degrees {
            let lhs = map.target.differential_or_zero(k).mul(&map.component(k))?;
            let rhs = map.component(k - 1).mul(&map.source.differential_or_zero(k))?;
            if lhs.sub(&rhs)?.nnz() != 0 {
                return Err(LinAlgError::NotChainMap { degree: k });
            }
        }
        Ok(map)
    }

    pub fn identity(c: Arc<ChainComplex>) -> Self {
        let components = c.degrees().into_iter().map(|d| (d, ExactMatrix::identity(c.ring(), c.rank(d)))).collect();
        ChainMap { source: c.clone(), target: c, components }
    }

    pub fn component(&self, degree: i64) -> ExactMatrix {
        self.components.get(&degree).cloned().unwrap_or_else(|| {
            ExactMatrix::zeros(self.source.ring(), self.target.rank(degree), self.source.rank(degree))
        })
    }

    pub fn components(&self) -> &BTreeMap<i64, ExactMatrix> {
        &self.components
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> Result<ChainMap, LinAlgError> {
        let mut comps = BTreeMap::new();
        for d in first.source.degrees() {
            comps.insert(d, self.component(d).mul(&first.component(d))?);
        }
        ChainMap::new(first.source.clone(), self.target.clone(), comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(degree: i64) -> ChainComplex {
        ChainComplex::zero_differential(Ring::Int, GradedFreeModule::uniform(degree, 1, "e")).unwrap()
    }

    #[test]
    fn rejects_nonzero_square() {
        let mut m = GradedFreeModule::new();
        for d in 0..3 {
            m.push(d, format!("x{d}"));
        }
        let one = ExactMatrix::identity(Ring::Int, 1);
        let diffs = BTreeMap::from([(1, one.clone()), (2, one)]);
        assert_eq!(ChainComplex::new(Ring::Int, m, diffs), Err(LinAlgError::NotDifferential { degree: 2 }));
    }

    #[test]
    fn tensor_of_odd_classes() {
        let t = tensor(&single(1), &single(1)).unwrap();
        assert_eq!(t.rank(2), 1);
        assert_eq!(t.module().total_rank(), 1);
        let u = tensor(&single(0), &single(3)).unwrap();
        assert_eq!(u.rank(3), 1);
    }
}
