//! The partition poset complex: strict flags `0̂ = λ_0 < … < λ_k = 1̂` of set
//! partitions of `{1..n}`, its homology and the character of the symmetric
//! group on its top homology.

use crate::barcobar::{reduced_bar, simplicial_bar_complex, BarcobarError};
use crate::exactla::{alternating_trace, homology, q_int, ChainComplex, ExactMatrix, GradedFreeModule, HomologyBasis, HomologySummary, LinAlgError, Ring};
use crate::opalg::{com, Side, SidedModule};
use num_bigint::BigInt;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Largest `n` accepted by [`partition_complex`].
pub const MAX_N: usize = 8;
/// Largest `n` accepted by [`compare_with_bar`].
pub const MAX_COMPARE: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum PartitionError {
    #[error("n = {n} outside 1..={max}")]
    Bounds { n: usize, max: usize },
    #[error("homology is not concentrated in one degree: {0}")]
    NotConcentrated(String),
    #[error("not a set partition of 1..={n}: {detail}")]
    Invalid { n: usize, detail: String },
    #[error(transparent)]
    Linear(#[from] LinAlgError),
    #[error(transparent)]
    Barcobar(#[from] BarcobarError),
}

/// Set partition of `{1..n}`: sorted blocks of sorted labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<u32>>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Vec<u32>>) -> Result<Self, PartitionError> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        let mut all: Vec<u32> = blocks.concat();
        all.sort_unstable();
        if all != (1..=n as u32).collect::<Vec<_>>() {
            return Err(PartitionError::Invalid { n, detail: format!("{blocks:?}") });
        }
        Ok(Partition { blocks })
    }

    /// All partitions of `{1..n}`.
    pub fn all(n: usize) -> Vec<Partition> {
        SidedModule::partitions(n).into_iter().map(|blocks| Partition { blocks }).collect()
    }

    pub fn discrete(n: usize) -> Partition {
        Partition { blocks: (1..=n as u32).map(|x| vec![x]).collect() }
    }

    pub fn indiscrete(n: usize) -> Partition {
        Partition { blocks: vec![(1..=n as u32).collect()] }
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Refinement order: `self ≤ other` when every block of `self` lies in a block of `other`.
    pub fn finer_than(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| other.blocks.iter().any(|c| b.iter().all(|x| c.contains(x))))
    }

    /// Image under a permutation given by `sigma[i-1] = σ(i)`.
    pub fn permuted(&self, sigma: &[u32]) -> Partition {
        let mut blocks: Vec<Vec<u32>> = self.blocks.iter().map(|b| b.iter().map(|x| sigma[*x as usize - 1]).collect()).collect();
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        Partition { blocks }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.blocks.iter().map(|b| b.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", s.join("|"))
    }
}

/// The complex with its flags; flag `j` of degree `k` is basis element `j`.
#[derive(Clone, Debug)]
pub struct PartitionComplex {
    pub n: usize,
    pub complex: ChainComplex,
    pub flags: BTreeMap<i64, Vec<Vec<Partition>>>,
    index: HashMap<Vec<Partition>, (i64, usize)>,
}

impl PartitionComplex {
    /// Permutation matrices of `σ` on flags, per degree.
    pub fn action(&self, sigma: &[u32]) -> Result<BTreeMap<i64, ExactMatrix>, PartitionError> {
        let mut out = BTreeMap::new();
        for (d, fl) in &self.flags {
            let mut entries = Vec::with_capacity(fl.len());
            for (j, f) in fl.iter().enumerate() {
                let image: Vec<Partition> = f.iter().map(|p| p.permuted(sigma)).collect();
                let (_, i) = self.index[&image];
                entries.push((i, j, q_int(1)));
            }
            out.insert(*d, ExactMatrix::from_triplets(self.complex.ring(), fl.len(), fl.len(), entries)?);
        }
        Ok(out)
    }

    /// Alternating trace of `σ` on the flags.
    pub fn lefschetz(&self, sigma: &[u32]) -> Result<BigInt, PartitionError> {
        Ok(alternating_trace(&self.complex, &self.action(sigma)?)?)
    }
}

fn check_n(n: usize, max: usize) -> Result<(), PartitionError> {
    if n == 0 || n > max {
        return Err(PartitionError::Bounds { n, max });
    }
    Ok(())
}

/// Normalized chains of the partition poset, over the integers.
pub fn partition_complex(n: usize) -> Result<PartitionComplex, PartitionError> {
    check_n(n, MAX_N)?;
    let ring = Ring::Int;
    if n == 1 {
        let f = vec![Partition::discrete(1)];
        let module = GradedFreeModule::uniform(0, 1, "flag");
        let complex = ChainComplex::zero_differential(ring, module)?;
        return Ok(PartitionComplex {
            n,
            complex,
            flags: BTreeMap::from([(0, vec![f.clone()])]),
            index: HashMap::from([(f, (0, 0))]),
        });
    }
    let parts = Partition::all(n);
    let top = parts.iter().position(|p| p.blocks.len() == 1).expect("indiscrete");
    let bottom = parts.iter().position(|p| p.blocks.len() == n).expect("discrete");
    // strict coarsenings of each partition
    let up: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| (0..parts.len()).filter(|j| parts[*j].blocks.len() < p.blocks.len() && p.finer_than(&parts[*j])).collect())
        .collect();
    let mut flags: BTreeMap<i64, Vec<Vec<Partition>>> = BTreeMap::new();
    let mut stack = vec![vec![bottom]];
    while let Some(f) = stack.pop() {
        let last = *f.last().expect("nonempty");
        if last == top {
            flags.entry(f.len() as i64 - 1).or_default().push(f.iter().map(|i| parts[*i].clone()).collect());
            continue;
        }
        for j in &up[last] {
            let mut g = f.clone();
            g.push(*j);
            stack.push(g);
        }
    }
    let mut module = GradedFreeModule::new();
    let mut index = HashMap::new();
    for (d, fl) in flags.iter_mut() {
        fl.sort();
        for f in fl.iter() {
            let label = f.iter().map(Partition::to_string).collect::<Vec<_>>().join(" < ");
            let pos = module.push(*d, label);
            index.insert(f.clone(), (*d, pos));
        }
    }
    let mut diffs = BTreeMap::new();
    for (d, fl) in &flags {
        let mut entries = Vec::new();
        for (j, f) in fl.iter().enumerate() {
            for i in 1..f.len() - 1 {
                let mut g = f.clone();
                g.remove(i);
                let (_, r) = index[&g];
                let s = if i % 2 == 0 { 1 } else { -1 };
                entries.push((r, j, q_int(s)));
            }
        }
        if !entries.is_empty() {
            diffs.insert(*d, ExactMatrix::from_triplets(ring, module.rank(d - 1), module.rank(*d), entries)?);
        }
    }
    let complex = ChainComplex::new(ring, module, diffs)?;
    Ok(PartitionComplex { n, complex, flags, index })
}

/// Number of strict flags from `0̂` to `1̂` of each length, counted by the
/// block-count recursion with Stirling numbers.
pub fn count_flags(n: usize) -> BTreeMap<i64, u64> {
    // stirling[b][j]: partitions of a b-set into j blocks
    let mut stirling = vec![vec![0u64; n + 1]; n + 1];
    stirling[0][0] = 1;
    for b in 1..=n {
        for j in 1..=b {
            stirling[b][j] = j as u64 * stirling[b - 1][j] + stirling[b - 1][j - 1];
        }
    }
    // chains[b][k]: strict chains of length k from a partition with b blocks to 1̂
    let mut chains = vec![vec![0u64; n + 1]; n + 1];
    chains[1][0] = 1;
    for b in 2..=n {
        for k in 1..=n {
            chains[b][k] = (1..b).map(|j| stirling[b][j] * chains[j][k - 1]).sum();
        }
    }
    (0..=n).filter(|k| chains[n][*k] > 0).map(|k| (k as i64, chains[n][k])).collect()
}

/// Cycle types of `Σ_n`, each as descending cycle lengths, in lexicographic order.
pub fn cycle_types(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for l in (1..=rest.min(max)).rev() {
            cur.push(l);
            go(rest - l, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A permutation with the given cycle type, as `sigma[i-1] = σ(i)`.
pub fn representative(cycle_type: &[usize]) -> Vec<u32> {
    let n: usize = cycle_type.iter().sum();
    let mut sigma = vec![0u32; n];
    let mut start = 0;
    for l in cycle_type {
        for i in 0..*l {
            sigma[start + i] = (start + (i + 1) % l) as u32 + 1;
        }
        start += l;
    }
    sigma
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterValue {
    pub cycle_type: Vec<usize>,
    pub value: BigInt,
}

fn top_degree(pc: &PartitionComplex) -> Result<i64, PartitionError> {
    let h = homology(&pc.complex)?;
    let degs: Vec<i64> = h.ranks().into_iter().filter(|(_, r)| *r > 0).map(|(d, _)| d).collect();
    match degs.as_slice() {
        [d] if h.is_torsion_free() => Ok(*d),
        _ => Err(PartitionError::NotConcentrated(h.export_text())),
    }
}

/// `χ(σ) = (−1)^{n−1} Σ_k (−1)^k tr(σ | chains_k)`, per cycle type.
pub fn partition_character(n: usize) -> Result<Vec<CharacterValue>, PartitionError> {
    let pc = partition_complex(n)?;
    top_degree(&pc)?;
    let sign = if n % 2 == 1 { 1 } else { -1 };
    cycle_types(n)
        .into_iter()
        .map(|ct| {
            Ok(CharacterValue { value: pc.lefschetz(&representative(&ct))? * sign, cycle_type: ct })
        })
        .collect()
}

/// The same character from the action matrices on rational top homology.
pub fn partition_character_on_homology(n: usize) -> Result<Vec<CharacterValue>, PartitionError> {
    let pc = partition_complex(n)?;
    let top = top_degree(&pc)?;
    let qc = pc.complex.with_ring(Ring::Rat)?;
    let basis = HomologyBasis::new(&qc, top);
    cycle_types(n)
        .into_iter()
        .map(|ct| {
            let g = pc.action(&representative(&ct))?;
            let m = basis.induced(&basis, &g[&top].with_ring(Ring::Rat)?)?;
            let t = m.trace();
            if !t.is_integer() {
                return Err(PartitionError::Linear(LinAlgError::NonIntegralTrace(t.to_string())));
            }
            Ok(CharacterValue { cycle_type: ct, value: t.to_integer() })
        })
        .collect()
}

/// Homology of the partition complex, the tree bar complex and the simplicial
/// bar complex of the commutative operad in arity `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleComparison {
    pub n: usize,
    pub partition: HomologySummary,
    pub tree_bar: HomologySummary,
    pub simplicial_bar: HomologySummary,
}

impl OracleComparison {
    pub fn agree(&self) -> bool {
        self.partition == self.tree_bar && self.tree_bar == self.simplicial_bar
    }
}

impl fmt::Display for OracleComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}: {}", self.n, if self.agree() { "agree" } else { "MISMATCH" })?;
        writeln!(f, "partition complex:\n{}", self.partition.export_text())?;
        writeln!(f, "tree bar:\n{}", self.tree_bar.export_text())?;
        write!(f, "simplicial bar:\n{}", self.simplicial_bar.export_text())
    }
}

pub fn compare_with_bar(n: usize) -> Result<OracleComparison, PartitionError> {
    check_n(n, MAX_COMPARE)?;
    let c = com(Ring::Int, n).map_err(BarcobarError::from)?;
    let partition = homology(&partition_complex(n)?.complex)?;
    let tree_bar = homology(reduced_bar(&c, n)?.complex())?;
    let r = SidedModule::unit(Side::RightModule, c.seq());
    let l = SidedModule::unit(Side::LeftModule, c.seq());
    let simplicial_bar = homology(&simplicial_bar_complex(&r, &c, &l, n)?.complex)?;
    Ok(OracleComparison { n, partition, tree_bar, simplicial_bar })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_complexes() {
        let p2 = partition_complex(2).unwrap();
        assert_eq!(p2.complex.module().ranks(), BTreeMap::from([(1, 1)]));
        let p3 = partition_complex(3).unwrap();
        assert_eq!(p3.complex.module().ranks(), BTreeMap::from([(1, 1), (2, 3)]));
        assert_eq!(homology(&p3.complex).unwrap().ranks(), BTreeMap::from([(2, 2)]));
        assert_eq!(homology(&partition_complex(1).unwrap().complex).unwrap().ranks(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn flag_counts_match_recursion() {
        for n in 1..=5 {
            let pc = partition_complex(n).unwrap();
            let counts: BTreeMap<i64, u64> = pc.flags.iter().map(|(d, f)| (*d, f.len() as u64)).collect();
            assert_eq!(counts, count_flags(n), "n = {n}");
        }
    }

    #[test]
    fn characters() {
        let v = |c: &[CharacterValue]| c.iter().map(|x| x.value.clone()).collect::<Vec<_>>();
        assert_eq!(v(&partition_character(2).unwrap()), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(v(&partition_character(3).unwrap()), vec![BigInt::from(2), BigInt::from(0), BigInt::from(-1)]);
        for n in 2..=4 {
            assert_eq!(partition_character(n).unwrap(), partition_character_on_homology(n).unwrap());
        }
    }

    #[test]
    fn representatives_have_their_cycle_type() {
        assert_eq!(cycle_types(4).len(), 5);
        assert_eq!(representative(&[3, 1]), vec![2, 3, 1, 4]);
        assert_eq!(representative(&[2, 2]), vec![2, 1, 4, 3]);
    }

    #[test]
    fn oracles_agree_small() {
        for n in 1..=4 {
            let c = compare_with_bar(n).unwrap();
            assert!(c.agree(), "{c}");
        }
    }
}
