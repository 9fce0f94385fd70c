use super::operad::{check_partial_axioms, partial_keys, tensor_reindex, PartialKey};
use super::symseq::{adjacent, invert_perm, permute, Perm, SymSeq};
use super::tensor::{kron_all, reorder_matrix, tensor_degrees};
use super::{Cooperad, Operad, OpalgError};
use crate::exactla::{ExactMatrix, LinAlgError, Ring};
use crate::trees::set_partitions;
use std::collections::BTreeMap;
use std::fmt;

/// A partition of `{1..N}` into blocks sorted by minimum, each block sorted.
pub type LeftKey = Vec<Vec<u32>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    LeftModule,
    RightModule,
    LeftComodule,
    RightComodule,
}

impl Side {
    pub fn is_left(self) -> bool {
        matches!(self, Side::LeftModule | Side::LeftComodule)
    }

    pub fn is_comodule(self) -> bool {
        matches!(self, Side::LeftComodule | Side::RightComodule)
    }

    pub fn flipped(self) -> Side {
        match self {
            Side::LeftModule => Side::LeftComodule,
            Side::LeftComodule => Side::LeftModule,
            Side::RightModule => Side::RightComodule,
            Side::RightComodule => Side::RightModule,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::LeftModule => "left_module",
            Side::RightModule => "right_module",
            Side::LeftComodule => "left_comodule",
            Side::RightComodule => "right_comodule",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = OpalgError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left_module" => Ok(Side::LeftModule),
            "right_module" => Ok(Side::RightModule),
            "left_comodule" => Ok(Side::LeftComodule),
            "right_comodule" => Ok(Side::RightComodule),
            other => Err(OpalgError::Unknown(other.to_string())),
        }
    }
}

/// One-sided module or comodule over an operad or cooperad.
///
/// Right structures store partial maps `M(m) ⊗ P(n) → M(m+n-1)`. Left
/// structures store one map `P(k) ⊗ M(A_1) ⊗ … ⊗ M(A_k) → M(N)` per set
/// partition of `{1..N}`; comodules store the transposed shapes. Maps that
/// are absent are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SidedModule {
    side: Side,
    seq: SymSeq,
    over: SymSeq,
    partial: BTreeMap<PartialKey, ExactMatrix>,
    blocks: BTreeMap<LeftKey, ExactMatrix>,
}

/// Relabels labels of each block by their rank in the union, blocks sorted by minimum.
pub fn standardize_blocks(blocks: &[Vec<u32>]) -> LeftKey {
    let mut all: Vec<u32> = blocks.concat();
    all.sort_unstable();
    let rank = |x: &u32| all.binary_search(x).expect("label in union") as u32 + 1;
    let mut out: LeftKey = blocks
        .iter()
        .map(|b| {
            let mut b: Vec<u32> = b.iter().map(rank).collect();
            b.sort_unstable();
            b
        })
        .collect();
    out.sort_by_key(|b| b[0]);
    out
}

fn all_partitions(n: usize) -> Vec<LeftKey> {
    let labels: Vec<u32> = (1..=n as u32).collect();
    set_partitions(&labels)
        .into_iter()
        .map(|p| {
            let mut p: LeftKey = p.into_iter().map(|mut b| {
                b.sort_unstable();
                b
            }).collect();
            p.sort_by_key(|b| b[0]);
            p
        })
        .collect()
}

fn block_degrees(outer: &SymSeq, inner: &SymSeq, blocks: &[Vec<u32>]) -> Vec<Vec<i64>> {
    std::iter::once(outer.degrees(blocks.len())).chain(blocks.iter().map(|b| inner.degrees(b.len()))).collect()
}

fn block_dim(outer: &SymSeq, inner: &SymSeq, blocks: &[Vec<u32>]) -> usize {
    outer.dim(blocks.len()) * blocks.iter().map(|b| inner.dim(b.len())).product::<usize>()
}

/// Action of a bijection `f` of `{1..N}` (0-based images) on the summand
/// `outer(k) ⊗ inner(A_1) ⊗ … ⊗ inner(A_k)` of a composition product.
/// Returns the image partition and the matrix into its summand.
pub(crate) fn partition_transport(
    outer: &SymSeq,
    inner: &SymSeq,
    blocks: &[Vec<u32>],
    f: &[usize],
) -> (LeftKey, ExactMatrix) {
    let ring = outer.ring();
    let k = blocks.len();
    let moved: Vec<Vec<u32>> = blocks
        .iter()
        .map(|b| {
            let mut m: Vec<u32> = b.iter().map(|x| f[*x as usize - 1] as u32 + 1).collect();
            m.sort_unstable();
            m
        })
        .collect();
    let mut image = moved.clone();
    image.sort_by_key(|b| b[0]);
    let omega: Perm = moved.iter().map(|b| image.iter().position(|c| c == b).expect("image block")).collect();
    let mut factors = vec![outer.action(k, &omega)];
    for (b, m) in blocks.iter().zip(&moved) {
        let g: Perm = b
            .iter()
            .map(|x| {
                let y = f[*x as usize - 1] as u32 + 1;
                m.binary_search(&y).expect("image label")
            })
            .collect();
        factors.push(inner.action(b.len(), &g));
    }
    let refs: Vec<&ExactMatrix> = factors.iter().map(|a| a.as_ref()).collect();
    let act = kron_all(ring, &refs);
    let inv = invert_perm(&omega);
    let order: Vec<usize> = std::iter::once(0).chain(inv.iter().map(|j| j + 1)).collect();
    let reorder = reorder_matrix(ring, &block_degrees(outer, inner, blocks), &order);
    (image, reorder.mul(&act).expect("square factors"))
}

impl SidedModule {
    pub fn right_module(
        seq: SymSeq,
        partial: BTreeMap<PartialKey, ExactMatrix>,
        over: &Operad,
    ) -> Result<Self, OpalgError> {
        let m = Self::raw(Side::RightModule, seq, over.seq().clone(), partial, BTreeMap::new());
        check_partial_axioms(&m.seq, &|k| m.partial_map(k.0, k.1, k.2), over, false)?;
        Ok(m)
    }

    pub fn left_module(seq: SymSeq, blocks: BTreeMap<LeftKey, ExactMatrix>, over: &Operad) -> Result<Self, OpalgError> {
        let m = Self::raw(Side::LeftModule, seq, over.seq().clone(), BTreeMap::new(), blocks);
        m.check_left(over)?;
        Ok(m)
    }

    pub fn right_comodule(
        seq: SymSeq,
        partial: BTreeMap<PartialKey, ExactMatrix>,
        over: &Cooperad,
    ) -> Result<Self, OpalgError> {
        let m = Self::raw(Side::RightComodule, seq, over.seq().clone(), partial, BTreeMap::new());
        m.check_shapes()?;
        let (d, dover) = (m.dual(), over.dual());
        check_partial_axioms(&d.seq, &|k| d.partial_map(k.0, k.1, k.2), &dover, false)?;
        Ok(m)
    }

    pub fn left_comodule(
        seq: SymSeq,
        blocks: BTreeMap<LeftKey, ExactMatrix>,
        over: &Cooperad,
    ) -> Result<Self, OpalgError> {
        let m = Self::raw(Side::LeftComodule, seq, over.seq().clone(), BTreeMap::new(), blocks);
        m.check_shapes()?;
        m.dual().check_left(&over.dual())?;
        Ok(m)
    }

    /// The unit sequence `I` with its canonical structure over `over`.
    pub fn unit(side: Side, over: &SymSeq) -> SidedModule {
        let ring = over.ring();
        let seq = SymSeq::unit(ring, over.max_arity());
        let id = ExactMatrix::identity(ring, 1);
        let (partial, blocks) = if side.is_left() {
            (BTreeMap::new(), BTreeMap::from([(vec![vec![1]], id)]))
        } else {
            (BTreeMap::from([((1, 1, 1), id)]), BTreeMap::new())
        };
        Self::raw(side, seq, over.clone(), partial, blocks)
    }

    fn raw(
        side: Side,
        seq: SymSeq,
        over: SymSeq,
        partial: BTreeMap<PartialKey, ExactMatrix>,
        blocks: BTreeMap<LeftKey, ExactMatrix>,
    ) -> Self {
        let partial = partial.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        SidedModule { side, seq, over, partial, blocks }
    }

    /// The same module over another ring.
    pub fn with_ring(&self, ring: Ring) -> Result<SidedModule, OpalgError> {
        let partial = self.partial.iter().map(|(k, m)| Ok((*k, m.with_ring(ring)?))).collect::<Result<_, LinAlgError>>()?;
        let blocks = self.blocks.iter().map(|(k, m)| Ok((k.clone(), m.with_ring(ring)?))).collect::<Result<_, LinAlgError>>()?;
        Ok(Self::raw(self.side, self.seq.with_ring(ring)?, self.over.with_ring(ring)?, partial, blocks))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn seq(&self) -> &SymSeq {
        &self.seq
    }

    /// Symmetric sequence of the operad or cooperad acting.
    pub fn over(&self) -> &SymSeq {
        &self.over
    }

    pub fn name(&self) -> &str {
        self.seq.name()
    }

    pub fn ring(&self) -> Ring {
        self.seq.ring()
    }

    pub fn max_arity(&self) -> usize {
        self.seq.max_arity()
    }

    pub fn partial_maps(&self) -> &BTreeMap<PartialKey, ExactMatrix> {
        &self.partial
    }

    pub fn block_maps(&self) -> &BTreeMap<LeftKey, ExactMatrix> {
        &self.blocks
    }

    /// Right structure map for `(m, a, n)`, in module or comodule shape.
    pub fn partial_map(&self, m: usize, a: usize, n: usize) -> ExactMatrix {
        if let Some(x) = self.partial.get(&(m, a, n)) {
            return x.clone();
        }
        let (big, small) = (self.seq.dim(m + n - 1), self.seq.dim(m) * self.over.dim(n));
        if self.side.is_comodule() {
            ExactMatrix::zeros(self.ring(), small, big)
        } else {
            ExactMatrix::zeros(self.ring(), big, small)
        }
    }

    /// Left structure map for a partition, in module or comodule shape.
    pub fn block_map(&self, blocks: &[Vec<u32>]) -> ExactMatrix {
        if let Some(x) = self.blocks.get(blocks) {
            return x.clone();
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let (big, small) = (self.seq.dim(n), block_dim(&self.over, &self.seq, blocks));
        if self.side.is_comodule() {
            ExactMatrix::zeros(self.ring(), small, big)
        } else {
            ExactMatrix::zeros(self.ring(), big, small)
        }
    }

    pub fn block_map_ref(&self, blocks: &[Vec<u32>]) -> Option<&ExactMatrix> {
        self.blocks.get(blocks)
    }

    fn check_shapes(&self) -> Result<(), OpalgError> {
        let max = self.max_arity();
        if self.over.max_arity() < max {
            return Err(OpalgError::shape(format!("acting structure known only up to arity {}", self.over.max_arity())));
        }
        for (key, x) in &self.partial {
            let (m, a, n) = *key;
            let bad = m == 0 || n == 0 || m + n - 1 > max || a == 0 || a > m || {
                let (big, small) = (self.seq.dim(m + n - 1), self.seq.dim(m) * self.over.dim(n));
                let (r, c) = if self.side.is_comodule() { (small, big) } else { (big, small) };
                x.rows() != r || x.cols() != c
            };
            if bad {
                return Err(OpalgError::shape(format!("structure map ({m},{a},{n}) has wrong shape or key")));
            }
        }
        for (key, x) in &self.blocks {
            let n: usize = key.iter().map(Vec::len).sum();
            let valid = n <= max && standardize_blocks(key) == *key && key.concat().len() == n;
            let (big, small) = (self.seq.dim(n), block_dim(&self.over, &self.seq, key));
            let (r, c) = if self.side.is_comodule() { (small, big) } else { (big, small) };
            if !valid || x.rows() != r || x.cols() != c {
                return Err(OpalgError::shape(format!("structure map for partition {key:?} has wrong shape or key")));
            }
        }
        Ok(())
    }

    /// Associativity, unit and equivariance of a left module.
    fn check_left(&self, over: &Operad) -> Result<(), OpalgError> {
        self.check_shapes()?;
        let ring = self.ring();
        let (p, l) = (over.seq(), &self.seq);
        if p.ring() != ring {
            return Err(OpalgError::Linear(crate::exactla::LinAlgError::RingMismatch { expected: ring, found: p.ring() }));
        }
        let max = self.max_arity();
        for n in 1..=max {
            for blocks in all_partitions(n) {
                let f = self.block_map(&blocks);
                let dt = l.degrees(n);
                let ds = tensor_degrees(&block_degrees(p, l, &blocks));
                if f.entries().any(|(r, c, _)| dt[r] != ds[c]) {
                    return Err(OpalgError::axiom("action preserves degree", format!("partition {blocks:?}")));
                }
            }
            let whole: Vec<u32> = (1..=n as u32).collect();
            if self.block_map(&[whole]).sub(&ExactMatrix::identity(ring, l.dim(n)))?.nnz() != 0 {
                return Err(OpalgError::axiom("(3) left unit", format!("arity {n}")));
            }
        }
        let ids = |blocks: &[Vec<u32>]| {
            let ms: Vec<ExactMatrix> = blocks.iter().map(|b| ExactMatrix::identity(ring, l.dim(b.len()))).collect();
            kron_all(ring, &ms.iter().collect::<Vec<_>>())
        };
        for n in 3..=max {
            for blocks in all_partitions(n) {
                let kk = blocks.len();
                if kk < 3 {
                    continue;
                }
                let lam = self.block_map(&blocks);
                for k in 2..kk {
                    let q = kk - k + 1;
                    for i in 1..=k {
                        let lhs = lam.mul(&over.composition(k, i, q).kron(&ids(&blocks)))?;
                        let (before, rest) = blocks.split_at(i - 1);
                        let (mid, after) = rest.split_at(q);
                        let mut c: Vec<u32> = mid.concat();
                        c.sort_unstable();
                        let mut outer_blocks: LeftKey = before.to_vec();
                        outer_blocks.push(c);
                        outer_blocks.extend(after.iter().cloned());
                        let inner = self.block_map(&standardize_blocks(mid));
                        let middle = kron_all(
                            ring,
                            &[&ExactMatrix::identity(ring, p.dim(k)), &ids(before), &inner, &ids(after)],
                        );
                        let mut degs = vec![p.degrees(k), p.degrees(q)];
                        degs.extend(blocks.iter().map(|b| l.degrees(b.len())));
                        let order: Vec<usize> = std::iter::once(0)
                            .chain(2..2 + i - 1)
                            .chain(std::iter::once(1))
                            .chain(2 + i - 1..2 + kk)
                            .collect();
                        let tau = reorder_matrix(ring, &degs, &order);
                        let rhs = self.block_map(&outer_blocks).mul(&middle)?.mul(&tau)?;
                        if lhs.sub(&rhs)?.nnz() != 0 {
                            return Err(OpalgError::axiom(
                                "(1) left associativity",
                                format!("partition {blocks:?}, composition ({k},{i},{q})"),
                            ));
                        }
                    }
                }
            }
        }
        for n in 2..=max {
            for t in 0..n - 1 {
                let f = adjacent(n, t);
                let rho = l.action(n, &f);
                for blocks in all_partitions(n) {
                    let (image, transport) = partition_transport(p, l, &blocks, &f);
                    let lhs = rho.mul(&self.block_map(&blocks))?;
                    let rhs = self.block_map(&image).mul(&transport)?;
                    if lhs.sub(&rhs)?.nnz() != 0 {
                        return Err(OpalgError::axiom(
                            "equivariance",
                            format!("partition {blocks:?} under s{} at arity {n}", t + 1),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Linear dual: degrees negated, maps transposed, side flipped.
    pub fn dual(&self) -> SidedModule {
        let (s, o) = (&self.seq, &self.over);
        let partial = self
            .partial
            .iter()
            .map(|((m, a, n), f)| {
                let single = s.dual_reindex(m + n - 1);
                let pair = tensor_reindex(&[s.dual_reindex(*m), o.dual_reindex(*n)]);
                let t = f.transpose();
                let t = if self.side.is_comodule() { permute(&t, &single, &pair) } else { permute(&t, &pair, &single) };
                ((*m, *a, *n), t)
            })
            .collect();
        let blocks = self
            .blocks
            .iter()
            .map(|(key, f)| {
                let n: usize = key.iter().map(Vec::len).sum();
                let single = s.dual_reindex(n);
                let maps: Vec<Vec<usize>> = std::iter::once(o.dual_reindex(key.len()))
                    .chain(key.iter().map(|b| s.dual_reindex(b.len())))
                    .collect();
                let multi = tensor_reindex(&maps);
                let t = f.transpose();
                let t = if self.side.is_comodule() { permute(&t, &single, &multi) } else { permute(&t, &multi, &single) };
                (key.clone(), t)
            })
            .collect();
        SidedModule { side: self.side.flipped(), seq: s.dual(), over: o.dual(), partial, blocks }
    }

    /// Keys of all partial structure maps up to the maximum arity.
    pub fn partial_keys(&self) -> Vec<PartialKey> {
        partial_keys(self.max_arity())
    }

    /// All set partitions of `{1..n}` in storage form.
    pub fn partitions(n: usize) -> Vec<LeftKey> {
        all_partitions(n)
    }
}
