use super::module::{partition_transport, LeftKey, SidedModule};
use super::symseq::{adjacent, SymSeq};
use super::tensor::{tensor_degrees, unflatten};
use super::OpalgError;
use crate::exactla::{ExactMatrix, GradedFreeModule};

/// One arity of a composition product `M ∘ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposeProduct {
    pub module: GradedFreeModule,
    /// Matrices of `s_1, …, s_{n-1}` in the flat basis of `module`.
    pub transpositions: Vec<ExactMatrix>,
    /// Summands in the order they were laid out.
    pub summands: Vec<LeftKey>,
    raw_to_flat: Vec<usize>,
    offsets: Vec<usize>,
}

impl ComposeProduct {
    /// Flat index of basis element `within` of the summand for `blocks`.
    pub fn flat_index(&self, blocks: &[Vec<u32>], within: usize) -> Option<usize> {
        let s = self.summands.iter().position(|b| b == blocks)?;
        Some(self.raw_to_flat[self.offsets[s] + within])
    }

    pub fn ranks(&self) -> std::collections::BTreeMap<i64, usize> {
        self.module.ranks()
    }
}

/// `(M ∘ N)(n)`: the sum over set partitions of `{1..n}` into `k` blocks of
/// `M(k) ⊗ N(A_1) ⊗ … ⊗ N(A_k)`, with its symmetric action.
///
/// Basis labels read `blocks:i;j_1,…,j_k` with flat indices into each factor.
pub fn compose_product(m: &SymSeq, n: &SymSeq, arity: usize) -> Result<ComposeProduct, OpalgError> {
    let max = m.max_arity().min(n.max_arity());
    if arity == 0 || arity > max {
        return Err(OpalgError::ArityBound { arity, max });
    }
    if m.ring() != n.ring() {
        return Err(OpalgError::Linear(crate::exactla::LinAlgError::RingMismatch { expected: m.ring(), found: n.ring() }));
    }
    let ring = m.ring();
    let summands = SidedModule::partitions(arity);
    let mut raw: Vec<(i64, String)> = Vec::new();
    let mut offsets = Vec::with_capacity(summands.len());
    for blocks in &summands {
        offsets.push(raw.len());
        let mut degs = vec![m.degrees(blocks.len())];
        degs.extend(blocks.iter().map(|b| n.degrees(b.len())));
        let dims: Vec<usize> = degs.iter().map(Vec::len).collect();
        let name = blocks
            .iter()
            .map(|b| b.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("|");
        for (idx, d) in tensor_degrees(&degs).into_iter().enumerate() {
            let parts = unflatten(idx, &dims);
            let inner = parts[1..].iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            raw.push((d, format!("{name}:{};{inner}", parts[0])));
        }
    }
    let mut module = GradedFreeModule::new();
    let positions: Vec<(i64, usize)> = raw.iter().map(|(d, l)| (*d, module.push(*d, l.clone()))).collect();
    let raw_to_flat: Vec<usize> = positions.iter().map(|(d, p)| module.flat_index(*d, *p)).collect();
    let total = raw.len();
    let mut transpositions = Vec::with_capacity(arity.saturating_sub(1));
    for t in 0..arity.saturating_sub(1) {
        let f = adjacent(arity, t);
        let mut entries = Vec::new();
        for (s, blocks) in summands.iter().enumerate() {
            let (image, mat) = partition_transport(m, n, blocks, &f);
            let target = summands.iter().position(|b| *b == image).expect("image summand");
            for (r, c, v) in mat.entries() {
                entries.push((raw_to_flat[offsets[target] + r], raw_to_flat[offsets[s] + c], v.clone()));
            }
        }
        transpositions.push(ExactMatrix::from_triplets(ring, total, total, entries)?);
    }
    Ok(ComposeProduct { module, transpositions, summands, raw_to_flat, offsets })
}
