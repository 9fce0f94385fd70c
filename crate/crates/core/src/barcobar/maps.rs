use super::complex::{BarComplex, Construction};
use super::BarcobarError;
use crate::exactla::{q_int, tensor_many, ChainComplex, ChainMap, ExactMatrix, MultiTensor, Q};
use crate::trees::{perm_sign, split};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A chain-level structure map between a complex and a tensor product of
/// complexes of the same construction.
#[derive(Clone, Debug)]
pub struct StructureMap {
    pub map: ChainMap,
    /// Factor bookkeeping for the tensor side.
    pub tensor: MultiTensor,
}

/// Label sets of the partial composition `∘_a : (m, n) → m + n − 1`:
/// the inner labels are `a..a+n−1`.
pub fn canonical_sets(m: usize, a: usize, n: usize) -> (Vec<u32>, Vec<u32>) {
    let (m, a, n) = (m as u32, a as u32, n as u32);
    let b: Vec<u32> = (a..a + n).collect();
    let outer: Vec<u32> = (1..a).chain(std::iter::once(a)).chain(a + n..m + n).collect();
    (outer, b)
}

fn check_sets(whole: usize, a_set: &[u32], b_set: &[u32], a: u32) -> Result<(), BarcobarError> {
    if !a_set.contains(&a) {
        return Err(BarcobarError::BadLabels(format!("{a_set:?} must contain the grafting label {a}")));
    }
    let mut all: Vec<u32> = a_set.iter().filter(|x| **x != a).chain(b_set).copied().collect();
    all.sort_unstable();
    if all != (1..=whole as u32).collect::<Vec<_>>() {
        return Err(BarcobarError::BadLabels(format!(
            "{a_set:?} without {a} and {b_set:?} must partition 1..={whole}"
        )));
    }
    Ok(())
}

fn check_family(whole: &BarComplex, pieces: &[&BarComplex], arities: &[usize]) -> Result<(), BarcobarError> {
    for (p, n) in pieces.iter().zip(arities) {
        if p.construction() != whole.construction() || p.ring() != whole.ring() {
            return Err(BarcobarError::Incompatible("factors must share construction and ring".into()));
        }
        if p.arity() != *n {
            return Err(BarcobarError::Incompatible(format!("factor of arity {} where {n} is needed", p.arity())));
        }
    }
    Ok(())
}

/// Chain-level cocomposition `B(V) → B(A) ⊗ B(B)` cutting every tree above the
/// node with label set `b_set`; that node becomes the leaf `a` of the outer tree.
pub fn bar_cocomposition(
    v: &BarComplex,
    t: &BarComplex,
    u: &BarComplex,
    a_set: &[u32],
    b_set: &[u32],
    a: u32,
) -> Result<StructureMap, BarcobarError> {
    if v.construction() != Construction::Bar {
        return Err(BarcobarError::Incompatible("cocomposition needs bar complexes".into()));
    }
    check_sets(v.arity(), a_set, b_set, a)?;
    check_family(v, &[t, u], &[a_set.len(), b_set.len()])?;
    graft_map(v, &[t, u], &[b_set.to_vec()], &[a])
}

/// Chain-level composition `Ω(A) ⊗ Ω(B) → Ω(V)` grafting along the label `a`.
pub fn cobar_composition(
    t: &BarComplex,
    u: &BarComplex,
    v: &BarComplex,
    a_set: &[u32],
    b_set: &[u32],
    a: u32,
) -> Result<StructureMap, BarcobarError> {
    if v.construction() != Construction::Cobar {
        return Err(BarcobarError::Incompatible("composition needs cobar complexes".into()));
    }
    check_sets(v.arity(), a_set, b_set, a)?;
    check_family(v, &[t, u], &[a_set.len(), b_set.len()])?;
    graft_map(v, &[t, u], &[b_set.to_vec()], &[a])
}

/// Left (co)module structure of a one-sided construction along a set
/// partition of `{1..N}`: `Ω(k) ⊗ Ω(L)(A_1) ⊗ … → Ω(L)(N)` for cobar,
/// `B(L)(N) → B(k) ⊗ B(L)(A_1) ⊗ …` for bar. Blocks are sorted by minimum.
pub fn module_structure_map(
    whole: &BarComplex,
    outer: &BarComplex,
    parts: &[&BarComplex],
    blocks: &[Vec<u32>],
) -> Result<StructureMap, BarcobarError> {
    let mut all: Vec<u32> = blocks.concat();
    all.sort_unstable();
    if all != (1..=whole.arity() as u32).collect::<Vec<_>>() || blocks.iter().any(|b| b.is_empty()) {
        return Err(BarcobarError::BadLabels(format!("{blocks:?} is not a set partition of 1..={}", whole.arity())));
    }
    let mut sorted = blocks.to_vec();
    for b in sorted.iter_mut() {
        b.sort_unstable();
    }
    if sorted.windows(2).any(|w| w[0][0] > w[1][0]) {
        return Err(BarcobarError::BadLabels("blocks must be sorted by minimum".into()));
    }
    if parts.len() != blocks.len() {
        return Err(BarcobarError::BadLabels("one factor per block".into()));
    }
    let mut pieces = vec![outer];
    pieces.extend_from_slice(parts);
    let mut arities = vec![blocks.len()];
    arities.extend(blocks.iter().map(Vec::len));
    check_family(whole, &pieces, &arities)?;
    let replacement: Vec<u32> = (1..=blocks.len() as u32).collect();
    graft_map(whole, &pieces, &sorted, &replacement)
}

/// Matches every basis tree of `whole` that can be cut along `blocks` with the
/// tensor of its pieces, and assembles the map in the direction of the construction.
fn graft_map(
    whole: &BarComplex,
    pieces: &[&BarComplex],
    blocks: &[Vec<u32>],
    replacement: &[u32],
) -> Result<StructureMap, BarcobarError> {
    let factors: Vec<&ChainComplex> = pieces.iter().map(|p| p.complex()).collect();
    let tensor = tensor_many(&factors)?;
    let mut entries: BTreeMap<i64, Vec<(usize, usize, Q)>> = BTreeMap::new();
    for block in &whole.blocks {
        let Some(sp) = split(&block.tree, blocks, replacement) else { continue };
        let trees: Vec<_> = std::iter::once(&sp.outer).chain(&sp.inner).map(|t| t.standardize()).collect();
        let mut homes = Vec::with_capacity(trees.len());
        for (p, t) in trees.iter().enumerate() {
            match pieces[p].block_of(t) {
                Some(h) => homes.push(h),
                None => break,
            }
        }
        if homes.len() != trees.len() {
            // some piece has a zero slot, hence so does this tree
            continue;
        }
        let pblocks: Vec<_> = homes.iter().zip(pieces).map(|(h, p)| &p.blocks[*h]).collect();
        let mut v_off = vec![0usize; pieces.len() + 1];
        let mut slot_off = vec![0usize; pieces.len() + 1];
        for (p, pb) in pblocks.iter().enumerate() {
            v_off[p + 1] = v_off[p] + pb.vertices();
            slot_off[p + 1] = slot_off[p] + pb.dims.len();
        }
        let vertex_order: Vec<usize> = sp.vertex_home.iter().map(|(p, w)| v_off[*p] + w).collect();
        let base = perm_sign(&vertex_order);
        // (piece, local slot) of every slot of the whole tree
        let mut home_slot: Vec<(usize, usize)> = Vec::with_capacity(block.dims.len());
        home_slot.push((0, 0));
        home_slot.extend(sp.vertex_home.iter().map(|(p, w)| (*p, 1 + w)));
        home_slot.extend(sp.leaf_home.iter().map(|(p, j)| (*p, 1 + pblocks[*p].vertices() + j)));
        let target: Vec<usize> = home_slot.iter().map(|(p, k)| slot_off[*p] + k).collect();
        let mut decos: Vec<Vec<usize>> = pblocks.iter().map(|pb| vec![0; pb.dims.len()]).collect();
        for (p, pb) in pblocks.iter().enumerate() {
            for (k, d) in pb.dims.iter().enumerate() {
                let filled = home_slot.contains(&(p, k));
                if !filled && (*d != 1 || pb.degs[k][0] != 0) {
                    return Err(BarcobarError::Incompatible("grafting slot must carry the unit".into()));
                }
            }
        }
        for (lex, (d, pos)) in block.position.iter().enumerate() {
            let x = crate::opalg::tensor::unflatten(lex, &block.dims);
            let degs: Vec<i64> = x.iter().enumerate().map(|(k, i)| block.degs[k][*i]).collect();
            let mut odd = super::complex::sign_by_targets(&degs, &target);
            for (k, (p, local)) in home_slot.iter().enumerate() {
                decos[*p][*local] = x[k];
            }
            let mut parts = Vec::with_capacity(pieces.len());
            let mut before = 0i64;
            for (p, pb) in pblocks.iter().enumerate() {
                let internal = pb.internal_degree(&decos[p]);
                if pb.vertices() % 2 == 1 && before % 2 != 0 {
                    odd = !odd;
                }
                before += internal;
                parts.push(pieces[p].position(homes[p], &decos[p]));
            }
            let (td, tpos) = tensor
                .index_of(&parts)
                .ok_or_else(|| BarcobarError::Internal("tensor generator missing".into()))?;
            if td != *d {
                return Err(BarcobarError::Internal("grafting changes degree".into()));
            }
            let sign = if (base < 0) != odd { q_int(-1) } else { q_int(1) };
            let e = match whole.construction() {
                Construction::Bar => (tpos, *pos, sign),
                Construction::Cobar => (*pos, tpos, sign),
            };
            entries.entry(*d).or_default().push(e);
        }
    }
    let ring = whole.ring();
    let tc = Arc::new(tensor.complex.clone());
    let (src, dst) = match whole.construction() {
        Construction::Bar => (whole.complex_arc(), tc),
        Construction::Cobar => (tc, whole.complex_arc()),
    };
    let mut comps = BTreeMap::new();
    for (d, e) in entries {
        comps.insert(d, ExactMatrix::from_triplets(ring, dst.rank(d), src.rank(d), e)?);
    }
    let map = ChainMap::new(src, dst, comps).map_err(|e| BarcobarError::Internal(format!("structure map: {e}")))?;
    Ok(StructureMap { map, tensor })
}
