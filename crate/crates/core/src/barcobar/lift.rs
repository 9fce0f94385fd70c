//! Chain-level structures: the bar construction of an operad as a cooperad,
//! the cobar construction of a cooperad as an operad, and a one-sided cobar as
//! a left module, each validated against the axioms as exact matrix identities.

use super::complex::{BarComplex, Construction};
use super::maps::{bar_cocomposition, canonical_sets, cobar_composition, module_structure_map, StructureMap};
use super::BarcobarError;
use crate::exactla::ExactMatrix;
use crate::opalg::tensor::flatten;
use crate::opalg::{adjacent, partial_keys, Cooperad, Operad, SidedModule, SymSeq};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A structure map in the flat-basis convention of the `opalg` structures.
fn flat_matrix(smap: &StructureMap, whole: &BarComplex, factors: &[&BarComplex]) -> Result<ExactMatrix, BarcobarError> {
    let dims: Vec<usize> = factors.iter().map(|f| f.complex().module().total_rank()).collect();
    let lex = |d: i64, pos: usize| {
        let flat: Vec<usize> = smap
            .tensor
            .factors_of(d, pos)
            .iter()
            .zip(factors)
            .map(|((fd, fp), f)| f.complex().module().flat_index(*fd, *fp))
            .collect();
        flatten(&flat, &dims)
    };
    let wm = whole.complex().module();
    let mut entries = Vec::new();
    for (d, m) in smap.map.components() {
        for (r, c, v) in m.entries() {
            entries.push(match whole.construction() {
                Construction::Bar => (lex(*d, r), wm.flat_index(*d, c), v.clone()),
                Construction::Cobar => (wm.flat_index(*d, r), lex(*d, c), v.clone()),
            });
        }
    }
    let (rows, cols) = match whole.construction() {
        Construction::Bar => (dims.iter().product(), wm.total_rank()),
        Construction::Cobar => (wm.total_rank(), dims.iter().product()),
    };
    Ok(ExactMatrix::from_triplets(whole.ring(), rows, cols, entries)?)
}

/// Underlying graded modules and relabelling actions of a family of complexes.
fn chain_seq(name: String, family: &[Arc<BarComplex>]) -> Result<SymSeq, BarcobarError> {
    let ring = family[0].ring();
    let modules = family.iter().map(|b| b.complex().module().clone()).collect();
    let mut ts = Vec::with_capacity(family.len());
    for b in family {
        let n = b.arity();
        let m = b.complex().module();
        let mut row = Vec::with_capacity(n.saturating_sub(1));
        for t in 0..n.saturating_sub(1) {
            let sigma: Vec<u32> = adjacent(n, t).iter().map(|x| *x as u32 + 1).collect();
            let mut entries = Vec::new();
            for (d, g) in b.relabel_action(&sigma)? {
                entries.extend(g.entries().map(|(r, c, v)| (m.flat_index(d, r), m.flat_index(d, c), v.clone())));
            }
            row.push(ExactMatrix::from_triplets(ring, m.total_rank(), m.total_rank(), entries)?);
        }
        ts.push(row);
    }
    Ok(SymSeq::new(name, ring, modules, ts)?)
}

fn check_family(family: &[Arc<BarComplex>], construction: Construction) -> Result<(), BarcobarError> {
    if family.is_empty() || family.iter().enumerate().any(|(i, b)| b.arity() != i + 1 || b.construction() != construction) {
        return Err(BarcobarError::Incompatible("need the arities 1..=max of one construction".into()));
    }
    Ok(())
}

/// `B(P)` in arities `1..=max` as a cooperad; validation checks
/// coassociativity, counit and equivariance of the chain-level cocompositions.
pub fn chain_cooperad(family: &[Arc<BarComplex>]) -> Result<Cooperad, BarcobarError> {
    check_family(family, Construction::Bar)?;
    let seq = chain_seq(format!("bar({})", family[0].coefficients().middle.seq().name()), family)?;
    let mut maps = BTreeMap::new();
    for (m, a, n) in partial_keys(family.len()) {
        let (sa, sb) = canonical_sets(m, a, n);
        let (t, u, v) = (&family[m - 1], &family[n - 1], &family[m + n - 2]);
        let smap = bar_cocomposition(v, t, u, &sa, &sb, a as u32)?;
        maps.insert((m, a, n), flat_matrix(&smap, v, &[t, u])?);
    }
    Ok(Cooperad::new(seq, maps)?)
}

/// `Ω(Q)` in arities `1..=max` as an operad, validated like any operad.
pub fn chain_operad(family: &[Arc<BarComplex>]) -> Result<Operad, BarcobarError> {
    check_family(family, Construction::Cobar)?;
    let seq = chain_seq(format!("cobar({})", family[0].coefficients().middle.seq().name()), family)?;
    let mut maps = BTreeMap::new();
    for (m, a, n) in partial_keys(family.len()) {
        let (sa, sb) = canonical_sets(m, a, n);
        let (t, u, v) = (&family[m - 1], &family[n - 1], &family[m + n - 2]);
        let smap = cobar_composition(t, u, v, &sa, &sb, a as u32)?;
        maps.insert((m, a, n), flat_matrix(&smap, v, &[t, u])?);
    }
    Ok(Operad::new(seq, maps)?)
}

/// `Ω(I, Q, L)` as a left module over `Ω(Q)`; validation checks the module
/// associativity (pentagon), unit and equivariance identities.
pub fn chain_left_module(
    module_family: &[Arc<BarComplex>],
    operad_family: &[Arc<BarComplex>],
    over: &Operad,
) -> Result<SidedModule, BarcobarError> {
    check_family(module_family, Construction::Cobar)?;
    check_family(operad_family, Construction::Cobar)?;
    let seq = chain_seq(format!("cobar({})", module_family[0].coefficients().left.name()), module_family)?;
    let mut blocks = BTreeMap::new();
    for n in 1..=module_family.len() {
        for key in SidedModule::partitions(n) {
            let parts: Vec<&BarComplex> = key.iter().map(|b| module_family[b.len() - 1].as_ref()).collect();
            let outer = &operad_family[key.len() - 1];
            let smap = module_structure_map(&module_family[n - 1], outer, &parts, &key)?;
            let mut factors = vec![outer.as_ref()];
            factors.extend(parts);
            blocks.insert(key, flat_matrix(&smap, &module_family[n - 1], &factors)?);
        }
    }
    Ok(SidedModule::left_module(seq, blocks, over)?)
}
