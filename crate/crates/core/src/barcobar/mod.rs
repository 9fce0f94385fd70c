//! Two-sided bar and cobar complexes on decorated trees, their structure maps,
//! the simplicial bar construction, and Koszul duality reports.
//!
//! A basis element of `B(R, P, L)(n)` is a generalized tree on `{1..n}` with
//! one basis index of `R` at the root, of `P` at each vertex and of `L` at each
//! leaf. Its degree is the vertex count plus the internal degree; in a cobar
//! complex the vertex count enters negatively. The differential sums over
//! codimension-one collapses, weighted by the orientation sign of the collapse
//! and the Koszul sign of bringing the merged decorations together.

mod complex;
mod koszul;
mod lift;
mod maps;
mod simplicial;
#[cfg(test)]
mod tests;

pub use complex::{BarBasisLabel, BarComplex, Coefficients, Construction, Middle};
pub use simplicial::{simplicial_bar_complex, SimplicialBar};
pub use lift::{chain_cooperad, chain_left_module, chain_operad};
pub use maps::{bar_cocomposition, canonical_sets, cobar_composition, module_structure_map, StructureMap};
pub use koszul::{
    derivatives_homology, jacobi_relation, koszul, koszul_of_cooperad, module_mx_homology, ArityReport,
    DerivativesReport, KoszulReport, ModuleMxReport,
};


use crate::exactla::{LinAlgError, Ring};
use crate::opalg::{Cooperad, OpalgError, Operad, SidedModule};
use crate::trees::TreeError;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum BarcobarError {
    #[error(transparent)]
    Linear(#[from] LinAlgError),
    #[error(transparent)]
    Opalg(#[from] OpalgError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("arity {arity} outside 1..={max}")]
    ArityBound { arity: usize, max: usize },
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("{0} is not reduced: arity one must be the ground ring in degree zero")]
    NotReduced(String),
    #[error("label sets {0}")]
    BadLabels(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// `B(R, P, L)(n)`.
pub fn bar_complex(
    right: &SidedModule,
    p: &Operad,
    left: &SidedModule,
    arity: usize,
) -> Result<BarComplex, BarcobarError> {
    let c = Coefficients::bar(right.clone(), p.clone(), left.clone())?;
    BarComplex::build(Construction::Bar, Arc::new(c), arity, p.ring())
}

/// `Ω(R, Q, L)(n)`.
pub fn cobar_complex(
    right: &SidedModule,
    q: &Cooperad,
    left: &SidedModule,
    arity: usize,
) -> Result<BarComplex, BarcobarError> {
    let c = Coefficients::cobar(right.clone(), q.clone(), left.clone())?;
    BarComplex::build(Construction::Cobar, Arc::new(c), arity, q.ring())
}

/// `B(I, P, I)(n)`.
pub fn reduced_bar(p: &Operad, arity: usize) -> Result<BarComplex, BarcobarError> {
    BarComplex::build(Construction::Bar, Arc::new(Coefficients::reduced_bar(p)), arity, p.ring())
}

/// `Ω(I, Q, I)(n)`.
pub fn reduced_cobar(q: &Cooperad, arity: usize) -> Result<BarComplex, BarcobarError> {
    BarComplex::build(Construction::Cobar, Arc::new(Coefficients::reduced_cobar(q)), arity, q.ring())
}

/// Builds every arity `1..=max` of one construction over the given ring.
pub fn family(
    construction: Construction,
    coeffs: &Arc<Coefficients>,
    max: usize,
    ring: Ring,
) -> Result<Vec<Arc<BarComplex>>, BarcobarError> {
    (1..=max).map(|n| BarComplex::build(construction, coeffs.clone(), n, ring).map(Arc::new)).collect()
}
