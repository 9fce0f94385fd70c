//! Symmetric sequences, operads, cooperads and their one-sided (co)modules,
//! stored as explicit matrices on canonical label sets.
//!
//! Every structure is validated on construction: Coxeter relations for the
//! symmetric actions, associativity, unit and equivariance axioms for the
//! structure maps. Cooperads and comodules are checked through their duals.

mod builtin;
mod compose;
mod format;
mod module;
mod operad;
mod symseq;
pub mod tensor;

pub use builtin::{ass, builtin, coalgebra_comodule, cocom, com, sphere_comodule, sphere_module, Builtin};
pub use compose::{compose_product, ComposeProduct};
pub use format::{load, load_str, save, save_string, Structure};
pub use module::{standardize_blocks, LeftKey, Side, SidedModule};
pub use operad::{partial_keys, Cooperad, Operad, PartialKey};
pub use symseq::{adjacent, compose_perm, identity_perm, invert_perm, Perm, SymSeq};

use crate::exactla::LinAlgError;

/// Default largest arity of built-in structures.
pub const DEFAULT_MAX_ARITY: usize = 6;

/// Hard bound on arities, shared with tree enumeration.
pub const MAX_ARITY: usize = crate::trees::MAX_LABELS;

#[derive(Debug, thiserror::Error)]
pub enum OpalgError {
    #[error(transparent)]
    Linear(#[from] LinAlgError),
    #[error("shape: {0}")]
    Shape(String),
    #[error("axiom {axiom} fails: {detail}")]
    Axiom { axiom: String, detail: String },
    #[error("arity {arity} exceeds the bound {max}")]
    ArityBound { arity: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown structure `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl OpalgError {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        OpalgError::Shape(msg.into())
    }

    pub(crate) fn axiom(axiom: impl Into<String>, detail: impl Into<String>) -> Self {
        OpalgError::Axiom { axiom: axiom.into(), detail: detail.into() }
    }

    /// Name of the violated axiom, when this is a validation failure.
    pub fn axiom_name(&self) -> Option<&str> {
        match self {
            OpalgError::Axiom { axiom, .. } => Some(axiom),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
