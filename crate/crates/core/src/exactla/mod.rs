//! Exact sparse linear algebra over the integers and the rationals.
//!
//! Everything is arbitrary precision. Integral homology goes through Smith
//! normal form, rational homology through elimination over `ℚ`.

mod complex;
mod echelon;
mod homology;
mod matrix;
mod smith;
pub mod sparse;

pub use complex::{tensor, tensor_many, ChainComplex, ChainMap, GradedFreeModule, MultiTensor};
pub use echelon::Echelon;
pub use homology::{
    alternating_trace, homology, induced_map_on_homology, DegreeHomology, HomologyBasis,
    HomologySummary,
};
pub use matrix::ExactMatrix;
pub use smith::{rank_over_q, smith_normal_form};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// Exact rational scalar used for every matrix entry.
pub type Q = BigRational;

/// Coefficient ring of a matrix or complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Int,
    Rat,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Int => write!(f, "Z"),
            Ring::Rat => write!(f, "Q"),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = LinAlgError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" | "INT" | "int" => Ok(Ring::Int),
            "Q" | "q" | "RAT" | "rat" => Ok(Ring::Rat),
            other => Err(LinAlgError::Parse(format!("unknown ring `{other}`"))),
        }
    }
}

/// Errors raised by the linear algebra layer.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum LinAlgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: Ring, found: Ring },
    #[error("entry {value} at ({row}, {col}) is not an integer")]
    NotIntegral { row: usize, col: usize, value: String },
    #[error("d∘d is nonzero at degree {degree}")]
    NotDifferential { degree: i64 },
    #[error("duplicate basis label `{label}` in degree {degree}")]
    DuplicateLabel { degree: i64, label: String },
    #[error("map does not commute with the differentials at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("automorphism does not commute with the differential at degree {degree}")]
    NotEquivariant { degree: i64 },
    #[error("vector is not in the span of the chosen basis")]
    NotInSpan,
    #[error("trace is not an integer: {0}")]
    NonIntegralTrace(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}
