//! Unital associative *-algebras: finite-dimensional structure-constant
//! algebras, CCR polynomial algebras and algebras presented by generators
//! and relations, with morphisms, ideals and quotients.

pub mod ccr;
pub mod presented;
pub mod star;

pub use ccr::{CcrAlgebra, SymplecticSpace};
pub use presented::{Poly, Presented, Truncated, Word};
pub use star::{ideal_generated_by, morphism_kernel, quotient_by_ideal, Ideal, Morphism, StarAlgebra};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("axiom fails: {0}")]
    NotAnAlgebra(String),
    #[error("not a unital *-morphism: {0}")]
    NotAMorphism(String),
    #[error("subspace is not a two-sided *-ideal: {0}")]
    NotAnIdeal(String),
    #[error("word of degree {degree} exceeds the bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("product needs words of length {needed} but the truncation is {max_len}")]
    TruncationUnsound { needed: usize, max_len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("symplectic form is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
}
