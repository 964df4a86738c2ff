//! Exact homotopy transfer of differential graded Lie algebra structures
//! along contractions of chain complexes, over the rationals.
//!
//! The pipeline: a [`dgla::Dgla`] and a [`contraction::Contraction`] onto a
//! smaller complex `M` yield, through the recursion in [`transfer`], a
//! twisting cochain `τ`, a coalgebra perturbation `𝒟` of the symmetric
//! coalgebra on `sM` (equivalently an L∞ structure on `M`), and through
//! [`perturbation`] a contraction of the Chevalley–Eilenberg coalgebra of
//! the algebra onto `(S[sM], d⁰ + 𝒟)`. Every identity is checked exactly.

pub mod contraction;
pub mod corpus;
pub mod dgla;
pub mod error;
pub mod format;
pub mod graded;
pub mod linalg;
pub mod perturbation;
pub mod report;
pub mod scalar;
pub mod sym;
pub mod transfer;

pub use error::{Error, Result};
pub use scalar::Scalar;
