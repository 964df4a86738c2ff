//! The truncated symmetric coalgebra on a graded module of letters.
//!
//! Words are sorted multisets of letters and the diagonal is the unshuffle
//! coproduct with Koszul signs. Operators on the coalgebra are ordinary
//! [`GradedMap`](crate::graded::GradedMap)s on the word module of a
//! [`WordSpace`].

pub mod cochain;
pub mod coderivation;
pub mod morphism;
pub mod space;
pub mod word;

pub use cochain::{cup_bracket, tau_projection, CochainMap};
pub use coderivation::{expand_coderivation, Coderivation};
pub use morphism::{coalgebra_morphism, letterwise};
pub use space::{enumerate_words, WordSpace};
pub use word::Word;
