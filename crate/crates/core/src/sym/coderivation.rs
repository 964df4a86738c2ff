//! Coderivations of `S[Y]` determined by their corestrictions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{same_module, Accumulator, GradedMap, SparseVec};
use crate::scalar::Scalar;

use super::cochain::{diagonal_of, letter_projection, tensor_add, Tensor};
use super::space::WordSpace;

/// The coderivation with corestriction `f: S[Y] → Y`. Its weight-`(j+1)`
/// part lowers weight by `j`.
#[derive(Clone)]
pub struct Coderivation {
    space: Arc<WordSpace>,
    corestriction: GradedMap,
}

impl Coderivation {
    pub fn new(space: Arc<WordSpace>, corestriction: GradedMap) -> Result<Coderivation> {
        if !same_module(corestriction.source(), space.module()) || !same_module(corestriction.target(), space.letters())
        {
            return Err(Error::ModuleMismatch("corestriction must map words to letters".into()));
        }
        if !corestriction.col(WordSpace::UNIT).is_empty() {
            return Err(Error::ModuleMismatch("corestriction must vanish on the unit".into()));
        }
        let corestriction = corestriction.with_modules(space.module().clone(), space.letters().clone())?;
        Ok(Coderivation { space, corestriction })
    }

    /// The coderivation extending an endomorphism of the letters.
    pub fn from_letter_map(space: Arc<WordSpace>, f: &GradedMap) -> Result<Coderivation> {
        let core = f.compose(&letter_projection(&space))?;
        Coderivation::new(space, core)
    }

    /// Corestriction `pr ∘ D` of an operator on the words.
    pub fn from_operator(space: Arc<WordSpace>, op: &GradedMap) -> Result<Coderivation> {
        let core = letter_projection(&space).compose(op)?;
        Coderivation::new(space, core)
    }

    pub fn space(&self) -> &Arc<WordSpace> {
        &self.space
    }

    pub fn corestriction(&self) -> &GradedMap {
        &self.corestriction
    }

    pub fn degree(&self) -> i64 {
        self.corestriction.degree()
    }

    /// `D(w) = Σ_{I ≠ ∅} ε(I, I^c) f(w_I) · w_{I^c}`.
    pub fn apply_word(&self, w: usize) -> SparseVec {
        let s = &self.space;
        let mut acc = Accumulator::new();
        let mut term = |u: usize, v: usize, c: &Scalar| {
            for (y, k) in self.corestriction.col(u) {
                if let Some((x, sign)) = s.letter_times(*y, v) {
                    acc.add(x, c * k * Scalar::from_int(sign as i64));
                }
            }
        };
        for (u, v, c) in s.splits(w) {
            term(*u, *v, c);
        }
        if w != WordSpace::UNIT {
            term(w, WordSpace::UNIT, &Scalar::one());
        }
        acc.finish()
    }

    /// The operator on all words of weight at most `W`.
    pub fn expand(&self) -> GradedMap {
        let cols = (0..self.space.len()).map(|w| self.apply_word(w)).collect();
        let m = self.space.module().clone();
        GradedMap::from_columns_unchecked(m.clone(), m, self.degree(), cols)
    }

    pub fn add(&self, other: &Coderivation) -> Result<Coderivation> {
        Coderivation::new(self.space.clone(), self.corestriction.add(&other.corestriction)?)
    }
}

/// Expands `D` on one word given by its letters.
pub fn expand_coderivation(d: &Coderivation, word: &[usize]) -> Result<SparseVec> {
    let w = d.space().index_of(word)?;
    Ok(d.apply_word(w))
}

/// First word violating `Δ D = (D ⊗ 1 + 1 ⊗ D) Δ`, where
/// `(1 ⊗ D)(u ⊗ v) = (−1)^{|D||u|} u ⊗ D v`.
pub fn coderivation_law_witness(space: &WordSpace, op: &GradedMap) -> Option<String> {
    for w in 0..space.len() {
        let lhs = diagonal_of(space, op.col(w));
        let mut rhs = Tensor::new();
        for (u, v, c) in space.diagonal(w) {
            for (x, k) in op.col(u) {
                tensor_add(&mut rhs, (*x, v), &c * k);
            }
            let sign = Scalar::sign(op.degree() * space.degree(u));
            for (x, k) in op.col(v) {
                tensor_add(&mut rhs, (u, *x), &c * k * &sign);
            }
        }
        if lhs != rhs {
            return Some(space.name(w).to_string());
        }
    }
    None
}
