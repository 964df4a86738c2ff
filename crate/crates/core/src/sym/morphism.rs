//! Coalgebra morphisms `S[X] → S[Y]` determined by their corestrictions.

use crate::error::{Error, Result};
use crate::graded::{same_module, Accumulator, GradedMap};
use crate::scalar::Scalar;

use super::cochain::{diagonal_of, letter_projection, tensor_add, Tensor};
use super::space::WordSpace;
use super::word::{split, unshuffle_sign};

/// The coalgebra morphism `F` with `pr ∘ F = f` for a degree-zero
/// `f: S[X] → Y` vanishing on the unit:
/// `F(w) = Σ_{B ∋ first letter} ε(B, B^c) f(w_B) · F(w_{B^c})`,
/// which sums `f(w_{B_1}) ⋯ f(w_{B_k})` over unordered partitions of `w`.
pub fn coalgebra_morphism(src: &WordSpace, tgt: &WordSpace, f: &GradedMap) -> Result<GradedMap> {
    if !same_module(f.source(), src.module()) || !same_module(f.target(), tgt.letters()) {
        return Err(Error::ModuleMismatch(
            "corestriction must map source words to target letters".into(),
        ));
    }
    if f.degree() != 0 && !f.is_zero() {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: f.degree(),
            context: "corestriction of a coalgebra morphism".into(),
        });
    }
    if !f.col(WordSpace::UNIT).is_empty() {
        return Err(Error::ModuleMismatch("corestriction must vanish on the unit".into()));
    }
    if tgt.max_weight() < src.max_weight() {
        return Err(Error::WeightOverflow {
            weight: src.max_weight(),
            max: tgt.max_weight(),
        });
    }
    let odd = src.odd();
    let mut cols: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(src.len());
    cols.push(vec![(WordSpace::UNIT, Scalar::one())]);
    for w in 1..src.len() {
        let word = src.word(w);
        let n = word.len();
        let mut acc = Accumulator::new();
        for rest in 0..(1u32 << (n - 1)) {
            let mask = 1 | (rest << 1);
            let (b, c) = split(word, mask);
            let (b, c) = (src.index_of(&b)?, src.index_of(&c)?);
            let fb = f.col(b);
            if fb.is_empty() {
                continue;
            }
            let sign = Scalar::from_int(unshuffle_sign(word, mask, odd) as i64);
            for (y, ky) in fb {
                for (x, kx) in &cols[c] {
                    if let Some((z, s)) = tgt.letter_times(*y, *x) {
                        acc.add(z, &sign * ky * kx * Scalar::from_int(s as i64));
                    }
                }
            }
        }
        cols.push(acc.finish());
    }
    GradedMap::from_columns(src.module().clone(), tgt.module().clone(), 0, cols)
}

/// `S[f]` for a degree-zero map of letters, applied letter by letter.
pub fn letterwise(src: &WordSpace, tgt: &WordSpace, f: &GradedMap) -> Result<GradedMap> {
    coalgebra_morphism(src, tgt, &f.compose(&letter_projection(src))?)
}

/// First word violating `Δ F = (F ⊗ F) Δ`.
pub fn comultiplicativity_witness(src: &WordSpace, tgt: &WordSpace, f: &GradedMap) -> Option<String> {
    for w in 0..src.len() {
        let lhs = diagonal_of(tgt, f.col(w));
        let mut rhs = Tensor::new();
        for (u, v, c) in src.diagonal(w) {
            for (x, kx) in f.col(u) {
                for (y, ky) in f.col(v) {
                    tensor_add(&mut rhs, (*x, *y), &c * kx * ky);
                }
            }
        }
        if lhs != rhs {
            return Some(src.name(w).to_string());
        }
    }
    None
}
