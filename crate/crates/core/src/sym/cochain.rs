//! Cochains `S[Y] → X`, stored as graded maps on the word module, and the
//! cup bracket.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgla::PreBracket;
use crate::error::{Error, Result};
use crate::graded::{same_module, Accumulator, GradedMap, GradedModule};
use crate::scalar::Scalar;

use super::space::WordSpace;

/// A cochain on a word space; component `j` is its restriction to the words
/// of weight `j`.
pub type CochainMap = GradedMap;

/// Keeps only the columns of the words of weight `k`.
pub fn restrict_weight(space: &WordSpace, f: &GradedMap, k: usize) -> GradedMap {
    f.restrict_columns(|i| space.weight(i) == k)
}

/// Keeps only the columns of the words of weight at most `k`.
pub fn restrict_weight_at_most(space: &WordSpace, f: &GradedMap, k: usize) -> GradedMap {
    f.restrict_columns(|i| space.weight(i) <= k)
}

/// First word of weight at most `k` on which `f` is nonzero.
pub fn nonzero_on_filtration(space: &WordSpace, f: &GradedMap, k: usize) -> Option<String> {
    restrict_weight_at_most(space, f, k).nonzero_witness()
}

fn check_shift(x: &GradedModule, sx: &GradedModule) -> Result<()> {
    if x.len() != sx.len() || (0..x.len()).any(|i| x.degree(i) + 1 != sx.degree(i)) {
        return Err(Error::ModuleMismatch(
            "letters are not the suspension of the module".into(),
        ));
    }
    Ok(())
}

/// The suspension `s: X → sX`, identity on indices, degree +1.
pub fn suspension(x: &Arc<GradedModule>, sx: &Arc<GradedModule>) -> Result<GradedMap> {
    check_shift(x, sx)?;
    let cols = (0..x.len()).map(|i| vec![(i, Scalar::one())]).collect();
    Ok(GradedMap::from_columns_unchecked(x.clone(), sx.clone(), 1, cols))
}

/// The desuspension `s⁻¹: sX → X`, degree −1.
pub fn desuspension(x: &Arc<GradedModule>, sx: &Arc<GradedModule>) -> Result<GradedMap> {
    check_shift(x, sx)?;
    let cols = (0..x.len()).map(|i| vec![(i, Scalar::one())]).collect();
    Ok(GradedMap::from_columns_unchecked(sx.clone(), x.clone(), -1, cols))
}

/// `τ_X: S[sX] → X`, the projection to weight one followed by desuspension.
pub fn tau_projection(space: &WordSpace, x: &Arc<GradedModule>) -> Result<CochainMap> {
    check_shift(x, space.letters())?;
    let mut cols = vec![Vec::new(); space.len()];
    for l in 0..x.len() {
        cols[space.letter_word(l)] = vec![(l, Scalar::one())];
    }
    Ok(GradedMap::from_columns_unchecked(
        space.module().clone(),
        x.clone(),
        -1,
        cols,
    ))
}

/// Projection of `S[Y]` onto its weight-one part `Y`, degree 0.
pub fn letter_projection(space: &WordSpace) -> GradedMap {
    let y = space.letters();
    let mut cols = vec![Vec::new(); space.len()];
    for l in 0..y.len() {
        cols[space.letter_word(l)] = vec![(l, Scalar::one())];
    }
    GradedMap::from_columns_unchecked(space.module().clone(), y.clone(), 0, cols)
}

/// The cup bracket `[a, b] = [·,·] ∘ (a ⊗ b) ∘ Δ`, with
/// `(a ⊗ b)(u ⊗ v) = (−1)^{|b||u|} a(u) ⊗ b(v)`.
pub fn cup_bracket(space: &WordSpace, a: &CochainMap, b: &CochainMap, g: &PreBracket) -> Result<CochainMap> {
    for (f, what) in [(a, "left"), (b, "right")] {
        if !same_module(f.source(), space.module()) || !same_module(f.target(), g.module()) {
            return Err(Error::ModuleMismatch(format!("{what} cochain of the cup bracket")));
        }
    }
    let mut cols = Vec::with_capacity(space.len());
    for w in 0..space.len() {
        let mut acc = Accumulator::new();
        for (u, v, c) in space.splits(w) {
            let (au, bv) = (a.col(*u), b.col(*v));
            if au.is_empty() || bv.is_empty() {
                continue;
            }
            let sign = Scalar::sign(b.degree() * space.degree(*u));
            acc.add_scaled(&g.bracket_vecs(au, bv), &(c * &sign));
        }
        cols.push(acc.finish());
    }
    Ok(GradedMap::from_columns_unchecked(
        space.module().clone(),
        g.module().clone(),
        a.degree() + b.degree(),
        cols,
    ))
}

/// An element of `S[Y] ⊗ S[Y]` keyed by word index pairs.
pub type Tensor = BTreeMap<(usize, usize), Scalar>;

pub fn tensor_add(t: &mut Tensor, key: (usize, usize), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

/// `Δ` applied to a vector of words.
pub fn diagonal_of(space: &WordSpace, v: &[(usize, Scalar)]) -> Tensor {
    let mut t = Tensor::new();
    for (w, c) in v {
        for (u, x, k) in space.diagonal(*w) {
            tensor_add(&mut t, (u, x), c * &k);
        }
    }
    t
}
