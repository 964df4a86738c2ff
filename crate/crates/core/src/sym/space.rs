//! The word basis of the truncated symmetric coalgebra `F_W S[Y]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::GradedModule;
use crate::scalar::Scalar;

use super::word::{normalize, split, unshuffle_sign, Word};

/// One term `c · u ⊗ v` of a diagonal, by word indices.
pub type Split = (usize, usize, Scalar);

/// All canonical words of weight at most `max_weight` in the letters of a
/// graded module, ordered by weight and then lexicographically.
pub struct WordSpace {
    letters: Arc<GradedModule>,
    odd: Vec<bool>,
    max_weight: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    weight_ranges: Vec<Range<usize>>,
    module: Arc<GradedModule>,
    splits: Vec<Vec<Split>>,
}

fn extend_words(out: &mut Vec<Word>, prefix: &mut Word, start: usize, remaining: usize, odd: &[bool]) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    for l in start..odd.len() {
        if odd[l] && prefix.last() == Some(&l) {
            continue;
        }
        prefix.push(l);
        extend_words(out, prefix, l, remaining - 1, odd);
        prefix.pop();
    }
}

/// Canonical words of the given weight.
pub fn enumerate_words(letters: &GradedModule, weight: usize) -> Vec<Word> {
    let odd: Vec<bool> = (0..letters.len()).map(|i| letters.degree(i) % 2 != 0).collect();
    let mut out = Vec::new();
    extend_words(&mut out, &mut Vec::new(), 0, weight, &odd);
    out
}

impl WordSpace {
    pub fn new(letters: Arc<GradedModule>, max_weight: usize) -> WordSpace {
        let odd: Vec<bool> = (0..letters.len()).map(|i| letters.degree(i) % 2 != 0).collect();
        let mut words = Vec::new();
        let mut weight_ranges = Vec::new();
        for k in 0..=max_weight {
            let start = words.len();
            words.extend(enumerate_words(&letters, k));
            weight_ranges.push(start..words.len());
        }
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let module = Arc::new(
            GradedModule::new(words.iter().map(|w| {
                let name = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|&l| letters.name(l)).collect::<Vec<_>>().join("*")
                };
                (name, w.iter().map(|&l| letters.degree(l)).sum::<i64>())
            }))
            .expect("letter names are unique and contain no '*'"),
        );
        let splits = words
            .iter()
            .map(|w| {
                let n = w.len();
                let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
                if n >= 2 {
                    for mask in 1..(1u32 << n) - 1 {
                        let (u, v) = split(w, mask);
                        *acc.entry((index[&u], index[&v])).or_default() += unshuffle_sign(w, mask, &odd) as i64;
                    }
                }
                acc.into_iter()
                    .filter(|(_, c)| *c != 0)
                    .map(|((u, v), c)| (u, v, Scalar::from_int(c)))
                    .collect()
            })
            .collect();
        WordSpace {
            letters,
            odd,
            max_weight,
            words,
            index,
            weight_ranges,
            module,
            splits,
        }
    }

    pub fn letters(&self) -> &Arc<GradedModule> {
        &self.letters
    }

    pub fn odd(&self) -> &[bool] {
        &self.odd
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// The words as a graded module; maps on the coalgebra live on it.
    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn weight(&self, i: usize) -> usize {
        self.words[i].len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.module.degree(i)
    }

    /// Index range of the words of weight `k`.
    pub fn weight_range(&self, k: usize) -> Range<usize> {
        self.weight_ranges.get(k).cloned().unwrap_or(0..0)
    }

    pub const UNIT: usize = 0;

    /// Index of the weight-one word on letter `l`.
    pub fn letter_word(&self, l: usize) -> usize {
        debug_assert!(self.max_weight >= 1);
        1 + l
    }

    /// Index of a canonical word.
    pub fn index_of(&self, w: &[usize]) -> Result<usize> {
        if w.len() > self.max_weight {
            return Err(Error::WeightOverflow {
                weight: w.len(),
                max: self.max_weight,
            });
        }
        self.index
            .get(w)
            .copied()
            .ok_or_else(|| Error::Parse(format!("{w:?} is not a canonical word")))
    }

    /// Canonical form of an arbitrary letter sequence: its word index and
    /// Koszul sign, `Ok(None)` when the product vanishes.
    pub fn normalize(&self, letters: Vec<usize>) -> Result<Option<(usize, i32)>> {
        let weight = letters.len();
        if weight > self.max_weight {
            return Err(Error::WeightOverflow {
                weight,
                max: self.max_weight,
            });
        }
        Ok(normalize(letters, &self.odd).map(|(w, s)| (self.index[&w], s)))
    }

    /// Product of a letter with a word, `y · w`; the weight must fit.
    pub fn letter_times(&self, y: usize, w: usize) -> Option<(usize, i32)> {
        let mut letters = Vec::with_capacity(self.words[w].len() + 1);
        letters.push(y);
        letters.extend(&self.words[w]);
        self.normalize(letters).expect("weight does not grow past the source")
    }

    /// Reduced diagonal of word `i`, all `(p, q)` parts together.
    pub fn splits(&self, i: usize) -> &[Split] {
        &self.splits[i]
    }

    /// The `(p, q)` part of the reduced diagonal of word `i`.
    pub fn reduced_diagonal(&self, i: usize, p: usize, q: usize) -> Result<Vec<Split>> {
        let n = self.weight(i);
        if p == 0 || q == 0 || p + q != n {
            return Err(Error::Parse(format!(
                "({p}, {q}) is not a splitting of a word of weight {n} into nonempty parts"
            )));
        }
        Ok(self.splits[i]
            .iter()
            .filter(|(u, _, _)| self.weight(*u) == p)
            .cloned()
            .collect())
    }

    /// Full diagonal, including `1 ⊗ w` and `w ⊗ 1`.
    pub fn diagonal(&self, i: usize) -> Vec<Split> {
        let mut out = Vec::with_capacity(self.splits[i].len() + 2);
        out.push((Self::UNIT, i, Scalar::one()));
        if i != Self::UNIT {
            out.extend(self.splits[i].iter().cloned());
            out.push((i, Self::UNIT, Scalar::one()));
        }
        out
    }

    /// Renders a word.
    pub fn name(&self, i: usize) -> &str {
        self.module.name(i)
    }
}

impl fmt::Debug for WordSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordSpace")
            .field("letters", &self.letters)
            .field("max_weight", &self.max_weight)
            .field("words", &self.words.len())
            .finish()
    }
}
