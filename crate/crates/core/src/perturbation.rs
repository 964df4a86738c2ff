//! The ordinary perturbation lemma on symmetric coalgebras and the final
//! contraction of the Chevalley–Eilenberg coalgebra `(S[sg], d + ∂)` onto
//! `(S[sM], d⁰ + 𝒟)`.
//!
//! Operators are weight-filtered graded maps on word modules. The
//! perturbation `∂` lowers weight by one, so every series below has at most
//! `W + 1` nonzero terms on the words of weight at most `W`.

use std::sync::Arc;

use crate::contraction::{validate_contraction, Contraction, RawContraction};
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::graded::{same_module, ChainComplex, GradedMap, GradedModule};
use crate::linalg;
use crate::report::Report;
use crate::scalar::Scalar;
use crate::sym::cochain::suspension;
use crate::sym::morphism::comultiplicativity_witness;
use crate::sym::{coalgebra_morphism, letterwise, Coderivation, WordSpace};
use crate::transfer::{cce_perturbation, run_transfer, TransferResult};

pub const FINAL_RETRACTION: &str = "final: Pi taubar = id";
pub const FINAL_HOMOTOPY: &str = "final: DH = id - taubar Pi";
pub const FINAL_PI_H: &str = "final: side Pi H = 0";
pub const FINAL_H_TAUBAR: &str = "final: side H taubar = 0";
pub const FINAL_HH: &str = "final: side HH = 0";
pub const FINAL_TAUBAR_CHAIN: &str = "final: taubar is a chain map";
pub const FINAL_PI_CHAIN: &str = "final: Pi is a chain map";
pub const FINAL_COALGEBRA: &str = "final: taubar is a coalgebra map";
pub const PHI_PSI: &str = "final: Phi Psi = id";
pub const PSI_PHI: &str = "final: Psi Phi = id";
pub const PHI_CHAIN: &str = "final: Phi is a chain map";

/// A weight-filtered operator between word spaces.
#[derive(Clone, Debug)]
pub struct FilteredOperator {
    pub map: GradedMap,
    src_weights: Vec<usize>,
    tgt_weights: Vec<usize>,
}

impl FilteredOperator {
    pub fn new(src: &WordSpace, tgt: &WordSpace, map: GradedMap) -> Result<FilteredOperator> {
        if !same_module(map.source(), src.module()) || !same_module(map.target(), tgt.module()) {
            return Err(Error::ModuleMismatch(
                "operator does not act between the given word spaces".into(),
            ));
        }
        Ok(FilteredOperator {
            map,
            src_weights: (0..src.len()).map(|i| src.weight(i)).collect(),
            tgt_weights: (0..tgt.len()).map(|i| tgt.weight(i)).collect(),
        })
    }

    /// The part lowering weight by exactly `r`.
    pub fn component(&self, r: usize) -> GradedMap {
        let cols = self
            .map
            .cols()
            .iter()
            .enumerate()
            .map(|(j, col)| {
                col.iter()
                    .filter(|(i, _)| self.tgt_weights[*i] + r == self.src_weights[j])
                    .cloned()
                    .collect()
            })
            .collect();
        GradedMap::from_columns_unchecked(
            self.map.source().clone(),
            self.map.target().clone(),
            self.map.degree(),
            cols,
        )
    }

    /// First word whose image has a component of weight at least its own
    /// (when `strict`) or above its own.
    pub fn filtration_witness(&self, strict: bool) -> Option<usize> {
        self.map.cols().iter().enumerate().find_map(|(j, col)| {
            col.iter()
                .any(|(i, _)| {
                    let (a, b) = (self.tgt_weights[*i], self.src_weights[j]);
                    if strict {
                        a >= b
                    } else {
                        a > b
                    }
                })
                .then_some(j)
        })
    }

    pub fn max_drop(&self) -> usize {
        self.src_weights.iter().copied().max().unwrap_or(0)
    }
}

/// A contraction between word spaces `S[sN] ⇄ S[sM]` with differentials.
#[derive(Clone)]
pub struct FilteredContraction {
    pub big: Arc<WordSpace>,
    pub small: Arc<WordSpace>,
    pub d_big: GradedMap,
    pub d_small: GradedMap,
    pub nabla: GradedMap,
    pub pi: GradedMap,
    pub h: GradedMap,
}

impl FilteredContraction {
    pub fn raw(&self) -> Result<RawContraction> {
        RawContraction::new(
            ChainComplex::new(self.big.module().clone(), self.d_big.clone())?,
            ChainComplex::new(self.small.module().clone(), self.d_small.clone())?,
            self.nabla.clone(),
            self.pi.clone(),
            self.h.clone(),
        )
    }

    pub fn validate(&self) -> Report {
        match self.raw() {
            Ok(raw) => validate_contraction(&raw),
            Err(e) => {
                let mut r = Report::new();
                r.fail("structure", None, e.to_string());
                r
            }
        }
    }
}

/// `s ∘ f ∘ s⁻¹` for a map between unsuspended letter modules; the
/// suspension carries no sign on degree-zero maps and `sh = −s h s⁻¹` is
/// negated by the caller.
fn letter_conjugate(map: &GradedMap, s_src: &Arc<GradedModule>, s_tgt: &Arc<GradedModule>) -> Result<GradedMap> {
    GradedMap::from_columns(s_src.clone(), s_tgt.clone(), map.degree(), map.cols().to_vec())
}

/// The contraction `S[s∇], S[sπ]` with the symmetrized homotopy induced by
/// `sh = −s h s⁻¹`.
///
/// On letters, `p = s∇ sπ` splits `sN = im p ⊕ ker p` and `sh` lives on
/// `ker p`. In a letter basis adapted to that splitting the homotopy sends
/// a word with `k ≥ 1` letters from `ker p` to `1/k` times the sum, over
/// those letters, of the word with `sh` applied at that position (Koszul
/// sign of passing the earlier letters), and kills words without such
/// letters.
pub fn sc_functor_contraction(c: &Contraction, max_weight: usize) -> Result<FilteredContraction> {
    let sn = c.big().suspend();
    let sm = c.small().suspend();
    let big = Arc::new(WordSpace::new(sn.module().clone(), max_weight));
    let small = Arc::new(WordSpace::new(sm.module().clone(), max_weight));
    sc_functor_contraction_on(c, big, small)
}

/// [`sc_functor_contraction`] on given word spaces over `sN` and `sM`.
pub fn sc_functor_contraction_on(
    c: &Contraction,
    big: Arc<WordSpace>,
    small: Arc<WordSpace>,
) -> Result<FilteredContraction> {
    let sn = c.big().suspend();
    let sm = c.small().suspend();
    let (ln, lm) = (big.letters().clone(), small.letters().clone());
    if ln.len() != sn.module().len() || lm.len() != sm.module().len() {
        return Err(Error::ModuleMismatch("word spaces are not over sN and sM".into()));
    }
    let s_nabla = letter_conjugate(c.nabla(), &lm, &ln)?;
    let s_pi = letter_conjugate(c.pi(), &ln, &lm)?;
    let s_h = letter_conjugate(c.h(), &ln, &ln)?.neg();
    let d_big_letters = GradedMap::from_columns(ln.clone(), ln.clone(), -1, sn.d().cols().to_vec())?;
    let d_small_letters = GradedMap::from_columns(lm.clone(), lm.clone(), -1, sm.d().cols().to_vec())?;

    let nabla = letterwise(&small, &big, &s_nabla)?;
    let pi = letterwise(&big, &small, &s_pi)?;
    let d_big = Coderivation::from_letter_map(big.clone(), &d_big_letters)?.expand();
    let d_small = Coderivation::from_letter_map(small.clone(), &d_small_letters)?.expand();
    let h = symmetrized_homotopy(&big, &s_nabla, &s_pi, &s_h)?;
    Ok(FilteredContraction {
        big,
        small,
        d_big,
        d_small,
        nabla,
        pi,
        h,
    })
}

fn symmetrized_homotopy(
    big: &Arc<WordSpace>,
    s_nabla: &GradedMap,
    s_pi: &GradedMap,
    s_h: &GradedMap,
) -> Result<GradedMap> {
    let letters = big.letters().clone();
    let n = letters.len();
    let p = s_nabla.compose(s_pi)?;
    let id = GradedMap::identity(letters.clone());
    let q = id.sub(&p)?;

    // adapted basis: images of s∇ (independent since sπ s∇ = 1), then a
    // basis of the image of q chosen greedily from its columns
    let mut names = Vec::new();
    let mut is_kernel = Vec::new();
    let mut columns: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for deg in letters.degrees() {
        let basis = letters.basis_in_degree(deg);
        let dense = |v: &[(usize, Scalar)]| -> Vec<Scalar> {
            basis
                .iter()
                .map(|b| {
                    v.iter()
                        .find(|(i, _)| i == b)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Scalar::zero)
                })
                .collect()
        };
        let image: Vec<Vec<Scalar>> = (0..s_nabla.source().len())
            .filter(|&m| s_nabla.source().degree(m) == deg)
            .map(|m| dense(s_nabla.col(m)))
            .collect();
        let candidates: Vec<Vec<Scalar>> = basis.iter().map(|&b| dense(q.col(b))).collect();
        let kernel = linalg::extend_to_independent(&image, &candidates, basis.len());
        debug_assert_eq!(image.len() + kernel.len(), basis.len());
        for (k, v) in image.iter().chain(&kernel).enumerate() {
            let in_kernel = k >= image.len();
            names.push((format!("{}{deg}.{k}", if in_kernel { "k" } else { "p" }), deg));
            is_kernel.push(in_kernel);
            columns.push(
                v.iter()
                    .zip(&basis)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, &b)| (b, c.clone()))
                    .collect(),
            );
        }
    }
    let adapted = Arc::new(GradedModule::new(names)?);
    let to_original = GradedMap::from_columns(adapted.clone(), letters.clone(), 0, columns)?;
    let dense = to_original.to_dense();
    let inv = linalg::inverse(&dense).expect("adapted basis");
    let mut entries = Vec::new();
    for (r, row) in inv.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            if !x.is_zero() {
                entries.push((r, c, x.clone()));
            }
        }
    }
    let from_original = GradedMap::from_entries(letters.clone(), adapted.clone(), 0, entries)?;
    let h_adapted = from_original.compose(&s_h.compose(&to_original)?)?;

    let aspace = WordSpace::new(adapted.clone(), big.max_weight());
    let mut cols = Vec::with_capacity(aspace.len());
    for w in 0..aspace.len() {
        let word = aspace.word(w);
        let k = word.iter().filter(|&&l| is_kernel[l]).count();
        let mut acc = crate::graded::Accumulator::new();
        if k > 0 {
            let weight = Scalar::new(1, k as i64);
            let mut before = 0i64;
            for (pos, &l) in word.iter().enumerate() {
                if is_kernel[l] {
                    let sign = Scalar::sign(before) * &weight;
                    for (y, c) in h_adapted.col(l) {
                        let mut letters = word.clone();
                        letters[pos] = *y;
                        if let Some((x, s)) = aspace.normalize(letters)? {
                            acc.add(x, &sign * c * Scalar::from_int(s as i64));
                        }
                    }
                }
                before += adapted.degree(l);
            }
        }
        cols.push(acc.finish());
    }
    let h_a = GradedMap::from_columns(aspace.module().clone(), aspace.module().clone(), 1, cols)?;
    let into = letterwise(big, &aspace, &from_original)?;
    let back = letterwise(&aspace, big, &to_original)?;
    debug_assert_eq!(n, adapted.len());
    back.compose(&h_a.compose(&into)?)
}

/// Output of the ordinary perturbation lemma.
#[derive(Clone)]
pub struct PerturbedContraction {
    pub delta: GradedMap,
    pub nabla: GradedMap,
    pub pi: GradedMap,
    pub h: GradedMap,
    /// `d + ∂` on the big side.
    pub d_big: GradedMap,
    /// `d + δ` on the small side.
    pub d_small: GradedMap,
    pub big: Arc<WordSpace>,
    pub small: Arc<WordSpace>,
}

impl PerturbedContraction {
    pub fn validate(&self) -> Report {
        FilteredContraction {
            big: self.big.clone(),
            small: self.small.clone(),
            d_big: self.d_big.clone(),
            d_small: self.d_small.clone(),
            nabla: self.nabla.clone(),
            pi: self.pi.clone(),
            h: self.h.clone(),
        }
        .validate()
    }
}

fn geometric(x: &GradedMap, terms: usize) -> Result<GradedMap> {
    let id = GradedMap::identity(x.source().clone());
    let mut sum = id.clone();
    let mut power = id;
    for _ in 0..terms {
        power = x.compose(&power)?;
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power)?;
    }
    Ok(sum)
}

/// `δ = Σ π∂(−h∂)ⁿ∇`, `∇̃ = Σ(−h∂)ⁿ∇`, `Π̃ = Σ π(−∂h)ⁿ` and
/// `H̃ = Σ(−h∂)ⁿh`, summed for `n ≤ W`.
///
/// `H̃` carries the sign that makes `(d+∂)H̃ + H̃(d+∂) = 1 − ∇̃Π̃` hold for a
/// homotopy with `dh + hd = 1 − ∇π`.
pub fn ordinary_perturbation_lemma(fc: &FilteredContraction, partial: &GradedMap) -> Result<PerturbedContraction> {
    let big = &fc.big;
    let filtered = FilteredOperator::new(big, big, partial.clone())?;
    if let Some(w) = filtered.filtration_witness(true) {
        return Err(Error::NotFiltrationLowering(big.name(w).to_string()));
    }
    let d_big = fc.d_big.add(partial)?;
    if let Some(w) = d_big.compose(&d_big)?.nonzero_witness() {
        return Err(Error::NotSquareZero(w));
    }
    let w = big.max_weight();
    let x = fc.h.compose(partial)?.neg();
    let y = partial.compose(&fc.h)?.neg();
    let sx = geometric(&x, w)?;
    let sy = geometric(&y, w)?;
    let nabla = sx.compose(&fc.nabla)?;
    let h = sx.compose(&fc.h)?;
    let pi = fc.pi.compose(&sy)?;
    let delta = fc.pi.compose(&partial.compose(&nabla)?)?;
    let d_small = fc.d_small.add(&delta)?;
    Ok(PerturbedContraction {
        delta,
        nabla,
        pi,
        h,
        d_big,
        d_small,
        big: fc.big.clone(),
        small: fc.small.clone(),
    })
}

/// `Φ = Π̃ τ̄`.
pub fn compose_phi(tau_bar: &GradedMap, pi_tilde: &GradedMap) -> Result<GradedMap> {
    pi_tilde.compose(tau_bar)
}

/// `Ψ = Φ⁻¹` by `Ψ⁰ = 1`, `Ψ^j = −Σ_{i=1..j} Φ^i Ψ^{j−i}` where `Φ^i`
/// lowers weight by `i`.
pub fn invert_phi(space: &WordSpace, phi: &GradedMap) -> Result<GradedMap> {
    let f = FilteredOperator::new(space, space, phi.clone())?;
    let id = GradedMap::identity(space.module().clone());
    if let Some(w) = f.filtration_witness(false) {
        return Err(Error::NotUnitriangular(format!("raises weight on {}", space.name(w))));
    }
    if let Some(w) = f.component(0).witness_name(&id)? {
        return Err(Error::NotUnitriangular(format!(
            "weight-preserving part differs from the identity on {w}"
        )));
    }
    let top = space.max_weight();
    let phis: Vec<GradedMap> = (0..=top).map(|i| f.component(i)).collect();
    let mut psis = vec![id];
    for j in 1..=top {
        let mut acc = GradedMap::zero(space.module().clone(), space.module().clone(), 0);
        for i in 1..=j {
            acc = acc.sub(&phis[i].compose(&psis[j - i])?)?;
        }
        psis.push(acc);
    }
    psis.iter().skip(1).try_fold(psis[0].clone(), |acc, p| acc.add(p))
}

/// The contraction `(S[sM], d⁰+𝒟) ⇄ (S[sg], d+∂)` with `τ̄`, `Π = ΨΠ̃` and
/// `H = H̃ − H̃τ̄Π`, together with everything it was built from.
#[derive(Clone)]
pub struct FinalContraction {
    pub transfer: TransferResult,
    pub functor: FilteredContraction,
    pub perturbed: PerturbedContraction,
    pub partial: GradedMap,
    pub tau_bar: GradedMap,
    pub phi: GradedMap,
    pub psi: GradedMap,
    pub pi: GradedMap,
    pub h: GradedMap,
    /// `d⁰ + 𝒟` on `S[sM]`.
    pub d_small: GradedMap,
    /// `d + ∂` on `S[sg]`.
    pub d_big: GradedMap,
}

pub fn assemble_final_contraction(c: &Contraction, g: &Dgla, max_weight: usize) -> Result<FinalContraction> {
    let transfer = run_transfer(c, g, max_weight)?;
    let small = transfer.state.space().clone();
    let sg = g.complex().suspend();
    let big = Arc::new(WordSpace::new(sg.module().clone(), max_weight));
    let functor = sc_functor_contraction_on(c, big.clone(), small.clone())?;
    let partial = cce_perturbation(g, big.clone())?.expand();
    let perturbed = ordinary_perturbation_lemma(&functor, &partial)?;

    let s_g = suspension(g.module(), big.letters())?;
    let tau_bar = coalgebra_morphism(&small, &big, &s_g.compose(&transfer.tau)?)?;
    let phi = compose_phi(&tau_bar, &perturbed.pi)?;
    let psi = invert_phi(&small, &phi)?;
    let pi = psi.compose(&perturbed.pi)?;
    let h = perturbed.h.sub(&perturbed.h.compose(&tau_bar.compose(&pi)?)?)?;
    let d_small = transfer.state.d0().add(&transfer.d)?;
    let d_big = perturbed.d_big.clone();
    log::info!(
        "final contraction: {} words on the small side, {} on the big side",
        small.len(),
        big.len()
    );
    Ok(FinalContraction {
        transfer,
        functor,
        perturbed,
        partial,
        tau_bar,
        phi,
        psi,
        pi,
        h,
        d_small,
        d_big,
    })
}

impl FinalContraction {
    pub fn small(&self) -> &Arc<WordSpace> {
        &self.functor.small
    }

    pub fn big(&self) -> &Arc<WordSpace> {
        &self.functor.big
    }

    /// The five contraction identities.
    pub fn verify(&self) -> Result<Report> {
        let mut r = Report::new();
        let id_small = GradedMap::identity(self.small().module().clone());
        let id_big = GradedMap::identity(self.big().module().clone());
        r.record(
            FINAL_RETRACTION,
            None,
            self.pi.compose(&self.tau_bar)?.witness_name(&id_small)?,
        );
        let dh = self.d_big.compose(&self.h)?.add(&self.h.compose(&self.d_big)?)?;
        let rhs = id_big.sub(&self.tau_bar.compose(&self.pi)?)?;
        r.record(FINAL_HOMOTOPY, None, dh.witness_name(&rhs)?);
        r.record(FINAL_PI_H, None, self.pi.compose(&self.h)?.nonzero_witness());
        r.record(FINAL_H_TAUBAR, None, self.h.compose(&self.tau_bar)?.nonzero_witness());
        r.record(FINAL_HH, None, self.h.compose(&self.h)?.nonzero_witness());
        Ok(r)
    }

    /// Chain-map and coalgebra properties of `τ̄`, `Π`, `Φ` and `ΦΨ = ΨΦ = 1`.
    pub fn verify_maps(&self) -> Result<Report> {
        let mut r = Report::new();
        let chain = |f: &GradedMap, d_src: &GradedMap, d_tgt: &GradedMap| -> Result<Option<String>> {
            d_tgt.compose(f)?.witness_name(&f.compose(d_src)?)
        };
        r.record(
            FINAL_TAUBAR_CHAIN,
            None,
            chain(&self.tau_bar, &self.d_small, &self.d_big)?,
        );
        r.record(FINAL_PI_CHAIN, None, chain(&self.pi, &self.d_big, &self.d_small)?);
        r.record(
            FINAL_COALGEBRA,
            None,
            comultiplicativity_witness(self.small(), self.big(), &self.tau_bar),
        );
        let id = GradedMap::identity(self.small().module().clone());
        r.record(PHI_PSI, None, self.phi.compose(&self.psi)?.witness_name(&id)?);
        r.record(PSI_PHI, None, self.psi.compose(&self.phi)?.witness_name(&id)?);
        r.record(
            PHI_CHAIN,
            None,
            chain(&self.phi, &self.d_small, &self.perturbed.d_small)?,
        );
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::trivial_contraction;
    use crate::corpus;

    fn heis() -> Contraction {
        Contraction::new(corpus::heis_contraction()).unwrap()
    }

    #[test]
    fn functor_contraction_heis() {
        let fc = sc_functor_contraction(&heis(), 3).unwrap();
        assert!(fc.validate().ok(), "{:?}", fc.validate().first_failure());
        let b = &fc.big;
        let (sa, sc, su) = (0, 2, 3);
        let w = b.index_of(&[sa, sc]).unwrap();
        assert_eq!(fc.h.col(w), &[(b.index_of(&[sa, su]).unwrap(), Scalar::one())]);
    }

    #[test]
    fn functor_contraction_trivial() {
        let g = corpus::sl2_dgla();
        let fc = sc_functor_contraction(&trivial_contraction(g.complex()), 3).unwrap();
        assert!(fc.h.is_zero());
        assert_eq!(fc.nabla, GradedMap::identity(fc.big.module().clone()));
        assert_eq!(fc.pi, GradedMap::identity(fc.big.module().clone()));
    }

    #[test]
    fn heis_final_contraction() {
        let f = assemble_final_contraction(&heis(), &corpus::heis_dgla(), 3).unwrap();
        let r = f.verify().unwrap();
        assert!(r.ok(), "{:?}", r.first_failure());
        let r = f.verify_maps().unwrap();
        assert!(r.ok(), "{:?}", r.first_failure());
        assert!(f.perturbed.validate().ok());
    }

    #[test]
    fn zero_perturbation_returns_input() {
        let fc = sc_functor_contraction(&heis(), 3).unwrap();
        let zero = GradedMap::zero(fc.big.module().clone(), fc.big.module().clone(), -1);
        let p = ordinary_perturbation_lemma(&fc, &zero).unwrap();
        assert!(p.delta.is_zero());
        assert_eq!(p.nabla, fc.nabla);
        assert_eq!(p.pi, fc.pi);
        assert_eq!(p.h, fc.h);
    }

    #[test]
    fn homotopy_orientation() {
        // the literal −Σ(−h∂)ⁿh breaks Dh = 1 − ∇π already at ∂ = 0
        let fc = sc_functor_contraction(&heis(), 3).unwrap();
        let partial = cce_perturbation(&corpus::heis_dgla(), fc.big.clone()).unwrap().expand();
        let p = ordinary_perturbation_lemma(&fc, &partial).unwrap();
        assert!(p.validate().ok());
        let mut flipped = p.clone();
        flipped.h = p.h.neg();
        let r = flipped.validate();
        assert_eq!(r.first_failure().unwrap().identity, crate::contraction::HOMOTOPY);
    }

    #[test]
    fn two_term_series() {
        // heis at weight ≤ 2: (h∂)² = 0 since ∂ lowers weight and h∂ vanishes on weight 1
        let fc = sc_functor_contraction(&heis(), 2).unwrap();
        let partial = cce_perturbation(&corpus::heis_dgla(), fc.big.clone()).unwrap().expand();
        let hp = fc.h.compose(&partial).unwrap();
        assert!(!hp.is_zero());
        assert!(hp.compose(&hp).unwrap().is_zero());
        let p = ordinary_perturbation_lemma(&fc, &partial).unwrap();
        let pn = partial.compose(&fc.nabla).unwrap();
        let expected = fc
            .pi
            .compose(&pn)
            .unwrap()
            .sub(
                &fc.pi
                    .compose(&partial.compose(&hp.compose(&fc.nabla).unwrap()).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(p.delta, expected);
    }

    #[test]
    fn rejects_weight_preserving_perturbation() {
        let fc = sc_functor_contraction(&heis(), 2).unwrap();
        let bad = fc.d_big.clone();
        assert!(matches!(
            ordinary_perturbation_lemma(&fc, &bad),
            Err(Error::NotFiltrationLowering(_))
        ));
    }

    #[test]
    fn psi_inverts_unitriangular() {
        let s = WordSpace::new(Arc::new(GradedModule::new([("x", 2), ("y", 4), ("z", 6)]).unwrap()), 3);
        let (xx, y) = (s.index_of(&[0, 0]).unwrap(), s.index_of(&[1]).unwrap());
        let xxx = s.index_of(&[0, 0, 0]).unwrap();
        let xy = s.index_of(&[0, 1]).unwrap();
        let z = s.index_of(&[2]).unwrap();
        let id = GradedMap::identity(s.module().clone());
        let e = GradedMap::from_entries(
            s.module().clone(),
            s.module().clone(),
            0,
            vec![
                (y, xx, Scalar::from_int(3)),
                (xy, xxx, Scalar::one()),
                (z, xy, Scalar::one()),
            ],
        )
        .unwrap();
        // e∘e sends xxx to z and e∘e∘e = 0
        let phi = id.add(&e).unwrap();
        let psi = invert_phi(&s, &phi).unwrap();
        let expected = id.sub(&e).unwrap().add(&e.compose(&e).unwrap()).unwrap();
        assert_eq!(psi, expected);
        assert_eq!(phi.compose(&psi).unwrap(), id);
        assert_eq!(invert_phi(&s, &id).unwrap(), id);
        assert!(matches!(
            invert_phi(&s, &id.scale(&Scalar::from_int(2))),
            Err(Error::NotUnitriangular(_))
        ));
    }
}
