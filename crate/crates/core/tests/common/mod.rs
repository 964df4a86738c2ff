#![allow(dead_code)]

use std::sync::Arc;

use hpt_core::contraction::{Contraction, RawContraction};
use hpt_core::dgla::PreBracket;
use hpt_core::graded::{GradedMap, GradedModule};
use hpt_core::sym::WordSpace;
use hpt_core::Scalar;
use rand::Rng;

/// A homogeneous map with small integer entries, each present with
/// probability `density`; columns listed in `skip` stay zero.
pub fn random_map<R: Rng>(
    rng: &mut R,
    src: &Arc<GradedModule>,
    tgt: &Arc<GradedModule>,
    degree: i64,
    density: f64,
    skip: &[usize],
) -> GradedMap {
    let mut entries = Vec::new();
    for j in 0..src.len() {
        if skip.contains(&j) {
            continue;
        }
        for i in 0..tgt.len() {
            if tgt.degree(i) == src.degree(j) + degree && rng.gen_bool(density) {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    entries.push((i, j, Scalar::from_int(c)));
                }
            }
        }
    }
    GradedMap::from_entries(src.clone(), tgt.clone(), degree, entries).unwrap()
}

/// A map on words vanishing on the unit.
pub fn random_cochain<R: Rng>(rng: &mut R, space: &WordSpace, tgt: &Arc<GradedModule>, degree: i64) -> GradedMap {
    random_map(rng, space.module(), tgt, degree, 0.4, &[WordSpace::UNIT])
}

pub fn letters(degrees: &[i64]) -> Arc<GradedModule> {
    Arc::new(GradedModule::new(degrees.iter().enumerate().map(|(i, d)| (format!("v{i}"), *d))).unwrap())
}

/// The relabeling `g → permute(g, perm)`: old generator `perm[i]` goes to
/// new generator `i`.
pub fn relabeling(old: &Arc<GradedModule>, new: &Arc<GradedModule>, perm: &[usize]) -> (GradedMap, GradedMap) {
    let fwd = perm.iter().enumerate().map(|(i, &p)| (i, p, Scalar::one()));
    let back = perm.iter().enumerate().map(|(i, &p)| (p, i, Scalar::one()));
    (
        GradedMap::from_entries(old.clone(), new.clone(), 0, fwd).unwrap(),
        GradedMap::from_entries(new.clone(), old.clone(), 0, back).unwrap(),
    )
}

/// `c` transported along a relabeling of its big side.
pub fn relabel_contraction(c: &Contraction, g_new: &PreBracket, r: &GradedMap, r_inv: &GradedMap) -> Contraction {
    let nabla = r.compose(c.nabla()).unwrap();
    let pi = c.pi().compose(r_inv).unwrap();
    let h = r.compose(&c.h().compose(r_inv).unwrap()).unwrap();
    Contraction::new(RawContraction::new(g_new.complex().clone(), c.small().clone(), nabla, pi, h).unwrap()).unwrap()
}

pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
