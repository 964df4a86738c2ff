//! Named example algebras and seeded random instances used by the tests,
//! the acceptance suite and the CLI examples.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::contraction::RawContraction;
use crate::dgla::{Dgla, PreBracket};
use crate::graded::{ChainComplex, GradedMap, GradedModule, SparseVec};
use crate::linalg;
use crate::scalar::Scalar;

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn module(gens: &[(&str, i64)]) -> Arc<GradedModule> {
    Arc::new(GradedModule::new(gens.iter().map(|(n, d)| (n.to_string(), *d))).unwrap())
}

fn complex(m: &Arc<GradedModule>, d: &[(&str, &str, i64)]) -> ChainComplex {
    let entries = d
        .iter()
        .map(|(src, tgt, c)| (m.lookup(tgt).unwrap(), m.lookup(src).unwrap(), int(*c)));
    let d = GradedMap::from_entries(m.clone(), m.clone(), -1, entries).unwrap();
    ChainComplex::new(m.clone(), d).unwrap()
}

type Row<'a> = (&'a str, &'a str, &'a [(&'a str, i64)]);

fn bracket(c: ChainComplex, table: &[Row]) -> PreBracket {
    let m = c.module().clone();
    let upper = table
        .iter()
        .map(|(l, r, terms)| {
            let v: SparseVec = terms.iter().map(|(n, k)| (m.lookup(n).unwrap(), int(*k))).collect();
            (m.lookup(l).unwrap(), m.lookup(r).unwrap(), v)
        })
        .collect();
    PreBracket::new(c, upper).unwrap()
}

/// Heisenberg algebra `[a,b] = c` with `c` killed by `du = c`.
pub fn heis_dgla() -> Dgla {
    let m = module(&[("a", 0), ("b", 0), ("c", 0), ("u", 1)]);
    let c = complex(&m, &[("u", "c", 1)]);
    Dgla::new(bracket(c, &[("a", "b", &[("c", 1)])])).unwrap()
}

/// The contraction of the Heisenberg complex onto `span{[a], [b]}` with
/// `h c = u`.
pub fn heis_contraction() -> RawContraction {
    let big = heis_dgla().complex().clone();
    let n = big.module().clone();
    let m = module(&[("[a]", 0), ("[b]", 0)]);
    let small = ChainComplex::zero_differential(m.clone());
    let nabla = GradedMap::from_entries(m.clone(), n.clone(), 0, [(0, 0, int(1)), (1, 1, int(1))]).unwrap();
    let pi = GradedMap::from_entries(n.clone(), m, 0, [(0, 0, int(1)), (1, 1, int(1))]).unwrap();
    let h = GradedMap::from_entries(n.clone(), n, 1, [(3, 2, int(1))]).unwrap();
    RawContraction::new(big, small, nabla, pi, h).unwrap()
}

/// Contraction of the acyclic complex `e → b`, `g → f` (degrees 1, 0, 3, 2)
/// onto zero with `h: b ↦ e ↦ f ↦ g`. Every axiom holds except `hh = 0`.
pub fn hh_violating_contraction() -> RawContraction {
    let n = module(&[("b", 0), ("e", 1), ("f", 2), ("g", 3)]);
    let big = complex(&n, &[("e", "b", 1), ("g", "f", 1)]);
    let small = ChainComplex::zero_differential(Arc::new(GradedModule::empty()));
    let m = small.module().clone();
    let h = GradedMap::from_entries(
        n.clone(),
        n.clone(),
        1,
        [(1, 0, int(1)), (2, 1, int(1)), (3, 2, int(1))],
    )
    .unwrap();
    let nabla = GradedMap::zero(m.clone(), n.clone(), 0);
    let pi = GradedMap::zero(n, m, 0);
    RawContraction::new(big, small, nabla, pi, h).unwrap()
}

/// `sl(2)` with `[e,f] = h`, `[h,e] = 2e`, `[h,f] = −2f` and zero differential.
pub fn sl2_dgla() -> Dgla {
    let m = module(&[("e", 0), ("f", 0), ("h", 0)]);
    let c = ChainComplex::zero_differential(m);
    Dgla::new(bracket(
        c,
        &[
            ("e", "f", &[("h", 1)]),
            ("e", "h", &[("e", -2)]),
            ("f", "h", &[("f", 2)]),
        ],
    ))
    .unwrap()
}

/// `x, y, z, w` in degrees 1..4 with `[x,x] = y`, `dz = y`, `[x,z] = w`.
/// Its homology `{x, w}` carries a nonzero ternary bracket.
pub fn massey_dgla() -> Dgla {
    let m = module(&[("x", 1), ("y", 2), ("z", 3), ("w", 4)]);
    let c = complex(&m, &[("z", "y", 1)]);
    Dgla::new(bracket(c, &[("x", "x", &[("y", 1)]), ("x", "z", &[("w", 1)])])).unwrap()
}

/// The two-dimensional Lie algebra `[p,q] = q` tensored with the algebra
/// `span{1, x, y}` (`dy = x`, all products of `x, y` zero).
pub fn l2_tensor_dgla() -> Dgla {
    let m = module(&[("p1", 0), ("q1", 0), ("px", 0), ("qx", 0), ("py", 1), ("qy", 1)]);
    let c = complex(&m, &[("py", "px", 1), ("qy", "qx", 1)]);
    Dgla::new(bracket(
        c,
        &[
            ("p1", "q1", &[("q1", 1)]),
            ("p1", "qx", &[("qx", 1)]),
            ("p1", "qy", &[("qy", 1)]),
            ("q1", "px", &[("qx", -1)]),
            ("q1", "py", &[("qy", -1)]),
        ],
    ))
    .unwrap()
}

/// `sl(2) ⊗ Λ(t)` with `dt = 1`; acyclic.
pub fn sl2_exterior_dgla() -> Dgla {
    let m = module(&[("e1", 0), ("f1", 0), ("h1", 0), ("et", 1), ("ft", 1), ("ht", 1)]);
    let c = complex(&m, &[("et", "e1", 1), ("ft", "f1", 1), ("ht", "h1", 1)]);
    Dgla::new(bracket(
        c,
        &[
            ("e1", "f1", &[("h1", 1)]),
            ("e1", "h1", &[("e1", -2)]),
            ("f1", "h1", &[("f1", 2)]),
            ("e1", "ft", &[("ht", 1)]),
            ("e1", "ht", &[("et", -2)]),
            ("f1", "et", &[("ht", -1)]),
            ("f1", "ht", &[("ft", 2)]),
            ("h1", "et", &[("et", 2)]),
            ("h1", "ft", &[("ft", -2)]),
        ],
    ))
    .unwrap()
}

/// Skew-symmetric, `d`-compatible but violating Jacobi on `(x, y, z)`:
/// `[x,y] = y`, `[y,z] = x`.
pub fn non_jacobi_prebracket() -> PreBracket {
    let m = module(&[("x", 0), ("y", 0), ("z", 0)]);
    let c = ChainComplex::zero_differential(m);
    bracket(c, &[("x", "y", &[("y", 1)]), ("y", "z", &[("x", 1)])])
}

pub fn named_dglas() -> Vec<(&'static str, Dgla)> {
    vec![
        ("heis", heis_dgla()),
        ("sl2", sl2_dgla()),
        ("massey", massey_dgla()),
        ("l2-tensor", l2_tensor_dgla()),
        ("sl2-exterior", sl2_exterior_dgla()),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random degree-preserving automorphism `P` of `m` together with `P⁻¹`.
/// Each degree block is a product of unit lower and upper triangular
/// matrices with small integer entries.
pub fn random_automorphism<R: Rng>(rng: &mut R, m: &Arc<GradedModule>) -> (GradedMap, GradedMap) {
    let mut p_entries = Vec::new();
    let mut q_entries = Vec::new();
    for deg in m.degrees() {
        let basis = m.basis_in_degree(deg);
        let k = basis.len();
        let mut lower = linalg::identity(k);
        let mut upper = linalg::identity(k);
        for i in 0..k {
            for j in 0..i {
                lower[i][j] = int(rng.gen_range(-2..=2));
                upper[j][i] = int(rng.gen_range(-1..=1));
            }
        }
        let block = linalg::mat_mul(&lower, &upper, k, k);
        let inv = linalg::inverse(&block).expect("unitriangular factors");
        for r in 0..k {
            for c in 0..k {
                p_entries.push((basis[r], basis[c], block[r][c].clone()));
                q_entries.push((basis[r], basis[c], inv[r][c].clone()));
            }
        }
    }
    let p = GradedMap::from_entries(m.clone(), m.clone(), 0, p_entries).unwrap();
    let q = GradedMap::from_entries(m.clone(), m.clone(), 0, q_entries).unwrap();
    (p, q)
}

/// The structure transported along a change of basis: the new `i`-th
/// generator is `P e_i`, so `d' = P⁻¹ d P` and `[e_i, e_j]' = P⁻¹[P e_i, P e_j]`.
pub fn transport(g: &PreBracket, p: &GradedMap, p_inv: &GradedMap) -> PreBracket {
    let m = g.module().clone();
    let d = p_inv.compose(&g.complex().d().compose(p).unwrap()).unwrap();
    let c = ChainComplex::new(m.clone(), d).unwrap();
    let mut upper = Vec::new();
    for i in 0..m.len() {
        for j in i..m.len() {
            let v = p_inv.apply(&g.bracket_vecs(p.col(i), p.col(j)));
            if !v.is_empty() {
                upper.push((i, j, v));
            }
        }
    }
    PreBracket::new(c, upper).unwrap()
}

/// A random complex with at most `max_gens` generators in degrees
/// `0..=max_degree`, obtained by conjugating a sum of elementary pieces
/// (`x → y` pairs and isolated cycles) by a random automorphism.
pub fn random_complex<R: Rng>(rng: &mut R, max_gens: usize, max_degree: i64) -> ChainComplex {
    let total = rng.gen_range(1..=max_gens);
    let mut gens: Vec<(String, i64)> = Vec::new();
    let mut d_entries = Vec::new();
    while gens.len() < total {
        let room = total - gens.len();
        if room >= 2 && max_degree > 0 && rng.gen_bool(0.5) {
            let deg = rng.gen_range(0..max_degree);
            let k = gens.len();
            gens.push((format!("g{k}"), deg + 1));
            gens.push((format!("g{}", k + 1), deg));
            d_entries.push((k + 1, k, int(rng.gen_range(1..=3))));
        } else {
            let k = gens.len();
            gens.push((format!("g{k}"), rng.gen_range(0..=max_degree)));
        }
    }
    let m = Arc::new(GradedModule::new(gens).unwrap());
    let d = GradedMap::from_entries(m.clone(), m.clone(), -1, d_entries).unwrap();
    let (p, q) = random_automorphism(rng, &m);
    let d = q.compose(&d.compose(&p).unwrap()).unwrap();
    ChainComplex::new(m, d).unwrap()
}

/// Random differential graded Lie algebra number `index` of a seeded
/// family: a random change of basis of one of the named algebras, or of an
/// abelian random complex.
pub fn random_dgla(seed: u64, index: usize) -> Dgla {
    let mut r = rng(seed ^ (index as u64).wrapping_mul(0x9e37_79b9));
    let named = named_dglas();
    let base = if index % (named.len() + 1) == named.len() {
        PreBracket::abelian(random_complex(&mut r, 6, 3))
    } else {
        named[index % (named.len() + 1)].1.pre().clone()
    };
    let (p, q) = random_automorphism(&mut r, base.module());
    Dgla::new(transport(&base, &p, &q)).expect("transport preserves the axioms")
}

/// Renames generators by a permutation: generator `i` of the result is
/// generator `perm[i]` of `g`.
pub fn permute(g: &PreBracket, perm: &[usize]) -> PreBracket {
    let m = g.module();
    let mut inverse = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let nm = Arc::new(GradedModule::new(perm.iter().map(|&p| (m.name(p).to_string(), m.degree(p)))).unwrap());
    let relabel = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut out: SparseVec = v.iter().map(|(k, c)| (inverse[*k], c.clone())).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    };
    let cols = perm.iter().map(|&p| relabel(g.complex().d().col(p))).collect();
    let d = GradedMap::from_columns(nm.clone(), nm.clone(), -1, cols).unwrap();
    let c = ChainComplex::new(nm.clone(), d).unwrap();
    let mut upper = Vec::new();
    for i in 0..perm.len() {
        for j in i..perm.len() {
            let v = relabel(g.structure_constant(perm[i], perm[j]));
            if !v.is_empty() {
                upper.push((i, j, v));
            }
        }
    }
    PreBracket::new(c, upper).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_algebras_are_valid() {
        for (name, g) in named_dglas() {
            assert!(g.validate().ok(), "{name}");
        }
        assert!(!non_jacobi_prebracket().validate().ok());
    }

    #[test]
    fn random_instances_are_deterministic_and_valid() {
        for i in 0..12 {
            let a = random_dgla(7, i);
            let b = random_dgla(7, i);
            assert_eq!(a.upper_entries(), b.upper_entries());
            assert_eq!(a.complex(), b.complex());
        }
        let mut r = rng(3);
        for _ in 0..30 {
            let c = random_complex(&mut r, 6, 3);
            assert!(c.validate().ok());
            assert!(c.module().len() <= 6);
            assert!(c.module().degrees().iter().all(|d| (0..=3).contains(d)));
        }
    }

    #[test]
    fn permutation_preserves_validity() {
        let g = permute(sl2_dgla().pre(), &[2, 0, 1]);
        assert!(g.validate().ok());
        assert_eq!(g.module().name(0), "h");
    }
}
