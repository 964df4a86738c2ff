//! Contractions `(N ⇄ M, h)` of chain complexes.
//!
//! A contraction consists of chain maps `∇: M → N`, `π: N → M` and a degree
//! one homotopy `h: N → N` with `π∇ = Id`, `dh + hd = Id − ∇π` and the side
//! conditions `πh = 0`, `h∇ = 0`, `hh = 0`.
//!
//! Unchecked data lives in [`RawContraction`]; a [`Contraction`] can only be
//! obtained by validating one.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{hom_differential, same_module, ChainComplex, GradedMap, GradedModule, SparseVec};
use crate::linalg;
use crate::report::Report;
use crate::scalar::Scalar;

pub const PI_NABLA: &str = "retraction: pi nabla=id";
pub const HOMOTOPY: &str = "homotopy: Dh=id-nabla pi";
pub const SIDE_PI_H: &str = "side: pi h=0";
pub const SIDE_H_NABLA: &str = "side: h nabla=0";
pub const SIDE_HH: &str = "side: hh=0";
pub const NABLA_CHAIN: &str = "chain map: nabla";
pub const PI_CHAIN: &str = "chain map: pi";

#[derive(Clone, Debug)]
pub struct RawContraction {
    pub big: ChainComplex,
    pub small: ChainComplex,
    pub nabla: GradedMap,
    pub pi: GradedMap,
    pub h: GradedMap,
}

impl RawContraction {
    /// Checks the shapes (sources, targets, degrees) of the three maps.
    pub fn new(
        big: ChainComplex,
        small: ChainComplex,
        nabla: GradedMap,
        pi: GradedMap,
        h: GradedMap,
    ) -> Result<RawContraction> {
        let n = big.module();
        let m = small.module();
        let shape = |f: &GradedMap, src: &Arc<GradedModule>, tgt: &Arc<GradedModule>, deg: i64, what: &str| {
            if !same_module(f.source(), src) || !same_module(f.target(), tgt) {
                return Err(Error::ModuleMismatch(format!("{what} has the wrong source or target")));
            }
            if f.degree() != deg && !f.is_zero() {
                return Err(Error::DegreeMismatch {
                    expected: deg,
                    found: f.degree(),
                    context: what.to_string(),
                });
            }
            Ok(())
        };
        shape(&nabla, m, n, 0, "nabla")?;
        shape(&pi, n, m, 0, "pi")?;
        shape(&h, n, n, 1, "h")?;
        Ok(RawContraction {
            nabla: nabla.with_modules(m.clone(), n.clone())?,
            pi: pi.with_modules(n.clone(), m.clone())?,
            h: h.with_modules(n.clone(), n.clone())?,
            big,
            small,
        })
    }

    pub fn validate(&self) -> Report {
        validate_contraction(self)
    }
}

/// Exact check of every contraction identity; failures name a generator on
/// which the identity breaks.
pub fn validate_contraction(c: &RawContraction) -> Report {
    let mut report = Report::new();
    let dn = c.big.d();
    let dm = c.small.d();
    let cmp = |a: Result<GradedMap>, b: Result<GradedMap>| -> Option<String> {
        match (a, b) {
            (Ok(a), Ok(b)) => a.witness_name(&b).unwrap_or_else(|e| Some(e.to_string())),
            (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
        }
    };
    let zero = |a: Result<GradedMap>| -> Option<String> {
        match a {
            Ok(a) => a.nonzero_witness(),
            Err(e) => Some(e.to_string()),
        }
    };

    report.record(NABLA_CHAIN, None, cmp(dn.compose(&c.nabla), c.nabla.compose(dm)));
    report.record(PI_CHAIN, None, cmp(dm.compose(&c.pi), c.pi.compose(dn)));
    report.record(
        PI_NABLA,
        None,
        cmp(
            c.pi.compose(&c.nabla),
            Ok(GradedMap::identity(c.small.module().clone())),
        ),
    );
    let id_n = GradedMap::identity(c.big.module().clone());
    report.record(
        HOMOTOPY,
        None,
        cmp(
            hom_differential(&c.h, dn, dn),
            c.nabla.compose(&c.pi).and_then(|np| id_n.sub(&np)),
        ),
    );
    report.record(SIDE_PI_H, None, zero(c.pi.compose(&c.h)));
    report.record(SIDE_H_NABLA, None, zero(c.h.compose(&c.nabla)));
    report.record(SIDE_HH, None, zero(c.h.compose(&c.h)));
    report
}

/// A contraction whose identities have been verified exactly.
#[derive(Clone, Debug)]
pub struct Contraction(RawContraction);

impl Contraction {
    pub fn new(raw: RawContraction) -> Result<Contraction> {
        let report = raw.validate();
        if report.ok() {
            Ok(Contraction(raw))
        } else {
            Err(Error::InvalidContraction(report))
        }
    }

    pub fn big(&self) -> &ChainComplex {
        &self.0.big
    }

    pub fn small(&self) -> &ChainComplex {
        &self.0.small
    }

    pub fn nabla(&self) -> &GradedMap {
        &self.0.nabla
    }

    pub fn pi(&self) -> &GradedMap {
        &self.0.pi
    }

    pub fn h(&self) -> &GradedMap {
        &self.0.h
    }

    pub fn raw(&self) -> &RawContraction {
        &self.0
    }

    pub fn into_raw(self) -> RawContraction {
        self.0
    }
}

/// `(Id, Id, 0)` on `c`.
pub fn trivial_contraction(c: &ChainComplex) -> Contraction {
    let id = GradedMap::identity(c.module().clone());
    let h = GradedMap::zero(c.module().clone(), c.module().clone(), 1);
    Contraction(RawContraction {
        big: c.clone(),
        small: c.clone(),
        nabla: id.clone(),
        pi: id,
        h,
    })
}

fn dense_block(d: &GradedMap, rows: &[usize], cols: &[usize]) -> linalg::Dense {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| d.entry(r, c)).collect())
        .collect()
}

fn to_sparse(v: &[Scalar], basis: &[usize]) -> SparseVec {
    let mut out: SparseVec = v
        .iter()
        .zip(basis)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, &i)| (i, c.clone()))
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}

/// Contraction of `c` onto a complex with zero differential whose rank in
/// each degree equals the homology rank.
///
/// In every degree the module splits as `B ⊕ H ⊕ C`: `C` is spanned by the
/// pivot generators of the outgoing differential (a complement of the
/// cycles), `B = d(C)` and `H` is the greedy completion of `B` to the cycles
/// using the kernel basis. `h` inverts `d` from `B` to `C` and vanishes on
/// `H ⊕ C`.
pub fn build_homology_contraction(c: &ChainComplex) -> Contraction {
    let n = c.module().clone();
    let d = c.d();
    let degrees = n.degrees();

    // Complement of the cycles in each degree: pivot generators of d restricted there.
    let mut complement: std::collections::HashMap<i64, Vec<usize>> = Default::default();
    for &deg in &degrees {
        let src = n.basis_in_degree(deg);
        let tgt = n.basis_in_degree(deg - 1);
        let block = dense_block(d, &tgt, &src);
        let pivots = linalg::rref(&block, src.len()).pivots;
        complement.insert(deg, pivots.iter().map(|&p| src[p]).collect());
    }

    let mut small_gens: Vec<(String, i64)> = Vec::new();
    let mut nabla_cols: Vec<SparseVec> = Vec::new();
    // pi and h rows are filled per degree
    let mut pi_entries: Vec<(usize, usize, Scalar)> = Vec::new();
    let mut h_entries: Vec<(usize, usize, Scalar)> = Vec::new();

    for &deg in &degrees {
        let basis = n.basis_in_degree(deg);
        let dim = basis.len();
        let coords = |g: usize| -> Vec<Scalar> {
            basis
                .iter()
                .map(|&b| if b == g { Scalar::one() } else { Scalar::zero() })
                .collect()
        };
        // boundaries: images of the complement one degree up
        let upper = complement.get(&(deg + 1)).cloned().unwrap_or_default();
        let boundaries: Vec<Vec<Scalar>> = upper
            .iter()
            .map(|&u| basis.iter().map(|&b| d.entry(b, u)).collect())
            .collect();
        let lower = n.basis_in_degree(deg - 1);
        let kernel = linalg::nullspace(&dense_block(d, &lower, &basis), dim);
        let homology = linalg::extend_to_independent(&boundaries, &kernel, dim);
        let own_complement = complement.get(&deg).cloned().unwrap_or_default();

        // change of basis P = [B | H | C]
        let mut columns: Vec<Vec<Scalar>> = Vec::new();
        columns.extend(boundaries.iter().cloned());
        columns.extend(homology.iter().cloned());
        columns.extend(own_complement.iter().map(|&g| coords(g)));
        debug_assert_eq!(columns.len(), dim);
        let p: linalg::Dense = (0..dim)
            .map(|r| columns.iter().map(|col| col[r].clone()).collect())
            .collect();
        let p_inv = linalg::inverse(&p).expect("B ⊕ H ⊕ C spans");

        let nb = boundaries.len();
        for (k, hv) in homology.iter().enumerate() {
            let idx = small_gens.len();
            let single = hv.iter().filter(|c| !c.is_zero()).count() == 1 && hv.iter().any(|c| c.is_one());
            let name = if single {
                let pos = hv.iter().position(|c| c.is_one()).unwrap();
                format!("[{}]", n.name(basis[pos]))
            } else {
                format!("[H{deg}.{k}]")
            };
            small_gens.push((name, deg));
            nabla_cols.push(to_sparse(hv, &basis));
            // pi: row nb + k of P^{-1}
            for (col, &g) in basis.iter().enumerate() {
                let v = &p_inv[nb + k][col];
                if !v.is_zero() {
                    pi_entries.push((idx, g, v.clone()));
                }
            }
        }
        // h: x ↦ Σ_i (coefficient of x on boundary b_i) · c_i
        for (i, &u) in upper.iter().enumerate() {
            for (col, &g) in basis.iter().enumerate() {
                let v = &p_inv[i][col];
                if !v.is_zero() {
                    h_entries.push((u, g, v.clone()));
                }
            }
        }
    }

    let m = Arc::new(GradedModule::new(small_gens).expect("class names are unique"));
    let small = ChainComplex::zero_differential(m.clone());
    let nabla = GradedMap::from_columns(m.clone(), n.clone(), 0, nabla_cols).expect("homogeneous");
    let pi = GradedMap::from_entries(n.clone(), m.clone(), 0, pi_entries).expect("homogeneous");
    let h = GradedMap::from_entries(n.clone(), n.clone(), 1, h_entries).expect("homogeneous");
    let raw = RawContraction {
        big: c.clone(),
        small,
        nabla,
        pi,
        h,
    };
    debug_assert!(raw.validate().ok(), "{:?}", raw.validate());
    Contraction(raw)
}
