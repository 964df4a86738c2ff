//! Differential graded Lie algebras given by structure constants.
//!
//! Brackets are entered for ordered pairs `i ≤ j` only; the value at `(j, i)`
//! is synthesized from graded skew-symmetry `[x,y] = −(−1)^{|x||y|}[y,x]`.
//! Self-brackets of odd generators are free data; self-brackets of even
//! generators must vanish and are flagged by [`PreBracket::validate`].

use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{Accumulator, ChainComplex, GradedModule, SparseVec};
use crate::report::Report;
use crate::scalar::Scalar;

/// A graded bracket on a chain complex, not necessarily satisfying the
/// Jacobi identity.
#[derive(Clone, Debug)]
pub struct PreBracket {
    complex: ChainComplex,
    /// `table[i][j] = [g_i, g_j]`, full square table.
    table: Vec<Vec<SparseVec>>,
}

impl PreBracket {
    /// Builds the bracket from upper-triangular structure constants
    /// `(i, j, [g_i, g_j])` with `i ≤ j`.
    pub fn new(complex: ChainComplex, upper: Vec<(usize, usize, SparseVec)>) -> Result<PreBracket> {
        let module = complex.module().clone();
        let n = module.len();
        let mut table = vec![vec![Vec::new(); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (i, j, value) in upper {
            if i >= n || j >= n {
                return Err(Error::BracketTable(format!(
                    "generator index out of range in ({i}, {j})"
                )));
            }
            if i > j {
                return Err(Error::BracketTable(format!(
                    "entry [{}, {}] must be given in canonical order",
                    module.name(i),
                    module.name(j)
                )));
            }
            if seen[i][j] {
                return Err(Error::BracketTable(format!(
                    "duplicate entry [{}, {}]",
                    module.name(i),
                    module.name(j)
                )));
            }
            seen[i][j] = true;
            let mut acc = Accumulator::new();
            for (k, c) in value {
                if k >= n {
                    return Err(Error::BracketTable(format!("generator index {k} out of range")));
                }
                if !c.is_zero() && module.degree(k) != module.degree(i) + module.degree(j) {
                    return Err(Error::NonHomogeneous(format!(
                        "[{}, {}] has a component on {}",
                        module.name(i),
                        module.name(j),
                        module.name(k)
                    )));
                }
                acc.add(k, c);
            }
            let v = acc.finish();
            if i != j {
                let s = -Scalar::sign(module.degree(i) * module.degree(j));
                table[j][i] = v.iter().map(|(k, c)| (*k, c * &s)).collect();
            }
            table[i][j] = v;
        }
        Ok(PreBracket { complex, table })
    }

    /// The zero bracket.
    pub fn abelian(complex: ChainComplex) -> PreBracket {
        let n = complex.module().len();
        PreBracket {
            complex,
            table: vec![vec![Vec::new(); n]; n],
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        self.complex.module()
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i][j]
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(Vec::is_empty))
    }

    /// Upper-triangular part of the table, the canonical input form.
    pub fn upper_entries(&self) -> Vec<(usize, usize, SparseVec)> {
        let n = self.module().len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !self.table[i][j].is_empty() {
                    out.push((i, j, self.table[i][j].clone()));
                }
            }
        }
        out
    }

    /// Bilinear extension of the structure constants, without index checks.
    pub(crate) fn bracket_vecs(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, x) in a {
            for (j, y) in b {
                let t = &self.table[*i][*j];
                if t.is_empty() {
                    continue;
                }
                acc.add_scaled(t, &(x * y));
            }
        }
        acc.finish()
    }

    /// `[a, b]` for elements given as sparse coordinate vectors.
    pub fn bracket_eval(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Result<SparseVec> {
        let n = self.module().len();
        if let Some((i, _)) = a.iter().chain(b).find(|(i, _)| *i >= n) {
            return Err(Error::UnknownGenerator(format!("index {i}")));
        }
        Ok(self.bracket_vecs(a, b))
    }

    fn gen(&self, i: usize) -> SparseVec {
        vec![(i, Scalar::one())]
    }

    fn d_vec(&self, v: &[(usize, Scalar)]) -> SparseVec {
        self.complex.d().apply(v)
    }

    /// Checks degree-zero homogeneity, graded skew-symmetry, compatibility
    /// with the differential and the graded Jacobi identity on generators.
    pub fn validate(&self) -> Report {
        let mut report = self.validate_pre();
        report.record("bracket: graded Jacobi", None, self.jacobi_witness());
        report
    }

    /// Everything [`PreBracket::validate`] checks except Jacobi.
    pub fn validate_pre(&self) -> Report {
        let mut report = self.complex.validate();
        let m = self.module();
        let n = m.len();
        let name = |i: usize| m.name(i).to_string();

        let mut homog = None;
        let mut skew = None;
        let mut compat = None;
        'outer: for i in 0..n {
            for j in 0..n {
                if homog.is_none() {
                    if let Some((k, _)) = self.table[i][j]
                        .iter()
                        .find(|(k, _)| m.degree(*k) != m.degree(i) + m.degree(j))
                    {
                        homog = Some(format!("[{}, {}] -> {}", name(i), name(j), name(*k)));
                    }
                }
                if skew.is_none() {
                    let ij = &self.table[i][j];
                    let ji = &self.table[j][i];
                    let s = -Scalar::sign(m.degree(i) * m.degree(j));
                    let mut acc = Accumulator::new();
                    acc.add_vec(ij);
                    acc.add_scaled(ji, &-s);
                    if !acc.finish().is_empty() {
                        skew = Some(format!("({}, {})", name(i), name(j)));
                    }
                }
                if compat.is_none() {
                    // d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
                    let lhs = self.d_vec(&self.table[i][j]);
                    let mut acc = Accumulator::new();
                    acc.add_vec(&self.bracket_vecs(&self.d_vec(&self.gen(i)), &self.gen(j)));
                    acc.add_scaled(
                        &self.bracket_vecs(&self.gen(i), &self.d_vec(&self.gen(j))),
                        &Scalar::sign(m.degree(i)),
                    );
                    acc.add_scaled(&lhs, &-Scalar::one());
                    if !acc.finish().is_empty() {
                        compat = Some(format!("({}, {})", name(i), name(j)));
                    }
                }
                if homog.is_some() && skew.is_some() && compat.is_some() {
                    break 'outer;
                }
            }
        }
        report.record("bracket: degree 0", None, homog);
        report.record("bracket: graded skew-symmetry", None, skew);
        report.record("bracket: compatible with d", None, compat);
        report
    }

    /// First generator triple violating
    /// `[x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]`.
    pub fn jacobi_witness(&self) -> Option<String> {
        let m = self.module();
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.gen(i), self.gen(j), self.gen(k));
                    let lhs = self.bracket_vecs(&x, &self.bracket_vecs(&y, &z));
                    let mut acc = Accumulator::new();
                    acc.add_vec(&self.bracket_vecs(&self.bracket_vecs(&x, &y), &z));
                    acc.add_scaled(
                        &self.bracket_vecs(&y, &self.bracket_vecs(&x, &z)),
                        &Scalar::sign(m.degree(i) * m.degree(j)),
                    );
                    acc.add_scaled(&lhs, &-Scalar::one());
                    if !acc.finish().is_empty() {
                        return Some(format!("({}, {}, {})", m.name(i), m.name(j), m.name(k)));
                    }
                }
            }
        }
        None
    }
}

/// A validated differential graded Lie algebra.
#[derive(Clone, Debug)]
pub struct Dgla(PreBracket);

impl Dgla {
    pub fn new(pre: PreBracket) -> Result<Dgla> {
        let report = pre.validate();
        if report.ok() {
            Ok(Dgla(pre))
        } else {
            Err(Error::InvalidDgla(report))
        }
    }

    pub fn pre(&self) -> &PreBracket {
        &self.0
    }

    pub fn into_pre(self) -> PreBracket {
        self.0
    }
}

impl Deref for Dgla {
    type Target = PreBracket;
    fn deref(&self) -> &PreBracket {
        &self.0
    }
}

pub fn validate_dgla(g: &PreBracket) -> Report {
    g.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn heis_bracket() {
        let g = corpus::heis_dgla();
        let m = g.module();
        let (a, b, c) = (m.lookup("a").unwrap(), m.lookup("b").unwrap(), m.lookup("c").unwrap());
        let one = |i| vec![(i, Scalar::one())];
        assert_eq!(g.bracket_eval(&one(a), &one(b)).unwrap(), one(c));
        assert_eq!(g.bracket_eval(&one(b), &one(a)).unwrap(), vec![(c, -Scalar::one())]);
        assert!(g.bracket_eval(&one(a), &[]).unwrap().is_empty());
        assert!(g.bracket_eval(&one(99), &one(a)).is_err());
    }

    #[test]
    fn even_self_bracket_vanishes() {
        let g = corpus::sl2_dgla();
        for i in 0..3 {
            let x = vec![(i, Scalar::from_int(3))];
            assert!(g.bracket_eval(&x, &x).unwrap().is_empty());
        }
    }

    #[test]
    fn corpus_algebras_validate() {
        assert!(validate_dgla(&corpus::sl2_dgla()).ok());
        assert!(validate_dgla(&corpus::heis_dgla()).ok());
        assert!(validate_dgla(&corpus::massey_dgla()).ok());
        let ab = PreBracket::abelian(corpus::heis_dgla().complex().clone());
        assert!(validate_dgla(&ab).ok());
    }

    #[test]
    fn incompatible_bracket_names_pair() {
        // du = c but [u, a] = 0 while [c, a] != 0 would need d[u,a] = [c,a].
        let big = corpus::heis_dgla().complex().clone();
        let m = big.module().clone();
        let (a, c) = (m.lookup("a").unwrap(), m.lookup("c").unwrap());
        let g = PreBracket::new(big, vec![(a, c, vec![(c, Scalar::one())])]).unwrap();
        let r = g.validate();
        let chk = r.find("bracket: compatible with d", None).unwrap();
        assert!(!chk.pass);
        assert!(chk.witness.as_ref().unwrap().contains('u'));
    }

    #[test]
    fn jacobi_violation_detected() {
        let g = corpus::non_jacobi_prebracket();
        assert!(g.validate_pre().ok());
        let r = g.validate();
        assert!(!r.ok());
        assert!(Dgla::new(g).is_err());
    }

    #[test]
    fn lower_triangle_entries_rejected() {
        let big = corpus::heis_dgla().complex().clone();
        let r = PreBracket::new(big, vec![(1, 0, vec![(2, Scalar::one())])]);
        assert!(matches!(r, Err(Error::BracketTable(_))));
    }
}
