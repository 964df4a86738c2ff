//! Graded modules over the rationals, homogeneous sparse maps between them and
//! chain complexes.
//!
//! Maps are stored column-wise: column `j` holds the image of source
//! generator `j` as a sorted list of `(target index, coefficient)` pairs with
//! no zero coefficients. A map is always homogeneous; constructors reject any
//! entry whose degrees do not match.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Scalar;

/// A sparse vector in some graded module, sorted by index, without zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// A free graded module with an ordered, named basis.
#[derive(Clone)]
pub struct GradedModule {
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl GradedModule {
    pub fn new<I, S>(generators: I) -> Result<GradedModule>
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut gens = Vec::new();
        let mut index = HashMap::new();
        for (name, degree) in generators {
            let name = name.into();
            if index.insert(name.clone(), gens.len()).is_some() {
                return Err(Error::DuplicateGenerator(name));
            }
            gens.push(Generator { name, degree });
        }
        Ok(GradedModule {
            generators: gens,
            index,
        })
    }

    pub fn empty() -> GradedModule {
        GradedModule {
            generators: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.generators[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Generators of the given degree, in canonical order.
    pub fn basis_in_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == degree).collect()
    }

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Same generators with every degree shifted by `shift` and names
    /// prefixed by `prefix`.
    pub fn shifted(&self, prefix: &str, shift: i64) -> GradedModule {
        GradedModule::new(
            self.generators
                .iter()
                .map(|g| (format!("{prefix}{}", g.name), g.degree + shift)),
        )
        .expect("prefixing preserves uniqueness")
    }

    /// Renders a sparse vector using generator names.
    pub fn format_vec(&self, v: &[(usize, Scalar)]) -> String {
        if v.is_empty() {
            return "0".to_string();
        }
        v.iter()
            .map(|(i, c)| format!("{c}*{}", self.name(*i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl PartialEq for GradedModule {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for GradedModule {}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.generators.iter().map(|g| format!("{}:{}", g.name, g.degree)))
            .finish()
    }
}

pub fn same_module(a: &Arc<GradedModule>, b: &Arc<GradedModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Accumulates a linear combination of basis vectors.
#[derive(Default)]
pub struct Accumulator {
    entries: BTreeMap<usize, Scalar>,
}

impl Accumulator {
    pub fn new() -> Accumulator {
        Accumulator::default()
    }

    pub fn add(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(e) => *e += c,
            None => {
                self.entries.insert(i, c);
            }
        }
    }

    pub fn add_scaled(&mut self, v: &[(usize, Scalar)], coef: &Scalar) {
        if coef.is_zero() {
            return;
        }
        for (i, c) in v {
            self.add(*i, c * coef);
        }
    }

    pub fn add_vec(&mut self, v: &[(usize, Scalar)]) {
        for (i, c) in v {
            self.add(*i, c.clone());
        }
    }

    pub fn finish(self) -> SparseVec {
        self.entries.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

pub fn scale_vec(v: &[(usize, Scalar)], coef: &Scalar) -> SparseVec {
    if coef.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, c)| (*i, c * coef)).collect()
}

pub fn add_vecs(a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
    let mut acc = Accumulator::new();
    acc.add_vec(a);
    acc.add_vec(b);
    acc.finish()
}

/// A homogeneous linear map between graded modules.
#[derive(Clone)]
pub struct GradedMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    degree: i64,
    cols: Vec<SparseVec>,
}

impl GradedMap {
    pub fn zero(source: Arc<GradedModule>, target: Arc<GradedModule>, degree: i64) -> GradedMap {
        let n = source.len();
        GradedMap {
            source,
            target,
            degree,
            cols: vec![Vec::new(); n],
        }
    }

    pub fn identity(module: Arc<GradedModule>) -> GradedMap {
        let cols = (0..module.len()).map(|i| vec![(i, Scalar::one())]).collect();
        GradedMap {
            source: module.clone(),
            target: module,
            degree: 0,
            cols,
        }
    }

    /// Builds a map from its columns; entries are merged, zeros dropped and
    /// homogeneity checked.
    pub fn from_columns(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        degree: i64,
        cols: Vec<SparseVec>,
    ) -> Result<GradedMap> {
        if cols.len() != source.len() {
            return Err(Error::ModuleMismatch(format!(
                "{} columns for a source of rank {}",
                cols.len(),
                source.len()
            )));
        }
        let mut clean = Vec::with_capacity(cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            let mut acc = Accumulator::new();
            for (i, c) in col {
                if i >= target.len() {
                    return Err(Error::ModuleMismatch(format!("row index {i} out of range")));
                }
                if !c.is_zero() && target.degree(i) != source.degree(j) + degree {
                    return Err(Error::NonHomogeneous(format!(
                        "{} -> {} in a map of degree {degree}",
                        source.name(j),
                        target.name(i)
                    )));
                }
                acc.add(i, c);
            }
            clean.push(acc.finish());
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            cols: clean,
        })
    }

    /// Like [`GradedMap::from_columns`] for columns already known to be
    /// sorted, merged and homogeneous.
    pub(crate) fn from_columns_unchecked(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        degree: i64,
        cols: Vec<SparseVec>,
    ) -> GradedMap {
        debug_assert_eq!(cols.len(), source.len());
        GradedMap {
            source,
            target,
            degree,
            cols,
        }
    }

    pub fn from_entries(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        degree: i64,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<GradedMap> {
        let mut cols = vec![Vec::new(); source.len()];
        for (row, col, c) in entries {
            if col >= source.len() {
                return Err(Error::ModuleMismatch(format!("column index {col} out of range")));
            }
            cols[col].push((row, c));
        }
        GradedMap::from_columns(source, target, degree, cols)
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn col(&self, j: usize) -> &[(usize, Scalar)] {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.cols[col]
            .iter()
            .find(|(i, _)| *i == row)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// First source generator with a nonzero image.
    pub fn first_nonzero_column(&self) -> Option<usize> {
        self.cols.iter().position(|c| !c.is_empty())
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (j, c) in v {
            acc.add_scaled(&self.cols[*j], c);
        }
        acc.finish()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if !same_module(&self.source, &other.target) {
            return Err(Error::ModuleMismatch(format!(
                "cannot compose: inner modules {:?} and {:?} differ",
                self.source, other.target
            )));
        }
        let cols = other.cols.iter().map(|col| self.apply(col)).collect();
        Ok(GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            cols,
        })
    }

    fn check_same_shape(&self, other: &GradedMap, op: &str) -> Result<()> {
        if !same_module(&self.source, &other.source) || !same_module(&self.target, &other.target) {
            return Err(Error::ModuleMismatch(format!("{op}: maps between different modules")));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
                context: op.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_same_shape(other, "add")?;
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| add_vecs(a, b)).collect();
        Ok(GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree,
            cols,
        })
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            cols: self.cols.iter().map(|col| scale_vec(col, c)).collect(),
        }
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&-Scalar::one())
    }

    /// Keeps only the columns selected by `keep`.
    pub fn restrict_columns(&self, keep: impl Fn(usize) -> bool) -> GradedMap {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(j, c)| if keep(j) { c.clone() } else { Vec::new() })
            .collect();
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            cols,
        }
    }

    /// Keeps only the rows selected by `keep`.
    pub fn restrict_rows(&self, keep: impl Fn(usize) -> bool) -> GradedMap {
        let cols = self
            .cols
            .iter()
            .map(|c| c.iter().filter(|(i, _)| keep(*i)).cloned().collect())
            .collect();
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            cols,
        }
    }

    /// Exact equality, reporting the first source generator where the maps
    /// differ.
    pub fn difference_witness(&self, other: &GradedMap) -> Result<Option<usize>> {
        self.check_same_shape(other, "compare")?;
        Ok(self
            .cols
            .iter()
            .zip(&other.cols)
            .position(|(a, b)| !add_vecs(a, &scale_vec(b, &-Scalar::one())).is_empty()))
    }

    /// Name of the first source generator where `self` and `other` differ.
    pub fn witness_name(&self, other: &GradedMap) -> Result<Option<String>> {
        Ok(self.difference_witness(other)?.map(|j| self.source.name(j).to_string()))
    }

    /// Name of the first source generator with a nonzero image.
    pub fn nonzero_witness(&self) -> Option<String> {
        self.first_nonzero_column().map(|j| self.source.name(j).to_string())
    }

    /// Same matrix, re-attached to structurally equal modules.
    pub fn with_modules(&self, source: Arc<GradedModule>, target: Arc<GradedModule>) -> Result<GradedMap> {
        if !same_module(&self.source, &source) || !same_module(&self.target, &target) {
            return Err(Error::ModuleMismatch("with_modules: modules differ".into()));
        }
        Ok(GradedMap {
            source,
            target,
            degree: self.degree,
            cols: self.cols.clone(),
        })
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut m = vec![vec![Scalar::zero(); self.source.len()]; self.target.len()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m[*i][j] = c.clone();
            }
        }
        m
    }
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &Self) -> bool {
        same_module(&self.source, &other.source)
            && same_module(&self.target, &other.target)
            && (self.degree == other.degree || (self.is_zero() && other.is_zero()))
            && self.cols == other.cols
    }
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedMap(degree {})", self.degree)?;
        for (j, col) in self.cols.iter().enumerate() {
            if !col.is_empty() {
                writeln!(f, "  {} -> {}", self.source.name(j), self.target.format_vec(col))?;
            }
        }
        Ok(())
    }
}

/// The Hom-complex differential `D φ = d_tgt φ − (−1)^{|φ|} φ d_src`.
pub fn hom_differential(phi: &GradedMap, d_src: &GradedMap, d_tgt: &GradedMap) -> Result<GradedMap> {
    for (d, m, what) in [(d_src, phi.source(), "source"), (d_tgt, phi.target(), "target")] {
        if !same_module(d.source(), m) || !same_module(d.target(), m) {
            return Err(Error::ModuleMismatch(format!(
                "{what} differential does not act on the {what} of the map"
            )));
        }
        if d.degree() != -1 && !d.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: -1,
                found: d.degree(),
                context: format!("{what} differential"),
            });
        }
    }
    let left = d_tgt.compose(phi)?;
    let right = phi.compose(d_src)?.scale(&Scalar::sign(phi.degree()));
    let mut out = left.sub(&right)?;
    out.degree = phi.degree() - 1;
    Ok(out)
}

/// A chain complex: a graded module with a degree −1 endomorphism.
///
/// Construction only checks the shape of `d`; use [`ChainComplex::validate`]
/// for `d ∘ d = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    module: Arc<GradedModule>,
    d: GradedMap,
}

impl ChainComplex {
    pub fn new(module: Arc<GradedModule>, d: GradedMap) -> Result<ChainComplex> {
        if !same_module(d.source(), &module) || !same_module(d.target(), &module) {
            return Err(Error::ModuleMismatch(
                "differential is not an endomorphism of the module".into(),
            ));
        }
        if d.degree() != -1 {
            return Err(Error::DegreeMismatch {
                expected: -1,
                found: d.degree(),
                context: "differential".into(),
            });
        }
        let d = d.with_modules(module.clone(), module.clone())?;
        Ok(ChainComplex { module, d })
    }

    /// The complex with zero differential.
    pub fn zero_differential(module: Arc<GradedModule>) -> ChainComplex {
        let d = GradedMap::zero(module.clone(), module.clone(), -1);
        ChainComplex { module, d }
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn validate(&self) -> Report {
        validate_chain_complex(self)
    }

    /// Suspension: degrees shift by one and the differential changes sign,
    /// so that `d s + s d = 0`.
    pub fn suspend(&self) -> ChainComplex {
        self.suspend_with_prefix("s")
    }

    pub fn suspend_with_prefix(&self, prefix: &str) -> ChainComplex {
        let module = Arc::new(self.module.shifted(prefix, 1));
        let cols = self.d.cols().iter().map(|c| scale_vec(c, &-Scalar::one())).collect();
        let d = GradedMap::from_columns_unchecked(module.clone(), module.clone(), -1, cols);
        ChainComplex { module, d }
    }

    /// Desuspension, undoing [`ChainComplex::suspend_with_prefix`] up to
    /// generator names.
    pub fn desuspend_with_prefix(&self, prefix: &str) -> ChainComplex {
        let module = Arc::new(
            GradedModule::new(self.module.generators().iter().map(|g| {
                let name = g.name.strip_prefix(prefix).unwrap_or(&g.name).to_string();
                (name, g.degree - 1)
            }))
            .expect("desuspension keeps names unique"),
        );
        let cols = self.d.cols().iter().map(|c| scale_vec(c, &-Scalar::one())).collect();
        let d = GradedMap::from_columns_unchecked(module.clone(), module.clone(), -1, cols);
        ChainComplex { module, d }
    }
}

/// Checks that `d` has degree −1 and squares to zero; the report names the
/// first generator `x` with `d(d(x)) ≠ 0`.
pub fn validate_chain_complex(c: &ChainComplex) -> Report {
    let mut report = Report::new();
    if c.d.degree() == -1 || c.d.is_zero() {
        report.pass("d has degree -1", None);
    } else {
        report.fail("d has degree -1", None, format!("degree {}", c.d.degree()));
    }
    let dd = c.d.compose(&c.d).expect("endomorphism");
    report.record("dd=0", None, dd.nonzero_witness());
    report
}
