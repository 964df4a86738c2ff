//! JSON problem files and result tables.
//!
//! Scalars are strings (`"-3/2"`). Linear maps are lists of columns
//! `{source, terms: [[target, scalar], ...]}` in basis order; zero columns are
//! omitted. Words of a symmetric coalgebra are named by joining their letters
//! with `*`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::contraction::RawContraction;
use crate::dgla::PreBracket;
use crate::error::{Error, Result};
use crate::graded::{Accumulator, ChainComplex, GradedMap, GradedModule};
use crate::perturbation::FinalContraction;
use crate::report::Report;
use crate::scalar::Scalar;
use crate::transfer::{LInftyStructure, TransferResult};

pub type Terms = Vec<(String, Scalar)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnSpec {
    pub source: String,
    pub terms: Terms,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub terms: Terms,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub differential: Vec<ColumnSpec>,
    pub nabla: Vec<ColumnSpec>,
    pub pi: Vec<ColumnSpec>,
    #[serde(default)]
    pub h: Vec<ColumnSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LInftyEntry {
    pub inputs: Vec<String>,
    pub terms: Terms,
}

/// Tables written by `transfer`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TransferOutput {
    pub max_weight: usize,
    /// Structure constants `l_k` on canonically ordered generators of `M`.
    pub linf: Vec<LInftyEntry>,
    /// `τ` on words of `S[sM]`, valued in `g`.
    pub tau: Vec<ColumnSpec>,
    /// Corestriction of `𝒟`, valued in the letters `sM`.
    pub coderivation: Vec<ColumnSpec>,
    pub report: Report,
}

/// Maps of the final contraction on words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ContractionOutput {
    pub max_weight: usize,
    pub tau_bar: Vec<ColumnSpec>,
    pub pi: Vec<ColumnSpec>,
    pub h: Vec<ColumnSpec>,
    pub phi: Vec<ColumnSpec>,
    pub psi: Vec<ColumnSpec>,
    pub report: Report,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProblemFile {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub differential: Vec<ColumnSpec>,
    #[serde(default)]
    pub bracket: Vec<BracketSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferOutput>,
}

/// Parses JSON, reporting syntax and schema errors with line and column.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn module_from(gens: &[GeneratorSpec]) -> Result<Arc<GradedModule>> {
    Ok(Arc::new(GradedModule::new(
        gens.iter().map(|g| (g.name.clone(), g.degree)),
    )?))
}

fn vector(target: &GradedModule, terms: &Terms) -> Result<Vec<(usize, Scalar)>> {
    let mut acc = Accumulator::new();
    for (name, c) in terms {
        acc.add(target.lookup(name)?, c.clone());
    }
    Ok(acc.finish())
}

/// A map from columns named in `source`, each column listed at most once.
pub fn map_from_columns(
    source: &Arc<GradedModule>,
    target: &Arc<GradedModule>,
    degree: i64,
    columns: &[ColumnSpec],
) -> Result<GradedMap> {
    let mut cols = vec![Vec::new(); source.len()];
    let mut seen = vec![false; source.len()];
    for col in columns {
        let j = source.lookup(&col.source)?;
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::Parse(format!("column {} listed twice", col.source)));
        }
        cols[j] = vector(target, &col.terms)?;
    }
    GradedMap::from_columns(source.clone(), target.clone(), degree, cols)
}

fn terms_of(target: &GradedModule, v: &[(usize, Scalar)]) -> Terms {
    v.iter()
        .map(|(i, c)| (target.name(*i).to_string(), c.clone()))
        .collect()
}

/// Nonzero columns of `map` in basis order.
pub fn columns_of(map: &GradedMap) -> Vec<ColumnSpec> {
    map.cols()
        .iter()
        .enumerate()
        .filter(|(_, col)| !col.is_empty())
        .map(|(j, col)| ColumnSpec {
            source: map.source().name(j).to_string(),
            terms: terms_of(map.target(), col),
        })
        .collect()
}

fn generators_of(m: &GradedModule) -> Vec<GeneratorSpec> {
    (0..m.len())
        .map(|i| GeneratorSpec {
            name: m.name(i).to_string(),
            degree: m.degree(i),
        })
        .collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile> {
        from_json(text)
    }

    pub fn complex(&self) -> Result<ChainComplex> {
        let m = module_from(&self.generators)?;
        let d = map_from_columns(&m, &m, -1, &self.differential)?;
        ChainComplex::new(m, d)
    }

    pub fn pre_bracket(&self) -> Result<PreBracket> {
        let c = self.complex()?;
        let m = c.module().clone();
        let mut upper = Vec::with_capacity(self.bracket.len());
        for b in &self.bracket {
            upper.push((m.lookup(&b.left)?, m.lookup(&b.right)?, vector(&m, &b.terms)?));
        }
        PreBracket::new(c, upper)
    }

    /// The contraction block over `big`, if present; shapes and degrees are
    /// checked, the axioms are not.
    pub fn raw_contraction(&self, big: &ChainComplex) -> Result<Option<RawContraction>> {
        let Some(spec) = &self.contraction else {
            return Ok(None);
        };
        let n = big.module();
        let m = module_from(&spec.generators)?;
        let small = ChainComplex::new(m.clone(), map_from_columns(&m, &m, -1, &spec.differential)?)?;
        let nabla = map_from_columns(&m, n, 0, &spec.nabla)?;
        let pi = map_from_columns(n, &m, 0, &spec.pi)?;
        let h = map_from_columns(n, n, 1, &spec.h)?;
        RawContraction::new(big.clone(), small, nabla, pi, h).map(Some)
    }

    /// The canonical file describing `g` and, optionally, a contraction.
    pub fn from_parts(g: &PreBracket, c: Option<&RawContraction>, max_weight: Option<usize>) -> ProblemFile {
        let m = g.module();
        let bracket = g
            .upper_entries()
            .into_iter()
            .map(|(i, j, v)| BracketSpec {
                left: m.name(i).to_string(),
                right: m.name(j).to_string(),
                terms: terms_of(m, &v),
            })
            .collect();
        let contraction = c.map(|c| ContractionSpec {
            generators: generators_of(c.small.module()),
            differential: columns_of(c.small.d()),
            nabla: columns_of(&c.nabla),
            pi: columns_of(&c.pi),
            h: columns_of(&c.h),
        });
        ProblemFile {
            generators: generators_of(m),
            differential: columns_of(g.complex().d()),
            bracket,
            contraction,
            max_weight,
            transfer: None,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn linf_entries(l: &LInftyStructure) -> Vec<LInftyEntry> {
    let m = l.module();
    l.arities()
        .flat_map(|k| l.table(k).iter())
        .map(|(inputs, v)| LInftyEntry {
            inputs: inputs.iter().map(|&i| m.name(i).to_string()).collect(),
            terms: terms_of(m, v),
        })
        .collect()
}

impl TransferOutput {
    pub fn new(t: &TransferResult, report: Report) -> TransferOutput {
        let corestriction = t.state.d_coderivation().corestriction().clone();
        TransferOutput {
            max_weight: t.state.max_weight(),
            linf: linf_entries(&t.linf),
            tau: columns_of(&t.tau),
            coderivation: columns_of(&corestriction),
            report,
        }
    }
}

impl ContractionOutput {
    pub fn new(f: &FinalContraction, report: Report) -> ContractionOutput {
        ContractionOutput {
            max_weight: f.small().max_weight(),
            tau_bar: columns_of(&f.tau_bar),
            pi: columns_of(&f.pi),
            h: columns_of(&f.h),
            phi: columns_of(&f.phi),
            psi: columns_of(&f.psi),
            report,
        }
    }
}
