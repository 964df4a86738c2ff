//! The transfer recursion: twisting cochain `τ = τ¹ + τ² + ⋯`, coalgebra
//! perturbation `𝒟 = 𝒟¹ + 𝒟² + ⋯` of `d⁰` on `S[sM]`, the staged
//! identities that justify it, and the resulting L∞ brackets on `M`.
//!
//! With `X_j = Σ_{p+q=j} [τ^p, τ^q]` (cup bracket on `S[sM]`):
//! `τ¹ = ∇τ_M`, `τ^j = ½ h X_j` and `τ_M 𝒟^{j−1} = ½ π X_j` on words of
//! weight `j`. Everything is computed on the words of weight at most `W`,
//! which is exact since `𝒟^j` kills those of weight at most `j`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::contraction::Contraction;
use crate::dgla::{Dgla, PreBracket};
use crate::error::{Error, Result};
use crate::graded::{hom_differential, same_module, ChainComplex, GradedMap, GradedModule, SparseVec};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::sym::cochain::{desuspension, nonzero_on_filtration, restrict_weight, suspension};
use crate::sym::coderivation::coderivation_law_witness;
use crate::sym::{cup_bracket, tau_projection, Coderivation, WordSpace};

pub const STAGE_PI_TAU: &str = "stage: pi tau^(a+1)=0";
pub const STAGE_THETA_FORMULA: &str = "stage: theta_(a+1) = -sum tau^(p+1) D^(a-p) + 1/2 sum [tau^p,tau^q]";
pub const STAGE_H_THETA: &str = "stage: h theta_(a+1) = tau^(a+1)";
pub const STAGE_PI_THETA: &str = "stage: pi theta_(a+1) = tau_M D^a";
pub const STAGE_THETA_VANISHES: &str = "stage: Theta_(a+1) vanishes on F_a";
pub const STAGE_D_THETA: &str = "stage: D theta_(a+1) = tau^1 sum D^p D^q";
pub const STAGE_D_TAU: &str = "stage: D tau^(a+1) = theta_(a+1) - tau^1 D^a";
pub const STAGE_SQUARE_ZERO: &str = "stage: d0 D^a + sum D^p D^q + D^a d0 = 0";

/// The eight staged identities in reporting order.
pub const STAGE_IDENTITIES: [&str; 8] = [
    STAGE_PI_TAU,
    STAGE_THETA_FORMULA,
    STAGE_H_THETA,
    STAGE_PI_THETA,
    STAGE_THETA_VANISHES,
    STAGE_D_THETA,
    STAGE_D_TAU,
    STAGE_SQUARE_ZERO,
];

pub const SQUARE_ZERO: &str = "perturbation: (d0+D)^2=0";
pub const CODERIVATION: &str = "perturbation: D is a coderivation";
pub const PI_TAU: &str = "twisting cochain: pi tau = tau_M";
pub const H_TAU: &str = "twisting cochain: h tau = 0";
pub const MASTER: &str = "twisting cochain: D tau = 1/2 [tau,tau]";
pub const JACOBI: &str = "linf: generalized Jacobi";

/// Suspends a complex and builds its word space of weight at most `w`.
pub fn suspended_space(c: &ChainComplex, w: usize) -> (ChainComplex, Arc<WordSpace>) {
    let s = c.suspend();
    let space = Arc::new(WordSpace::new(s.module().clone(), w));
    (s, space)
}

/// The Chevalley–Eilenberg perturbation `∂` of `S[sg]`, the coderivation
/// with `τ_g ∂ = ½[τ_g, τ_g]` on words of weight two.
pub fn cce_perturbation(g: &PreBracket, space: Arc<WordSpace>) -> Result<Coderivation> {
    let tau = tau_projection(&space, g.module())?;
    let half = cup_bracket(&space, &tau, &tau, g)?.scale(&Scalar::half());
    let s = suspension(g.module(), space.letters())?;
    Coderivation::new(space.clone(), s.compose(&half)?)
}

/// Transfer data up to the weight reached so far.
#[derive(Clone)]
pub struct TransferState {
    contraction: Contraction,
    g: PreBracket,
    max_weight: usize,
    suspended: ChainComplex,
    space: Arc<WordSpace>,
    d0: GradedMap,
    tau_m: GradedMap,
    s_m: GradedMap,
    tau: Vec<GradedMap>,
    d_cores: Vec<GradedMap>,
    d_ops: Vec<GradedMap>,
    sums: Vec<GradedMap>,
}

impl TransferState {
    pub fn new(contraction: Contraction, g: Dgla, max_weight: usize) -> Result<TransferState> {
        TransferState::from_pre_bracket(contraction, g.into_pre(), max_weight)
    }

    /// Runs on a bracket that need not satisfy Jacobi; the staged identities
    /// then locate the failure.
    pub fn from_pre_bracket(contraction: Contraction, g: PreBracket, max_weight: usize) -> Result<TransferState> {
        if max_weight < 1 {
            return Err(Error::MaxWeight {
                min: 1,
                got: max_weight,
            });
        }
        if !same_module(contraction.big().module(), g.module()) || contraction.big().d() != g.complex().d() {
            return Err(Error::ModuleMismatch(
                "the contraction does not start at the complex underlying the algebra".into(),
            ));
        }
        let m = contraction.small().clone();
        let (suspended, space) = suspended_space(&m, max_weight);
        let d0 = Coderivation::from_letter_map(space.clone(), suspended.d())?.expand();
        let tau_m = tau_projection(&space, m.module())?;
        let s_m = suspension(m.module(), suspended.module())?;
        Ok(TransferState {
            contraction,
            g,
            max_weight,
            suspended,
            space,
            d0,
            tau_m,
            s_m,
            tau: Vec::new(),
            d_cores: Vec::new(),
            d_ops: Vec::new(),
            sums: Vec::new(),
        })
    }

    pub fn contraction(&self) -> &Contraction {
        &self.contraction
    }

    pub fn bracket(&self) -> &PreBracket {
        &self.g
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn space(&self) -> &Arc<WordSpace> {
        &self.space
    }

    /// `sM` with its differential.
    pub fn suspended(&self) -> &ChainComplex {
        &self.suspended
    }

    pub fn d0(&self) -> &GradedMap {
        &self.d0
    }

    pub fn tau_m(&self) -> &GradedMap {
        &self.tau_m
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.tau.len()
    }

    /// `τ^j`, `1 ≤ j ≤ steps`.
    pub fn tau(&self, j: usize) -> &GradedMap {
        &self.tau[j - 1]
    }

    /// Corestriction `S[sM] → sM` of `𝒟^j`, `1 ≤ j < steps`.
    pub fn d_core(&self, j: usize) -> &GradedMap {
        &self.d_cores[j - 1]
    }

    /// `𝒟^j` as an operator on the words.
    pub fn d_op(&self, j: usize) -> &GradedMap {
        &self.d_ops[j - 1]
    }

    /// `X_j = Σ_{p+q=j} [τ^p, τ^q]`, `2 ≤ j ≤ steps`.
    pub fn bracket_sum(&self, j: usize) -> &GradedMap {
        &self.sums[j - 2]
    }

    fn zero_cochain(&self) -> GradedMap {
        GradedMap::zero(self.space.module().clone(), self.g.module().clone(), -1)
    }

    fn zero_op(&self) -> GradedMap {
        let m = self.space.module().clone();
        GradedMap::zero(m.clone(), m, -1)
    }

    /// `τ_a = τ¹ + ⋯ + τ^a`.
    pub fn tau_partial(&self, a: usize) -> GradedMap {
        (1..=a).fold(self.zero_cochain(), |acc, j| acc.add(self.tau(j)).expect("same shape"))
    }

    /// `𝒟_a = 𝒟¹ + ⋯ + 𝒟^a` as an operator.
    pub fn d_partial(&self, a: usize) -> GradedMap {
        (1..=a).fold(self.zero_op(), |acc, j| acc.add(self.d_op(j)).expect("same shape"))
    }

    /// Computes `τ^j` and the corestriction of `𝒟^{j−1}`.
    pub fn step(&mut self, j: usize) -> Result<()> {
        let expected = self.steps() + 1;
        if j != expected {
            return Err(Error::OutOfOrder { requested: j, expected });
        }
        if j > self.max_weight {
            return Err(Error::WeightOverflow {
                weight: j,
                max: self.max_weight,
            });
        }
        let c = &self.contraction;
        if j == 1 {
            self.tau.push(c.nabla().compose(&self.tau_m)?);
            log::debug!("tau^1 computed");
            return Ok(());
        }
        let mut sum = self.zero_cochain();
        for p in 1..j {
            sum = sum.add(&cup_bracket(&self.space, self.tau(p), self.tau(j - p), &self.g)?)?;
        }
        let half = sum.scale(&Scalar::half());
        let tau_j = c.h().compose(&half)?;
        let core = self.s_m.compose(&c.pi().compose(&half)?)?;
        let op = Coderivation::new(self.space.clone(), core.clone())?.expand();
        log::debug!(
            "step {j}: tau^{j} has {} entries, D^{} has {} entries",
            tau_j.nnz(),
            j - 1,
            core.nnz()
        );
        self.sums.push(sum);
        self.tau.push(tau_j);
        self.d_cores.push(core);
        self.d_ops.push(op);
        Ok(())
    }

    /// Runs all remaining steps up to the truncation weight.
    pub fn run(&mut self) -> Result<()> {
        for j in self.steps() + 1..=self.max_weight {
            self.step(j)?;
        }
        Ok(())
    }

    /// `τ = τ¹ + ⋯ + τ^W`.
    pub fn tau_total(&self) -> GradedMap {
        self.tau_partial(self.steps())
    }

    /// `𝒟 = 𝒟¹ + ⋯ + 𝒟^{W−1}` as an operator.
    pub fn d_total(&self) -> GradedMap {
        self.d_partial(self.d_ops.len())
    }

    /// `𝒟` as a coderivation.
    pub fn d_coderivation(&self) -> Coderivation {
        let letters = self.space.letters().clone();
        let core = self
            .d_cores
            .iter()
            .fold(GradedMap::zero(self.space.module().clone(), letters, -1), |acc, c| {
                acc.add(c).expect("same shape")
            });
        Coderivation::new(self.space.clone(), core).expect("valid corestriction")
    }

    /// `Dφ` for a cochain `φ: S[sM] → g`, relative to `d⁰` and `d_g`.
    pub fn hom_d(&self, phi: &GradedMap) -> Result<GradedMap> {
        hom_differential(phi, &self.d0, self.g.complex().d())
    }

    /// `Θ_{a+1}` and its restriction `ϑ_{a+1}` to weight `a + 1`.
    pub fn obstruction(&self, a: usize) -> Result<Obstruction> {
        let max = self.max_weight.saturating_sub(1).min(self.steps());
        if a == 0 || a > max {
            return Err(Error::StageOutOfRange { stage: a, max });
        }
        let tau_a = self.tau_partial(a);
        let diff = self.d0.add(&self.d_partial(a - 1))?;
        let theta = self
            .g
            .complex()
            .d()
            .compose(&tau_a)?
            .add(&tau_a.compose(&diff)?)?
            .neg()
            .add(&cup_bracket(&self.space, &tau_a, &tau_a, &self.g)?.scale(&Scalar::half()))?;
        let vartheta = restrict_weight(&self.space, &theta, a + 1);
        Ok(Obstruction {
            stage: a,
            theta,
            vartheta,
        })
    }

    /// The eight staged identities at stage `a`, which needs `a + 1` steps.
    pub fn verify_stage(&self, a: usize) -> Result<Report> {
        let max = self.max_weight.saturating_sub(1).min(self.steps().saturating_sub(1));
        if a == 0 || a > max {
            return Err(Error::StageOutOfRange { stage: a, max });
        }
        let st = Some(a);
        let c = &self.contraction;
        let ob = self.obstruction(a)?;
        let theta = &ob.vartheta;
        let mut r = Report::new();
        let cmp = |x: &GradedMap, y: &GradedMap| -> Result<Option<String>> { x.witness_name(y) };
        let tau_next = self.tau(a + 1);

        r.record(STAGE_PI_TAU, st, c.pi().compose(tau_next)?.nonzero_witness());

        let mut formula = self.bracket_sum(a + 1).scale(&Scalar::half());
        for p in 1..a {
            formula = formula.sub(&self.tau(p + 1).compose(self.d_op(a - p))?)?;
        }
        let formula = restrict_weight(&self.space, &formula, a + 1);
        r.record(STAGE_THETA_FORMULA, st, cmp(theta, &formula)?);

        r.record(STAGE_H_THETA, st, cmp(&c.h().compose(theta)?, tau_next)?);
        r.record(
            STAGE_PI_THETA,
            st,
            cmp(&c.pi().compose(theta)?, &self.tau_m.compose(self.d_op(a))?)?,
        );
        r.record(
            STAGE_THETA_VANISHES,
            st,
            nonzero_on_filtration(&self.space, &ob.theta, a),
        );

        let tau1 = self.tau(1);
        let mut dd = self.zero_op().compose(&self.zero_op())?;
        for p in 1..a {
            dd = dd.add(&self.d_op(p).compose(self.d_op(a - p))?)?;
        }
        let rhs = restrict_weight(&self.space, &tau1.compose(&dd)?, a + 1);
        r.record(STAGE_D_THETA, st, cmp(&self.hom_d(theta)?, &rhs)?);

        let rhs = theta.sub(&tau1.compose(self.d_op(a))?)?;
        r.record(STAGE_D_TAU, st, cmp(&self.hom_d(tau_next)?, &rhs)?);

        let sq = self
            .d0
            .compose(self.d_op(a))?
            .add(&dd)?
            .add(&self.d_op(a).compose(&self.d0)?)?;
        r.record(STAGE_SQUARE_ZERO, st, sq.nonzero_witness());
        Ok(r)
    }

    /// All stages `1..=W−1`.
    pub fn verify_all_stages(&self) -> Result<Report> {
        let mut r = Report::new();
        for a in 1..self.max_weight.min(self.steps()) {
            r.extend(self.verify_stage(a)?);
        }
        Ok(r)
    }

    /// Properties of the assembled `(𝒟, τ)` on the words of weight at most
    /// `W`: square zero, coderivation law, `πτ = τ_M`, `hτ = 0` and the
    /// master equation.
    pub fn verify_result(&self) -> Result<Report> {
        let c = &self.contraction;
        let mut r = Report::new();
        let total = self.d0.add(&self.d_total())?;
        r.record(SQUARE_ZERO, None, total.compose(&total)?.nonzero_witness());
        r.record(
            CODERIVATION,
            None,
            coderivation_law_witness(&self.space, &self.d_total()),
        );
        let tau = self.tau_total();
        r.record(PI_TAU, None, c.pi().compose(&tau)?.witness_name(&self.tau_m)?);
        r.record(H_TAU, None, c.h().compose(&tau)?.nonzero_witness());
        let lhs = self.g.complex().d().compose(&tau)?.add(&tau.compose(&total)?)?;
        let rhs = cup_bracket(&self.space, &tau, &tau, &self.g)?.scale(&Scalar::half());
        r.record(MASTER, None, lhs.witness_name(&rhs)?);
        Ok(r)
    }
}

/// `Θ_{a+1} = −dτ_a − τ_a(d⁰ + 𝒟_{a−1}) + ½[τ_a, τ_a]` and its restriction
/// `ϑ_{a+1}` to the words of weight `a + 1`.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub stage: usize,
    pub theta: GradedMap,
    pub vartheta: GradedMap,
}

/// Output of [`run_transfer`].
#[derive(Clone)]
pub struct TransferResult {
    pub state: TransferState,
    /// `𝒟` as an operator on `F_W S[sM]`.
    pub d: GradedMap,
    pub tau: GradedMap,
    pub linf: LInftyStructure,
}

/// Runs the recursion to weight `W` and reads off the L∞ brackets.
pub fn run_transfer(c: &Contraction, g: &Dgla, max_weight: usize) -> Result<TransferResult> {
    let mut state = TransferState::new(c.clone(), g.clone(), max_weight)?;
    state.run()?;
    let linf = brackets_from_coderivation(c.small(), &state.d_coderivation())?;
    Ok(TransferResult {
        d: state.d_total(),
        tau: state.tau_total(),
        linf,
        state,
    })
}

/// `(−1)^{1 + Σ_i (k−i)|x_i|}` for arguments of the given degrees.
fn bracket_sign(degrees: &[i64]) -> Scalar {
    let k = degrees.len() as i64;
    let e: i64 = degrees.iter().enumerate().map(|(i, d)| (k - 1 - i as i64) * d).sum();
    Scalar::sign(1 + e)
}

/// L∞ brackets `l_k: M^{⊗k} → M` of degree `k − 2`, stored on canonical
/// argument words.
///
/// `l_k(x_1, …, x_k) = (−1)^{1 + Σ_i (k−i)|x_i|} τ_M (d⁰ + 𝒟)(sx_1 ⋯ sx_k)`.
/// With this convention `l_1 = d_M` and, for a contraction onto homology,
/// `l_2(x, y) = π[∇x, ∇y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LInftyStructure {
    module: Arc<GradedModule>,
    max_weight: usize,
    /// `k → [(canonical argument letters, value)]`, nonzero values only.
    brackets: BTreeMap<usize, Vec<(Vec<usize>, SparseVec)>>,
}

impl LInftyStructure {
    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// Nonzero entries of `l_k` on canonical argument lists.
    pub fn table(&self, k: usize) -> &[(Vec<usize>, SparseVec)] {
        self.brackets.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.brackets.keys().copied()
    }

    /// `l_k` has no nonzero entries for any `k ≥ 2`.
    pub fn is_abelian(&self) -> bool {
        self.brackets.keys().all(|&k| k < 2)
    }

    /// `l_k(x_1, …, x_k)` for arguments in any order.
    pub fn eval(&self, args: &[usize]) -> Result<SparseVec> {
        let k = args.len();
        if k == 0 || k > self.max_weight {
            return Err(Error::WeightOverflow {
                weight: k,
                max: self.max_weight,
            });
        }
        let odd: Vec<bool> = (0..self.module.len()).map(|i| self.module.degree(i) % 2 == 0).collect();
        let Some((sorted, eps)) = crate::sym::word::normalize(args.to_vec(), &odd) else {
            return Ok(Vec::new());
        };
        let degs: Vec<i64> = args.iter().map(|&i| self.module.degree(i)).collect();
        let sorted_degs: Vec<i64> = sorted.iter().map(|&i| self.module.degree(i)).collect();
        // undo the canonical sign, then apply the one for the given order
        let factor = bracket_sign(&degs) * bracket_sign(&sorted_degs) * Scalar::from_int(eps as i64);
        let value = self
            .table(k)
            .iter()
            .find(|(w, _)| *w == sorted)
            .map(|(_, v)| v.clone())
            .unwrap_or_default();
        Ok(value.into_iter().map(|(i, c)| (i, c * &factor)).collect())
    }

    /// The coderivation `d⁰ + 𝒟` of `S[sM]` these brackets encode.
    pub fn to_coderivation(&self, space: Arc<WordSpace>) -> Result<Coderivation> {
        let s = suspension(&self.module, space.letters())?;
        let mut cols = vec![Vec::new(); space.len()];
        for entries in self.brackets.values() {
            for (args, value) in entries {
                let w = space.index_of(args)?;
                let degs: Vec<i64> = args.iter().map(|&i| self.module.degree(i)).collect();
                let sign = bracket_sign(&degs);
                cols[w] = s.apply(&value.iter().map(|(i, c)| (*i, c * &sign)).collect::<Vec<_>>());
            }
        }
        let core = GradedMap::from_columns(space.module().clone(), space.letters().clone(), -1, cols)?;
        Coderivation::new(space, core)
    }

    /// The generalized Jacobi identities up to weight `W`, i.e.
    /// `(d⁰ + 𝒟)² = 0` on the words of weight at most `W`.
    pub fn check_jacobi(&self) -> Report {
        let letters = Arc::new(self.module.shifted("s", 1));
        let space = Arc::new(WordSpace::new(letters, self.max_weight));
        let mut r = Report::new();
        match self.to_coderivation(space) {
            Ok(d) => {
                let op = d.expand();
                r.record(JACOBI, None, op.compose(&op).expect("endomorphism").nonzero_witness());
            }
            Err(e) => r.fail(JACOBI, None, e.to_string()),
        }
        r
    }
}

/// Reads the brackets off the perturbation `𝒟` of `d⁰` on `S[sM]`; the
/// coderivation `d⁰ + 𝒟` must square to zero on the words of weight at
/// most `W`.
pub fn brackets_from_coderivation(m: &ChainComplex, d: &Coderivation) -> Result<LInftyStructure> {
    let space = d.space().clone();
    let s = suspension(m.module(), space.letters())?;
    let desusp = desuspension(m.module(), space.letters())?;
    let d_letters = s.compose(&m.d().compose(&desusp)?)?.neg();
    let d0 = Coderivation::from_letter_map(space.clone(), &d_letters)?;
    let total = d0.add(d)?;
    let op = total.expand();
    if let Some(w) = op.compose(&op)?.nonzero_witness() {
        return Err(Error::NotSquareZero(w));
    }
    let mut brackets: BTreeMap<usize, Vec<(Vec<usize>, SparseVec)>> = BTreeMap::new();
    for w in 1..space.len() {
        let value = desusp.apply(total.corestriction().col(w));
        if value.is_empty() {
            continue;
        }
        let args = space.word(w).clone();
        let degs: Vec<i64> = args.iter().map(|&i| m.module().degree(i)).collect();
        let sign = bracket_sign(&degs);
        brackets
            .entry(args.len())
            .or_default()
            .push((args, value.into_iter().map(|(i, c)| (i, c * &sign)).collect()));
    }
    Ok(LInftyStructure {
        module: m.module().clone(),
        max_weight: space.max_weight(),
        brackets,
    })
}
