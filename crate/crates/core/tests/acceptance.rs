//! Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use hpt_core::contraction::{
    build_homology_contraction, trivial_contraction, validate_contraction, Contraction, RawContraction,
};
use hpt_core::corpus;
use hpt_core::dgla::{Dgla, PreBracket};
use hpt_core::graded::{GradedMap, SparseVec};
use hpt_core::perturbation::{
    assemble_final_contraction, ordinary_perturbation_lemma, sc_functor_contraction, FinalContraction,
};
use hpt_core::sym::cochain::restrict_weight;
use hpt_core::sym::morphism::comultiplicativity_witness;
use hpt_core::sym::{cup_bracket, tau_projection, WordSpace};
use hpt_core::transfer::{cce_perturbation, run_transfer, TransferResult};
use hpt_core::Scalar;
use rand::Rng;

const SEED: u64 = 20_241;
const RANDOM_INSTANCES: usize = 20;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("took {:.2}s, limit {}s", t.as_secs_f64(), limit.as_secs())
    })
}

fn id(space: &WordSpace) -> GradedMap {
    GradedMap::identity(space.module().clone())
}

/// Named instances shared by criteria 2 to 5 and 10.
fn corpus_instances() -> Vec<(String, Contraction, Dgla)> {
    let mut v = Vec::new();
    for (name, g) in [("sl2", corpus::sl2_dgla()), ("heis", corpus::heis_dgla())] {
        v.push((format!("{name}/trivial"), trivial_contraction(g.complex()), g));
    }
    let heis = Contraction::new(corpus::heis_contraction()).unwrap();
    v.push(("heis".into(), heis, corpus::heis_dgla()));
    for i in 0..RANDOM_INSTANCES {
        let g = corpus::random_dgla(SEED, i);
        v.push((format!("random/{i}"), build_homology_contraction(g.complex()), g));
    }
    v
}

struct Run {
    name: String,
    w: usize,
    t: TransferResult,
}

static RUNS: OnceLock<Vec<Run>> = OnceLock::new();
static FINALS: OnceLock<Vec<(String, usize, FinalContraction)>> = OnceLock::new();

fn runs() -> &'static [Run] {
    RUNS.get_or_init(|| {
        let mut out = Vec::new();
        for (name, c, g) in corpus_instances() {
            for w in 3..=5 {
                let t = run_transfer(&c, &g, w).unwrap_or_else(|e| panic!("{name} W={w}: {e}"));
                out.push(Run {
                    name: name.clone(),
                    w,
                    t,
                });
            }
        }
        out
    })
}

fn finals() -> &'static [(String, usize, FinalContraction)] {
    FINALS.get_or_init(|| {
        let mut out = Vec::new();
        for (name, c, g) in corpus_instances() {
            for w in 3..=5 {
                let f = assemble_final_contraction(&c, &g, w).unwrap_or_else(|e| panic!("{name} W={w}: {e}"));
                out.push((name.clone(), w, f));
            }
        }
        out
    })
}

/// Adds one to a homogeneous entry of one of the three maps.
fn mutate<R: Rng>(rng: &mut R, c: &RawContraction) -> Option<RawContraction> {
    let maps = [&c.nabla, &c.pi, &c.h];
    let mut candidates = Vec::new();
    for (k, m) in maps.iter().enumerate() {
        for col in 0..m.source().len() {
            for row in 0..m.target().len() {
                if m.target().degree(row) == m.source().degree(col) + m.degree() {
                    candidates.push((k, row, col));
                }
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    let (k, row, col) = candidates[rng.gen_range(0..candidates.len())];
    let m = maps[k];
    let bump = GradedMap::from_entries(
        m.source().clone(),
        m.target().clone(),
        m.degree(),
        [(row, col, Scalar::one())],
    )
    .ok()?;
    let mut out = [c.nabla.clone(), c.pi.clone(), c.h.clone()];
    out[k] = m.add(&bump).ok()?;
    let [nabla, pi, h] = out;
    RawContraction::new(c.big.clone(), c.small.clone(), nabla, pi, h).ok()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = corpus::rng(SEED + 1);
    let mut contractions: Vec<(String, RawContraction)> = vec![
        (
            "sl2/trivial".into(),
            trivial_contraction(corpus::sl2_dgla().complex()).into_raw(),
        ),
        (
            "heis/trivial".into(),
            trivial_contraction(corpus::heis_dgla().complex()).into_raw(),
        ),
        ("heis".into(), corpus::heis_contraction()),
    ];
    for i in 0..RANDOM_INSTANCES {
        let cx = corpus::random_complex(&mut rng, 6, 3);
        ensure(cx.module().len() <= 6, || "complex too large".into())?;
        for g in 0..cx.module().len() {
            let d = cx.module().degree(g);
            ensure((0..=3).contains(&d), || format!("degree {d} outside [0,3]"))?;
        }
        contractions.push((format!("random/{i}/trivial"), trivial_contraction(&cx).into_raw()));
        contractions.push((
            format!("random/{i}/homology"),
            build_homology_contraction(&cx).into_raw(),
        ));
    }
    let mut mutants = 0;
    for (name, c) in &contractions {
        let r = validate_contraction(c);
        ensure(r.ok(), || format!("{name}: {}", r.first_failure_label()))?;
        if let Some(m) = mutate(&mut rng, c) {
            let r = validate_contraction(&m);
            let named = r.first_failure().map(|f| !f.identity.is_empty()).unwrap_or(false);
            ensure(named, || format!("{name}: mutation not detected"))?;
            mutants += 1;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "{} contractions valid, {mutants} mutants rejected",
        contractions.len()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let runs = runs();
    for r in runs {
        let op = r.t.state.d0().add(&r.t.d).map_err(|e| e.to_string())?;
        let sq = op.compose(&op).map_err(|e| e.to_string())?;
        ensure(sq.is_zero(), || format!("{} W={}: (d0+D)^2 != 0", r.name, r.w))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} runs, W in 3..=5", runs.len()))
}

fn criterion_3() -> Outcome {
    let mut checks = 0;
    for r in runs() {
        let s = &r.t.state;
        let label = |what: &str| format!("{} W={}: {what}", r.name, r.w);
        let report = s.verify_all_stages().map_err(|e| e.to_string())?;
        ensure(report.len() == 8 * (r.w - 1), || {
            label("wrong number of staged identities")
        })?;
        ensure(report.ok(), || label(&report.first_failure_label()))?;
        checks += report.len();

        let space = s.space();
        let g = s.bracket();
        let e = |x: hpt_core::Result<GradedMap>| x.map_err(|e| e.to_string());
        // stage 1: vartheta_2 = 1/2 [tau^1, tau^1] and d0 D^1 + D^1 d0 = 0
        let half = e(cup_bracket(space, s.tau(1), s.tau(1), g))?.scale(&Scalar::half());
        let o1 = s.obstruction(1).map_err(|e| e.to_string())?;
        ensure(o1.vartheta == restrict_weight(space, &half, 2), || label("vartheta_2"))?;
        let d1 = s.d_op(1);
        ensure(
            e(s.d0().compose(d1))?.add(&e(d1.compose(s.d0()))?).unwrap().is_zero(),
            || label("d0 D1 + D1 d0"),
        )?;
        // stage 2: vartheta_3 = [tau^1, tau^2] - tau^2 D^1, pi vartheta_3 = tau_M D^2,
        // d0 D^2 + D^1 D^1 + D^2 d0 = 0
        let o2 = s.obstruction(2).map_err(|e| e.to_string())?;
        let v3 = e(cup_bracket(space, s.tau(1), s.tau(2), g))?
            .sub(&e(s.tau(2).compose(d1))?)
            .unwrap();
        ensure(o2.vartheta == restrict_weight(space, &v3, 3), || label("vartheta_3"))?;
        let d2 = s.d_op(2);
        let lhs = e(s.contraction().pi().compose(&o2.vartheta))?;
        ensure(lhs == restrict_weight(space, &e(s.tau_m().compose(d2))?, 3), || {
            label("pi vartheta_3")
        })?;
        let asso = e(s.d0().compose(d2))?
            .add(&e(d1.compose(d1))?)
            .unwrap()
            .add(&e(d2.compose(s.d0()))?)
            .unwrap();
        ensure(asso.is_zero(), || label("d0 D2 + D1 D1 + D2 d0"))?;
        checks += 5;
    }
    Ok(format!("{checks} identities across {} runs", runs().len()))
}

fn criterion_4() -> Outcome {
    for r in runs() {
        let c = r.t.state.contraction();
        let pt = c.pi().compose(&r.t.tau).map_err(|e| e.to_string())?;
        ensure(pt == *r.t.state.tau_m(), || {
            format!("{} W={}: pi tau != tau_M", r.name, r.w)
        })?;
        let ht = c.h().compose(&r.t.tau).map_err(|e| e.to_string())?;
        ensure(ht.is_zero(), || format!("{} W={}: h tau != 0", r.name, r.w))?;
    }
    Ok(format!("{} runs", runs().len()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for (name, w, f) in finals() {
        let label = |what: &str| format!("{name} W={w}: {what}");
        let e = |x: hpt_core::Result<GradedMap>| x.map_err(|e| e.to_string());
        let (small, big) = (f.small(), f.big());
        ensure(e(f.pi.compose(&f.tau_bar))? == id(small), || label("Pi taubar"))?;
        let dh = e(f.d_big.compose(&f.h))?.add(&e(f.h.compose(&f.d_big))?).unwrap();
        let rhs = id(big).sub(&e(f.tau_bar.compose(&f.pi))?).unwrap();
        ensure(dh == rhs, || label("DH"))?;
        ensure(e(f.pi.compose(&f.h))?.is_zero(), || label("Pi H"))?;
        ensure(e(f.h.compose(&f.tau_bar))?.is_zero(), || label("H taubar"))?;
        ensure(e(f.h.compose(&f.h))?.is_zero(), || label("HH"))?;
        let w = comultiplicativity_witness(small, big, &f.tau_bar);
        ensure(w.is_none(), || label(&format!("taubar not comultiplicative at {w:?}")))?;
    }
    Ok(format!(
        "{} final contractions, W in 3..=5; {:.1}s",
        finals().len(),
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    let mut dglas: Vec<(String, Dgla)> = corpus::named_dglas()
        .into_iter()
        .map(|(n, g)| (n.to_string(), g))
        .collect();
    dglas.extend((0..RANDOM_INSTANCES).map(|i| (format!("random/{i}"), corpus::random_dgla(SEED + 6, i))));
    for (name, g) in &dglas {
        let c = trivial_contraction(g.complex());
        let t = run_transfer(&c, g, 4).map_err(|e| e.to_string())?;
        let space = t.state.space().clone();
        let cce = cce_perturbation(g, space.clone()).map_err(|e| e.to_string())?.expand();
        ensure(t.d == cce, || format!("{name}: D differs from the CCE perturbation"))?;
        let tau_g = tau_projection(&space, g.module()).map_err(|e| e.to_string())?;
        ensure(t.tau == tau_g, || format!("{name}: tau differs from tau_g"))?;
        let f = assemble_final_contraction(&c, g, 3).map_err(|e| e.to_string())?;
        ensure(f.h.is_zero(), || format!("{name}: H != 0"))?;
        ensure(f.pi == id(f.small()), || format!("{name}: Pi != Id"))?;
        count += 1;
    }
    let mut rng = corpus::rng(SEED + 7);
    for i in 0..RANDOM_INSTANCES {
        let g = Dgla::new(PreBracket::abelian(corpus::random_complex(&mut rng, 6, 3))).unwrap();
        let c = build_homology_contraction(g.complex());
        let t = run_transfer(&c, &g, 4).map_err(|e| e.to_string())?;
        ensure(t.tau == *t.state.tau(1), || format!("abelian/{i}: tau != tau^1"))?;
        count += 1;
    }
    Ok(format!("{count} instances"))
}

/// `π[∇x, ∇y]`.
fn l2_oracle(c: &Contraction, g: &PreBracket, x: usize, y: usize) -> SparseVec {
    let b = g.bracket_eval(c.nabla().col(x), c.nabla().col(y)).unwrap();
    c.pi().apply(&b)
}

/// `l_3` on a canonically ordered triple from the one-level trees
/// `π[∇x_i, h[∇x_j, ∇x_k]]`, with the Koszul signs of pulling `sx_i` to
/// the front of `sx_1 sx_2 sx_3`.
fn l3_oracle(c: &Contraction, g: &PreBracket, args: [usize; 3]) -> SparseVec {
    let m = c.small().module();
    let deg = |i: usize| m.degree(args[i]);
    let e = |i: usize| deg(i) + 1;
    let front = [
        Scalar::one(),
        Scalar::sign(e(0) * e(1)),
        Scalar::sign(e(2) * (e(0) + e(1))),
    ];
    let nabla = |i: usize| c.nabla().col(args[i]).to_vec();
    let mut total: SparseVec = Vec::new();
    for i in 0..3 {
        let rest: Vec<usize> = (0..3).filter(|&p| p != i).collect();
        let (j, k) = (rest[0], rest[1]);
        let inner = c.h().apply(&g.bracket_eval(&nabla(j), &nabla(k)).unwrap());
        let outer = c.pi().apply(&g.bracket_eval(&nabla(i), &inner).unwrap());
        let coeff = &front[i] * &Scalar::sign(e(i)) * Scalar::sign(deg(j) + 1);
        total = add_scaled(&total, &outer, &coeff);
    }
    let overall = Scalar::sign(1 + deg(1));
    total.into_iter().map(|(i, c)| (i, c * &overall)).collect()
}

fn add_scaled(a: &[(usize, Scalar)], b: &[(usize, Scalar)], s: &Scalar) -> SparseVec {
    let mut out: std::collections::BTreeMap<usize, Scalar> = a.iter().cloned().collect();
    for (i, c) in b {
        let e = out.entry(*i).or_insert_with(Scalar::zero);
        *e += &(c * s);
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn criterion_7() -> Outcome {
    let mut l2 = 0;
    for (name, c, g) in corpus_instances().into_iter().skip(2) {
        let t = run_transfer(&c, &g, 3).map_err(|e| e.to_string())?;
        let n = c.small().module().len();
        for x in 0..n {
            for y in x..n {
                let got = t.linf.eval(&[x, y]).map_err(|e| e.to_string())?;
                ensure(got == l2_oracle(&c, &g, x, y), || format!("{name}: l_2({x},{y})"))?;
                l2 += 1;
            }
        }
    }
    // ten random basis changes of an algebra with a Massey product, then the
    // whole homology corpus
    let mut instances: Vec<(String, Dgla)> = (0..10)
        .map(|i| (format!("massey/{i}"), corpus::random_dgla(SEED + 70 + i as u64, 2)))
        .collect();
    instances.extend(corpus_instances().into_iter().skip(2).map(|(n, _, g)| (n, g)));
    let (mut l3, mut nonzero) = (0, 0);
    for (name, g) in &instances {
        let c = build_homology_contraction(g.complex());
        let t = run_transfer(&c, g, 3).map_err(|e| e.to_string())?;
        let m = c.small().module();
        let n = m.len();
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    let repeats_odd = |a: usize, b: usize| a == b && m.degree(a) % 2 == 0;
                    if repeats_odd(x, y) || repeats_odd(y, z) {
                        continue;
                    }
                    let got = t.linf.eval(&[x, y, z]).map_err(|e| e.to_string())?;
                    let want = l3_oracle(&c, g, [x, y, z]);
                    ensure(got == want, || {
                        format!("{name}: l_3({x},{y},{z}) = {got:?}, oracle {want:?}")
                    })?;
                    l3 += 1;
                    nonzero += usize::from(!got.is_empty());
                }
            }
        }
    }
    ensure(nonzero >= 10, || format!("only {nonzero} nonzero l_3 values"))?;
    Ok(format!("{l2} binary and {l3} ternary brackets ({nonzero} nonzero)"))
}

fn criterion_8() -> Outcome {
    let e = |x: hpt_core::Result<GradedMap>| x.map_err(|e| e.to_string());
    let mut nilpotent = 0;
    for i in 0..RANDOM_INSTANCES {
        let g = corpus::random_dgla(SEED + 8, i);
        let c = build_homology_contraction(g.complex());
        for w in [2, 4] {
            let fc = sc_functor_contraction(&c, w).map_err(|e| e.to_string())?;
            let partial = cce_perturbation(&g, fc.big.clone())
                .map_err(|e| e.to_string())?
                .expand();
            let p = ordinary_perturbation_lemma(&fc, &partial).map_err(|e| e.to_string())?;
            let r = p.validate();
            ensure(r.ok(), || format!("random/{i} W={w}: {}", r.first_failure_label()))?;
            let hp = e(fc.h.compose(&partial))?;
            if e(hp.compose(&hp))?.is_zero() {
                let ph = e(partial.compose(&fc.h))?;
                let pn = e(partial.compose(&fc.nabla))?;
                let delta = e(fc.pi.compose(&pn))?
                    .sub(&e(fc.pi.compose(&e(partial.compose(&e(hp.compose(&fc.nabla))?))?))?)
                    .unwrap();
                let nabla = fc.nabla.sub(&e(hp.compose(&fc.nabla))?).unwrap();
                let pi = fc.pi.sub(&e(fc.pi.compose(&ph))?).unwrap();
                let h = fc.h.sub(&e(hp.compose(&fc.h))?).unwrap();
                ensure(p.delta == delta && p.nabla == nabla && p.pi == pi && p.h == h, || {
                    format!("random/{i} W={w}: two-term expansion differs")
                })?;
                nilpotent += 1;
            }
        }
    }
    ensure(nilpotent >= RANDOM_INSTANCES, || "too few nilpotent cases".into())?;
    Ok(format!(
        "{} perturbed contractions, {nilpotent} two-term expansions",
        2 * RANDOM_INSTANCES
    ))
}

/// Rank by Gaussian elimination, kept separate from the library code.
fn rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let mut r = 0;
    let cols = m.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for k in c..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] -= &sub;
                }
            }
        }
        r += 1;
    }
    r
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let g = corpus::sl2_dgla();
    let c = trivial_contraction(g.complex());
    let t = run_transfer(&c, &g, 4).map_err(|e| e.to_string())?;
    let space = t.state.space();
    let op = t.state.d0().add(&t.d).unwrap();
    ensure(op.compose(&op).unwrap().is_zero(), || "DD != 0".into())?;
    let dense = op.to_dense();
    let block = |k: usize| -> Vec<Vec<Scalar>> {
        if k == 0 {
            return Vec::new();
        }
        let rows = space.weight_range(k - 1);
        let cols = space.weight_range(k);
        rows.clone()
            .map(|i| cols.clone().map(|j| dense[i][j].clone()).collect())
            .collect()
    };
    for j in 0..space.len() {
        for (i, _) in op.col(j) {
            ensure(space.weight(*i) + 1 == space.weight(j), || {
                "D does not lower weight by one".into()
            })?;
        }
    }
    let ranks: Vec<usize> = (0..=3)
        .map(|k| space.weight_range(k).len() - rank(block(k)) - rank(block(k + 1)))
        .collect();
    ensure(ranks == [1, 0, 0, 1], || format!("homology ranks {ranks:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("homology ranks {ranks:?}"))
}

/// `Φ⁻¹` for `Φ` unitriangular in the word order (weight first), by back
/// substitution column by column.
fn back_substitute(phi: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = phi.len();
    let mut inv = vec![vec![Scalar::zero(); n]; n];
    for col in 0..n {
        for row in (0..n).rev() {
            let mut v = if row == col { Scalar::one() } else { Scalar::zero() };
            for k in row + 1..n {
                if !phi[row][k].is_zero() {
                    v -= &(&phi[row][k] * &inv[k][col]);
                }
            }
            inv[row][col] = v;
        }
    }
    inv
}

fn criterion_10() -> Outcome {
    for (name, w, f) in finals() {
        let label = |what: &str| format!("{name} W={w}: {what}");
        let small = f.small();
        ensure(f.phi.compose(&f.psi).unwrap() == id(small), || label("Phi Psi != Id"))?;
        ensure(f.psi.compose(&f.phi).unwrap() == id(small), || label("Psi Phi != Id"))?;
        let dense = f.phi.to_dense();
        for (i, row) in dense.iter().enumerate() {
            ensure(row[i].is_one() && row[..i].iter().all(Scalar::is_zero), || {
                label("Phi not unitriangular")
            })?;
        }
        ensure(back_substitute(&dense) == f.psi.to_dense(), || {
            label("Psi differs from the dense inverse")
        })?;
    }
    Ok(format!("{} final contractions", finals().len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("contraction axioms and mutation detection", criterion_1),
        ("(d0+D)^2 = 0 on the transferred structure", criterion_2),
        ("staged identities at every stage", criterion_3),
        ("pi tau = tau_M and h tau = 0", criterion_4),
        ("final contraction identities and comultiplicative taubar", criterion_5),
        ("degenerate cases: trivial contraction and abelian algebra", criterion_6),
        ("l_2 and l_3 against tree-formula oracles", criterion_7),
        ("ordinary perturbation lemma", criterion_8),
        ("Chevalley-Eilenberg homology of sl2", criterion_9),
        ("Phi Psi inversion against a dense oracle", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}] ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
