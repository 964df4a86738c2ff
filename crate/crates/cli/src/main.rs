//! `hpt`: validate problem files, run the transfer and check its identities.
//!
//! Exit codes: 0 success, 1 a validation or identity failure, 2 an
//! unreadable or malformed input file.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hpt_core::contraction::{build_homology_contraction, trivial_contraction, validate_contraction, Contraction};
use hpt_core::dgla::{Dgla, PreBracket};
use hpt_core::format::{columns_of, linf_entries, to_json, ContractionOutput, ProblemFile, TransferOutput};
use hpt_core::perturbation::assemble_final_contraction;
use hpt_core::report::Report;
use hpt_core::transfer::{run_transfer, TransferState};
use hpt_core::Error;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "hpt",
    version,
    about = "Homotopy transfer of differential graded Lie algebras"
)]
struct Cli {
    /// Print reports as one line per identity instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the complex, the bracket and the contraction block.
    Validate { file: PathBuf },
    /// Compute the L∞ brackets, τ and 𝒟 up to a weight.
    Transfer {
        file: PathBuf,
        #[arg(long)]
        max_weight: usize,
        #[command(flatten)]
        source: ContractionSource,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the staged identities and the final contraction.
    Check {
        file: PathBuf,
        #[arg(long)]
        max_weight: usize,
        /// Only the staged identities of the recursion.
        #[arg(long)]
        stages: bool,
        #[command(flatten)]
        source: ContractionSource,
    },
    /// Print one table of the computed structure.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: Table,
        /// Defaults to the file's maxWeight.
        #[arg(long)]
        max_weight: Option<usize>,
        #[command(flatten)]
        source: ContractionSource,
    },
}

#[derive(Args)]
struct ContractionSource {
    /// Contract onto homology instead of reading a contraction block.
    #[arg(long, conflicts_with = "trivial_contraction")]
    homology: bool,
    /// Use the identity contraction of the algebra's complex.
    #[arg(long)]
    trivial_contraction: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Linf,
    Tau,
    Coderivation,
    Contraction,
}

enum Failure {
    /// Input could not be read as a problem.
    Input(String),
    /// A check failed or a computation was refused.
    Semantic(String),
    /// A report with failures; already printed.
    Report,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::UnknownGenerator(_) | Error::DuplicateGenerator(_) | Error::BracketTable(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HPT_LOG")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { file } => validate(file, cli.pretty),
        Command::Transfer {
            file,
            max_weight,
            source,
            out,
        } => transfer(file, *max_weight, source, out.as_deref(), cli.pretty),
        Command::Check {
            file,
            max_weight,
            stages,
            source,
        } => check(file, *max_weight, *stages, source, cli.pretty),
        Command::Export {
            file,
            what,
            max_weight,
            source,
        } => export(file, *what, *max_weight, source),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Report) => ExitCode::from(1),
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> std::result::Result<ProblemFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(ProblemFile::parse(&text)?)
}

fn print_report(report: &Report, pretty: bool) {
    if pretty {
        for c in &report.checks {
            let stage = c.stage.map(|a| format!(" [a={a}]")).unwrap_or_default();
            match &c.witness {
                None => println!("PASS {}{stage}", c.identity),
                Some(w) => println!("FAIL {}{stage} at {w}", c.identity),
            }
        }
    } else {
        print!("{}", to_json(&json!({ "ok": report.ok(), "checks": report.checks })));
    }
}

fn finish(report: &Report, pretty: bool) -> Outcome {
    print_report(report, pretty);
    if report.ok() {
        Ok(())
    } else {
        eprintln!("first failure: {}", report.first_failure_label());
        Err(Failure::Report)
    }
}

/// Prints a failing report for an input that was rejected.
fn rejected(what: &str, report: &Report) -> Failure {
    eprintln!("{what}");
    finish(report, false).expect_err("a failing report")
}

fn dgla(problem: &ProblemFile) -> std::result::Result<Dgla, Failure> {
    match Dgla::new(problem.pre_bracket()?) {
        Ok(g) => Ok(g),
        Err(Error::InvalidDgla(r)) => Err(rejected("the bracket does not define a dgla", &r)),
        Err(e) => Err(e.into()),
    }
}

fn contraction(
    problem: &ProblemFile,
    g: &PreBracket,
    source: &ContractionSource,
) -> std::result::Result<Contraction, Failure> {
    if source.homology {
        return Ok(build_homology_contraction(g.complex()));
    }
    if source.trivial_contraction {
        return Ok(trivial_contraction(g.complex()));
    }
    let raw = problem
        .raw_contraction(g.complex())?
        .ok_or_else(|| Failure::Semantic("no contraction block; pass --homology or --trivial-contraction".into()))?;
    match Contraction::new(raw) {
        Ok(c) => Ok(c),
        Err(Error::InvalidContraction(r)) => Err(rejected("the contraction block is not a contraction", &r)),
        Err(e) => Err(e.into()),
    }
}

fn validate(path: &Path, pretty: bool) -> Outcome {
    let problem = load(path)?;
    let g = problem.pre_bracket()?;
    let mut report = g.validate();
    if let Some(raw) = problem.raw_contraction(g.complex())? {
        report.extend(validate_contraction(&raw));
        if let (Some(stored), true) = (&problem.transfer, report.ok()) {
            let (g, c) = (Dgla::new(g)?, Contraction::new(raw)?);
            let t = run_transfer(&c, &g, stored.max_weight)?;
            let fresh = TransferOutput::new(&t, t.state.verify_result()?);
            let witness = (fresh != *stored).then(|| "stored tables differ from a fresh run".to_string());
            report.record("transfer: stored tables reproduce", None, witness);
        }
    }
    finish(&report, pretty)
}

fn transfer(path: &Path, w: usize, source: &ContractionSource, out: Option<&Path>, pretty: bool) -> Outcome {
    let problem = load(path)?;
    let g = dgla(&problem)?;
    let c = contraction(&problem, &g, source)?;
    let t = run_transfer(&c, &g, w)?;
    let report = t.state.verify_result()?;
    let mut file = ProblemFile::from_parts(&g, Some(c.raw()), Some(w));
    file.transfer = Some(TransferOutput::new(&t, report.clone()));
    let text = file.to_json();
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Semantic(format!("{}: {e}", p.display())))?;
            finish(&report, pretty)
        }
        None => {
            print!("{text}");
            if report.ok() {
                Ok(())
            } else {
                eprintln!("first failure: {}", report.first_failure_label());
                Err(Failure::Report)
            }
        }
    }
}

fn check(path: &Path, w: usize, stages_only: bool, source: &ContractionSource, pretty: bool) -> Outcome {
    let problem = load(path)?;
    let g = problem.pre_bracket()?;
    let c = contraction(&problem, &g, source)?;
    let mut state = TransferState::from_pre_bracket(c.clone(), g.clone(), w)?;
    state.run()?;
    let mut report = state.verify_all_stages()?;
    if !stages_only {
        match Dgla::new(g) {
            Ok(g) => report.extend(assemble_final_contraction(&c, &g, w)?.verify()?),
            Err(Error::InvalidDgla(r)) => {
                let why = r.first_failure_label();
                report.record("final: perturbation lemma applies", None, Some(why));
            }
            Err(e) => return Err(e.into()),
        }
    }
    finish(&report, pretty)
}

fn export(path: &Path, what: Table, w: Option<usize>, source: &ContractionSource) -> Outcome {
    let problem = load(path)?;
    let w = w
        .or(problem.max_weight)
        .ok_or_else(|| Failure::Semantic("no weight bound; pass --max-weight or set maxWeight".into()))?;
    let g = dgla(&problem)?;
    let c = contraction(&problem, &g, source)?;
    let text = match what {
        Table::Contraction => {
            let f = assemble_final_contraction(&c, &g, w)?;
            let mut report = f.verify()?;
            report.extend(f.verify_maps()?);
            to_json(&ContractionOutput::new(&f, report))
        }
        _ => {
            let t = run_transfer(&c, &g, w)?;
            match what {
                Table::Linf => to_json(&linf_entries(&t.linf)),
                Table::Tau => to_json(&columns_of(&t.tau)),
                _ => to_json(&columns_of(t.state.d_coderivation().corestriction())),
            }
        }
    };
    print!("{text}");
    Ok(())
}
