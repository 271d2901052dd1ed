//! `qid` — evaluate basic hypergeometric series and verify the identity
//! catalog from the command line.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qid::error::QError;
use qid::identities::{catalog, check, find, lattice_check, CheckResult};
use qid::numerics::{EvalResult, Scalar};
use qid::qcore::QBase;
use qid::report::{build_report, format_scalar, parse_scalar, Report};
use qid::sampler::{sample, sample_lattice, SampleConfig};
use qid::series::{eval_h2, eval_phi, eval_psi, SeriesSpec};

#[derive(Parser)]
#[command(name = "qid", version, about = "q-series identity verifier")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the identity catalog
    List,
    /// Evaluate one series at one point
    Eval(EvalArgs),
    /// Verify identities over seeded admissible samples
    Verify(VerifyArgs),
    /// Check the bilateral transformations at the lattice c = q^(1+m)
    Lattice(LatticeArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// phi, psi, or h2
    #[arg(long)]
    series: String,
    /// comma-separated numerator parameters
    #[arg(long, default_value = "")]
    num: String,
    /// comma-separated denominator parameters
    #[arg(long, default_value = "")]
    den: String,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// identity name, or "all"
    #[arg(long)]
    identity: String,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    real_only: bool,
    /// also write the JSON report to this file
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct LatticeArgs {
    /// thm1_bailey, thm2_expansion, or thm3_chen_gu
    #[arg(long)]
    identity: String,
    #[arg(long, default_value_t = 5)]
    m_max: i64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<String>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_DIVERGES: u8 = 2;
const EXIT_POLE: u8 = 3;
const EXIT_PARSE: u8 = 4;

fn exit_for(err: &QError) -> u8 {
    match err {
        QError::Diverges(_) | QError::SlowConvergence(_) => EXIT_DIVERGES,
        QError::Pole(_) => EXIT_POLE,
        QError::Parse(_) | QError::Inadmissible(_) => EXIT_PARSE,
        _ => EXIT_FAIL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::List => cmd_list(),
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Lattice(args) => cmd_lattice(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn cmd_list() -> qid::Result<u8> {
    for id in catalog() {
        // plain print would abort on a closed pipe (e.g. `qid list | head`)
        let _ = writeln!(
            std::io::stdout(),
            "{:<18} params: {:<16} region: {:<40} {}",
            id.name,
            id.params.join(","),
            id.region,
            id.reference
        );
    }
    Ok(0)
}

fn print_out(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn parse_scalar_list(text: &str) -> qid::Result<Vec<Scalar>> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',').map(parse_scalar).collect()
}

fn cmd_eval(args: EvalArgs) -> qid::Result<u8> {
    let num = parse_scalar_list(&args.num)?;
    let den = parse_scalar_list(&args.den)?;
    let need = |opt: &Option<String>, flag: &str| -> qid::Result<Scalar> {
        match opt {
            Some(text) => parse_scalar(text),
            None => Err(QError::Parse(format!(
                "--{flag} is required for this series"
            ))),
        }
    };
    let result: EvalResult = match args.series.as_str() {
        "phi" => {
            let q = QBase::new(need(&args.q, "q")?)?;
            let z = need(&args.z, "z")?;
            eval_phi(&SeriesSpec::phi(num, den, q, z))?
        }
        "psi" => {
            let q = QBase::new(need(&args.q, "q")?)?;
            let z = need(&args.z, "z")?;
            eval_psi(&SeriesSpec::psi(num, den, q, z))?
        }
        "h2" => {
            if num.len() != 2 || den.len() != 2 {
                return Err(QError::Parse(
                    "h2 takes exactly two numerator and two denominator parameters".into(),
                ));
            }
            eval_h2(num[0], num[1], den[0], den[1])?
        }
        other => return Err(QError::Parse(format!("unknown series kind {other:?}"))),
    };
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "value": format_scalar(result.value),
                "rel_err": result.rel_err,
                "cancellation_digits": result.cancellation_digits,
            })
        );
    } else {
        println!("value = {}", format_scalar(result.value));
        println!("rel_err = {:e}", result.rel_err);
        println!("cancellation_digits = {:.2}", result.cancellation_digits);
    }
    Ok(0)
}

fn run_verify_one(name: &str, args: &VerifyArgs) -> qid::Result<Report> {
    let id = find(name).ok_or_else(|| QError::Parse(format!("unknown identity {name:?}")))?;
    let cfg = SampleConfig {
        seed: args.seed,
        count: args.samples,
        real_only: args.real_only,
        ..SampleConfig::default()
    };
    let mut results: Vec<CheckResult> = Vec::with_capacity(args.samples);
    for params in sample(&id, &cfg)? {
        results.push(check(&id, &params, args.tol)?);
    }
    Ok(build_report(name, args.seed, args.tol, &results))
}

fn emit(json: String, out: &Option<String>) -> qid::Result<()> {
    print_out(&json);
    if let Some(path) = out {
        std::fs::write(path, json.as_bytes())
            .map_err(|e| QError::Parse(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> qid::Result<u8> {
    let names: Vec<String> = if args.identity == "all" {
        catalog().iter().map(|id| id.name.to_string()).collect()
    } else {
        vec![args.identity.clone()]
    };
    let mut reports = Vec::with_capacity(names.len());
    for name in &names {
        reports.push(run_verify_one(name, &args)?);
    }
    let all_pass = reports.iter().all(|r| r.summary.passed == r.summary.count);
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0]).expect("report serialization")
    } else {
        serde_json::to_string_pretty(&reports).expect("report serialization")
    };
    emit(json, &args.out)?;
    Ok(if all_pass { 0 } else { EXIT_FAIL })
}

fn cmd_lattice(args: LatticeArgs) -> qid::Result<u8> {
    if args.m_max < 1 {
        return Err(QError::Parse("--m-max must be a positive integer".into()));
    }
    if !["thm1_bailey", "thm2_expansion", "thm3_chen_gu"].contains(&args.identity.as_str()) {
        return Err(QError::Parse(format!(
            "identity {:?} has no lattice form",
            args.identity
        )));
    }
    let id = find(&args.identity).expect("validated above");
    let mut results: Vec<CheckResult> = Vec::new();
    for m in 1..=args.m_max {
        let cfg = SampleConfig {
            // distinct stream per m so samples differ across lattice levels
            seed: args.seed.wrapping_add(m as u64),
            count: args.samples,
            ..SampleConfig::default()
        };
        for params in sample_lattice(id.name, m, &cfg)? {
            results.push(lattice_check(&id, &params, m, args.tol)?);
        }
    }
    let report = build_report(id.name, args.seed, args.tol, &results);
    let all_pass = report.summary.passed == report.summary.count;
    let json = serde_json::to_string_pretty(&report).expect("report serialization");
    emit(json, &args.out)?;
    Ok(if all_pass { 0 } else { EXIT_FAIL })
}
