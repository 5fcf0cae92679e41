mod report;
mod suites;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use lambda_core::cyclolayer::{verify_certificate, verify_certificate_against, BetaCertificate, CertificateReport};
use lambda_core::par::Exec;
use lambda_core::quadfield::{gold_test, is_fundamental, GoldReport, DEFAULT_BUDGET};
use lambda_core::Error;
use serde::Serialize;

use report::{LambdaReport, Status, SuiteReport, Verdict, SCHEMA};

#[derive(Parser)]
#[command(name = "lambda", version, about = "Iwasawa λ lower bounds for imaginary quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// λ ≥ 1 and λ ≥ 2 from Gold's criterion.
    Gold {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// λ ≥ 3 from a β/α₁ certificate.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Compare N(β) with itself instead of Gold's α. Exercises the
        /// pipeline only; level 3 is then reported EXPERIMENTAL.
        #[arg(long)]
        synthetic: bool,
    },
    /// Gold reports for every fundamental D in [dmin, dmax] with p split and p ∤ h.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        dmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        dmax: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Run one invariant suite with traces.
    Demo {
        topic: Topic,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run every suite at small parameters.
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Topic {
    Bockstein,
    Massey,
    Mn,
    Equivariance,
    Periods,
}

/// Failure with its exit code and message.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let hint = match &e {
            Error::IndexDivisor { q } => format!(
                "\nhint: no generator of O_Q1/{q} was found; put one in prime_data as {{\"q\": \"{q}\", \"theta\": [...]}}, or choose another alpha1 if {q} is a common index divisor"
            ),
            _ => String::new(),
        };
        Exit(e.exit_code() as u8, format!("error: {e}{hint}"))
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit(1, format!("error: {e}"))
    }
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn emit_lambda(json: bool, report: &LambdaReport, human: String) -> Result<(), Exit> {
    if !report.is_monotone() {
        return Err(Exit(5, "error: verdicts are not monotone in the level".into()));
    }
    emit(json, report, human);
    Ok(())
}

fn emit(json: bool, value: &impl Serialize, human: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        print!("{human}");
    }
}

fn gold_verdicts(g: &GoldReport) -> Vec<Verdict> {
    let mut v = vec![Verdict { level: 1, status: Status::Proved, note: format!("{} splits in K", g.p) }];
    if g.lambda_ge_2 {
        v.push(Verdict { level: 2, status: Status::Proved, note: format!("log_p(α) ≡ 0 mod p², α = {}", g.alpha) });
        v.push(Verdict { level: 3, status: Status::NeedsCertificate, note: "needs β with N(β) = α and α₁; see `verify`".into() });
    } else {
        v.push(Verdict { level: 2, status: Status::Refuted, note: format!("log_p(α) ≢ 0 mod p², α = {}", g.alpha) });
    }
    v
}

fn cmd_gold(disc: i64, p: u64, prec: u32, json: bool, budget: u64) -> Result<(), Exit> {
    let start = Instant::now();
    let g = gold_test(disc, p, prec, budget)?;
    let report = LambdaReport {
        schema: SCHEMA,
        command: "gold".into(),
        disc: disc.to_string(),
        p: p.to_string(),
        s_count: g.s_count,
        verdicts: gold_verdicts(&g),
        elapsed_ms: start.elapsed().as_millis() as u64,
        gold: Some(to_value(&g)),
        certificate: None,
    };
    let mut human = report.render();
    human.push_str(&format!("  h = {}, generator by {:?}, log_p(α) = {}\n", g.h_k, g.method, g.log_val.value()));
    emit_lambda(json, &report, human)
}

fn cmd_verify(path: &PathBuf, prec: u32, json: bool, budget: u64, synthetic: bool) -> Result<(), Exit> {
    let start = Instant::now();
    let text = fs::read_to_string(path).map_err(|e| Exit(4, format!("error: cannot read certificate: {e}")))?;
    let cert = BetaCertificate::from_json(&text)?;
    let gold = gold_test(cert.disc, cert.p, prec, budget)?;
    let mut verdicts = gold_verdicts(&gold);
    verdicts.retain(|v| v.level < 3);
    let mut cert_report: Option<CertificateReport> = None;
    if gold.lambda_ge_2 {
        let rep = if synthetic {
            verify_certificate_against(&cert, &cert.beta.relative_norm()?, prec)?
        } else {
            verify_certificate(&cert, prec, budget)?
        };
        let (status, note) = match (synthetic, rep.lambda_ge_3) {
            (true, ok) => (
                Status::Experimental,
                format!("synthetic: α := N(β), not Gold's α; local check on α₁ {}", if ok { "passes" } else { "fails" }),
            ),
            (false, true) => (Status::Proved, "N(β) = α, valuations ≡ 0 mod p, log_p(α₁) ≡ 0 mod p²".into()),
            (false, false) => (Status::Refuted, "log_p(α₁) ≢ 0 mod p²".into()),
        };
        verdicts.push(Verdict { level: 3, status, note });
        cert_report = Some(rep);
    }
    let report = LambdaReport {
        schema: SCHEMA,
        command: "verify".into(),
        disc: cert.disc.to_string(),
        p: cert.p.to_string(),
        s_count: gold.s_count,
        verdicts,
        elapsed_ms: start.elapsed().as_millis() as u64,
        gold: Some(to_value(&gold)),
        certificate: cert_report.as_ref().map(to_value),
    };
    emit_lambda(json, &report, report.render())
}

#[derive(Serialize)]
struct SweepRow {
    schema: u32,
    disc: String,
    p: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<GoldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_sweep(dmin: i64, dmax: i64, p: u64, prec: u32, out: Option<&PathBuf>, budget: u64) -> Result<(), Exit> {
    if dmin >= 0 || dmax >= 0 {
        return Err(Exit(1, "error: the range must consist of negative discriminants".into()));
    }
    // Deterministic order: ascending |D|.
    let discs: Vec<i64> = if dmin > dmax { Vec::new() } else { (dmin..=dmax).rev().filter(|&d| is_fundamental(d)).collect() };
    let results = Exec::default().map(&discs, |&d| gold_test(d, p, prec, budget));
    let mut rows = Vec::new();
    let mut worst: Option<Exit> = None;
    for (d, r) in discs.iter().zip(results) {
        let (report, error) = match r {
            Ok(g) => (Some(g), None),
            Err(Error::NotSplit { .. } | Error::PDividesH { .. }) => continue,
            Err(e @ (Error::BudgetExceeded(_) | Error::InternalInconsistency(_))) => {
                let code = e.exit_code() as u8;
                if worst.as_ref().is_none_or(|w| code > w.0) {
                    worst = Some(Exit(code, format!("error: D = {d}: {e}")));
                }
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        let row = SweepRow { schema: SCHEMA, disc: d.to_string(), p: p.to_string(), report, error };
        rows.push(serde_json::to_string(&row).expect("rows serialize"));
    }
    let mut text = rows.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    match worst {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn finish_suites(reports: &[SuiteReport], json: bool, verbose: bool) -> Result<(), Exit> {
    if json {
        let value = if reports.len() == 1 { to_value(&reports[0]) } else { to_value(&reports) };
        println!("{}", serde_json::to_string_pretty(&value).expect("reports serialize"));
    } else {
        for r in reports {
            println!("[{}]", r.topic);
            print!("{}", r.render(verbose));
        }
    }
    if reports.iter().all(SuiteReport::ok) {
        Ok(())
    } else {
        Err(Exit(5, "error: invariant failure".into()))
    }
}

fn cmd_demo(topic: Topic, p: u32, n: usize, json: bool) -> Result<(), Exit> {
    if ![3, 5, 7, 11, 13].contains(&p) {
        return Err(Exit(1, format!("error: --p must be an odd prime ≤ 13, got {p}")));
    }
    if n == 0 {
        return Err(Exit(1, "error: --n must be at least 1".into()));
    }
    let report = match topic {
        Topic::Bockstein => suites::bockstein(p, 100, 1)?,
        Topic::Massey => suites::massey(p, 60, 2)?,
        Topic::Mn => suites::mn(p, n)?,
        Topic::Equivariance => suites::equivariance(p)?,
        Topic::Periods => suites::periods(p as u64, 3)?,
    };
    finish_suites(&[report], json, true)
}

fn cmd_selftest(json: bool) -> Result<(), Exit> {
    let reports = vec![
        suites::bockstein(3, 100, 1)?,
        suites::massey(3, 60, 2)?,
        suites::mn(3, 2)?,
        suites::mn(5, 2)?,
        suites::equivariance(3)?,
        suites::periods(3, 3)?,
        suites::periods(5, 3)?,
        suites::certificates(3, 10, 4)?,
        suites::certificates(5, 10, 5)?,
    ];
    finish_suites(&reports, json, false)
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Gold { disc, p, prec, json, budget } => cmd_gold(disc, p, prec, json, budget),
        Command::Verify { cert, prec, json, budget, synthetic } => cmd_verify(&cert, prec, json, budget, synthetic),
        Command::Sweep { dmin, dmax, p, prec, out, budget } => cmd_sweep(dmin, dmax, p, prec, out.as_ref(), budget),
        Command::Demo { topic, p, n, json } => cmd_demo(topic, p, n, json),
        Command::Selftest { json } => cmd_selftest(json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
