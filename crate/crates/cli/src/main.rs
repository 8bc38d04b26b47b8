//! Command-line front end: batch verification runs, weighting tables,
//! counterexample listings, closed-form crosschecks, and reduction-map
//! checks, emitted as JSON, CSV, or plain text.
//!
//! Exit status: 0 when the requested check passes, 1 on a genuine
//! mathematical discrepancy (a failed theorem or oracle disagreement),
//! 2 on usage errors and unsupported combinations.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zetapos::engine::crosscheck;
use zetapos::reduction::{build_reduction, check_reduction_properties, score_identity};
use zetapos::{
    all_weightings, build_root_system, enumerate_weyl, is_distinguished_cardinality,
    is_distinguished_closed_form, verify_all, verify_weighting, Error, Family, Mode, Outcome,
    Report, RootSystem, ScanOptions, Verdict, WeightFunction,
};

#[derive(Parser)]
#[command(
    name = "zetapos",
    version,
    about = "Verify distinguished weightings of simple root systems by Weyl-group scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan the Weyl group and report positivity verdicts per weighting.
    Verify(VerifyArgs),
    /// Tabulate every weighting with its distinguished flags (no scan).
    Classify(CommonArgs),
    /// List the canonical counterexample of every non-distinguished weighting.
    Counterexamples(CounterexampleArgs),
    /// Compare closed-form ζ formulas against direct scans, coordinate by coordinate.
    Crosscheck(CommonArgs),
    /// Check a root-lattice reduction map: positivity, surjectivity,
    /// compatibility, and the score identity.
    ReductionCheck(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Root-system family letter (A, B, C, D, E, F, or G).
    #[arg(long)]
    family: String,
    /// Rank within the family.
    #[arg(long)]
    rank: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Verify only this weighting (digits over {0,2}, γ₁ first).
    #[arg(long)]
    rho: Option<String>,
    /// Verification strategy: brute, closedform, or both.
    #[arg(long, default_value = "brute")]
    mode: String,
    /// Worker threads for the scan.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Opt in to the long exceptional scans (E₇, E₈).
    #[arg(long)]
    long: bool,
    /// Record completed scan tasks here and resume from them.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Tree depth at which the scan splits into parallel tasks.
    #[arg(long, default_value_t = 4)]
    split_depth: usize,
    /// Type D: scan the extended group, skipping one fork column.
    #[arg(long)]
    d_extended: bool,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Worker threads for the scans.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Opt in to the long exceptional scans (E₇, E₈).
    #[arg(long)]
    long: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::Mismatch(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Runs one command; `Ok(false)` means the check itself failed (exit 1).
fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Verify(args) => cmd_verify(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Counterexamples(args) => cmd_counterexamples(args),
        Command::Crosscheck(args) => cmd_crosscheck(args),
        Command::ReductionCheck(args) => cmd_reduction_check(args),
    }
}

fn parse_system(common: &CommonArgs) -> anyhow::Result<RootSystem> {
    let family: Family = common.family.parse()?;
    Ok(build_root_system(family, common.rank)?)
}

/// E₇ and E₈ scans take hours to days; make the commitment explicit.
fn gate_long_scan(rs: &RootSystem, long: bool) -> anyhow::Result<()> {
    if rs.family() == Family::E && rs.rank() >= 7 && !long {
        anyhow::bail!(Error::Parameter(format!(
            "a full {}{} scan is a long job; pass --long to opt in",
            rs.family(),
            rs.rank()
        )));
    }
    Ok(())
}

fn emit(common: &CommonArgs, text: String) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write report to {}", path.display()))?,
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let rs = parse_system(&args.common)?;
    gate_long_scan(&rs, args.long)?;
    let mode: Mode = args.mode.parse()?;
    let options = ScanOptions {
        jobs: args.jobs,
        split_depth: args.split_depth,
        d_extended: args.d_extended,
        checkpoint: args.checkpoint.clone(),
    };

    let report = match &args.rho {
        None => verify_all(&rs, mode, &options)?,
        Some(rho) => {
            let rho = parse_rho(&rs, rho)?;
            let verdict = verify_weighting(&rs, &rho, mode, &options)?;
            single_weighting_report(&rs, verdict)
        }
    };
    let passed = report.theorem_holds;
    emit(&args.common, render_report(&report, args.common.format)?)?;
    Ok(passed)
}

fn parse_rho(rs: &RootSystem, digits: &str) -> anyhow::Result<WeightFunction> {
    let rho: WeightFunction = digits.parse()?;
    if rho.rank() != rs.rank() {
        anyhow::bail!(Error::Parameter(format!(
            "weighting {digits} has {} digits but the rank is {}",
            rho.rank(),
            rs.rank()
        )));
    }
    Ok(rho)
}

/// Wraps a lone verdict in the standard report shape; `theorem_holds`
/// reflects the equivalence for that single weighting.
fn single_weighting_report(rs: &RootSystem, verdict: Verdict) -> Report {
    let theorem_holds = (verdict.outcome == Outcome::AllPositive) == verdict.distinguished;
    Report {
        family: rs.family().to_string(),
        rank: rs.rank(),
        totals: zetapos::engine::Totals {
            weightings: 1,
            distinguished: usize::from(verdict.distinguished),
            counterexamples: usize::from(verdict.counterexample.is_some()),
            scanned: verdict.scanned,
            wall_ms: verdict.wall_ms,
        },
        weightings: vec![verdict],
        theorem_holds,
    }
}

fn render_report(report: &Report, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "rho",
                "distinguished",
                "bala_carter",
                "outcome",
                "word",
                "gamma_index",
                "zeta",
                "scanned",
                "wall_ms",
            ])?;
            for v in &report.weightings {
                let (word, gamma, zeta) = match &v.counterexample {
                    Some(ce) => (
                        ce.word.clone(),
                        ce.gamma_index.to_string(),
                        join_zeta(&ce.zeta),
                    ),
                    None => (String::new(), String::new(), String::new()),
                };
                w.write_record([
                    v.rho.clone(),
                    v.distinguished.to_string(),
                    option_cell(v.bala_carter),
                    outcome_cell(v.outcome).to_string(),
                    word,
                    gamma,
                    zeta,
                    v.scanned.to_string(),
                    v.wall_ms.to_string(),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Text => {
            let mut out = String::new();
            for v in &report.weightings {
                let status = if v.distinguished {
                    "distinguished    "
                } else {
                    "not distinguished"
                };
                let rhs = match &v.counterexample {
                    Some(ce) => format!(
                        "counterexample w=\"{}\" γ={} ζ={:?}",
                        ce.word, ce.gamma_index, ce.zeta
                    ),
                    None => "all positive".to_string(),
                };
                out.push_str(&format!(
                    "{}{}  ρ={}  {}  {}  scanned={}\n",
                    report.family, report.rank, v.rho, status, rhs, v.scanned
                ));
            }
            out.push_str(&format!("theorem_holds: {}\n", report.theorem_holds));
            Ok(out)
        }
    }
}

fn join_zeta(zeta: &[i64]) -> String {
    zeta.iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn option_cell(flag: Option<bool>) -> String {
    flag.map(|b| b.to_string()).unwrap_or_default()
}

fn outcome_cell(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::AllPositive => "all_positive",
        Outcome::Counterexample => "counterexample",
    }
}

// ---------------------------------------------------------------------------
// classify

#[derive(Serialize)]
struct ClassifyRow {
    rho: String,
    distinguished: bool,
    bala_carter: Option<bool>,
}

#[derive(Serialize)]
struct ClassifyReport {
    family: String,
    rank: usize,
    weightings: Vec<ClassifyRow>,
    /// Both classifications agree on every weighting (vacuous for
    /// exceptional families, which have no closed-form flag).
    classifiers_agree: bool,
}

fn cmd_classify(args: CommonArgs) -> anyhow::Result<bool> {
    let rs = parse_system(&args)?;
    let mut rows = Vec::new();
    for rho in all_weightings(rs.rank()) {
        let distinguished = is_distinguished_cardinality(&rs, &rho)?;
        let bala_carter = if rs.family().is_classical() {
            Some(is_distinguished_closed_form(rs.family(), rs.rank(), &rho)?)
        } else {
            None
        };
        rows.push(ClassifyRow {
            rho: rho.to_string(),
            distinguished,
            bala_carter,
        });
    }
    let agree = rows
        .iter()
        .all(|r| r.bala_carter.map_or(true, |b| b == r.distinguished));
    let report = ClassifyReport {
        family: rs.family().to_string(),
        rank: rs.rank(),
        weightings: rows,
        classifiers_agree: agree,
    };

    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["rho", "distinguished", "bala_carter"])?;
            for r in &report.weightings {
                w.write_record([
                    r.rho.clone(),
                    r.distinguished.to_string(),
                    option_cell(r.bala_carter),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut out = String::new();
            for r in &report.weightings {
                let closed = match r.bala_carter {
                    Some(b) => format!("  closed-form={b}"),
                    None => String::new(),
                };
                out.push_str(&format!(
                    "{}{}  ρ={}  distinguished={}{}\n",
                    report.family, report.rank, r.rho, r.distinguished, closed
                ));
            }
            out.push_str(&format!("classifiers_agree: {}\n", report.classifiers_agree));
            out
        }
    };
    emit(&args, text)?;
    Ok(agree)
}

// ---------------------------------------------------------------------------
// counterexamples

#[derive(Serialize)]
struct CounterexampleRow {
    rho: String,
    word: String,
    gamma_index: usize,
    zeta: Vec<i64>,
}

fn cmd_counterexamples(args: CounterexampleArgs) -> anyhow::Result<bool> {
    let rs = parse_system(&args.common)?;
    gate_long_scan(&rs, args.long)?;
    let options = ScanOptions {
        jobs: args.jobs,
        ..ScanOptions::default()
    };

    let mut rows = Vec::new();
    let mut all_refuted = true;
    for rho in all_weightings(rs.rank()) {
        if is_distinguished_cardinality(&rs, &rho)? {
            continue;
        }
        let verdict = verify_weighting(&rs, &rho, Mode::Brute, &options)?;
        match verdict.counterexample {
            Some(ce) => rows.push(CounterexampleRow {
                rho: verdict.rho,
                word: ce.word,
                gamma_index: ce.gamma_index,
                zeta: ce.zeta,
            }),
            // A non-distinguished weighting with no counterexample would
            // falsify the characterization.
            None => all_refuted = false,
        }
    }

    let text = match args.common.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["rho", "word", "gamma_index", "zeta"])?;
            for r in &rows {
                w.write_record([
                    r.rho.clone(),
                    r.word.clone(),
                    r.gamma_index.to_string(),
                    join_zeta(&r.zeta),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                out.push_str(&format!(
                    "ρ={}: word=\"{}\", γ={}, ζ={:?}\n",
                    r.rho, r.word, r.gamma_index, r.zeta
                ));
            }
            out
        }
    };
    emit(&args.common, text)?;
    Ok(all_refuted)
}

// ---------------------------------------------------------------------------
// crosscheck

#[derive(Serialize)]
struct CrosscheckReport {
    family: String,
    rank: usize,
    agree: bool,
}

fn cmd_crosscheck(args: CommonArgs) -> anyhow::Result<bool> {
    let rs = parse_system(&args)?;
    let agree = crosscheck(&rs, &ScanOptions::default())?;
    let report = CrosscheckReport {
        family: rs.family().to_string(),
        rank: rs.rank(),
        agree,
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["family", "rank", "agree"])?;
            w.write_record([
                report.family.clone(),
                report.rank.to_string(),
                report.agree.to_string(),
            ])?;
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => format!(
            "{}{}: closed form and brute force {}\n",
            report.family,
            report.rank,
            if agree { "agree" } else { "DISAGREE" }
        ),
    };
    emit(&args, text)?;
    Ok(agree)
}

// ---------------------------------------------------------------------------
// reduction-check

#[derive(Serialize)]
struct ReductionReport {
    family: String,
    rank: usize,
    source_family: String,
    source_rank: usize,
    positive: bool,
    root_surjective: bool,
    compatible: bool,
    /// (ρ, w) pairs whose score identity was evaluated exhaustively;
    /// 0 when the target group is too large for the sweep.
    score_pairs_checked: u64,
    score_identity_holds: bool,
}

/// Exhaustive score-identity sweeps stay affordable up to this group order.
const SCORE_SWEEP_LIMIT: u128 = 10_000;

fn cmd_reduction_check(args: CommonArgs) -> anyhow::Result<bool> {
    let family: Family = args.family.parse()?;
    let (map, embedding) = build_reduction(family, args.rank)?;
    let props = check_reduction_properties(&map, &embedding)?;

    let target = map.target();
    let mut pairs = 0u64;
    let mut score_holds = true;
    if zetapos::group_order(target.family(), target.rank())? <= SCORE_SWEEP_LIMIT {
        'sweep: for rho in all_weightings(target.rank()) {
            for w in enumerate_weyl(target) {
                pairs += 1;
                if !score_identity(&map, &embedding, &rho, &w)? {
                    score_holds = false;
                    break 'sweep;
                }
            }
        }
    }

    let report = ReductionReport {
        family: target.family().to_string(),
        rank: target.rank(),
        source_family: map.source().family().to_string(),
        source_rank: map.source().rank(),
        positive: props.positive,
        root_surjective: props.root_surjective,
        compatible: props.compatible,
        score_pairs_checked: pairs,
        score_identity_holds: score_holds,
    };
    let passed =
        props.positive && props.root_surjective && props.compatible && score_holds;

    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "family",
                "rank",
                "source_family",
                "source_rank",
                "positive",
                "root_surjective",
                "compatible",
                "score_pairs_checked",
                "score_identity_holds",
            ])?;
            w.write_record([
                report.family.clone(),
                report.rank.to_string(),
                report.source_family.clone(),
                report.source_rank.to_string(),
                report.positive.to_string(),
                report.root_surjective.to_string(),
                report.compatible.to_string(),
                report.score_pairs_checked.to_string(),
                report.score_identity_holds.to_string(),
            ])?;
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => format!(
            "{}{} ← {}{}: positive={} root_surjective={} compatible={} \
             score_identity={} ({} pairs)\n",
            report.family,
            report.rank,
            report.source_family,
            report.source_rank,
            report.positive,
            report.root_surjective,
            report.compatible,
            report.score_identity_holds,
            report.score_pairs_checked
        ),
    };
    emit(&args, text)?;
    Ok(passed)
}
