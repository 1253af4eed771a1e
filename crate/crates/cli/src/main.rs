//! `jclass`: command-line front end for the J-class toolkit.
//!
//! Exit codes: 0 on success or a positive analysis, 1 when an analysis says
//! no (failed verification, negative criterion, gallery mismatch), 2 on bad
//! input. Errors are written to standard error as `{"error", "message"}`.

mod construct;
mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jclass_core::criteria::{assemble_verdict, power_bracket, salas_bilateral, salas_unilateral, CriterionReport};
use jclass_core::gallery::{list_cases, logistic_orbit_coverage, run_case, CaseReport};
use jclass_core::operator::{
    gelfand_estimate, spectral_radius, spectrum, spectrum_meets_unit_circle, OperatorSpec, SeqVector, WeightSeq,
};
use jclass_core::reach::j_profile;
use jclass_core::witness::{verify_documented, verify_witness, VerificationReport, Witness};
use jclass_core::{Error, Result, RunConfig};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use construct::BuildSpec;
use io::{emit, read_json, read_witness, to_json};

#[derive(Parser)]
#[command(name = "jclass", version, about = "Numerical laboratory for J-class operators")]
struct Cli {
    /// Run configuration (JSON); unspecified fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verdict pipeline on an operator.
    Analyze {
        #[arg(long)]
        op: PathBuf,
        /// Candidate J-class vector; defaults to `e_1` in the first block.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance profile from `y` to `T^k(ball(x, delta))`.
    Jdist {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Largest power probed; defaults to the configured horizon.
        #[arg(long)]
        kmax: Option<u64>,
        /// Strictly decreasing ball radii, comma separated.
        #[arg(long, value_delimiter = ',')]
        delta_schedule: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    /// Build or verify finite witnesses of `y ∈ J(x)`.
    Witness(WitnessCommand),
    #[command(subcommand)]
    /// Weight-product criteria for weighted shifts.
    Criteria(CriteriaCommand),
    #[command(subcommand)]
    /// Worked cases with expected verdicts.
    Gallery(GalleryCommand),
    /// Spectral radius and unit-circle answer with exactness flags.
    Spectrum {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probes without pass/fail semantics.
    #[command(subcommand)]
    Explore(ExploreCommand),
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Recompute a witness's errors against tolerance schedules.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        /// Base tolerances; the witness's own schedules when omitted.
        #[arg(long, value_delimiter = ',', requires = "target_tol")]
        base_tol: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', requires = "base_tol")]
        target_tol: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a witness from a construction spec and verify it.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CriteriaCommand {
    /// Weight-product criterion for a weighted backward shift.
    Shift(ShiftArgs),
}

#[derive(Args)]
struct ShiftArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    bilateral: bool,
    /// Inclusive offset range `lo:hi`.
    #[arg(long, value_parser = parse_range, requires = "bilateral", allow_hyphen_values = true)]
    qrange: Option<(i64, i64)>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// Run one case or all of them; exits 1 on any verdict mismatch.
    Run {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        case: Option<String>,
        #[arg(long)]
        all: bool,
        /// Report file for one case, directory for `--all`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Names of the available cases.
    List,
}

#[derive(Subcommand)]
enum ExploreCommand {
    /// Bin coverage of an orbit of the logistic map `4x(1 - x)`.
    Logistic {
        #[arg(long, default_value_t = 0.123)]
        seed: f64,
        #[arg(long, default_value_t = 100_000)]
        iterations: usize,
        #[arg(long, default_value_t = 256)]
        bins: usize,
    },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s}"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad lower bound {a}"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad upper bound {b}"))?;
    Ok((lo, hi))
}

/// Whether the analysis came out positive.
type Outcome = bool;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(p) => read_json::<RunConfig>(p)?,
        None => RunConfig::default(),
    }
    .with_env()?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidConfig("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    let format = cli.format;
    match cli.command {
        Command::Analyze { op, base, out } => {
            json_only(format, "analyze")?;
            let op: OperatorSpec = read_json(&op)?;
            let base = base.as_deref().map(read_json::<SeqVector>).transpose()?;
            let verdict = assemble_verdict(&op, base.as_ref(), &cfg)?;
            emit(out.as_deref(), &to_json(&verdict))?;
            Ok(true)
        }
        Command::Jdist { op, x, y, kmax, delta_schedule, out } => {
            let op: OperatorSpec = read_json(&op)?;
            let space = op.space();
            let x = read_json::<SeqVector>(&x)?.conform(&space)?;
            let y = read_json::<SeqVector>(&y)?.conform(&space)?;
            let schedule = delta_schedule.unwrap_or_else(|| cfg.delta_schedule.clone());
            let profile = j_profile(&op, &x, &y, kmax.unwrap_or(cfg.horizon), &schedule, &cfg)?;
            let text = match format {
                Format::Csv => profile.to_csv()?,
                Format::Json => {
                    let bracket = power_bracket(&op, &x, &y, &profile)?;
                    to_json(&json!({ "profile": profile, "power_bracket": bracket }))
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Witness(WitnessCommand::Verify { spec, base_tol, target_tol, out }) => {
            let w = read_witness(&spec)?;
            let report = match (base_tol, target_tol) {
                (Some(b), Some(t)) => verify_witness(&w, &b, &t)?,
                _ => verify_documented(&w)?,
            };
            emit_verification(format, out.as_deref(), &report, None)
        }
        Command::Witness(WitnessCommand::Build { spec, out }) => {
            let spec: BuildSpec = read_json(&spec)?;
            let w = spec.build(&cfg)?;
            let report = verify_documented(&w)?;
            emit_verification(format, out.as_deref(), &report, Some(&w))
        }
        Command::Criteria(CriteriaCommand::Shift(args)) => {
            let weights: WeightSeq = read_json(&args.weights)?;
            let horizon = args.horizon.unwrap_or(cfg.criteria_horizon);
            let report: CriterionReport = if args.bilateral {
                let q = args.qrange.unwrap_or(cfg.q_range);
                salas_bilateral(&weights, horizon, q, cfg.big_margin, cfg.small_margin)?
            } else {
                salas_unilateral(&weights, horizon, cfg.big_margin)?
            };
            let text = match format {
                Format::Csv => report.to_csv()?,
                Format::Json => to_json(&report),
            };
            emit(args.out.as_deref(), &text)?;
            Ok(report.positive)
        }
        Command::Gallery(GalleryCommand::List) => {
            json_only(format, "gallery list")?;
            emit(None, &to_json(&list_cases()))?;
            Ok(true)
        }
        Command::Gallery(GalleryCommand::Run { case, all, out }) => {
            json_only(format, "gallery run")?;
            if all {
                run_gallery_all(&cfg, out.as_deref())
            } else {
                let name = case.expect("clap requires --case without --all");
                let report = run_case(&name, &cfg)?;
                emit(out.as_deref(), &to_json(&report))?;
                Ok(report.pass)
            }
        }
        Command::Spectrum { op, out } => {
            json_only(format, "spectrum")?;
            let op: OperatorSpec = read_json(&op)?;
            let radius = spectral_radius(&op);
            let gelfand = (!radius.exact).then(|| gelfand_estimate(&op, cfg.horizon as usize));
            let report = json!({
                "spectrum": spectrum(&op),
                "spectral_radius": radius,
                "gelfand_estimate": gelfand,
                "meets_unit_circle": spectrum_meets_unit_circle(&op),
            });
            emit(out.as_deref(), &to_json(&report))?;
            Ok(true)
        }
        Command::Explore(ExploreCommand::Logistic { seed, iterations, bins }) => {
            json_only(format, "explore logistic")?;
            emit(None, &to_json(&logistic_orbit_coverage(seed, iterations, bins)?))?;
            Ok(true)
        }
    }
}

fn json_only(format: Format, command: &str) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Error::InvalidConfig(format!("{command} reports are JSON only"))),
    }
}

fn emit_verification(
    format: Format,
    out: Option<&Path>,
    report: &VerificationReport,
    witness: Option<&Witness>,
) -> Result<Outcome> {
    let text = match (format, witness) {
        (Format::Csv, _) => report.to_csv()?,
        (Format::Json, None) => to_json(report),
        (Format::Json, Some(w)) => to_json(&json!({ "witness": w, "verification": report })),
    };
    emit(out, &text)?;
    Ok(report.pass)
}

#[derive(Serialize)]
struct GallerySummary<'a> {
    pass: bool,
    cases: Vec<CaseLine<'a>>,
}

#[derive(Serialize)]
struct CaseLine<'a> {
    name: &'a str,
    pass: bool,
}

/// Cases run in parallel; reports are ordered by case name.
fn run_gallery_all(cfg: &RunConfig, dir: Option<&Path>) -> Result<Outcome> {
    let reports: Vec<CaseReport> = list_cases().par_iter().map(|n| run_case(n, cfg)).collect::<Result<_>>()?;
    let pass = reports.iter().all(|r| r.pass);
    match dir {
        Some(dir) => {
            for r in &reports {
                emit(Some(&dir.join(format!("{}.json", r.name))), &to_json(r))?;
            }
            let cases = reports.iter().map(|r| CaseLine { name: &r.name, pass: r.pass }).collect();
            emit(None, &to_json(&GallerySummary { pass, cases }))?;
        }
        None => emit(None, &to_json(&reports))?,
    }
    Ok(pass)
}
