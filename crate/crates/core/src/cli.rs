//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 cap exceeded, 3 guarantee-mode
//! parameters infeasible, 4 internal invariant violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::chains::{self, ChainFamily, VerifyMode, VerifyOptions};
use crate::discrepancy::{self, SampleStrategy, WeightedPointSet};
use crate::error::{Error, Result};
use crate::generators::{self, GeneratorKind, GeneratorSpec};
use crate::geometry::{format_scalar, parse_scalar, PointSequence, Scalar};
use crate::io::{write_atomic, PointSetFile};
use crate::pipeline::{self, FamilySource, Mode, ParamOptions};
use crate::regularity::{self, Partition};
use crate::tverberg;

#[derive(Parser, Debug)]
#[command(name = "onesided", version, about = "One-sided weak epsilon-approximants for convex sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated point set.
    Generate(GenerateArgs),
    /// Build an approximant for a point set.
    Approximate(ApproximateArgs),
    /// Evaluate the discrepancy of an approximant.
    Discrepancy(DiscrepancyArgs),
    /// Build or verify stabbing families.
    #[command(subcommand)]
    Chains(ChainsCommand),
    /// Regularity checks.
    #[command(subcommand)]
    Partition(PartitionCommand),
    /// Lower-bound witness for points in convex position.
    Prop12(Prop12Args),
    /// Timing and verification table as CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Base of the stretched diagonal.
    #[arg(long)]
    pub base: Option<u64>,
    /// Denominator for rational circle parameters.
    #[arg(long)]
    pub denominator: Option<u64>,
    /// Coordinate bound for random points.
    #[arg(long)]
    pub coord_bound: Option<i64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Empirical,
    Guarantee,
}

#[derive(Args, Debug)]
pub struct ApproximateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub epsilon: String,
    #[arg(long, value_enum, default_value = "empirical")]
    pub mode: ModeArg,
    /// Empirical mode: ambient size of the family.
    #[arg(long)]
    pub t: Option<usize>,
    /// Empirical mode: block length.
    #[arg(long)]
    pub u: Option<u64>,
    /// Empirical mode: family file (text format of `chains build`).
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Empirical mode: regularity tolerance of the partition.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Exponent c of the regularity bound.
    #[arg(long)]
    pub regularity_c: Option<u32>,
    /// Guarantee mode: refuse the fallback when its threshold is tower-sized.
    #[arg(long)]
    pub strict: bool,
    /// Treat the input as one homogeneous sequence (no partition step).
    #[arg(long)]
    pub homogeneous: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DiscModeArg {
    One,
    Two,
    Net,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    RandomSubsets,
    Halfspaces,
    LocalSearch,
}

#[derive(Args, Debug)]
pub struct DiscrepancyArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long, value_enum, default_value = "one")]
    pub mode: DiscModeArg,
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Exact enumeration (default).
    #[arg(long, conflicts_with = "samples")]
    pub exact: bool,
    /// Sampled lower bound with this many samples.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum, default_value = "local-search")]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override of the exact enumeration cap.
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ChainsCommand {
    /// Write the layered family for arity D and epsilon.
    Build(ChainsBuildArgs),
    /// Check the stabbing guarantee of a family file.
    Verify(ChainsVerifyArgs),
}

#[derive(Args, Debug)]
pub struct ChainsBuildArgs {
    #[arg(long = "D")]
    pub arity: usize,
    #[arg(long)]
    pub epsilon: String,
    /// Multiplier m (default ceil(4/eps)).
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VerifyModeArg {
    Sampled,
    Exhaustive,
}

#[derive(Args, Debug)]
pub struct ChainsVerifyArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, value_enum, default_value = "sampled")]
    pub mode: VerifyModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum PartitionCommand {
    /// Exact regularity check of a partition file.
    Check(PartitionCheckArgs),
}

#[derive(Args, Debug)]
pub struct PartitionCheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Lines `k: i j ...` with zero-based point indices.
    #[arg(long)]
    pub parts: PathBuf,
    #[arg(long)]
    pub gamma: String,
}

#[derive(Args, Debug)]
pub struct Prop12Args {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub epsilon: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Lemma32,
    Lemma51,
    Pipeline,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of instances.
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parses `argv` (program name first) and runs; returns the exit code.
/// Errors go to `err`, primary output to `out` unless written to a file.
pub fn run_with<I, T>(argv: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            if let Error::InfeasibleParams(report) = &e {
                if let Ok(s) = serde_json::to_string_pretty(report) {
                    let _ = writeln!(out, "{s}");
                }
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main_exit() -> ! {
    let code = run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code)
}

fn rational(s: &str) -> Result<Scalar> {
    parse_scalar(s)
}

fn read_points(path: &Path) -> Result<PointSequence> {
    PointSetFile::read(path)?.to_points()
}

fn read_text(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(out: &mut dyn std::io::Write, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => Ok(out.write_all(bytes)?),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn dispatch(cmd: Command, out: &mut dyn std::io::Write) -> Result<()> {
    match cmd {
        Command::Generate(a) => {
            let kind: GeneratorKind = a.kind.parse()?;
            let spec = GeneratorSpec {
                kind,
                n: a.n,
                d: a.d,
                seed: a.seed,
                base: a.base,
                denominator: a.denominator,
                coord_bound: a.coord_bound,
            };
            let p = generators::generate(&spec)?;
            let mut text = PointSetFile::from_points(&p).to_json()?;
            text.push('\n');
            emit(out, a.output.as_deref(), text.as_bytes())
        }
        Command::Approximate(a) => approximate(a, out),
        Command::Discrepancy(a) => discrepancy_cmd(a, out),
        Command::Chains(ChainsCommand::Build(a)) => {
            let eps = rational(&a.epsilon)?;
            let fam = chains::build_family(a.arity, &eps, a.m)?;
            emit(out, a.output.as_deref(), fam.to_text().as_bytes())
        }
        Command::Chains(ChainsCommand::Verify(a)) => {
            let fam = ChainFamily::from_text(&read_text(&a.family)?)?;
            let opts = VerifyOptions {
                mode: match a.mode {
                    VerifyModeArg::Sampled => VerifyMode::Sampled,
                    VerifyModeArg::Exhaustive => VerifyMode::Exhaustive,
                },
                samples: a.samples,
                local_search_restarts: a.restarts,
                seed: a.seed,
                ..VerifyOptions::default()
            };
            let report = chains::verify_family(&fam, &opts)?;
            let v = json!({
                "verified": report.verified(),
                "worst_margin": format_scalar(&report.worst_margin),
                "witness": report.witness.boundaries(),
                "chains_checked": report.chains_checked,
                "t": fam.ambient,
                "size": fam.size(),
            });
            emit(out, None, &to_json(&v)?)
        }
        Command::Partition(PartitionCommand::Check(a)) => {
            let p = read_points(&a.input)?;
            let parts = Partition::from_text(&read_text(&a.parts)?, p.len())?;
            let gamma = rational(&a.gamma)?;
            let res = regularity::check_partition(&p, &parts, &gamma)?;
            let v = match res {
                regularity::PartitionCheck::Accepted(r) => json!({
                    "status": "accepted",
                    "M": r.partition.len(),
                    "gamma": format_scalar(&r.gamma),
                    "exceptional": r.exceptional,
                    "signs": r.sign_table.iter().map(|(k, s)| json!([k, s])).collect::<Vec<_>>(),
                }),
                regularity::PartitionCheck::Rejected {
                    exceptional_count,
                    allowed,
                } => json!({
                    "status": "rejected",
                    "M": parts.len(),
                    "exceptional_count": exceptional_count,
                    "allowed": format_scalar(&allowed),
                }),
            };
            emit(out, None, &to_json(&v)?)
        }
        Command::Prop12(a) => {
            let p = read_points(&a.input)?;
            let w = PointSetFile::read(&a.a)?.to_weighted()?;
            let eps = rational(&a.epsilon)?;
            let wit = discrepancy::proposition_witness(&p, &w, &eps)?;
            emit(out, None, &to_json(&wit)?)
        }
        Command::Bench(a) => {
            let csv = bench(a.suite, a.seed, a.instances)?;
            emit(out, a.output.as_deref(), csv.as_bytes())
        }
    }
}

fn approximate(a: ApproximateArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let p = read_points(&a.input)?;
    let eps = rational(&a.epsilon)?;
    let family = match &a.family {
        Some(path) => Some(ChainFamily::from_text(&read_text(path)?)?),
        None => None,
    };
    if a.homogeneous {
        let fam = match (family, a.t) {
            (Some(f), _) => Some(f),
            (None, Some(t)) => {
                let (_, arity) = tverberg::selection_arity(p.dim());
                Some(chains::complete_family(arity, t, eps.clone())?)
            }
            (None, None) => None,
        };
        let (w, trace) = pipeline::construct_homogeneous_fast(&p, &eps, fam.as_ref())?;
        if let Some(tp) = &a.trace {
            write_atomic(tp, &to_json(&trace)?)?;
        }
        let mut text = PointSetFile::from_weighted(&w).to_json()?;
        text.push('\n');
        return emit(out, a.output.as_deref(), text.as_bytes());
    }
    let mode = match a.mode {
        ModeArg::Empirical => Mode::Empirical,
        ModeArg::Guarantee => Mode::Guarantee,
    };
    let opts = ParamOptions {
        regularity_c: a.regularity_c,
        t: a.t,
        u: a.u,
        family: family.map(FamilySource::Explicit),
        partition_gamma: a.gamma.as_deref().map(rational).transpose()?,
        strict: a.strict,
        ..ParamOptions::default()
    };
    let params = pipeline::compute_params(p.dim(), &eps, mode, &opts)?;
    let (w, trace) = pipeline::approximate(&p, &eps, &params, a.seed)?;
    if let Some(tp) = &a.trace {
        write_atomic(tp, &to_json(&trace)?)?;
    }
    let mut text = PointSetFile::from_weighted(&w).to_json()?;
    text.push('\n');
    emit(out, a.output.as_deref(), text.as_bytes())
}

fn discrepancy_cmd(a: DiscrepancyArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let p = read_points(&a.p)?;
    let w = PointSetFile::read(&a.a)?.to_weighted()?;
    let report = match (a.mode, a.samples) {
        (DiscModeArg::Net, _) => {
            let eps = a
                .epsilon
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("--epsilon is required for mode net".into()))?;
            discrepancy::eps_net_check(&p, &w, &rational(eps)?)?
        }
        (mode, Some(samples)) => {
            let strategy = match a.strategy {
                StrategyArg::RandomSubsets => SampleStrategy::RandomSubsets,
                StrategyArg::Halfspaces => SampleStrategy::Halfspaces,
                StrategyArg::LocalSearch => SampleStrategy::LocalSearch,
            };
            let two = matches!(mode, DiscModeArg::Two);
            discrepancy::sampled_discrepancy(&p, &w, strategy, samples, a.seed, two)?
        }
        (DiscModeArg::One, None) => match a.cap {
            Some(cap) => discrepancy::one_sided_discrepancy_exact_with_cap(&p, &w, cap)?,
            None => discrepancy::one_sided_discrepancy_exact(&p, &w)?,
        },
        (DiscModeArg::Two, None) => match a.cap {
            Some(cap) => discrepancy::two_sided_discrepancy_exact_with_cap(&p, &w, cap)?,
            None => discrepancy::two_sided_discrepancy_exact(&p, &w)?,
        },
    };
    let mut v = serde_json::to_value(&report)?;
    if let (Some(eps), DiscModeArg::One | DiscModeArg::Two) = (a.epsilon.as_deref(), a.mode) {
        // a sampled value only refutes
        let eps = rational(eps)?;
        let within = report.value <= eps;
        if report.exact || !within {
            v["pass"] = json!(within);
        }
    }
    emit(out, None, &to_json(&v)?)
}

const CSV_HEADER: &str = "suite,instance,n,d,epsilon,value,verified,millis";

/// CSV table with header `suite,instance,n,d,epsilon,value,verified,millis`.
pub fn bench(suite: Suite, seed: u64, instances: usize) -> Result<String> {
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut row = |name: &str, i: usize, n: usize, d: usize, eps: &str, value: String, ok: bool, ms: u128| {
        let _ = writeln!(csv, "{name},{i},{n},{d},{eps},{value},{ok},{ms}");
    };
    match suite {
        Suite::Lemma32 => {
            for i in 0..instances {
                let d = 2 + i % 2;
                let n = if d == 2 { 9 } else { 11 };
                let start = Instant::now();
                let pts = generators::random_homogeneous(n, d, seed.wrapping_add(i as u64));
                let seq = PointSequence::new(d, pts)?;
                let ok = tverberg::point_selection_check(&seq)?;
                row("lemma32", i, n, d, "", u8::from(ok).to_string(), ok, start.elapsed().as_millis());
            }
        }
        Suite::Lemma51 => {
            let cases = [2, 3, 4].map(|q| (3usize, Scalar::new(1.into(), q.into())));
            for i in 0..instances {
                let (arity, eps) = &cases[i % cases.len()];
                let start = Instant::now();
                let fam = chains::build_family(*arity, eps, None)?;
                let opts = VerifyOptions {
                    samples: 1000,
                    local_search_restarts: 5,
                    seed: seed.wrapping_add(i as u64),
                    ..VerifyOptions::default()
                };
                let rep = chains::verify_family(&fam, &opts)?;
                row(
                    "lemma51",
                    i,
                    fam.ambient,
                    *arity,
                    &format_scalar(eps),
                    format_scalar(&rep.worst_margin),
                    rep.verified(),
                    start.elapsed().as_millis(),
                );
            }
        }
        Suite::Pipeline => {
            let eps = Scalar::new(1.into(), 2.into());
            for i in 0..instances {
                let start = Instant::now();
                let n = 8 + i % 5;
                let spec = GeneratorSpec::new(GeneratorKind::Moment, n, 2);
                let p = generators::generate(&spec)?;
                let opts = ParamOptions {
                    t: Some(8),
                    u: Some(1),
                    ..ParamOptions::default()
                };
                let params = pipeline::compute_params(2, &eps, Mode::Empirical, &opts)?;
                let (w, _) = pipeline::approximate(&p, &eps, &params, seed.wrapping_add(i as u64))?;
                let rep = discrepancy::one_sided_discrepancy_exact(&p, &w)?;
                row(
                    "pipeline",
                    i,
                    n,
                    2,
                    &format_scalar(&eps),
                    format_scalar(&rep.value),
                    rep.value <= eps,
                    start.elapsed().as_millis(),
                );
            }
        }
    }
    Ok(csv)
}

/// Reads an approximant file (multiplicities optional).
pub fn read_weighted(path: &Path) -> Result<WeightedPointSet> {
    PointSetFile::read(path)?.to_weighted()
}
