//! Command-line front end: `solve`, `convert`, `gen`, `analyze`, `bench`.
//!
//! Results go to files or to standard output as `key=value` lines;
//! diagnostics go to standard error. Exit codes: 0 success, 1 input or usage
//! error, 2 non-convergence (the result is still written), 3 instance beyond
//! the bound of an exhaustive routine.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::assignment::EpsAssignment;
use crate::bench::{self, Algorithm, ErrorMetric, ExperimentConfig, GenConfig, TrialStats};
use crate::error::{Error, Result};
use crate::format;
use crate::matrix::{validate_similarity, EpsMatrix, Role};
use crate::oracle::{self, Sense};
use crate::scaling::{self, Mode, SolveReport, SolverConfig};
use crate::transform::{self, CostScheme, SchemeKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "eps-sinkhorn",
    version,
    about = "Epsilon-bi-stochastic scaling for assignment with edition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scale or solve a similarity matrix.
    Solve(SolveArgs),
    /// Convert between cost and similarity matrices.
    Convert(ConvertArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Report validation, support, total support and secability.
    Analyze(AnalyzeArgs),
    /// Run a relative-error or timing experiment and write a CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveAlgo {
    D1d2,
    Sp,
    Exact,
    Brute,
    Classic,
}

#[derive(Args, Debug)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "d1d2")]
    algo: SolveAlgo,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 1000)]
    max_iter: usize,
    /// Floor dominated substitutions before solving.
    #[arg(long)]
    simplify: bool,
    /// Write the rounded assignment instead of the relaxed matrix.
    #[arg(long)]
    round: bool,
    /// Accept nonpositive epsilon row/column entries.
    #[arg(long = "allow-nonpositive-edits")]
    allow_nonpositive_edits: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    Cost2sim,
    Sim2cost,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Row,
    Col,
    Balanced,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    direction: Direction,
    #[arg(long, value_enum, default_value = "balanced")]
    scheme: SchemeArg,
    /// Scheme constant; required for sim2cost.
    #[arg(long)]
    c: Option<f64>,
    /// Added to the largest cost to form the constant for cost2sim.
    #[arg(long, default_value_t = 1.0)]
    margin: f64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Defaults to n.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Square n x n matrix uniform in [1, 2) for the classical problem.
    #[arg(long)]
    lsap: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    input: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BenchAlgo {
    D1d2,
    Sp,
    Classic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Continuous,
    Rounded,
    Cost,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated sizes, each `N` (square) or `NxM`.
    #[arg(long, default_value = "10,20,30")]
    sizes: String,
    /// Comma-separated edit scales.
    #[arg(long, default_value = "0.1")]
    h: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    simplify: bool,
    #[arg(long, value_enum, default_value = "d1d2")]
    algo: BenchAlgo,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Serial run with warm-up that records solve times.
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value = "continuous")]
    metric: MetricArg,
    #[arg(short, long)]
    output: PathBuf,
}

/// A failed subcommand: its exit code and message.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => EXIT_BOUND,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Convert(a) => cmd_convert(&a, out, err),
        Command::Gen(a) => cmd_gen(&a, err),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

/// Writes through a buffer and only creates the file once the content is
/// ready, so failed commands leave no output behind.
fn write_file(path: &Path, fill: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    fill(&mut buf)?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn print_report(out: &mut dyn Write, algo: &str, r: &SolveReport) -> Result<()> {
    writeln!(out, "algo={algo}")?;
    writeln!(out, "converged={}", r.converged)?;
    writeln!(out, "iterations={}", r.iterations)?;
    writeln!(out, "row_residual={}", r.row_residual)?;
    writeln!(out, "col_residual={}", r.col_residual)?;
    writeln!(out, "objective={}", r.objective)?;
    if r.clamped > 0.0 {
        writeln!(out, "clamped={}", r.clamped)?;
    }
    Ok(())
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut cfg = SolverConfig::new(Mode::D1D2, a.tol, a.max_iter);
    cfg.require_positive_edits = !a.allow_nonpositive_edits;

    if let SolveAlgo::Classic = a.algo {
        let w = format::read_square(open(&a.input)?)?;
        let (b, report) = scaling::classic_sinkhorn(&w, &cfg)?;
        if a.round {
            let (perm, _) = oracle::hungarian_lsap(&b, Sense::Max)?;
            let assignment = EpsAssignment::new(w.n(), perm.into_iter().map(Some).collect())?;
            write_file(&a.output, |buf| format::write_assignment(buf, &assignment))?;
        } else {
            write_file(&a.output, |buf| format::write_square(buf, &b))?;
        }
        print_report(out, "classic", &report)?;
        return Ok(if report.converged {
            EXIT_OK
        } else {
            EXIT_NOT_CONVERGED
        });
    }

    let mut s = format::read_matrix(open(&a.input)?, Role::Similarity)?;
    if a.simplify {
        let (t, count) = transform::simplify(&s, bench::DEFAULT_FLOOR);
        let _ = writeln!(err, "simplified {count} entries");
        s = t;
    }

    let (name, mode) = match a.algo {
        SolveAlgo::Exact | SolveAlgo::Brute => {
            let sol = match a.algo {
                SolveAlgo::Exact => oracle::exact_lsape(&s, Sense::Max)?,
                _ => oracle::brute_force_lsape(&s, Sense::Max)?,
            };
            write_file(&a.output, |buf| {
                format::write_assignment(buf, &sol.assignment)
            })?;
            writeln!(
                out,
                "algo={}",
                if sol.method == oracle::Method::BruteForce {
                    "brute"
                } else {
                    "exact"
                }
            )
            .map_err(Error::from)?;
            writeln!(out, "objective={}", sol.value).map_err(Error::from)?;
            return Ok(EXIT_OK);
        }
        SolveAlgo::Sp => ("sp", Mode::Sp),
        _ => ("d1d2", Mode::D1D2),
    };
    cfg.mode = mode;
    let (b, report) = scaling::solve(&s, &cfg)?;
    if a.round {
        let assignment = oracle::round_to_assignment(&b, Sense::Max)?;
        write_file(&a.output, |buf| format::write_assignment(buf, &assignment))?;
    } else {
        write_file(&a.output, |buf| format::write_matrix(buf, &b))?;
    }
    print_report(out, name, &report)?;
    if !report.converged {
        let _ = writeln!(
            err,
            "warning: no convergence after {} iterations",
            report.iterations
        );
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(EXIT_OK)
}

fn cmd_convert(a: &ConvertArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (result, q, c): (EpsMatrix, f64, f64) = match a.direction {
        Direction::Sim2cost => {
            let Some(c) = a.c else {
                let _ = writeln!(
                    err,
                    "error: --c is required for --direction sim2cost\n\n\
                     Usage: eps-sinkhorn convert <INPUT> --direction sim2cost --c <C> \
                     [--scheme <row|col|balanced>] --output <OUTPUT>"
                );
                return Ok(EXIT_INPUT);
            };
            let kind = match a.scheme {
                SchemeArg::Row => SchemeKind::RowLoaded,
                SchemeArg::Col => SchemeKind::ColLoaded,
                SchemeArg::Balanced => SchemeKind::Balanced,
            };
            let s = format::read_matrix(open(&a.input)?, Role::Similarity)?;
            let (cost, q) = transform::similarity_to_cost(&s, &CostScheme::new(kind, c)?)?;
            (cost, q, c)
        }
        Direction::Cost2sim => {
            let d = format::read_matrix(open(&a.input)?, Role::Cost)?;
            transform::cost_to_similarity(&d, a.margin)?
        }
    };
    write_file(&a.output, |buf| format::write_matrix(buf, &result))?;
    writeln!(out, "Q={q}").map_err(Error::from)?;
    writeln!(out, "c={c}").map_err(Error::from)?;
    Ok(EXIT_OK)
}

fn cmd_gen(a: &GenArgs, err: &mut dyn Write) -> CmdResult {
    if a.lsap {
        let w = bench::generate_lsap(a.n, a.seed)?;
        write_file(&a.output, |buf| format::write_square(buf, &w))?;
        return Ok(EXIT_OK);
    }
    let s = bench::generate(&GenConfig {
        n: a.n,
        m: a.m.unwrap_or(a.n),
        h: a.h,
        seed: a.seed,
    })?;
    let violations = validate_similarity(&s);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            err,
            "warning: generated matrix fails validation: {}",
            text.join("; ")
        );
    }
    write_file(&a.output, |buf| format::write_matrix(buf, &s))?;
    Ok(EXIT_OK)
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> CmdResult {
    let s = format::read_matrix(open(&a.input)?, Role::Similarity)?;
    let violations = validate_similarity(&s);
    let validation = if violations.is_empty() {
        "ok".to_string()
    } else {
        violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    };
    let mut refused: Option<Error> = None;
    let mut line = |key: &str, r: Result<bool>, out: &mut dyn Write| -> Result<()> {
        match r {
            Ok(v) => writeln!(out, "{key}={v}")?,
            Err(e) => refused = Some(e),
        }
        Ok(())
    };
    line("support", oracle::has_support(&s), out)?;
    line("total_support", oracle::has_total_support(&s), out)?;
    line("secable", oracle::is_secable(&s), out)?;
    writeln!(out, "validation={validation}").map_err(Error::from)?;
    match refused {
        Some(e) => Err(e.into()),
        None => Ok(EXIT_OK),
    }
}

fn parse_list<T>(text: &str, item: impl Fn(&str) -> Option<T>, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|f| {
            item(f.trim()).ok_or_else(|| Error::InvalidArgument(format!("invalid {what} `{f}`")))
        })
        .collect()
}

fn parse_size(f: &str) -> Option<(usize, usize)> {
    match f.split_once('x') {
        Some((n, m)) => Some((n.parse().ok()?, m.parse().ok()?)),
        None => f.parse().ok().map(|n| (n, n)),
    }
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let algorithm = match a.algo {
        BenchAlgo::D1d2 => Algorithm::D1D2,
        BenchAlgo::Sp => Algorithm::Sp,
        BenchAlgo::Classic => Algorithm::ClassicSinkhornLsap,
    };
    let mut cfg = ExperimentConfig::new(
        algorithm,
        parse_list(&a.sizes, parse_size, "size")?,
        parse_list(&a.h, |f| f.parse().ok(), "h value")?,
        a.trials,
    );
    cfg.simplify = a.simplify;
    cfg.seed = a.seed;
    cfg.solver = SolverConfig::new(Mode::D1D2, a.tol, a.max_iter);
    cfg.metric = match a.metric {
        MetricArg::Continuous => ErrorMetric::Continuous,
        MetricArg::Rounded => ErrorMetric::Rounded,
        MetricArg::Cost => ErrorMetric::CostSpace,
    };
    let mut summary = |r: &TrialStats| {
        let _ = writeln!(
            out,
            "algo={} n={} m={} h={} simplify={} mean_rel_error={} mean_iterations={} mean_runtime_ms={} failures={}",
            r.algorithm, r.n, r.m, r.h, r.simplify, r.mean_rel_error, r.mean_iterations,
            r.mean_runtime_ms, r.failures
        );
    };
    let rows = if a.timing {
        bench::timing_with(&cfg, &mut summary)?
    } else {
        bench::run_experiment_with(&cfg, &mut summary)?
    };
    write_file(&a.output, |buf| bench::write_csv(buf, &rows))?;
    Ok(EXIT_OK)
}
