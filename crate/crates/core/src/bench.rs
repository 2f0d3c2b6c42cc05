//! Random instances, relative-error experiments, CPU timing and the CSV
//! results table.
//!
//! Instances have interior similarities uniform in `[1, 2)`, edit
//! similarities `h * U[0, 1)` and a zero corner. The error of a relaxed
//! solution `B` on instance `S` is `(opt - <S, B>) / opt`, where `opt` is the
//! exact maximum. Simplified runs scale the simplified matrix but are scored
//! on the original one.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::assignment::assignment_to_matrix;
use crate::error::{Error, Result};
use crate::matrix::{objective, EpsMatrix, Role, SquareMatrix};
use crate::oracle::{exact_lsape, hungarian_lsap, round_to_assignment, Sense};
use crate::rng::{derive_seed, Rng};
use crate::scaling::{classic_sinkhorn, solve, Mode, SolverConfig};
use crate::transform::simplify;

/// Replacement value for dominated substitutions in simplified runs.
pub const DEFAULT_FLOOR: f64 = 1e-4;

pub const CSV_HEADER: &str = "algo,n,m,h,simplify,trials,mean_rel_error,std_rel_error,mean_iterations,mean_runtime_ms,failures";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub m: usize,
    /// Scale of the edit similarities.
    pub h: f64,
    pub seed: u64,
}

/// Draws an instance row-major: interior entries `1 + U`, edit entries
/// `h * U`. The corner is 0 and consumes no draw. With `h = 0` the result
/// fails [`crate::matrix::validate_similarity`].
pub fn generate(cfg: &GenConfig) -> Result<EpsMatrix> {
    if !(cfg.h >= 0.0 && cfg.h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "h must be nonnegative, got {}",
            cfg.h
        )));
    }
    let (n, m) = (cfg.n, cfg.m);
    let mut rng = Rng::new(cfg.seed);
    let mut data = Vec::with_capacity((n + 1) * (m + 1));
    for i in 0..=n {
        for j in 0..=m {
            data.push(match (i == n, j == m) {
                (false, false) => rng.uniform(1.0, 2.0),
                (true, true) => 0.0,
                _ => cfg.h * rng.next_f64(),
            });
        }
    }
    EpsMatrix::new(n, m, data, Role::Similarity)
}

/// Square `n x n` matrix uniform in `[1, 2)`.
pub fn generate_lsap(n: usize, seed: u64) -> Result<SquareMatrix> {
    let mut rng = Rng::new(seed);
    SquareMatrix::new(n, (0..n * n).map(|_| rng.uniform(1.0, 2.0)).collect())
}

/// `(exact - approx) / exact`.
pub fn relative_error(approx: f64, exact: f64) -> Result<f64> {
    if exact.is_nan() || exact <= 0.0 {
        return Err(Error::DivisionByZero(exact));
    }
    Ok((exact - approx) / exact)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    D1D2,
    Sp,
    /// Square Sinkhorn against the classical assignment optimum.
    ClassicSinkhornLsap,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::D1D2 => "d1d2",
            Algorithm::Sp => "sp",
            Algorithm::ClassicSinkhornLsap => "classic",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d1d2" => Ok(Algorithm::D1D2),
            "sp" => Ok(Algorithm::Sp),
            "classic" => Ok(Algorithm::ClassicSinkhornLsap),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// How a relaxed output is scored against the optimum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErrorMetric {
    /// Similarity sum of the relaxed matrix itself.
    #[default]
    Continuous,
    /// Similarity sum of the assignment obtained by rounding the output.
    Rounded,
    /// Relative excess of the balanced-scheme cost over the minimum cost.
    CostSpace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub sizes: Vec<(usize, usize)>,
    pub h_values: Vec<f64>,
    pub trials: usize,
    pub simplify: bool,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Tolerance and iteration budget; the mode is taken from `algorithm`.
    pub solver: SolverConfig,
    pub metric: ErrorMetric,
    pub floor: f64,
}

impl ExperimentConfig {
    pub fn new(
        algorithm: Algorithm,
        sizes: Vec<(usize, usize)>,
        h_values: Vec<f64>,
        trials: usize,
    ) -> Self {
        Self {
            sizes,
            h_values,
            trials,
            simplify: false,
            algorithm,
            seed: 0,
            solver: SolverConfig::default(),
            metric: ErrorMetric::Continuous,
            floor: DEFAULT_FLOOR,
        }
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if let Some(&(n, m)) = self.sizes.iter().find(|(n, m)| *n == 0 || *m == 0) {
            return Err(Error::InvalidArgument(format!("invalid size {n}x{m}")));
        }
        if self.algorithm == Algorithm::ClassicSinkhornLsap {
            if let Some(&(n, m)) = self.sizes.iter().find(|(n, m)| n != m) {
                return Err(Error::InvalidArgument(format!(
                    "classic Sinkhorn needs square sizes, got {n}x{m}"
                )));
            }
        }
        Ok(())
    }

    fn solver_config(&self) -> SolverConfig {
        let mut cfg = self.solver.clone();
        cfg.mode = match self.algorithm {
            Algorithm::Sp => Mode::Sp,
            _ => Mode::D1D2,
        };
        cfg
    }
}

/// Aggregate over one `(size, h)` cell. Means and the sample standard
/// deviation are taken over the trials that did not fail.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialStats {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub h: f64,
    pub simplify: bool,
    pub trials: usize,
    pub mean_rel_error: f64,
    pub std_rel_error: f64,
    pub mean_iterations: f64,
    /// Mean solve wall-clock in milliseconds; 0 outside [`timing`].
    pub mean_runtime_ms: f64,
    pub failures: usize,
}

/// Result of a single trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    pub rel_error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub runtime: Duration,
}

/// A generated instance, ready to solve and score.
enum Instance {
    Edit {
        original: EpsMatrix,
        input: EpsMatrix,
    },
    Square(SquareMatrix),
}

fn instance(cfg: &ExperimentConfig, size: usize, h: usize, trial: usize) -> Result<Instance> {
    let seed = derive_seed(cfg.seed, size as u64, h as u64, trial as u64);
    let (n, m) = cfg.sizes[size];
    match cfg.algorithm {
        Algorithm::ClassicSinkhornLsap => Ok(Instance::Square(generate_lsap(n, seed)?)),
        _ => {
            let original = generate(&GenConfig {
                n,
                m,
                h: cfg.h_values[h],
                seed,
            })?;
            let input = if cfg.simplify {
                simplify(&original, cfg.floor).0
            } else {
                original.clone()
            };
            Ok(Instance::Edit { original, input })
        }
    }
}

fn cost_space_error(approx: f64, exact: f64, q: f64) -> Result<f64> {
    let (approx_cost, exact_cost) = (q - approx, q - exact);
    if exact_cost.is_nan() || exact_cost <= 0.0 {
        return Err(Error::DivisionByZero(exact_cost));
    }
    Ok((approx_cost - exact_cost) / exact_cost)
}

fn score(cfg: &ExperimentConfig, inst: &Instance, solver: &SolverConfig) -> Result<TrialOutcome> {
    match inst {
        Instance::Edit { original, input } => {
            let start = Instant::now();
            let (b, report) = solve(input, solver)?;
            let runtime = start.elapsed();
            let exact = exact_lsape(original, Sense::Max)?.value;
            let approx = match cfg.metric {
                ErrorMetric::Rounded => {
                    let a = round_to_assignment(&b, Sense::Max)?;
                    objective(original, &assignment_to_matrix(&a))?
                }
                _ => objective(original, &b)?,
            };
            let rel_error = match cfg.metric {
                ErrorMetric::CostSpace => {
                    let c = original.max_entry() + 1.0;
                    cost_space_error(approx, exact, c * (original.n() + original.m()) as f64)?
                }
                _ => relative_error(approx, exact)?,
            };
            Ok(TrialOutcome {
                rel_error,
                iterations: report.iterations,
                converged: report.converged,
                runtime,
            })
        }
        Instance::Square(w) => {
            let start = Instant::now();
            let (b, report) = classic_sinkhorn(w, solver)?;
            let runtime = start.elapsed();
            let (_, exact) = hungarian_lsap(w, Sense::Max)?;
            let approx = match cfg.metric {
                ErrorMetric::Rounded => {
                    let (perm, _) = hungarian_lsap(&b, Sense::Max)?;
                    perm.iter().enumerate().map(|(i, &j)| w.get(i, j)).sum()
                }
                _ => w.dot(&b)?,
            };
            let rel_error = match cfg.metric {
                ErrorMetric::CostSpace => {
                    let c = w
                        .as_slice()
                        .iter()
                        .copied()
                        .fold(f64::NEG_INFINITY, f64::max)
                        + 1.0;
                    cost_space_error(approx, exact, c * w.n() as f64)?
                }
                _ => relative_error(approx, exact)?,
            };
            Ok(TrialOutcome {
                rel_error,
                iterations: report.iterations,
                converged: report.converged,
                runtime,
            })
        }
    }
}

/// Runs trial `trial` of cell `(size, h)`; the instance depends only on the
/// master seed and these three indices.
pub fn run_trial(
    cfg: &ExperimentConfig,
    size: usize,
    h: usize,
    trial: usize,
) -> Result<TrialOutcome> {
    let inst = instance(cfg, size, h, trial)?;
    score(cfg, &inst, &cfg.solver_config())
}

fn aggregate(
    cfg: &ExperimentConfig,
    size: usize,
    h: usize,
    outcomes: &[Result<TrialOutcome>],
    keep_runtime: bool,
) -> TrialStats {
    let ok: Vec<&TrialOutcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let count = ok.len() as f64;
    let mean = |f: &dyn Fn(&TrialOutcome) -> f64| {
        if ok.is_empty() {
            f64::NAN
        } else {
            ok.iter().map(|o| f(o)).sum::<f64>() / count
        }
    };
    let mean_rel_error = mean(&|o| o.rel_error);
    let std_rel_error = if ok.len() < 2 {
        0.0
    } else {
        let ss: f64 = ok
            .iter()
            .map(|o| (o.rel_error - mean_rel_error).powi(2))
            .sum();
        (ss / (count - 1.0)).sqrt()
    };
    let (n, m) = cfg.sizes[size];
    TrialStats {
        algorithm: cfg.algorithm,
        n,
        m,
        h: if cfg.algorithm == Algorithm::ClassicSinkhornLsap {
            0.0
        } else {
            cfg.h_values[h]
        },
        simplify: cfg.simplify,
        trials: outcomes.len(),
        mean_rel_error,
        std_rel_error,
        mean_iterations: mean(&|o| o.iterations as f64),
        mean_runtime_ms: if keep_runtime {
            mean(&|o| o.runtime.as_secs_f64() * 1e3)
        } else {
            0.0
        },
        failures: outcomes.len() - ok.len(),
    }
}

/// Cells in `(size, h)` order. Classical runs ignore `h_values` and produce
/// one cell per size.
fn cells(cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    let hs = if cfg.algorithm == Algorithm::ClassicSinkhornLsap {
        1
    } else {
        cfg.h_values.len()
    };
    (0..cfg.sizes.len())
        .flat_map(|s| (0..hs).map(move |h| (s, h)))
        .collect()
}

/// Relative-error experiment. Trials of a cell run in parallel; results are
/// aggregated in trial order, so the output does not depend on scheduling.
/// Failed trials are counted, not propagated. Runtimes are not recorded.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialStats>> {
    run_experiment_with(cfg, |_| {})
}

/// [`run_experiment`] with a callback invoked after each cell.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    mut on_cell: impl FnMut(&TrialStats),
) -> Result<Vec<TrialStats>> {
    cfg.check()?;
    let mut out = Vec::new();
    for (size, h) in cells(cfg) {
        let outcomes: Vec<Result<TrialOutcome>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, size, h, t))
            .collect();
        let stats = aggregate(cfg, size, h, &outcomes, false);
        on_cell(&stats);
        out.push(stats);
    }
    Ok(out)
}

const WARMUP_RUNS: usize = 3;

/// Per-trial solve times of one cell, measured serially after three
/// discarded warm-up solves.
pub fn cell_runtimes(cfg: &ExperimentConfig, size: usize, h: usize) -> Result<Vec<Duration>> {
    Ok(time_cell(cfg, size, h)?
        .into_iter()
        .map(|o| o.map_or(Duration::ZERO, |o| o.runtime))
        .collect())
}

fn time_cell(cfg: &ExperimentConfig, size: usize, h: usize) -> Result<Vec<Result<TrialOutcome>>> {
    cfg.check()?;
    let solver = cfg.solver_config();
    let warm = instance(cfg, size, h, 0)?;
    for _ in 0..WARMUP_RUNS {
        let _ = match &warm {
            Instance::Edit { input, .. } => solve(input, &solver).map(|_| ()),
            Instance::Square(w) => classic_sinkhorn(w, &solver).map(|_| ()),
        };
    }
    Ok((0..cfg.trials)
        .map(|t| instance(cfg, size, h, t).and_then(|inst| score(cfg, &inst, &solver)))
        .collect())
}

/// Like [`run_experiment`] but strictly serial, with warm-up, and recording
/// the mean wall-clock of each solve.
pub fn timing(cfg: &ExperimentConfig) -> Result<Vec<TrialStats>> {
    timing_with(cfg, |_| {})
}

pub fn timing_with(
    cfg: &ExperimentConfig,
    mut on_cell: impl FnMut(&TrialStats),
) -> Result<Vec<TrialStats>> {
    cfg.check()?;
    let mut out = Vec::new();
    for (size, h) in cells(cfg) {
        let outcomes = time_cell(cfg, size, h)?;
        let stats = aggregate(cfg, size, h, &outcomes, true);
        on_cell(&stats);
        out.push(stats);
    }
    Ok(out)
}

/// Formats with 9 significant digits, then prints the shortest decimal that
/// reads back to that rounded value.
fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float");
    format!("{rounded}")
}

pub fn write_csv(mut out: impl Write, rows: &[TrialStats]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.n,
            r.m,
            sig9(r.h),
            r.simplify,
            r.trials,
            sig9(r.mean_rel_error),
            sig9(r.std_rel_error),
            sig9(r.mean_iterations),
            sig9(r.mean_runtime_ms),
            r.failures
        )?;
    }
    Ok(())
}

pub fn read_csv(reader: impl BufRead) -> Result<Vec<TrialStats>> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: "unexpected CSV header".into(),
        });
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let no = k + 2;
        let bad = |what: &str| Error::Parse {
            line: no,
            message: format!("invalid {what}"),
        };
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 11 {
            return Err(bad("field count"));
        }
        let float = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(what));
        let int = |s: &str, what: &str| s.parse::<usize>().map_err(|_| bad(what));
        rows.push(TrialStats {
            algorithm: f[0].parse().map_err(|_| bad("algo"))?,
            n: int(f[1], "n")?,
            m: int(f[2], "m")?,
            h: float(f[3], "h")?,
            simplify: f[4].parse().map_err(|_| bad("simplify"))?,
            trials: int(f[5], "trials")?,
            mean_rel_error: float(f[6], "mean_rel_error")?,
            std_rel_error: float(f[7], "std_rel_error")?,
            mean_iterations: float(f[8], "mean_iterations")?,
            mean_runtime_ms: float(f[9], "mean_runtime_ms")?,
            failures: int(f[10], "failures")?,
        });
    }
    Ok(rows)
}
