//! Iterative scaling of a similarity matrix towards an epsilon-bi-stochastic
//! matrix `B = D1 * S * D2`, where `D1 = diag(x)` and `D2 = diag(y)` have
//! their last diagonal entries pinned to 1.
//!
//! Two equivalent solvers are provided. [`sinkhorn_d1d2`] iterates on the
//! scaling vectors only and forms `B` once at the end; it stops when the
//! ratios `x_{p+1}/x_p` and `y_{p+1}/y_p` are within `tol` of 1.
//! [`sinkhorn_sp`] rescales a working copy of the matrix in place, stops on
//! the deviation of the interior row and column sums from 1, and completes the
//! epsilon row from the interior column sums.
//!
//! [`classic_sinkhorn`] is the ordinary square Sinkhorn-Knopp iteration
//! without pinned entries, kept as the baseline for the classical assignment
//! problem.

use crate::error::{Error, Result};
use crate::matrix::{
    col_residual, objective, row_residual, validate_similarity, EpsMatrix, Role, SquareMatrix,
    Violation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    D1D2,
    Sp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Maximum number of full (row + column) sweeps. Zero returns the
    /// initial state unconverged.
    pub max_iter: usize,
    /// Absolute stopping tolerance.
    pub tol: f64,
    pub mode: Mode,
    /// When false, nonpositive epsilon row/column entries are accepted.
    /// Convergence is then not guaranteed.
    pub require_positive_edits: bool,
    /// Record per-iteration residuals in the report.
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            tol: 1e-6,
            mode: Mode::D1D2,
            require_positive_edits: true,
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn new(mode: Mode, tol: f64, max_iter: usize) -> Self {
        Self {
            mode,
            tol,
            max_iter,
            ..Self::default()
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive and finite, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// The diagonals of `D1` and `D2`. The last entry of each is exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPair {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl ScalingPair {
    /// Length `n + 1`.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Length `m + 1`.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `diag(x) * a * diag(y)` with the corner set to 1.
    pub fn apply(&self, a: &EpsMatrix) -> Result<EpsMatrix> {
        if a.shape() != (self.x.len(), self.y.len()) {
            return Err(Error::ShapeMismatch {
                expected: (self.x.len(), self.y.len()),
                found: a.shape(),
            });
        }
        let (n, m) = (a.n(), a.m());
        a.map(Role::Relaxed, |i, j, v| {
            if i == n && j == m {
                1.0
            } else {
                self.x[i] * v * self.y[j]
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceRecord {
    /// `||x_{p+1}/x_p - 1||_inf` over `i < n` and `||y_{p+1}/y_p - 1||_inf`
    /// over `j < m`.
    Ratio { iteration: usize, x: f64, y: f64 },
    /// Interior column-sum deviation after the row step and interior row-sum
    /// deviation after the column step.
    Sums {
        iteration: usize,
        col: f64,
        row: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<TraceRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub converged: bool,
    pub iterations: usize,
    /// Final `max_i |row_sum_i - 1|` over interior rows of the returned matrix.
    pub row_residual: f64,
    /// Final `max_j |col_sum_j - 1|` over interior columns of the returned matrix.
    pub col_residual: f64,
    /// Similarity sum on the returned matrix.
    pub objective: f64,
    /// Largest magnitude of a negative completed epsilon-row entry that was
    /// clamped to zero (`sinkhorn_sp` only).
    pub clamped: f64,
    pub trace: IterationTrace,
}

fn check_input(s: &EpsMatrix, cfg: &SolverConfig) -> Result<()> {
    cfg.check()?;
    let violations: Vec<Violation> = validate_similarity(s)
        .into_iter()
        .filter(|v| cfg.require_positive_edits || !v.is_edit_positivity())
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInput(violations))
    }
}

fn max_ratio_deviation(new: &[f64], old: &[f64]) -> f64 {
    new.iter()
        .zip(old)
        .map(|(a, b)| (a / b - 1.0).abs())
        .fold(0.0, f64::max)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn all_positive_finite(v: &[f64]) -> bool {
    v.iter().all(|&t| t.is_finite() && t > 0.0)
}

/// Scales `s` by alternating updates of the two scaling vectors.
///
/// Starting from `y = 1`, each sweep sets `x_i = 1 / (S y)_i` for `i < n`
/// and then `y_j = 1 / (S^T x)_j` for `j < m`, keeping `x_n = y_m = 1`.
/// After a `y` update every interior column of `diag(x) S diag(y)` sums to
/// exactly 1 and interior row `i` sums to `(S y_{p+1})_i / (S y_p)_i`, so the
/// row-stochastic and column-stochastic matrices driving the recursion are
/// never formed: their sums are the traced ratio residuals.
///
/// The returned matrix has its corner set to 1. When the iteration budget is
/// exhausted the last iterate is returned with `converged = false`.
pub fn sinkhorn_d1d2(
    s: &EpsMatrix,
    cfg: &SolverConfig,
) -> Result<(ScalingPair, EpsMatrix, SolveReport)> {
    check_input(s, cfg)?;
    let (n, m) = (s.n(), s.m());
    let mut x = vec![1.0; n + 1];
    let mut y = vec![1.0; m + 1];
    let mut x_next = vec![0.0; n + 1];
    let mut y_next = vec![0.0; m + 1];
    let mut trace = IterationTrace::default();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter && !converged {
        for (i, xi) in x_next[..n].iter_mut().enumerate() {
            *xi = 1.0 / dot(s.row(i), &y);
        }
        x_next[n] = 1.0;

        y_next.fill(0.0);
        for (i, &xi) in x_next.iter().enumerate() {
            for (acc, &a) in y_next[..m].iter_mut().zip(s.row(i)) {
                *acc += xi * a;
            }
        }
        for yj in &mut y_next[..m] {
            *yj = 1.0 / *yj;
        }
        y_next[m] = 1.0;

        if !all_positive_finite(&x_next) || !all_positive_finite(&y_next) {
            return Err(Error::NonFinite {
                iteration: iterations,
            });
        }

        // The first sweep has no previous x to compare against.
        let check = iterations >= 1;
        let dx = max_ratio_deviation(&x_next[..n], &x[..n]);
        let dy = max_ratio_deviation(&y_next[..m], &y[..m]);
        std::mem::swap(&mut x, &mut x_next);
        std::mem::swap(&mut y, &mut y_next);
        if check {
            if cfg.trace {
                trace.records.push(TraceRecord::Ratio {
                    iteration: iterations,
                    x: dx,
                    y: dy,
                });
            }
            converged = dx <= cfg.tol && dy <= cfg.tol && {
                let worst_row = (0..n)
                    .map(|i| (x[i] * dot(s.row(i), &y) - 1.0).abs())
                    .fold(0.0, f64::max);
                worst_row <= cfg.tol
            };
        }
        iterations += 1;
    }

    let pair = ScalingPair { x, y };
    let b = pair.apply(s)?;
    let report = SolveReport {
        converged,
        iterations,
        row_residual: row_residual(&b),
        col_residual: col_residual(&b),
        objective: objective(s, &b)?,
        clamped: 0.0,
        trace,
    };
    Ok((pair, b, report))
}

/// Divides each interior row by its full sum (epsilon column included).
fn normalize_rows(w: &mut EpsMatrix, iteration: usize) -> Result<()> {
    for i in 0..w.n() {
        let row = w.row_mut(i);
        let sum: f64 = row.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::NonFinite { iteration });
        }
        let inv = 1.0 / sum;
        for v in row {
            *v *= inv;
        }
    }
    Ok(())
}

/// Divides each interior column by its full sum (epsilon row included).
fn normalize_cols(w: &mut EpsMatrix, iteration: usize) -> Result<()> {
    let (n, m) = (w.n(), w.m());
    let mut sums = vec![0.0; m];
    for i in 0..=n {
        for (acc, &v) in sums.iter_mut().zip(w.row(i)) {
            *acc += v;
        }
    }
    if !all_positive_finite(&sums) {
        return Err(Error::NonFinite { iteration });
    }
    let inv: Vec<f64> = sums.iter().map(|s| 1.0 / s).collect();
    for i in 0..=n {
        for (v, f) in w.row_mut(i).iter_mut().zip(&inv) {
            *v *= f;
        }
    }
    Ok(())
}

/// Scales a working copy of `s` by alternating row and column normalization,
/// leaving the epsilon row and column out of their respective steps.
///
/// After the loop, interior rows are normalized once more, the epsilon row is
/// overwritten with `1 - (interior column sum)` and the corner with 1, so
/// interior columns sum to 1 by construction. Completed entries in
/// `[-10 tol, 0)` are clamped to 0 and the interior of that column is divided
/// by its sum, keeping the column sum at 1 (the largest clamp magnitude is
/// reported as `clamped`); anything lower is a [`Error::NegativeCompletion`].
pub fn sinkhorn_sp(s: &EpsMatrix, cfg: &SolverConfig) -> Result<(EpsMatrix, SolveReport)> {
    check_input(s, cfg)?;
    let (n, m) = (s.n(), s.m());
    let mut w = s.clone().with_role(Role::Relaxed);
    let mut trace = IterationTrace::default();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter && !converged {
        normalize_rows(&mut w, iterations)?;
        let col_dev = col_residual(&w);
        normalize_cols(&mut w, iterations)?;
        let row_dev = row_residual(&w);
        if cfg.trace {
            trace.records.push(TraceRecord::Sums {
                iteration: iterations,
                col: col_dev,
                row: row_dev,
            });
        }
        converged = col_dev <= cfg.tol && row_dev <= cfg.tol;
        iterations += 1;
    }

    normalize_rows(&mut w, iterations)?;
    let mut clamped: f64 = 0.0;
    for j in 0..m {
        let interior: f64 = (0..n).map(|i| w.get(i, j)).sum();
        let mut v = 1.0 - interior;
        if v < 0.0 {
            if v < -10.0 * cfg.tol {
                return Err(Error::NegativeCompletion { col: j, value: v });
            }
            clamped = clamped.max(-v);
            v = 0.0;
            let inv = 1.0 / interior;
            for i in 0..n {
                let x = w.get(i, j);
                w.set(i, j, x * inv);
            }
        }
        w.set(n, j, v);
    }
    w.set(n, m, 1.0);

    let row_res = row_residual(&w);
    let col_res = col_residual(&w);
    let report = SolveReport {
        converged: converged && row_res.max(col_res) <= cfg.tol,
        iterations,
        row_residual: row_res,
        col_residual: col_res,
        objective: objective(s, &w)?,
        clamped,
        trace,
    };
    Ok((w, report))
}

/// Runs the solver selected by `cfg.mode` and returns the scaled matrix.
pub fn solve(s: &EpsMatrix, cfg: &SolverConfig) -> Result<(EpsMatrix, SolveReport)> {
    match cfg.mode {
        Mode::D1D2 => sinkhorn_d1d2(s, cfg).map(|(_, b, r)| (b, r)),
        Mode::Sp => sinkhorn_sp(s, cfg),
    }
}

/// Alternating row/column normalization of a square nonnegative matrix until
/// every row and column sum is within `tol` of 1.
pub fn classic_sinkhorn(
    s: &SquareMatrix,
    cfg: &SolverConfig,
) -> Result<(SquareMatrix, SolveReport)> {
    cfg.check()?;
    let n = s.n();
    if let Some(v) = s.as_slice().iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidMatrix(format!(
            "entries must be finite and nonnegative, found {v}"
        )));
    }
    let mut violations = Vec::new();
    for i in 0..n {
        if s.row(i).iter().all(|&v| v == 0.0) {
            violations.push(Violation::ZeroRow(i));
        }
    }
    for j in 0..n {
        if (0..n).all(|i| s.get(i, j) == 0.0) {
            violations.push(Violation::ZeroColumn(j));
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidInput(violations));
    }

    let mut w = s.clone();
    let mut trace = IterationTrace::default();
    let mut converged = false;
    let mut iterations = 0;
    let deviations = |w: &SquareMatrix| {
        let row = (0..n)
            .map(|i| (w.row_sum(i) - 1.0).abs())
            .fold(0.0, f64::max);
        let col = (0..n)
            .map(|j| (w.col_sum(j) - 1.0).abs())
            .fold(0.0, f64::max);
        (row, col)
    };

    while iterations < cfg.max_iter && !converged {
        for i in 0..n {
            let row = w.row_mut(i);
            let sum: f64 = row.iter().sum();
            if !(sum > 0.0 && sum.is_finite()) {
                return Err(Error::NonFinite {
                    iteration: iterations,
                });
            }
            row.iter_mut().for_each(|v| *v /= sum);
        }
        let sums: Vec<f64> = (0..n).map(|j| w.col_sum(j)).collect();
        if !all_positive_finite(&sums) {
            return Err(Error::NonFinite {
                iteration: iterations,
            });
        }
        for i in 0..n {
            for (v, c) in w.row_mut(i).iter_mut().zip(&sums) {
                *v /= c;
            }
        }
        let (row, col) = deviations(&w);
        if cfg.trace {
            trace.records.push(TraceRecord::Sums {
                iteration: iterations,
                col,
                row,
            });
        }
        converged = row <= cfg.tol && col <= cfg.tol;
        iterations += 1;
    }

    let (row, col) = deviations(&w);
    let report = SolveReport {
        converged,
        iterations,
        row_residual: row,
        col_residual: col,
        objective: s.dot(&w)?,
        clamped: 0.0,
        trace,
    };
    Ok((w, report))
}
