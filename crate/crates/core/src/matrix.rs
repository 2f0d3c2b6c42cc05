//! Dense `(n+1) x (m+1)` matrices with a trailing epsilon row and column.
//!
//! Storage is row-major and 0-based. For a matrix over `n` sources and `m`
//! targets, rows `0..n` and columns `0..m` form the interior, row `n` is the
//! epsilon row (insertions), column `m` is the epsilon column (deletions) and
//! `(n, m)` is the epsilon-epsilon corner.

use std::fmt;

use crate::error::{Error, Result};

/// What the entries of an [`EpsMatrix`] mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Similarity,
    Cost,
    /// Output of a relaxation (or a 0/1 assignment matrix).
    Relaxed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsMatrix {
    n: usize,
    m: usize,
    data: Vec<f64>,
    role: Role,
}

impl EpsMatrix {
    /// Builds a matrix from row-major data of length `(n+1)*(m+1)`.
    ///
    /// Every entry must be finite, and similarity matrices must be
    /// nonnegative. Cost matrices may carry negative entries: the reductions
    /// that produce them subtract similarities from a structured constant and
    /// the epsilon blocks can go below zero.
    pub fn new(n: usize, m: usize, data: Vec<f64>, role: Role) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidMatrix(format!(
                "n and m must be positive, got {n}x{m}"
            )));
        }
        if data.len() != (n + 1) * (m + 1) {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                (n + 1) * (m + 1),
                n + 1,
                m + 1,
                data.len()
            )));
        }
        let cols = m + 1;
        for (k, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!(
                    "non-finite entry at ({}, {})",
                    k / cols + 1,
                    k % cols + 1
                )));
            }
            if role == Role::Similarity && v < 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "negative similarity {v} at ({}, {})",
                    k / cols + 1,
                    k % cols + 1
                )));
            }
        }
        Ok(Self { n, m, data, role })
    }

    pub fn from_rows(rows: &[Vec<f64>], role: Role) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidMatrix("need at least two rows".into()));
        }
        let cols = rows[0].len();
        if cols < 2 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidMatrix("ragged or too narrow rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Self::new(rows.len() - 1, cols - 1, data, role)
    }

    pub fn zeros(n: usize, m: usize, role: Role) -> Result<Self> {
        Self::new(n, m, vec![0.0; (n + 1) * (m + 1)], role)
    }

    /// Number of real source elements (interior rows).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of real target elements (interior columns).
    pub fn m(&self) -> usize {
        self.m
    }

    /// `(n + 1, m + 1)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.n + 1, self.m + 1)
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.m + 1) + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        let cols = self.m + 1;
        self.data[i * cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let cols = self.m + 1;
        &self.data[i * cols..(i + 1) * cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let cols = self.m + 1;
        &mut self.data[i * cols..(i + 1) * cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn corner(&self) -> f64 {
        self.get(self.n, self.m)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> f64 {
        (0..=self.n).map(|i| self.get(i, j)).sum()
    }

    /// Applies `f` to every entry, keeping the shape. Validity of the result
    /// for `role` is checked.
    pub(crate) fn map(&self, role: Role, f: impl Fn(usize, usize, f64) -> f64) -> Result<Self> {
        let cols = self.m + 1;
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(k, &v)| f(k / cols, k % cols, v))
            .collect();
        Self::new(self.n, self.m, data, role)
    }
}

/// A rule broken by a candidate similarity matrix. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotSimilarity,
    ZeroRow(usize),
    ZeroColumn(usize),
    /// Entry `(n, j)` of the epsilon row is not strictly positive.
    EpsRowNonPositive(usize),
    /// Entry `(i, m)` of the epsilon column is not strictly positive.
    EpsColumnNonPositive(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotSimilarity => write!(f, "matrix role is not similarity"),
            Violation::ZeroRow(i) => write!(f, "interior row {} is all zero", i + 1),
            Violation::ZeroColumn(j) => write!(f, "interior column {} is all zero", j + 1),
            Violation::EpsRowNonPositive(j) => {
                write!(f, "ε-row entry nonpositive at column {}", j + 1)
            }
            Violation::EpsColumnNonPositive(i) => {
                write!(f, "ε-column entry nonpositive at row {}", i + 1)
            }
        }
    }
}

impl Violation {
    /// Violations of the epsilon row/column positivity rule.
    pub fn is_edit_positivity(&self) -> bool {
        matches!(
            self,
            Violation::EpsRowNonPositive(_) | Violation::EpsColumnNonPositive(_)
        )
    }
}

/// Checks the preconditions of the scaling solvers.
///
/// No interior row or column may be all zero, and every non-corner entry of
/// the epsilon row and column must be strictly positive. The corner is not
/// inspected.
pub fn validate_similarity(s: &EpsMatrix) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.role() != Role::Similarity {
        out.push(Violation::NotSimilarity);
    }
    let (n, m) = (s.n(), s.m());
    for i in 0..n {
        if s.row(i)[..m].iter().all(|&v| v <= 0.0) {
            out.push(Violation::ZeroRow(i));
        }
    }
    for j in 0..m {
        if (0..n).all(|i| s.get(i, j) <= 0.0) {
            out.push(Violation::ZeroColumn(j));
        }
    }
    for j in 0..m {
        if s.get(n, j) <= 0.0 {
            out.push(Violation::EpsRowNonPositive(j));
        }
    }
    for i in 0..n {
        if s.get(i, m) <= 0.0 {
            out.push(Violation::EpsColumnNonPositive(i));
        }
    }
    out
}

/// `sum_{i,j} S[i,j] * X[i,j]` over the full `(n+1) x (m+1)` grid, summed
/// row-major. `X` may be relaxed or binary.
pub fn objective(s: &EpsMatrix, x: &EpsMatrix) -> Result<f64> {
    if s.shape() != x.shape() {
        return Err(Error::ShapeMismatch {
            expected: s.shape(),
            found: x.shape(),
        });
    }
    Ok(s.as_slice()
        .iter()
        .zip(x.as_slice())
        .map(|(a, b)| a * b)
        .sum())
}

/// Interior row sums and interior column sums within `tol` of 1 and the
/// corner within `tol` of 1. The epsilon row and column sums are free.
pub fn is_eps_bistochastic(x: &EpsMatrix, tol: f64) -> bool {
    let (n, m) = (x.n(), x.m());
    if x.as_slice().iter().any(|&v| v < -tol) {
        return false;
    }
    (0..n).all(|i| (x.row_sum(i) - 1.0).abs() <= tol)
        && (0..m).all(|j| (x.col_sum(j) - 1.0).abs() <= tol)
        && (x.corner() - 1.0).abs() <= tol
}

/// Maximum deviation of interior row sums (`i < n`) from 1.
pub fn row_residual(x: &EpsMatrix) -> f64 {
    (0..x.n())
        .map(|i| (x.row_sum(i) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Maximum deviation of interior column sums (`j < m`) from 1.
pub fn col_residual(x: &EpsMatrix) -> f64 {
    (0..x.m())
        .map(|j| (x.col_sum(j) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// A plain square matrix, used for the classical assignment problem and the
/// square reduction of the edit problem.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows do not form a square".into()));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.n;
        &mut self.data[i * n..(i + 1) * n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    /// Row-major `sum W[i,j] * X[i,j]`.
    pub fn dot(&self, other: &SquareMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch {
                expected: (self.n, self.n),
                found: (other.n, other.n),
            });
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }
}
