//! Cost/similarity reductions, the dominated-substitution simplification and
//! entropic sharpening.
//!
//! For a structured matrix `C` with interior entries `2c`, epsilon-row entries
//! `c_lr`, epsilon-column entries `c_lc` and a zero corner, every
//! epsilon-assignment matrix `X` satisfies
//!
//! ```text
//! sum (C - S) * X  =  Q - sum S * X
//! ```
//!
//! with `Q` depending only on the scheme and the sizes, so minimizing the cost
//! `C - S` and maximizing the similarity `S` select the same assignments.

use crate::error::{Error, Result};
use crate::matrix::{EpsMatrix, Role};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// `c_lr = 2c`, `c_lc = 0`; `Q = 2cm`.
    RowLoaded,
    /// `c_lc = 2c`, `c_lr = 0`; `Q = 2cn`.
    ColLoaded,
    /// `c_lr = c_lc = c`; `Q = c(n + m)`. The only layout that keeps every
    /// similarity positive when converting from costs.
    Balanced,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostScheme {
    pub kind: SchemeKind,
    pub c: f64,
}

impl CostScheme {
    pub fn new(kind: SchemeKind, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scheme constant must be positive, got {c}"
            )));
        }
        Ok(Self { kind, c })
    }

    /// `(c_lr, c_lc)`: the epsilon-row and epsilon-column constants.
    pub fn edit_constants(&self) -> (f64, f64) {
        match self.kind {
            SchemeKind::RowLoaded => (2.0 * self.c, 0.0),
            SchemeKind::ColLoaded => (0.0, 2.0 * self.c),
            SchemeKind::Balanced => (self.c, self.c),
        }
    }

    /// The constant `Q` with `cost + similarity = Q` on every assignment.
    pub fn equivalence_constant(&self, n: usize, m: usize) -> f64 {
        let (n, m) = (n as f64, m as f64);
        match self.kind {
            SchemeKind::RowLoaded => 2.0 * self.c * m,
            SchemeKind::ColLoaded => 2.0 * self.c * n,
            SchemeKind::Balanced => self.c * (n + m),
        }
    }
}

/// The structured matrix `C` of `scheme` for `n` sources and `m` targets.
pub fn structured_cost(scheme: &CostScheme, n: usize, m: usize) -> Result<EpsMatrix> {
    let (c_lr, c_lc) = scheme.edit_constants();
    let interior = 2.0 * scheme.c;
    let mut data = Vec::with_capacity((n + 1) * (m + 1));
    for i in 0..=n {
        for j in 0..=m {
            data.push(match (i == n, j == m) {
                (false, false) => interior,
                (true, false) => c_lr,
                (false, true) => c_lc,
                (true, true) => 0.0,
            });
        }
    }
    EpsMatrix::new(n, m, data, Role::Cost)
}

/// Returns `(C - S, Q)`. Requires `c` strictly above every entry of `S`.
pub fn similarity_to_cost(s: &EpsMatrix, scheme: &CostScheme) -> Result<(EpsMatrix, f64)> {
    let max = s.max_entry();
    if scheme.c <= max {
        return Err(Error::ConstantTooSmall { c: scheme.c, max });
    }
    let c = structured_cost(scheme, s.n(), s.m())?;
    let cost = s.map(Role::Cost, |i, j, v| c.get(i, j) - v)?;
    Ok((cost, scheme.equivalence_constant(s.n(), s.m())))
}

/// Converts a nonnegative cost matrix with a zero corner into a similarity
/// matrix under the balanced scheme with `c = max(D) + margin`.
///
/// Returns `(S, Q, c)`. Interior similarities are `2c - d`, edit similarities
/// `c - d`, all at least `margin`, and the corner is 0.
pub fn cost_to_similarity(d: &EpsMatrix, margin: f64) -> Result<(EpsMatrix, f64, f64)> {
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "margin must be positive, got {margin}"
        )));
    }
    if d.corner() != 0.0 {
        return Err(Error::CornerNonzero(d.corner()));
    }
    for i in 0..=d.n() {
        for (j, &v) in d.row(i).iter().enumerate() {
            if v < 0.0 {
                return Err(Error::NegativeCost {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    let c = d.max_entry() + margin;
    let scheme = CostScheme::new(SchemeKind::Balanced, c)?;
    let structured = structured_cost(&scheme, d.n(), d.m())?;
    let s = d.map(Role::Similarity, |i, j, v| structured.get(i, j) - v)?;
    Ok((s, scheme.equivalence_constant(d.n(), d.m()), c))
}

/// Replaces every interior entry dominated by deletion plus insertion
/// (`s[i][j] < s[n][j] + s[i][m]`) with `floor`. Such a substitution never
/// appears in an optimal assignment. Returns the new matrix and the number of
/// replaced entries.
pub fn simplify(s: &EpsMatrix, floor: f64) -> (EpsMatrix, usize) {
    let (n, m) = (s.n(), s.m());
    let mut out = s.clone();
    let mut count = 0;
    for i in 0..n {
        let del = s.get(i, m);
        for j in 0..m {
            if s.get(i, j) < s.get(n, j) + del {
                out.set(i, j, floor);
                count += 1;
            }
        }
    }
    (out, count)
}

/// Elementwise `exp(s / temperature)`.
///
/// The corner is mapped like every other entry, so a zero corner becomes 1.
pub fn sharpen(s: &EpsMatrix, temperature: f64) -> Result<EpsMatrix> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    let cols = s.m() + 1;
    if let Some(k) = s
        .as_slice()
        .iter()
        .position(|v| !(v / temperature).exp().is_finite())
    {
        return Err(Error::Overflow {
            row: k / cols,
            col: k % cols,
        });
    }
    s.map(Role::Similarity, |_, _, v| (v / temperature).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sim(rows: &[Vec<f64>]) -> EpsMatrix {
        EpsMatrix::from_rows(rows, Role::Similarity).unwrap()
    }

    #[test]
    fn balanced_two_by_two() {
        let scheme = CostScheme::new(SchemeKind::Balanced, 1.0).unwrap();
        let c = structured_cost(&scheme, 1, 1).unwrap();
        assert_eq!(c.as_slice(), &[2.0, 1.0, 1.0, 0.0]);
        assert_eq!(scheme.equivalence_constant(1, 1), 2.0);
    }

    #[test]
    fn loaded_schemes_constants() {
        let row = CostScheme::new(SchemeKind::RowLoaded, 1.0).unwrap();
        let col = CostScheme::new(SchemeKind::ColLoaded, 1.0).unwrap();
        assert_eq!(row.equivalence_constant(2, 3), 6.0);
        assert_eq!(col.equivalence_constant(2, 3), 4.0);
        let c = structured_cost(&row, 2, 3).unwrap();
        assert_eq!(c.row(2), &[2.0, 2.0, 2.0, 0.0]);
        assert_eq!(c.get(0, 3), 0.0);
    }

    #[test]
    fn zero_similarity_gives_structured_cost() {
        let s = EpsMatrix::zeros(1, 1, Role::Similarity).unwrap();
        let scheme = CostScheme::new(SchemeKind::Balanced, 1.0).unwrap();
        let (cost, q) = similarity_to_cost(&s, &scheme).unwrap();
        assert_eq!(cost.as_slice(), &[2.0, 1.0, 1.0, 0.0]);
        assert_eq!(q, 2.0);
    }

    #[test]
    fn corner_cost_may_go_negative() {
        let s = EpsMatrix::new(3, 2, vec![0.5; 12], Role::Similarity).unwrap();
        let scheme = CostScheme::new(SchemeKind::Balanced, 1.0).unwrap();
        let (cost, _) = similarity_to_cost(&s, &scheme).unwrap();
        assert_eq!(cost.get(0, 0), 1.5);
        assert_eq!(cost.get(3, 0), 0.5);
        assert_eq!(cost.get(0, 2), 0.5);
        assert_eq!(cost.corner(), -0.5);
    }

    #[test]
    fn constant_must_dominate() {
        let s = EpsMatrix::new(1, 1, vec![1.0, 0.5, 0.5, 0.0], Role::Similarity).unwrap();
        let scheme = CostScheme::new(SchemeKind::Balanced, 1.0).unwrap();
        assert!(matches!(
            similarity_to_cost(&s, &scheme),
            Err(Error::ConstantTooSmall { .. })
        ));
        assert!(CostScheme::new(SchemeKind::Balanced, 0.0).is_err());
    }

    #[test]
    fn cost_to_similarity_of_zero() {
        let d = EpsMatrix::zeros(1, 1, Role::Cost).unwrap();
        let (s, q, c) = cost_to_similarity(&d, 1.0).unwrap();
        assert_eq!(c, 1.0);
        assert_eq!(q, 2.0);
        assert_eq!(s.as_slice(), &[2.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn cost_to_similarity_margin() {
        let d = EpsMatrix::new(1, 2, vec![5.0, 1.0, 2.0, 3.0, 4.0, 0.0], Role::Cost).unwrap();
        let (s, _, c) = cost_to_similarity(&d, 0.5).unwrap();
        assert_eq!(c, 5.5);
        assert!(crate::matrix::validate_similarity(&s).is_empty());
        assert!(s.as_slice()[..5].iter().all(|&v| v > 0.0));
    }

    #[test]
    fn cost_to_similarity_errors() {
        let d = EpsMatrix::new(1, 1, vec![1.0, 1.0, 1.0, 2.0], Role::Cost).unwrap();
        assert!(matches!(
            cost_to_similarity(&d, 1.0),
            Err(Error::CornerNonzero(_))
        ));
        let d = EpsMatrix::new(1, 1, vec![-1.0, 1.0, 1.0, 0.0], Role::Cost).unwrap();
        assert!(matches!(
            cost_to_similarity(&d, 1.0),
            Err(Error::NegativeCost { row: 0, col: 0, .. })
        ));
    }

    #[test]
    fn simplify_leaves_dominant_interior_alone() {
        let s = sim(&[
            vec![2.0, 1.0, 0.4],
            vec![1.0, 2.0, 0.4],
            vec![0.4, 0.4, 0.0],
        ]);
        let (t, count) = simplify(&s, 1e-4);
        assert_eq!(count, 0);
        assert_eq!(t, s);
    }

    #[test]
    fn simplify_fires_on_dominated_entry() {
        let s = sim(&[vec![0.1, 0.3], vec![0.3, 0.0]]);
        let (t, count) = simplify(&s, 1e-4);
        assert_eq!(count, 1);
        assert_eq!(t.get(0, 0), 1e-4);
        assert_eq!(t.row(1), s.row(1));
        assert_eq!(t.get(0, 1), s.get(0, 1));
    }

    #[test]
    fn sharpen_limits() {
        let s = sim(&[vec![100.0, 3.0], vec![50.0, 0.0]]);
        let flat = sharpen(&s, 1e9).unwrap();
        for v in flat.as_slice() {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-6);
        }
        let positive = sim(&[vec![2.5, 0.3], vec![1.7, 0.9]]);
        let logs = positive
            .map(Role::Similarity, |_, _, v| v.ln().max(0.0))
            .unwrap();
        // ln of entries below 1 is negative; only check entries >= 1.
        let back = sharpen(&logs, 1.0).unwrap();
        assert_abs_diff_eq!(back.get(0, 0), 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(back.get(1, 0), 1.7, epsilon = 1e-12);
        assert!(matches!(
            sharpen(&s, 0.01),
            Err(Error::Overflow { row: 0, col: 0 })
        ));
        assert!(sharpen(&s, 0.0).is_err());
    }
}
