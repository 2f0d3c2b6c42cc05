#![allow(dead_code)]

use eps_sinkhorn::{EpsMatrix, Role};
use rand::Rng;

/// Interior uniform in `[1, 2)`, edits uniform in `[0, h)` shifted away from
/// zero, zero corner.
pub fn random_similarity(rng: &mut impl Rng, n: usize, m: usize, h: f64) -> EpsMatrix {
    let mut rows = vec![vec![0.0; m + 1]; n + 1];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = match (i == n, j == m) {
                (false, false) => rng.gen_range(1.0..2.0),
                (true, true) => 0.0,
                _ => h * rng.gen_range(1e-3..1.0),
            };
        }
    }
    EpsMatrix::from_rows(&rows, Role::Similarity).unwrap()
}

pub fn max_abs_diff(a: &EpsMatrix, b: &EpsMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Multiplies interior row `i < n` by `r[i]` and interior column `j < m` by
/// `c[j]`; the epsilon row and column keep factor 1.
pub fn prescale(s: &EpsMatrix, r: &[f64], c: &[f64]) -> EpsMatrix {
    let (n, m) = (s.n(), s.m());
    let rows: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            (0..=m)
                .map(|j| {
                    let fi = if i < n { r[i] } else { 1.0 };
                    let fj = if j < m { c[j] } else { 1.0 };
                    s.get(i, j) * fi * fj
                })
                .collect()
        })
        .collect();
    EpsMatrix::from_rows(&rows, Role::Similarity).unwrap()
}
