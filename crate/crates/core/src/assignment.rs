//! Discrete epsilon-assignments and their 0/1 matrix encoding.

use crate::error::{Error, Result};
use crate::matrix::{EpsMatrix, Role};

/// A matching between `n` sources and `m` targets in which unmatched sources
/// are deleted and unmatched targets are inserted.
///
/// `sub[i]` is `Some(j)` when source `i` is substituted onto target `j`
/// (both 0-based) and `None` when it is deleted. Insertions are every target
/// that no source maps to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpsAssignment {
    m: usize,
    sub: Vec<Option<usize>>,
}

impl EpsAssignment {
    pub fn new(m: usize, sub: Vec<Option<usize>>) -> Result<Self> {
        if sub.is_empty() || m == 0 {
            return Err(Error::InvalidAssignment("n and m must be positive".into()));
        }
        let mut used = vec![false; m];
        for (i, t) in sub.iter().enumerate() {
            if let Some(j) = *t {
                if j >= m {
                    return Err(Error::InvalidAssignment(format!(
                        "source {} maps to target {} but m = {m}",
                        i + 1,
                        j + 1
                    )));
                }
                if std::mem::replace(&mut used[j], true) {
                    return Err(Error::InvalidAssignment(format!(
                        "target {} is used twice",
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { m, sub })
    }

    /// Every source deleted, every target inserted.
    pub fn all_edits(n: usize, m: usize) -> Result<Self> {
        Self::new(m, vec![None; n])
    }

    pub fn n(&self) -> usize {
        self.sub.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn substitutions(&self) -> &[Option<usize>] {
        &self.sub
    }

    pub fn target_of(&self, i: usize) -> Option<usize> {
        self.sub[i]
    }

    pub fn deleted(&self) -> impl Iterator<Item = usize> + '_ {
        self.sub
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.is_none().then_some(i))
    }

    pub fn inserted(&self) -> Vec<usize> {
        let mut used = vec![false; self.m];
        for j in self.sub.iter().flatten() {
            used[*j] = true;
        }
        (0..self.m).filter(|&j| !used[j]).collect()
    }

    /// 1-based code per source: target index, or 0 when deleted. This is the
    /// key used for lexicographic tie-breaking.
    pub fn codes(&self) -> Vec<usize> {
        self.sub.iter().map(|t| t.map_or(0, |j| j + 1)).collect()
    }
}

/// Encodes an assignment as its 0/1 epsilon-assignment matrix.
pub fn assignment_to_matrix(a: &EpsAssignment) -> EpsMatrix {
    let (n, m) = (a.n(), a.m());
    let mut x = EpsMatrix::zeros(n, m, Role::Relaxed).expect("n, m positive");
    for (i, t) in a.substitutions().iter().enumerate() {
        x.set(i, t.unwrap_or(m), 1.0);
    }
    for j in a.inserted() {
        x.set(n, j, 1.0);
    }
    x.set(n, m, 1.0);
    x
}

/// Decodes a 0/1 epsilon-bi-stochastic matrix. Exact comparisons are used:
/// entries must be exactly 0 or 1 and the sums exactly 1.
pub fn matrix_to_assignment(x: &EpsMatrix) -> Result<EpsAssignment> {
    let (n, m) = (x.n(), x.m());
    for i in 0..=n {
        for j in 0..=m {
            let v = x.get(i, j);
            if v != 0.0 && v != 1.0 {
                return Err(Error::NotBinary {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    if x.corner() != 1.0 {
        return Err(Error::NotEpsBistochastic);
    }
    let mut sub = Vec::with_capacity(n);
    for i in 0..n {
        let row = x.row(i);
        if row.iter().filter(|&&v| v == 1.0).count() != 1 {
            return Err(Error::NotEpsBistochastic);
        }
        let j = row.iter().position(|&v| v == 1.0).unwrap();
        sub.push((j < m).then_some(j));
    }
    for j in 0..m {
        if (0..=n).filter(|&i| x.get(i, j) == 1.0).count() != 1 {
            return Err(Error::NotEpsBistochastic);
        }
    }
    EpsAssignment::new(m, sub)
}

/// Calls `visit` on every epsilon-assignment of `n` sources onto `m` targets,
/// in lexicographic order of [`EpsAssignment::codes`].
pub fn for_each_assignment(n: usize, m: usize, mut visit: impl FnMut(&[Option<usize>])) {
    fn rec(
        i: usize,
        m: usize,
        sub: &mut Vec<Option<usize>>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[Option<usize>]),
    ) {
        if i == sub.len() {
            visit(sub);
            return;
        }
        sub[i] = None;
        rec(i + 1, m, sub, used, visit);
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                sub[i] = Some(j);
                rec(i + 1, m, sub, used, visit);
                used[j] = false;
            }
        }
        sub[i] = None;
    }
    let mut sub = vec![None; n];
    let mut used = vec![false; m];
    rec(0, m, &mut sub, &mut used, &mut visit);
}

/// `sum_{k=0}^{min(n,m)} C(n,k) C(m,k) k!`, the number of epsilon-assignments.
pub fn count_assignments(n: usize, m: usize) -> u128 {
    fn binom(a: usize, b: usize) -> u128 {
        (0..b).fold(1u128, |acc, t| acc * (a - t) as u128 / (t as u128 + 1))
    }
    (0..=n.min(m))
        .map(|k| binom(n, k) * binom(m, k) * (1..=k as u128).product::<u128>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_eps_bistochastic;

    fn fig1() -> EpsAssignment {
        // 1 -> b, 2 -> a, 3 deleted.
        EpsAssignment::new(2, vec![Some(1), Some(0), None]).unwrap()
    }

    fn fig1_matrix() -> EpsMatrix {
        EpsMatrix::from_rows(
            &[
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0],
            ],
            Role::Relaxed,
        )
        .unwrap()
    }

    #[test]
    fn mixed_assignment_encoding() {
        let x = assignment_to_matrix(&fig1());
        assert_eq!(x, fig1_matrix());
        assert!(is_eps_bistochastic(&x, 0.0));
        assert_eq!(matrix_to_assignment(&fig1_matrix()).unwrap(), fig1());
    }

    #[test]
    fn single_substitution() {
        let a = EpsAssignment::new(1, vec![Some(0)]).unwrap();
        let x = assignment_to_matrix(&a);
        assert_eq!(x.as_slice(), &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(matrix_to_assignment(&x).unwrap(), a);
    }

    #[test]
    fn all_edits() {
        let a = EpsAssignment::all_edits(2, 1).unwrap();
        let x = assignment_to_matrix(&a);
        assert_eq!(x.as_slice(), &[0.0, 1.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(a.inserted(), vec![0]);
        assert_eq!(a.deleted().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn invalid_assignments() {
        assert!(EpsAssignment::new(2, vec![Some(0), Some(0)]).is_err());
        assert!(EpsAssignment::new(2, vec![Some(2)]).is_err());
        assert!(EpsAssignment::new(0, vec![None]).is_err());
    }

    #[test]
    fn decoding_errors() {
        let mut x = fig1_matrix();
        x.set(0, 0, 0.5);
        assert!(matches!(
            matrix_to_assignment(&x),
            Err(Error::NotBinary { row: 0, col: 0, .. })
        ));
        let mut x = fig1_matrix();
        x.set(0, 0, 1.0);
        assert!(matches!(
            matrix_to_assignment(&x),
            Err(Error::NotEpsBistochastic)
        ));
        let mut x = fig1_matrix();
        x.set(3, 2, 0.0);
        assert!(matches!(
            matrix_to_assignment(&x),
            Err(Error::NotEpsBistochastic)
        ));
    }

    #[test]
    fn enumeration_count_and_round_trip() {
        for n in 1..=4 {
            for m in 1..=4 {
                let mut seen = 0u128;
                let mut prev: Option<Vec<usize>> = None;
                for_each_assignment(n, m, |sub| {
                    let a = EpsAssignment::new(m, sub.to_vec()).unwrap();
                    let x = assignment_to_matrix(&a);
                    assert!(is_eps_bistochastic(&x, 0.0));
                    assert_eq!(matrix_to_assignment(&x).unwrap(), a);
                    let codes = a.codes();
                    if let Some(p) = &prev {
                        assert!(p < &codes);
                    }
                    prev = Some(codes);
                    seen += 1;
                });
                assert_eq!(seen, count_assignments(n, m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn known_counts() {
        assert_eq!(count_assignments(1, 1), 2);
        assert_eq!(count_assignments(2, 2), 7);
        assert_eq!(count_assignments(3, 2), 13);
    }
}
