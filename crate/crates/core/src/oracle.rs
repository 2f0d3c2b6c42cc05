//! Exact solvers and structural predicates used as ground truth.

use crate::assignment::{assignment_to_matrix, EpsAssignment};
use crate::error::{Error, Result};
use crate::matrix::{is_eps_bistochastic, objective, EpsMatrix, SquareMatrix};

/// Largest `n` or `m` accepted by the exhaustive routines.
pub const ENUMERATION_LIMIT: usize = 9;
/// Largest `n` or `m` accepted by [`exact_lsape`].
pub const REDUCTION_LIMIT: usize = 512;
/// Largest `n` or `m` accepted by [`is_secable`].
pub const SECABILITY_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Max,
    Min,
}

impl Sense {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Max => a > b,
            Sense::Min => a < b,
        }
    }

    fn worst(self) -> f64 {
        match self {
            Sense::Max => f64::NEG_INFINITY,
            Sense::Min => f64::INFINITY,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Reduction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution {
    pub assignment: EpsAssignment,
    /// `objective(S, assignment_to_matrix(assignment))`.
    pub value: f64,
    pub method: Method,
}

fn check_bound(s: &EpsMatrix, limit: usize) -> Result<()> {
    if s.n() > limit || s.m() > limit {
        return Err(Error::TooLarge {
            n: s.n(),
            m: s.m(),
            limit,
        });
    }
    Ok(())
}

fn check_finite(s: &EpsMatrix) -> Result<()> {
    if s.as_slice().iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { iteration: 0 })
    }
}

fn solution(s: &EpsMatrix, assignment: EpsAssignment, method: Method) -> Result<ExactSolution> {
    let value = objective(s, &assignment_to_matrix(&assignment))?;
    Ok(ExactSolution {
        assignment,
        value,
        method,
    })
}

/// Enumerates every epsilon-assignment. Among optimal ones, the assignment
/// with the lexicographically smallest target codes (0 = deleted) wins.
pub fn brute_force_lsape(s: &EpsMatrix, sense: Sense) -> Result<ExactSolution> {
    check_bound(s, ENUMERATION_LIMIT)?;
    check_finite(s)?;
    let (n, m) = (s.n(), s.m());

    struct Search<'a> {
        s: &'a EpsMatrix,
        sense: Sense,
        sub: Vec<Option<usize>>,
        used: Vec<bool>,
        best: f64,
        best_sub: Vec<Option<usize>>,
    }

    impl Search<'_> {
        // `acc` holds the value of rows < i; `inserted` the epsilon-row mass
        // of the targets still free.
        fn run(&mut self, i: usize, acc: f64, inserted: f64) {
            let (n, m) = (self.s.n(), self.s.m());
            if i == n {
                let total = acc + inserted + self.s.corner();
                if self.sense.better(total, self.best) {
                    self.best = total;
                    self.best_sub.clone_from(&self.sub);
                }
                return;
            }
            self.sub[i] = None;
            self.run(i + 1, acc + self.s.get(i, m), inserted);
            for j in 0..m {
                if !self.used[j] {
                    self.used[j] = true;
                    self.sub[i] = Some(j);
                    self.run(i + 1, acc + self.s.get(i, j), inserted - self.s.get(n, j));
                    self.used[j] = false;
                }
            }
            self.sub[i] = None;
        }
    }

    let mut search = Search {
        s,
        sense,
        sub: vec![None; n],
        used: vec![false; m],
        best: sense.worst(),
        best_sub: vec![None; n],
    };
    let inserted: f64 = s.row(n)[..m].iter().sum();
    search.run(0, 0.0, inserted);
    let assignment = EpsAssignment::new(m, search.best_sub)?;
    solution(s, assignment, Method::BruteForce)
}

/// Optimal permutation of a square matrix by the O(n^3) shortest augmenting
/// path method with row/column potentials. Returns `perm` with row `i`
/// assigned to column `perm[i]`, and the row-major sum of the chosen entries.
pub fn hungarian_lsap(w: &SquareMatrix, sense: Sense) -> Result<(Vec<usize>, f64)> {
    if w.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { iteration: 0 });
    }
    let n = w.n();
    let cost = |i: usize, j: usize| match sense {
        Sense::Min => w.get(i, j),
        Sense::Max => -w.get(i, j),
    };

    // 1-based potentials; index 0 is the virtual source column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut min_v = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < min_v[j] {
                    min_v[j] = cur;
                    way[j] = j0;
                }
                if min_v[j] < delta {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[owner[j] - 1] = j - 1;
    }
    let value = perm.iter().enumerate().map(|(i, &j)| w.get(i, j)).sum();
    Ok((perm, value))
}

/// Solves the edit problem exactly through the square `(n+m) x (n+m)`
/// reduction:
///
/// ```text
///   [ S_interior        diag(S[i][m]) ]   sources
///   [ diag(S[n][j])     0             ]   epsilon copies
///     targets           epsilon copies
/// ```
///
/// Off-diagonal cells of the two edit blocks hold a blocking value that no
/// optimal permutation selects. The epsilon corner is added back afterwards.
pub fn exact_lsape(s: &EpsMatrix, sense: Sense) -> Result<ExactSolution> {
    check_bound(s, REDUCTION_LIMIT)?;
    check_finite(s)?;
    let (n, m) = (s.n(), s.m());
    let size = n + m;
    let magnitude = 1.0 + s.as_slice().iter().map(|v| v.abs()).sum::<f64>();
    let blocked = match sense {
        Sense::Max => -magnitude,
        Sense::Min => magnitude,
    };
    let mut data = vec![0.0; size * size];
    for i in 0..n {
        let row = &mut data[i * size..(i + 1) * size];
        row[..m].copy_from_slice(&s.row(i)[..m]);
        for (k, cell) in row[m..].iter_mut().enumerate() {
            *cell = if k == i { s.get(i, m) } else { blocked };
        }
    }
    for l in 0..m {
        let row = &mut data[(n + l) * size..(n + l + 1) * size];
        for (j, cell) in row[..m].iter_mut().enumerate() {
            *cell = if j == l { s.get(n, j) } else { blocked };
        }
    }
    let w = SquareMatrix::new(size, data)?;
    let (perm, _) = hungarian_lsap(&w, sense)?;
    let sub = perm[..n].iter().map(|&j| (j < m).then_some(j)).collect();
    let assignment = EpsAssignment::new(m, sub)?;
    solution(s, assignment, Method::Reduction)
}

/// Projects a relaxed epsilon-bi-stochastic matrix onto the assignment that
/// maximizes (or minimizes) `sum B * X`.
pub fn round_to_assignment(b: &EpsMatrix, sense: Sense) -> Result<EpsAssignment> {
    if !is_eps_bistochastic(b, 1e-3) {
        return Err(Error::NotEpsBistochastic);
    }
    Ok(exact_lsape(b, sense)?.assignment)
}

/// Entries an epsilon-diagonal can select: everything but the corner.
fn selectable_positive(a: &EpsMatrix, i: usize, j: usize) -> bool {
    !(i == a.n() && j == a.m()) && a.get(i, j) > 0.0
}

/// Depth-first walk over the epsilon-assignments whose selected entries are
/// all positive. `visit` receives each one and returns `false` to stop.
fn walk_positive_diagonals(a: &EpsMatrix, visit: &mut dyn FnMut(&[Option<usize>]) -> bool) {
    fn rec(
        a: &EpsMatrix,
        i: usize,
        sub: &mut Vec<Option<usize>>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
    ) -> bool {
        let (n, m) = (a.n(), a.m());
        if i == n {
            let insertions_ok = (0..m).all(|j| used[j] || selectable_positive(a, n, j));
            return !insertions_ok || visit(sub);
        }
        if selectable_positive(a, i, m) {
            sub[i] = None;
            if !rec(a, i + 1, sub, used, visit) {
                return false;
            }
        }
        for j in 0..m {
            if !used[j] && a.get(i, j) > 0.0 {
                used[j] = true;
                sub[i] = Some(j);
                let go_on = rec(a, i + 1, sub, used, visit);
                used[j] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    let mut sub = vec![None; a.n()];
    let mut used = vec![false; a.m()];
    rec(a, 0, &mut sub, &mut used, visit);
}

/// True when some epsilon-assignment selects only positive entries.
///
/// The corner is part of every epsilon-diagonal and is left untouched by the
/// scaling, so it is not required to be positive.
pub fn has_support(a: &EpsMatrix) -> Result<bool> {
    check_bound(a, ENUMERATION_LIMIT)?;
    let mut found = false;
    walk_positive_diagonals(a, &mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// True when `a` has a positive non-corner entry and every such entry lies
/// on an all-positive epsilon-diagonal.
pub fn has_total_support(a: &EpsMatrix) -> Result<bool> {
    check_bound(a, ENUMERATION_LIMIT)?;
    let (n, m) = (a.n(), a.m());
    let cols = m + 1;
    let positive: Vec<bool> = (0..(n + 1) * cols)
        .map(|k| selectable_positive(a, k / cols, k % cols))
        .collect();
    let mut remaining = positive.iter().filter(|&&p| p).count();
    if remaining == 0 {
        return Ok(false);
    }
    let mut covered = vec![false; positive.len()];
    let mut cover = |k: usize, remaining: &mut usize| {
        if !covered[k] {
            covered[k] = true;
            *remaining -= 1;
        }
    };
    walk_positive_diagonals(a, &mut |sub| {
        let mut used = vec![false; m];
        for (i, t) in sub.iter().enumerate() {
            match *t {
                Some(j) => {
                    used[j] = true;
                    cover(i * cols + j, &mut remaining);
                }
                None => cover(i * cols + m, &mut remaining),
            }
        }
        for (j, &u) in used.iter().enumerate() {
            if !u {
                cover(n * cols + j, &mut remaining);
            }
        }
        remaining > 0
    });
    Ok(remaining == 0)
}

/// True when the interior splits into two independent blocks: nonempty row
/// sets `X, Y` and column sets `Z, T` partitioning the interior with
/// `A[X, T] = 0` and `A[Y, Z] = 0`.
///
/// Equivalently, the connected components of the bipartite graph of nonzero
/// interior entries can be grouped into two sides that each hold at least one
/// row and one column.
pub fn is_secable(a: &EpsMatrix) -> Result<bool> {
    check_bound(a, SECABILITY_LIMIT)?;
    let (n, m) = (a.n(), a.m());
    if n < 2 || m < 2 {
        return Ok(false);
    }
    // Union-find over rows 0..n and columns n..n+m.
    let mut parent: Vec<usize> = (0..n + m).collect();
    fn find(parent: &mut [usize], mut k: usize) -> usize {
        while parent[k] != k {
            parent[k] = parent[parent[k]];
            k = parent[k];
        }
        k
    }
    for i in 0..n {
        for j in 0..m {
            if a.get(i, j) != 0.0 {
                let (r, c) = (find(&mut parent, i), find(&mut parent, n + j));
                parent[r] = c;
            }
        }
    }
    let mut rows_in = vec![0usize; n + m];
    let mut cols_in = vec![0usize; n + m];
    for k in 0..n + m {
        let root = find(&mut parent, k);
        if k < n {
            rows_in[root] += 1;
        } else {
            cols_in[root] += 1;
        }
    }
    let mixed = (0..n + m)
        .filter(|&r| rows_in[r] > 0 && cols_in[r] > 0)
        .count();
    let lone_rows = (0..n + m)
        .filter(|&r| rows_in[r] > 0 && cols_in[r] == 0)
        .count();
    let lone_cols = (0..n + m)
        .filter(|&r| cols_in[r] > 0 && rows_in[r] == 0)
        .count();
    Ok(match mixed {
        0 => true, // all-zero interior, n, m >= 2
        1 => lone_rows > 0 && lone_cols > 0,
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{for_each_assignment, matrix_to_assignment};
    use crate::matrix::Role;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sim(rows: &[Vec<f64>]) -> EpsMatrix {
        EpsMatrix::from_rows(rows, Role::Similarity).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize, density: f64) -> EpsMatrix {
        let data = (0..(n + 1) * (m + 1))
            .map(|_| {
                if rng.gen::<f64>() < density {
                    rng.gen_range(0.1..2.0)
                } else {
                    0.0
                }
            })
            .collect();
        EpsMatrix::new(n, m, data, Role::Similarity).unwrap()
    }

    #[test]
    fn brute_force_small_cases() {
        let s = sim(&[vec![5.0, 1.0], vec![1.0, 0.0]]);
        let best = brute_force_lsape(&s, Sense::Max).unwrap();
        assert_eq!(best.assignment.substitutions(), &[Some(0)]);
        assert_eq!(best.value, 5.0);

        let s = sim(&[vec![1.0, 5.0], vec![5.0, 0.0]]);
        let best = brute_force_lsape(&s, Sense::Max).unwrap();
        assert_eq!(best.assignment.substitutions(), &[None]);
        assert_eq!(best.value, 10.0);

        let min = brute_force_lsape(&s, Sense::Min).unwrap();
        assert_eq!(min.value, 1.0);
    }

    #[test]
    fn brute_force_breaks_ties_lexicographically() {
        // Substituting scores 2, deleting and inserting scores 1 + 1.
        let s = sim(&[vec![2.0, 1.0], vec![1.0, 0.0]]);
        let best = brute_force_lsape(&s, Sense::Max).unwrap();
        assert_eq!(best.value, 2.0);
        assert_eq!(best.assignment.codes(), vec![0]);
        let s = sim(&[
            vec![1.0, 1.0, 0.5],
            vec![1.0, 1.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ]);
        let best = brute_force_lsape(&s, Sense::Max).unwrap();
        assert_eq!(best.value, 2.0);
        assert_eq!(best.assignment.codes(), vec![0, 0]);
    }

    #[test]
    fn brute_force_dominates_random_assignments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let s = random_matrix(&mut rng, 2, 2, 1.0);
            let best = brute_force_lsape(&s, Sense::Max).unwrap();
            for _ in 0..2000 {
                let mut targets: Vec<usize> = (0..2).collect();
                let sub: Vec<Option<usize>> = (0..2)
                    .map(|_| {
                        if rng.gen_bool(0.5) || targets.is_empty() {
                            None
                        } else {
                            Some(targets.remove(rng.gen_range(0..targets.len())))
                        }
                    })
                    .collect();
                let a = EpsAssignment::new(2, sub).unwrap();
                let v = objective(&s, &assignment_to_matrix(&a)).unwrap();
                assert!(best.value >= v);
            }
        }
    }

    #[test]
    fn brute_force_bound() {
        let s = EpsMatrix::zeros(10, 2, Role::Similarity).unwrap();
        assert!(matches!(
            brute_force_lsape(&s, Sense::Max),
            Err(Error::TooLarge { .. })
        ));
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for k in 0..=p.len() {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn hungarian_hand_cases() {
        let id = SquareMatrix::new(3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            hungarian_lsap(&id, Sense::Max).unwrap(),
            (vec![0, 1, 2], 3.0)
        );
        let w = SquareMatrix::new(2, vec![1.0, 2.0, 3.0, 1.0]).unwrap();
        assert_eq!(hungarian_lsap(&w, Sense::Max).unwrap(), (vec![1, 0], 5.0));
        assert_eq!(hungarian_lsap(&w, Sense::Min).unwrap(), (vec![0, 1], 2.0));
        let bad = SquareMatrix::new(1, vec![f64::NAN]).unwrap();
        assert!(hungarian_lsap(&bad, Sense::Max).is_err());
    }

    #[test]
    fn hungarian_matches_permutation_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 0..100 {
            let n = 1 + t % 6;
            let w = SquareMatrix::new(n, (0..n * n).map(|_| rng.gen_range(-5.0..5.0)).collect())
                .unwrap();
            for sense in [Sense::Max, Sense::Min] {
                let (_, value) = hungarian_lsap(&w, sense).unwrap();
                let values = permutations(n)
                    .into_iter()
                    .map(|p| p.iter().enumerate().map(|(i, &j)| w.get(i, j)).sum::<f64>());
                let best = match sense {
                    Sense::Max => values.fold(f64::NEG_INFINITY, f64::max),
                    Sense::Min => values.fold(f64::INFINITY, f64::min),
                };
                assert!((value - best).abs() < 1e-9, "n={n} {value} vs {best}");
            }
        }
    }

    #[test]
    fn exact_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=5);
            let s = random_matrix(&mut rng, n, m, 0.8);
            for sense in [Sense::Max, Sense::Min] {
                let exact = exact_lsape(&s, sense).unwrap();
                let brute = brute_force_lsape(&s, sense).unwrap();
                assert!((exact.value - brute.value).abs() <= 1e-9);
                assert_eq!(exact.method, Method::Reduction);
            }
        }
    }

    #[test]
    fn exact_small_cases() {
        let s = sim(&[vec![5.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(exact_lsape(&s, Sense::Max).unwrap().value, 5.0);
        let s = sim(&[vec![1.0, 5.0], vec![5.0, 0.0]]);
        let sol = exact_lsape(&s, Sense::Max).unwrap();
        assert_eq!(sol.value, 10.0);
        assert_eq!(sol.assignment.substitutions(), &[None]);
    }

    #[test]
    fn dominant_interior_gives_full_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            let mut s = random_matrix(&mut rng, n, n, 1.0);
            for i in 0..n {
                s.set(i, n, rng.gen_range(0.0..0.4));
                s.set(n, i, rng.gen_range(0.0..0.4));
                for j in 0..n {
                    s.set(i, j, rng.gen_range(1.0..2.0));
                }
            }
            let sol = exact_lsape(&s, Sense::Max).unwrap();
            assert!(sol.assignment.substitutions().iter().all(Option::is_some));
            let brute = brute_force_lsape(&s, Sense::Max).unwrap();
            assert!(brute.assignment.substitutions().iter().all(Option::is_some));
        }
    }

    #[test]
    fn round_binary_is_identity() {
        let a = EpsAssignment::new(2, vec![Some(1), Some(0), None]).unwrap();
        let x = assignment_to_matrix(&a);
        assert_eq!(round_to_assignment(&x, Sense::Max).unwrap(), a);
        assert_eq!(matrix_to_assignment(&x).unwrap(), a);
    }

    #[test]
    fn round_uniform_is_deterministic() {
        let (n, m) = (3, 3);
        let mut b = EpsMatrix::zeros(n, m, Role::Relaxed).unwrap();
        for i in 0..n {
            for j in 0..m {
                b.set(i, j, 1.0 / 3.0);
            }
        }
        b.set(n, m, 1.0);
        let first = round_to_assignment(&b, Sense::Max).unwrap();
        for _ in 0..5 {
            assert_eq!(round_to_assignment(&b, Sense::Max).unwrap(), first);
        }
        assert!(first.substitutions().iter().all(Option::is_some));
        let not_stochastic = EpsMatrix::zeros(2, 2, Role::Relaxed).unwrap();
        assert!(round_to_assignment(&not_stochastic, Sense::Max).is_err());
    }

    #[test]
    fn support_cases() {
        let positive = EpsMatrix::new(2, 3, vec![0.5; 12], Role::Similarity).unwrap();
        assert!(has_support(&positive).unwrap());
        assert!(has_total_support(&positive).unwrap());

        // Interior row 0 is zero but it can be deleted.
        let s = sim(&[
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]);
        assert!(has_support(&s).unwrap());

        // Interior column 1 zero and its insertion entry zero.
        let s = sim(&[
            vec![1.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ]);
        assert!(!has_support(&s).unwrap());
        assert!(!has_total_support(&s).unwrap());

        let zero = EpsMatrix::zeros(2, 2, Role::Similarity).unwrap();
        assert!(!has_total_support(&zero).unwrap());
        let big = EpsMatrix::zeros(10, 1, Role::Similarity).unwrap();
        assert!(matches!(
            has_total_support(&big),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn assignment_matrices_have_total_support() {
        for_each_assignment(3, 2, |sub| {
            let a = EpsAssignment::new(2, sub.to_vec()).unwrap();
            assert!(has_total_support(&assignment_to_matrix(&a)).unwrap());
        });
    }

    #[test]
    fn partial_support_without_total_support() {
        // Row 1 can only take column 0, so entry (0,0) is on no positive
        // diagonal.
        let s = sim(&[
            vec![1.0, 1.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]);
        assert!(has_support(&s).unwrap());
        assert!(!has_total_support(&s).unwrap());
    }

    /// Second enumeration: walk targets first, each picking a source or an
    /// insertion, and mark the cells of every all-positive diagonal.
    fn total_support_by_columns(a: &EpsMatrix) -> bool {
        let (n, m) = (a.n(), a.m());
        let cols = m + 1;
        let mut covered = vec![false; (n + 1) * cols];
        let mut any = false;
        fn rec(
            a: &EpsMatrix,
            j: usize,
            owner: &mut Vec<Option<usize>>,
            covered: &mut [bool],
            any: &mut bool,
        ) {
            let (n, m) = (a.n(), a.m());
            let cols = m + 1;
            if j == m {
                let mut taken = vec![false; n];
                for o in owner.iter().flatten() {
                    taken[*o] = true;
                }
                if (0..n).any(|i| !taken[i] && a.get(i, m) <= 0.0) {
                    return;
                }
                *any = true;
                for (j, o) in owner.iter().enumerate() {
                    match o {
                        Some(i) => covered[i * cols + j] = true,
                        None => covered[n * cols + j] = true,
                    }
                }
                for i in (0..n).filter(|&i| !taken[i]) {
                    covered[i * cols + m] = true;
                }
                return;
            }
            if a.get(n, j) > 0.0 {
                owner[j] = None;
                rec(a, j + 1, owner, covered, any);
            }
            for i in 0..n {
                if a.get(i, j) > 0.0 && !owner[..j].contains(&Some(i)) {
                    owner[j] = Some(i);
                    rec(a, j + 1, owner, covered, any);
                }
            }
            owner[j] = None;
        }
        let mut owner = vec![None; m];
        rec(a, 0, &mut owner, &mut covered, &mut any);
        let positive_exists =
            (0..(n + 1) * cols).any(|k| k != n * cols + m && a.as_slice()[k] > 0.0);
        positive_exists
            && (0..(n + 1) * cols)
                .filter(|&k| k != n * cols + m && a.as_slice()[k] > 0.0)
                .all(|k| covered[k])
    }

    #[test]
    fn total_support_agrees_across_enumeration_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut seen = [0usize; 2];
        for _ in 0..400 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=4);
            let a = random_matrix(&mut rng, n, m, 0.45);
            let verdict = has_total_support(&a).unwrap();
            assert_eq!(verdict, total_support_by_columns(&a), "{a:?}");
            seen[verdict as usize] += 1;
            if verdict {
                assert!(has_support(&a).unwrap());
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn secability_cases() {
        let block = sim(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]);
        assert!(is_secable(&block).unwrap());
        let positive = EpsMatrix::new(3, 3, vec![1.0; 16], Role::Similarity).unwrap();
        assert!(!is_secable(&positive).unwrap());
        let one_row = EpsMatrix::new(1, 3, vec![1.0; 8], Role::Similarity).unwrap();
        assert!(!is_secable(&one_row).unwrap());
        let big = EpsMatrix::zeros(21, 2, Role::Similarity).unwrap();
        assert!(matches!(is_secable(&big), Err(Error::TooLarge { .. })));
    }

    /// Tries every pair of nonempty proper row and column subsets.
    fn secable_by_partitions(a: &EpsMatrix) -> bool {
        let (n, m) = (a.n(), a.m());
        for xs in 1..(1u32 << n) - 1 {
            for zs in 1..(1u32 << m) - 1 {
                let clean = (0..n).all(|i| {
                    (0..m).all(|j| {
                        let in_x = xs >> i & 1 == 1;
                        let in_z = zs >> j & 1 == 1;
                        in_x == in_z || a.get(i, j) == 0.0
                    })
                });
                if clean {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn secability_matches_partition_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut seen = [0usize; 2];
        for _ in 0..500 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=5);
            let density = rng.gen_range(0.1..0.7);
            let a = random_matrix(&mut rng, n, m, density);
            let verdict = is_secable(&a).unwrap();
            assert_eq!(verdict, secable_by_partitions(&a), "{a:?}");
            seen[verdict as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }
}
