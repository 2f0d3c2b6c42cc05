//! Sinkhorn-style scaling of similarity matrices towards epsilon-bi-stochastic
//! matrices, the continuous relaxation of the linear sum assignment problem
//! with edition (substitutions plus deletions and insertions).
//!
//! A problem over `n` sources and `m` targets is an `(n+1) x (m+1)`
//! [`EpsMatrix`] whose last row holds insertion similarities, whose last
//! column holds deletion similarities, and whose corner pairs the two
//! epsilon elements. The solvers in [`scaling`] find positive diagonal
//! scalings `D1`, `D2` (last entries pinned to 1) such that `D1 * S * D2`
//! has interior row and column sums equal to 1.
//!
//! ```
//! use eps_sinkhorn::{sinkhorn_d1d2, EpsMatrix, Role, SolverConfig, is_eps_bistochastic};
//!
//! let s = EpsMatrix::from_rows(
//!     &[vec![2.0, 1.0, 0.3], vec![1.0, 2.0, 0.3], vec![0.3, 0.3, 0.0]],
//!     Role::Similarity,
//! )?;
//! let (_, b, report) = sinkhorn_d1d2(&s, &SolverConfig::default())?;
//! assert!(report.converged);
//! assert!(is_eps_bistochastic(&b, 1e-5));
//! # Ok::<(), eps_sinkhorn::Error>(())
//! ```
//!
//! Modules:
//!
//! * [`matrix`], [`assignment`], [`format`]: domain types, objective,
//!   validation and the text file formats.
//! * [`scaling`]: the two epsilon solvers and the classical Sinkhorn baseline.
//! * [`transform`]: cost/similarity reductions, simplification, sharpening.
//! * [`oracle`]: exact solvers (enumeration, Hungarian, square reduction) and
//!   structural predicates (support, total support, secability).
//! * [`bench`]: instance generation and relative-error/timing experiments.
//! * [`cli`]: the command-line front end used by the `eps-sinkhorn` binary.

pub mod assignment;
pub mod bench;
pub mod cli;
pub mod error;
pub mod format;
pub mod matrix;
pub mod oracle;
pub mod rng;
pub mod scaling;
pub mod transform;

pub use assignment::{assignment_to_matrix, matrix_to_assignment, EpsAssignment};
pub use error::{Error, Result};
pub use matrix::{
    is_eps_bistochastic, objective, validate_similarity, EpsMatrix, Role, SquareMatrix, Violation,
};
pub use oracle::{
    brute_force_lsape, exact_lsape, has_support, has_total_support, hungarian_lsap, is_secable,
    round_to_assignment, ExactSolution, Sense,
};
pub use scaling::{
    classic_sinkhorn, sinkhorn_d1d2, sinkhorn_sp, solve, Mode, ScalingPair, SolveReport,
    SolverConfig,
};
pub use transform::{
    cost_to_similarity, sharpen, similarity_to_cost, simplify, structured_cost, CostScheme,
    SchemeKind,
};
