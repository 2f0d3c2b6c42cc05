//! Exact ε-assignments: enumeration, square reduction, and the classical
//! Hungarian solver.
//!
//! cargo run --example exact

use eps_sinkhorn::assignment::count_assignments;
use eps_sinkhorn::bench::{generate, generate_lsap, GenConfig};
use eps_sinkhorn::{brute_force_lsape, exact_lsape, hungarian_lsap, Sense};

fn main() -> eps_sinkhorn::Result<()> {
    let s = generate(&GenConfig {
        n: 5,
        m: 4,
        h: 1.5,
        seed: 7,
    })?;
    println!("{} epsilon-assignments for 5 x 4", count_assignments(5, 4));

    let brute = brute_force_lsape(&s, Sense::Max)?;
    let exact = exact_lsape(&s, Sense::Max)?;
    println!(
        "brute force: {:?} value {:.6}",
        brute.assignment.codes(),
        brute.value
    );
    println!(
        "reduction:   {:?} value {:.6}",
        exact.assignment.codes(),
        exact.value
    );

    let worst = exact_lsape(&s, Sense::Min)?;
    println!(
        "minimum:     {:?} value {:.6}",
        worst.assignment.codes(),
        worst.value
    );

    // Larger instances only go through the reduction.
    let big = generate(&GenConfig {
        n: 200,
        m: 150,
        h: 1.0,
        seed: 7,
    })?;
    let sol = exact_lsape(&big, Sense::Max)?;
    println!(
        "200 x 150: value {:.3}, {} substitutions, {} deletions",
        sol.value,
        sol.assignment.substitutions().iter().flatten().count(),
        sol.assignment.deleted().count()
    );

    let w = generate_lsap(6, 1)?;
    let (perm, value) = hungarian_lsap(&w, Sense::Max)?;
    println!("square 6 x 6: permutation {perm:?} value {value:.6}");
    Ok(())
}
