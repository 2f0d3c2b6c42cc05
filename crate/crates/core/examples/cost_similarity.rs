//! Move between cost and similarity formulations, then simplify and sharpen.
//!
//! cargo run --example cost_similarity

use eps_sinkhorn::assignment::for_each_assignment;
use eps_sinkhorn::{
    assignment_to_matrix, brute_force_lsape, cost_to_similarity, objective, sharpen,
    similarity_to_cost, simplify, CostScheme, EpsAssignment, EpsMatrix, Role, SchemeKind, Sense,
};

fn main() -> eps_sinkhorn::Result<()> {
    let s = EpsMatrix::from_rows(
        &[
            vec![3.0, 1.0, 1.5],
            vec![1.2, 2.5, 0.4],
            vec![0.8, 0.9, 0.0],
        ],
        Role::Similarity,
    )?;

    for kind in [
        SchemeKind::RowLoaded,
        SchemeKind::ColLoaded,
        SchemeKind::Balanced,
    ] {
        let scheme = CostScheme::new(kind, 4.0)?;
        let (cost, q) = similarity_to_cost(&s, &scheme)?;
        let mut worst: f64 = 0.0;
        for_each_assignment(2, 2, |sub| {
            let x = assignment_to_matrix(&EpsAssignment::new(2, sub.to_vec()).unwrap());
            let sum = objective(&cost, &x).unwrap() + objective(&s, &x).unwrap();
            worst = worst.max((sum - q).abs());
        });
        let best = brute_force_lsape(&cost, Sense::Min)?;
        println!(
            "{kind:?}: Q = {q}, max |cost + sim - Q| = {worst:.1e}, min-cost codes {:?}",
            best.assignment.codes()
        );
    }

    let d = EpsMatrix::from_rows(
        &[
            vec![1.0, 4.0, 2.0],
            vec![3.0, 0.5, 2.0],
            vec![2.0, 2.0, 0.0],
        ],
        Role::Cost,
    )?;
    let (from_cost, q, c) = cost_to_similarity(&d, 1.0)?;
    println!("cost -> similarity: c = {c}, Q = {q}");
    println!(
        "  min-cost codes {:?}, max-similarity codes {:?}",
        brute_force_lsape(&d, Sense::Min)?.assignment.codes(),
        brute_force_lsape(&from_cost, Sense::Max)?
            .assignment
            .codes()
    );

    // Substituting 1 -> 2 (1.0) is worse than deleting 1 and inserting 2.
    let (simple, count) = simplify(&s, 1e-4);
    println!(
        "simplify replaced {count} entries: row 1 = {:?}",
        simple.row(0)
    );

    let sharp = sharpen(&s, 0.5)?;
    println!("sharpen(t = 0.5): row 1 = {:?}", sharp.row(0));
    Ok(())
}
