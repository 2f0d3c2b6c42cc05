//! Structural checks: support, total support and secability, and what they
//! mean for the scaling.
//!
//! cargo run --example structure

use eps_sinkhorn::{
    has_support, has_total_support, is_secable, sinkhorn_d1d2, validate_similarity, EpsMatrix,
    Mode, Role, SolverConfig,
};

fn report(name: &str, a: &EpsMatrix) -> eps_sinkhorn::Result<()> {
    let violations: Vec<String> = validate_similarity(a)
        .iter()
        .map(|v| v.to_string())
        .collect();
    println!(
        "{name}: support={} total_support={} secable={} validation={}",
        has_support(a)?,
        has_total_support(a)?,
        is_secable(a)?,
        if violations.is_empty() {
            "ok".to_string()
        } else {
            violations.join("; ")
        }
    );
    Ok(())
}

fn main() -> eps_sinkhorn::Result<()> {
    let positive = EpsMatrix::from_rows(
        &[
            vec![2.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ],
        Role::Similarity,
    )?;
    let blocks = EpsMatrix::from_rows(
        &[
            vec![2.0, 0.0, 0.5],
            vec![0.0, 3.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ],
        Role::Similarity,
    )?;
    let no_edits = EpsMatrix::from_rows(
        &[
            vec![2.0, 1.0, 0.0],
            vec![0.0, 3.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ],
        Role::Similarity,
    )?;
    report("positive", &positive)?;
    report("blocks", &blocks)?;
    report("no edits", &no_edits)?;

    // Without total support the scaling drifts: entry (1, 2) never lies on
    // a positive diagonal, so it is driven to zero.
    let mut cfg = SolverConfig::new(Mode::D1D2, 1e-6, 2_000);
    cfg.require_positive_edits = false;
    let (_, b, r) = sinkhorn_d1d2(&no_edits, &cfg)?;
    println!(
        "no edits: converged={} after {} iterations, B[1][2] = {:.2e}",
        r.converged,
        r.iterations,
        b.get(0, 1)
    );

    // A secable matrix has a unique limit but many scaling pairs.
    let (pair, _, _) = sinkhorn_d1d2(&blocks, &SolverConfig::default())?;
    println!("blocks: x = {:?}, y = {:?}", pair.x(), pair.y());
    Ok(())
}
