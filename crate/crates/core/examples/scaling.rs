//! Scale a small similarity matrix with both solvers and round the result.
//!
//! cargo run --example scaling

use eps_sinkhorn::scaling::TraceRecord;
use eps_sinkhorn::{
    is_eps_bistochastic, round_to_assignment, sinkhorn_d1d2, sinkhorn_sp, EpsMatrix, Mode, Role,
    Sense, SolverConfig,
};

fn print(b: &EpsMatrix) {
    for i in 0..=b.n() {
        let row: Vec<String> = b.row(i).iter().map(|v| format!("{v:.4}")).collect();
        println!("  {}", row.join("  "));
    }
}

fn main() -> eps_sinkhorn::Result<()> {
    // 3 sources, 2 targets. Last column: deletion, last row: insertion.
    let s = EpsMatrix::from_rows(
        &[
            vec![1.0, 4.0, 0.5],
            vec![4.0, 1.0, 0.5],
            vec![0.1, 0.1, 2.0],
            vec![0.5, 0.5, 0.0],
        ],
        Role::Similarity,
    )?;

    let cfg = SolverConfig::new(Mode::D1D2, 1e-9, 10_000).with_trace();
    let (pair, b, report) = sinkhorn_d1d2(&s, &cfg)?;
    println!(
        "d1d2: {} iterations, converged={}",
        report.iterations, report.converged
    );
    println!("  x = {:?}", pair.x());
    println!("  y = {:?}", pair.y());
    print(&b);
    if let Some(TraceRecord::Ratio { x, y, .. }) = report.trace.records.last() {
        println!("  last ratio residuals: x {x:.2e}, y {y:.2e}");
    }

    let (b_sp, report) = sinkhorn_sp(&s, &SolverConfig::new(Mode::Sp, 1e-9, 10_000))?;
    println!(
        "sp: {} iterations, objective {:.6}",
        report.iterations, report.objective
    );
    print(&b_sp);
    assert!(is_eps_bistochastic(&b, 1e-8) && is_eps_bistochastic(&b_sp, 1e-8));

    let a = round_to_assignment(&b, Sense::Max)?;
    for i in 0..a.n() {
        match a.target_of(i) {
            Some(j) => println!("source {} -> target {}", i + 1, j + 1),
            None => println!("source {} deleted", i + 1),
        }
    }
    for j in a.inserted() {
        println!("target {} inserted", j + 1);
    }
    Ok(())
}
