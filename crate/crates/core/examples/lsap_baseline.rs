//! Classical Sinkhorn on a square assignment problem against the Hungarian
//! optimum.
//!
//! cargo run --release --example lsap_baseline

use eps_sinkhorn::bench::{generate_lsap, relative_error};
use eps_sinkhorn::{classic_sinkhorn, hungarian_lsap, Sense, SolverConfig};

fn main() -> eps_sinkhorn::Result<()> {
    for n in [10, 20, 40, 80] {
        let trials = 20;
        let mut total = 0.0;
        for seed in 0..trials {
            let w = generate_lsap(n, seed)?;
            let (b, _) = classic_sinkhorn(&w, &SolverConfig::default())?;
            let (_, best) = hungarian_lsap(&w, Sense::Max)?;
            total += relative_error(w.dot(&b)?, best)?;
        }
        println!(
            "n = {n:3}: mean relative error {:.4}",
            total / trials as f64
        );
    }
    Ok(())
}
