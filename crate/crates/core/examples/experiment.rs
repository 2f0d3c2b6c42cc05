//! Relative-error and timing experiments written as CSV.
//!
//! cargo run --release --example experiment

use std::io;

use eps_sinkhorn::bench::{run_experiment, timing, write_csv, Algorithm, ExperimentConfig};

fn main() -> eps_sinkhorn::Result<()> {
    let mut rows = Vec::new();
    for algorithm in [Algorithm::D1D2, Algorithm::Sp] {
        let mut cfg =
            ExperimentConfig::new(algorithm, vec![(10, 10), (20, 40)], vec![0.1, 1.0], 50);
        cfg.seed = 1;
        rows.extend(run_experiment(&cfg)?);
    }

    let mut cfg = ExperimentConfig::new(Algorithm::D1D2, vec![(50, 50)], vec![1.0, 4.0, 8.0], 20);
    for simplify in [false, true] {
        cfg.simplify = simplify;
        rows.extend(timing(&cfg)?);
    }

    let cfg = ExperimentConfig::new(
        Algorithm::ClassicSinkhornLsap,
        vec![(10, 10), (40, 40)],
        vec![],
        50,
    );
    rows.extend(run_experiment(&cfg)?);

    write_csv(io::stdout().lock(), &rows)
}
