//! Read and write matrix and assignment files.
//!
//! cargo run --example file_formats

use eps_sinkhorn::bench::{generate, GenConfig};
use eps_sinkhorn::format::{read_assignment, read_matrix, write_assignment, write_matrix};
use eps_sinkhorn::{exact_lsape, Role, Sense};

fn main() -> eps_sinkhorn::Result<()> {
    let s = generate(&GenConfig {
        n: 3,
        m: 2,
        h: 0.5,
        seed: 42,
    })?;

    let mut text = Vec::new();
    write_matrix(&mut text, &s)?;
    print!("{}", String::from_utf8_lossy(&text));
    let back = read_matrix(text.as_slice(), Role::Similarity)?;
    assert_eq!(back, s);

    let a = exact_lsape(&s, Sense::Max)?.assignment;
    let mut text = Vec::new();
    write_assignment(&mut text, &a)?;
    print!("{}", String::from_utf8_lossy(&text));
    assert_eq!(read_assignment(text.as_slice())?, a);

    let bad = "2 2\n1 1 1\n1 oops 1\n1 1 0\n";
    if let Err(e) = read_matrix(bad.as_bytes(), Role::Similarity) {
        println!("rejected: {e}");
    }
    Ok(())
}
