//! Genus eigenvalue checks, including the vanishing case.

use siegel_hecke::hecke::verify_eigenvalue;
use siegel_hecke::{Lattice, Limits};

fn main() -> siegel_hecke::Result<()> {
    let limits = Limits::default();
    let det23 = Lattice::from_rows(&[vec![2, 1], vec![1, 12]], Some("det23a"))?;
    for (l, p, n, j, b) in [
        (Lattice::e8(), 2u64, 1usize, 1usize, 6i64),
        (Lattice::e8(), 2, 2, 2, 4),
        (det23.clone(), 2, 1, 1, 8),
        (det23, 5, 1, 1, 8),
    ] {
        let r = verify_eigenvalue(&l, p, n, j, b, &limits)?;
        print!("{}", r.to_text());
        println!();
    }
    Ok(())
}
