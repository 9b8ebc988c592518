//! Genus of [[2,1],[1,12]] by 2-neighbor closure, and its theta average.

use siegel_hecke::genus::{genus_average_table, genus_classes};
use siegel_hecke::theta::rational_string;
use siegel_hecke::{Lattice, Limits};

fn main() -> siegel_hecke::Result<()> {
    let seed = Lattice::from_rows(&[vec![2, 1], vec![1, 12]], Some("det23a"))?;
    let limits = Limits::default();
    let g = genus_classes(&seed, 2, &limits)?;
    println!("{}", g.to_json());
    let avg = genus_average_table(&g, 1, 8, &limits)?;
    for (t, v) in avg.entries() {
        println!("genus average at {t}: {}", rational_string(v));
    }
    Ok(())
}
