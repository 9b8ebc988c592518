//! p-neighbors of E8 and of a det-23 lattice.

use std::sync::Arc;

use siegel_hecke::genus::{for_each_neighbor, neighbors, reduced_form};
use siegel_hecke::Lattice;

fn main() -> siegel_hecke::Result<()> {
    let e8 = Arc::new(Lattice::e8());
    for (p, r) in [(2u64, 1usize), (3, 1)] {
        let set = neighbors(&e8, p, r)?;
        println!("E8: {} neighbors at p={p}, r={r}", set.len());
    }
    // Streaming avoids holding all of them.
    let n = for_each_neighbor(&e8, 3, 2, |_| Ok(()))?;
    println!("E8: {n} neighbors at p=3, r=2");

    let l = Arc::new(Lattice::from_rows(&[vec![2, 1], vec![1, 12]], None)?);
    let set = neighbors(&l, 2, 1)?;
    for g in set.grams() {
        println!("det23a 2-neighbor: {:?}", reduced_form(&g)?.rows());
    }
    Ok(())
}
