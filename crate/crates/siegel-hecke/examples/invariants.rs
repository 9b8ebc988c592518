//! Rank, determinant, level and the character at small primes.

use siegel_hecke::Lattice;

fn main() -> siegel_hecke::Result<()> {
    let lattices = [
        Lattice::e8(),
        Lattice::from_rows(&[vec![2, 1], vec![1, 12]], Some("det23a"))?,
        Lattice::from_rows(&[vec![2, 0], vec![0, 2]], Some("Z2"))?,
    ];
    for l in &lattices {
        print!(
            "{:8} m={} det={} level={}  chi*:",
            l.label().unwrap_or("?"),
            l.rank(),
            l.det(),
            l.level()
        );
        for p in [2u64, 3, 5, 7] {
            match l.chi_star(p) {
                Ok(c) => print!(" {p}:{c:+}"),
                Err(_) => print!(" {p}:bad"),
            }
        }
        println!();
    }
    // Odd rank is rejected.
    let odd = Lattice::from_rows(&[vec![2]], None);
    println!("rank 1: {}", odd.unwrap_err());
    Ok(())
}
