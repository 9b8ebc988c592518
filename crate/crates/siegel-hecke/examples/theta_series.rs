//! Theta coefficients of E8 in degrees 1 and 2.

use siegel_hecke::theta::{rational_string, theta_table};
use siegel_hecke::{Lattice, Limits};

fn main() -> siegel_hecke::Result<()> {
    let l = Lattice::e8();
    let budget = Limits::default().node_budget;
    let t1 = theta_table(l.gram(), 1, 8, budget)?;
    for (t, v) in t1.entries() {
        println!("a(E8, {t}) = {}", rational_string(v));
    }
    let t2 = theta_table(l.gram(), 2, 6, budget)?;
    for (t, v) in t2.entries() {
        println!("a(E8, {t}) = {}", rational_string(v));
    }
    print!("{}", t1.to_csv());
    Ok(())
}
