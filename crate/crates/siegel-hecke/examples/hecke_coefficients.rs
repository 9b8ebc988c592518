//! One lattice, one prime: T′_j from the Ω/Λ expansion against the neighbor
//! form, key by key.

use siegel_hecke::hecke::{ttilde_by_key, tprime_from_ttilde, NeighborSums};
use siegel_hecke::theta::{canonical_keys, rational_string};
use siegel_hecke::{Lattice, Limits};

fn main() -> siegel_hecke::Result<()> {
    let limits = Limits::default();
    let l = Lattice::e8();
    let (p, n, bound) = (2u64, 2usize, 6i64);
    let keys: Vec<_> = canonical_keys(n, bound)?
        .into_iter()
        .filter(|t| !t.is_singular())
        .collect();
    let tt = ttilde_by_key(&l, p, &keys, n, &limits)?;
    let mut sums = NeighborSums::new(&l, p, &limits)?;
    for j in 0..=n {
        let rhs = sums.thm53(n, j, bound)?;
        for t in &keys {
            let lhs = tprime_from_ttilde(p, n, j, &tt[t]);
            let r = rhs.get(t).expect("key in table");
            println!(
                "j={j} T={t}: expansion {} neighbors {} {}",
                rational_string(&lhs),
                rational_string(r),
                if &lhs == r { "ok" } else { "DIFFER" }
            );
        }
    }
    Ok(())
}
