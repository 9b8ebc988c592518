//! Quadratic spaces over F_p: Witt types, totally isotropic subspaces, the
//! Gauss sum of a lattice, and the closing identity.

use siegel_hecke::ffquad::{
    all_spaces, classify, count_totally_isotropic, count_totally_isotropic_brute, gauss_sum_lattice,
    thm45_closing_identity_check, FFQuadSpace,
};
use siegel_hecke::Lattice;

fn main() -> siegel_hecke::Result<()> {
    for p in [2u64, 3] {
        let h = FFQuadSpace::hyperbolic(p, 2);
        let a = h.direct_sum(&FFQuadSpace::anisotropic_plane(p));
        for (name, v) in [("H^2", &h), ("H^2+A", &a)] {
            let w = classify(v);
            println!(
                "p={p} {name}: {:?}, lines {} (brute {}), planes {}",
                w.witt_type,
                count_totally_isotropic(v, 1),
                count_totally_isotropic_brute(v, 1)?,
                count_totally_isotropic(v, 2)
            );
        }
    }

    let e8 = Lattice::e8();
    for p in [3u64, 5, 7] {
        let g = gauss_sum_lattice(e8.gram(), p)?;
        println!("Gauss sum of E8 at {p}: {}", g.to_integer().expect("rational"));
    }

    let mut ok = 0;
    let mut total = 0;
    for dim in 0..=3 {
        for v in all_spaces(3, dim) {
            for r in 0..=3 {
                for j in r..=3 {
                    total += 1;
                    ok += thm45_closing_identity_check(&v, dim + r, j, r)? as usize;
                }
            }
        }
    }
    println!("closing identity over F_3: {ok}/{total}");
    Ok(())
}
