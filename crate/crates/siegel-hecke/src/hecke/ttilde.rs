//! Fourier coefficients of `θ(L) | T̃_j(p²)` and of `θ(L) | T′_j(p²)`.
//!
//! The coefficient at a nonsingular `T` is `Σ_U c_j(U)` over integer `m×n`
//! matrices `X = pU` with `XᵀQX = p²T`, where `c_j(U)` sums the weights of
//! the lattices `Λ` between `pΩ` and `Δ`. The weight depends on `X` only
//! through the row module of `X` mod `p²`, so the sum is a tally of row
//! modules followed by one weight evaluation per module.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::local::{row_module, LocalData};
use super::weyl::RootSystem;
use crate::arith::u_coeff;
use crate::enumerate::{Enumerator, Region};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::theta::{canonical_keys, for_each_rep, CoeffTable, TIndex};
use crate::Limits;

type Tally = HashMap<Vec<i64>, u128>;

/// `T̃_j` coefficients at `t` for `j = 0..=jmax`.
pub fn ttilde_coefficients(l: &Lattice, p: u64, t: &TIndex, jmax: usize, limits: &Limits) -> Result<Vec<BigRational>> {
    let mut all = ttilde_by_key(l, p, std::slice::from_ref(t), jmax, limits)?;
    Ok(all.remove(t).expect("key present"))
}

/// The `T̃_j` coefficient at `t`.
pub fn ttilde_coefficient(l: &Lattice, p: u64, n: usize, j: usize, t: &TIndex, limits: &Limits) -> Result<BigRational> {
    if t.degree() != n {
        return Err(Error::InvalidInput(format!("T has degree {} but n = {n}", t.degree())));
    }
    Ok(ttilde_coefficients(l, p, t, j, limits)?.swap_remove(j))
}

/// `T̃_j` coefficients for several keys of one degree.
pub fn ttilde_by_key(
    l: &Lattice,
    p: u64,
    keys: &[TIndex],
    jmax: usize,
    limits: &Limits,
) -> Result<BTreeMap<TIndex, Vec<BigRational>>> {
    l.check_good_prime(p)?;
    let n = match keys.first() {
        Some(t) => t.degree(),
        None => return Ok(BTreeMap::new()),
    };
    if keys.iter().any(|t| t.degree() != n) {
        return Err(Error::InvalidInput("keys of mixed degree".into()));
    }
    if jmax > n {
        return Err(Error::InvalidInput(format!("j = {jmax} exceeds n = {n}")));
    }
    if let Some(t) = keys.iter().find(|t| t.is_singular()) {
        return Err(Error::Unsupported(format!(
            "singular T = {t}: orbit counting needs stabilizer weights"
        )));
    }
    let tallies = match n {
        1 => tally_degree_one(l, p, keys, limits)?,
        2 => tally_degree_two(l, p, keys, limits)?,
        _ => tally_generic(l, p, keys, limits)?,
    };
    let ld = LocalData::new(l, p, n)?;
    let mut out = BTreeMap::new();
    for (t, tally) in tallies {
        let mut acc = vec![BigRational::zero(); jmax + 1];
        let mut modules: Vec<(&Vec<i64>, &u128)> = tally.iter().collect();
        modules.sort();
        for (rowmod, &count) in modules {
            let w = ld.class_weights(t.mat(), rowmod, jmax)?;
            let c = BigRational::from_integer(BigInt::from(count));
            for (a, x) in acc.iter_mut().zip(w) {
                *a += x * &c;
            }
        }
        out.insert(t, acc);
    }
    Ok(out)
}

/// Row modules by direct enumeration of all `X`.
fn tally_generic(l: &Lattice, p: u64, keys: &[TIndex], limits: &Limits) -> Result<Vec<(TIndex, Tally)>> {
    let p2 = (p * p) as i64;
    let mut out = Vec::new();
    for t in keys {
        let mut tally = Tally::new();
        for_each_rep(l.gram(), t.scaled(p2).mat(), limits.node_budget, |cols| {
            *tally.entry(row_module(cols, p2)).or_insert(0) += 1;
        })?;
        out.push((t.clone(), tally));
    }
    Ok(out)
}

/// In degree one the row module is `p^{min(v,2)}Z`, `v` the valuation of
/// the content of `x`. Vectors of norm `p²t` divisible by `p` (by `p²`) are
/// `p` (`p²`) times vectors of norm `t` (`t/p²`).
fn tally_degree_one(l: &Lattice, p: u64, keys: &[TIndex], limits: &Limits) -> Result<Vec<(TIndex, Tally)>> {
    let p2 = (p * p) as i64;
    let en = Enumerator::new(l.gram())?;
    let count = |norm: i64| -> Result<u128> {
        let mut c = 0u128;
        en.for_each(norm, Region::Shell, limits.node_budget, |_, _| c += 1)?;
        Ok(c)
    };
    let mut out = Vec::new();
    for t in keys {
        let s = t.mat().get(0, 0);
        let n0 = count(p2 * s)?;
        let n1 = count(s)?;
        let n2 = if s % p2 == 0 { count(s / p2)? } else { 0 };
        let mut tally = Tally::new();
        for (v, c) in [(1, n0 - n1), (p as i64, n1 - n2), (p2, n2)] {
            if c > 0 {
                tally.insert(vec![v], c);
            }
        }
        out.push((t.clone(), tally));
    }
    Ok(out)
}

/// Degree two: the first column runs over dominant representatives of the
/// root-reflection orbits on its shell, weighted by orbit size; the second
/// column is streamed from its shell and filtered by the inner product.
fn tally_degree_two(l: &Lattice, p: u64, keys: &[TIndex], limits: &Limits) -> Result<Vec<(TIndex, Tally)>> {
    let g = l.gram();
    let m = g.dim();
    let p2 = (p * p) as i64;
    let en = Enumerator::new(g)?;
    let roots = RootSystem::new(g, limits.node_budget)?;
    // (a, c) -> b -> key position
    let mut by_ac: BTreeMap<(i64, i64), BTreeMap<i64, usize>> = BTreeMap::new();
    for (i, t) in keys.iter().enumerate() {
        let (a, b, c) = (t.mat().get(0, 0), t.mat().get(0, 1), t.mat().get(1, 1));
        by_ac.entry((a, c)).or_default().insert(b, i);
    }
    let mut tallies: Vec<Tally> = vec![Tally::new(); keys.len()];
    let mut reps_by_a: BTreeMap<i64, BTreeMap<Vec<i64>, u64>> = BTreeMap::new();
    for (&(a, c), bs) in &by_ac {
        if !reps_by_a.contains_key(&a) {
            let mut first = Vec::new();
            en.for_each(p2 * a, Region::Shell, limits.node_budget, |x, _| first.extend_from_slice(x))?;
            let tally = roots.orbit_tally(first.chunks_exact(m));
            reps_by_a.insert(a, tally);
        }
        for (d, &orbit) in &reps_by_a[&a] {
            let qd: Vec<i64> = (0..m).map(|i| (0..m).map(|j| g.get(i, j) * d[j]).sum()).collect();
            en.for_each(p2 * c, Region::Shell, limits.node_budget, |y, _| {
                let ip: i64 = qd.iter().zip(y).map(|(u, v)| u * v).sum();
                if ip % p2 != 0 {
                    return;
                }
                if let Some(&idx) = bs.get(&(ip / p2)) {
                    let rm = row_module(&[d.as_slice(), y], p2);
                    *tallies[idx].entry(rm).or_insert(0) += orbit as u128;
                }
            })?;
        }
    }
    Ok(keys.iter().cloned().zip(tallies).collect())
}

/// `Σ_i u_i(j) T̃_{j-i}` from the list `tt[j'] = T̃_{j'}`.
pub fn tprime_from_ttilde(p: u64, n: usize, j: usize, tt: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for i in 0..=j {
        let u = u_coeff(p, n as u32, j as u32, i as u32);
        s += BigRational::from_integer(u) * &tt[j - i];
    }
    s
}

/// `θ(L) | T′_j(p²)` on the nonsingular canonical keys of trace `<= bound`,
/// assembled from `T̃` coefficients.
pub fn tprime_table(l: &Lattice, p: u64, n: usize, j: usize, bound: i64, limits: &Limits) -> Result<CoeffTable> {
    let keys: Vec<TIndex> = canonical_keys(n, bound)?.into_iter().filter(|t| !t.is_singular()).collect();
    let tt = ttilde_by_key(l, p, &keys, j, limits)?;
    let mut out = CoeffTable::new(n, bound);
    for (t, v) in tt {
        out.insert(t, tprime_from_ttilde(p, n, j, &v));
    }
    Ok(out)
}
