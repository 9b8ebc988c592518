//! p-neighbors: lattices `K` with `pL ⊆ K ⊆ p⁻¹L`, invariant factors
//! `p⁻¹` (r times), `1` (m-2r times), `p` (r times), even and of the same
//! determinant as `L`.
//!
//! For a totally isotropic `W ⊂ L/pL` of dimension `r` the neighbors over `W`
//! are `K = p⁻¹⟨w'_1..w'_r⟩ + L_W`, with `L_W = {x : b(x,W) ≡ 0 (p)}` and
//! `w'_i = w_i + p Σ_a A_ia f_a` lifts with `Q[w'_i] ≡ 0 (2p²)` and
//! `b(w'_i,w'_l) ≡ 0 (p²)`. Here `f_a` is dual to `w_a` mod `p`. The strictly
//! upper part of `A` is free, so each `W` carries `p^{r(r-1)/2}` neighbors.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::arith::{hnf_with_modulus, SymMatZ};
use crate::error::{Error, Result};
use crate::ffquad::linalg::{inv_mod, kernel, rref};
use crate::ffquad::{FFQuadSpace, BRUTE_CAPACITY};
use crate::lattice::{Lattice, SubframeBasis};

/// Every totally isotropic `r`-subspace of `space`, as reduced echelon bases.
pub fn isotropic_subspaces(space: &FFQuadSpace, r: usize) -> Result<Vec<Vec<Vec<u64>>>> {
    let p = space.prime();
    let m = space.dim();
    if r == 0 {
        return Ok(vec![vec![]]);
    }
    let size = (p as u128).pow(m as u32);
    if size > BRUTE_CAPACITY as u128 {
        return Err(Error::Capacity(format!(
            "{p}^{m} vectors exceed the isotropic-subspace capacity {BRUTE_CAPACITY}"
        )));
    }
    // isotropic vectors normalized to leading coefficient 1
    let mut iso = Vec::new();
    for code in 1..size as u64 {
        let mut c = code;
        let v: Vec<u64> = (0..m)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect();
        if v.iter().find(|&&x| x != 0) == Some(&1) && space.q(&v) == 0 {
            iso.push(v);
        }
    }
    let mut cur: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for _ in 0..r {
        let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
        let mut next = Vec::new();
        for s in &cur {
            for v in &iso {
                if s.iter().any(|w| space.b(w, v) != 0) {
                    continue;
                }
                let mut rows = s.clone();
                rows.push(v.clone());
                rref(&mut rows, p);
                if rows.len() == s.len() + 1 && seen.insert(rows.clone()) {
                    next.push(rows);
                }
            }
        }
        cur = next;
    }
    cur.sort();
    Ok(cur)
}

/// One neighbor: the basis of `pK` in HNF (columns, entries mod `p²`) and
/// the Gram matrix of `K` in the basis `H/p`.
#[derive(Clone, Debug)]
pub struct Neighbor {
    pub h: Vec<Vec<i64>>,
    pub gram: SymMatZ,
}

/// Streams every `r`-neighbor of `l` at `p` to `f`, validating each one.
/// Returns the number of neighbors.
pub fn for_each_neighbor<F: FnMut(&Neighbor) -> Result<()>>(
    l: &Lattice,
    p: u64,
    r: usize,
    mut f: F,
) -> Result<u64> {
    l.check_good_prime(p)?;
    let m = l.rank();
    if 2 * r > m {
        return Ok(0);
    }
    let g = l.gram();
    let space = FFQuadSpace::from_even_gram(p, g)?;
    let pi = p as i64;
    let p2 = pi * pi;
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut count = 0u64;
    let gv = |x: &[i64], y: &[i64]| -> i64 {
        (0..m)
            .map(|i| x[i] * (0..m).map(|j| g.get(i, j) * y[j]).sum::<i64>())
            .sum()
    };
    for w in isotropic_subspaces(&space, r)? {
        let wi: Vec<Vec<i64>> = w.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
        // rows b(w_a, ·) mod p
        let bw: Vec<Vec<u64>> = w
            .iter()
            .map(|v| {
                (0..m)
                    .map(|j| {
                        let s: i64 = (0..m).map(|i| v[i] as i64 * g.get(i, j)).sum();
                        s.rem_euclid(pi) as u64
                    })
                    .collect()
            })
            .collect();
        let fs = dual_vectors(&bw, m, p)?;
        let perp = kernel(&bw, m, p);
        let mut base_gens: Vec<Vec<i64>> = perp
            .iter()
            .map(|v| v.iter().map(|&x| x as i64 * pi).collect())
            .collect();
        for i in 0..m {
            let mut e = vec![0i64; m];
            e[i] = p2;
            base_gens.push(e);
        }
        let free: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |l| (i, l))).collect();
        let choices = (p as u64).pow(free.len() as u32);
        for code in 0..choices {
            let mut a = vec![vec![0i64; r]; r];
            let mut c = code;
            for &(i, l) in &free {
                let v = (c % p) as i64;
                c /= p;
                a[i][l] = v;
                let bil = gv(&wi[i], &wi[l]);
                debug_assert_eq!(bil % pi, 0);
                a[l][i] = (-(bil / pi) - v).rem_euclid(pi);
            }
            for i in 0..r {
                let qi = gv(&wi[i], &wi[i]);
                a[i][i] = if p == 2 {
                    (qi / 4).rem_euclid(2)
                } else {
                    ((-(qi / pi)).rem_euclid(pi) * inv_mod(2, p) as i64) % pi
                };
            }
            let lifts: Vec<Vec<i64>> = (0..r)
                .map(|i| {
                    (0..m)
                        .map(|t| wi[i][t] + pi * (0..r).map(|b| a[i][b] * fs[b][t]).sum::<i64>())
                        .collect()
                })
                .collect();
            let mut gens = base_gens.clone();
            gens.extend(lifts.iter().cloned());
            let hflat = hnf_with_modulus(&gens, m, p2);
            let key: Vec<u8> = hflat.iter().map(|&x| x as u8).collect();
            if !seen.insert(key) {
                return Err(Error::InvalidInput("two isotropic lifts gave the same neighbor".into()));
            }
            let h: Vec<Vec<i64>> = (0..m).map(|j| (0..m).map(|i| hflat[i * m + j]).collect()).collect();
            let gram = neighbor_gram(g, &h, p2)?;
            let nb = Neighbor { h, gram };
            validate(l, p, r, &nb)?;
            f(&nb)?;
            count += 1;
        }
    }
    Ok(count)
}

/// Vectors `f_a` with `b(f_a, w_l) ≡ δ_al (mod p)`.
fn dual_vectors(bw: &[Vec<u64>], m: usize, p: u64) -> Result<Vec<Vec<i64>>> {
    let r = bw.len();
    let mut out = Vec::with_capacity(r);
    for a in 0..r {
        // solve bw · x = e_a via the augmented system
        let mut rows: Vec<Vec<u64>> = bw
            .iter()
            .enumerate()
            .map(|(l, row)| {
                let mut v = row.clone();
                v.push((l == a) as u64);
                v
            })
            .collect();
        let piv = rref(&mut rows, p);
        if piv.contains(&m) {
            return Err(Error::InvalidInput("isotropic basis is degenerate mod p".into()));
        }
        let mut x = vec![0i64; m];
        for (i, &c) in piv.iter().enumerate() {
            x[c] = rows[i][m] as i64;
        }
        out.push(x);
    }
    Ok(out)
}

fn neighbor_gram(g: &SymMatZ, h: &[Vec<i64>], p2: i64) -> Result<SymMatZ> {
    let m = g.dim();
    let mut flat = vec![0i64; m * m];
    for a in 0..m {
        let qa: Vec<i128> = (0..m)
            .map(|i| (0..m).map(|k| g.get(i, k) as i128 * h[a][k] as i128).sum())
            .collect();
        for b in 0..m {
            let v: i128 = (0..m).map(|i| qa[i] * h[b][i] as i128).sum();
            if v % p2 as i128 != 0 {
                return Err(Error::InvalidInput("neighbor Gram is not integral".into()));
            }
            flat[a * m + b] = i64::try_from(v / p2 as i128).map_err(|_| Error::Overflow("neighbor gram"))?;
        }
    }
    Ok(SymMatZ::from_flat(m, flat))
}

fn validate(l: &Lattice, p: u64, r: usize, nb: &Neighbor) -> Result<()> {
    let m = l.rank();
    if !nb.gram.is_even() {
        return Err(Error::InvalidInput("neighbor is not even".into()));
    }
    if nb.gram.det()? != l.det() {
        return Err(Error::InvalidInput("neighbor determinant differs".into()));
    }
    let mut flat = vec![0i64; m * m];
    for (j, c) in nb.h.iter().enumerate() {
        for i in 0..m {
            flat[i * m + j] = c[i];
        }
    }
    // invariant factors of pK relative to L, shifted by one
    let mut mults: BTreeMap<i64, usize> = BTreeMap::new();
    for v in crate::arith::snf_valuations_int(&flat, m, p)? {
        *mults.entry(v as i64 - 1).or_insert(0) += 1;
    }
    let mut want = BTreeMap::new();
    for (e, c) in [(-1i64, r), (0, m - 2 * r), (1, r)] {
        if c > 0 {
            want.insert(e, c);
        }
    }
    if mults != want {
        return Err(Error::InvalidInput(format!("neighbor invariant factors {mults:?}")));
    }
    Ok(())
}

/// The members of `neighbors(L, p, r)` as canonical frames over `L`.
#[derive(Clone, Debug)]
pub struct NeighborSet {
    pub base: Arc<Lattice>,
    pub p: u64,
    pub r: usize,
    pub members: Vec<SubframeBasis>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Integral Gram matrices of the members.
    pub fn grams(&self) -> Vec<SymMatZ> {
        self.members
            .iter()
            .map(|k| k.integral_gram().expect("validated neighbors are integral"))
            .collect()
    }
}

/// All `r`-neighbors of `l` at `p`, each checked for even integrality,
/// determinant, level and invariant factors.
pub fn neighbors(l: &Arc<Lattice>, p: u64, r: usize) -> Result<NeighborSet> {
    let mut members = Vec::new();
    for_each_neighbor(l, p, r, |nb| {
        let k = SubframeBasis::new(l.clone(), p, 1, &nb.h)?;
        let lat = k.to_lattice(None)?;
        if lat.level() != l.level() {
            return Err(Error::InvalidInput("neighbor level differs".into()));
        }
        members.push(k);
        Ok(())
    })?;
    Ok(NeighborSet {
        base: l.clone(),
        p,
        r,
        members,
    })
}
