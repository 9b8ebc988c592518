//! Column Hermite normal forms and Smith-form helpers.
//!
//! Lattices are spanned by matrix columns. The canonical basis is the column
//! HNF: column `t` has its lowest nonzero entry (the pivot) in row `ρ_t` with
//! `ρ_0 < ρ_1 < …`, pivots are positive, and every entry to the right of a
//! pivot in the pivot's row lies in `[0, pivot)`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("normal form"))
}

/// Extended gcd: `(g, x, y)` with `a x + b y = g >= 0`.
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Column HNF of the lattice spanned by `gens` (each of length `m`).
/// Returns the basis columns in canonical order; zero generators are dropped.
pub fn hnf_columns(gens: &[Vec<i64>], m: usize) -> Result<Vec<Vec<i64>>> {
    let mut active: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| {
            assert_eq!(g.len(), m, "generator length mismatch");
            g.iter().map(|&x| x as i128).collect::<Vec<_>>()
        })
        .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
        .collect();
    let mut pivots: Vec<(usize, Vec<i128>)> = Vec::new();
    for row in (0..m).rev() {
        let Some(first) = active.iter().position(|c| c[row] != 0) else {
            continue;
        };
        let mut piv = active.swap_remove(first);
        for c in active.iter_mut() {
            if c[row] == 0 {
                continue;
            }
            let (a, b) = (piv[row], c[row]);
            let (g, x, y) = egcd(a, b);
            let (ag, bg) = (a / g, b / g);
            for t in 0..m {
                let p_new = ck(ck(x.checked_mul(piv[t]))?.checked_add(ck(y.checked_mul(c[t]))?))?;
                let c_new = ck(ck(ag.checked_mul(c[t]))?.checked_sub(ck(bg.checked_mul(piv[t]))?))?;
                piv[t] = p_new;
                c[t] = c_new;
            }
            debug_assert_eq!(c[row], 0);
        }
        if piv[row] < 0 {
            piv.iter_mut().for_each(|x| *x = -*x);
        }
        active.retain(|c| c.iter().any(|&x| x != 0));
        pivots.push((row, piv));
    }
    pivots.reverse();
    reduce_above(&mut pivots)?;
    pivots
        .into_iter()
        .map(|(_, c)| {
            c.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Overflow("hnf entry")))
                .collect()
        })
        .collect()
}

fn reduce_above(pivots: &mut [(usize, Vec<i128>)]) -> Result<()> {
    let k = pivots.len();
    for t in (0..k).rev() {
        let (rho, pv) = (pivots[t].0, pivots[t].1[pivots[t].0]);
        for u in t + 1..k {
            let q = pivots[u].1[rho].div_euclid(pv);
            if q != 0 {
                let col_t = pivots[t].1.clone();
                for (x, y) in pivots[u].1.iter_mut().zip(col_t.iter()) {
                    *x = ck(x.checked_sub(ck(q.checked_mul(*y))?))?;
                }
            }
        }
    }
    Ok(())
}

/// Column HNF of a full-rank lattice known to contain `modulus·Z^m`.
/// All intermediate entries stay below `modulus`. Returns the upper-triangular
/// `m×m` basis row-major (column `j` is the `j`-th basis vector).
pub fn hnf_with_modulus(gens: &[Vec<i64>], m: usize, modulus: i64) -> Vec<i64> {
    let md = modulus as i128;
    let mut h = vec![0i128; m * m];
    for i in 0..m {
        h[i * m + i] = md;
    }
    let mut v = vec![0i128; m];
    for g in gens {
        for (t, x) in v.iter_mut().enumerate() {
            *x = (g[t] as i128).rem_euclid(md);
        }
        for i in (0..m).rev() {
            if v[i] == 0 {
                continue;
            }
            let (a, b) = (h[i * m + i], v[i]);
            let (gg, x, y) = egcd(a, b);
            let (ag, bg) = (a / gg, b / gg);
            for t in 0..=i {
                let hc = h[t * m + i];
                let nh = (x * hc + y * v[t]).rem_euclid(md);
                let nv = (ag * v[t] - bg * hc).rem_euclid(md);
                h[t * m + i] = nh;
                v[t] = nv;
            }
            h[i * m + i] = gg;
        }
    }
    for i in (0..m).rev() {
        let pv = h[i * m + i];
        for j in i + 1..m {
            let q = h[i * m + j].div_euclid(pv);
            if q != 0 {
                for t in 0..=i {
                    h[t * m + j] -= q * h[t * m + i];
                }
            }
        }
    }
    h.into_iter().map(|x| x as i64).collect()
}

/// Smith data of a nonsingular square matrix `M`: the column span of `M`
/// equals `A · diag(s) · Z^n` with `A` unimodular and `s_0 | s_1 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub a: Vec<i64>,
    pub s: Vec<i64>,
}

/// Smith form keeping track of the left transform only.
pub fn smith_left(mat: &[i64], n: usize) -> Result<Smith> {
    let mut b: Vec<i128> = mat.iter().map(|&x| x as i128).collect();
    let mut a: Vec<i128> = (0..n * n).map(|k| (k / n == k % n) as i128).collect();
    // Invariant: span(mat) = span(A · B).
    let row_add = |b: &mut Vec<i128>, a: &mut Vec<i128>, i: usize, j: usize, f: i128| {
        for c in 0..n {
            b[i * n + c] += f * b[j * n + c];
        }
        for r in 0..n {
            a[r * n + j] -= f * a[r * n + i];
        }
    };
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let x = b[i * n + j];
                    if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < b[bi * n + bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.ok_or(Error::Singular)?;
            if bi != t {
                for c in 0..n {
                    b.swap(t * n + c, bi * n + c);
                }
                for r in 0..n {
                    a.swap(r * n + t, r * n + bi);
                }
            }
            if bj != t {
                for r in 0..n {
                    b.swap(r * n + t, r * n + bj);
                }
            }
            let mut clean = true;
            for i in t + 1..n {
                let f = b[i * n + t].div_euclid(b[t * n + t]);
                if f != 0 {
                    row_add(&mut b, &mut a, i, t, -f);
                }
                if b[i * n + t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let f = b[t * n + j].div_euclid(b[t * n + t]);
                if f != 0 {
                    for r in 0..n {
                        b[r * n + j] -= f * b[r * n + t];
                    }
                }
                if b[t * n + j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let piv = b[t * n + t];
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| b[i * n + j] % piv != 0);
            match bad {
                Some((i, _)) => row_add(&mut b, &mut a, t, i, 1),
                None => break,
            }
        }
        if b[t * n + t] < 0 {
            for c in 0..n {
                b[t * n + c] = -b[t * n + c];
            }
            for r in 0..n {
                a[r * n + t] = -a[r * n + t];
            }
        }
    }
    let cv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("smith form"));
    Ok(Smith {
        a: a.into_iter().map(cv).collect::<Result<_>>()?,
        s: (0..n).map(|t| cv(b[t * n + t])).collect::<Result<_>>()?,
    })
}

fn vp(mut x: i128, p: i128) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// p-adic valuations of the invariant factors of a nonsingular integer
/// matrix (row-major `n×n`), sorted ascending.
///
/// Works over the localization at `p`: rows are rescaled by units, which
/// leaves the p-parts of the invariant factors unchanged.
pub fn snf_valuations_int(mat: &[i64], n: usize, p: u64) -> Result<Vec<u32>> {
    let p = p as i128;
    let mut a: Vec<i128> = mat.iter().map(|&x| x as i128).collect();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    while !rows.is_empty() {
        let mut best: Option<(usize, usize, u32)> = None;
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                let x = a[r * n + c];
                if x != 0 {
                    let v = vp(x, p);
                    if best.map_or(true, |b| v < b.2) {
                        best = Some((ri, ci, v));
                    }
                }
            }
        }
        let (ri, ci, v) = best.ok_or(Error::Singular)?;
        let (r, c) = (rows[ri], cols[ci]);
        let pv = p.pow(v);
        let u = a[r * n + c] / pv;
        for &i in rows.iter() {
            if i == r || a[i * n + c] == 0 {
                continue;
            }
            let f = a[i * n + c] / pv;
            let mut g = 0i128;
            for &j in cols.iter() {
                let x = ck(ck(u.checked_mul(a[i * n + j]))?.checked_sub(ck(f.checked_mul(a[r * n + j]))?))?;
                a[i * n + j] = x;
                g = g.gcd(&x);
            }
            if g != 0 {
                let unit = g / p.pow(vp(g, p));
                if unit > 1 {
                    for &j in cols.iter() {
                        a[i * n + j] /= unit;
                    }
                }
            }
        }
        out.push(v);
        rows.swap_remove(ri);
        cols.swap_remove(ci);
    }
    out.sort_unstable();
    Ok(out)
}

/// p-adic valuations of the invariant factors of a nonsingular rational
/// matrix whose denominators are powers of `p`.
pub fn snf_valuations(mat: &[Vec<BigRational>], p: u64) -> Result<Vec<i64>> {
    let n = mat.len();
    let mut den = BigInt::one();
    for x in mat.iter().flatten() {
        den = den.lcm(x.denom());
    }
    let pb = BigInt::from(p);
    let mut e = 0i64;
    let mut d = den.clone();
    while (&d % &pb).is_zero() {
        d /= &pb;
        e += 1;
    }
    if !d.is_one() {
        return Err(Error::InvalidInput(format!(
            "denominators must be powers of {p}"
        )));
    }
    let mut flat = Vec::with_capacity(n * n);
    for row in mat {
        if row.len() != n {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        for x in row {
            let v = (x * BigRational::from_integer(den.clone())).to_integer();
            let v = v
                .abs()
                .to_i64()
                .map(|a| if v.is_negative() { -a } else { a })
                .ok_or(Error::Overflow("snf input"))?;
            flat.push(v);
        }
    }
    Ok(snf_valuations_int(&flat, n, p)?
        .into_iter()
        .map(|v| v as i64 - e)
        .collect())
}
