//! Local data at one `U`: the lattices `Λ` between `pΩ` and `Δ`, their
//! multiplicities, and the residue spaces whose isotropic subspaces weight
//! them.
//!
//! Coordinates are relative to a basis `V = X/p` of `Ω`. A lattice `Λ` with
//! `pΩ ⊆ Λ ⊆ p⁻¹Ω` is `V·M/p` for an integer lattice `p²Zⁿ ⊆ M ⊆ Zⁿ`, and
//! `Λ ⊆ L` iff every column `w` of `M` satisfies `Xw ≡ 0 mod p²`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{exponent_E_j, exponent_e_j, ExponentForm};
use crate::arith::{mat_mul, pow_q, smith_left, transpose, SymMatZ};
use crate::error::Result;
use crate::ffquad::{alpha_j, linalg::inv_mod, FFQuadSpace};
use crate::lattice::Lattice;

/// Constants shared by every weight at one `(L, p, n)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LocalData {
    pub p: u64,
    pub k: u32,
    pub n: usize,
    pub chi: i8,
}

/// One `Λ` seen from `Ω`: `r0` directions shrunk to `pΩ`, `r2` directions
/// grown to `p⁻¹Ω`, and the residue space `(Ω∩Λ)/p(Ω+Λ)`.
#[derive(Clone, Debug)]
pub(crate) struct Position {
    pub h: Vec<i64>,
    pub r0: usize,
    pub r2: usize,
    pub residue: FFQuadSpace,
}

impl LocalData {
    pub fn new(l: &Lattice, p: u64, n: usize) -> Result<Self> {
        Ok(LocalData {
            p,
            k: l.k(),
            n,
            chi: l.chi_star(p)?,
        })
    }

    fn p2(&self) -> i64 {
        (self.p * self.p) as i64
    }

    /// Every `Λ` admissible for the row module `rowmod` (column HNF mod `p²`
    /// of the rows of `X`), with `t` the Gram of the basis `V`.
    pub fn positions(&self, t: &SymMatZ, rowmod: &[i64]) -> Result<Vec<Position>> {
        let n = self.n;
        let p2 = self.p2();
        let member = |w: &[i64]| {
            (0..n).all(|c| (0..n).map(|i| rowmod[i * n + c] * w[i]).sum::<i64>().rem_euclid(p2) == 0)
        };
        let mut out = Vec::new();
        for h in lattices_between(n, self.p as i64, member) {
            out.push(self.position(t, h)?);
        }
        Ok(out)
    }

    fn position(&self, t: &SymMatZ, h: Vec<i64>) -> Result<Position> {
        let n = self.n;
        let p = self.p as i64;
        let sm = smith_left(&h, n)?;
        let r0 = sm.s.iter().filter(|&&s| s == p * p).count();
        let r2 = sm.s.iter().filter(|&&s| s == 1).count();
        let mid: Vec<usize> = (0..n).filter(|&i| sm.s[i] == p).collect();
        debug_assert_eq!(r0 + r2 + mid.len(), n);
        let v = mat_mul(&transpose(&sm.a, n, n), &mat_mul(t.flat(), &sm.a, n, n, n), n, n, n);
        let d = mid.len();
        let sub: Vec<i64> = mid
            .iter()
            .flat_map(|&a| mid.iter().map(move |&b| (a, b)))
            .map(|(a, b)| v[a * n + b])
            .collect();
        let residue = FFQuadSpace::from_even_gram(self.p, &SymMatZ::from_flat(d, sub))?;
        Ok(Position { h, r0, r2, residue })
    }

    /// `χ^{e_j} p^{E_j} α_j` for one position.
    pub fn weight(&self, j: usize, pos: &Position) -> Result<BigRational> {
        let (r0, r2) = (pos.r0, pos.r2);
        if r0 + r2 > j {
            return Ok(BigRational::zero());
        }
        let alpha = alpha_j(&pos.residue, self.n, j, r0, r2)?;
        if alpha.is_zero() {
            return Ok(BigRational::zero());
        }
        let (k, n, jj) = (self.k as i64, self.n as i64, j as i64);
        let big = exponent_E_j(k, n, jj, r0 as i64, r2 as i64, ExponentForm::Unprimed);
        let e = exponent_e_j(jj, r0 as i64, r2 as i64, ExponentForm::Unprimed);
        let sign = if self.chi == -1 && e.rem_euclid(2) == 1 { -1 } else { 1 };
        Ok(pow_q(self.p, big) * BigRational::from_integer(alpha * BigInt::from(sign)))
    }

    /// `Σ_Λ χ^{e_j} p^{E_j} α_j` for `j = 0..=jmax`.
    pub fn class_weights(&self, t: &SymMatZ, rowmod: &[i64], jmax: usize) -> Result<Vec<BigRational>> {
        let mut out = vec![BigRational::zero(); jmax + 1];
        for pos in self.positions(t, rowmod)? {
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.weight(j, &pos)?;
            }
        }
        Ok(out)
    }
}

/// Column HNF mod `p²` of the module spanned by the rows of `X`
/// (`X` given by its `n` columns of length `m`).
pub(crate) fn row_module(cols: &[&[i64]], p2: i64) -> Vec<i64> {
    let n = cols.len();
    let m = cols.first().map_or(0, |c| c.len());
    let rows: Vec<Vec<i64>> = (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    crate::arith::hnf_with_modulus(&rows, n, p2)
}

/// All upper-triangular column HNFs `H` with diagonal in `{1, p, p²}` whose
/// span contains `p²Zⁿ` and whose columns pass `member`.
pub(crate) fn lattices_between<F: Fn(&[i64]) -> bool>(n: usize, p: i64, member: F) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut h = vec![0i64; n * n];
    fill_diag(n, p, 0, &mut h, &member, &mut out);
    out
}

fn fill_diag<F: Fn(&[i64]) -> bool>(n: usize, p: i64, i: usize, h: &mut Vec<i64>, member: &F, out: &mut Vec<Vec<i64>>) {
    if i == n {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|r| (r + 1..n).map(move |c| (r, c))).collect();
        fill_off(n, p, &slots, 0, h, member, out);
        return;
    }
    for d in [1, p, p * p] {
        h[i * n + i] = d;
        fill_diag(n, p, i + 1, h, member, out);
    }
}

fn fill_off<F: Fn(&[i64]) -> bool>(
    n: usize,
    p: i64,
    slots: &[(usize, usize)],
    s: usize,
    h: &mut Vec<i64>,
    member: &F,
    out: &mut Vec<Vec<i64>>,
) {
    if s == slots.len() {
        let col = |c: usize| (0..n).map(|r| h[r * n + c]).collect::<Vec<_>>();
        if contains_p2(h, n, p * p) && (0..n).all(|c| member(&col(c))) {
            out.push(h.clone());
        }
        return;
    }
    let (r, c) = slots[s];
    for x in 0..h[r * n + r] {
        h[r * n + c] = x;
        fill_off(n, p, slots, s + 1, h, member, out);
    }
    h[r * n + c] = 0;
}

/// `p²Zⁿ ⊆ span(H)` for upper-triangular `H`, by back substitution.
fn contains_p2(h: &[i64], n: usize, p2: i64) -> bool {
    (0..n).all(|c| {
        let mut z = vec![0i64; n];
        for i in (0..n).rev() {
            let b = if i == c { p2 } else { 0 } - (i + 1..n).map(|j| h[i * n + j] * z[j]).sum::<i64>();
            if b % h[i * n + i] != 0 {
                return false;
            }
            z[i] = b / h[i * n + i];
        }
        true
    })
}

/// Reduced basis of `Ω = span(X)/p`: numerators reordered and combined by
/// unimodular column operations so that the first `d0` columns lie in
/// `p⁻¹L∖L` and are independent mod `L`, the next `d1` lie in `L∖pL` and,
/// together with `p` times the first `d0`, are independent mod `pL`, and the
/// rest lie in `pL`. Returns the numerators and `(d0, d1, d2)`.
pub(crate) fn reduced_basis(cols: &[Vec<i64>], p: u64) -> (Vec<Vec<i64>>, [usize; 3]) {
    let pi = p as i64;
    let reduce = |x: &mut Vec<i64>, basis: &[(usize, Vec<i64>)]| {
        for (r, b) in basis {
            let f = (x[*r].rem_euclid(pi) as u64 * inv_mod(b[*r].rem_euclid(pi) as u64, p)) % p;
            if f != 0 {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= f as i64 * bi;
                }
            }
        }
        x.iter().position(|&v| v.rem_euclid(pi) != 0)
    };
    let mut first: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut rest = Vec::new();
    for x in cols {
        let mut x = x.clone();
        match reduce(&mut x, &first) {
            Some(r) => first.push((r, x)),
            None => rest.push(x.into_iter().map(|v| v / pi).collect::<Vec<_>>()),
        }
    }
    let d0 = first.len();
    let mut second = first.clone();
    let mut inner = Vec::new();
    let mut deep = Vec::new();
    for mut y in rest {
        match reduce(&mut y, &second) {
            Some(r) => {
                second.push((r, y.clone()));
                inner.push(y);
            }
            None => deep.push(y),
        }
    }
    let d = [d0, inner.len(), deep.len()];
    let mut out: Vec<Vec<i64>> = first.into_iter().map(|(_, x)| x).collect();
    out.extend(inner.into_iter().chain(deep).map(|y| y.into_iter().map(|v| v * pi).collect()));
    (out, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_between(n: usize, p: i64) -> usize {
        // Subgroups of (Z/p²)ⁿ, counted as sets of residues.
        let p2 = p * p;
        let all: Vec<Vec<i64>> = (0..p2.pow(n as u32))
            .map(|mut c| {
                (0..n)
                    .map(|_| {
                        let d = c % p2;
                        c /= p2;
                        d
                    })
                    .collect()
            })
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        for a in &all {
            for b in &all {
                let mut set = std::collections::BTreeSet::new();
                for s in 0..p2 {
                    for t in 0..p2 {
                        let v: Vec<i64> = (0..n).map(|i| (s * a[i] + t * b[i]).rem_euclid(p2)).collect();
                        set.insert(v);
                    }
                }
                seen.insert(set.into_iter().collect::<Vec<_>>());
            }
        }
        seen.len()
    }

    #[test]
    fn hnf_enumeration_matches_subgroup_count() {
        for p in [2i64, 3] {
            assert_eq!(lattices_between(2, p, |_| true).len(), brute_between(2, p), "p = {p}");
        }
    }

    #[test]
    fn reduced_basis_pattern() {
        // X = 2·(e1) + ... over E8, p = 2.
        let p = 2u64;
        let cols = vec![vec![2, 0, 0, 0], vec![1, 1, 0, 0], vec![4, 0, 2, 0]];
        let (b, d) = reduced_basis(&cols, p);
        assert_eq!(d.iter().sum::<usize>(), 3);
        assert_eq!(d[0], 1);
        for x in &b[..d[0]] {
            assert!(x.iter().any(|v| v % 2 != 0));
        }
        for x in &b[d[0]..] {
            assert!(x.iter().all(|v| v % 2 == 0));
        }
        for x in &b[d[0] + d[1]..] {
            assert!(x.iter().all(|v| v % 4 == 0));
        }
    }
}
