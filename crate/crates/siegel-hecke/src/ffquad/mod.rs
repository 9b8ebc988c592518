//! Quadratic spaces over prime fields: Witt classification, totally isotropic
//! subspace counts, representation counts `r*`/`R*`, orthogonal group orders
//! and exact character sums.

pub mod linalg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{beta, is_prime, kronecker, CycInt, SymMatZ};
use crate::error::{Error, Result};
use linalg::{complement, det_mod, inv_mod, kernel, reduce, subspaces};

/// Largest vector space (in elements) enumerated by the brute-force counters.
pub const BRUTE_CAPACITY: u64 = 1 << 20;
/// Largest matrix space `p^(rows·cols)` searched by `rep_count_rstar`.
pub const REP_CAPACITY: u64 = 1 << 22;
/// Largest `p^m` summed by `gauss_sum_lattice`.
pub const GAUSS_CAPACITY: u64 = 1 << 26;

/// A quadratic space `(F_p^dim, q)`.
///
/// `bilin` is the polar form `b(x,y) = q(x+y) - q(x) - q(y)` and `qdiag[i] = q(e_i)`.
/// For odd `p` the diagonal is redundant (`b(e_i,e_i) = 2 q(e_i)`); for `p = 2` it
/// carries the information the alternating form loses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FFQuadSpace {
    p: u64,
    dim: usize,
    bilin: Vec<u64>,
    qdiag: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WittType {
    /// Orthogonal sum of hyperbolic planes.
    Plus,
    /// Hyperbolic planes plus one anisotropic plane.
    Minus,
    /// Odd-dimensional nondegenerate part.
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WittReport {
    pub radical_dim: usize,
    pub witt_type: WittType,
    pub nondegenerate_dim: usize,
}

impl FFQuadSpace {
    /// Space with polar form `bilin` (entries reduced mod `p`); `p` must be odd.
    pub fn new(p: u64, bilin: &[Vec<i64>]) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidInput(
                "over F_2 the quadratic diagonal must be given (use with_qdiag)".into(),
            ));
        }
        let dim = bilin.len();
        let b = flat_mod(bilin, p)?;
        let inv2 = inv_mod(2, p);
        let qdiag = (0..dim).map(|i| b[i * dim + i] * inv2 % p).collect();
        Self::checked(p, dim, b, qdiag)
    }

    /// Space with explicit polar form and diagonal values `q(e_i)`.
    pub fn with_qdiag(p: u64, bilin: &[Vec<i64>], qdiag: &[i64]) -> Result<Self> {
        let dim = bilin.len();
        if qdiag.len() != dim {
            return Err(Error::InvalidInput("qdiag length differs from dimension".into()));
        }
        let b = flat_mod(bilin, p)?;
        let qd = qdiag.iter().map(|&x| reduce(x, p)).collect();
        Self::checked(p, dim, b, qd)
    }

    /// Reduction of the quadratic form `x ↦ xᵀGx/2` of an even integral Gram `G`.
    pub fn from_even_gram(p: u64, g: &SymMatZ) -> Result<Self> {
        if !g.is_even() {
            return Err(Error::InvalidInput("gram is not even".into()));
        }
        let n = g.dim();
        let b = g.flat().iter().map(|&x| reduce(x, p)).collect();
        let qd = (0..n).map(|i| reduce(g.get(i, i) / 2, p)).collect();
        Self::checked(p, n, b, qd)
    }

    pub fn zero(p: u64, dim: usize) -> Self {
        FFQuadSpace {
            p,
            dim,
            bilin: vec![0; dim * dim],
            qdiag: vec![0; dim],
        }
    }

    /// Orthogonal sum of `w` hyperbolic planes.
    pub fn hyperbolic(p: u64, w: usize) -> Self {
        let dim = 2 * w;
        let mut s = Self::zero(p, dim);
        for i in 0..w {
            s.bilin[2 * i * dim + 2 * i + 1] = 1;
            s.bilin[(2 * i + 1) * dim + 2 * i] = 1;
        }
        s
    }

    /// An anisotropic plane: `x² - ωy²` (ω a nonsquare) for odd `p`, `x² + xy + y²` over F_2.
    pub fn anisotropic_plane(p: u64) -> Self {
        if p == 2 {
            return FFQuadSpace {
                p,
                dim: 2,
                bilin: vec![0, 1, 1, 0],
                qdiag: vec![1, 1],
            };
        }
        let w = nonsquare(p);
        let mw = (p - w) % p;
        FFQuadSpace {
            p,
            dim: 2,
            bilin: vec![2 % p, 0, 0, 2 * mw % p],
            qdiag: vec![1, mw],
        }
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &FFQuadSpace) -> Self {
        assert_eq!(self.p, other.p);
        let (a, b) = (self.dim, other.dim);
        let d = a + b;
        let mut s = Self::zero(self.p, d);
        for i in 0..a {
            for j in 0..a {
                s.bilin[i * d + j] = self.bilin[i * a + j];
            }
            s.qdiag[i] = self.qdiag[i];
        }
        for i in 0..b {
            for j in 0..b {
                s.bilin[(a + i) * d + a + j] = other.bilin[i * b + j];
            }
            s.qdiag[a + i] = other.qdiag[i];
        }
        s
    }

    fn checked(p: u64, dim: usize, bilin: Vec<u64>, qdiag: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        for i in 0..dim {
            for j in 0..dim {
                if bilin[i * dim + j] != bilin[j * dim + i] {
                    return Err(Error::InvalidInput("bilinear form is not symmetric".into()));
                }
            }
            if bilin[i * dim + i] != 2 * qdiag[i] % p {
                return Err(Error::InvalidInput(
                    "diagonal of the polar form must equal 2·q(e_i)".into(),
                ));
            }
        }
        Ok(FFQuadSpace {
            p,
            dim,
            bilin,
            qdiag,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bilin(&self) -> &[u64] {
        &self.bilin
    }

    pub fn qdiag(&self) -> &[u64] {
        &self.qdiag
    }

    pub fn b(&self, x: &[u64], y: &[u64]) -> u64 {
        linalg::dot(x, &self.bilin, y, self.p)
    }

    pub fn q(&self, x: &[u64]) -> u64 {
        let (p, n) = (self.p, self.dim);
        let mut s = 0u64;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            s = (s + self.qdiag[i] * (x[i] * x[i] % p)) % p;
            for j in i + 1..n {
                s = (s + self.bilin[i * n + j] * (x[i] * x[j] % p)) % p;
            }
        }
        s
    }

    /// The form restricted to the span of `basis` (rows), in that basis.
    pub fn restrict(&self, basis: &[Vec<u64>]) -> FFQuadSpace {
        let d = basis.len();
        let mut s = Self::zero(self.p, d);
        for i in 0..d {
            for j in 0..d {
                s.bilin[i * d + j] = self.b(&basis[i], &basis[j]);
            }
            s.qdiag[i] = self.q(&basis[i]);
        }
        s
    }

    fn bilin_rows(&self) -> Vec<Vec<u64>> {
        self.bilin.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Basis of the radical `{x : b(x,·) = 0, q(x) = 0}`.
    pub fn radical(&self) -> Vec<Vec<u64>> {
        if self.dim == 0 {
            return vec![];
        }
        let rad_b = kernel(&self.bilin_rows(), self.dim, self.p);
        if self.p != 2 || rad_b.is_empty() {
            return rad_b;
        }
        // q is additive on rad(b) over F_2; take its kernel there.
        let qs: Vec<u64> = rad_b.iter().map(|v| self.q(v)).collect();
        let k = kernel(&[qs], rad_b.len(), 2);
        k.iter()
            .map(|c| {
                let mut v = vec![0u64; self.dim];
                for (ci, r) in c.iter().zip(&rad_b) {
                    if *ci == 1 {
                        for l in 0..self.dim {
                            v[l] ^= r[l];
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// The nondegenerate part: the form on a complement of the radical.
    pub fn nondegenerate_part(&self) -> (usize, FFQuadSpace) {
        let rad = self.radical();
        let comp = complement(&rad, self.dim, self.p);
        (rad.len(), self.restrict(&comp))
    }
}

fn flat_mod(rows: &[Vec<i64>], p: u64) -> Result<Vec<u64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    Ok(rows.iter().flatten().map(|&x| reduce(x, p)).collect())
}

/// Least quadratic nonresidue mod an odd prime.
pub fn nonsquare(p: u64) -> u64 {
    (2..p).find(|&a| kronecker(a as i64, p as i64) == -1).unwrap_or(1)
}

/// Radical dimension and Witt type of the nondegenerate part.
pub fn classify(space: &FFQuadSpace) -> WittReport {
    let (rad, nd) = space.nondegenerate_part();
    let d = nd.dim;
    let p = space.p;
    let witt_type = if d % 2 == 1 {
        WittType::Odd
    } else if p == 2 {
        if arf(&nd) == 0 {
            WittType::Plus
        } else {
            WittType::Minus
        }
    } else {
        let det = det_mod(&nd.bilin, d, p) as i64;
        let sign = if (d / 2) % 2 == 1 { -1 } else { 1 };
        // Discriminant of q = b/2 differs from det(b) by 2^d, a square.
        if d == 0 || kronecker(sign * det, p as i64) == 1 {
            WittType::Plus
        } else {
            WittType::Minus
        }
    };
    WittReport {
        radical_dim: rad,
        witt_type,
        nondegenerate_dim: d,
    }
}

/// Arf invariant of a nondegenerate even-dimensional space over F_2.
fn arf(space: &FFQuadSpace) -> u64 {
    let n = space.dim;
    let mut vecs: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as u64).collect())
        .collect();
    let mut a = 0u64;
    while let Some(e) = vecs.pop() {
        let Some(fi) = vecs.iter().position(|f| space.b(&e, f) == 1) else {
            debug_assert!(false, "form is degenerate");
            return 0;
        };
        let f = vecs.swap_remove(fi);
        a ^= space.q(&e) & space.q(&f);
        for x in vecs.iter_mut() {
            let (be, bf) = (space.b(x, &e), space.b(x, &f));
            for l in 0..n {
                x[l] ^= (bf & e[l]) ^ (be & f[l]);
            }
        }
    }
    a
}

fn qpow(q: u64, e: u32) -> BigInt {
    BigInt::from(q).pow(e)
}

/// Totally isotropic `d`-subspaces of a nondegenerate space of the given type.
fn ti_nondegenerate(q: u64, dim: usize, t: WittType, d: usize) -> BigInt {
    if d == 0 {
        return BigInt::one();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let w = (dim / 2) as i64;
    for i in 0..d as i64 {
        let f = match t {
            WittType::Odd => {
                if w - i <= 0 {
                    return BigInt::zero();
                }
                qpow(q, 2 * (w - i) as u32) - 1
            }
            WittType::Plus | WittType::Minus => {
                let eps: i64 = if t == WittType::Plus { 1 } else { -1 };
                if w - i - 1 < 0 {
                    return BigInt::zero();
                }
                (qpow(q, (w - i) as u32) - eps) * (qpow(q, (w - i - 1) as u32) + eps)
            }
        };
        if f.is_zero() {
            return f;
        }
        num *= f;
        den *= qpow(q, (i + 1) as u32) - 1;
    }
    let (quo, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quo
}

/// Number of `d`-dimensional subspaces on which `q` vanishes identically.
///
/// Splits off the radical `R` (dim ρ) and sums over `a = dim(W ∩ R)`:
/// `Σ_a β(ρ,a) · p^{(d-a)(ρ-a)} · TI_N(d-a)`.
pub fn count_totally_isotropic(space: &FFQuadSpace, d: usize) -> BigInt {
    if d > space.dim {
        return BigInt::zero();
    }
    let rep = classify(space);
    let (rho, nd) = (rep.radical_dim, rep.nondegenerate_dim);
    let q = space.p;
    let mut total = BigInt::zero();
    for a in 0..=d.min(rho) {
        let ti = ti_nondegenerate(q, nd, rep.witt_type, d - a);
        if ti.is_zero() {
            continue;
        }
        total += beta(q, rho as u32, a as u32) * qpow(q, ((d - a) * (rho - a)) as u32) * ti;
    }
    total
}

fn enumerate_vectors(p: u64, dim: usize) -> Result<Vec<Vec<u64>>> {
    let size = (p as u128).pow(dim as u32);
    if size > BRUTE_CAPACITY as u128 {
        return Err(Error::Capacity(format!(
            "{p}^{dim} vectors exceed the brute-force capacity {BRUTE_CAPACITY}"
        )));
    }
    let mut out = Vec::with_capacity(size as usize);
    for code in 0..size as u64 {
        let mut c = code;
        out.push(
            (0..dim)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect(),
        );
    }
    Ok(out)
}

/// Brute-force count of totally isotropic `d`-subspaces: walks every
/// subspace in reduced echelon form and tests its basis.
pub fn count_totally_isotropic_brute(space: &FFQuadSpace, d: usize) -> Result<BigInt> {
    if d > space.dim {
        return Ok(BigInt::zero());
    }
    let p = space.p;
    let total = beta(p, space.dim as u32, d as u32);
    if total > BigInt::from(BRUTE_CAPACITY) {
        return Err(Error::Capacity(format!(
            "{total} subspaces exceed the brute-force capacity {BRUTE_CAPACITY}"
        )));
    }
    let count = subspaces(p, space.dim, d)
        .iter()
        .filter(|rows| {
            rows.iter().all(|v| space.q(v) == 0)
                && (0..d).all(|i| (i + 1..d).all(|l| space.b(&rows[i], &rows[l]) == 0))
        })
        .count();
    Ok(BigInt::from(count))
}

/// Number of totally isotropic subspaces of codimension `n - j` in an
/// `(n - r0 - r2)`-dimensional residue space.
pub fn alpha_j(space: &FFQuadSpace, n: usize, j: usize, r0: usize, r2: usize) -> Result<BigInt> {
    if space.dim + r0 + r2 != n {
        return Err(Error::InvalidInput(format!(
            "residue space has dimension {} but n - r0 - r2 = {}",
            space.dim,
            n as i64 - (r0 + r2) as i64
        )));
    }
    if j < r0 + r2 {
        return Ok(BigInt::zero());
    }
    if j == r0 + r2 {
        return Ok(BigInt::one());
    }
    Ok(count_totally_isotropic(space, j - r0 - r2))
}

/// `r*(V,U)`: injective linear maps `C: F^a → V` with `q_V ∘ C = q_U`
/// (polar form and diagonal both matched), and `R* = r* / o(U)`.
pub fn rep_count_rstar(v: &FFQuadSpace, u: &FFQuadSpace) -> Result<(BigInt, BigInt)> {
    let r = rep_count_raw(v, u)?;
    let o = orth_order(u)?;
    let (quo, rem) = r.div_rem(&o);
    if !rem.is_zero() {
        return Err(Error::InvalidInput(format!("r* = {r} is not divisible by o(U) = {o}")));
    }
    Ok((r, quo))
}

/// Order of the orthogonal group of `U` (brute force).
pub fn orth_order(u: &FFQuadSpace) -> Result<BigInt> {
    rep_count_raw(u, u)
}

fn rep_count_raw(v: &FFQuadSpace, u: &FFQuadSpace) -> Result<BigInt> {
    if v.p != u.p {
        return Err(Error::InvalidInput("spaces over different fields".into()));
    }
    let (p, a) = (v.p, u.dim);
    if a > v.dim {
        return Ok(BigInt::zero());
    }
    let size = (p as u128).checked_pow((v.dim * a) as u32);
    if size.map_or(true, |s| s > REP_CAPACITY as u128) {
        return Err(Error::Capacity(format!(
            "{p}^({}·{a}) matrices exceed the capacity {REP_CAPACITY}",
            v.dim
        )));
    }
    let vecs = enumerate_vectors(p, v.dim)?;
    let qv: Vec<u64> = vecs.iter().map(|x| v.q(x)).collect();
    fn rec(
        v: &FFQuadSpace,
        u: &FFQuadSpace,
        vecs: &[Vec<u64>],
        qv: &[u64],
        chosen: &mut Vec<usize>,
        count: &mut u64,
    ) {
        let s = chosen.len();
        if s == u.dim {
            let rows: Vec<Vec<u64>> = chosen.iter().map(|&i| vecs[i].clone()).collect();
            if linalg::rank(&rows, v.p) == s {
                *count += 1;
            }
            return;
        }
        for (i, x) in vecs.iter().enumerate() {
            if qv[i] != u.qdiag[s] {
                continue;
            }
            if chosen
                .iter()
                .enumerate()
                .any(|(t, &c)| v.b(&vecs[c], x) != u.bilin[t * u.dim + s])
            {
                continue;
            }
            chosen.push(i);
            rec(v, u, vecs, qv, chosen, count);
            chosen.pop();
        }
    }
    let mut count = 0u64;
    rec(v, u, &vecs, &qv, &mut Vec::new(), &mut count);
    Ok(BigInt::from(count))
}

/// `Σ_{u ∈ F_p^m} ζ_p^{Q[u]/2}` as an exact cyclotomic integer.
pub fn gauss_sum_lattice(qbar: &SymMatZ, p: u64) -> Result<CycInt> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Unsupported(format!(
            "Gauss sums need an odd prime, got {p}"
        )));
    }
    if !qbar.is_even() {
        return Err(Error::InvalidInput("gram is not even".into()));
    }
    let m = qbar.dim();
    let g = qbar.flat().iter().map(|&x| reduce(x, p)).collect::<Vec<_>>();
    if det_mod(&g, m, p) == 0 {
        return Err(Error::Hypothesis(format!(
            "{p} divides the determinant, so the form is not unimodular at {p}"
        )));
    }
    if (p as u128).pow(m as u32) > GAUSS_CAPACITY as u128 {
        return Err(Error::Capacity(format!("{p}^{m} terms exceed {GAUSS_CAPACITY}")));
    }
    let space = FFQuadSpace::from_even_gram(p, qbar)?;
    let mut hist = vec![0u64; p as usize];
    let mut x = vec![0u64; m];
    gauss_rec(&space, 0, 0, &mut x, &mut hist);
    Ok(CycInt::from_histogram(p, &hist))
}

fn gauss_rec(s: &FFQuadSpace, i: usize, val: u64, x: &mut [u64], hist: &mut [u64]) {
    let (p, m) = (s.p, s.dim);
    if i == m {
        hist[val as usize] += 1;
        return;
    }
    let mut lin = 0u64;
    for j in 0..i {
        lin = (lin + s.bilin[j * m + i] * x[j]) % p;
    }
    for xi in 0..p {
        x[i] = xi;
        let v = (val + s.qdiag[i] * (xi * xi % p) + lin * xi) % p;
        if i + 1 == m {
            hist[v as usize] += 1;
        } else {
            gauss_rec(s, i + 1, v, x, hist);
        }
    }
    x[i] = 0;
}

/// Sum over nonsingular symmetric `a×a` matrices `W` of `ζ^{tr(G W)}`, summed
/// over all `a`-dimensional subspaces with polar Gram `G`.
fn alpha_prime(v: &FFQuadSpace, a: usize) -> Result<BigInt> {
    let p = v.p;
    if a == 0 {
        return Ok(BigInt::one());
    }
    let entries = a * (a + 1) / 2;
    if (p as u128).pow(entries as u32) > BRUTE_CAPACITY as u128 {
        return Err(Error::Capacity("too many symmetric matrices".into()));
    }
    let mut ws: Vec<Vec<u64>> = Vec::new();
    for code in 0..p.pow(entries as u32) {
        let mut w = vec![0u64; a * a];
        let mut c = code;
        for i in 0..a {
            for j in i..a {
                w[i * a + j] = c % p;
                w[j * a + i] = c % p;
                c /= p;
            }
        }
        if det_mod(&w, a, p) != 0 {
            ws.push(w);
        }
    }
    let mut hist = vec![0u64; p as usize];
    for basis in subspaces(p, v.dim, a) {
        let g = v.restrict(&basis);
        for w in &ws {
            let t = g.bilin.iter().zip(w).map(|(x, y)| x * y % p).sum::<u64>() % p;
            hist[t as usize] += 1;
        }
    }
    CycInt::from_histogram(p, &hist)
        .to_integer()
        .ok_or_else(|| Error::InvalidInput("character sum is not rational".into()))
}

/// Both sides of the identity
/// `Σ_{a=0}^{j-r} β(n-r-a, j-r-a) α'_a = p^{(j-r)(j-r+1)/2} R*(V, 0_{j-r})`.
pub fn closing_identity_sides(v: &FFQuadSpace, n: usize, j: usize, r: usize) -> Result<(BigInt, BigInt)> {
    let p = v.p;
    if p == 2 {
        return Err(Error::Unsupported("the closing identity is checked for odd p only".into()));
    }
    if v.dim + r != n || r > j {
        return Err(Error::InvalidInput(format!(
            "need dim V = n - r and r <= j (dim {}, n {n}, j {j}, r {r})",
            v.dim
        )));
    }
    let t = j - r;
    let mut lhs = BigInt::zero();
    // a > dim V leaves no subspaces to count.
    for a in 0..=t.min(n - r) {
        let b = beta(p, (n - r - a) as u32, (t - a) as u32);
        if b.is_zero() {
            continue;
        }
        lhs += b * alpha_prime(v, a)?;
    }
    let (_, rstar) = rep_count_rstar(v, &FFQuadSpace::zero(p, t))?;
    let rhs = qpow(p, (t * (t + 1) / 2) as u32) * rstar;
    Ok((lhs, rhs))
}

pub fn thm45_closing_identity_check(v: &FFQuadSpace, n: usize, j: usize, r: usize) -> Result<bool> {
    let (l, r) = closing_identity_sides(v, n, j, r)?;
    Ok(l == r)
}

/// Representatives of every isometry class of quadratic space of dimension
/// `dim` over `F_p`, `p` odd (diagonal forms over `{0, 1, ω}` up to order).
pub fn all_spaces(p: u64, dim: usize) -> Vec<FFQuadSpace> {
    let w = nonsquare(p) as i64;
    let vals = [0i64, 1, w];
    let mut out = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        if idx.windows(2).all(|x| x[0] <= x[1]) {
            let rows: Vec<Vec<i64>> = (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { 2 * vals[idx[i]] } else { 0 }).collect())
                .collect();
            out.push(FFQuadSpace::new(p, &rows).expect("diagonal form"));
        }
        let mut k = 0;
        while k < dim {
            idx[k] += 1;
            if idx[k] < 3 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == dim {
            break;
        }
    }
    out
}
