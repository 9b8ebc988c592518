//! Exact lattice-point enumeration (Fincke–Pohst with integer Schur
//! complements) and Gram-matrix LLL reduction.
//!
//! Coordinates are fixed from the last to the first. With `D_i` the leading
//! principal minors and `M_{i,j}` the bordered minors, the partial value
//! `V_i = D_i · min_{x_<i ∈ R} Q(x)` satisfies
//! `V_i = ((D_{i+1} x_i + b_i)² + D_i V_{i+1}) / D_{i+1}` with
//! `b_i = Σ_{j>i} M_{i,j} x_j`, so every range is an integer square-root
//! computation and nothing is rounded.

use crate::arith::{det_i128, SymMatZ};
use crate::error::{Error, Result};

/// Floor of the square root of a nonnegative `i128`.
pub fn isqrt(n: i128) -> i128 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Precomputed minors for enumerating short vectors of one Gram matrix.
#[derive(Clone, Debug)]
pub struct Enumerator {
    m: usize,
    /// `d[i]` is the `i×i` leading principal minor (`d[0] = 1`).
    d: Vec<i128>,
    /// `bord[i*m + j]` for `j > i`: minor on rows `0..=i`, columns `0..i ∪ {j}`.
    bord: Vec<i128>,
}

/// What to collect: the sphere `Q[x] = N` or the ball `Q[x] <= N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Shell,
    Ball,
}

impl Enumerator {
    pub fn new(g: &SymMatZ) -> Result<Self> {
        let m = g.dim();
        let a = g.widened();
        let mut d = vec![1i128; m + 1];
        let mut bord = vec![0i128; m * m];
        let mut sub = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in i..m {
                sub.clear();
                for r in 0..=i {
                    for c in 0..=i {
                        let cc = if c == i { j } else { c };
                        sub.push(a[r * m + cc]);
                    }
                }
                let v = det_i128(&sub, i + 1)?;
                if j == i {
                    d[i + 1] = v;
                } else {
                    bord[i * m + j] = v;
                }
            }
        }
        if d.iter().any(|&x| x <= 0) {
            return Err(Error::InvalidInput("gram is not positive definite".into()));
        }
        Ok(Enumerator { m, d, bord })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Calls `f(x, Q[x])` for every integer vector in the region, in a fixed
    /// deterministic order. Returns the number of search nodes visited.
    pub fn for_each<F: FnMut(&[i64], i64)>(
        &self,
        bound: i64,
        region: Region,
        budget: u64,
        mut f: F,
    ) -> Result<u64> {
        if bound < 0 {
            return Ok(0);
        }
        if self.m == 0 {
            if bound == 0 || region == Region::Ball {
                f(&[], 0);
            }
            return Ok(1);
        }
        let mut x = vec![0i64; self.m];
        let mut nodes = 0u64;
        self.rec(self.m - 1, 0, bound as i128, region, budget, &mut nodes, &mut x, &mut f)?;
        Ok(nodes)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&[i64], i64)>(
        &self,
        i: usize,
        vnext: i128,
        n: i128,
        region: Region,
        budget: u64,
        nodes: &mut u64,
        x: &mut [i64],
        f: &mut F,
    ) -> Result<()> {
        let m = self.m;
        let a = self.d[i + 1];
        let di = self.d[i];
        let mut b = 0i128;
        for j in i + 1..m {
            b += self.bord[i * m + j] * x[j] as i128;
        }
        let ovf = || Error::Overflow("enumeration bound");
        let disc = a
            .checked_mul(n)
            .and_then(|t| t.checked_sub(vnext))
            .and_then(|t| t.checked_mul(di))
            .ok_or_else(ovf)?;
        if disc < 0 {
            return Ok(());
        }
        if i == 0 && region == Region::Shell {
            // (a x + b)^2 = a·N - V_1 exactly.
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::NodeBudget {
                    context: "vector enumeration",
                    budget,
                });
            }
            let s = isqrt(disc);
            if s * s != disc {
                return Ok(());
            }
            let mut emit = |num: i128| {
                if num % a == 0 {
                    x[0] = (num / a) as i64;
                    f(x, n as i64);
                }
            };
            emit(-s - b);
            if s != 0 {
                emit(s - b);
            }
            x[0] = 0;
            return Ok(());
        }
        let s = isqrt(disc);
        let lo = (-s - b).div_euclid(a) + if (-s - b).rem_euclid(a) != 0 { 1 } else { 0 };
        let hi = (s - b).div_euclid(a);
        for xi in lo..=hi {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::NodeBudget {
                    context: "vector enumeration",
                    budget,
                });
            }
            x[i] = xi as i64;
            let t = a * xi + b;
            let vi = (t * t + di * vnext) / a;
            if i == 0 {
                f(x, vi as i64);
            } else {
                self.rec(i - 1, vi, n, region, budget, nodes, x, f)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
}

/// All vectors with `Q[x] = n`.
pub fn shell(g: &SymMatZ, n: i64, budget: u64) -> Result<Vec<Vec<i64>>> {
    let e = Enumerator::new(g)?;
    let mut out = Vec::new();
    e.for_each(n, Region::Shell, budget, |x, _| out.push(x.to_vec()))?;
    Ok(out)
}

/// All vectors with `Q[x] <= n`, with their norms.
pub fn ball(g: &SymMatZ, n: i64, budget: u64) -> Result<Vec<(Vec<i64>, i64)>> {
    let e = Enumerator::new(g)?;
    let mut out = Vec::new();
    e.for_each(n, Region::Ball, budget, |x, v| out.push((x.to_vec(), v)))?;
    Ok(out)
}

/// Vectors with `Q[x] <= n`, stored flat and grouped by norm.
#[derive(Clone, Debug, Default)]
pub struct ShortVectors {
    pub dim: usize,
    /// `by_norm[t]` holds the vectors of norm `t`, concatenated.
    pub by_norm: Vec<Vec<i64>>,
}

impl ShortVectors {
    pub fn compute(g: &SymMatZ, n: i64, budget: u64) -> Result<Self> {
        let m = g.dim();
        let e = Enumerator::new(g)?;
        let mut by_norm = vec![Vec::new(); (n.max(0) + 1) as usize];
        e.for_each(n, Region::Ball, budget, |x, v| {
            by_norm[v as usize].extend_from_slice(x)
        })?;
        Ok(ShortVectors { dim: m, by_norm })
    }

    pub fn count(&self, t: i64) -> usize {
        if t < 0 || t as usize >= self.by_norm.len() || self.dim == 0 {
            return if t == 0 { 1 } else { 0 };
        }
        self.by_norm[t as usize].len() / self.dim
    }

    pub fn shell(&self, t: i64) -> impl Iterator<Item = &[i64]> {
        let slice: &[i64] = if t >= 0 && (t as usize) < self.by_norm.len() {
            &self.by_norm[t as usize]
        } else {
            &[]
        };
        slice.chunks_exact(self.dim.max(1))
    }
}

/// LLL-reduces a Gram matrix. Returns the reduced Gram `Tᵀ G T` and the
/// unimodular `T` (row-major; its columns are the new basis vectors in old
/// coordinates). Floating point only steers the choices; every update of the
/// Gram and of `T` is exact integer arithmetic.
pub fn lll(g: &SymMatZ) -> (SymMatZ, Vec<i64>) {
    let m = g.dim();
    let mut gr: Vec<i64> = g.flat().to_vec();
    let mut t: Vec<i64> = (0..m * m).map(|k| (k / m == k % m) as i64).collect();
    if m <= 1 {
        return (g.clone(), t);
    }
    let delta = 0.99f64;
    let mut mu = vec![0f64; m * m];
    let mut bstar = vec![0f64; m];
    let gso = |gr: &[i64], mu: &mut [f64], bstar: &mut [f64], upto: usize| {
        for i in 0..=upto {
            for j in 0..i {
                let mut s = gr[i * m + j] as f64;
                for l in 0..j {
                    s -= mu[j * m + l] * mu[i * m + l] * bstar[l];
                }
                mu[i * m + j] = s / bstar[j];
            }
            let mut s = gr[i * m + i] as f64;
            for l in 0..i {
                s -= mu[i * m + l] * mu[i * m + l] * bstar[l];
            }
            bstar[i] = s;
        }
    };
    let mut k = 1;
    let mut iters = 0;
    gso(&gr, &mut mu, &mut bstar, k);
    while k < m && iters < 100_000 {
        iters += 1;
        for j in (0..k).rev() {
            let q = mu[k * m + j].round();
            if q != 0.0 {
                let q = q as i64;
                // b_k <- b_k - q b_j
                let gkj = gr[k * m + j];
                let gjj = gr[j * m + j];
                let gkk = gr[k * m + k];
                for l in 0..m {
                    if l != k {
                        gr[k * m + l] -= q * gr[j * m + l];
                        gr[l * m + k] = gr[k * m + l];
                    }
                }
                gr[k * m + k] = gkk - 2 * q * gkj + q * q * gjj;
                for r in 0..m {
                    t[r * m + k] -= q * t[r * m + j];
                }
                gso(&gr, &mut mu, &mut bstar, k);
            }
        }
        let mk = mu[k * m + k - 1];
        if bstar[k] >= (delta - mk * mk) * bstar[k - 1] {
            k += 1;
            if k < m {
                gso(&gr, &mut mu, &mut bstar, k);
            }
        } else {
            for l in 0..m {
                gr.swap(k * m + l, (k - 1) * m + l);
            }
            for l in 0..m {
                gr.swap(l * m + k, l * m + k - 1);
            }
            for r in 0..m {
                t.swap(r * m + k, r * m + k - 1);
            }
            k = (k - 1).max(1);
            gso(&gr, &mut mu, &mut bstar, k);
        }
    }
    (SymMatZ::from_flat(m, gr), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::e8_gram;

    fn brute(g: &SymMatZ, n: i64, r: i64) -> Vec<(Vec<i64>, i64)> {
        let m = g.dim();
        let mut out = Vec::new();
        let total = (2 * r + 1).pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let x: Vec<i64> = (0..m)
                .map(|_| {
                    let d = c % (2 * r + 1);
                    c /= 2 * r + 1;
                    d - r
                })
                .collect();
            let v = g.eval(&x);
            if v <= n {
                out.push((x, v));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn ball_matches_box_search() {
        let g = SymMatZ::from_rows(&[vec![4, 1, 0], vec![1, 6, 2], vec![0, 2, 8]]).unwrap();
        let mut got = ball(&g, 30, u64::MAX).unwrap();
        got.sort();
        assert_eq!(got, brute(&g, 30, 4));
    }

    #[test]
    fn e8_shells() {
        let g = e8_gram();
        assert_eq!(shell(&g, 2, u64::MAX).unwrap().len(), 240);
        assert_eq!(shell(&g, 4, u64::MAX).unwrap().len(), 2160);
        assert_eq!(shell(&g, 6, u64::MAX).unwrap().len(), 6720);
        assert_eq!(shell(&g, 0, u64::MAX).unwrap().len(), 1);
    }

    #[test]
    fn budget_is_reported() {
        let g = e8_gram();
        assert!(matches!(
            shell(&g, 8, 100),
            Err(Error::NodeBudget { budget: 100, .. })
        ));
    }

    #[test]
    fn lll_is_exact_congruence() {
        let g = SymMatZ::from_rows(&[vec![10, 7, 3], vec![7, 10, 5], vec![3, 5, 12]]).unwrap();
        let (r, t) = lll(&g);
        assert_eq!(g.congruent(&t, 3).unwrap(), r);
        let det_t = det_i128(&t.iter().map(|&x| x as i128).collect::<Vec<_>>(), 3).unwrap();
        assert_eq!(det_t.abs(), 1);
    }
}
