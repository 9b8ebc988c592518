use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer symmetric matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMatZ {
    n: usize,
    entries: Vec<i64>,
}

impl SymMatZ {
    /// Builds from rows; fails unless the rows form a symmetric square matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(SymMatZ {
            n,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    /// Builds from a flat row-major slice, trusting symmetry (debug-checked).
    pub fn from_flat(n: usize, entries: Vec<i64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        debug_assert!((0..n).all(|i| (0..n).all(|j| entries[i * n + j] == entries[j * n + i])));
        SymMatZ { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        SymMatZ {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn flat(&self) -> &[i64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// All diagonal entries even.
    pub fn is_even(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) % 2 == 0)
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn det(&self) -> Result<i128> {
        det_i128(&self.widened(), self.n)
    }

    pub(crate) fn widened(&self) -> Vec<i128> {
        self.entries.iter().map(|&x| x as i128).collect()
    }

    /// `xᵀ M x`.
    pub fn eval(&self, x: &[i64]) -> i64 {
        let n = self.n;
        let mut s = 0i64;
        for i in 0..n {
            let mut row = 0i64;
            for j in 0..n {
                row += self.entries[i * n + j] * x[j];
            }
            s += x[i] * row;
        }
        s
    }

    /// `Gᵀ M G` for an integer `n×c` matrix `G` given row-major.
    pub fn congruent(&self, g: &[i64], cols: usize) -> Result<SymMatZ> {
        let n = self.n;
        let mut out = vec![0i64; cols * cols];
        let mut mg = vec![0i128; n * cols];
        for i in 0..n {
            for c in 0..cols {
                let mut s = 0i128;
                for k in 0..n {
                    s += self.entries[i * n + k] as i128 * g[k * cols + c] as i128;
                }
                mg[i * cols + c] = s;
            }
        }
        for a in 0..cols {
            for b in 0..cols {
                let mut s = 0i128;
                for k in 0..n {
                    s += g[k * cols + a] as i128 * mg[k * cols + b];
                }
                out[a * cols + b] =
                    i64::try_from(s).map_err(|_| Error::Overflow("congruent matrix"))?;
            }
        }
        Ok(SymMatZ {
            n: cols,
            entries: out,
        })
    }

    /// True when every leading principal minor is positive.
    pub fn is_positive_definite(&self) -> Result<bool> {
        let a = self.widened();
        for k in 1..=self.n {
            let mut sub = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    sub.push(a[i * self.n + j]);
                }
            }
            if det_i128(&sub, k)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Serialize for SymMatZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        SymMatZ::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("fraction-free elimination"))
}

/// Determinant by Bareiss elimination in `i128` (row-major `n×n`).
pub fn det_i128(a: &[i128], n: usize) -> Result<i128> {
    if n == 0 {
        return Ok(1);
    }
    let mut m = a.to_vec();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n {
        if m[k * n + k] == 0 {
            match (k + 1..n).find(|&r| m[r * n + k] != 0) {
                Some(r) => {
                    for c in 0..n {
                        m.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ck(m[k * n + k].checked_mul(m[i * n + j]))?;
                let u = ck(m[i * n + k].checked_mul(m[k * n + j]))?;
                m[i * n + j] = ck(t.checked_sub(u))? / prev;
            }
            m[i * n + k] = 0;
        }
        prev = m[k * n + k];
    }
    Ok(sign * m[n * n - 1])
}

/// Determinant and adjugate (`det·A⁻¹`) by fraction-free Gauss–Jordan.
/// Errors with [`Error::Singular`] for singular input.
pub fn adjugate(a: &[i128], n: usize) -> Result<(i128, Vec<i128>)> {
    let w = 2 * n;
    let mut m = vec![0i128; n * w];
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = a[i * n + j];
        }
        m[i * w + n + i] = 1;
    }
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n {
        let piv = (k..n).find(|&r| m[r * w + k] != 0).ok_or(Error::Singular)?;
        if piv != k {
            for c in 0..w {
                m.swap(k * w + c, piv * w + c);
            }
            sign = -sign;
        }
        let mkk = m[k * w + k];
        for i in 0..n {
            if i == k {
                continue;
            }
            let mik = m[i * w + k];
            for j in 0..w {
                if j == k {
                    continue;
                }
                let t = ck(mkk.checked_mul(m[i * w + j]))?;
                let u = ck(mik.checked_mul(m[k * w + j]))?;
                m[i * w + j] = ck(t.checked_sub(u))? / prev;
            }
            m[i * w + k] = 0;
        }
        prev = mkk;
    }
    // Left block is d·I with d = det of the row-permuted matrix.
    let d = m[(n - 1) * w + (n - 1)];
    let det = sign * d;
    let mut adj = vec![0i128; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = m[i * w + n + j];
            adj[i * n + j] = if sign == 1 { v } else { -v };
        }
    }
    // The right block is d·A⁻¹; all rows were scaled consistently only when
    // the diagonal is uniform, which fraction-free Gauss-Jordan guarantees.
    debug_assert!((0..n).all(|i| m[i * w + i] == d));
    Ok((det, adj))
}

/// Exact rational inverse of an integer matrix (given as rows).
pub fn inverse_rational(rows: &[Vec<i64>]) -> Result<Vec<Vec<BigRational>>> {
    let n = rows.len();
    let flat: Vec<i128> = rows.iter().flatten().map(|&x| x as i128).collect();
    let (det, adj) = adjugate(&flat, n)?;
    let d = BigInt::from(det);
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::new(BigInt::from(adj[i * n + j]), d.clone()))
                .collect()
        })
        .collect())
}

/// Integer matrix product of row-major `a (r×k)` and `b (k×c)`.
pub fn mat_mul(a: &[i64], b: &[i64], r: usize, k: usize, c: usize) -> Vec<i64> {
    let mut out = vec![0i64; r * c];
    for i in 0..r {
        for t in 0..k {
            let x = a[i * k + t];
            if x == 0 {
                continue;
            }
            for j in 0..c {
                out[i * c + j] += x * b[t * c + j];
            }
        }
    }
    out
}

/// Transpose of a row-major `r×c` matrix.
pub fn transpose(a: &[i64], r: usize, c: usize) -> Vec<i64> {
    let mut out = vec![0i64; r * c];
    for i in 0..r {
        for j in 0..c {
            out[j * r + i] = a[i * c + j];
        }
    }
    out
}
