//! Even positive-definite lattices given by Gram matrices, and sublattices of
//! `Q ⊗ L` described by basis columns with prime-power denominators.

use crate::arith::{adjugate, hnf_columns, kronecker, snf_valuations_int, SymMatZ};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Gram matrix of the E8 root lattice (Dynkin labelling 1-3-4-5-6-7-8 with 2 on 4).
pub fn e8_gram() -> SymMatZ {
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = vec![0i64; 64];
    for i in 0..8 {
        g[i * 8 + i] = 2;
    }
    for (a, b) in edges {
        g[a * 8 + b] = -1;
        g[b * 8 + a] = -1;
    }
    SymMatZ::from_flat(8, g)
}

/// A full-rank even positive-definite lattice `L = Z^m` with Gram matrix `Q`.
///
/// Construction checks that `m` is even, `Q` is symmetric with even diagonal
/// and positive definite, and that the norm ideal (generated by all `Q[x]`)
/// is exactly `2Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    label: Option<String>,
    gram: SymMatZ,
    det: i128,
    level: u64,
}

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    #[serde(default)]
    label: Option<String>,
    gram: Vec<Vec<i64>>,
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl Lattice {
    pub fn new(gram: SymMatZ, label: Option<String>) -> Result<Self> {
        let m = gram.dim();
        if m == 0 || m % 2 == 1 {
            return Err(Error::InvalidLattice(format!(
                "rank m must be even and positive (m=2k), got {m}"
            )));
        }
        if !gram.is_even() {
            return Err(Error::InvalidLattice(
                "gram diagonal must be even (even lattice)".into(),
            ));
        }
        if !gram.is_positive_definite()? {
            return Err(Error::InvalidLattice(
                "gram must be positive definite".into(),
            ));
        }
        let mut norm_gcd = 0i128;
        for i in 0..m {
            for j in 0..m {
                let x = gram.get(i, j) as i128;
                norm_gcd = gcd_i128(norm_gcd, if i == j { x } else { 2 * x });
            }
        }
        if norm_gcd != 2 {
            return Err(Error::InvalidLattice(format!(
                "norm ideal must be 2Z, got {norm_gcd}Z (divide the gram by {})",
                norm_gcd / 2
            )));
        }
        let (det, adj) = adjugate(&gram.widened(), m)?;
        let level = classical_level(det, &adj, m)?;
        let ideal = ideal_level(det, &adj, m, norm_gcd)?;
        if level != ideal {
            return Err(Error::InvalidLattice(format!(
                "level mismatch: least N with N·Q⁻¹ even is {level}, 4/(norm L·norm L#) is {ideal}"
            )));
        }
        Ok(Lattice {
            label,
            gram,
            det,
            level,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>], label: Option<&str>) -> Result<Self> {
        Lattice::new(SymMatZ::from_rows(rows)?, label.map(str::to_string))
    }

    pub fn e8() -> Self {
        Lattice::new(e8_gram(), Some("E8".into())).expect("E8 is valid")
    }

    /// Parses `{"label": string, "gram": [[int]]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let f: LatticeFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("lattice file: {e}")))?;
        let gram = SymMatZ::from_rows(&f.gram)
            .map_err(|e| Error::InvalidLattice(format!("field \"gram\": {e}")))?;
        Lattice::new(gram, f.label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LatticeFile {
            label: self.label.clone(),
            gram: self.gram.rows(),
        })
        .expect("serializable")
    }

    pub fn gram(&self) -> &SymMatZ {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.dim()
    }

    /// Half the rank.
    pub fn k(&self) -> u32 {
        (self.rank() / 2) as u32
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    /// Least `N` with `N·Q⁻¹` even integral.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// `χ*(p) = ((-1)^k det Q / p)`; an error when `p` divides the level.
    pub fn chi_star(&self, p: u64) -> Result<i8> {
        self.check_good_prime(p)?;
        let sign = if self.k() % 2 == 0 { 1 } else { -1 };
        let a = i64::try_from(sign * self.det).map_err(|_| Error::Overflow("chi_star"))?;
        Ok(kronecker(a, p as i64))
    }

    pub fn check_good_prime(&self, p: u64) -> Result<()> {
        if !crate::arith::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if self.level % p == 0 {
            return Err(Error::BadPrime {
                p,
                level: self.level,
            });
        }
        Ok(())
    }

    /// The dual lattice as a frame over `L` (basis `Q⁻¹`). Its denominators
    /// must be powers of a single prime.
    pub fn dual(self: &Arc<Self>) -> Result<SubframeBasis> {
        let m = self.rank();
        let (det, adj) = adjugate(&self.gram.widened(), m)?;
        let mut g = 0i128;
        for &x in &adj {
            g = g.gcd(&x);
        }
        let den = det / g.gcd(&det);
        let primes = prime_factors(den as u64);
        let p = match primes.as_slice() {
            [] => 2,
            [p] => *p,
            _ => {
                return Err(Error::Unsupported(format!(
                    "dual denominators {den} involve several primes"
                )))
            }
        };
        let mut e = 0u32;
        let mut d = den;
        while d > 1 {
            d /= p as i128;
            e += 1;
        }
        let shrink = det / den;
        let cols: Vec<Vec<i64>> = (0..m)
            .map(|j| (0..m).map(|i| (adj[i * m + j] / shrink) as i64).collect())
            .collect();
        SubframeBasis::new(self.clone(), p, e, &cols)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn classical_level(det: i128, adj: &[i128], m: usize) -> Result<u64> {
    let mut level = 1i128;
    for i in 0..m {
        for j in 0..m {
            let (num, den) = if i == j {
                (adj[i * m + j], 2 * det)
            } else {
                (adj[i * m + j], det)
            };
            let g = num.gcd(&den);
            level = level.lcm(&(den / g).abs());
        }
    }
    u64::try_from(level).map_err(|_| Error::Overflow("level"))
}

/// `4 / (g · g#)` with `g` the norm generator of `L` and `g#` that of `L#`.
fn ideal_level(det: i128, adj: &[i128], m: usize, norm_gcd: i128) -> Result<u64> {
    let mut g = 0i128;
    for i in 0..m {
        for j in 0..m {
            let x = adj[i * m + j];
            g = g.gcd(&if i == j { x } else { 2 * x });
        }
    }
    // g# = g / det, so 4/(norm_gcd · g/det) = 4 det / (norm_gcd · g).
    let num = 4 * det;
    let den = norm_gcd * g;
    if num % den != 0 {
        return Err(Error::InvalidLattice("non-integral ideal level".into()));
    }
    u64::try_from((num / den).abs()).map_err(|_| Error::Overflow("level"))
}

/// A lattice inside `Q ⊗ L`, spanned by the columns of `num / p^e` where
/// `num` is an integer `m×r` matrix in the coordinates of the parent basis.
///
/// Values are canonical: `num` is in column HNF and `e` is as small as possible.
#[derive(Clone, Debug)]
pub struct SubframeBasis {
    parent: Arc<Lattice>,
    p: u64,
    e: u32,
    cols: Vec<Vec<i64>>,
}

impl PartialEq for SubframeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.parent.gram == other.parent.gram
            && self.p == other.p
            && self.e == other.e
            && self.cols == other.cols
    }
}

impl Eq for SubframeBasis {}

impl SubframeBasis {
    /// The lattice spanned by `cols / p^e`.
    pub fn new(parent: Arc<Lattice>, p: u64, e: u32, cols: &[Vec<i64>]) -> Result<Self> {
        let m = parent.rank();
        let mut h = hnf_columns(cols, m)?;
        let mut e = e;
        while e > 0 && h.iter().flatten().all(|x| x % p as i64 == 0) {
            h.iter_mut().flatten().for_each(|x| *x /= p as i64);
            e -= 1;
        }
        Ok(SubframeBasis {
            parent,
            p,
            e,
            cols: h,
        })
    }

    /// `p^s L` for any integer `s`.
    pub fn scaled(parent: Arc<Lattice>, p: u64, s: i32) -> Result<Self> {
        let m = parent.rank();
        let (mult, e) = if s >= 0 {
            ((p as i64).pow(s as u32), 0)
        } else {
            (1, (-s) as u32)
        };
        let cols: Vec<Vec<i64>> = (0..m)
            .map(|j| (0..m).map(|i| if i == j { mult } else { 0 }).collect())
            .collect();
        SubframeBasis::new(parent, p, e, &cols)
    }

    pub fn parent(&self) -> &Arc<Lattice> {
        &self.parent
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Exponent `e` of the common denominator `p^e`.
    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// Integer numerator columns (canonical HNF).
    pub fn numerator_cols(&self) -> &[Vec<i64>] {
        &self.cols
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Columns as exact rationals.
    pub fn cols(&self) -> Vec<Vec<BigRational>> {
        let d = BigInt::from(self.p).pow(self.e);
        self.cols
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&x| BigRational::new(BigInt::from(x), d.clone()))
                    .collect()
            })
            .collect()
    }

    /// `numᵀ Q num` (the Gram matrix scaled by `p^{2e}`).
    fn scaled_gram(&self) -> Vec<i128> {
        let m = self.parent.rank();
        let r = self.rank();
        let q = self.parent.gram();
        let mut qc = vec![vec![0i128; m]; r];
        for (a, c) in self.cols.iter().enumerate() {
            for i in 0..m {
                qc[a][i] = (0..m).map(|k| q.get(i, k) as i128 * c[k] as i128).sum();
            }
        }
        let mut out = vec![0i128; r * r];
        for a in 0..r {
            for b in 0..r {
                out[a * r + b] = (0..m).map(|i| self.cols[b][i] as i128 * qc[a][i]).sum();
            }
        }
        out
    }

    /// Exact Gram matrix `colsᵀ Q cols`.
    pub fn gram_of(&self) -> Vec<Vec<BigRational>> {
        let r = self.rank();
        let s = self.scaled_gram();
        let d = BigInt::from(self.p).pow(2 * self.e);
        (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| BigRational::new(BigInt::from(s[a * r + b]), d.clone()))
                    .collect()
            })
            .collect()
    }

    /// Gram matrix as an integer matrix, when it is integral.
    pub fn integral_gram(&self) -> Option<SymMatZ> {
        let r = self.rank();
        let s = self.scaled_gram();
        let d = (self.p as i128).pow(2 * self.e);
        if s.iter().any(|x| x % d != 0) {
            return None;
        }
        let flat: Option<Vec<i64>> = s.iter().map(|x| i64::try_from(x / d).ok()).collect();
        Some(SymMatZ::from_flat(r, flat?))
    }

    /// Gram integral with even diagonal.
    pub fn is_even_integral(&self) -> bool {
        self.integral_gram().map_or(false, |g| g.is_even())
    }

    /// Multiplicities of the exponents `e` in the invariant factors `p^e` of
    /// this lattice relative to the parent.
    pub fn invariant_mults(&self, p: u64) -> Result<BTreeMap<i64, usize>> {
        let m = self.parent.rank();
        if self.rank() != m {
            return Err(Error::InvalidInput(format!(
                "invariant factors need full rank {m}, got {}",
                self.rank()
            )));
        }
        let mut flat = vec![0i64; m * m];
        for (j, c) in self.cols.iter().enumerate() {
            for i in 0..m {
                flat[i * m + j] = c[i];
            }
        }
        let shift = if p == self.p { self.e as i64 } else { 0 };
        let mut out = BTreeMap::new();
        for v in snf_valuations_int(&flat, m, p)? {
            *out.entry(v as i64 - shift).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// The lattice with this Gram matrix, when it is even integral of full rank.
    pub fn to_lattice(&self, label: Option<String>) -> Result<Lattice> {
        let g = self
            .integral_gram()
            .ok_or_else(|| Error::InvalidLattice("sublattice is not integral".into()))?;
        Lattice::new(g, label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[&[i64]]) -> Lattice {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Lattice::from_rows(&v, None).unwrap()
    }

    #[test]
    fn levels() {
        assert_eq!(Lattice::e8().level(), 1);
        assert_eq!(lat(&[&[2, 1], &[1, 12]]).level(), 23);
        assert_eq!(lat(&[&[4, 1], &[1, 6]]).level(), 23);
        assert_eq!(lat(&[&[2, 0], &[0, 2]]).level(), 4);
        assert_eq!(lat(&[&[2, 1], &[1, 2]]).level(), 3);
    }

    #[test]
    fn characters() {
        assert_eq!(Lattice::e8().chi_star(2).unwrap(), 1);
        assert_eq!(Lattice::e8().chi_star(7).unwrap(), 1);
        assert_eq!(lat(&[&[2, 1], &[1, 12]]).chi_star(2).unwrap(), 1);
        assert_eq!(lat(&[&[2, 1], &[1, 2]]).chi_star(5).unwrap(), -1);
        assert!(matches!(
            lat(&[&[2, 0], &[0, 2]]).chi_star(2),
            Err(Error::BadPrime { p: 2, level: 4 })
        ));
    }

    #[test]
    fn rejects_invalid_grams() {
        assert!(Lattice::from_rows(&[vec![1, 0], vec![0, 2]], None).is_err());
        assert!(Lattice::from_rows(&[vec![2, 3], vec![3, 2]], None).is_err());
        assert!(Lattice::from_rows(&[vec![2]], None).is_err());
        assert!(Lattice::from_rows(&[vec![4, 2], vec![2, 4]], None).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let l = Lattice::e8();
        let back = Lattice::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
        let err = Lattice::from_json(r#"{"label":"x","gram":[[1,0],[0,2]]}"#).unwrap_err();
        assert!(err.to_string().contains("even"));
    }

    #[test]
    fn duals() {
        let e8 = Arc::new(Lattice::e8());
        let d = e8.dual().unwrap();
        assert_eq!(d, SubframeBasis::scaled(e8.clone(), 2, 0).unwrap());
        let z2 = Arc::new(lat(&[&[2, 0], &[0, 2]]));
        let d = z2.dual().unwrap();
        assert_eq!(d.exponent(), 1);
        assert_eq!(d.numerator_cols(), &[vec![1, 0], vec![0, 1]]);
        let g = d.gram_of();
        let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
        assert_eq!(det, BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn scaled_frames() {
        let e8 = Arc::new(Lattice::e8());
        let l = SubframeBasis::scaled(e8.clone(), 3, 0).unwrap();
        assert_eq!(l.invariant_mults(3).unwrap(), BTreeMap::from([(0, 8)]));
        let up = SubframeBasis::scaled(e8.clone(), 3, -1).unwrap();
        assert_eq!(up.invariant_mults(3).unwrap(), BTreeMap::from([(-1, 8)]));
        assert!(!up.is_even_integral());
        let down = SubframeBasis::scaled(e8, 3, 1).unwrap();
        assert!(down.is_even_integral());
        assert_eq!(down.integral_gram().unwrap().get(0, 0), 18);
    }
}
