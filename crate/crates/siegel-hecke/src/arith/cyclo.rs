use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of `Z[ζ_p]` as a coefficient vector over `1, ζ, …, ζ^{p-1}`,
/// taken modulo the all-ones vector (since `1 + ζ + … + ζ^{p-1} = 0`).
/// The canonical form has a zero in slot `p-1`.
#[derive(Clone, Debug)]
pub struct CycInt {
    p: usize,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        assert!(p >= 2);
        CycInt {
            p: p as usize,
            coeffs: vec![BigInt::zero(); p as usize],
        }
    }

    pub fn from_integer(p: u64, n: impl Into<BigInt>) -> Self {
        let mut c = CycInt::zero(p);
        c.coeffs[0] = n.into();
        c
    }

    /// `ζ^e`.
    pub fn zeta_pow(p: u64, e: i64) -> Self {
        let mut c = CycInt::zero(p);
        c.coeffs[e.rem_euclid(p as i64) as usize] = BigInt::one();
        c.reduced()
    }

    /// `Σ_i counts[i] ζ^i` from a histogram of exponents.
    pub fn from_histogram(p: u64, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        CycInt {
            p: p as usize,
            coeffs: counts.iter().map(|&c| BigInt::from(c)).collect(),
        }
        .reduced()
    }

    pub fn prime(&self) -> u64 {
        self.p as u64
    }

    /// Raw coefficients of the canonical representative.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Canonical representative: subtract the last coefficient everywhere.
    pub fn reduced(mut self) -> Self {
        let last = self.coeffs[self.p - 1].clone();
        if !last.is_zero() {
            for c in self.coeffs.iter_mut() {
                *c -= &last;
            }
        }
        self
    }

    /// The rational integer this element equals, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        let r = self.clone().reduced();
        if r.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(r.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "cyclotomic integers over different primes");
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        let d: Vec<BigInt> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        d.iter().all(|x| *x == d[0])
    }
}

impl Eq for CycInt {}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
        .reduced()
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
        .reduced()
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
        .reduced()
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.check(rhs);
        let p = self.p;
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % p] += a * b;
                }
            }
        }
        CycInt { p, coeffs: out }.reduced()
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.clone().reduced();
        let mut first = true;
        for (i, c) in r.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·ζ")?,
                _ => write!(f, "{c}·ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_all_roots_is_zero() {
        for p in [2u64, 3, 5, 7] {
            let mut s = CycInt::zero(p);
            for i in 0..p as i64 {
                s = &s + &CycInt::zeta_pow(p, i);
            }
            assert_eq!(s, CycInt::zero(p));
            assert_eq!(s.to_integer(), Some(BigInt::zero()));
        }
    }

    #[test]
    fn quadratic_gauss_sum_squares() {
        for p in [3u64, 5, 7] {
            let mut g = CycInt::zero(p);
            for x in 0..p as i64 {
                g = &g + &CycInt::zeta_pow(p, x * x);
            }
            let sq = &g * &g;
            let sign = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(sq.to_integer(), Some(BigInt::from(sign * p as i64)));
        }
    }
}
