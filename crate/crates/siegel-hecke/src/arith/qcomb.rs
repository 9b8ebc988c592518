//! q-combinatorial quantities: subspace counts, the products δ and μ, and the
//! coefficient families of the neighbor form of the Hecke operators.
//!
//! The integer-valued functions take nonnegative arguments. The `*_ext` and
//! rational variants follow the product formulas literally for any integer
//! first argument, which is what the operator coefficients need once the
//! degree exceeds half the rank.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `q^e` as an exact rational (negative `e` allowed).
pub fn pow_q(q: u64, e: i64) -> BigRational {
    let base = BigInt::from(q);
    if e >= 0 {
        BigRational::from_integer(num_traits::pow(base, e as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(base, (-e) as usize))
    }
}

fn pow_int(q: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// Number of `a`-dimensional subspaces of an `r`-dimensional space over `F_q`.
/// Returns 0 when `a > r`.
pub fn beta(q: u64, r: u32, a: u32) -> BigInt {
    if a > r {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..a {
        num *= pow_int(q, r - i) - 1;
        den *= pow_int(q, a - i) - 1;
    }
    num / den
}

/// The product `∏_{i<a} (q^{r-i} - 1)/(q^{a-i} - 1)` for any integer `r`.
/// Agrees with [`beta`] for `r >= 0` (including the zero for `a > r`); for
/// negative `r` no factor vanishes and the value is a nonzero rational.
pub fn beta_ext(q: u64, r: i64, a: i64) -> BigRational {
    if a < 0 {
        return BigRational::zero();
    }
    if r >= 0 {
        return BigRational::from_integer(beta(q, r as u32, a as u32));
    }
    let mut v = BigRational::one();
    for i in 0..a {
        let num = pow_q(q, r - i) - BigRational::one();
        let den = pow_q(q, a - i) - BigRational::one();
        v = v * num / den;
    }
    v
}

/// `δ(m, r) = ∏_{i<r} (q^{m-i} + 1)`, with `δ(m, 0) = 1`.
pub fn delta(q: u64, m: i64, r: u32) -> BigRational {
    (0..r as i64).fold(BigRational::one(), |acc, i| {
        acc * (pow_q(q, m - i) + BigRational::one())
    })
}

/// `μ(m, r) = ∏_{i<r} (q^{m-i} - 1)`, with `μ(m, 0) = 1`.
pub fn mu(q: u64, m: i64, r: u32) -> BigRational {
    (0..r as i64).fold(BigRational::one(), |acc, i| {
        acc * (pow_q(q, m - i) - BigRational::one())
    })
}

/// Number of ways to extend a rank-`a` matrix in `F_q^{r×a}` to an element of
/// `GL_r(F_q)`: `∏_{i=a}^{r-1} (q^r - q^i)`. So `eta(q, r, 0) = |GL_r(F_q)|`.
pub fn eta(q: u64, r: u32, a: u32) -> BigInt {
    if a > r {
        return BigInt::zero();
    }
    (a..r).fold(BigInt::one(), |acc, i| acc * (pow_int(q, r) - pow_int(q, i)))
}

fn sign(i: u32) -> i32 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `u_i(j) = (-1)^i q^{i(i-1)/2} β(n-j+i, i)`.
pub fn u_coeff(q: u64, n: u32, j: u32, i: u32) -> BigInt {
    assert!(i <= j && j <= n, "u_coeff needs i <= j <= n");
    BigInt::from(sign(i)) * pow_int(q, i * i.saturating_sub(1) / 2) * beta(q, n - j + i, i)
}

/// `v_i(j)`: `(-1)^i β(k-n+i-1, i) δ(k-j+i-1, i)` when `chi = +1`, and
/// `(-1)^i δ(k-n+i-1, i) β(k-j+i-1, i)` when `chi = -1`.
pub fn v_coeff(q: u64, k: u32, n: u32, j: u32, i: u32, chi: i8) -> BigRational {
    assert!(i <= j && j <= n, "v_coeff needs i <= j <= n");
    let (k, n, j, ii) = (k as i64, n as i64, j as i64, i as i64);
    let s = BigRational::from_integer(BigInt::from(sign(i)));
    let a = k - n + ii - 1;
    let b = k - j + ii - 1;
    match chi {
        1 => s * beta_ext(q, a, ii) * delta(q, b, i),
        -1 => s * delta(q, a, i) * beta_ext(q, b, ii),
        _ => panic!("chi must be +1 or -1"),
    }
}

/// The genus eigenvalue `q^{j(k-n)+j(j-1)/2} β(n,j) δ(k-1,j)` (chi = +1, j <= k)
/// or with `μ` in place of `δ` (chi = -1, j < k); zero otherwise.
pub fn lambda_j(q: u64, k: u32, n: u32, j: u32, chi: i8) -> BigRational {
    assert!(j >= 1 && j <= n, "lambda_j needs 1 <= j <= n");
    let in_range = match chi {
        1 => j <= k,
        -1 => j < k,
        _ => panic!("chi must be +1 or -1"),
    };
    if !in_range {
        return BigRational::zero();
    }
    let (ki, ni, ji) = (k as i64, n as i64, j as i64);
    let e = ji * (ki - ni) + ji * (ji - 1) / 2;
    let tail = if chi == 1 {
        delta(q, ki - 1, j)
    } else {
        mu(q, ki - 1, j)
    };
    pow_q(q, e) * BigRational::from_integer(beta(q, n, j)) * tail
}

/// Bundles the residue size, half-rank, degree and character value so the
/// coefficient families can be evaluated without repeating them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QCombContext {
    pub q: u64,
    pub k: u32,
    pub n: u32,
    pub chi: i8,
}

impl QCombContext {
    pub fn new(q: u64, k: u32, n: u32, chi: i8) -> Self {
        assert!(q >= 2 && k >= 1 && n >= 1 && (chi == 1 || chi == -1));
        QCombContext { q, k, n, chi }
    }

    pub fn u(&self, j: u32, i: u32) -> BigInt {
        u_coeff(self.q, self.n, j, i)
    }

    pub fn v(&self, j: u32, i: u32) -> BigRational {
        v_coeff(self.q, self.k, self.n, j, i, self.chi)
    }

    pub fn lambda(&self, j: u32) -> BigRational {
        lambda_j(self.q, self.k, self.n, j, self.chi)
    }
}
