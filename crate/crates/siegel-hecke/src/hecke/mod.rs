//! Hecke operators `T̃_j(p²)` and `T′_j(p²)` on theta series, checked on
//! Fourier coefficients.
//!
//! `T′_j` is never built from coset representatives. It exists in two
//! independent forms that the checks compare:
//! - the combination `Σ_i u_i(j) T̃_{j-i}` of coefficients computed from the
//!   sublattices `Ω ⊆ p⁻¹L` and the lattices `Λ` between `pΩ` and `Δ`
//!   ([`ttilde`], [`omega`]);
//! - the sum over `r`-neighbors weighted by `v_i(j)` ([`rhs`]).
//!
//! [`verify`] lifts the second form to the genus and compares it with the
//! eigenvalue `λ_j`.

mod local;
pub mod omega;
pub mod rhs;
pub mod ttilde;
pub mod verify;
pub mod weyl;

pub use omega::{lambda_positions, omega_classes_at, ttilde_by_classes, LambdaPosition, OmegaClass};
pub use rhs::{check_thm53_hypothesis, rhs_thm53_table, rhs_thm53_table_unchecked, NeighborSums};
pub use ttilde::{ttilde_by_key, ttilde_coefficient, ttilde_coefficients, tprime_from_ttilde, tprime_table};
pub use verify::{
    verify_eigenvalue, verify_eigenvalue_with, EigenCase, LedgerEntry, VerificationReport, Verdict, VerifyOptions,
};

/// The two exponent conventions: `Primed` for the expansion of `T_j` itself,
/// `Unprimed` for `T̃_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentForm {
    Primed,
    Unprimed,
}

/// Exponent of `p` in the weight of `(Ω, Λ)`.
///
/// Primed: `k(r2-r0-j) + r0(n-r2+1)`. Unprimed:
/// `k(j+r2-r0) + r0(n-r2+1) + (j-r)(j-r+1)/2 - j(n+1)` with `r = r0+r2`.
#[allow(non_snake_case)]
pub fn exponent_E_j(k: i64, n: i64, j: i64, r0: i64, r2: i64, form: ExponentForm) -> i64 {
    assert!(r0 >= 0 && r2 >= 0 && r0 + r2 <= j, "need 0 <= r0 + r2 <= j");
    match form {
        ExponentForm::Primed => k * (r2 - r0 - j) + r0 * (n - r2 + 1),
        ExponentForm::Unprimed => {
            let s = j - r0 - r2;
            k * (j + r2 - r0) + r0 * (n - r2 + 1) + s * (s + 1) / 2 - j * (n + 1)
        }
    }
}

/// Exponent of `χ(p)` in the weight of `(Ω, Λ)`: `r2-r0-j` primed,
/// `j+r2-r0` unprimed. Only its parity matters.
pub fn exponent_e_j(j: i64, r0: i64, r2: i64, form: ExponentForm) -> i64 {
    assert!(r0 >= 0 && r2 >= 0 && r0 + r2 <= j, "need 0 <= r0 + r2 <= j");
    match form {
        ExponentForm::Primed => r2 - r0 - j,
        ExponentForm::Unprimed => j + r2 - r0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExponentForm::*;

    #[test]
    fn worked_values() {
        assert_eq!(exponent_E_j(4, 1, 1, 1, 0, Unprimed), 0);
        assert_eq!(exponent_e_j(2, 2, 0, Unprimed), 0);
        for (k, n, j) in [(4, 1, 1), (4, 2, 2), (1, 2, 1)] {
            assert_eq!(exponent_E_j(k, n, j, 0, 0, Unprimed), k * j + j * (j + 1) / 2 - j * (n + 1));
        }
    }

    /// `T̃_j = p^{j(k-n-1)} Σ_ℓ χ^ℓ p^{kℓ} β(n-ℓ, j-ℓ) T_ℓ`: the `ℓ`-th term
    /// carries the primed exponents at level `ℓ`, and closing the sum over
    /// `ℓ` adds `(j-r)(j-r+1)/2`. The power of `p` then matches the unprimed
    /// exponent for every `ℓ`; the power of `χ` matches up to the constant
    /// `χ^j`.
    #[test]
    fn primed_and_unprimed_agree_on_the_grid() {
        for k in 1..=6i64 {
            for n in 1..=4i64 {
                for j in 0..=3i64 {
                    for r0 in 0..=j {
                        for r2 in 0..=j - r0 {
                            let r = r0 + r2;
                            for l in r..=j {
                                let lhs = j * (k - n - 1)
                                    + k * l
                                    + exponent_E_j(k, n, l, r0, r2, Primed)
                                    + (j - r) * (j - r + 1) / 2;
                                assert_eq!(lhs, exponent_E_j(k, n, j, r0, r2, Unprimed));
                                let chi = l + exponent_e_j(l, r0, r2, Primed);
                                assert_eq!(exponent_e_j(j, r0, r2, Unprimed) - chi, j);
                            }
                        }
                    }
                }
            }
        }
    }
}
