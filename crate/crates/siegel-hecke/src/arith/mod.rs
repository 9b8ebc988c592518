//! Exact arithmetic: Kronecker symbols, q-combinatorics, integer matrices,
//! Hermite/Smith forms and cyclotomic integers.

mod cyclo;
mod kronecker;
mod matrix;
mod normal_form;
mod qcomb;

pub use cyclo::CycInt;
pub use kronecker::{is_prime, kronecker};
pub use matrix::{adjugate, det_i128, inverse_rational, mat_mul, transpose, SymMatZ};
pub use normal_form::{
    hnf_columns, hnf_with_modulus, smith_left, snf_valuations, snf_valuations_int, Smith,
};
pub use qcomb::{
    beta, beta_ext, delta, eta, lambda_j, mu, pow_q, u_coeff, v_coeff, QCombContext,
};
