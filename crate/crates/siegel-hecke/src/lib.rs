//! Exact Siegel theta series of even positive-definite lattices, p-neighbors,
//! genus enumeration, and exact checks of Hecke operator identities on
//! Fourier coefficients.
//!
//! Everything is exact: representation numbers are counted by integer
//! enumeration, character sums live in `Z[zeta_p]`, and operator
//! coefficients are rationals.

pub mod arith;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod ffquad;
pub mod genus;
pub mod hecke;
pub mod lattice;
pub mod theta;

pub use error::{Error, Result};
pub use lattice::{Lattice, SubframeBasis};
pub use theta::{CoeffTable, TIndex};

/// Work limits shared by the enumeration kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of search-tree nodes in a single lattice-point enumeration.
    pub node_budget: u64,
    /// Maximum number of backtracking nodes in a single isometry search.
    pub isometry_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            node_budget: 2_000_000_000,
            isometry_budget: 50_000_000,
        }
    }
}
