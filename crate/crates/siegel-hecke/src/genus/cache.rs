//! Sorting a stream of lattices into isometry classes.

use crate::arith::SymMatZ;
use crate::enumerate::lll;
use crate::error::Result;
use crate::genus::isometry::isometry_witness;
use crate::theta::{canonicalize_t, TIndex};

/// A class representative with the number of stream members mapped to it.
#[derive(Clone, Debug)]
pub struct CachedClass {
    pub gram: SymMatZ,
    pub det: i128,
    pub hits: u64,
}

/// Isometry classes seen so far. Each incoming Gram is compared against the
/// representatives with equal determinant; every match carries a verified
/// witness.
#[derive(Clone, Debug, Default)]
pub struct ClassCache {
    classes: Vec<CachedClass>,
    budget: u64,
}

impl ClassCache {
    pub fn new(isometry_budget: u64) -> Self {
        ClassCache {
            classes: Vec::new(),
            budget: isometry_budget,
        }
    }

    /// Index of the class of `g`, adding a new class when none matches.
    pub fn classify(&mut self, g: &SymMatZ) -> Result<usize> {
        let det = g.det()?;
        for (i, c) in self.classes.iter_mut().enumerate() {
            if c.det == det && isometry_witness(&c.gram, g, self.budget)?.is_some() {
                c.hits += 1;
                return Ok(i);
            }
        }
        self.classes.push(CachedClass {
            gram: reduced_form(g)?,
            det,
            hits: 1,
        });
        Ok(self.classes.len() - 1)
    }

    pub fn classes(&self) -> &[CachedClass] {
        &self.classes
    }
}

/// A reduced Gram for display and ordering: Gauss-reduced in rank 2,
/// LLL-reduced otherwise.
pub fn reduced_form(g: &SymMatZ) -> Result<SymMatZ> {
    if g.dim() == 2 {
        return Ok(canonicalize_t(&TIndex::new(g.clone())?)?.mat().clone());
    }
    Ok(lll(g).0)
}
