//! The neighbor form of `θ(L) | T′_j(p²)`:
//! `Σ_{i<=j} v_i(j) Σ_{K_{j-i}} θ(K_{j-i})`, summed over `(j-i)`-neighbors.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{v_coeff, SymMatZ};
use crate::error::{Error, Result};
use crate::genus::{for_each_neighbor, ClassCache};
use crate::lattice::Lattice;
use crate::theta::{theta_table, CoeffTable};
use crate::Limits;

/// Rejects `(n, j)` outside the range where the neighbor form is proved:
/// `j <= n`, and `j <= k` when `χ = +1`, `j < k` when `χ = -1`.
pub fn check_thm53_hypothesis(k: u32, n: usize, j: usize, chi: i8) -> Result<()> {
    if j > n {
        return Err(Error::Hypothesis(format!("neighbor form needs j <= n (j = {j}, n = {n})")));
    }
    let ok = if chi == 1 { j as u32 <= k } else { (j as u32) < k };
    if !ok {
        let rel = if chi == 1 { "j <= k" } else { "j < k" };
        return Err(Error::Hypothesis(format!(
            "neighbor form needs {rel} when chi = {chi} (j = {j}, k = {k})"
        )));
    }
    Ok(())
}

/// Neighbor classes of one lattice at one prime, kept across calls so that
/// several degrees and operators can share the neighbor enumeration and the
/// theta tables of the classes.
#[derive(Debug)]
pub struct NeighborSums {
    lattice: Lattice,
    p: u64,
    limits: Limits,
    cache: ClassCache,
    /// r -> class index -> number of r-neighbors in that class
    counts: BTreeMap<usize, Vec<u64>>,
    thetas: HashMap<(usize, usize, i64), CoeffTable>,
}

impl NeighborSums {
    pub fn new(l: &Lattice, p: u64, limits: &Limits) -> Result<Self> {
        l.check_good_prime(p)?;
        Ok(NeighborSums {
            lattice: l.clone(),
            p,
            limits: *limits,
            cache: ClassCache::new(limits.isometry_budget),
            counts: BTreeMap::new(),
            thetas: HashMap::new(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    fn ensure(&mut self, r: usize) -> Result<()> {
        if self.counts.contains_key(&r) {
            return Ok(());
        }
        let mut hist: Vec<u64> = Vec::new();
        let mut bump = |i: usize| {
            if hist.len() <= i {
                hist.resize(i + 1, 0);
            }
            hist[i] += 1;
        };
        if r == 0 {
            let i = self.cache.classify(self.lattice.gram())?;
            bump(i);
        } else {
            let cache = &mut self.cache;
            for_each_neighbor(&self.lattice, self.p, r, |nb| {
                bump(cache.classify(&nb.gram)?);
                Ok(())
            })?;
        }
        self.counts.insert(r, hist);
        Ok(())
    }

    /// `(class Gram, number of r-neighbors in the class)`.
    pub fn class_counts(&mut self, r: usize) -> Result<Vec<(SymMatZ, u64)>> {
        self.ensure(r)?;
        let classes = self.cache.classes();
        Ok(self.counts[&r]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (classes[i].gram.clone(), c))
            .collect())
    }

    /// Number of r-neighbors.
    pub fn count(&mut self, r: usize) -> Result<u64> {
        self.ensure(r)?;
        Ok(self.counts[&r].iter().sum())
    }

    /// `Σ_{K_r} θ(K_r)` truncated at `bound`.
    pub fn sum_table(&mut self, r: usize, n: usize, bound: i64) -> Result<CoeffTable> {
        self.ensure(r)?;
        let mut out = CoeffTable::zeros(n, bound)?;
        let hist = self.counts[&r].clone();
        for (i, c) in hist.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let key = (i, n, bound);
            if !self.thetas.contains_key(&key) {
                let g = &self.cache.classes()[i].gram;
                let t = theta_table(g, n, bound, self.limits.node_budget)?;
                self.thetas.insert(key, t);
            }
            out.add_scaled(&self.thetas[&key], &BigRational::from_integer(BigInt::from(c)));
        }
        Ok(out)
    }

    /// The neighbor form of `θ(L) | T′_j`, refusing `(n, j)` outside its
    /// proved range.
    pub fn thm53(&mut self, n: usize, j: usize, bound: i64) -> Result<CoeffTable> {
        let chi = self.lattice.chi_star(self.p)?;
        check_thm53_hypothesis(self.lattice.k(), n, j, chi)?;
        self.assemble(n, j, bound, None)
    }

    /// The same sum without the range check. Outside the proved range the
    /// result is just the formula evaluated, with no claim attached.
    pub fn thm53_unchecked(&mut self, n: usize, j: usize, bound: i64) -> Result<CoeffTable> {
        if j > n {
            return Err(Error::InvalidInput(format!("j = {j} exceeds n = {n}")));
        }
        self.assemble(n, j, bound, None)
    }

    /// Assembly with `v_i` replaced by `v_i + 1` for the given `i`. Only for
    /// checking that a comparison can fail.
    pub fn thm53_perturbed(&mut self, n: usize, j: usize, bound: i64, i: usize) -> Result<CoeffTable> {
        let chi = self.lattice.chi_star(self.p)?;
        check_thm53_hypothesis(self.lattice.k(), n, j, chi)?;
        self.assemble(n, j, bound, Some(i))
    }

    pub(crate) fn assemble(&mut self, n: usize, j: usize, bound: i64, bump: Option<usize>) -> Result<CoeffTable> {
        let chi = self.lattice.chi_star(self.p)?;
        let k = self.lattice.k();
        let mut out = CoeffTable::zeros(n, bound)?;
        for i in 0..=j {
            let mut v = v_coeff(self.p, k, n as u32, j as u32, i as u32, chi);
            if bump == Some(i) {
                v += BigRational::one();
            }
            if v == BigRational::from_integer(0.into()) {
                continue;
            }
            let s = self.sum_table(j - i, n, bound)?;
            out.add_scaled(&s, &v);
        }
        Ok(out)
    }
}

/// `Σ_i v_i(j) Σ_{K_{j-i}} θ(K_{j-i})` for one lattice.
pub fn rhs_thm53_table(l: &Lattice, p: u64, n: usize, j: usize, bound: i64, limits: &Limits) -> Result<CoeffTable> {
    NeighborSums::new(l, p, limits)?.thm53(n, j, bound)
}

/// [`rhs_thm53_table`] without the range check.
pub fn rhs_thm53_table_unchecked(
    l: &Lattice,
    p: u64,
    n: usize,
    j: usize,
    bound: i64,
    limits: &Limits,
) -> Result<CoeffTable> {
    NeighborSums::new(l, p, limits)?.thm53_unchecked(n, j, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::lambda_j;

    #[test]
    fn j_zero_is_theta() {
        let l = Lattice::from_rows(&[vec![2, 1], vec![1, 12]], None).unwrap();
        let lim = Limits::default();
        let t = rhs_thm53_table(&l, 2, 1, 0, 8, &lim).unwrap();
        assert_eq!(t, theta_table(l.gram(), 1, 8, lim.node_budget).unwrap());
    }

    #[test]
    fn e8_degree_one_is_a_multiple_of_theta() {
        let l = Lattice::e8();
        let lim = Limits::default();
        let t = rhs_thm53_table(&l, 2, 1, 1, 6, &lim).unwrap();
        let th = theta_table(l.gram(), 1, 6, lim.node_budget).unwrap();
        let ratio = t.ratio_to(&th).expect("proportional");
        assert_eq!(ratio, lambda_j(2, 4, 1, 1, 1));
        assert_eq!(ratio, BigRational::from_integer(72.into()));
    }

    #[test]
    fn hypothesis_is_enforced() {
        let l = Lattice::from_rows(&[vec![2, 0], vec![0, 2]], None).unwrap();
        let lim = Limits::default();
        // chi(3) = -1, k = 1: j = 1 is outside the proved range.
        assert!(matches!(rhs_thm53_table(&l, 3, 1, 1, 4, &lim), Err(Error::Hypothesis(_))));
        assert!(rhs_thm53_table_unchecked(&l, 3, 1, 1, 4, &lim).is_ok());
        assert!(matches!(rhs_thm53_table(&l, 3, 2, 3, 4, &lim), Err(Error::Hypothesis(_))));
    }
}
