//! Neighbors, isometry classes and genus averages.

pub mod cache;
pub mod isometry;
pub mod neighbors;

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::SymMatZ;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::theta::{theta_table, CoeffTable};
use crate::Limits;

pub use cache::{reduced_form, ClassCache};
pub use isometry::{aut_order, automorphism_group, is_isometric, is_witness, isometry_witness};
pub use neighbors::{for_each_neighbor, isotropic_subspaces, neighbors, Neighbor, NeighborSet};

/// One isometry class of the genus.
#[derive(Clone, Debug)]
pub struct GenusClass {
    pub lattice: Lattice,
    pub aut_order: u128,
}

/// The classes of a genus found by neighbor closure, with the matrix of
/// neighbor multiplicities: `multiplicities[i][j]` counts the neighbors of
/// class `i` that are isometric to class `j`.
#[derive(Clone, Debug)]
pub struct GenusDecomposition {
    pub seed: Lattice,
    pub p: u64,
    pub classes: Vec<GenusClass>,
    pub multiplicities: Vec<Vec<u64>>,
    /// Number of neighbor-to-class isometries checked with a witness.
    pub certified_neighbors: u64,
}

impl GenusDecomposition {
    /// `Σ 1/o(L')`.
    pub fn mass(&self) -> BigRational {
        self.classes
            .iter()
            .map(|c| BigRational::new(BigInt::from(1), BigInt::from(c.aut_order)))
            .sum()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct ClassJson {
            gram: Vec<Vec<i64>>,
            aut_order: String,
        }
        #[derive(Serialize)]
        struct Doc {
            seed: Vec<Vec<i64>>,
            p: u64,
            classes: Vec<ClassJson>,
            neighbor_multiplicities: Vec<Vec<u64>>,
            certified_neighbors: u64,
            mass: String,
        }
        let m = self.mass();
        let doc = Doc {
            seed: self.seed.gram().rows(),
            p: self.p,
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    gram: c.lattice.gram().rows(),
                    aut_order: c.aut_order.to_string(),
                })
                .collect(),
            neighbor_multiplicities: self.multiplicities.clone(),
            certified_neighbors: self.certified_neighbors,
            mass: format!("{}/{}", m.numer(), m.denom()),
        };
        serde_json::to_string_pretty(&doc).expect("genus serializes")
    }
}

/// Breadth-first closure of `seed` under 1-neighbors at `p`, with every
/// neighbor matched to a representative by an explicit isometry.
pub fn genus_classes(seed: &Lattice, p: u64, limits: &Limits) -> Result<GenusDecomposition> {
    seed.check_good_prime(p)?;
    let mut reps: Vec<SymMatZ> = vec![reduced_form(seed.gram())?];
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut certified = 0u64;
    while let Some(i) = queue.pop_front() {
        let base = Lattice::new(reps[i].clone(), None)?;
        let mut row = vec![0u64; reps.len()];
        for_each_neighbor(&base, p, 1, |nb| {
            let mut found = None;
            for (j, r) in reps.iter().enumerate() {
                if isometry_witness(r, &nb.gram, limits.isometry_budget)?.is_some() {
                    found = Some(j);
                    break;
                }
            }
            let j = match found {
                Some(j) => j,
                None => {
                    reps.push(reduced_form(&nb.gram)?);
                    queue.push_back(reps.len() - 1);
                    reps.len() - 1
                }
            };
            if row.len() <= j {
                row.resize(j + 1, 0);
            }
            row[j] += 1;
            certified += 1;
            Ok(())
        })?;
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        rows[i] = row;
    }
    let n = reps.len();
    for r in rows.iter_mut() {
        r.resize(n, 0);
    }
    for a in 0..n {
        for b in a + 1..n {
            if isometry_witness(&reps[a], &reps[b], limits.isometry_budget)?.is_some() {
                return Err(Error::InvalidInput("two representatives are isometric".into()));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| reps[a].flat().cmp(reps[b].flat()));
    let mut classes = Vec::with_capacity(n);
    for &i in &order {
        let lat = Lattice::new(reps[i].clone(), None)?;
        let o = aut_order(&lat, limits.isometry_budget)?;
        classes.push(GenusClass { lattice: lat, aut_order: o });
    }
    let multiplicities = order
        .iter()
        .map(|&i| order.iter().map(|&j| rows[i][j]).collect())
        .collect();
    Ok(GenusDecomposition {
        seed: seed.clone(),
        p,
        classes,
        multiplicities,
        certified_neighbors: certified,
    })
}

/// `Σ_{cls L'} θ(L') / o(L')` truncated at trace `bound`.
pub fn genus_average_table(g: &GenusDecomposition, n: usize, bound: i64, limits: &Limits) -> Result<CoeffTable> {
    let mut out = CoeffTable::zeros(n, bound)?;
    for c in &g.classes {
        let t = theta_table(c.lattice.gram(), n, bound, limits.node_budget)?;
        out.add_scaled(&t, &BigRational::new(BigInt::from(1), BigInt::from(c.aut_order)));
    }
    Ok(out)
}

/// Shared handle used by callers that keep a lattice around.
pub fn arc(l: &Lattice) -> Arc<Lattice> {
    Arc::new(l.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det23_genus() {
        let seed = Lattice::from_rows(&[vec![2, 1], vec![1, 12]], None).unwrap();
        let g = genus_classes(&seed, 2, &Limits::default()).unwrap();
        let grams: Vec<Vec<Vec<i64>>> = g.classes.iter().map(|c| c.lattice.gram().rows()).collect();
        assert_eq!(grams, vec![vec![vec![2, 1], vec![1, 12]], vec![vec![4, 1], vec![1, 6]]]);
        let orders: Vec<u128> = g.classes.iter().map(|c| c.aut_order).collect();
        assert_eq!(orders, vec![4, 2]);
        for row in &g.multiplicities {
            assert_eq!(row.iter().sum::<u64>(), 2);
        }
        let avg = genus_average_table(&g, 1, 2, &Limits::default()).unwrap();
        let two = crate::theta::TIndex::scalar(2).unwrap();
        // only the first class represents 2, by ±e1
        assert_eq!(avg.get(&two).unwrap(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(g.multiplicities, vec![vec![0, 2], vec![1, 1]]);
        let zero = crate::theta::TIndex::scalar(0).unwrap();
        assert_eq!(avg.get(&zero).unwrap(), &g.mass());
    }

    #[test]
    fn e8_is_alone() {
        let g = genus_classes(&Lattice::e8(), 2, &Limits::default()).unwrap();
        assert_eq!(g.classes.len(), 1);
        assert_eq!(g.multiplicities, vec![vec![135]]);
    }
}
