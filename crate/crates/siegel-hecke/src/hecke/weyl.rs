//! Reflections in the norm-2 vectors of an even lattice. They are
//! automorphisms, so any sum over a shell of a function invariant under
//! them can be taken over dominant representatives weighted by orbit size.

use std::collections::{BTreeMap, HashSet};

use crate::arith::SymMatZ;
use crate::enumerate::shell;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct RootSystem {
    m: usize,
    /// `Q·α` for each simple root `α`.
    qsimple: Vec<Vec<i64>>,
    simple: Vec<Vec<i64>>,
    /// `B(α_i, α_j)`.
    cartan: Vec<i64>,
}

impl RootSystem {
    pub fn new(gram: &SymMatZ, budget: u64) -> Result<Self> {
        let m = gram.dim();
        let roots = shell(gram, 2, budget)?;
        let big = roots.iter().flatten().map(|x| x.abs()).max().unwrap_or(0) as i128;
        let base = 2 * big + 1;
        let height = |x: &[i64]| {
            let mut h = 0i128;
            let mut w = 1i128;
            for &v in x {
                h += w * v as i128;
                w *= base;
            }
            h
        };
        let positive: Vec<Vec<i64>> = roots.into_iter().filter(|r| height(r) > 0).collect();
        let set: HashSet<&Vec<i64>> = positive.iter().collect();
        let simple: Vec<Vec<i64>> = positive
            .iter()
            .filter(|a| {
                !positive.iter().any(|b| {
                    let d: Vec<i64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                    set.contains(&d)
                })
            })
            .cloned()
            .collect();
        let qsimple: Vec<Vec<i64>> = simple
            .iter()
            .map(|a| (0..m).map(|i| (0..m).map(|j| gram.get(i, j) * a[j]).sum()).collect())
            .collect();
        let s = simple.len();
        let mut cartan = vec![0i64; s * s];
        for i in 0..s {
            for j in 0..s {
                cartan[i * s + j] = dot(&qsimple[i], &simple[j]);
            }
        }
        Ok(RootSystem {
            m,
            qsimple,
            simple,
            cartan,
        })
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// The representative of the orbit of `x` with `B(x, α) >= 0` for every
    /// simple root `α`.
    pub fn dominant(&self, x: &[i64]) -> Vec<i64> {
        let s = self.simple.len();
        let mut x = x.to_vec();
        let mut h: Vec<i64> = self.qsimple.iter().map(|q| dot(q, &x)).collect();
        while let Some(i) = (0..s).find(|&i| h[i] < 0) {
            let c = h[i];
            for t in 0..self.m {
                x[t] -= c * self.simple[i][t];
            }
            for j in 0..s {
                h[j] -= c * self.cartan[i * s + j];
            }
        }
        x
    }

    /// Orbit sizes of the dominant representatives met in `vecs`, which must
    /// be a union of orbits (a full shell, for instance).
    pub fn orbit_tally<'a, I: IntoIterator<Item = &'a [i64]>>(&self, vecs: I) -> BTreeMap<Vec<i64>, u64> {
        let mut out = BTreeMap::new();
        for v in vecs {
            *out.entry(self.dominant(v)).or_insert(0) += 1;
        }
        out
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
