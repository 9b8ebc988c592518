//! Isometry testing and automorphism group orders by backtracking over
//! short vectors.
//!
//! To realize a target Gram `R` inside a lattice with Gram `S` we pick, level
//! by level, vectors `v_i` of `S` with `S[v_i] = R_ii` and
//! `v_lᵀ S v_i = R_li` for every earlier level `l`. Equal determinants make
//! any complete choice unimodular.

use std::collections::HashMap;

use crate::arith::{adjugate, mat_mul, SymMatZ};
use crate::enumerate::{lll, Enumerator, Region};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Short vectors of a source Gram sorted into candidate lists for each level
/// of a target Gram.
pub(crate) struct Search {
    m: usize,
    target: SymMatZ,
    vecs: Vec<i64>,
    qvecs: Vec<i64>,
    /// `cands[i]` indexes the vectors of norm `target[i][i]`.
    cands: Vec<Vec<usize>>,
    /// Vectors per norm, for quick invariant comparison.
    pub(crate) norm_counts: Vec<usize>,
}

impl Search {
    pub(crate) fn new(source: &SymMatZ, target: &SymMatZ, budget: &mut u64) -> Result<Self> {
        let m = source.dim();
        let maxd = (0..m).map(|i| target.get(i, i)).max().unwrap_or(0);
        let en = Enumerator::new(source)?;
        let mut vecs = Vec::new();
        let mut norms = Vec::new();
        let used = en.for_each(maxd, Region::Ball, *budget, |x, v| {
            if v > 0 {
                vecs.extend_from_slice(x);
                norms.push(v);
            }
        })?;
        *budget = budget.saturating_sub(used);
        let mut qvecs = vec![0i64; vecs.len()];
        for (x, q) in vecs.chunks_exact(m).zip(qvecs.chunks_exact_mut(m)) {
            for i in 0..m {
                q[i] = (0..m).map(|j| source.get(i, j) * x[j]).sum();
            }
        }
        let mut norm_counts = vec![0usize; maxd as usize + 1];
        for &v in &norms {
            norm_counts[v as usize] += 1;
        }
        let cands = (0..m)
            .map(|i| {
                let want = target.get(i, i);
                (0..norms.len()).filter(|&k| norms[k] == want).collect()
            })
            .collect();
        Ok(Search {
            m,
            target: target.clone(),
            vecs,
            qvecs,
            cands,
            norm_counts,
        })
    }

    pub(crate) fn vec(&self, k: usize) -> &[i64] {
        &self.vecs[k * self.m..(k + 1) * self.m]
    }

    fn ip(&self, a: usize, b: usize) -> i64 {
        let m = self.m;
        self.qvecs[a * m..(a + 1) * m]
            .iter()
            .zip(&self.vecs[b * m..(b + 1) * m])
            .map(|(x, y)| x * y)
            .sum()
    }

    fn index_of(&self, x: &[i64]) -> Option<usize> {
        (0..self.vecs.len() / self.m).find(|&k| self.vec(k) == x)
    }

    /// Extends `chosen` (indices for the first levels) to a full choice.
    pub(crate) fn extend(
        &self,
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        let i = chosen.len();
        if i == self.m {
            return Ok(true);
        }
        for &k in &self.cands[i] {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::IsometryBudget { budget });
            }
            if (0..i).all(|l| self.ip(chosen[l], k) == self.target.get(l, i)) {
                chosen.push(k);
                if self.extend(chosen, nodes, budget)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }

    /// Row-major matrix whose columns are the chosen vectors.
    pub(crate) fn matrix(&self, chosen: &[usize]) -> Vec<i64> {
        let m = self.m;
        let mut g = vec![0i64; m * m];
        for (c, &k) in chosen.iter().enumerate() {
            for r in 0..m {
                g[r * m + c] = self.vecs[k * m + r];
            }
        }
        g
    }
}

/// Integer inverse of a unimodular matrix.
pub(crate) fn unimodular_inverse(t: &[i64], m: usize) -> Result<Vec<i64>> {
    let w: Vec<i128> = t.iter().map(|&x| x as i128).collect();
    let (det, adj) = adjugate(&w, m)?;
    if det.abs() != 1 {
        return Err(Error::InvalidInput("matrix is not unimodular".into()));
    }
    adj.iter()
        .map(|&x| i64::try_from(x * det).map_err(|_| Error::Overflow("inverse")))
        .collect()
}

/// `Gᵀ A G == B`.
pub fn is_witness(a: &SymMatZ, g: &[i64], b: &SymMatZ) -> bool {
    a.congruent(g, a.dim()).map_or(false, |c| &c == b)
}

/// A witness `G` with `Gᵀ·Q1·G = Q2`, or `None` when the grams are not
/// isometric. The search runs on LLL-reduced bases and the witness is
/// translated back and checked exactly.
pub fn isometry_witness(g1: &SymMatZ, g2: &SymMatZ, budget: u64) -> Result<Option<Vec<i64>>> {
    let m = g1.dim();
    if g2.dim() != m || g1.det()? != g2.det()? {
        return Ok(None);
    }
    let (r1, t1) = lll(g1);
    let (r2, t2) = lll(g2);
    let mut left = budget;
    let s1 = Search::new(&r1, &r2, &mut left)?;
    let s2 = Search::new(&r2, &r2, &mut left)?;
    if s1.norm_counts != s2.norm_counts {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(m);
    let mut nodes = 0u64;
    if !s1.extend(&mut chosen, &mut nodes, left)? {
        return Ok(None);
    }
    let gp = s1.matrix(&chosen);
    let t2i = unimodular_inverse(&t2, m)?;
    let g = mat_mul(&mat_mul(&t1, &gp, m, m, m), &t2i, m, m, m);
    if !is_witness(g1, &g, g2) {
        return Err(Error::InvalidInput("isometry witness failed verification".into()));
    }
    Ok(Some(g))
}

/// Isometry test between lattices, with the cheap invariants checked first.
pub fn is_isometric(l1: &Lattice, l2: &Lattice, budget: u64) -> Result<Option<Vec<i64>>> {
    if l1.rank() != l2.rank() || l1.det() != l2.det() || l1.level() != l2.level() {
        return Ok(None);
    }
    isometry_witness(l1.gram(), l2.gram(), budget)
}

/// Order of the integral orthogonal group, together with generators
/// (matrices in the original basis).
pub fn automorphism_group(g: &SymMatZ, budget: u64) -> Result<(u128, Vec<Vec<i64>>)> {
    let m = g.dim();
    let (r, t) = lll(g);
    let mut left = budget;
    let s = Search::new(&r, &r, &mut left)?;
    let basis: Vec<usize> = (0..m)
        .map(|i| {
            let e: Vec<i64> = (0..m).map(|j| (i == j) as i64).collect();
            s.index_of(&e).expect("basis vectors are short")
        })
        .collect();
    let nvec = s.vecs.len() / m;
    let lookup: HashMap<&[i64], usize> = (0..nvec).map(|k| (s.vec(k), k)).collect();
    let apply = |gen: &[i64], k: usize| -> usize {
        let x = s.vec(k);
        let y: Vec<i64> = (0..m).map(|i| (0..m).map(|j| gen[i * m + j] * x[j]).sum()).collect();
        lookup[y.as_slice()]
    };
    let closure = |seed: usize, gens: &[Vec<i64>], out: &mut Vec<bool>| {
        let mut stack = vec![seed];
        out[seed] = true;
        while let Some(k) = stack.pop() {
            for gen in gens {
                let y = apply(gen, k);
                if !out[y] {
                    out[y] = true;
                    stack.push(y);
                }
            }
        }
    };
    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut order: u128 = 1;
    let mut nodes = 0u64;
    for i in (0..m).rev() {
        let prefix = &basis[..i];
        let cand: Vec<usize> = s.cands[i]
            .iter()
            .copied()
            .filter(|&k| (0..i).all(|l| s.ip(prefix[l], k) == r.get(l, i)))
            .collect();
        let mut in_orbit = vec![false; nvec];
        let mut excluded = vec![false; nvec];
        closure(basis[i], &gens, &mut in_orbit);
        for &v in &cand {
            if in_orbit[v] || excluded[v] {
                continue;
            }
            let mut chosen: Vec<usize> = prefix.to_vec();
            chosen.push(v);
            if s.extend(&mut chosen, &mut nodes, left)? {
                let gen = s.matrix(&chosen);
                debug_assert!(is_witness(&r, &gen, &r));
                gens.push(gen);
                in_orbit.iter_mut().for_each(|x| *x = false);
                closure(basis[i], &gens, &mut in_orbit);
            } else {
                closure(v, &gens, &mut excluded);
            }
        }
        let size = cand.iter().filter(|&&k| in_orbit[k]).count() as u128;
        order = order.checked_mul(size).ok_or(Error::Overflow("automorphism order"))?;
    }
    let ti = unimodular_inverse(&t, m)?;
    let gens = gens
        .iter()
        .map(|a| mat_mul(&mat_mul(&t, a, m, m, m), &ti, m, m, m))
        .collect();
    Ok((order, gens))
}

/// `|O(L)|`.
pub fn aut_order(l: &Lattice, budget: u64) -> Result<u128> {
    Ok(automorphism_group(l.gram(), budget)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), None).unwrap()
    }

    /// Counts integer matrices with entries in `[-r, r]` preserving the Gram.
    fn brute_order(g: &SymMatZ, r: i64) -> u128 {
        let m = g.dim();
        let side = (2 * r + 1) as u64;
        let mut count = 0;
        for code in 0..side.pow((m * m) as u32) {
            let mut c = code;
            let a: Vec<i64> = (0..m * m)
                .map(|_| {
                    let d = (c % side) as i64 - r;
                    c /= side;
                    d
                })
                .collect();
            if is_witness(g, &a, g) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn ambiguous_form_has_an_improper_automorphism() {
        // x² + xy + 6y²: e1 -> e1, e2 -> e1 - e2 preserves the form
        let l = lat(&[&[2, 1], &[1, 12]]);
        assert!(is_witness(l.gram(), &[1, 1, 0, -1], l.gram()));
        assert_eq!(aut_order(&l, u64::MAX).unwrap(), 4);
        assert_eq!(brute_order(l.gram(), 2), 4);
        let k = lat(&[&[4, 1], &[1, 6]]);
        assert_eq!(aut_order(&k, u64::MAX).unwrap(), 2);
        assert_eq!(brute_order(k.gram(), 2), 2);
    }

    #[test]
    fn orders() {
        assert_eq!(aut_order(&lat(&[&[2, 0], &[0, 2]]), u64::MAX).unwrap(), 8);
        assert_eq!(aut_order(&lat(&[&[2, 1], &[1, 2]]), u64::MAX).unwrap(), 12);
        assert_eq!(aut_order(&Lattice::e8(), u64::MAX).unwrap(), 696729600);
    }

    #[test]
    fn generators_are_automorphisms() {
        let l = Lattice::e8();
        let (_, gens) = automorphism_group(l.gram(), u64::MAX).unwrap();
        assert!(!gens.is_empty());
        for g in &gens {
            assert!(is_witness(l.gram(), g, l.gram()));
        }
    }

    #[test]
    fn isometry_examples() {
        let a = lat(&[&[4, 1], &[1, 6]]);
        let b = lat(&[&[4, -1], &[-1, 6]]);
        let w = is_isometric(&a, &b, u64::MAX).unwrap().unwrap();
        assert!(is_witness(a.gram(), &w, b.gram()));
        let c = lat(&[&[2, 1], &[1, 12]]);
        assert!(is_isometric(&c, &a, u64::MAX).unwrap().is_none());
        let id = is_isometric(&c, &c, u64::MAX).unwrap().unwrap();
        assert!(is_witness(c.gram(), &id, c.gram()));
    }

    #[test]
    fn budget_is_distinct_from_no() {
        let e = Lattice::e8();
        assert!(matches!(
            aut_order(&e, 50),
            Err(Error::IsometryBudget { .. }) | Err(Error::NodeBudget { .. })
        ));
    }
}
