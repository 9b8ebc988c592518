//! Explicit enumeration of the sublattices `Ω ⊆ p⁻¹L` with Gram `T` and of
//! the lattices `Λ` attached to each. Slower than the aggregated route in
//! [`super::ttilde`], but every object is materialized and can be inspected.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::local::{reduced_basis, row_module, LocalData};
use crate::arith::{mat_mul, snf_valuations_int, transpose, SymMatZ};
use crate::error::{Error, Result};
use crate::ffquad::FFQuadSpace;
use crate::lattice::{Lattice, SubframeBasis};
use crate::theta::{for_each_rep, TIndex};
use crate::Limits;

/// A lattice `Ω = span(U)` with columns of `U` in `p⁻¹L`.
#[derive(Clone, Debug)]
pub struct OmegaClass {
    pub parent: Arc<Lattice>,
    pub p: u64,
    pub n: usize,
    /// Canonical form of the span.
    pub rep: SubframeBasis,
    /// Numerators (over `p`) of a reduced basis: `d0` columns in `p⁻¹L∖L`,
    /// then `d1` in `L∖pL`, then `d2` in `pL`.
    pub basis: Vec<Vec<i64>>,
    /// Gram of the reduced basis.
    pub gram: SymMatZ,
    pub d0: usize,
    pub d1: usize,
    pub d2: usize,
}

/// A lattice `pΩ ⊆ Λ ⊆ Δ`.
#[derive(Clone, Debug)]
pub struct LambdaPosition {
    pub omega: OmegaClass,
    pub r0: usize,
    pub r2: usize,
    pub sub: SubframeBasis,
    /// `p` times the coordinates of `Λ` in the reduced basis of `Ω`
    /// (column HNF, row-major).
    pub coords: Vec<i64>,
    /// `(Ω∩Λ)/p(Ω+Λ)` with the reduced form.
    pub residue: FFQuadSpace,
}

impl OmegaClass {
    fn from_numerators(parent: &Arc<Lattice>, p: u64, x: &[Vec<i64>]) -> Result<Self> {
        let n = x.len();
        let rep = SubframeBasis::new(parent.clone(), p, 1, x)?;
        let (basis, d) = reduced_basis(x, p);
        let m = parent.rank();
        let flat: Vec<i64> = (0..m).flat_map(|i| basis.iter().map(move |c| c[i])).collect();
        let g = mat_mul(&transpose(&flat, m, n), &mat_mul(parent.gram().flat(), &flat, m, m, n), n, m, n);
        let p2 = (p * p) as i64;
        if g.iter().any(|v| v % p2 != 0) {
            return Err(Error::InvalidInput("Ω is not integral".into()));
        }
        let gram = SymMatZ::from_flat(n, g.into_iter().map(|v| v / p2).collect());
        Ok(OmegaClass {
            parent: parent.clone(),
            p,
            n,
            rep,
            basis,
            gram,
            d0: d[0],
            d1: d[1],
            d2: d[2],
        })
    }
}

/// Every `Ω` spanned by some `U` with columns in `p⁻¹L` and `Q[U] = T`,
/// with the number of such `U` spanning it.
pub fn omega_classes_at(l: &Arc<Lattice>, p: u64, n: usize, t: &TIndex, limits: &Limits) -> Result<Vec<(OmegaClass, u64)>> {
    l.check_good_prime(p)?;
    if t.degree() != n {
        return Err(Error::InvalidInput(format!("T has degree {} but n = {n}", t.degree())));
    }
    if t.is_singular() {
        return Err(Error::Unsupported("singular T: orbit counting needs stabilizer weights".into()));
    }
    let target = t.scaled((p * p) as i64);
    let mut groups: BTreeMap<(u32, Vec<Vec<i64>>), (Vec<Vec<i64>>, u64)> = BTreeMap::new();
    let mut err = None;
    for_each_rep(l.gram(), target.mat(), limits.node_budget, |cols| {
        let x: Vec<Vec<i64>> = cols.iter().map(|c| c.to_vec()).collect();
        match SubframeBasis::new(l.clone(), p, 1, &x) {
            Ok(s) => {
                let key = (s.exponent(), s.numerator_cols().to_vec());
                groups.entry(key).or_insert((x, 0)).1 += 1;
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    groups
        .into_values()
        .map(|(x, c)| Ok((OmegaClass::from_numerators(l, p, &x)?, c)))
        .collect()
}

/// Every `Λ` with `pΩ ⊆ Λ ⊆ Δ` and `r0 + r2 <= j`.
pub fn lambda_positions(omega: &OmegaClass, j: usize) -> Result<Vec<LambdaPosition>> {
    let ld = LocalData::new(&omega.parent, omega.p, omega.n)?;
    let n = omega.n;
    let m = omega.parent.rank();
    let cols: Vec<&[i64]> = omega.basis.iter().map(|c| c.as_slice()).collect();
    let rowmod = row_module(&cols, (omega.p * omega.p) as i64);
    let mut out = Vec::new();
    for pos in ld.positions(&omega.gram, &rowmod)? {
        if pos.r0 + pos.r2 > j {
            continue;
        }
        assert!(
            pos.r0 >= omega.d0 && pos.r2 <= omega.d2,
            "multiplicities violate r0 >= d0, r2 <= d2"
        );
        let lam: Vec<Vec<i64>> = (0..n)
            .map(|c| (0..m).map(|i| (0..n).map(|a| omega.basis[a][i] * pos.h[a * n + c]).sum()).collect())
            .collect();
        out.push(LambdaPosition {
            omega: omega.clone(),
            r0: pos.r0,
            r2: pos.r2,
            sub: SubframeBasis::new(omega.parent.clone(), omega.p, 2, &lam)?,
            coords: pos.h,
            residue: pos.residue,
        });
    }
    Ok(out)
}

impl LambdaPosition {
    /// Elementary divisor exponents of `Λ` relative to `Ω`, as a map from
    /// exponent to multiplicity.
    pub fn frame_mults(&self) -> Result<BTreeMap<i64, usize>> {
        let mut out = BTreeMap::new();
        for v in snf_valuations_int(&self.coords, self.omega.n, self.omega.p)? {
            *out.entry(v as i64 - 1).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// `χ^{e_j} p^{E_j} α_j(Ω, Λ)`.
    pub fn weight(&self, j: usize) -> Result<BigRational> {
        let ld = LocalData::new(&self.omega.parent, self.omega.p, self.omega.n)?;
        let pos = super::local::Position {
            h: Vec::new(),
            r0: self.r0,
            r2: self.r2,
            residue: self.residue.clone(),
        };
        ld.weight(j, &pos)
    }
}

/// The `T̃_j` coefficient at `T` summed class by class.
pub fn ttilde_by_classes(l: &Arc<Lattice>, p: u64, t: &TIndex, j: usize, limits: &Limits) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (omega, count) in omega_classes_at(l, p, t.degree(), t, limits)? {
        let mut w = BigRational::zero();
        for pos in lambda_positions(&omega, j)? {
            w += pos.weight(j)?;
        }
        total += w * BigRational::from_integer(count.into());
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn e8() -> Arc<Lattice> {
        Arc::new(Lattice::e8())
    }

    #[test]
    fn norm_two_classes() {
        // Integral ones are the 120 lines through roots (d0 = 0, d1 = 1); the
        // rest come from x in L∖2L of norm 8, halved (d0 = 1).
        let cl = omega_classes_at(&e8(), 2, 1, &TIndex::scalar(2).unwrap(), &Limits::default()).unwrap();
        let integral: Vec<_> = cl.iter().filter(|(o, _)| o.d0 == 0).collect();
        assert_eq!(integral.len(), 120);
        for (o, c) in &integral {
            assert_eq!(*c, 2);
            assert_eq!((o.d1, o.d2), (1, 0));
        }
        assert_eq!(cl.len() - 120, (17520 - 240) / 2);
        assert!(cl.iter().all(|(o, c)| *c == 2 && o.d0 + o.d1 + o.d2 == 1));
    }

    #[test]
    fn norm_eight_has_half_integral_classes() {
        let limits = Limits::default();
        let cl = omega_classes_at(&e8(), 2, 1, &TIndex::scalar(8).unwrap(), &limits).unwrap();
        let total: u64 = cl.iter().map(|(_, c)| c).sum();
        // Fiber size: vectors of norm 4·8 in L.
        assert_eq!(total as usize, crate::enumerate::shell(Lattice::e8().gram(), 32, 1 << 34).unwrap().len());
        let by_d0 = |d: usize| cl.iter().filter(|(o, _)| o.d0 == d).count();
        assert!(by_d0(1) > 0);
        // w′ in L∖2L of norm 8 give d0 = 0, d1 = 1; 2L gives d2 = 1.
        assert!(cl.iter().any(|(o, _)| o.d1 == 1));
        assert!(cl.iter().any(|(o, _)| o.d2 == 1));
    }

    #[test]
    fn position_counts() {
        let limits = Limits::default();
        let cl = omega_classes_at(&e8(), 2, 1, &TIndex::scalar(2).unwrap(), &limits).unwrap();
        let o = &cl[0].0;
        assert!(lambda_positions(o, 0).unwrap().iter().all(|p| p.r0 == 0 && p.r2 == 0));
        let ps = lambda_positions(o, 1).unwrap();
        let mut r0s: Vec<usize> = ps.iter().map(|p| p.r0).collect();
        r0s.sort();
        assert_eq!(r0s, vec![0, 1]);
        for p in &ps {
            let mults = p.frame_mults().unwrap();
            assert_eq!(mults.get(&1).copied().unwrap_or(0), p.r0);
            assert_eq!(mults.get(&-1).copied().unwrap_or(0), p.r2);
            assert!(p.r0 + p.r2 <= 1);
        }
    }

    #[test]
    fn singular_t_is_rejected() {
        let t = TIndex::from_rows(&[vec![2, 0], vec![0, 0]]).unwrap();
        assert!(matches!(
            omega_classes_at(&e8(), 2, 2, &t, &Limits::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
