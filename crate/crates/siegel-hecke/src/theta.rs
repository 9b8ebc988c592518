//! Fourier coefficients of degree-n theta series: representation numbers
//! `a(L,T) = #{U ∈ Z^{m×n} : UᵀQU = T}` and bounded coefficient tables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{det_i128, SymMatZ};
use crate::enumerate::{Enumerator, Region, ShortVectors};
use crate::error::{Error, Result};

/// An even positive-semidefinite symmetric matrix indexing a coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TIndex {
    mat: SymMatZ,
}

impl TIndex {
    pub fn new(mat: SymMatZ) -> Result<Self> {
        if !mat.is_even() {
            return Err(Error::InvalidInput("T must have even diagonal".into()));
        }
        if !is_psd(&mat)? {
            return Err(Error::InvalidInput("T must be positive semidefinite".into()));
        }
        Ok(TIndex { mat })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(SymMatZ::from_rows(rows)?)
    }

    /// The 1×1 index `(t)`.
    pub fn scalar(t: i64) -> Result<Self> {
        Self::from_rows(&[vec![t]])
    }

    pub fn degree(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &SymMatZ {
        &self.mat
    }

    pub fn trace(&self) -> i64 {
        self.mat.trace()
    }

    pub fn is_singular(&self) -> bool {
        let w = self.mat.widened();
        det_i128(&w, self.degree()).map_or(true, |d| d == 0)
    }

    /// `p² T` or any other scalar multiple.
    pub fn scaled(&self, c: i64) -> TIndex {
        TIndex {
            mat: SymMatZ::from_flat(self.degree(), self.mat.flat().iter().map(|x| x * c).collect()),
        }
    }
}

impl Ord for TIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.trace(), self.mat.flat()).cmp(&(
            other.degree(),
            other.trace(),
            other.mat.flat(),
        ))
    }
}

impl PartialOrd for TIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .mat
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

/// Exact positive-semidefiniteness: every principal minor is nonnegative.
fn is_psd(m: &SymMatZ) -> Result<bool> {
    let n = m.dim();
    if n > 16 {
        return Err(Error::Unsupported("degree above 16".into()));
    }
    let w = m.widened();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let k = idx.len();
        let sub: Vec<i128> = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| w[i * n + j])
            .collect();
        if det_i128(&sub, k)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Canonical representative of the `GL_n(Z)`-class of `T`.
///
/// Degree 2: `[[a,b],[b,c]]` with `0 <= 2b <= a <= c` when nonsingular,
/// `[[g,0],[0,0]]` with `g = gcd(a,b,c)` when singular. Degree >= 3 accepts
/// diagonal matrices only and sorts the diagonal.
pub fn canonicalize_t(t: &TIndex) -> Result<TIndex> {
    let n = t.degree();
    let m = &t.mat;
    match n {
        0 | 1 => Ok(t.clone()),
        2 => {
            let (mut a, mut b, mut c) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
            if a as i128 * c as i128 == b as i128 * b as i128 {
                let g = a.gcd(&b).gcd(&c);
                return TIndex::from_rows(&[vec![g, 0], vec![0, 0]]);
            }
            loop {
                if a > c {
                    std::mem::swap(&mut a, &mut c);
                }
                if 2 * b.abs() <= a {
                    break;
                }
                // y -> y - k x with k the nearest integer to b/a
                let k = (2 * b + a).div_euclid(2 * a);
                c = c - 2 * k * b + k * k * a;
                b -= k * a;
            }
            TIndex::from_rows(&[vec![a, b.abs()], vec![b.abs(), c]])
        }
        _ => {
            for i in 0..n {
                for j in 0..n {
                    if i != j && m.get(i, j) != 0 {
                        return Err(Error::Unsupported(
                            "canonical forms in degree >= 3 are limited to diagonal matrices".into(),
                        ));
                    }
                }
            }
            let mut d: Vec<i64> = (0..n).map(|i| m.get(i, i)).collect();
            d.sort_unstable();
            let rows = (0..n)
                .map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect())
                .collect::<Vec<_>>();
            TIndex::from_rows(&rows)
        }
    }
}

/// All canonical keys of degree `n` with trace at most `bound`.
pub fn canonical_keys(n: usize, bound: i64) -> Result<Vec<TIndex>> {
    let mut out = Vec::new();
    match n {
        1 => {
            for t in (0..=bound).step_by(2) {
                out.push(TIndex::scalar(t)?);
            }
        }
        2 => {
            for s in (0..=bound).step_by(2) {
                out.push(TIndex::from_rows(&[vec![s, 0], vec![0, 0]])?);
            }
            for a in (2..=bound).step_by(2) {
                for c in (a..=bound - a).step_by(2) {
                    for b in 0..=a / 2 {
                        out.push(TIndex::from_rows(&[vec![a, b], vec![b, c]])?);
                    }
                }
            }
        }
        _ => {
            let mut d = vec![0i64; n];
            diag_keys(n, 0, 0, bound, &mut d, &mut out)?;
        }
    }
    out.sort();
    Ok(out)
}

fn diag_keys(n: usize, i: usize, min: i64, left: i64, d: &mut [i64], out: &mut Vec<TIndex>) -> Result<()> {
    if i == n {
        let rows = (0..n)
            .map(|r| (0..n).map(|c| if r == c { d[r] } else { 0 }).collect())
            .collect::<Vec<_>>();
        out.push(TIndex::from_rows(&rows)?);
        return Ok(());
    }
    let mut v = min;
    while v * (n - i) as i64 <= left {
        d[i] = v;
        diag_keys(n, i + 1, v, left - v, d, out)?;
        v += 2;
    }
    Ok(())
}

/// Shell of one norm with the products `Qx` precomputed.
struct Shell {
    m: usize,
    vecs: Vec<i64>,
    qvecs: Vec<i64>,
}

impl Shell {
    fn new(gram: &SymMatZ, en: &Enumerator, norm: i64, budget: &mut u64) -> Result<Self> {
        let m = gram.dim();
        let mut vecs = Vec::new();
        let used = en.for_each(norm, Region::Shell, *budget, |x, _| vecs.extend_from_slice(x))?;
        *budget = budget.saturating_sub(used);
        let mut qvecs = vec![0i64; vecs.len()];
        for (v, q) in vecs.chunks_exact(m.max(1)).zip(qvecs.chunks_exact_mut(m.max(1))) {
            for i in 0..m {
                q[i] = (0..m).map(|j| gram.get(i, j) * v[j]).sum();
            }
        }
        Ok(Shell { m, vecs, qvecs })
    }

    fn len(&self) -> usize {
        if self.m == 0 {
            1
        } else {
            self.vecs.len() / self.m
        }
    }
}

/// Calls `f` with the columns of every `U` such that `UᵀQU = T`.
/// Columns are filled left to right, each constrained by its norm and its
/// inner products with the earlier columns.
pub fn for_each_rep<F: FnMut(&[&[i64]])>(gram: &SymMatZ, t: &SymMatZ, budget: u64, mut f: F) -> Result<()> {
    let n = t.dim();
    let m = gram.dim();
    let en = Enumerator::new(gram)?;
    let mut left = budget;
    let mut shells: BTreeMap<i64, Shell> = BTreeMap::new();
    for i in 0..n {
        let d = t.get(i, i);
        if let std::collections::btree_map::Entry::Vacant(e) = shells.entry(d) {
            e.insert(Shell::new(gram, &en, d, &mut left)?);
        }
    }
    let cols: Vec<&Shell> = (0..n).map(|i| &shells[&t.get(i, i)]).collect();
    let mut chosen = vec![0usize; n];
    let mut nodes = 0u64;
    rep_rec(&cols, t, m, 0, &mut chosen, &mut nodes, left, &mut f)
}

#[allow(clippy::too_many_arguments)]
fn rep_rec<F: FnMut(&[&[i64]])>(
    cols: &[&Shell],
    t: &SymMatZ,
    m: usize,
    i: usize,
    chosen: &mut [usize],
    nodes: &mut u64,
    budget: u64,
    f: &mut F,
) -> Result<()> {
    let n = cols.len();
    if i == n {
        let us: Vec<&[i64]> = (0..n)
            .map(|l| &cols[l].vecs[chosen[l] * m..(chosen[l] + 1) * m])
            .collect();
        f(&us);
        return Ok(());
    }
    for idx in 0..cols[i].len() {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::NodeBudget {
                context: "representation search",
                budget,
            });
        }
        let y = &cols[i].vecs[idx * m..(idx + 1) * m];
        let ok = (0..i).all(|l| {
            let qx = &cols[l].qvecs[chosen[l] * m..(chosen[l] + 1) * m];
            qx.iter().zip(y).map(|(a, b)| a * b).sum::<i64>() == t.get(l, i)
        });
        if ok {
            chosen[i] = idx;
            rep_rec(cols, t, m, i + 1, chosen, nodes, budget, f)?;
        }
    }
    Ok(())
}

/// `a(L,T)`.
pub fn rep_number(gram: &SymMatZ, t: &TIndex, budget: u64) -> Result<u64> {
    let mut c = 0u64;
    for_each_rep(gram, &t.mat, budget, |_| c += 1)?;
    Ok(c)
}

/// Exact table of coefficients indexed by canonical `T` of trace `<= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    degree: usize,
    bound: i64,
    entries: BTreeMap<TIndex, BigRational>,
}

impl CoeffTable {
    pub fn new(degree: usize, bound: i64) -> Self {
        CoeffTable {
            degree,
            bound,
            entries: BTreeMap::new(),
        }
    }

    /// Table with every canonical key present and zero.
    pub fn zeros(degree: usize, bound: i64) -> Result<Self> {
        let mut t = Self::new(degree, bound);
        for k in canonical_keys(degree, bound)? {
            t.entries.insert(k, BigRational::zero());
        }
        Ok(t)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn entries(&self) -> &BTreeMap<TIndex, BigRational> {
        &self.entries
    }

    pub fn get(&self, t: &TIndex) -> Option<&BigRational> {
        self.entries.get(t)
    }

    pub fn insert(&mut self, t: TIndex, v: BigRational) {
        self.entries.insert(t, v);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self += c · other`, key by key (keys of `other` are added if absent).
    pub fn add_scaled(&mut self, other: &CoeffTable, c: &BigRational) {
        for (k, v) in &other.entries {
            let e = self.entries.entry(k.clone()).or_insert_with(BigRational::zero);
            *e += v * c;
        }
    }

    pub fn scaled(&self, c: &BigRational) -> CoeffTable {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.is_zero())
    }

    pub fn to_json(&self) -> String {
        let doc = TableJson {
            degree: self.degree,
            bound: self.bound,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryJson {
                    t: k.mat.rows(),
                    value: rational_string(v),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TableJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut t = CoeffTable::new(doc.degree, doc.bound);
        for e in doc.entries {
            let k = TIndex::from_rows(&e.t)?;
            if k.degree() != doc.degree {
                return Err(Error::Parse(format!("key {k} has the wrong degree")));
            }
            t.entries.insert(k, parse_rational(&e.value)?);
        }
        Ok(t)
    }

    /// CSV: a `# degree=n bound=B` line, a header, then one row per key with
    /// the row-major entries of `T`, the numerator and the denominator.
    pub fn to_csv(&self) -> String {
        let n = self.degree;
        let mut s = format!("# degree={} bound={}\n", n, self.bound);
        let mut head: Vec<String> = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("t{}{}", i + 1, j + 1)))
            .collect();
        head.push("numerator".into());
        head.push("denominator".into());
        s.push_str(&head.join(","));
        s.push('\n');
        for (k, v) in &self.entries {
            let mut row: Vec<String> = k.mat.flat().iter().map(|x| x.to_string()).collect();
            row.push(v.numer().to_string());
            row.push(v.denom().to_string());
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let meta = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| Error::Parse("missing '# degree=.. bound=..' line".into()))?;
        let mut degree = None;
        let mut bound = None;
        for part in meta.split_whitespace() {
            if let Some(v) = part.strip_prefix("degree=") {
                degree = v.parse::<usize>().ok();
            } else if let Some(v) = part.strip_prefix("bound=") {
                bound = v.parse::<i64>().ok();
            }
        }
        let (degree, bound) = match (degree, bound) {
            (Some(d), Some(b)) => (d, b),
            _ => return Err(Error::Parse("bad metadata line".into())),
        };
        lines.next();
        let mut t = CoeffTable::new(degree, bound);
        for (ln, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != degree * degree + 2 {
                return Err(Error::Parse(format!("row {} has {} fields", ln + 3, f.len())));
            }
            let nums: Vec<i64> = f[..degree * degree]
                .iter()
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(e.to_string()))?;
            let num: BigInt = f[degree * degree].trim().parse().map_err(|_| Error::Parse("numerator".into()))?;
            let den: BigInt = f[degree * degree + 1]
                .trim()
                .parse()
                .map_err(|_| Error::Parse("denominator".into()))?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            let key = TIndex::new(SymMatZ::from_rows(
                &nums.chunks(degree.max(1)).map(|c| c.to_vec()).collect::<Vec<_>>(),
            )?)?;
            t.entries.insert(key, BigRational::new(num, den));
        }
        Ok(t)
    }

    /// If every entry equals `c` times the matching entry of `base` (same key
    /// set), returns `c`. An all-zero `base` forces `self` to be zero.
    pub fn ratio_to(&self, base: &CoeffTable) -> Option<BigRational> {
        if self.entries.len() != base.entries.len() {
            return None;
        }
        let mut c: Option<BigRational> = None;
        for (k, v) in &self.entries {
            let b = base.entries.get(k)?;
            if b.is_zero() {
                if !v.is_zero() {
                    return None;
                }
                continue;
            }
            let r = v / b;
            match &c {
                None => c = Some(r),
                Some(x) if *x == r => {}
                _ => return None,
            }
        }
        Some(c.unwrap_or_else(BigRational::zero))
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    degree: usize,
    bound: i64,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    t: Vec<Vec<i64>>,
    value: String,
}

/// `"num/den"` with the denominator always present.
pub fn rational_string(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Theta coefficients `a(L,T)` for every canonical key of trace `<= bound`.
pub fn theta_table(gram: &SymMatZ, n: usize, bound: i64, budget: u64) -> Result<CoeffTable> {
    if bound < 0 {
        return Err(Error::InvalidInput("bound must be nonnegative".into()));
    }
    let mut table = CoeffTable::zeros(n, bound)?;
    let int = |c: u64| BigRational::from_integer(BigInt::from(c));
    match n {
        0 => return Err(Error::InvalidInput("degree must be at least 1".into())),
        1 => {
            let sv = ShortVectors::compute(gram, bound, budget)?;
            for t in (0..=bound).step_by(2) {
                table.insert(TIndex::scalar(t)?, int(sv.count(t) as u64));
            }
        }
        2 => {
            let sv = ShortVectors::compute(gram, bound, budget)?;
            let m = gram.dim();
            for s in (0..=bound).step_by(2) {
                table.insert(TIndex::from_rows(&[vec![s, 0], vec![0, 0]])?, int(sv.count(s) as u64));
            }
            let mut counts: BTreeMap<(i64, i64, i64), u64> = BTreeMap::new();
            for a in (2..=bound / 2).step_by(2) {
                let qx: Vec<Vec<i64>> = sv
                    .shell(a)
                    .map(|x| (0..m).map(|i| (0..m).map(|j| gram.get(i, j) * x[j]).sum()).collect())
                    .collect();
                for c in (a..=bound - a).step_by(2) {
                    for y in sv.shell(c) {
                        for q in &qx {
                            let b: i64 = q.iter().zip(y).map(|(u, v)| u * v).sum();
                            if b >= 0 && 2 * b <= a {
                                *counts.entry((a, b, c)).or_insert(0) += 1;
                            }
                        }
                    }
                }
            }
            for ((a, b, c), v) in counts {
                table.insert(TIndex::from_rows(&[vec![a, b], vec![b, c]])?, int(v));
            }
        }
        _ => {
            let keys: Vec<TIndex> = table.entries.keys().cloned().collect();
            for k in keys {
                let v = rep_number(gram, &k, budget)?;
                table.insert(k, int(v));
            }
        }
    }
    Ok(table)
}

/// Sum of `a(L,T)` over all (not only canonical) even psd `T` of degree 2 and
/// trace `<= bound`, by direct pair enumeration. Used as a cross-check.
pub fn count_pairs_by_trace(gram: &SymMatZ, bound: i64, budget: u64) -> Result<BigInt> {
    let sv = ShortVectors::compute(gram, bound, budget)?;
    let mut total = BigInt::zero();
    for a in (0..=bound).step_by(2) {
        for c in (0..=bound - a).step_by(2) {
            total += BigInt::from(sv.count(a)) * BigInt::from(sv.count(c));
        }
    }
    Ok(total)
}

/// Number of even psd degree-2 matrices of trace `<= bound` in the class of `key`.
pub fn class_size_by_trace(key: &TIndex, bound: i64) -> Result<u64> {
    let mut c = 0u64;
    for a in (0..=bound).step_by(2) {
        for cc in (0..=bound - a).step_by(2) {
            let lim = ((a * cc) as f64).sqrt() as i64 + 1;
            for b in -lim..=lim {
                if b * b > a * cc {
                    continue;
                }
                let t = TIndex::from_rows(&[vec![a, b], vec![b, cc]])?;
                if canonicalize_t(&t)? == *key {
                    c += 1;
                }
            }
        }
    }
    Ok(c)
}

/// `true` if `v` is a nonnegative integer.
pub fn is_nonneg_integer(v: &BigRational) -> bool {
    v.is_integer() && !v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::e8_gram;

    fn t2(a: i64, b: i64, c: i64) -> TIndex {
        TIndex::from_rows(&[vec![a, b], vec![b, c]]).unwrap()
    }

    #[test]
    fn rep_number_examples() {
        let z2 = SymMatZ::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(rep_number(&z2, &TIndex::scalar(2).unwrap(), u64::MAX).unwrap(), 4);
        assert_eq!(rep_number(&e8_gram(), &TIndex::scalar(2).unwrap(), u64::MAX).unwrap(), 240);
        assert_eq!(rep_number(&e8_gram(), &t2(0, 0, 0), u64::MAX).unwrap(), 1);
    }

    #[test]
    fn e8_degree_one_table() {
        let t = theta_table(&e8_gram(), 1, 4, u64::MAX).unwrap();
        let v: Vec<String> = t.entries().values().map(rational_string).collect();
        assert_eq!(v, ["1/1", "240/1", "2160/1"]);
        let t0 = theta_table(&e8_gram(), 1, 0, u64::MAX).unwrap();
        assert_eq!(t0.len(), 1);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonicalize_t(&t2(2, -1, 2)).unwrap(), t2(2, 1, 2));
        assert_eq!(canonicalize_t(&t2(4, 0, 2)).unwrap(), t2(2, 0, 4));
        assert_eq!(canonicalize_t(&t2(2, 2, 2)).unwrap(), t2(2, 0, 0));
        assert_eq!(canonicalize_t(&t2(0, 0, 4)).unwrap(), t2(4, 0, 0));
        assert_eq!(canonicalize_t(&t2(6, 5, 6)).unwrap(), t2(2, 1, 6));
    }

    #[test]
    fn canonical_keys_are_distinct_classes() {
        let keys = canonical_keys(2, 10).unwrap();
        for k in &keys {
            assert_eq!(&canonicalize_t(k).unwrap(), k);
        }
        // brute force: no two keys are related by a small GL2(Z) matrix
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                for g in small_gl2(2) {
                    assert_ne!(&a.mat().congruent(&g, 2).unwrap(), b.mat());
                }
            }
        }
    }

    pub(crate) fn small_gl2(r: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        if (a * d - b * c).abs() == 1 {
                            out.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn table_round_trips() {
        let z2 = SymMatZ::from_rows(&[vec![2, 1], vec![1, 12]]).unwrap();
        let t = theta_table(&z2, 2, 8, u64::MAX).unwrap();
        assert_eq!(CoeffTable::from_csv(&t.to_csv()).unwrap(), t);
        assert_eq!(CoeffTable::from_json(&t.to_json()).unwrap(), t);
        let half = t.scaled(&BigRational::new(1.into(), 2.into()));
        assert_eq!(CoeffTable::from_csv(&half.to_csv()).unwrap(), half);
    }

    #[test]
    fn degree_two_totals_match_pair_count() {
        for g in [
            e8_gram(),
            SymMatZ::from_rows(&[vec![2, 1], vec![1, 12]]).unwrap(),
            SymMatZ::from_rows(&[vec![4, 1], vec![1, 6]]).unwrap(),
        ] {
            let b = 6;
            let t = theta_table(&g, 2, b, u64::MAX).unwrap();
            let mut total = BigInt::zero();
            for (k, v) in t.entries() {
                total += v.to_integer() * BigInt::from(class_size_by_trace(k, b).unwrap());
            }
            assert_eq!(total, count_pairs_by_trace(&g, b, u64::MAX).unwrap());
        }
    }

    #[test]
    fn table_matches_generic_search() {
        let g = SymMatZ::from_rows(&[vec![4, 1], vec![1, 6]]).unwrap();
        let t = theta_table(&g, 2, 12, u64::MAX).unwrap();
        for (k, v) in t.entries() {
            assert_eq!(v.to_integer(), BigInt::from(rep_number(&g, k, u64::MAX).unwrap()), "{k}");
        }
        let t3 = theta_table(&e8_gram(), 3, 4, u64::MAX).unwrap();
        let d = TIndex::from_rows(&[vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(t3.get(&d).unwrap().to_integer(), BigInt::from(240));
        let d = TIndex::from_rows(&[vec![0, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(t3.get(&d).unwrap().to_integer(), BigInt::from(240 * 126));
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(TIndex::from_rows(&[vec![3]]).is_err());
        assert!(TIndex::from_rows(&[vec![2, 3], vec![3, 2]]).is_err());
        assert!(canonicalize_t(&TIndex::from_rows(&[vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 2]]).unwrap()).is_err());
    }
}
