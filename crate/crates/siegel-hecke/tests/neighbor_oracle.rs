//! p-neighbors against a brute-force walk over every lattice between pL and
//! p⁻¹L, written as column HNFs of pK inside L.

use std::collections::BTreeMap;

use siegel_hecke::arith::SymMatZ;
use siegel_hecke::genus::{for_each_neighbor, reduced_form};
use siegel_hecke::Lattice;

fn rank_mod(h: &[Vec<i64>], p: i64) -> usize {
    let mut rows: Vec<Vec<i64>> = h.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let m = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..m {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = (1..p).find(|v| v * rows[rank][c] % p == 1).unwrap();
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c] * inv % p;
                for k in 0..m {
                    rows[i][k] = (rows[i][k] - f * rows[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `H x = v` has an integral solution (H upper triangular).
fn solvable(h: &[Vec<i64>], v: &[i64]) -> bool {
    let m = v.len();
    let mut x = vec![0i64; m];
    for i in (0..m).rev() {
        let s: i64 = v[i] - (i + 1..m).map(|j| h[i][j] * x[j]).sum::<i64>();
        if s % h[i][i] != 0 {
            return false;
        }
        x[i] = s / h[i][i];
    }
    true
}

/// r -> sorted reduced Grams of every K with pL ⊆ K ⊆ p⁻¹L, even, det K = det L.
fn brute(l: &Lattice, p: i64) -> BTreeMap<usize, Vec<Vec<i64>>> {
    let m = l.rank();
    let g = l.gram();
    let mut out: BTreeMap<usize, Vec<Vec<i64>>> = BTreeMap::new();
    let choices = [1, p, p * p];
    let mut diag = vec![0usize; m];
    loop {
        let d: Vec<i64> = diag.iter().map(|&i| choices[i]).collect();
        if d.iter().product::<i64>() == p.pow(m as u32) {
            let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
            let total: i64 = slots.iter().map(|&(i, _)| d[i]).product();
            for mut code in 0..total {
                let mut h = vec![vec![0i64; m]; m];
                for i in 0..m {
                    h[i][i] = d[i];
                }
                for &(i, j) in &slots {
                    h[i][j] = code % d[i];
                    code /= d[i];
                }
                let contains = (0..m).all(|i| {
                    let mut v = vec![0; m];
                    v[i] = p * p;
                    solvable(&h, &v)
                });
                if !contains {
                    continue;
                }
                let mut kg = vec![0i64; m * m];
                let mut ok = true;
                for a in 0..m {
                    for b in 0..m {
                        let v: i64 = (0..m)
                            .map(|i| h[i][a] * (0..m).map(|j| g.get(i, j) * h[j][b]).sum::<i64>())
                            .sum();
                        if v % (p * p) != 0 || (a == b && (v / (p * p)) % 2 != 0) {
                            ok = false;
                        }
                        kg[a * m + b] = v / (p * p);
                    }
                }
                if !ok {
                    continue;
                }
                let r = rank_mod(&h, p);
                let red = reduced_form(&SymMatZ::from_flat(m, kg)).unwrap();
                out.entry(r).or_default().push(red.flat().to_vec());
            }
        }
        let mut i = 0;
        while i < m && diag[i] == 2 {
            diag[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        diag[i] += 1;
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

fn check(rows: &[Vec<i64>], p: u64) {
    let l = Lattice::from_rows(rows, None).unwrap();
    let want = brute(&l, p as i64);
    for r in 1..=l.rank() / 2 {
        let mut got = Vec::new();
        let n = for_each_neighbor(&l, p, r, |nb| {
            got.push(reduced_form(&nb.gram)?.flat().to_vec());
            Ok(())
        })
        .unwrap();
        got.sort();
        let w = want.get(&r).cloned().unwrap_or_default();
        assert_eq!(n as usize, w.len(), "{rows:?} p={p} r={r}: count");
        assert_eq!(got, w, "{rows:?} p={p} r={r}: grams");
    }
}

#[test]
fn rank_two() {
    check(&[vec![2, 1], vec![1, 12]], 2);
    check(&[vec![2, 1], vec![1, 12]], 3);
    check(&[vec![4, 1], vec![1, 6]], 2);
    check(&[vec![2, 1], vec![1, 2]], 2);
    check(&[vec![2, 0], vec![0, 2]], 3);
}

#[test]
fn rank_four() {
    let a4 = [vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]];
    check(&a4, 2);
    check(&a4, 3);
    let d4 = [vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]];
    check(&d4, 3);
}
