//! Small dense linear algebra over a prime field. Vectors are `Vec<u64>`
//! with entries in `[0, p)`.

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (p as i128, (a % p) as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

pub fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub fn dot(a: &[u64], m: &[u64], b: &[u64], p: u64) -> u64 {
    // aᵀ M b with M row-major of size a.len() × b.len()
    let c = b.len();
    let mut s = 0u64;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let mut row = 0u64;
        for (j, &bj) in b.iter().enumerate() {
            row = (row + m[i * c + j] * bj) % p;
        }
        s = (s + ai * row) % p;
    }
    s
}

/// Row-reduces in place, drops zero rows, returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for l in 0..cols {
                    rows[i][l] = (rows[i][l] + (p - f) * rows[r][l]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, p).len()
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `cols`.
pub fn kernel(rows: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, p);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0u64; cols];
        x[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = (p - m[i][free]) % p;
        }
        out.push(x);
    }
    out
}

/// Standard basis vectors completing `basis` (assumed independent) to `F_p^dim`.
pub fn complement(basis: &[Vec<u64>], dim: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = basis.to_vec();
    let pivots = if m.is_empty() { vec![] } else { rref(&mut m, p) };
    (0..dim)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut e = vec![0u64; dim];
            e[c] = 1;
            e
        })
        .collect()
}

pub fn det_mod(m: &[u64], n: usize, p: u64) -> u64 {
    let mut a = m.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a[i * n + c] != 0) else {
            return 0;
        };
        if pr != c {
            for l in 0..n {
                a.swap(c * n + l, pr * n + l);
            }
            det = (p - det) % p;
        }
        det = det * a[c * n + c] % p;
        let inv = inv_mod(a[c * n + c], p);
        for i in c + 1..n {
            let f = a[i * n + c] * inv % p;
            if f != 0 {
                for l in c..n {
                    a[i * n + l] = (a[i * n + l] + (p - f) * a[c * n + l]) % p;
                }
            }
        }
    }
    det
}

/// Every `a`-dimensional subspace of `F_p^dim`, as its reduced row echelon basis.
pub fn subspaces(p: u64, dim: usize, a: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    if a > dim {
        return out;
    }
    let mut piv = Vec::with_capacity(a);
    choose_pivots(p, dim, a, 0, &mut piv, &mut out);
    out
}

fn choose_pivots(
    p: u64,
    dim: usize,
    a: usize,
    start: usize,
    piv: &mut Vec<usize>,
    out: &mut Vec<Vec<Vec<u64>>>,
) {
    if piv.len() == a {
        let free: Vec<(usize, usize)> = (0..a)
            .flat_map(|i| {
                let piv = piv.clone();
                (piv[i] + 1..dim)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let total = (p as usize).pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u64; dim]; a];
            for (i, &c) in piv.iter().enumerate() {
                rows[i][c] = 1;
            }
            let mut t = code;
            for &(i, c) in &free {
                rows[i][c] = (t % p as usize) as u64;
                t /= p as usize;
            }
            out.push(rows);
        }
        return;
    }
    for c in start..dim {
        piv.push(c);
        choose_pivots(p, dim, a, c + 1, piv, out);
        piv.pop();
    }
}
