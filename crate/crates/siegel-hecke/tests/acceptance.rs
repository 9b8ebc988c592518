//! Acceptance run: one line per criterion, `PASS`/`FAIL`, with the tolerance
//! and time limit it was held to. Exits nonzero on any failure that is not a
//! recorded known exception.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use siegel_hecke::arith::{beta, eta, kronecker, SymMatZ};
use siegel_hecke::ffquad::{all_spaces, classify, gauss_sum_lattice, thm45_closing_identity_check};
use siegel_hecke::genus::{for_each_neighbor, genus_classes, isometry_witness, is_witness, neighbors};
use siegel_hecke::hecke::{tprime_from_ttilde, ttilde_by_key, verify_eigenvalue, EigenCase, NeighborSums};
use siegel_hecke::theta::{canonical_keys, rational_string};
use siegel_hecke::{Lattice, Limits};

struct Line {
    id: &'static str,
    name: &'static str,
    tol: &'static str,
    limit: Duration,
    elapsed: Duration,
    ok: bool,
    detail: String,
    /// Failure accepted as a known exception; see the reason in `detail`.
    known: bool,
}

fn run(
    id: &'static str,
    name: &'static str,
    limit_s: u64,
    f: impl FnOnce() -> Result<String, String>,
) -> Line {
    let t0 = Instant::now();
    let r = f();
    let elapsed = t0.elapsed();
    let limit = Duration::from_secs(limit_s);
    let (ok, detail) = match r {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over the time limit")),
        Err(e) => (false, e),
    };
    Line { id, name, tol: "exact", limit, elapsed, ok, detail, known: false }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lat(rows: &[[i64; 2]], label: &str) -> Lattice {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    Lattice::from_rows(&rows, Some(label)).unwrap()
}

fn e(err: siegel_hecke::Error) -> String {
    err.to_string()
}

// 1. Subspace and extension counts by enumeration.

fn vectors(q: u64, r: usize) -> Vec<Vec<u64>> {
    (0..q.pow(r as u32))
        .map(|mut c| {
            (0..r)
                .map(|_| {
                    let d = c % q;
                    c /= q;
                    d
                })
                .collect()
        })
        .collect()
}

fn index(v: &[u64], q: u64) -> usize {
    v.iter().rev().fold(0, |a, &d| a * q as usize + d as usize)
}

/// `F_q^r` with `q^r <= 128`: vectors as indices, subsets as bitmasks.
struct Space {
    size: usize,
    add: Vec<Vec<usize>>,
}

impl Space {
    fn new(q: u64, r: usize) -> Self {
        let all = vectors(q, r);
        let add = all
            .iter()
            .map(|a| {
                all.iter()
                    .map(|b| index(&a.iter().zip(b).map(|(x, y)| (x + y) % q).collect::<Vec<_>>(), q))
                    .collect()
            })
            .collect();
        Space { size: all.len(), add }
    }

    /// `span(w) + F_q x` from the bitmask of `span(w)`.
    fn extend(&self, span: u128, x: usize) -> u128 {
        let mut out = span;
        let mut mult = 0; // c·x for c = 1, 2, ...
        loop {
            mult = self.add[mult][x];
            if mult == 0 {
                break;
            }
            for s in 0..self.size {
                if span >> s & 1 == 1 {
                    out |= 1 << self.add[s][mult];
                }
            }
        }
        out
    }
}

fn subspace_sets(q: u64, r: usize) -> Vec<HashSet<u128>> {
    let sp = Space::new(q, r);
    let mut levels = vec![HashSet::from([1u128])];
    for _ in 0..r {
        let mut next = HashSet::new();
        for &s in levels.last().unwrap() {
            for x in 0..sp.size {
                if s >> x & 1 == 0 {
                    next.insert(sp.extend(s, x));
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Ordered extensions of `span(e_1..e_a)` to a basis, counted one column
/// at a time by testing every vector for membership in the current span.
fn extensions(q: u64, r: usize, a: usize) -> u64 {
    let sp = Space::new(q, r);
    let mut span = 1u128;
    for i in 0..a {
        span = sp.extend(span, (q as usize).pow(i as u32));
    }
    fn rec(sp: &Space, span: u128, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        (0..sp.size)
            .filter(|&x| span >> x & 1 == 0)
            .map(|x| if left == 1 { 1 } else { rec(sp, sp.extend(span, x), left - 1) })
            .sum()
    }
    rec(&sp, span, r - a)
}

fn criterion_1() -> Result<String, String> {
    let mut checked = 0;
    for q in [2u64, 3] {
        for r in 0..=4usize {
            let levels = subspace_sets(q, r);
            for a in 0..=r {
                let b = beta(q, r as u32, a as u32);
                ensure(b == BigInt::from(levels[a].len()), || {
                    format!("beta({q},{r},{a}) = {b}, enumeration {}", levels[a].len())
                })?;
                let x = extensions(q, r, a);
                let et = eta(q, r as u32, a as u32);
                ensure(et == BigInt::from(x), || format!("eta({q},{r},{a}) = {et}, enumeration {x}"))?;
                checked += 2;
            }
        }
    }
    Ok(format!("{checked} values"))
}

// 2. Gauss sums of random even Grams.

fn random_gram(rng: &mut ChaCha8Rng, m: usize) -> SymMatZ {
    let mut g = vec![0i64; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let v = rng.gen_range(-3..=3);
            g[i * m + j] = v;
            g[j * m + i] = v;
        }
    }
    for i in 0..m {
        let row: i64 = (0..m).filter(|&j| j != i).map(|j| g[i * m + j].abs()).sum();
        g[i * m + i] = 2 * (row / 2 + 1 + rng.gen_range(0..3));
    }
    SymMatZ::from_flat(m, g)
}

fn criterion_2() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut done = 0;
    let mut per_prime = [0usize; 3];
    while per_prime.iter().any(|&c| c < 20) {
        let m = 2 * rng.gen_range(1..=4usize);
        let g = random_gram(&mut rng, m);
        let det = g.det().map_err(e)?;
        for (slot, p) in [3u64, 5, 7].into_iter().enumerate() {
            if per_prime[slot] >= 20 || det.rem_euclid(p as i128) == 0 {
                continue;
            }
            let k = (m / 2) as u32;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let chi = kronecker((sign * det.rem_euclid(4 * p as i128)) as i64, p as i64);
            let want = BigInt::from(chi) * num_traits::pow(BigInt::from(p), k as usize);
            let got = gauss_sum_lattice(&g, p).map_err(e)?;
            ensure(got.to_integer().as_ref() == Some(&want), || {
                format!("Gram {:?} at {p}: sum {:?}, expected {want}", g.rows(), got.coeffs())
            })?;
            per_prime[slot] += 1;
            done += 1;
        }
    }
    Ok(format!("{done} sums (20 per prime, ranks 2..8)"))
}

// 3. The closing identity over the grid.

fn criterion_3() -> Result<String, String> {
    let mut n = 0;
    for q in [3u64, 5] {
        for dim in 0..=3 {
            for v in all_spaces(q, dim) {
                let w = classify(&v);
                for r in 0..=3 {
                    for j in r..=3 {
                        let ok = thm45_closing_identity_check(&v, dim + r, j, r).map_err(e)?;
                        ensure(ok, || {
                            format!("q={q} dim={dim} {:?} radical {} r={r} j={j}", w.witt_type, w.radical_dim)
                        })?;
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{n} grid points"))
}

// 4. Neighbor counts against isotropic lines.

fn isotropic_lines(g: &SymMatZ, p: u64) -> u64 {
    let m = g.dim();
    let zeros = vectors(p, m)
        .into_iter()
        .filter(|x| x.iter().any(|&d| d != 0))
        .filter(|x| {
            let xi: Vec<i64> = x.iter().map(|&d| d as i64).collect();
            (g.eval(&xi) / 2).rem_euclid(p as i64) == 0
        })
        .count() as u64;
    zeros / (p - 1)
}

fn criterion_4() -> Result<String, String> {
    let e8 = Arc::new(Lattice::e8());
    let mut parts = Vec::new();
    for (p, pinned) in [(2u64, Some(135u64)), (3, None)] {
        let got = neighbors(&e8, p, 1).map_err(e)?.len() as u64;
        let want = isotropic_lines(e8.gram(), p);
        ensure(got == want, || format!("p={p}: {got} neighbors, {want} isotropic lines"))?;
        if let Some(v) = pinned {
            ensure(got == v, || format!("p={p}: {got} neighbors, expected {v}"))?;
        }
        parts.push(format!("p={p}: {got}"));
    }
    Ok(parts.join(", "))
}

// 5. Ω/Λ expansion against the neighbor form, lattice by lattice.

fn criterion_5(unproved: &mut Vec<String>) -> Result<String, String> {
    let limits = Limits::default();
    let lattices = [
        Lattice::e8().with_label("E8"),
        lat(&[[2, 1], [1, 12]], "det23a"),
        lat(&[[4, 1], [1, 6]], "det23b"),
        lat(&[[2, 0], [0, 2]], "Z2"),
        lat(&[[2, 1], [1, 2]], "A2"),
        Lattice::from_rows(
            &[vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]],
            Some("A4"),
        )
        .unwrap(),
        Lattice::from_rows(
            &[vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]],
            Some("D4"),
        )
        .unwrap(),
    ];
    let mut cells = 0;
    let mut keys_checked = 0;
    for l in &lattices {
        for p in [2u64, 3] {
            if l.check_good_prime(p).is_err() {
                continue;
            }
            let chi = l.chi_star(p).map_err(e)?;
            let mut sums = NeighborSums::new(l, p, &limits).map_err(e)?;
            for n in 1..=2usize {
                let keys: Vec<_> = canonical_keys(n, 6)
                    .map_err(e)?
                    .into_iter()
                    .filter(|t| !t.is_singular())
                    .collect();
                let tt = ttilde_by_key(l, p, &keys, n, &limits).map_err(e)?;
                for j in 0..=n.min(l.k() as usize) {
                    let proved = j <= n && if chi == 1 { j as u32 <= l.k() } else { (j as u32) < l.k() };
                    let rhs = if proved {
                        sums.thm53(n, j, 6).map_err(e)?
                    } else {
                        unproved.push(format!("{} p={p} n={n} j={j}", l.label().unwrap_or("?")));
                        sums.thm53_unchecked(n, j, 6).map_err(e)?
                    };
                    for t in &keys {
                        let lhs = tprime_from_ttilde(p, n, j, &tt[t]);
                        let r = rhs.get(t).cloned().unwrap_or_default();
                        ensure(lhs == r, || {
                            format!(
                                "{} p={p} n={n} j={j} T={t}: expansion {} neighbors {}",
                                l.label().unwrap_or("?"),
                                rational_string(&lhs),
                                rational_string(&r)
                            )
                        })?;
                        keys_checked += 1;
                    }
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("{cells} (L,p,n,j) cells, {keys_checked} coefficients"))
}

// 6. Genus eigenvalues.

fn criterion_6() -> Result<String, String> {
    let limits = Limits::default();
    let det23 = lat(&[[2, 1], [1, 12]], "det23a");
    let cases = [
        (Lattice::e8(), 2u64, 1usize, 1usize, 6i64, 72i64),
        (Lattice::e8(), 3, 2, 1, 4, 1008),
        (Lattice::e8(), 3, 2, 2, 4, 68040),
        (det23, 2, 1, 1, 8, 2),
    ];
    let mut parts = Vec::new();
    for (l, p, n, j, b, lam) in cases {
        let r = verify_eigenvalue(&l, p, n, j, b, &limits).map_err(e)?;
        let tag = format!("p={p} n={n} j={j}");
        ensure(r.case == EigenCase::Eigenvalue, || format!("{tag}: not the eigenvalue case"))?;
        ensure(r.lambda == BigRational::from_integer(lam.into()), || {
            format!("{tag}: lambda {} expected {lam}", rational_string(&r.lambda))
        })?;
        ensure(r.passed(), || {
            let bad = r.entries.iter().find(|x| !x.matches());
            format!("{tag}: {} {:?}", r.verdict.as_str(), bad.map(|x| x.t.to_string()).or(r.error.clone()))
        })?;
        parts.push(format!("{tag} λ={lam}"));
    }
    Ok(parts.join(", "))
}

// 7. Vanishing case.

fn criterion_7() -> Result<String, String> {
    let limits = Limits::default();
    let l = lat(&[[2, 1], [1, 12]], "det23a");
    let p = 5;
    ensure(kronecker(-23, p as i64) == -1, || "kronecker(-23, 5) is not -1".into())?;
    let r = verify_eigenvalue(&l, p, 1, 1, 8, &limits).map_err(e)?;
    ensure(r.case == EigenCase::Vanishing, || "not the vanishing case".into())?;
    let keys = canonical_keys(1, 8).map_err(e)?;
    ensure(r.entries.len() == keys.len(), || format!("{} of {} keys", r.entries.len(), keys.len()))?;
    for x in &r.entries {
        ensure(x.lhs == BigRational::default(), || format!("T={}: {}", x.t, rational_string(&x.lhs)))?;
    }
    ensure(r.passed(), || r.verdict.as_str().to_string())?;
    Ok(format!("{} keys, all zero", r.entries.len()))
}

// 8. Genus of [[2,1],[1,12]].

fn criterion_8() -> Result<(String, Vec<u128>), String> {
    let limits = Limits::default();
    let seed = lat(&[[2, 1], [1, 12]], "det23a");
    let g = genus_classes(&seed, 2, &limits).map_err(e)?;
    ensure(g.classes.len() == 2, || format!("{} classes", g.classes.len()))?;
    // Certificate: every neighbor of every class maps onto a listed class by
    // a checked isometry, and the multiplicities match the recount.
    let mut total = 0u64;
    for (i, c) in g.classes.iter().enumerate() {
        let mut row = vec![0u64; g.classes.len()];
        for_each_neighbor(&c.lattice, 2, 1, |nb| {
            for (j, d) in g.classes.iter().enumerate() {
                if let Some(w) = isometry_witness(d.lattice.gram(), &nb.gram, limits.isometry_budget)? {
                    assert!(is_witness(d.lattice.gram(), &w, &nb.gram));
                    row[j] += 1;
                    return Ok(());
                }
            }
            Err(siegel_hecke::Error::InvalidInput("neighbor outside the listed classes".into()))
        })
        .map_err(e)?;
        ensure(row == g.multiplicities[i], || format!("class {i}: recount {row:?}, {:?}", g.multiplicities[i]))?;
        total += row.iter().sum::<u64>();
    }
    ensure(total == g.certified_neighbors, || "certified count differs".into())?;
    // Neighbor relation symmetry o_j·M_ij = o_i·M_ji.
    let o: Vec<u128> = g.classes.iter().map(|c| c.aut_order).collect();
    for i in 0..o.len() {
        for j in 0..o.len() {
            let (a, b) = (o[j] * g.multiplicities[i][j] as u128, o[i] * g.multiplicities[j][i] as u128);
            ensure(a == b, || format!("o_j M_ij != o_i M_ji at ({i},{j})"))?;
        }
    }
    ensure(isometry_witness(g.classes[0].lattice.gram(), g.classes[1].lattice.gram(), limits.isometry_budget)
        .map_err(e)?
        .is_none(), || "classes are isometric".into())?;
    Ok((format!("2 classes, {total} certified neighbors, mass {}", rational_string(&g.mass())), o))
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut unproved = Vec::new();
    lines.push(run("1", "q-combinatorics vs enumeration", 1, criterion_1));
    lines.push(run("2", "Gauss sums of random even Grams", 30, criterion_2));
    lines.push(run("3", "closing identity grid", 120, criterion_3));
    lines.push(run("4", "E8 neighbor counts vs isotropic lines", 30, criterion_4));
    lines.push(run("5", "per-lattice expansion vs neighbor form", 600, || criterion_5(&mut unproved)));
    lines.push(run("6", "genus eigenvalues", 900, criterion_6));
    lines.push(run("7", "genus table vanishes", 900, criterion_7));

    let mut orders = None;
    lines.push(run("8", "genus of [[2,1],[1,12]] with certificate", 60, || {
        criterion_8().map(|(d, o)| {
            orders = Some(o);
            d
        })
    }));
    let mut l8 = run("8b", "aut orders (2,2)", 60, || match &orders {
        Some(o) if o == &[2, 2] => Ok("orders (2,2)".into()),
        Some(o) => Err(format!("orders {o:?}")),
        None => Err("genus run failed".into()),
    });
    if let Some(o) = &orders {
        let mut s = o.clone();
        s.sort();
        if !l8.ok && s == [2, 4] {
            l8.known = true;
            l8.detail = format!(
                "orders {o:?}: [[2,1],[1,12]] also has (x,y) -> (x+y,-y), so |O| = 4; (2,2) is |SO|. Mass 1/4 + 1/2 = 3/4"
            );
        }
    }
    lines.push(l8);

    let mut unexpected = 0;
    for l in &lines {
        let status = match (l.ok, l.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!(
            "[{status}] criterion {:>2}: {} | tol={} | {:.2}s / limit {}s | {}",
            l.id,
            l.name,
            l.tol,
            l.elapsed.as_secs_f64(),
            l.limit.as_secs(),
            l.detail
        );
    }
    if !unproved.is_empty() {
        println!("note: neighbor form evaluated outside its proved range for {}", unproved.join("; "));
    }
    println!("{unexpected} unexpected failure(s)");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
