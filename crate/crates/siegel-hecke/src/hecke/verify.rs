//! Genus-level check of the eigenvalue relation: the `1/o(L′)`-weighted sum
//! of `θ(L′) | T′_j(p²)` over the classes of a genus against `λ_j` times the
//! genus average of theta series, key by key.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use super::rhs::{check_thm53_hypothesis, NeighborSums};
use super::ttilde::tprime_table;
use crate::arith::{is_prime, lambda_j};
use crate::error::{Error, Result};
use crate::genus::{genus_average_table, genus_classes, GenusDecomposition};
use crate::lattice::Lattice;
use crate::theta::{rational_string, CoeffTable, TIndex};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Which side of the eigenvalue relation applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenCase {
    /// `θ(gen L) | T′_j = λ_j θ(gen L)` with the neighbor form of `T′_j`.
    Eigenvalue,
    /// `θ(gen L) | T′_j = 0`; the left side is assembled from `T̃`
    /// coefficients on nonsingular keys and from the unproved neighbor
    /// formula on singular keys.
    Vanishing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub t: TIndex,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl LedgerEntry {
    pub fn matches(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub lattice: Lattice,
    pub p: u64,
    pub n: usize,
    pub j: usize,
    pub bound: i64,
    pub chi: i8,
    pub case: EigenCase,
    pub lambda: BigRational,
    /// Prime used for the neighbor closure of the genus.
    pub genus_prime: u64,
    pub class_count: usize,
    pub aut_orders: Vec<u128>,
    pub entries: Vec<LedgerEntry>,
    pub verdict: Verdict,
    pub error: Option<String>,
    /// Wall time; shown in the text form only, so the JSON is reproducible.
    pub elapsed: Duration,
}

/// Options of [`verify_eigenvalue_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Adds 1 to `v_1` in the neighbor assembly. The check must then fail.
    pub corrupt_v: bool,
}

pub fn verify_eigenvalue(seed: &Lattice, p: u64, n: usize, j: usize, bound: i64, limits: &Limits) -> Result<VerificationReport> {
    verify_eigenvalue_with(seed, p, n, j, bound, limits, &VerifyOptions::default())
}

/// Runs the check. Bad input is an error; running out of budget yields an
/// inconclusive report.
pub fn verify_eigenvalue_with(
    seed: &Lattice,
    p: u64,
    n: usize,
    j: usize,
    bound: i64,
    limits: &Limits,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    seed.check_good_prime(p)?;
    if n == 0 || j == 0 || j > n {
        return Err(Error::InvalidInput(format!("need 1 <= j <= n (n = {n}, j = {j})")));
    }
    if bound < 0 {
        return Err(Error::InvalidInput("bound must be nonnegative".into()));
    }
    let chi = seed.chi_star(p)?;
    let k = seed.k();
    let case = if check_thm53_hypothesis(k, n, j, chi).is_ok() {
        EigenCase::Eigenvalue
    } else {
        EigenCase::Vanishing
    };
    let genus_prime = genus_prime(seed, p)?;
    let mut report = VerificationReport {
        lattice: seed.clone(),
        p,
        n,
        j,
        bound,
        chi,
        case,
        lambda: lambda_j(p, k, n as u32, j as u32, chi),
        genus_prime,
        class_count: 0,
        aut_orders: Vec::new(),
        entries: Vec::new(),
        verdict: Verdict::Inconclusive,
        error: None,
        elapsed: Duration::ZERO,
    };
    match run(&mut report, limits, opts) {
        Ok(()) => {
            report.verdict = if report.entries.iter().all(LedgerEntry::matches) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
        }
        Err(e) if e.is_budget() => {
            report.error = Some(e.to_string());
            report.verdict = Verdict::Inconclusive;
        }
        Err(e) => return Err(e),
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `p` itself when it yields 1-neighbors; otherwise (rank 2 with `χ(p) = -1`,
/// where there are no isotropic lines) the smallest good prime that does.
fn genus_prime(l: &Lattice, p: u64) -> Result<u64> {
    let usable = |q: u64| -> Result<bool> { Ok(l.k() >= 2 || l.chi_star(q)? == 1) };
    if usable(p)? {
        return Ok(p);
    }
    let level = l.level();
    (2u64..)
        .filter(|&q| is_prime(q) && level % q != 0)
        .take(1000)
        .find_map(|q| match usable(q) {
            Ok(true) => Some(Ok(q)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .unwrap_or_else(|| Err(Error::Unsupported("no prime with isotropic lines found".into())))
}

fn run(report: &mut VerificationReport, limits: &Limits, opts: &VerifyOptions) -> Result<()> {
    let (p, n, j, bound) = (report.p, report.n, report.j, report.bound);
    let genus: GenusDecomposition = genus_classes(&report.lattice, report.genus_prime, limits)?;
    report.class_count = genus.classes.len();
    report.aut_orders = genus.classes.iter().map(|c| c.aut_order).collect();
    let mut lhs = CoeffTable::zeros(n, bound)?;
    let rhs;
    match report.case {
        EigenCase::Eigenvalue => {
            for c in &genus.classes {
                let mut ns = NeighborSums::new(&c.lattice, p, limits)?;
                let t = if opts.corrupt_v {
                    ns.thm53_perturbed(n, j, bound, 1)?
                } else {
                    ns.thm53(n, j, bound)?
                };
                lhs.add_scaled(&t, &inv(c.aut_order));
            }
            rhs = genus_average_table(&genus, n, bound, limits)?.scaled(&report.lambda);
        }
        EigenCase::Vanishing => {
            for c in &genus.classes {
                let mut ns = NeighborSums::new(&c.lattice, p, limits)?;
                let bump = opts.corrupt_v.then_some(1);
                let formal = ns.assemble(n, j, bound, bump)?;
                let mut t = tprime_table(&c.lattice, p, n, j, bound, limits)?;
                for (key, v) in formal.entries() {
                    if key.is_singular() {
                        t.insert(key.clone(), v.clone());
                    }
                }
                lhs.add_scaled(&t, &inv(c.aut_order));
            }
            rhs = CoeffTable::zeros(n, bound)?;
        }
    }
    report.entries = rhs
        .entries()
        .iter()
        .map(|(t, r)| LedgerEntry {
            t: t.clone(),
            lhs: lhs.get(t).cloned().unwrap_or_else(BigRational::zero),
            rhs: r.clone(),
        })
        .collect();
    Ok(())
}

fn inv(o: u128) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(o))
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Deterministic JSON: inputs, per-key values as `"num/den"`, verdict.
    pub fn to_json(&self) -> String {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "t": e.t.mat().rows(),
                    "lhs": rational_string(&e.lhs),
                    "rhs": rational_string(&e.rhs),
                    "match": e.matches(),
                })
            })
            .collect();
        let doc = json!({
            "lattice": {
                "label": self.lattice.label(),
                "gram": self.lattice.gram().rows(),
            },
            "p": self.p,
            "n": self.n,
            "j": self.j,
            "bound": self.bound,
            "chi": self.chi,
            "case": match self.case {
                EigenCase::Eigenvalue => "eigenvalue",
                EigenCase::Vanishing => "vanishing",
            },
            "lambda": rational_string(&self.lambda),
            "genus_prime": self.genus_prime,
            "classes": self.class_count,
            "aut_orders": self.aut_orders.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "entries": entries,
            "verdict": self.verdict.as_str(),
            "error": self.error,
        });
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let name = self.lattice.label().unwrap_or("lattice");
        let _ = writeln!(
            s,
            "{name}  p={}  n={}  j={}  bound={}  chi={:+}",
            self.p, self.n, self.j, self.bound, self.chi
        );
        let relation = match self.case {
            EigenCase::Eigenvalue => format!("eigenvalue {}", rational_string(&self.lambda)),
            EigenCase::Vanishing => "vanishing".to_string(),
        };
        let _ = writeln!(
            s,
            "{relation}; genus of {} class(es) by {}-neighbors",
            self.class_count, self.genus_prime
        );
        let w = self.entries.iter().map(|e| e.t.to_string().len()).max().unwrap_or(1).max(1);
        let lw = self
            .entries
            .iter()
            .map(|e| rational_string(&e.lhs).len())
            .max()
            .unwrap_or(3)
            .max(3);
        let _ = writeln!(s, "{:<w$}  {:>lw$}  rhs", "T", "lhs");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:<w$}  {:>lw$}  {}{}",
                e.t.to_string(),
                rational_string(&e.lhs),
                rational_string(&e.rhs),
                if e.matches() { "" } else { "  MISMATCH" }
            );
        }
        if let Some(err) = &self.error {
            let _ = writeln!(s, "error: {err}");
        }
        let _ = writeln!(s, "verdict: {} ({:.2} s)", self.verdict.as_str(), self.elapsed.as_secs_f64());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_degree_one() {
        let r = verify_eigenvalue(&Lattice::e8(), 2, 1, 1, 6, &Limits::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.lambda, BigRational::from_integer(72.into()));
    }

    #[test]
    fn corrupted_coefficient_fails() {
        let opts = VerifyOptions { corrupt_v: true };
        let r = verify_eigenvalue_with(&Lattice::e8(), 2, 1, 1, 4, &Limits::default(), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn small_budget_is_inconclusive() {
        let lim = Limits {
            node_budget: 10,
            isometry_budget: 10,
        };
        let r = verify_eigenvalue(&Lattice::e8(), 2, 1, 1, 6, &lim).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.error.is_some());
    }

    #[test]
    fn json_is_reproducible() {
        let l = Lattice::from_rows(&[vec![2, 1], vec![1, 12]], Some("det23")).unwrap();
        let a = verify_eigenvalue(&l, 2, 1, 1, 8, &Limits::default()).unwrap();
        let b = verify_eigenvalue(&l, 2, 1, 1, 8, &Limits::default()).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.lambda, BigRational::from_integer(2.into()));
    }

    #[test]
    fn vanishing_case_for_det23_at_five() {
        let l = Lattice::from_rows(&[vec![2, 1], vec![1, 12]], None).unwrap();
        let r = verify_eigenvalue(&l, 5, 1, 1, 8, &Limits::default()).unwrap();
        assert_eq!(r.case, EigenCase::Vanishing);
        assert_eq!(r.genus_prime, 2);
        assert!(r.passed(), "{}", r.to_text());
    }
}
