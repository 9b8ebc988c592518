//! Command-line driver. `main.rs` only forwards `std::env::args_os()` here,
//! so everything below is reachable from tests.
//!
//! Exit codes: 0 success or pass, 1 a check failed, 2 out of budget
//! (inconclusive), 3 bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ffquad::{all_spaces, classify, closing_identity_sides, WittType};
use crate::genus::{genus_classes, neighbors, reduced_form};
use crate::hecke::{verify_eigenvalue_with, Verdict, VerifyOptions};
use crate::lattice::Lattice;
use crate::theta::{rational_string, theta_table, CoeffTable};
use crate::Limits;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Rank, determinant, level, character values.
    Invariants,
    /// Theta coefficients of degree n up to trace bound.
    Theta,
    /// The r-neighbors at p (r given by --j or --r).
    Neighbors,
    /// Classes of the genus by neighbor closure at p.
    Genus,
    /// The finite-field closing identity on all spaces of dimension <= n.
    Ffcheck,
    /// The genus eigenvalue relation for T′_j(p²).
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "siegel-hecke", version, about = "Exact theta series, neighbors and Hecke eigenvalue checks for even lattices")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Lattice file: {"label": "...", "gram": [[...]]}.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, visible_alias = "r")]
    pub j: Option<usize>,
    #[arg(long)]
    pub bound: Option<i64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = Limits::default().node_budget)]
    pub node_budget: u64,
    #[arg(long, default_value_t = Limits::default().isometry_budget)]
    pub isometry_budget: u64,
    /// Perturbs one neighbor-form coefficient (negative control).
    #[arg(long, hide = true)]
    pub corrupt_v: bool,
}

/// Validated run parameters.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub lattice: Option<PathBuf>,
    pub p: Option<u64>,
    pub n: Option<usize>,
    pub j: Option<usize>,
    pub bound: Option<i64>,
    pub limits: Limits,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub corrupt_v: bool,
}

/// What a command produced: the document in the requested format, an
/// optional summary for the terminal when the document goes to a file, and
/// the exit status.
#[derive(Clone, Debug)]
pub struct Output {
    pub body: String,
    pub summary: Option<String>,
    pub status: i32,
}

impl RunConfig {
    pub fn from_cli(c: Cli) -> Result<Self> {
        if let Some(p) = c.p {
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("--p {p} is not prime")));
            }
        }
        if let Some(b) = c.bound {
            if b < 0 {
                return Err(Error::InvalidInput("--bound must be >= 0".into()));
            }
        }
        if c.node_budget == 0 || c.isometry_budget == 0 {
            return Err(Error::InvalidInput("budgets must be positive".into()));
        }
        if c.command == Command::Verify {
            match (c.n, c.j) {
                (Some(n), Some(j)) if 1 <= j && j <= n => {}
                _ => return Err(Error::InvalidInput("verify needs 1 <= --j <= --n".into())),
            }
        }
        Ok(RunConfig {
            command: c.command,
            lattice: c.lattice,
            p: c.p,
            n: c.n,
            j: c.j,
            bound: c.bound,
            limits: Limits {
                node_budget: c.node_budget,
                isometry_budget: c.isometry_budget,
            },
            format: c.format,
            out: c.out,
            corrupt_v: c.corrupt_v,
        })
    }

    fn lattice(&self) -> Result<Lattice> {
        let path = self
            .lattice
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("--lattice is required".into()))?;
        let s = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Lattice::from_json(&s)
    }

    fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
        v.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required")))
    }
}

/// Parses `args` (program name first), runs, writes output, and returns
/// the exit status.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let out = RunConfig::from_cli(cli).and_then(|cfg| {
        let o = run(&cfg)?;
        emit(&cfg, &o)?;
        Ok(o.status)
    });
    match out {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn emit(cfg: &RunConfig, o: &Output) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &o.body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            if let Some(s) = &o.summary {
                print!("{s}");
            }
        }
        None => print!("{}", o.body),
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Result<Output> {
    match cfg.command {
        Command::Invariants => cmd_invariants(cfg),
        Command::Theta => cmd_theta(cfg),
        Command::Neighbors => cmd_neighbors(cfg),
        Command::Genus => cmd_genus(cfg),
        Command::Ffcheck => cmd_ffcheck(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

fn ok(body: String) -> Output {
    Output {
        body,
        summary: None,
        status: EXIT_OK,
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn gram_string(rows: &[Vec<i64>]) -> String {
    let r: Vec<String> = rows
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("[{}]", r.join(";"))
}

/// Rank, determinant, level, evenness, and `χ*(p)` for primes up to
/// `--bound` (default 30).
pub fn cmd_invariants(cfg: &RunConfig) -> Result<Output> {
    let l = cfg.lattice()?;
    let top = cfg.bound.unwrap_or(30).max(2) as u64;
    let mut chars = Vec::new();
    for q in (2..=top).filter(|&q| is_prime(q)) {
        let v = if l.level() % q == 0 {
            None
        } else {
            Some(l.chi_star(q)?)
        };
        chars.push((q, v));
    }
    let body = match cfg.format {
        Format::Json => {
            let ch: serde_json::Map<String, serde_json::Value> = chars
                .iter()
                .map(|(q, v)| (q.to_string(), v.map_or(serde_json::Value::Null, |x| json!(x))))
                .collect();
            let doc = json!({
                "label": l.label(),
                "m": l.rank(),
                "k": l.k(),
                "det": l.det().to_string(),
                "level": l.level(),
                "even": true,
                "chi": ch,
            });
            serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            let _ = writeln!(s, "m,{}\nk,{}\ndet,{}\nlevel,{}\neven,true", l.rank(), l.k(), l.det(), l.level());
            for (q, v) in &chars {
                let _ = writeln!(s, "chi_{q},{}", v.map_or("bad".to_string(), |x| x.to_string()));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", l.label().unwrap_or("lattice"));
            let _ = writeln!(s, "m = {}, k = {}, det = {}, level = {}", l.rank(), l.k(), l.det(), l.level());
            let _ = writeln!(s, "even integral, positive definite");
            for (q, v) in &chars {
                match v {
                    Some(x) => {
                        let _ = writeln!(s, "chi*({q}) = {x:+}");
                    }
                    None => {
                        let _ = writeln!(s, "chi*({q}): {q} divides the level");
                    }
                }
            }
            s
        }
    };
    Ok(ok(body))
}

fn table_text(t: &CoeffTable) -> String {
    let mut s = String::new();
    let w = t.entries().keys().map(|k| k.to_string().len()).max().unwrap_or(1);
    for (k, v) in t.entries() {
        let _ = writeln!(s, "{:<w$}  {}", k.to_string(), rational_string(v));
    }
    s
}

fn render_table(t: &CoeffTable, f: Format) -> String {
    match f {
        Format::Json => with_newline(t.to_json()),
        Format::Csv => with_newline(t.to_csv()),
        Format::Text => table_text(t),
    }
}

pub fn cmd_theta(cfg: &RunConfig) -> Result<Output> {
    let l = cfg.lattice()?;
    let n = RunConfig::need(cfg.n, "n")?;
    let b = RunConfig::need(cfg.bound, "bound")?;
    let t = theta_table(l.gram(), n, b, cfg.limits.node_budget)?;
    Ok(ok(render_table(&t, cfg.format)))
}

pub fn cmd_neighbors(cfg: &RunConfig) -> Result<Output> {
    let l = std::sync::Arc::new(cfg.lattice()?);
    let p = RunConfig::need(cfg.p, "p")?;
    let r = RunConfig::need(cfg.j, "r")?;
    let set = neighbors(&l, p, r)?;
    let grams: Vec<Vec<Vec<i64>>> = set
        .grams()
        .iter()
        .map(|g| reduced_form(g).map(|x| x.rows()))
        .collect::<Result<_>>()?;
    let body = match cfg.format {
        Format::Json => {
            let doc = json!({ "p": p, "r": r, "count": set.len(), "grams": grams });
            serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("index,gram\n");
            for (i, g) in grams.iter().enumerate() {
                let _ = writeln!(s, "{i},\"{}\"", gram_string(g));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} neighbors (p = {p}, r = {r})\n", set.len());
            for g in &grams {
                let _ = writeln!(s, "{}", gram_string(g));
            }
            s
        }
    };
    Ok(ok(body))
}

pub fn cmd_genus(cfg: &RunConfig) -> Result<Output> {
    let l = cfg.lattice()?;
    let p = RunConfig::need(cfg.p, "p")?;
    let g = genus_classes(&l, p, &cfg.limits)?;
    let body = match cfg.format {
        Format::Json => with_newline(g.to_json()),
        Format::Csv => {
            let mut s = String::from("class,gram,aut_order\n");
            for (i, c) in g.classes.iter().enumerate() {
                let _ = writeln!(s, "{i},\"{}\",{}", gram_string(&c.lattice.gram().rows()), c.aut_order);
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} classes by {p}-neighbors, mass {}\n", g.classes.len(), rational_string(&g.mass()));
            for (i, c) in g.classes.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{i}: {}  |O| = {}  neighbors {:?}",
                    gram_string(&c.lattice.gram().rows()),
                    c.aut_order,
                    g.multiplicities[i]
                );
            }
            let _ = writeln!(s, "{} neighbor isometries certified", g.certified_neighbors);
            s
        }
    };
    Ok(ok(body))
}

/// Every space of dimension `<= n` (default 3) over `F_p`, every
/// `r <= j <= 3`: both sides of the closing identity.
pub fn cmd_ffcheck(cfg: &RunConfig) -> Result<Output> {
    let p = RunConfig::need(cfg.p, "p")?;
    let dmax = cfg.n.unwrap_or(3);
    let mut rows = Vec::new();
    for dim in 0..=dmax {
        for v in all_spaces(p, dim) {
            let w = classify(&v);
            for r in 0..=3usize {
                for j in r..=3usize {
                    let (lhs, rhs) = closing_identity_sides(&v, dim + r, j, r)?;
                    let wt = match w.witt_type {
                        WittType::Plus => "+",
                        WittType::Minus => "-",
                        WittType::Odd => "odd",
                    };
                    rows.push((dim, w.radical_dim, wt, r, j, lhs, rhs));
                }
            }
        }
    }
    let failed = rows.iter().filter(|r| r.5 != r.6).count();
    let body = match cfg.format {
        Format::Json => {
            let cases: Vec<_> = rows
                .iter()
                .map(|(d, rad, wt, r, j, l, rr)| {
                    json!({"dim": d, "radical": rad, "witt": wt, "r": r, "j": j,
                           "lhs": l.to_string(), "rhs": rr.to_string(), "match": l == rr})
                })
                .collect();
            let doc = json!({"p": p, "cases": cases, "failed": failed});
            serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("dim,radical,witt,r,j,lhs,rhs\n");
            for (d, rad, wt, r, j, l, rr) in &rows {
                let _ = writeln!(s, "{d},{rad},{wt},{r},{j},{l},{rr}");
            }
            s
        }
        Format::Text => format!("{} cases over F_{p}, {} failed\n", rows.len(), failed),
    };
    Ok(Output {
        body,
        summary: Some(format!("{} cases over F_{p}, {} failed\n", rows.len(), failed)),
        status: if failed == 0 { EXIT_OK } else { EXIT_FAIL },
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Output> {
    let l = cfg.lattice()?;
    let p = RunConfig::need(cfg.p, "p")?;
    let n = RunConfig::need(cfg.n, "n")?;
    let j = RunConfig::need(cfg.j, "j")?;
    let b = RunConfig::need(cfg.bound, "bound")?;
    let opts = VerifyOptions {
        corrupt_v: cfg.corrupt_v,
    };
    let rep = verify_eigenvalue_with(&l, p, n, j, b, &cfg.limits, &opts)?;
    let body = match cfg.format {
        Format::Json => rep.to_json() + "\n",
        Format::Csv => {
            let mut s = String::from("t,lhs,rhs,match\n");
            for e in &rep.entries {
                let _ = writeln!(s, "\"{}\",{},{},{}", e.t, rational_string(&e.lhs), rational_string(&e.rhs), e.matches());
            }
            s
        }
        Format::Text => rep.to_text(),
    };
    let status = match rep.verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => {
            if let Some(e) = rep.entries.iter().find(|e| !e.matches()) {
                eprintln!(
                    "first mismatch at T = {}: {} != {}",
                    e.t,
                    rational_string(&e.lhs),
                    rational_string(&e.rhs)
                );
            }
            EXIT_FAIL
        }
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Output {
        body,
        summary: Some(rep.to_text()),
        status,
    })
}
