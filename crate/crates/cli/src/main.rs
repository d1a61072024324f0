use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cyclotangle::associator::{project_pair, solve_pair, verify_equations, AssociatorPair, CycloAlgebras};
use cyclotangle::checks;
use cyclotangle::config::{Config, CACHE_ENV};
use cyclotangle::error::EvalError;
use cyclotangle::invariant::Structure;
use cyclotangle::quantum::{eval_link, polynomiality, QuantumData};
use cyclotangle::quotient::Quotient;
use cyclotangle::ring::{CycloLaurent, Ring};
use cyclotangle::tangle::{parse_tangle_word, TangleWord};
use cyclotangle::weights::{sl2_datum, WeightSystem};

#[derive(Parser)]
#[command(name = "cyclotangle", version, about = "Finite-type invariants of tangles in the solid torus")]
struct Cli {
    /// Print machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve, verify or project associator pairs.
    #[command(subcommand)]
    Assoc(AssocCmd),
    /// Dimensions of the diagram quotient per degree and label sector.
    Dims {
        /// `knot`, `unknot`, or a boundary word such as `*++`.
        #[arg(long)]
        skeleton: String,
        #[arg(long = "N")]
        n: u8,
        #[arg(long)]
        max_degree: usize,
    },
    /// Evaluate G on a tangle word.
    Invariant {
        #[arg(long)]
        tangle: PathBuf,
        #[arg(long = "N")]
        n: u8,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        assoc: AssocSource,
        /// Write the diagram series here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also apply a weight system (only `sl2`).
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value = "symbolic")]
        lambda: String,
    },
    /// U_q(sl2) value of a closed word.
    Quantum {
        #[arg(long)]
        tangle: PathBuf,
        #[arg(long = "N")]
        n: u8,
        /// `symbolic` or an integer weight.
        #[arg(long, default_value = "symbolic")]
        lambda: String,
        /// Report the value under q ↔ q⁻¹, ζ ↔ ζ⁻¹.
        #[arg(long)]
        mirror: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum AssocCmd {
    Solve {
        #[arg(long = "N")]
        n: u8,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: PathBuf,
    },
    Verify {
        #[arg(long)]
        assoc: PathBuf,
    },
    /// Push a pair forward to a divisor N' of N.
    Project {
        #[arg(long)]
        assoc: PathBuf,
        #[arg(long)]
        to: u8,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Clone)]
struct AssocSource {
    /// Associator file; solved (and cached under $CYCLOTANGLE_CACHE) if absent.
    #[arg(long)]
    assoc: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every relation instance reduces to zero.
    Relations {
        #[arg(long, default_values_t = ["*+".to_string(), "*++".to_string(), "knot".to_string()])]
        skeleton: Vec<String>,
        #[arg(long = "N", default_value_t = 2)]
        n: u8,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Seeded random move applications leave G unchanged.
    Moves {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long = "N", default_value_t = 2)]
        n: u8,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[command(flatten)]
        assoc: AssocSource,
    },
    /// Leading terms of realized singular words are their diagrams.
    Universality {
        #[arg(long, default_values_t = ["*+".to_string(), "*++".to_string(), "knot".to_string()])]
        skeleton: Vec<String>,
        #[arg(long = "N", default_value_t = 2)]
        n: u8,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[command(flatten)]
        assoc: AssocSource,
    },
    /// Weight system of G against the quantum value of a closed word.
    Oracle {
        /// Closed word file, or `example_knot` for the bundled knot.
        #[arg(long)]
        link: String,
        #[arg(long = "N", default_value_t = 3)]
        n: u8,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[command(flatten)]
        assoc: AssocSource,
    },
}

const EXAMPLE_KNOT: &str = include_str!("../../core/data/example_knot.bt");

fn fail(msg: impl Into<String>) -> EvalError {
    EvalError::Other(msg.into())
}

fn read(path: &Path) -> Result<String, EvalError> {
    std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), EvalError> {
    std::fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_word(path: &Path) -> Result<TangleWord, EvalError> {
    Ok(parse_tangle_word(&read(path)?)?)
}

/// Associator pair for N solved at least to `degree`.
fn load_pair(src: &AssocSource, n: u8, degree: usize) -> Result<AssociatorPair, EvalError> {
    if let Some(p) = &src.assoc {
        let pair = AssociatorPair::from_text(&read(p)?)?;
        if pair.n != n {
            return Err(fail(format!("{} holds N={}, expected {n}", p.display(), pair.n)));
        }
        return Ok(pair);
    }
    let cached = std::env::var_os(CACHE_ENV).map(|d| PathBuf::from(d).join(format!("assoc-N{n}-d{degree}.txt")));
    if let Some(c) = cached.as_ref().filter(|c| c.exists()) {
        return Ok(AssociatorPair::from_text(&read(c)?)?);
    }
    let pair = solve_pair(n, degree.max(2))?;
    if let Some(c) = cached {
        if let Some(dir) = c.parent() {
            std::fs::create_dir_all(dir).map_err(|e| fail(format!("{}: {e}", dir.display())))?;
        }
        write(&c, &pair.to_text())?;
    }
    Ok(pair)
}

fn structure(src: &AssocSource, n: u8, degree: usize) -> Result<Structure, EvalError> {
    let mut cfg = Config::new(n);
    cfg.degree = degree;
    cfg.validate()?;
    Structure::new(load_pair(src, n, degree)?, degree)
}

/// Substitute an integer weight: q^{λ/2} = ν₄^{2λ}.
fn at_weight(p: &CycloLaurent, lambda: i64) -> CycloLaurent {
    let mut out = CycloLaurent::zero(p.m);
    for ((a, b), c) in &p.terms {
        out = out.add(&CycloLaurent::monomial(c.clone(), a + 2 * lambda * b, 0));
    }
    out
}

struct Output {
    json: bool,
    ok: bool,
}

impl Output {
    fn emit(&self, text: &str, value: Value) {
        if self.json {
            println!("{value}");
        } else {
            print!("{text}");
        }
    }
}

fn run(cli: Cli) -> Result<bool, EvalError> {
    let mut o = Output { json: cli.json, ok: true };
    match cli.cmd {
        Cmd::Assoc(AssocCmd::Solve { n, degree, out }) => {
            let pair = solve_pair(n, degree)?;
            let rep = verify_equations(&pair, &CycloAlgebras::new(n));
            o.ok = rep.ok();
            write(&out, &pair.to_text())?;
            o.emit(
                &format!("solved N={n} to degree {degree}; equations {}\n", if o.ok { "verified" } else { "FAILED" }),
                json!({"N": n, "degree": degree, "verified": o.ok, "out": out.display().to_string()}),
            );
        }
        Cmd::Assoc(AssocCmd::Verify { assoc }) => {
            let pair = AssociatorPair::from_text(&read(&assoc)?)?;
            let rep = verify_equations(&pair, &CycloAlgebras::new(pair.n));
            o.ok = rep.ok();
            let mut text = String::new();
            for (eq, k) in &rep.checked {
                let bad = rep.failures.iter().any(|f| f.equation == *eq && f.degree == *k);
                text.push_str(&format!("{eq} degree {k}: {}\n", if bad { "FAIL" } else { "ok" }));
            }
            for (name, g) in &rep.group_like {
                text.push_str(&format!("{name} group-like: {}\n", g.map_or("ok".to_string(), |k| format!("FAIL at degree {k}"))));
            }
            let failures: Vec<Value> = rep.failures.iter().map(|f| json!({"equation": f.equation, "degree": f.degree})).collect();
            o.emit(&text, json!({"N": pair.n, "cap": pair.cap, "ok": o.ok, "failures": failures}));
        }
        Cmd::Assoc(AssocCmd::Project { assoc, to, out }) => {
            let pair = AssociatorPair::from_text(&read(&assoc)?)?;
            let p = project_pair(&pair, to)?;
            write(&out, &p.to_text())?;
            o.emit(&format!("projected N={} to N={to}\n", pair.n), json!({"from": pair.n, "to": to}));
        }
        Cmd::Dims { skeleton, n, max_degree } => {
            let sk = checks::named_skeleton(&skeleton)?;
            let mut q = Quotient::new(sk, n);
            let mut text = "degree\tsector\tdim\n".to_string();
            let mut rows = Vec::new();
            for k in 0..=max_degree {
                for (sec, d) in q.dims(k)? {
                    let sec: Vec<String> = sec.iter().map(|x| x.to_string()).collect();
                    text.push_str(&format!("{k}\t{}\t{d}\n", sec.join(",")));
                    rows.push(json!({"degree": k, "sector": sec, "dim": d}));
                }
            }
            o.emit(&text, json!({"skeleton": skeleton, "N": n, "dims": rows}));
        }
        Cmd::Invariant { tangle, n, degree, assoc, out, weights, lambda } => {
            let t = load_word(&tangle)?;
            let sd = structure(&assoc, n, degree)?;
            let g = sd.evaluate(&t)?;
            let mut q = Quotient::new(g.skel.clone(), n);
            let coords = q.reduce(&g)?;
            let mut text = q.coords_text(&coords)?;
            if let Some(path) = &out {
                write(path, &g.to_text())?;
            }
            let mut value = json!({"N": n, "degree": degree, "terms": g.terms.len(), "coords": text.lines().collect::<Vec<_>>()});
            if let Some(w) = weights {
                if w != "sl2" {
                    return Err(fail(format!("unknown weight system {w}")));
                }
                if lambda != "symbolic" {
                    return Err(fail("weight systems take --lambda symbolic"));
                }
                let ws = WeightSystem::new(sl2_datum(n)?)?;
                let spec = ws.specialize(&g, degree)?;
                let mut per = Vec::new();
                for (k, m) in spec.iter().enumerate() {
                    let entries: Vec<String> =
                        (0..m.rows).flat_map(|i| (0..m.cols).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).to_text()).collect();
                    text.push_str(&format!("sl2 degree {k}: {}\n", entries.join(" ; ")));
                    per.push(json!(entries));
                }
                value["sl2"] = json!(per);
            }
            o.emit(&text, value);
        }
        Cmd::Quantum { tangle, n, lambda, mirror, out } => {
            let t = load_word(&tangle)?;
            let qd = QuantumData::new(n as usize)?;
            let mut v = eval_link(&t, &qd)?;
            if mirror {
                v = v.mirror();
            }
            if lambda != "symbolic" {
                let l: i64 = lambda.parse().map_err(|_| fail(format!("--lambda takes `symbolic` or an integer, got {lambda}")))?;
                v = at_weight(&v, l);
            }
            let text = v.to_text();
            let poly = polynomiality(&v);
            if let Some(path) = &out {
                write(path, &format!("{text}\n"))?;
            }
            o.emit(&format!("{text}\n"), json!({"N": n, "value": text, "polynomial": poly.is_some(), "quarter_offset": poly}));
        }
        Cmd::Verify(v) => return verify(v, &mut o),
    }
    Ok(o.ok)
}

fn verify(v: VerifyCmd, o: &mut Output) -> Result<bool, EvalError> {
    match v {
        VerifyCmd::Relations { skeleton, n, degree } => {
            let mut text = String::new();
            let mut rows = Vec::new();
            for name in &skeleton {
                let sk = checks::named_skeleton(name)?;
                for k in 0..=degree {
                    let (count, bad) = checks::relations_vanish(&sk, n, k)?;
                    o.ok &= bad == 0;
                    text.push_str(&format!("{name} degree {k}: {count} relations, {bad} nonzero\n"));
                    rows.push(json!({"skeleton": name, "degree": k, "relations": count, "nonzero": bad}));
                }
            }
            o.emit(&text, json!({"suite": "relations", "ok": o.ok, "results": rows}));
        }
        VerifyCmd::Moves { trials, seed, n, degree, assoc } => {
            let sd = structure(&assoc, n, degree)?;
            let res = checks::move_trials(&sd, trials, seed, 12)?;
            let mut text = String::new();
            let mut fails = Vec::new();
            for t in res.iter().filter(|t| t.first_failure.is_some()) {
                o.ok = false;
                text.push_str(&format!("FAIL {} on {} @{} (degree {:?})\n", t.mv, t.word, t.site, t.first_failure));
                fails.push(json!({"move": t.mv, "word": t.word, "site": t.site, "degree": t.first_failure}));
            }
            let summary = checks::trial_summary(&res);
            for (k, (tried, failed)) in &summary {
                text.push_str(&format!("{k}: {tried} tried, {failed} failed\n"));
            }
            let passed = res.len() - fails.len();
            text.push_str(&format!("{passed}/{} exact equalities (seed {seed})\n", res.len()));
            o.emit(&text, json!({"suite": "moves", "seed": seed, "trials": res.len(), "passed": passed, "failures": fails}));
        }
        VerifyCmd::Universality { skeleton, n, degree, assoc } => {
            let mut text = String::new();
            let mut rows = Vec::new();
            let pair = load_pair(&assoc, n, degree)?;
            for k in 0..=degree {
                let sd = Structure::new(pair.clone(), k)?;
                for name in &skeleton {
                    let sk = checks::named_skeleton(name)?;
                    let (count, bad) = checks::universality(&sd, &sk, k)?;
                    o.ok &= bad.is_empty();
                    text.push_str(&format!("{name} degree {k}: {count} diagrams, {} mismatches\n", bad.len()));
                    for b in &bad {
                        text.push_str(&format!("  {b}\n"));
                    }
                    rows.push(json!({"skeleton": name, "degree": k, "diagrams": count, "mismatches": bad}));
                }
            }
            o.emit(&text, json!({"suite": "universality", "ok": o.ok, "results": rows}));
        }
        VerifyCmd::Oracle { link, n, degree, assoc } => {
            let t = if link == "example_knot" { parse_tangle_word(EXAMPLE_KNOT)? } else { load_word(Path::new(&link))? };
            let sd = structure(&assoc, n, degree)?;
            let ws = WeightSystem::new(sl2_datum(n)?)?;
            let qd = QuantumData::new(n as usize)?;
            let bad = checks::oracle(&sd, &ws, &qd, &t)?;
            o.ok = bad.is_empty();
            let text = if o.ok {
                format!("degrees 0..={degree}: exact match\n")
            } else {
                format!("mismatch at degrees {bad:?}\n")
            };
            o.emit(&text, json!({"suite": "oracle", "degree": degree, "ok": o.ok, "mismatched_degrees": bad}));
        }
    }
    Ok(o.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
