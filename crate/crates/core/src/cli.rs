//! Command-line front end. [`run`] returns the exit code and both output
//! streams so the binary and the tests share one code path.

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{self, CORPUS_SEED};
use crate::dsl;
use crate::engine::{
    explain, infer_with, parse_axioms, Axiom, EngineError, InferOptions, Inference, Quantity,
    RuleId,
};
use crate::expr::AlgebraExpr;
use crate::lattice::{ExtNat, RankInterval};
use crate::report::Report;
use crate::spaces::{
    csr_commutative_torus, gsr_commutative_sphere, gsr_commutative_torus, SpaceExpr,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "stablerank",
    version,
    about = "Stable rank bounds for C*-algebra expressions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Bound tsr, gsr and csr of one expression.
    Rank {
        expr: String,
        #[arg(long)]
        json: bool,
        /// Include the steps behind each root bound.
        #[arg(long)]
        trace: bool,
        /// JSON list of {"node", "quantity", "lo"/"hi" or "value"} assertions.
        #[arg(long, value_name = "PATH")]
        axioms_file: Option<PathBuf>,
    },
    /// Rank table for spheres or tori, d = 1..=max_d.
    Table {
        kind: TableKind,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=512))]
        max_d: u32,
    },
    /// Run the worked examples and the random corpus audits.
    Check {
        #[arg(long, default_value_t = 200)]
        corpus: usize,
        #[arg(long, default_value_t = CORPUS_SEED)]
        seed: u64,
        /// Extra assertions merged into every inference.
        #[arg(long, value_name = "PATH")]
        axioms_file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Spheres,
    Tori,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Outcome {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_PARSE, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match cli.cmd {
        Cmd::Rank {
            expr,
            json,
            trace,
            axioms_file,
        } => cmd_rank(&expr, json, trace, axioms_file.as_deref()),
        Cmd::Table { kind, max_d } => cmd_table(kind, max_d),
        Cmd::Check {
            corpus,
            seed,
            axioms_file,
        } => cmd_check(corpus, seed, axioms_file.as_deref()),
    }
}

fn load_axioms(path: Option<&Path>) -> Result<Vec<Axiom>, String> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_axioms(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn engine_exit(e: &EngineError) -> i32 {
    match e {
        EngineError::Inconsistent(_) => EXIT_INCONSISTENT,
        _ => EXIT_FAILURE,
    }
}

pub fn cmd_rank(src: &str, json: bool, trace: bool, axioms_file: Option<&Path>) -> Outcome {
    let expr = match dsl::parse(src) {
        Ok(e) => e,
        Err(e) => return Outcome::fail(EXIT_PARSE, format!("error: {e}\n")),
    };
    let axioms = match load_axioms(axioms_file) {
        Ok(a) => a,
        Err(e) => return Outcome::fail(EXIT_FAILURE, format!("error: {e}\n")),
    };
    let inf = match infer_with(&expr, &axioms, &InferOptions::default()) {
        Ok(inf) => inf,
        Err(e) => return Outcome::fail(engine_exit(&e), format!("error: {e}\n")),
    };
    let report = Report::new(dsl::format(&expr), &inf, trace);
    let mut out = if json {
        report.to_json()
    } else {
        report.to_text()
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Outcome::ok(out)
}

fn cell(iv: RankInterval) -> String {
    if iv.is_exact() {
        iv.lo().to_string()
    } else {
        iv.to_string()
    }
}

/// `(d, gsr, csr)` rows computed by the engine.
pub fn table_rows(
    kind: TableKind,
    max_d: u32,
) -> Result<Vec<(u32, RankInterval, RankInterval)>, EngineError> {
    (1..=max_d)
        .map(|d| {
            let x = match kind {
                TableKind::Spheres => SpaceExpr::Sphere(d),
                TableKind::Tori => SpaceExpr::Torus(d),
            };
            let inf = infer_with(&AlgebraExpr::commutative(x), &[], &InferOptions::default())?;
            let s = inf.root_state();
            Ok((d, s.gsr, s.csr))
        })
        .collect()
}

pub fn cmd_table(kind: TableKind, max_d: u32) -> Outcome {
    match table_rows(kind, max_d) {
        Ok(rows) => {
            let mut out = String::from("d, gsr, csr\n");
            for (d, g, c) in rows {
                let _ = writeln!(out, "{d}, {}, {}", cell(g), cell(c));
            }
            Outcome::ok(out)
        }
        Err(e) => Outcome::fail(engine_exit(&e), format!("error: {e}\n")),
    }
}

fn run_one(src: &str, axioms: &[Axiom], seed: Option<u64>) -> Result<Inference, String> {
    let expr = dsl::parse(src).map_err(|e| format!("{src}: {e}"))?;
    run_expr(&expr, axioms, seed)
}

fn run_expr(expr: &AlgebraExpr, axioms: &[Axiom], seed: Option<u64>) -> Result<Inference, String> {
    let opts = InferOptions {
        shuffle_seed: seed,
        ..InferOptions::default()
    };
    infer_with(expr, axioms, &opts).map_err(|e| format!("{}: {e}", dsl::format(expr)))
}

fn check_examples(axioms: &[Axiom]) -> Vec<String> {
    let mut fails = Vec::new();
    for ex in corpus::worked_examples() {
        let iv = match run_one(ex.src, axioms, None) {
            Ok(inf) => inf.root_state().interval(&ex.quantity),
            Err(e) => {
                fails.push(e);
                continue;
            }
        };
        let lo_ok = ex.lo.is_none_or(|lo| iv.lo() == ExtNat::fin(lo));
        let hi_ok = ex.hi.is_none_or(|hi| iv.hi() == ExtNat::fin(hi));
        if !(lo_ok && hi_ok) {
            fails.push(format!(
                "{} {}: got {iv}, expected lo {:?} hi {:?}",
                ex.src, ex.quantity, ex.lo, ex.hi
            ));
        }
    }
    match run_one("M(3, Cx(T(6)))", axioms, None) {
        Ok(inf) => {
            let rules: Vec<RuleId> = explain(inf.derivation(), inf.root(), &Quantity::Csr)
                .map(|c| c.iter().filter_map(|s| s.source.rule()).collect())
                .unwrap_or_default();
            if rules.first() != Some(&RuleId::R23) || rules.last() != Some(&RuleId::R3) {
                fails.push(format!("M(3, Cx(T(6))) csr chain is {rules:?}"));
            }
        }
        Err(e) => fails.push(e),
    }
    fails
}

fn check_tables() -> Vec<String> {
    let mut fails = Vec::new();
    let expect = [
        (TableKind::Spheres, 12, None::<fn(u64) -> ExtNat>),
        (
            TableKind::Tori,
            10,
            Some(csr_commutative_torus as fn(u64) -> ExtNat),
        ),
    ];
    for (kind, max_d, csr) in expect {
        let gsr = match kind {
            TableKind::Spheres => gsr_commutative_sphere,
            TableKind::Tori => gsr_commutative_torus,
        };
        match table_rows(kind, max_d) {
            Ok(rows) => {
                for (d, g, c) in rows {
                    let d64 = u64::from(d);
                    if g != RankInterval::exact(gsr(d64)) {
                        fails.push(format!("{kind:?} d = {d}: gsr {g}"));
                    }
                    if let Some(f) = csr {
                        if c != RankInterval::exact(f(d64)) {
                            fails.push(format!("{kind:?} d = {d}: csr {c}"));
                        }
                    }
                }
            }
            Err(e) => fails.push(e.to_string()),
        }
    }
    fails
}

fn check_corpus(exprs: &[AlgebraExpr], axioms: &[Axiom]) -> (Vec<String>, Vec<String>) {
    let mut sound = Vec::new();
    let mut confluent = Vec::new();
    for (i, e) in exprs.iter().enumerate() {
        let base = match run_expr(e, axioms, None) {
            Ok(inf) => inf,
            Err(err) => {
                sound.push(err);
                continue;
            }
        };
        sound.extend(corpus::audit(&base));
        match run_expr(e, axioms, Some(i as u64)) {
            Ok(other) if other.states() == base.states() => {}
            Ok(_) => confluent.push(format!("{}: shuffled run differs", dsl::format(e))),
            Err(err) => confluent.push(err),
        }
    }
    (sound, confluent)
}

fn check_round_trip(exprs: &[AlgebraExpr], seed: u64) -> Vec<String> {
    let mut fails = Vec::new();
    let texts: Vec<String> = exprs.iter().map(dsl::format).collect();
    for (e, t) in exprs.iter().zip(&texts) {
        match dsl::parse(t) {
            Ok(back) if &back == e => {}
            Ok(_) => fails.push(format!("{t}: reparses differently")),
            Err(err) => fails.push(format!("{t}: {err}")),
        }
    }
    for m in corpus::mutate(seed, &texts) {
        if let Err(err) = dsl::parse(&m) {
            if err.offset > m.len() {
                fails.push(format!("{m:?}: offset {} past end", err.offset));
            }
        }
    }
    fails
}

pub fn cmd_check(corpus_size: usize, seed: u64, axioms_file: Option<&Path>) -> Outcome {
    let axioms = match load_axioms(axioms_file) {
        Ok(a) => a,
        Err(e) => return Outcome::fail(EXIT_FAILURE, format!("error: {e}\n")),
    };
    let exprs = corpus::generate(seed, corpus_size);
    let (sound, confluent) = check_corpus(&exprs, &axioms);
    let groups = [
        ("worked examples", check_examples(&axioms)),
        ("rank tables", check_tables()),
        ("corpus soundness", sound),
        ("confluence", confluent),
        ("round trip", check_round_trip(&exprs, seed)),
    ];
    let mut out = Outcome::default();
    for (name, fails) in &groups {
        if fails.is_empty() {
            let _ = writeln!(out.stdout, "ok   {name}");
        } else {
            let _ = writeln!(out.stdout, "FAIL {name} ({} failures)", fails.len());
            for f in fails {
                let _ = writeln!(out.stderr, "{name}: {f}");
            }
            out.code = EXIT_FAILURE;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Outcome {
        run(std::iter::once("stablerank").chain(args.iter().copied()))
    }

    #[test]
    fn rank_text() {
        let o = cli(&["rank", "Cx(S(5))"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("gsr = 4"), "{}", o.stdout);
        assert!(o.stderr.is_empty());
    }

    #[test]
    fn rank_parse_error() {
        let o = cli(&["rank", "M(2,"]);
        assert_eq!(o.code, EXIT_PARSE);
        assert!(o.stdout.is_empty());
        assert!(o.stderr.contains("column 5"), "{}", o.stderr);
    }

    #[test]
    fn rank_json() {
        let o = cli(&["rank", "Cx(T(6))", "--json"]);
        assert_eq!(o.code, 0);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["csr"]["lo"], 4);
        assert_eq!(v["csr"]["hi"], 4);
        assert_eq!(v["trace"].as_array().map(Vec::len), Some(0));
    }

    #[test]
    fn rank_inconsistent_axiom() {
        let dir = std::env::temp_dir().join(format!("stablerank-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.json");
        std::fs::write(
            &path,
            r#"[{"node": "$", "quantity": "csr", "lo": 5, "hi": 5}]"#,
        )
        .unwrap();
        let o = cli(&["rank", "C", "--axioms-file", path.to_str().unwrap()]);
        assert_eq!(o.code, EXIT_INCONSISTENT, "{}", o.stderr);
        let o = cli(&[
            "check",
            "--corpus",
            "5",
            "--axioms-file",
            path.to_str().unwrap(),
        ]);
        assert_ne!(o.code, 0);
        let o = cli(&[
            "rank",
            "C",
            "--axioms-file",
            dir.join("missing.json").to_str().unwrap(),
        ]);
        assert_eq!(o.code, EXIT_FAILURE);
    }

    #[test]
    fn tables() {
        let o = cli(&["table", "tori", "--max-d", "5"]);
        assert_eq!(o.stdout.lines().last(), Some("5, 4, 4"));
        let o = cli(&["table", "spheres", "--max-d", "8"]);
        assert!(
            o.stdout.lines().any(|l| l.starts_with("8, 4, ")),
            "{}",
            o.stdout
        );
        let o = cli(&["table", "spheres", "--max-d", "4"]);
        assert!(o
            .stdout
            .lines()
            .skip(1)
            .all(|l| l.split(", ").nth(1) == Some("1")));
        assert_ne!(cli(&["table", "spheres", "--max-d", "0"]).code, 0);
    }

    #[test]
    fn check_passes() {
        let o = cli(&["check", "--corpus", "40"]);
        assert_eq!(o.code, 0, "{}\n{}", o.stdout, o.stderr);
    }
}
