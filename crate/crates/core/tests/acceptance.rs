//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use stablerank::cli;
use stablerank::corpus::{self, CORPUS_SEED, CORPUS_SIZE};
use stablerank::engine::{
    explain, infer, infer_with, InferOptions, Inference, Quantity, RuleId, Source,
};
use stablerank::nccw::{csr_upper_nccw, NccwComplex};
use stablerank::spaces::{csr_commutative_torus, gsr_commutative_sphere, gsr_commutative_torus};
use stablerank::{format, parse, AlgebraExpr, ExtNat, RankInterval, Report};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn table(kind: &str, max_d: u32) -> Result<(Vec<Vec<String>>, Duration), String> {
    let start = Instant::now();
    let out = cli::run(["stablerank", "table", kind, "--max-d", &max_d.to_string()]);
    let took = start.elapsed();
    if out.code != 0 {
        return Err(format!("table {kind} exited {}: {}", out.code, out.stderr));
    }
    let rows = out
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split(", ").map(str::to_string).collect())
        .collect();
    Ok((rows, took))
}

fn sphere_table() -> Outcome {
    let (rows, took) = table("spheres", 12)?;
    if rows.len() != 12 {
        return Err(format!("{} rows", rows.len()));
    }
    for (d, row) in (1u64..).zip(&rows) {
        let want = gsr_commutative_sphere(d).to_string();
        if row[0] != d.to_string() || row[1] != want {
            return Err(format!("d = {d}: row {row:?}, gsr should be {want}"));
        }
    }
    let spot = [(4, "1"), (5, "4"), (8, "4"), (12, "6")];
    for (d, g) in spot {
        if rows[d - 1][1] != g {
            return Err(format!("d = {d}: gsr {}", rows[d - 1][1]));
        }
    }
    if took >= Duration::from_secs(1) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("d = 1..12 exact, {took:.0?}"))
}

fn torus_table() -> Outcome {
    let (rows, took) = table("tori", 10)?;
    for (d, row) in (1u64..).zip(&rows) {
        let g = gsr_commutative_torus(d).to_string();
        let c = csr_commutative_torus(d).to_string();
        if row[1] != g || row[2] != c {
            return Err(format!("d = {d}: row {row:?}, want gsr {g} csr {c}"));
        }
    }
    if rows.len() != 10 {
        return Err(format!("{} rows", rows.len()));
    }
    if took >= Duration::from_secs(1) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("d = 1..10 exact, {took:.0?}"))
}

fn pullback_spheres() -> Outcome {
    for d in 5..=10u64 {
        let src = format!("pullback(Cx(D({d})), Cx(D({d})); Cx(S({})))", d - 1);
        let inf =
            infer(&parse(&src).map_err(|e| e.to_string())?, &[]).map_err(|e| e.to_string())?;
        let hi = inf.root_state().gsr.hi();
        if hi != gsr_commutative_sphere(d) {
            return Err(format!("d = {d}: gsr.hi = {hi}"));
        }
        let chain =
            explain(inf.derivation(), inf.root(), &Quantity::Gsr).map_err(|e| e.to_string())?;
        if !chain.iter().any(|s| s.source == Source::Rule(RuleId::R11)) {
            return Err(format!("d = {d}: gsr bound does not come from R11"));
        }
    }
    Ok("d = 5..10 gsr.hi exact via R11".into())
}

fn nccw_vs_nistor() -> Outcome {
    for n in 1..=10u32 {
        let c = NccwComplex::standard(n);
        let want = ExtNat::fin(u64::from(n).div_ceil(2) + 1);
        let got = csr_upper_nccw(&c);
        if got != want {
            return Err(format!("n = {n}: csr_upper_nccw = {got}, want {want}"));
        }
        let inf = infer(&AlgebraExpr::Nccw(c), &[]).map_err(|e| e.to_string())?;
        if inf.root_state().csr.hi() > want {
            return Err(format!("n = {n}: engine csr {}", inf.root_state().csr));
        }
    }
    Ok("n = 1..10 equals ⌈n/2⌉ + 1".into())
}

fn class_f() -> Outcome {
    let two = RankInterval::exact(ExtNat::TWO);
    let one = RankInterval::exact(ExtNat::ONE);
    for n in 0..=8 {
        for (atom, gsr, csr) in [("kirchberg_ibn", two, two), ("rot", one, two)] {
            let src = format!("Cx(cw({n}))*{atom}");
            let inf =
                infer(&parse(&src).map_err(|e| e.to_string())?, &[]).map_err(|e| e.to_string())?;
            let s = inf.root_state();
            if s.gsr != gsr || s.csr != csr {
                return Err(format!("{src}: gsr {} csr {}", s.gsr, s.csr));
            }
        }
    }
    Ok("n = 0..8 for kirchberg_ibn and rot".into())
}

struct Corpus {
    exprs: Vec<AlgebraExpr>,
    runs: Vec<Result<Inference, String>>,
}

fn corpus() -> Corpus {
    let exprs = corpus::generate(CORPUS_SEED, CORPUS_SIZE);
    let runs = exprs
        .iter()
        .map(|e| infer(e, &[]).map_err(|err| format!("{}: {err}", format(e))))
        .collect();
    Corpus { exprs, runs }
}

fn soundness(c: &Corpus) -> Outcome {
    let mut bad = Vec::new();
    let mut known = 0;
    for run in &c.runs {
        match run {
            Ok(inf) => {
                bad.extend(corpus::audit(inf));
                known += inf
                    .nodes()
                    .iter()
                    .flat_map(|n| {
                        [Quantity::Tsr, Quantity::Gsr, Quantity::Csr]
                            .into_iter()
                            .filter(move |q| corpus::known_value(&n.expr, q).is_some())
                    })
                    .count();
            }
            Err(e) => bad.push(e.clone()),
        }
    }
    match bad.first() {
        None => Ok(format!(
            "{} expressions, {known} known values contained",
            c.exprs.len()
        )),
        Some(first) => Err(format!("{} violations, first: {first}", bad.len())),
    }
}

fn confluence(c: &Corpus) -> Outcome {
    let mut diffs = 0;
    let mut first = None;
    for (i, e) in c.exprs.iter().enumerate() {
        let report = |seed: u64| {
            let opts = InferOptions {
                shuffle_seed: Some(seed),
                ..InferOptions::default()
            };
            infer_with(e, &[], &opts).map(|inf| {
                let json = Report::new(format(e), &inf, false).to_json();
                (json, inf.states().to_vec())
            })
        };
        let i = i as u64;
        let (a, b) = (report(2 * i + 1), report(2 * i + 2));
        let same = match (&a, &b) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        };
        if !same {
            diffs += 1;
            first.get_or_insert_with(|| format(e));
        }
    }
    match first {
        None => Ok(format!("{} expressions, 0 diffs", c.exprs.len())),
        Some(f) => Err(format!("{diffs} diffs, first: {f}")),
    }
}

fn round_trip(c: &Corpus) -> Outcome {
    let texts: Vec<String> = c.exprs.iter().map(format).collect();
    for (e, t) in c.exprs.iter().zip(&texts) {
        match parse(t) {
            Ok(back) if &back == e && format(&back) == *t => {}
            Ok(_) => return Err(format!("{t}: not a fixed point")),
            Err(err) => return Err(format!("{t}: {err}")),
        }
    }
    let mut fuzz: Vec<String> = Vec::new();
    for round in 0..5 {
        fuzz.extend(corpus::mutate(CORPUS_SEED + round, &texts));
    }
    fuzz.extend(
        [
            "",
            "(",
            "M(2,",
            "Cx(S(5)",
            "C (+)",
            "nccw(F(1); 0: F(1))",
            "\u{0}",
        ]
        .map(String::from),
    );
    let prev = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut errors = 0;
    let mut failure = None;
    for m in &fuzz {
        match panic::catch_unwind(|| parse(m)) {
            Ok(Ok(_)) => {}
            Ok(Err(err)) => {
                errors += 1;
                if err.offset > m.len() || !m.is_char_boundary(err.offset) {
                    failure.get_or_insert(format!("{m:?}: offset {} not in input", err.offset));
                }
            }
            Err(_) => {
                failure.get_or_insert(format!("{m:?}: parser panicked"));
            }
        }
    }
    panic::set_hook(prev);
    match failure {
        None => Ok(format!(
            "{} fixed points, {} fuzz inputs, {errors} located errors, 0 crashes",
            texts.len(),
            fuzz.len()
        )),
        Some(f) => Err(f),
    }
}

fn trace_completeness(c: &Corpus) -> Outcome {
    let mut checked = 0;
    for inf in c.runs.iter().flatten() {
        let steps = &inf.derivation().steps;
        for (i, state) in inf.states().iter().enumerate() {
            for q in [Quantity::Tsr, Quantity::Gsr, Quantity::Csr] {
                if state.interval(&q).is_unknown() {
                    continue;
                }
                checked += 1;
                let cited = steps.iter().any(|s| {
                    s.node.0 == i
                        && s.quantity == q
                        && s.source.rule().is_some_and(|r| {
                            let head = format!("{r} {}: ", r.title());
                            s.citation.starts_with(&head) && s.citation.len() > head.len()
                        })
                });
                if !cited {
                    return Err(format!("{} {q}: no cited step", inf.nodes()[i].label));
                }
            }
        }
    }
    let rules: BTreeSet<RuleId> = c
        .runs
        .iter()
        .flatten()
        .flat_map(|inf| {
            inf.derivation()
                .steps
                .iter()
                .filter_map(|s| s.source.rule())
        })
        .collect();
    Ok(format!(
        "{checked} bounds cited, {} distinct rules fired",
        rules.len()
    ))
}

fn main() -> ExitCode {
    let c = corpus();
    let criteria: [Criterion; 9] = [
        ("1 sphere table", Box::new(sphere_table)),
        ("2 torus table", Box::new(torus_table)),
        ("3 pullback self-consistency", Box::new(pullback_spheres)),
        ("4 NCCW vs Nistor", Box::new(nccw_vs_nistor)),
        ("5 class F rigidity", Box::new(class_f)),
        ("6 soundness corpus", Box::new(|| soundness(&c))),
        ("7 confluence", Box::new(|| confluence(&c))),
        ("8 DSL round trip", Box::new(|| round_trip(&c))),
        ("9 trace completeness", Box::new(|| trace_completeness(&c))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
