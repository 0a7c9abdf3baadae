//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use tops::cli::parse;
use tops::hfmodel::{eval_formula, eval_term, EvalConfig, Valuation, Value};
use tops::kernel::{AxiomId, RuleKind};
use tops::oracle::{law_suites, run, OracleConfig, SuiteRow};
use tops::syntax::{Bind2, Formula, Name, Term};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("corpus"))
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "tops"))
        .collect();
    files.sort();
    files
}

fn tops(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tops"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("run tops");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_check() -> Outcome {
    let files = corpus_files();
    ensure(files.len() >= 12, || {
        format!("only {} scripts", files.len())
    })?;
    let names: Vec<String> = files
        .iter()
        .map(|p| {
            p.strip_prefix(root())
                .unwrap()
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    let mut args = vec!["check"];
    args.extend(names.iter().map(String::as_str));
    args.push("--json");

    let start = Instant::now();
    let (code, out) = tops(&args);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit {code}"))?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;

    let json: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let ok: BTreeSet<&str> = json["results"]
        .as_array()
        .ok_or("no results")?
        .iter()
        .filter(|r| r["status"] == "ok")
        .filter_map(|r| r["theorem"].as_str())
        .collect();
    for required in [
        "truth",
        "refl",
        "union-empty",
        "subset-refl",
        "some-self-subset",
    ] {
        ensure(ok.contains(required), || format!("{required} not checked"))?;
    }

    let mut rules = BTreeSet::new();
    let mut axioms = BTreeSet::new();
    let mut theorems = 0;
    for p in &files {
        let script = parse(&std::fs::read_to_string(p).unwrap()).map_err(|e| e.to_string())?;
        for t in script.theorems() {
            theorems += 1;
            rules.extend(t.proof.rules_used());
            axioms.extend(t.proof.axioms_used());
        }
    }
    let missing_rules: Vec<_> = RuleKind::ALL
        .iter()
        .filter(|r| !rules.contains(r))
        .collect();
    let missing_axioms: Vec<_> = AxiomId::ALL
        .iter()
        .filter(|a| !axioms.contains(a))
        .collect();
    ensure(missing_rules.is_empty(), || {
        format!("rules unused: {missing_rules:?}")
    })?;
    ensure(missing_axioms.is_empty(), || {
        format!("schemes unused: {missing_axioms:?}")
    })?;
    Ok(format!(
        "{} scripts, {theorems} theorems, {} rules, {} schemes, {:.0} ms",
        files.len(),
        rules.len(),
        axioms.len(),
        elapsed.as_secs_f64() * 1000.0
    ))
}

fn suite_rows(rows: &[SuiteRow], min_trials: usize, max_skip: f64) -> Outcome {
    let mut worst_skip = 0.0f64;
    for row in rows {
        ensure(row.trials >= min_trials, || {
            format!("{}: {} trials", row.name, row.trials)
        })?;
        ensure(row.fail == 0, || {
            format!(
                "{}: {} failures, first {:?}",
                row.name, row.fail, row.first_failure
            )
        })?;
        ensure(row.skip_rate() < max_skip, || {
            format!("{}: skip rate {:.2}", row.name, row.skip_rate())
        })?;
        worst_skip = worst_skip.max(row.skip_rate());
    }
    let pass: usize = rows.iter().map(|r| r.pass).sum();
    Ok(format!(
        "{} suites, {pass} passing trials, max skip rate {:.2}",
        rows.len(),
        worst_skip
    ))
}

fn oracle_cfg(trials: usize) -> OracleConfig {
    OracleConfig {
        trials,
        rank: 3,
        seed: 7,
        ..OracleConfig::default()
    }
}

fn axiom_soundness() -> Outcome {
    let report = run(&oracle_cfg(100));
    ensure(report.axioms.len() == 23, || {
        format!("{} schemes", report.axioms.len())
    })?;
    suite_rows(&report.axioms, 100, 0.5)
}

fn rule_soundness() -> Outcome {
    let report = run(&oracle_cfg(100));
    ensure(report.rules.len() == 19, || {
        format!("{} rules", report.rules.len())
    })?;
    suite_rows(&report.rules, 100, 1.0)
}

fn substitution_laws() -> Outcome {
    let rows = law_suites(&oracle_cfg(1000));
    ensure(rows.len() == 5, || format!("{} law suites", rows.len()))?;
    suite_rows(&rows, 1000, 1.0)
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn atom(i: u32) -> Value {
    Value::Atom(i)
}

fn set(items: impl IntoIterator<Item = Value>) -> Value {
    Value::set(items)
}

fn rho(pairs: &[(&str, Value)]) -> Valuation {
    pairs
        .iter()
        .map(|(x, val)| (Name::new(x), val.clone()))
        .collect()
}

fn member_rel() -> Bind2<Formula> {
    Bind2::new("x", "y", Formula::member(v("x"), v("y")))
}

fn conventions() -> Outcome {
    let e = Value::empty;
    let cfg = EvalConfig::default();
    let subset = Formula::forall_in("x", v("a"), Formula::member(v("x"), v("b")));
    let formulas: Vec<(&str, Valuation, Formula, bool)> = vec![
        (
            "membership in a non-set is false",
            rho(&[("a", atom(1)), ("b", e())]),
            Formula::member(v("b"), v("a")),
            false,
        ),
        (
            "a non-set is a subset of anything",
            rho(&[("a", atom(1)), ("b", e())]),
            subset.clone(),
            true,
        ),
        (
            "a non-set is a subset of a non-set",
            rho(&[("a", atom(1)), ("b", atom(2))]),
            subset,
            true,
        ),
    ];
    let terms: Vec<(&str, Valuation, Term, Value)> = vec![
        (
            "powerset of a non-set",
            rho(&[("a", atom(0))]),
            Term::powerset(v("a")),
            set([e()]),
        ),
        (
            "uniqel of a two-element set",
            rho(&[("A", set([e(), set([e()])]))]),
            Term::uniqel(v("A")),
            e(),
        ),
        (
            "uniqel of the empty set",
            rho(&[("A", e())]),
            Term::uniqel(v("A")),
            e(),
        ),
        (
            "uniqel of a non-set",
            rho(&[("A", atom(4))]),
            Term::uniqel(v("A")),
            e(),
        ),
        (
            "uniqel of a singleton",
            rho(&[("A", set([atom(4)]))]),
            Term::uniqel(v("A")),
            atom(4),
        ),
        (
            "indexed union drops non-set members",
            rho(&[("A", set([atom(0), set([atom(1)]), set([atom(2)])]))]),
            Term::indexed_union("x", v("A"), v("x")),
            set([atom(1), atom(2)]),
        ),
        (
            "indexed union of non-sets only",
            rho(&[("A", set([atom(0), atom(1)]))]),
            Term::indexed_union("x", v("A"), v("x")),
            e(),
        ),
        (
            "prl off the well-founded part",
            rho(&[("A", set([atom(0)])), ("s", atom(0))]),
            Term::wf_rec(
                v("A"),
                Bind2::new("x", "y", Formula::eq(v("x"), v("y"))),
                Bind2::new("z", "Y", Term::singleton(v("z"))),
                v("s"),
            ),
            e(),
        ),
        (
            "prl outside the carrier",
            rho(&[("A", set([e()])), ("s", set([e()]))]),
            Term::wf_rec(
                v("A"),
                member_rel(),
                Bind2::new("z", "Y", Term::singleton(v("z"))),
                v("s"),
            ),
            e(),
        ),
        (
            "prl on the well-founded part",
            rho(&[("A", set([e(), set([e()])])), ("s", set([e()]))]),
            Term::wf_rec(v("A"), member_rel(), Bind2::new("z", "Y", v("Y")), v("s")),
            set([e()]),
        ),
    ];

    let mut cases = 0;
    for (name, r, phi, want) in &formulas {
        let got = eval_formula(r, phi, &cfg).map_err(|err| format!("{name}: {err}"))?;
        ensure(got == *want, || format!("{name}: got {got}"))?;
        cases += 1;
    }
    for (name, r, t, want) in &terms {
        let got = eval_term(r, t, &cfg).map_err(|err| format!("{name}: {err}"))?;
        ensure(got == *want, || format!("{name}: got {got}, want {want}"))?;
        cases += 1;
    }
    Ok(format!("{cases} cases"))
}

fn fragment_gating() -> Outcome {
    let cases: [(&str, &[&str], &str, &str); 5] = [
        (
            "crates/core/tests/fixtures/gate_choice.tops",
            &[],
            "root.0.1",
            "Choice",
        ),
        (
            "crates/core/tests/fixtures/gate_not.tops",
            &[],
            "root",
            "NegCases",
        ),
        (
            "crates/core/tests/fixtures/gate_pow.tops",
            &[],
            "root.0.0",
            "Powerset",
        ),
        (
            "crates/core/tests/fixtures/gate_wfrec.tops",
            &[],
            "root.0.0",
            "WfRec",
        ),
        (
            "corpus/choice.tops",
            &["--fragment", "intuitionistic"],
            "root",
            "Choice",
        ),
    ];
    for (file, extra, path, feature) in cases {
        let mut args = vec!["check", file, "--json"];
        args.extend_from_slice(extra);
        let (code, out) = tops(&args);
        ensure(code == 1, || format!("{file}: exit {code}"))?;
        let json: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let r = &json["results"][0];
        ensure(r["kind"] == "FragmentViolation", || {
            format!("{file}: kind {}", r["kind"])
        })?;
        ensure(r["path"] == path, || format!("{file}: path {}", r["path"]))?;
        ensure(r["found"] == feature, || {
            format!("{file}: feature {}", r["found"])
        })?;
    }
    Ok(format!("{} gated scripts rejected", cases.len()))
}

fn determinism() -> Outcome {
    let oracle = ["oracle", "--seed", "7", "--json"];
    let (c1, a) = tops(&oracle);
    let (c2, b) = tops(&oracle);
    ensure(c1 == 0 && c2 == 0, || format!("oracle exit {c1}, {c2}"))?;
    ensure(a == b, || "oracle output differs between runs".into())?;

    let files: Vec<String> = corpus_files()
        .iter()
        .map(|p| {
            p.strip_prefix(root())
                .unwrap()
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    let mut args = vec!["check"];
    args.extend(files.iter().map(String::as_str));
    let (c3, x) = tops(&args);
    let (c4, y) = tops(&args);
    ensure(c3 == 0 && c4 == 0, || format!("check exit {c3}, {c4}"))?;
    ensure(x == y, || "check output differs between runs".into())?;
    Ok(format!("oracle {} bytes, check {} bytes", a.len(), x.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("corpus check", corpus_check),
        ("axiom-scheme soundness", axiom_soundness),
        ("rule soundness", rule_soundness),
        ("substitution and alpha laws", substitution_laws),
        ("convention conformance", conventions),
        ("fragment gating", fragment_gating),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
