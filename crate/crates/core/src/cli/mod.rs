//! Batch front end: `check`, `expand`, `eval` and `oracle`.
//!
//! Exit codes: 0 when everything passes, 1 on a verification or evaluation
//! failure, 2 on a parse or usage error. Output is deterministic: files are
//! processed in sorted order and theorems in file order.

pub mod parse;
pub mod render;
pub mod sexpr;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::context::LogicalContext;
use crate::hfmodel::{eval_formula, eval_term, EvalConfig, EvalError, Valuation};
use crate::kernel::{CheckError, Checker, ErrorKind, Fragment, NodePath};
use crate::oracle::{self, Gen, OracleConfig};
use crate::syntax::Expr;

pub use parse::{parse, EvalBlock, Expected, Item, ProofScript, Theorem};
pub use sexpr::{ParseError, Pos};

#[derive(Debug, Parser)]
#[command(
    name = "tops",
    version,
    about = "Check, expand and evaluate TOPS proof scripts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify every theorem block.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Overrides any `(fragment ...)` directive in the files.
        #[arg(long, value_parser = fragment_arg)]
        fragment: Option<Fragment>,
        #[arg(long)]
        json: bool,
        /// Print the sequent established at every node.
        #[arg(long)]
        trace: bool,
    },
    /// Print the file with every abbreviation expanded.
    Expand { file: PathBuf },
    /// Run eval blocks.
    Eval {
        file: PathBuf,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        max_pow: Option<usize>,
        /// Seed for values of variables the block leaves unbound.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Randomized soundness suites for every axiom scheme and rule.
    Oracle {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn fragment_arg(s: &str) -> Result<Fragment, String> {
    Fragment::from_keyword(s).ok_or_else(|| {
        "expected one of full, no-choice, intuitionistic, w-arith, arith".to_string()
    })
}

const PASS: i32 = 0;
const FAIL: i32 = 1;
const USAGE: i32 = 2;

struct Style {
    color: bool,
}

impl Style {
    fn from_env() -> Self {
        Style {
            color: std::env::var("TOPS_COLOR").is_ok_and(|v| v == "1"),
        }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn ok(&self) -> String {
        self.paint("32", "ok")
    }

    fn failed(&self) -> String {
        self.paint("31", "FAILED")
    }
}

#[derive(Debug, Serialize)]
struct TraceLine {
    path: String,
    sequent: String,
}

#[derive(Debug, Serialize)]
struct Diagnostic {
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem: Option<String>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    found: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    col: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fragment: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    trace: Vec<TraceLine>,
}

impl Diagnostic {
    fn new(file: &str, status: &'static str) -> Self {
        Diagnostic {
            file: file.to_string(),
            theorem: None,
            status,
            path: None,
            kind: None,
            expected: None,
            found: None,
            message: None,
            line: None,
            col: None,
            fragment: None,
            trace: Vec::new(),
        }
    }

    fn parse_error(file: &str, e: &ParseError) -> Self {
        Diagnostic {
            kind: Some("ParseError".into()),
            line: Some(e.line),
            col: Some(e.col),
            expected: Some(e.expected.clone()),
            message: Some(e.to_string()),
            ..Diagnostic::new(file, "error")
        }
    }

    fn io_error(file: &str, e: &std::io::Error) -> Self {
        Diagnostic {
            kind: Some("IoError".into()),
            message: Some(e.to_string()),
            ..Diagnostic::new(file, "error")
        }
    }

    fn text(&self, style: &Style) -> String {
        let mut s = self.file.clone();
        if let (Some(l), Some(c)) = (self.line, self.col) {
            s += &format!(":{l}:{c}");
        }
        if let Some(t) = &self.theorem {
            s += &format!(": {t}");
        }
        if self.status == "ok" {
            s += &format!(" {}", style.ok());
        } else {
            s += &format!(" {}", style.failed());
            if let Some(p) = &self.path {
                s += &format!(" at {p}");
            }
            if let Some(k) = &self.kind {
                s += &format!(": {k}");
            }
            if let Some(m) = &self.message {
                s += &format!(": {m}");
            }
            if let (Some(e), Some(f)) = (&self.expected, &self.found) {
                s += &format!("\n  expected: {e}\n  found:    {f}");
            }
        }
        for t in &self.trace {
            s += &format!("\n  {}: {}", t.path, t.sequent);
        }
        s
    }
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    schema: u32,
    command: &'a str,
    results: Vec<Diagnostic>,
}

fn read(path: &PathBuf) -> Result<String, std::io::Error> {
    std::fs::read_to_string(path)
}

/// Checks one theorem under `fragment`.
pub fn check_theorem(
    thm: &Theorem,
    fragment: Fragment,
    trace: bool,
) -> Result<crate::kernel::Checked, CheckError> {
    let at_root = |kind| CheckError {
        path: NodePath::root(),
        kind,
    };
    let ctx = LogicalContext::new(thm.base.clone(), thm.entries.clone())
        .map_err(|e| at_root(ErrorKind::IllFormed(format!("context: {e}"))))?;
    let mut proof = thm.proof.clone();
    match &proof.stated {
        Some(stated) if !stated.alpha_eq(&thm.goal) => {
            return Err(at_root(ErrorKind::ConclusionMismatch {
                expected: render::formula(&thm.goal),
                found: render::formula(stated),
            }));
        }
        _ => proof.stated = Some(thm.goal.clone()),
    }
    Checker::new(fragment).trace(trace).check(&ctx, &proof)
}

fn check_cmd(
    files: &[PathBuf],
    fragment: Option<Fragment>,
    json: bool,
    trace: bool,
    out: &mut dyn Write,
) -> std::io::Result<i32> {
    let style = Style::from_env();
    let mut files = files.to_vec();
    files.sort();
    let mut code = PASS;
    let mut results = Vec::new();
    let (mut total, mut failed) = (0, 0);
    for path in &files {
        let file = path.display().to_string();
        let script = match read(path) {
            Ok(text) => match parse(&text) {
                Ok(s) => s,
                Err(e) => {
                    results.push(Diagnostic::parse_error(&file, &e));
                    code = USAGE;
                    continue;
                }
            },
            Err(e) => {
                results.push(Diagnostic::io_error(&file, &e));
                code = USAGE;
                continue;
            }
        };
        let frag = fragment.or(script.fragment()).unwrap_or(Fragment::Full);
        for thm in script.theorems() {
            total += 1;
            let mut d = Diagnostic {
                theorem: Some(thm.name.clone()),
                fragment: Some(frag.to_string()),
                ..Diagnostic::new(&file, "ok")
            };
            match check_theorem(thm, frag, trace) {
                Ok(checked) => {
                    d.trace = checked
                        .trace
                        .iter()
                        .map(|(p, s)| TraceLine {
                            path: p.to_string(),
                            sequent: render::sequent(s),
                        })
                        .collect();
                }
                Err(e) => {
                    failed += 1;
                    code = code.max(FAIL);
                    d.status = "error";
                    d.path = Some(e.path.to_string());
                    d.kind = Some(e.kind.name().to_string());
                    d.message = Some(e.kind.to_string());
                    if let Some((exp, found)) = e.kind.expected_found() {
                        d.expected = Some(exp);
                        d.found = Some(found);
                    }
                }
            }
            results.push(d);
        }
    }
    if json {
        let report = Report {
            schema: 1,
            command: "check",
            results,
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        )?;
    } else {
        for d in &results {
            writeln!(out, "{}", d.text(&style))?;
        }
        writeln!(
            out,
            "checked {total} theorem(s): {} ok, {failed} failed",
            total - failed
        )?;
    }
    Ok(code)
}

fn expand_cmd(file: &PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let name = file.display().to_string();
    let text = match read(file) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "{name}: {e}")?;
            return Ok(USAGE);
        }
    };
    match parse(&text) {
        Ok(script) => {
            write!(out, "{}", render::script(&script))?;
            Ok(PASS)
        }
        Err(e) => {
            writeln!(err, "{name}:{e}")?;
            Ok(USAGE)
        }
    }
}

#[derive(Debug, Serialize)]
struct EvalResult {
    line: usize,
    col: usize,
    expr: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    sampled: Vec<String>,
}

fn describe_expected(e: &Expected) -> String {
    match e {
        Expected::Value(v) => v.to_string(),
        Expected::Bool(b) => b.to_string(),
        Expected::Error(k) => format!("(error {k})"),
    }
}

/// Evaluates one block; unbound free variables get values drawn from `gen`.
fn eval_block(block: &EvalBlock, cfg: &EvalConfig, gen: &mut Gen) -> EvalResult {
    let mut rho: Valuation = block.bindings.iter().cloned().collect();
    let mut sampled = Vec::new();
    for x in block.expr.free_vars() {
        if let std::collections::btree_map::Entry::Vacant(slot) = rho.entry(x) {
            let v = gen.value();
            sampled.push(format!("{}={v}", slot.key()));
            slot.insert(v);
        }
    }
    let got: Result<String, EvalError> = match &block.expr {
        Expr::Term(t) => eval_term(&rho, t, cfg).map(|v| v.to_string()),
        Expr::Formula(f) => eval_formula(&rho, f, cfg).map(|b| b.to_string()),
    };
    let expected = block.expect.as_ref().map(describe_expected);
    let status = match (&got, &block.expect) {
        (Ok(v), Some(Expected::Value(e))) => v == &e.to_string(),
        (Ok(v), Some(Expected::Bool(b))) => v == &b.to_string(),
        (Ok(_), None) => true,
        (Err(e), Some(Expected::Error(k))) => e.name() == k,
        (Ok(_), Some(Expected::Error(_))) | (Err(_), _) => false,
    };
    EvalResult {
        line: block.pos.line,
        col: block.pos.col,
        expr: match &block.expr {
            Expr::Term(t) => render::term(t),
            Expr::Formula(f) => render::formula(f),
        },
        status: if status { "ok" } else { "error" },
        value: got.as_ref().ok().cloned(),
        error: got.err().map(|e| format!("{}: {e}", e.name())),
        expected,
        sampled,
    }
}

fn eval_cmd(
    file: &PathBuf,
    max_iter: Option<usize>,
    max_pow: Option<usize>,
    seed: u64,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let style = Style::from_env();
    let name = file.display().to_string();
    let script = match read(file).map_err(|e| e.to_string()).and_then(|t| {
        parse(&t).map_err(|e| format!("{}:{}: expected {}", e.line, e.col, e.expected))
    }) {
        Ok(s) => s,
        Err(e) => {
            writeln!(err, "{name}: {e}")?;
            return Ok(USAGE);
        }
    };
    let mut cfg = EvalConfig::default();
    let mut gen = Gen::new(seed, 2);
    let mut results = Vec::new();
    for item in &script.items {
        match item {
            Item::Config {
                max_iter: i,
                max_pow: p,
            } => {
                cfg.max_iter = i.unwrap_or(cfg.max_iter);
                cfg.max_powerset_card = p.unwrap_or(cfg.max_powerset_card);
            }
            Item::Eval(block) => {
                let mut c = cfg;
                c.max_iter = max_iter.unwrap_or(c.max_iter);
                c.max_powerset_card = max_pow.unwrap_or(c.max_powerset_card);
                results.push(eval_block(block, &c, &mut gen));
            }
            _ => {}
        }
    }
    let failed = results.iter().filter(|r| r.status != "ok").count();
    if json {
        #[derive(Serialize)]
        struct EvalReport<'a> {
            schema: u32,
            command: &'a str,
            file: &'a str,
            results: &'a [EvalResult],
        }
        let report = EvalReport {
            schema: 1,
            command: "eval",
            file: &name,
            results: &results,
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        )?;
    } else {
        for r in &results {
            let shown = r
                .value
                .clone()
                .or_else(|| r.error.clone())
                .unwrap_or_default();
            let verdict = if r.status == "ok" {
                style.ok()
            } else {
                style.failed()
            };
            write!(
                out,
                "{name}:{}:{}: {} = {shown} {verdict}",
                r.line, r.col, r.expr
            )?;
            if r.status != "ok" {
                if let Some(e) = &r.expected {
                    write!(out, " (expected {e})")?;
                }
            }
            if !r.sampled.is_empty() {
                write!(out, " [{}]", r.sampled.join(" "))?;
            }
            writeln!(out)?;
        }
        writeln!(out, "evaluated {} block(s): {failed} failed", results.len())?;
    }
    Ok(if failed > 0 { FAIL } else { PASS })
}

fn oracle_cmd(cfg: &OracleConfig, json: bool, out: &mut dyn Write) -> std::io::Result<i32> {
    let report = oracle::run(cfg);
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        )?;
    } else {
        writeln!(
            out,
            "oracle: {} trial(s) per suite, rank <= {}, seed {}",
            cfg.trials, cfg.rank, cfg.seed
        )?;
        writeln!(
            out,
            "{:<22} {:>6} {:>6} {:>6}",
            "suite", "pass", "fail", "skip"
        )?;
        for row in report.axioms.iter().chain(&report.rules) {
            writeln!(
                out,
                "{:<22} {:>6} {:>6} {:>6}",
                row.name, row.pass, row.fail, row.skip
            )?;
            if let Some(f) = &row.first_failure {
                writeln!(out, "  first failure: {f}")?;
            }
        }
    }
    Ok(if report.failures() > 0 { FAIL } else { PASS })
}

/// Runs the command line `args` (without the program name).
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = std::iter::once("tops".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            let code = match e.kind() {
                K::DisplayHelp | K::DisplayVersion => PASS,
                _ => USAGE,
            };
            let target: &mut dyn Write = if code == PASS { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Check {
            files,
            fragment,
            json,
            trace,
        } => check_cmd(&files, fragment, json, trace, out),
        Command::Expand { file } => expand_cmd(&file, out, err),
        Command::Eval {
            file,
            max_iter,
            max_pow,
            seed,
            json,
        } => eval_cmd(&file, max_iter, max_pow, seed, json, out, err),
        Command::Oracle {
            trials,
            rank,
            seed,
            json,
        } => oracle_cmd(
            &OracleConfig {
                trials,
                rank,
                seed,
                ..OracleConfig::default()
            },
            json,
            out,
        ),
    };
    result.unwrap_or_else(|e| {
        // A closed downstream pipe is not worth a message.
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            let _ = writeln!(err, "tops: {e}");
        }
        USAGE
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&args, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&[]).0, USAGE);
        assert_eq!(run_str(&["check"]).0, USAGE);
        assert_eq!(run_str(&["check", "x.tops", "--fragment", "nope"]).0, USAGE);
        assert_eq!(run_str(&["check", "/nonexistent/file.tops"]).0, USAGE);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, PASS);
        assert!(out.contains("check"));
    }

    #[test]
    fn check_theorem_rejects_wrong_goal() {
        let script = parse("(theorem t (goal false) (proof true-i))").unwrap();
        let thm = script.theorems().next().unwrap();
        let e = check_theorem(thm, Fragment::Full, false).unwrap_err();
        assert_eq!(e.kind.name(), "ConclusionMismatch");
    }
}
