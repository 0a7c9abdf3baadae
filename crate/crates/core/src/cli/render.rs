//! Rendering of core scripts back to surface syntax.
//!
//! Reserved binder names introduced by expansion are renamed first, so the
//! output is accepted by the parser.

use std::fmt::Write as _;

use crate::context::{Entry, LogicalContext, Sequent};
use crate::kernel::{Derivation, Param, Rule, Step};
use crate::syntax::{
    rename_reserved_formula, rename_reserved_term, AbstractedFormula, AbstractedTerm, AllNames,
    Expr, Formula, Name, Term,
};

use super::parse::{EvalBlock, Expected, Item, ProofScript, Theorem};

pub fn term(t: &Term) -> String {
    rename_reserved_term(t).to_string()
}

pub fn formula(phi: &Formula) -> String {
    rename_reserved_formula(phi).to_string()
}

fn placeholder_names(names: &AllNames, arity: usize) -> Vec<Name> {
    (0..)
        .map(|i| Name::new(format!("z{i}")))
        .filter(|n| !names.0.contains(n))
        .take(arity)
        .collect()
}

fn abs_term(a: &AbstractedTerm) -> String {
    let mut names = AllNames::default();
    names.term(&a.body);
    let vars = placeholder_names(&names, a.arity);
    let args: Vec<Term> = vars.iter().cloned().map(Term::Var).collect();
    let body = a.apply(&args).expect("arity matches");
    format!("(fun ({}) {})", join(&vars), term(&body))
}

fn abs_formula(a: &AbstractedFormula) -> String {
    let mut names = AllNames::default();
    names.formula(&a.body);
    let vars = placeholder_names(&names, a.arity);
    let args: Vec<Term> = vars.iter().cloned().map(Term::Var).collect();
    let body = a.apply(&args).expect("arity matches");
    format!("(fun ({}) {})", join(&vars), formula(&body))
}

fn join(names: &[Name]) -> String {
    names.iter().map(Name::as_str).collect::<Vec<_>>().join(" ")
}

pub fn proof(d: &Derivation) -> String {
    let inner = match &d.step {
        Step::Axiom(inst) => {
            let mut s = format!("(axiom {}", inst.scheme.keyword());
            for p in &inst.params {
                s.push(' ');
                s.push_str(&match p {
                    Param::Term(t) => term(t),
                    Param::Formula(f) => formula(f),
                    Param::AbsTerm(t) => abs_term(t),
                    Param::AbsFormula(f) => abs_formula(f),
                });
            }
            s.push(')');
            s
        }
        Step::Rule(rule, premises) => {
            let (head, mut parts): (&str, Vec<String>) = match rule {
                Rule::Hypothesis(i) => ("hyp", vec![i.to_string()]),
                Rule::FalseE(g) => ("false-e", vec![formula(g)]),
                Rule::TrueI => ("true-i", vec![]),
                Rule::OrIL(r) => ("or-il", vec![formula(r)]),
                Rule::OrIR(l) => ("or-ir", vec![formula(l)]),
                Rule::OrE => ("or-e", vec![]),
                Rule::AndI => ("and-i", vec![]),
                Rule::AndEL => ("and-el", vec![]),
                Rule::AndER => ("and-er", vec![]),
                Rule::ImpI(phi) => ("imp-i", vec![formula(phi)]),
                Rule::ImpE => ("imp-e", vec![]),
                Rule::NegQuodlibet(g) => ("not-quodlibet", vec![formula(g)]),
                Rule::NegCases(phi) => ("not-cases", vec![formula(phi)]),
                Rule::ExistsInI(g) => ("exists-i", vec![formula(g)]),
                Rule::ExistsInE(x) => ("exists-e", vec![x.to_string()]),
                Rule::ForallInI(x, a) => ("forall-i", vec![format!("({x} {})", term(a))]),
                Rule::ForallInE => ("forall-e", vec![]),
                Rule::EqI(s) => ("eq-i", vec![term(s)]),
                Rule::EqE { motive, from, to } => {
                    ("eq-e", vec![abs_formula(motive), term(from), term(to)])
                }
            };
            parts.extend(premises.iter().map(proof));
            if parts.is_empty() && head == "true-i" {
                head.to_string()
            } else {
                format!("({head} {})", parts.join(" "))
            }
        }
    };
    match &d.stated {
        Some(phi) => format!("(have {} {inner})", formula(phi)),
        None => inner,
    }
}

pub fn entries(entries: &[Entry]) -> String {
    entries
        .iter()
        .map(|e| match e {
            Entry::Decl(x, a) => format!("(decl {x} {})", term(a)),
            Entry::Hyp(phi) => format!("(hyp {})", formula(phi)),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn sequent(s: &Sequent) -> String {
    context_prefix(s.context()) + &formula(s.conclusion())
}

fn context_prefix(ctx: &LogicalContext) -> String {
    let e = entries(ctx.entries());
    if e.is_empty() {
        "|- ".to_string()
    } else {
        format!("{e} |- ")
    }
}

pub fn theorem(t: &Theorem) -> String {
    let mut out = format!("(theorem {}", t.name);
    if !t.base.is_empty() {
        let vars: Vec<Name> = t.base.iter().cloned().collect();
        let _ = write!(out, "\n  (base ({}))", join(&vars));
    }
    if !t.entries.is_empty() {
        let _ = write!(out, "\n  (context {})", entries(&t.entries));
    }
    let _ = write!(
        out,
        "\n  (goal {})\n  (proof {}))",
        formula(&t.goal),
        proof(&t.proof)
    );
    out
}

fn expr(e: &Expr) -> String {
    match e {
        Expr::Term(t) => term(t),
        Expr::Formula(f) => formula(f),
    }
}

pub fn eval_block(b: &EvalBlock) -> String {
    let mut out = "(eval".to_string();
    if !b.bindings.is_empty() {
        let binds: Vec<String> = b
            .bindings
            .iter()
            .map(|(x, v)| format!("({x} {v})"))
            .collect();
        let _ = write!(out, " (bind {})", binds.join(" "));
    }
    let _ = write!(out, " {}", expr(&b.expr));
    match &b.expect {
        Some(Expected::Value(v)) => {
            let _ = write!(out, " (expect {v})");
        }
        Some(Expected::Bool(v)) => {
            let _ = write!(out, " (expect {v})");
        }
        Some(Expected::Error(k)) => {
            let _ = write!(out, " (expect (error {k}))");
        }
        None => {}
    }
    out.push(')');
    out
}

pub fn script(s: &ProofScript) -> String {
    let mut out = String::new();
    for item in &s.items {
        match item {
            Item::Fragment(f) => {
                let _ = writeln!(out, "(fragment {f})");
            }
            Item::Config { max_iter, max_pow } => {
                out.push_str("(config");
                if let Some(n) = max_iter {
                    let _ = write!(out, " (max-iter {n})");
                }
                if let Some(n) = max_pow {
                    let _ = write!(out, " (max-pow {n})");
                }
                out.push_str(")\n");
            }
            Item::Theorem(t) => {
                out.push_str(&theorem(t));
                out.push('\n');
            }
            Item::Eval(b) => {
                out.push_str(&eval_block(b));
                out.push('\n');
            }
        }
    }
    out
}
