//! Proof scripts: surface syntax to core ASTs and derivations.
//!
//! Expressions are read into the sugared language and expanded before they
//! reach the kernel, so every formula in a parsed [`ProofScript`] is core.

use std::collections::BTreeMap;

use crate::context::Entry;
use crate::hfmodel::Value;
use crate::kernel::{AxiomId, AxiomInstance, Derivation, Fragment, Param, ParamKind, Rule};
use crate::sugar::{expand_formula, expand_term, SugarFormula, SugarTerm, SugaredExpr};
use crate::syntax::{AbstractedFormula, AbstractedTerm, DeclContext, Expr, Formula, Name, Term};

use super::sexpr::{read_all, ParseError, Pos, Sexp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem {
    pub name: String,
    pub pos: Pos,
    pub base: DeclContext,
    pub entries: Vec<Entry>,
    pub goal: Formula,
    pub proof: Derivation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Value(Value),
    Bool(bool),
    /// Name of an evaluation error kind.
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalBlock {
    pub pos: Pos,
    pub bindings: Vec<(Name, Value)>,
    pub expr: Expr,
    pub expect: Option<Expected>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Fragment(Fragment),
    Config {
        max_iter: Option<usize>,
        max_pow: Option<usize>,
    },
    Theorem(Theorem),
    Eval(EvalBlock),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofScript {
    pub items: Vec<Item>,
}

impl ProofScript {
    pub fn theorems(&self) -> impl Iterator<Item = &Theorem> {
        self.items.iter().filter_map(|i| match i {
            Item::Theorem(t) => Some(t),
            _ => None,
        })
    }

    /// The last fragment directive, if any.
    pub fn fragment(&self) -> Option<Fragment> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Fragment(f) => Some(*f),
            _ => None,
        })
    }
}

type PResult<T> = Result<T, ParseError>;

const RESERVED_ATOMS: [&str; 4] = ["empty", "true", "false", "fun"];

const TERM_HEADS: [&str; 15] = [
    "union", "iunion", "csing", "uniqel", "itset", "wrec", "pow", "sep", "sing", "set", "repl",
    "inter", "iota", "bigunion", "unions",
];

fn err<T>(s: &Sexp, expected: impl Into<String>) -> PResult<T> {
    Err(ParseError::at(s.pos(), expected))
}

fn is_term_syntax(s: &Sexp) -> bool {
    match s {
        Sexp::Atom(a, _) => a != "true" && a != "false",
        Sexp::List(..) => s.head().is_some_and(|h| TERM_HEADS.contains(&h)),
        Sexp::Braces(..) => false,
    }
}

/// `items` must have exactly `n` elements after the head.
fn args<'a>(s: &'a Sexp, n: usize, shape: &str) -> PResult<&'a [Sexp]> {
    let items = s.list().expect("list");
    if items.len() != n + 1 {
        return err(s, shape);
    }
    Ok(&items[1..])
}

pub fn name(s: &Sexp) -> PResult<Name> {
    match s.atom() {
        Some(a) if !RESERVED_ATOMS.contains(&a) && a.parse::<i64>().is_err() => Name::user(a)
            .map_err(|_| ParseError::at(s.pos(), "a variable name not starting with `_`")),
        _ => err(s, "a variable name"),
    }
}

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

/// `(x A)`
fn binder(s: &Sexp) -> PResult<(Name, SugarTerm)> {
    match s.list() {
        Some([x, a]) => Ok((name(x)?, sugar_term(a)?)),
        _ => err(s, "a binder `(x A)` with a range term"),
    }
}

/// `((x y) body)`
fn binder2<T>(s: &Sexp, body: impl Fn(&Sexp) -> PResult<T>) -> PResult<(Name, Name, Box<T>)> {
    match s.list() {
        Some([vars, b]) => match vars.list() {
            Some([x, y]) => Ok((name(x)?, name(y)?, bx(body(b)?))),
            _ => err(vars, "two bound variables `(x y)`"),
        },
        _ => err(s, "a binder pair `((x y) body)`"),
    }
}

pub fn sugar_term(s: &Sexp) -> PResult<SugarTerm> {
    if let Some(a) = s.atom() {
        return if a == "empty" {
            Ok(SugarTerm::Empty)
        } else {
            Ok(SugarTerm::Var(name(s)?))
        };
    }
    let Some(head) = s.head() else {
        return err(s, "a term");
    };
    let items = s.list().unwrap();
    let t = |i: usize| sugar_term(&items[i]).map(bx);
    let f = |i: usize| sugar_formula(&items[i]).map(bx);
    Ok(match head {
        "union" => {
            args(s, 2, "`(union A B)`")?;
            SugarTerm::Union(t(1)?, t(2)?)
        }
        "iunion" => {
            args(s, 2, "`(iunion (x A) B)`")?;
            let (x, a) = binder(&items[1])?;
            SugarTerm::IndexedUnion(x, bx(a), t(2)?)
        }
        "csing" => {
            args(s, 2, "`(csing r phi)`")?;
            SugarTerm::CondSingleton(t(1)?, f(2)?)
        }
        "uniqel" => {
            args(s, 1, "`(uniqel A)`")?;
            SugarTerm::UniqueElement(t(1)?)
        }
        "itset" => {
            args(s, 2, "`(itset s (x r))`")?;
            let (x, r) = binder(&items[2])?;
            SugarTerm::IterReach(t(1)?, x, bx(r))
        }
        "wrec" => {
            args(s, 4, "`(wrec A ((x y) phi) ((z Y) r) s)`")?;
            SugarTerm::WfRec {
                domain: t(1)?,
                rel: binder2(&items[2], sugar_formula)?,
                step: binder2(&items[3], sugar_term)?,
                arg: t(4)?,
            }
        }
        "pow" => {
            args(s, 1, "`(pow A)`")?;
            SugarTerm::Powerset(t(1)?)
        }
        "sep" => {
            args(s, 2, "`(sep (x A) P)`")?;
            let (x, a) = binder(&items[1])?;
            SugarTerm::Separation(x, bx(a), f(2)?)
        }
        "sing" => {
            args(s, 1, "`(sing r)`")?;
            SugarTerm::Singleton(t(1)?)
        }
        "set" => SugarTerm::FiniteSet(items[1..].iter().map(sugar_term).collect::<PResult<_>>()?),
        "unions" => {
            SugarTerm::FiniteUnion(items[1..].iter().map(sugar_term).collect::<PResult<_>>()?)
        }
        "repl" => {
            if items.len() < 3 {
                return err(s, "`(repl F (x A) ... [(where P)])`");
            }
            let mut rest = &items[2..];
            let mut filter = None;
            if let Some(last) = rest.last() {
                if last.head() == Some("where") {
                    filter = Some(bx(sugar_formula(&args(last, 1, "`(where P)`")?[0])?));
                    rest = &rest[..rest.len() - 1];
                }
            }
            if rest.is_empty() {
                return err(s, "at least one binder `(x A)`");
            }
            SugarTerm::Replacement {
                binders: rest.iter().map(binder).collect::<PResult<_>>()?,
                body: t(1)?,
                filter,
            }
        }
        "inter" => {
            args(s, 2, "`(inter A B)`")?;
            SugarTerm::Intersection(t(1)?, t(2)?)
        }
        "iota" => {
            args(s, 2, "`(iota (x A) P)`")?;
            let (x, a) = binder(&items[1])?;
            SugarTerm::Iota(x, bx(a), f(2)?)
        }
        "bigunion" => {
            args(s, 1, "`(bigunion A)`")?;
            SugarTerm::BigUnion(t(1)?)
        }
        _ => return err(s, "a term"),
    })
}

pub fn sugar_formula(s: &Sexp) -> PResult<SugarFormula> {
    match s.atom() {
        Some("true") => return Ok(SugarFormula::True),
        Some("false") => return Ok(SugarFormula::False),
        Some(_) => return err(s, "a formula"),
        None => {}
    }
    let Some(head) = s.head() else {
        return err(s, "a formula");
    };
    let items = s.list().unwrap();
    let t = |i: usize| sugar_term(&items[i]).map(bx);
    let f = |i: usize| sugar_formula(&items[i]).map(bx);
    let many = || {
        items[1..]
            .iter()
            .map(sugar_formula)
            .collect::<PResult<Vec<_>>>()
    };
    Ok(match head {
        "or" | "and" => {
            let mut parts = many()?;
            if parts.len() == 2 {
                let b = parts.pop().unwrap();
                let a = parts.pop().unwrap();
                if head == "or" {
                    SugarFormula::Or(bx(a), bx(b))
                } else {
                    SugarFormula::And(bx(a), bx(b))
                }
            } else if head == "or" {
                SugarFormula::FiniteOr(parts)
            } else {
                SugarFormula::FiniteAnd(parts)
            }
        }
        "=>" => {
            args(s, 2, "`(=> a b)`")?;
            SugarFormula::Implies(f(1)?, f(2)?)
        }
        "not" => {
            args(s, 1, "`(not a)`")?;
            SugarFormula::Not(f(1)?)
        }
        "iff" => {
            args(s, 2, "`(iff a b)`")?;
            SugarFormula::Iff(f(1)?, f(2)?)
        }
        "exists" | "forall" | "exists!" => {
            args(s, 2, &format!("`({head} (x A) phi)`"))?;
            let (x, a) = binder(&items[1])?;
            let (a, body) = (bx(a), f(2)?);
            match head {
                "exists" => SugarFormula::ExistsIn(x, a, body),
                "forall" => SugarFormula::ForallIn(x, a, body),
                _ => SugarFormula::ExistsUnique(x, a, body),
            }
        }
        "=" => {
            args(s, 2, "`(= s t)`")?;
            SugarFormula::Eq(t(1)?, t(2)?)
        }
        "set?" => {
            args(s, 1, "`(set? A)`")?;
            SugarFormula::IsSet(t(1)?)
        }
        "in" => {
            args(s, 2, "`(in s A)`")?;
            SugarFormula::In(t(1)?, t(2)?)
        }
        "subset" => {
            args(s, 2, "`(subset A B)`")?;
            SugarFormula::Subseteq(t(1)?, t(2)?)
        }
        "wf" => {
            args(s, 3, "`(wf s A ((x y) phi))`")?;
            SugarFormula::WfElem {
                elem: t(1)?,
                domain: t(2)?,
                rel: binder2(&items[3], sugar_formula)?,
            }
        }
        "nc" => {
            args(s, 2, "`(nc phi r)`")?;
            SugarFormula::Nc(f(1)?, t(2)?)
        }
        _ => return err(s, "a formula"),
    })
}

pub fn term(s: &Sexp) -> PResult<Term> {
    sugar_term(s).map(|t| expand_term(&t))
}

pub fn formula(s: &Sexp) -> PResult<Formula> {
    sugar_formula(s).map(|f| expand_formula(&f))
}

pub fn sugared(s: &Sexp) -> PResult<SugaredExpr> {
    if is_term_syntax(s) {
        sugar_term(s).map(SugaredExpr::Term)
    } else {
        sugar_formula(s).map(SugaredExpr::Formula)
    }
}

pub fn expr(s: &Sexp) -> PResult<Expr> {
    sugared(s).map(|e| crate::sugar::expand(&e))
}

pub fn value(s: &Sexp) -> PResult<Value> {
    match s {
        Sexp::Braces(items, _) => Ok(Value::set(
            items.iter().map(value).collect::<PResult<Vec<_>>>()?,
        )),
        Sexp::Atom(a, _) => match a.strip_prefix('u').and_then(|n| n.parse::<u32>().ok()) {
            Some(i) => Ok(Value::Atom(i)),
            None if a == "empty" => Ok(Value::empty()),
            None => err(s, "a value `uN` or `{...}`"),
        },
        Sexp::List(..) => err(s, "a value `uN` or `{...}`"),
    }
}

/// `(fun (x ...) body)` with the arity fixed by the expected parameter kind.
fn fun_vars(s: &Sexp, arity: usize) -> PResult<(Vec<Name>, &Sexp)> {
    if s.head() != Some("fun") {
        return err(
            s,
            format!("an abstraction `(fun (x ...) body)` of arity {arity}"),
        );
    }
    let [_, vars, body] = s.list().unwrap() else {
        return err(s, "`(fun (x ...) body)`");
    };
    let Some(vs) = vars.list() else {
        return err(vars, "a list of bound variables");
    };
    if vs.len() != arity {
        return err(vars, format!("{arity} bound variable(s)"));
    }
    Ok((vs.iter().map(name).collect::<PResult<_>>()?, body))
}

pub fn abs_term(s: &Sexp, arity: usize) -> PResult<AbstractedTerm> {
    let (vars, body) = fun_vars(s, arity)?;
    Ok(AbstractedTerm::abstracting(&vars, &term(body)?))
}

pub fn abs_formula(s: &Sexp, arity: usize) -> PResult<AbstractedFormula> {
    let (vars, body) = fun_vars(s, arity)?;
    Ok(AbstractedFormula::abstracting(&vars, &formula(body)?))
}

fn index(s: &Sexp) -> PResult<usize> {
    s.atom()
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| ParseError::at(s.pos(), "a non-negative integer"))
}

struct ScriptParser {
    lemmas: BTreeMap<String, Derivation>,
}

impl ScriptParser {
    fn proof(&self, s: &Sexp) -> PResult<Derivation> {
        if s.atom() == Some("true-i") {
            return Ok(Derivation::rule(Rule::TrueI, vec![]));
        }
        let Some(head) = s.head() else {
            return err(s, "a proof step");
        };
        let items = s.list().unwrap();
        let d = |i: usize| self.proof(&items[i]);
        let rule = |r: Rule, premises: &[usize]| -> PResult<Derivation> {
            Ok(Derivation::rule(
                r,
                premises.iter().map(|&i| d(i)).collect::<PResult<_>>()?,
            ))
        };
        let arity = |n: usize| args(s, n, &format!("`{head}` with {n} argument(s)"));
        match head {
            "hyp" => {
                arity(1)?;
                rule(Rule::Hypothesis(index(&items[1])?), &[])
            }
            "true-i" => {
                arity(0)?;
                rule(Rule::TrueI, &[])
            }
            "false-e" => {
                arity(2)?;
                rule(Rule::FalseE(formula(&items[1])?), &[2])
            }
            "or-il" => {
                arity(2)?;
                rule(Rule::OrIL(formula(&items[1])?), &[2])
            }
            "or-ir" => {
                arity(2)?;
                rule(Rule::OrIR(formula(&items[1])?), &[2])
            }
            "or-e" => {
                arity(3)?;
                rule(Rule::OrE, &[1, 2, 3])
            }
            "and-i" => {
                arity(2)?;
                rule(Rule::AndI, &[1, 2])
            }
            "and-el" => {
                arity(1)?;
                rule(Rule::AndEL, &[1])
            }
            "and-er" => {
                arity(1)?;
                rule(Rule::AndER, &[1])
            }
            "imp-i" => {
                arity(2)?;
                rule(Rule::ImpI(formula(&items[1])?), &[2])
            }
            "imp-e" => {
                arity(2)?;
                rule(Rule::ImpE, &[1, 2])
            }
            "not-quodlibet" => {
                arity(3)?;
                rule(Rule::NegQuodlibet(formula(&items[1])?), &[2, 3])
            }
            "not-cases" => {
                arity(3)?;
                rule(Rule::NegCases(formula(&items[1])?), &[2, 3])
            }
            "exists-i" => {
                arity(3)?;
                rule(Rule::ExistsInI(formula(&items[1])?), &[2, 3])
            }
            "exists-e" => {
                arity(3)?;
                rule(Rule::ExistsInE(name(&items[1])?), &[2, 3])
            }
            "forall-i" => {
                arity(2)?;
                let (x, a) = binder(&items[1])?;
                rule(Rule::ForallInI(x, expand_term(&a)), &[2])
            }
            "forall-e" => {
                arity(2)?;
                rule(Rule::ForallInE, &[1, 2])
            }
            "eq-i" => {
                arity(1)?;
                rule(Rule::EqI(term(&items[1])?), &[])
            }
            "eq-e" => {
                arity(5)?;
                rule(
                    Rule::EqE {
                        motive: abs_formula(&items[1], 1)?,
                        from: term(&items[2])?,
                        to: term(&items[3])?,
                    },
                    &[4, 5],
                )
            }
            "axiom" => self.axiom(s, items),
            "have" => {
                arity(2)?;
                Ok(d(2)?.stating(formula(&items[1])?))
            }
            "lemma" => {
                arity(1)?;
                let key = items[1].atom().unwrap_or_default();
                self.lemmas
                    .get(key)
                    .cloned()
                    .ok_or_else(|| ParseError::at(items[1].pos(), "the name of an earlier theorem"))
            }
            _ => err(s, "a rule, `axiom`, `have` or `lemma`"),
        }
    }

    fn axiom(&self, s: &Sexp, items: &[Sexp]) -> PResult<Derivation> {
        let Some(scheme) = items
            .get(1)
            .and_then(Sexp::atom)
            .and_then(AxiomId::from_keyword)
        else {
            return err(items.get(1).unwrap_or(s), "an axiom scheme name");
        };
        let sig = scheme.signature();
        let given = &items[2..];
        if given.len() != sig.len() {
            return err(
                s,
                format!("{} parameter(s) for `{}`", sig.len(), scheme.keyword()),
            );
        }
        let params = sig
            .iter()
            .zip(given)
            .map(|(kind, p)| {
                Ok(match kind {
                    ParamKind::Term => Param::Term(term(p)?),
                    ParamKind::Formula => Param::Formula(formula(p)?),
                    ParamKind::AbsTerm(n) => Param::AbsTerm(abs_term(p, *n)?),
                    ParamKind::AbsFormula(n) => Param::AbsFormula(abs_formula(p, *n)?),
                })
            })
            .collect::<PResult<Vec<_>>>()?;
        let inst = AxiomInstance::new(scheme, params).expect("signature respected");
        Ok(Derivation::axiom(inst))
    }

    fn theorem(&self, s: &Sexp, items: &[Sexp]) -> PResult<Theorem> {
        let Some(title) = items.get(1).and_then(Sexp::atom) else {
            return err(s, "a theorem name");
        };
        let mut base = DeclContext::new();
        let mut entries = Vec::new();
        let mut goal = None;
        let mut proof = None;
        for clause in &items[2..] {
            let Some(part) = clause.list() else {
                return err(clause, "a `base`, `context`, `goal` or `proof` clause");
            };
            match clause.head() {
                Some("base") => {
                    let [_, vars] = part else {
                        return err(clause, "`(base (x ...))`");
                    };
                    let Some(vs) = vars.list() else {
                        return err(vars, "a list of variables");
                    };
                    for v in vs {
                        if !base.insert(name(v)?) {
                            return err(v, "distinct base variables");
                        }
                    }
                }
                Some("context") => {
                    for e in &part[1..] {
                        entries.push(match (e.head(), e.list()) {
                            (Some("decl"), Some([_, x, a])) => Entry::Decl(name(x)?, term(a)?),
                            (Some("hyp"), Some([_, phi])) => Entry::Hyp(formula(phi)?),
                            _ => return err(e, "`(decl x A)` or `(hyp phi)`"),
                        });
                    }
                }
                Some("goal") => {
                    let body = args(clause, 1, "`(goal phi)`")?;
                    goal = Some(formula(&body[0])?);
                }
                Some("proof") => {
                    let body = args(clause, 1, "`(proof D)`")?;
                    proof = Some(self.proof(&body[0])?);
                }
                _ => return err(clause, "a `base`, `context`, `goal` or `proof` clause"),
            }
        }
        let Some(goal) = goal else {
            return err(s, "a `(goal phi)` clause");
        };
        let Some(proof) = proof else {
            return err(s, "a `(proof D)` clause");
        };
        Ok(Theorem {
            name: title.to_string(),
            pos: s.pos(),
            base,
            entries,
            goal,
            proof,
        })
    }

    fn eval(&self, s: &Sexp, items: &[Sexp]) -> PResult<EvalBlock> {
        let mut bindings = Vec::new();
        let mut expr_node = None;
        let mut expect = None;
        for part in &items[1..] {
            match part.head() {
                Some("bind") => {
                    for b in &part.list().unwrap()[1..] {
                        let Some([x, v]) = b.list() else {
                            return err(b, "a binding `(x VALUE)`");
                        };
                        bindings.push((name(x)?, value(v)?));
                    }
                }
                Some("expect") => {
                    let body = &args(part, 1, "`(expect VALUE)`")?[0];
                    expect = Some(match body.atom() {
                        Some("true") => Expected::Bool(true),
                        Some("false") => Expected::Bool(false),
                        _ if body.head() == Some("error") => {
                            let kind = &args(body, 1, "`(error KIND)`")?[0];
                            Expected::Error(
                                kind.atom()
                                    .ok_or_else(|| ParseError::at(kind.pos(), "an error kind"))?
                                    .to_string(),
                            )
                        }
                        _ => Expected::Value(value(body)?),
                    });
                }
                _ if expr_node.is_none() => expr_node = Some(expr(part)?),
                _ => return err(part, "`(bind ...)` or `(expect ...)`"),
            }
        }
        let Some(expr) = expr_node else {
            return err(s, "an expression to evaluate");
        };
        Ok(EvalBlock {
            pos: s.pos(),
            bindings,
            expr,
            expect,
        })
    }
}

fn positive(s: &Sexp) -> PResult<usize> {
    match index(s)? {
        0 => err(s, "a positive integer"),
        n => Ok(n),
    }
}

pub fn parse(text: &str) -> Result<ProofScript, ParseError> {
    let mut parser = ScriptParser {
        lemmas: BTreeMap::new(),
    };
    let mut script = ProofScript::default();
    for top in read_all(text)? {
        let Some(items) = top.list() else {
            return err(&top, "a top-level form");
        };
        let item = match top.head() {
            Some("theorem") => {
                let thm = parser.theorem(&top, items)?;
                if parser.lemmas.contains_key(&thm.name) {
                    return err(&items[1], "a theorem name not used earlier in the file");
                }
                let mut inlined = thm.proof.clone();
                inlined.stated.get_or_insert_with(|| thm.goal.clone());
                parser.lemmas.insert(thm.name.clone(), inlined);
                Item::Theorem(thm)
            }
            Some("eval") => Item::Eval(parser.eval(&top, items)?),
            Some("fragment") => {
                let body = &args(&top, 1, "`(fragment NAME)`")?[0];
                let frag = body
                    .atom()
                    .and_then(Fragment::from_keyword)
                    .ok_or_else(|| {
                        ParseError::at(
                            body.pos(),
                            "one of full, no-choice, intuitionistic, w-arith, arith",
                        )
                    })?;
                Item::Fragment(frag)
            }
            Some("config") => {
                let mut max_iter = None;
                let mut max_pow = None;
                for opt in &items[1..] {
                    match (opt.head(), opt.list()) {
                        (Some("max-iter"), Some([_, n])) => max_iter = Some(positive(n)?),
                        (Some("max-pow"), Some([_, n])) => max_pow = Some(positive(n)?),
                        _ => return err(opt, "`(max-iter N)` or `(max-pow N)`"),
                    }
                }
                Item::Config { max_iter, max_pow }
            }
            _ => return err(&top, "`theorem`, `eval`, `fragment` or `config`"),
        };
        script.items.push(item);
    }
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(text: &str) -> Sexp {
        read_all(text).unwrap().remove(0)
    }

    #[test]
    fn parses_refl_theorem() {
        let s = parse("(theorem refl (base (x)) (goal (= x x)) (proof (eq-i x)))").unwrap();
        let thms: Vec<_> = s.theorems().collect();
        assert_eq!(thms.len(), 1);
        assert_eq!(thms[0].goal, Formula::eq(Term::var("x"), Term::var("x")));
        assert_eq!(
            thms[0].proof,
            Derivation::rule(Rule::EqI(Term::var("x")), vec![])
        );
    }

    #[test]
    fn quantifier_needs_range() {
        let err = formula(&one("(forall (x) phi)")).unwrap_err();
        assert_eq!((err.line, err.col), (1, 9));
    }

    #[test]
    fn reserved_names_rejected() {
        let err = term(&one("(union _v0 a)")).unwrap_err();
        assert_eq!(err.col, 8);
    }

    #[test]
    fn sugar_is_expanded() {
        let got = formula(&one("(subset A B)")).unwrap();
        assert!(matches!(got, Formula::ForallIn { .. }));
        let got = term(&one("(set a b c)")).unwrap();
        assert_eq!(
            got,
            Term::union(
                Term::union(
                    Term::singleton(Term::var("a")),
                    Term::singleton(Term::var("b"))
                ),
                Term::singleton(Term::var("c"))
            )
        );
        assert_eq!(formula(&one("(and)")).unwrap(), Formula::True);
    }

    #[test]
    fn values() {
        assert_eq!(
            value(&one("{u0, {}}")).unwrap(),
            Value::set([Value::Atom(0), Value::empty()])
        );
        assert!(value(&one("x")).is_err());
    }

    #[test]
    fn lemma_must_be_earlier() {
        let err = parse("(theorem a (goal true) (proof (lemma b)))").unwrap_err();
        assert_eq!(err.expected, "the name of an earlier theorem");
        let ok = parse(
            "(theorem a (goal true) (proof true-i))\n(theorem b (goal true) (proof (lemma a)))",
        );
        assert!(ok.is_ok());
        let dup =
            parse("(theorem a (goal true) (proof true-i)) (theorem a (goal true) (proof true-i))");
        assert!(dup.is_err());
    }

    #[test]
    fn axiom_arity_in_syntax() {
        let err = parse("(theorem a (goal true) (proof (axiom empty-elem)))").unwrap_err();
        assert!(err.expected.contains("1 parameter"));
        let err = parse("(theorem a (goal true) (proof (axiom ir-set empty (fun (x y) x))))")
            .unwrap_err();
        assert!(err.expected.contains("1 bound"));
    }
}
