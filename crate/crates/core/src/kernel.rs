//! The proof-checking kernel.
//!
//! A [`Derivation`] is a tree whose inner nodes are logical rules and whose
//! leaves are rule instances without premises or axiom-scheme instances.
//! [`check`] verifies it bottom-up against a root context: premise contexts
//! are computed from the rule, never read from the derivation, and every
//! conclusion is compared up to α-equivalence.
//!
//! Rules whose conclusion cannot be recovered from their premises carry the
//! missing data explicitly: the extra disjunct of `∨I`, the goal of `False E`
//! and `¬Quodlibet`, the whole goal of `∃∈I`, and the motive with both
//! endpoints of `=E`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::context::{ContextError, LogicalContext, Sequent};
use crate::sugar;
use crate::syntax::{
    is_formula_over, is_term_over, AbstractedFormula, AbstractedTerm, Bind2, Formula, Fresh, Name,
    Term,
};

// ---------------------------------------------------------------------------
// Rules

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Index into `Hyps(Γ)`.
    Hypothesis(usize),
    /// Carries the goal.
    FalseE(Formula),
    TrueI,
    /// Carries the right disjunct.
    OrIL(Formula),
    /// Carries the left disjunct.
    OrIR(Formula),
    OrE,
    AndI,
    AndEL,
    AndER,
    /// Carries the discharged assumption.
    ImpI(Formula),
    ImpE,
    /// Carries the goal.
    NegQuodlibet(Formula),
    /// Carries the case formula.
    NegCases(Formula),
    /// Carries the full goal `∃x∈A. P(x)`.
    ExistsInI(Formula),
    /// Carries the eigenvariable.
    ExistsInE(Name),
    /// Carries the declaration `x : A`.
    ForallInI(Name, Term),
    ForallInE,
    EqI(Term),
    EqE {
        motive: AbstractedFormula,
        from: Term,
        to: Term,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Hypothesis,
    FalseE,
    TrueI,
    OrIL,
    OrIR,
    OrE,
    AndI,
    AndEL,
    AndER,
    ImpI,
    ImpE,
    NegQuodlibet,
    NegCases,
    ExistsInI,
    ExistsInE,
    ForallInI,
    ForallInE,
    EqI,
    EqE,
}

impl RuleKind {
    pub const ALL: [RuleKind; 19] = [
        RuleKind::Hypothesis,
        RuleKind::FalseE,
        RuleKind::TrueI,
        RuleKind::OrIL,
        RuleKind::OrIR,
        RuleKind::OrE,
        RuleKind::AndI,
        RuleKind::AndEL,
        RuleKind::AndER,
        RuleKind::ImpI,
        RuleKind::ImpE,
        RuleKind::NegQuodlibet,
        RuleKind::NegCases,
        RuleKind::ExistsInI,
        RuleKind::ExistsInE,
        RuleKind::ForallInI,
        RuleKind::ForallInE,
        RuleKind::EqI,
        RuleKind::EqE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Hypothesis => "Hypothesis",
            RuleKind::FalseE => "FalseE",
            RuleKind::TrueI => "TrueI",
            RuleKind::OrIL => "OrIL",
            RuleKind::OrIR => "OrIR",
            RuleKind::OrE => "OrE",
            RuleKind::AndI => "AndI",
            RuleKind::AndEL => "AndEL",
            RuleKind::AndER => "AndER",
            RuleKind::ImpI => "ImpI",
            RuleKind::ImpE => "ImpE",
            RuleKind::NegQuodlibet => "NegQuodlibet",
            RuleKind::NegCases => "NegCases",
            RuleKind::ExistsInI => "ExistsInI",
            RuleKind::ExistsInE => "ExistsInE",
            RuleKind::ForallInI => "ForallInI",
            RuleKind::ForallInE => "ForallInE",
            RuleKind::EqI => "EqI",
            RuleKind::EqE => "EqE",
        }
    }

    pub fn premise_count(self) -> usize {
        match self {
            RuleKind::Hypothesis | RuleKind::TrueI | RuleKind::EqI => 0,
            RuleKind::FalseE
            | RuleKind::OrIL
            | RuleKind::OrIR
            | RuleKind::AndEL
            | RuleKind::AndER
            | RuleKind::ImpI
            | RuleKind::ForallInI => 1,
            RuleKind::OrE => 3,
            RuleKind::AndI
            | RuleKind::ImpE
            | RuleKind::NegQuodlibet
            | RuleKind::NegCases
            | RuleKind::ExistsInI
            | RuleKind::ExistsInE
            | RuleKind::ForallInE
            | RuleKind::EqE => 2,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------------------
// Axiom schemes

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    SetMembership,
    SetExtensionality,
    EmptySet,
    EmptyElement,
    UnionSet,
    UnionElement,
    IndexedUnionSet,
    IndexedUnionElement,
    CSSet,
    CSElement,
    UENC,
    UESpecification,
    IRSet,
    IRBaseGeneration,
    IRStepGeneration,
    IRInduction,
    WGeneration,
    WInduction,
    WRNC,
    WRSpecification,
    PowersetSet,
    PowersetElement,
    Choice,
}

/// The kind of one scheme parameter. Abstractions record their arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Term,
    Formula,
    AbsTerm(usize),
    AbsFormula(usize),
}

impl fmt::Display for ParamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamKind::Term => f.write_str("term"),
            ParamKind::Formula => f.write_str("formula"),
            ParamKind::AbsTerm(n) => write!(f, "{n}-ary abstracted term"),
            ParamKind::AbsFormula(n) => write!(f, "{n}-ary abstracted formula"),
        }
    }
}

impl AxiomId {
    pub const ALL: [AxiomId; 23] = [
        AxiomId::SetMembership,
        AxiomId::SetExtensionality,
        AxiomId::EmptySet,
        AxiomId::EmptyElement,
        AxiomId::UnionSet,
        AxiomId::UnionElement,
        AxiomId::IndexedUnionSet,
        AxiomId::IndexedUnionElement,
        AxiomId::CSSet,
        AxiomId::CSElement,
        AxiomId::UENC,
        AxiomId::UESpecification,
        AxiomId::IRSet,
        AxiomId::IRBaseGeneration,
        AxiomId::IRStepGeneration,
        AxiomId::IRInduction,
        AxiomId::WGeneration,
        AxiomId::WInduction,
        AxiomId::WRNC,
        AxiomId::WRSpecification,
        AxiomId::PowersetSet,
        AxiomId::PowersetElement,
        AxiomId::Choice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::SetMembership => "SetMembership",
            AxiomId::SetExtensionality => "SetExtensionality",
            AxiomId::EmptySet => "EmptySet",
            AxiomId::EmptyElement => "EmptyElement",
            AxiomId::UnionSet => "UnionSet",
            AxiomId::UnionElement => "UnionElement",
            AxiomId::IndexedUnionSet => "IndexedUnionSet",
            AxiomId::IndexedUnionElement => "IndexedUnionElement",
            AxiomId::CSSet => "CSSet",
            AxiomId::CSElement => "CSElement",
            AxiomId::UENC => "UENC",
            AxiomId::UESpecification => "UESpecification",
            AxiomId::IRSet => "IRSet",
            AxiomId::IRBaseGeneration => "IRBaseGeneration",
            AxiomId::IRStepGeneration => "IRStepGeneration",
            AxiomId::IRInduction => "IRInduction",
            AxiomId::WGeneration => "WGeneration",
            AxiomId::WInduction => "WInduction",
            AxiomId::WRNC => "WRNC",
            AxiomId::WRSpecification => "WRSpecification",
            AxiomId::PowersetSet => "PowersetSet",
            AxiomId::PowersetElement => "PowersetElement",
            AxiomId::Choice => "Choice",
        }
    }

    /// Keyword used by the script syntax.
    pub fn keyword(self) -> &'static str {
        match self {
            AxiomId::SetMembership => "set-membership",
            AxiomId::SetExtensionality => "set-ext",
            AxiomId::EmptySet => "empty-set",
            AxiomId::EmptyElement => "empty-elem",
            AxiomId::UnionSet => "union-set",
            AxiomId::UnionElement => "union-elem",
            AxiomId::IndexedUnionSet => "iunion-set",
            AxiomId::IndexedUnionElement => "iunion-elem",
            AxiomId::CSSet => "cs-set",
            AxiomId::CSElement => "cs-elem",
            AxiomId::UENC => "ue-nc",
            AxiomId::UESpecification => "ue-spec",
            AxiomId::IRSet => "ir-set",
            AxiomId::IRBaseGeneration => "ir-base",
            AxiomId::IRStepGeneration => "ir-step",
            AxiomId::IRInduction => "ir-induction",
            AxiomId::WGeneration => "w-gen",
            AxiomId::WInduction => "w-induction",
            AxiomId::WRNC => "wr-nc",
            AxiomId::WRSpecification => "wr-spec",
            AxiomId::PowersetSet => "pow-set",
            AxiomId::PowersetElement => "pow-elem",
            AxiomId::Choice => "choice",
        }
    }

    pub fn from_keyword(s: &str) -> Option<AxiomId> {
        AxiomId::ALL.into_iter().find(|a| a.keyword() == s)
    }

    pub fn signature(self) -> &'static [ParamKind] {
        use ParamKind::*;
        match self {
            AxiomId::SetMembership => &[Term, Term],
            AxiomId::SetExtensionality => &[Term, Term],
            AxiomId::EmptySet => &[],
            AxiomId::EmptyElement => &[Term],
            AxiomId::UnionSet => &[Term, Term],
            AxiomId::UnionElement => &[Term, Term, Term],
            AxiomId::IndexedUnionSet => &[Term, AbsTerm(1)],
            AxiomId::IndexedUnionElement => &[Term, Term, AbsTerm(1)],
            AxiomId::CSSet => &[Term, Formula],
            AxiomId::CSElement => &[Term, Term, Formula],
            AxiomId::UENC => &[Term],
            AxiomId::UESpecification => &[Term],
            AxiomId::IRSet => &[Term, AbsTerm(1)],
            AxiomId::IRBaseGeneration => &[Term, AbsTerm(1)],
            AxiomId::IRStepGeneration => &[Term, Term, AbsTerm(1)],
            AxiomId::IRInduction => &[AbsFormula(1), Term, AbsTerm(1), Term],
            AxiomId::WGeneration => &[Term, Term, AbsFormula(2)],
            AxiomId::WInduction => &[AbsFormula(1), Term, AbsFormula(2), Term],
            AxiomId::WRNC => &[Term, Term, AbsFormula(2), AbsTerm(2)],
            AxiomId::WRSpecification => &[Term, Term, AbsFormula(2), AbsTerm(2)],
            AxiomId::PowersetSet => &[Term],
            AxiomId::PowersetElement => &[Term, Term],
            AxiomId::Choice => &[Term, AbsTerm(1)],
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Term(Term),
    Formula(Formula),
    AbsTerm(AbstractedTerm),
    AbsFormula(AbstractedFormula),
}

impl Param {
    pub fn kind(&self) -> ParamKind {
        match self {
            Param::Term(_) => ParamKind::Term,
            Param::Formula(_) => ParamKind::Formula,
            Param::AbsTerm(t) => ParamKind::AbsTerm(t.arity),
            Param::AbsFormula(p) => ParamKind::AbsFormula(p.arity),
        }
    }

    fn is_over(&self, ctx: &LogicalContext) -> bool {
        match self {
            Param::Term(t) => is_term_over(ctx.decls(), t),
            Param::Formula(p) => is_formula_over(ctx.decls(), p),
            Param::AbsTerm(t) => t.is_over(ctx.decls()),
            Param::AbsFormula(p) => p.is_over(ctx.decls()),
        }
    }

    fn avoid(&self, fresh: &mut Fresh) {
        match self {
            Param::Term(t) => fresh.avoid_term(t),
            Param::Formula(p) => fresh.avoid_formula(p),
            Param::AbsTerm(t) => fresh.avoid_term(&t.body),
            Param::AbsFormula(p) => fresh.avoid_formula(&p.body),
        }
    }
}

impl From<Term> for Param {
    fn from(t: Term) -> Self {
        Param::Term(t)
    }
}
impl From<Formula> for Param {
    fn from(p: Formula) -> Self {
        Param::Formula(p)
    }
}
impl From<AbstractedTerm> for Param {
    fn from(t: AbstractedTerm) -> Self {
        Param::AbsTerm(t)
    }
}
impl From<AbstractedFormula> for Param {
    fn from(p: AbstractedFormula) -> Self {
        Param::AbsFormula(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("{scheme} takes {expected} parameter(s), found {found}")]
    ArityMismatch {
        scheme: AxiomId,
        expected: usize,
        found: usize,
    },
    #[error("parameter {index} of {scheme} must be a {expected}, found a {found}")]
    ParamKindMismatch {
        scheme: AxiomId,
        index: usize,
        expected: ParamKind,
        found: ParamKind,
    },
    #[error("parameter {index} of {scheme} mentions undeclared variables")]
    IllFormedParam { scheme: AxiomId, index: usize },
}

/// A scheme plus a parameter vector matching [`AxiomId::signature`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomInstance {
    pub scheme: AxiomId,
    pub params: Vec<Param>,
}

impl AxiomInstance {
    pub fn new(scheme: AxiomId, params: Vec<Param>) -> Result<Self, AxiomError> {
        let sig = scheme.signature();
        if sig.len() != params.len() {
            return Err(AxiomError::ArityMismatch {
                scheme,
                expected: sig.len(),
                found: params.len(),
            });
        }
        for (index, (want, p)) in sig.iter().zip(&params).enumerate() {
            if *want != p.kind() {
                return Err(AxiomError::ParamKindMismatch {
                    scheme,
                    index,
                    expected: *want,
                    found: p.kind(),
                });
            }
        }
        Ok(AxiomInstance { scheme, params })
    }

    fn term(&self, i: usize) -> &Term {
        match &self.params[i] {
            Param::Term(t) => t,
            _ => unreachable!("signature checked"),
        }
    }
    fn formula(&self, i: usize) -> &Formula {
        match &self.params[i] {
            Param::Formula(p) => p,
            _ => unreachable!("signature checked"),
        }
    }
    fn abs_term(&self, i: usize) -> &AbstractedTerm {
        match &self.params[i] {
            Param::AbsTerm(t) => t,
            _ => unreachable!("signature checked"),
        }
    }
    fn abs_formula(&self, i: usize) -> &AbstractedFormula {
        match &self.params[i] {
            Param::AbsFormula(p) => p,
            _ => unreachable!("signature checked"),
        }
    }
}

fn var(x: &Name) -> Term {
    Term::Var(x.clone())
}

/// Turns a binary abstracted formula into the binder pair `x,y.R(x,y)`.
fn relation(fresh: &mut Fresh, r: &AbstractedFormula) -> Bind2<Formula> {
    let x = fresh.name();
    let y = fresh.name();
    let body = r.apply(&[var(&x), var(&y)]).expect("binary relation");
    Bind2::new(x, y, body)
}

/// Turns a binary abstracted term into the binder pair `z,Y.F(z,Y)`.
fn step2(fresh: &mut Fresh, f: &AbstractedTerm) -> Bind2<Term> {
    let z = fresh.name();
    let y = fresh.name();
    let body = f.apply(&[var(&z), var(&y)]).expect("binary step");
    Bind2::new(z, y, body)
}

fn apply1(f: &AbstractedTerm, t: Term) -> Term {
    f.apply(&[t]).expect("unary abstraction")
}

fn holds1(p: &AbstractedFormula, t: Term) -> Formula {
    p.apply(&[t]).expect("unary abstraction")
}

fn holds2(p: &AbstractedFormula, a: Term, b: Term) -> Formula {
    p.apply(&[a, b]).expect("binary abstraction")
}

fn itset(fresh: &mut Fresh, s: &Term, f: &AbstractedTerm) -> Term {
    let x = fresh.name();
    let step = apply1(f, var(&x));
    Term::iter_reach(s.clone(), x, step)
}

/// The formula a scheme instance asserts. Parameters must be over
/// `Decl(Γ)`; every binder the scheme introduces is fresh.
pub fn instantiate_axiom(
    inst: &AxiomInstance,
    ctx: &LogicalContext,
) -> Result<Formula, AxiomError> {
    let checked = AxiomInstance::new(inst.scheme, inst.params.clone())?;
    for (index, p) in checked.params.iter().enumerate() {
        if !p.is_over(ctx) {
            return Err(AxiomError::IllFormedParam {
                scheme: inst.scheme,
                index,
            });
        }
    }
    let mut fresh = Fresh::new(ctx.decls().clone());
    for p in &checked.params {
        p.avoid(&mut fresh);
    }
    let i = &checked;
    let f = &mut fresh;
    let out = match inst.scheme {
        AxiomId::SetMembership => Formula::implies(
            Formula::member(i.term(0).clone(), i.term(1).clone()),
            Formula::is_set(i.term(1).clone()),
        ),
        AxiomId::SetExtensionality => {
            let (a, b) = (i.term(0).clone(), i.term(1).clone());
            Formula::implies(
                Formula::conj([
                    Formula::is_set(a.clone()),
                    Formula::is_set(b.clone()),
                    sugar::subseteq(f, a.clone(), b.clone()),
                    sugar::subseteq(f, b.clone(), a.clone()),
                ]),
                Formula::eq(a, b),
            )
        }
        AxiomId::EmptySet => Formula::is_set(Term::Empty),
        AxiomId::EmptyElement => Formula::iff(
            Formula::member(i.term(0).clone(), Term::Empty),
            Formula::False,
        ),
        AxiomId::UnionSet => Formula::is_set(Term::union(i.term(0).clone(), i.term(1).clone())),
        AxiomId::UnionElement => {
            let (t, a, b) = (i.term(0), i.term(1), i.term(2));
            Formula::iff(
                Formula::member(t.clone(), Term::union(a.clone(), b.clone())),
                Formula::or(
                    Formula::member(t.clone(), a.clone()),
                    Formula::member(t.clone(), b.clone()),
                ),
            )
        }
        AxiomId::IndexedUnionSet => {
            let x = f.name();
            Formula::is_set(Term::indexed_union(
                x.clone(),
                i.term(0).clone(),
                apply1(i.abs_term(1), var(&x)),
            ))
        }
        AxiomId::IndexedUnionElement => {
            let (t, a, b) = (i.term(0), i.term(1), i.abs_term(2));
            let x = f.name();
            let y = f.name();
            Formula::iff(
                Formula::member(
                    t.clone(),
                    Term::indexed_union(x.clone(), a.clone(), apply1(b, var(&x))),
                ),
                Formula::exists_in(
                    y.clone(),
                    a.clone(),
                    Formula::member(t.clone(), apply1(b, var(&y))),
                ),
            )
        }
        AxiomId::CSSet => Formula::is_set(Term::cond_singleton(
            i.term(0).clone(),
            i.formula(1).clone(),
        )),
        AxiomId::CSElement => {
            let (t, r, phi) = (i.term(0), i.term(1), i.formula(2));
            Formula::iff(
                Formula::member(t.clone(), Term::cond_singleton(r.clone(), phi.clone())),
                Formula::and(Formula::eq(t.clone(), r.clone()), phi.clone()),
            )
        }
        AxiomId::UENC => {
            let a = i.term(0);
            let x = f.name();
            let unique = sugar::exists_unique(f, x, a.clone(), Formula::True);
            sugar::nc(f, unique, Term::uniqel(a.clone()))
        }
        AxiomId::UESpecification => {
            let a = i.term(0);
            let x = f.name();
            Formula::implies(
                sugar::exists_unique(f, x, a.clone(), Formula::True),
                Formula::member(Term::uniqel(a.clone()), a.clone()),
            )
        }
        AxiomId::IRSet => Formula::is_set(itset(f, i.term(0), i.abs_term(1))),
        AxiomId::IRBaseGeneration => {
            let s = i.term(0);
            Formula::member(s.clone(), itset(f, s, i.abs_term(1)))
        }
        AxiomId::IRStepGeneration => {
            let (t, s, step) = (i.term(0), i.term(1), i.abs_term(2));
            let reach = itset(f, s, step);
            Formula::implies(
                Formula::member(t.clone(), reach.clone()),
                Formula::member(apply1(step, t.clone()), reach),
            )
        }
        AxiomId::IRInduction => {
            let (p, s, step, t) = (i.abs_formula(0), i.term(1), i.abs_term(2), i.term(3));
            let reach = itset(f, s, step);
            let x = f.name();
            Formula::implies(
                Formula::conj([
                    holds1(p, s.clone()),
                    Formula::forall_in(
                        x.clone(),
                        reach.clone(),
                        Formula::implies(holds1(p, var(&x)), holds1(p, apply1(step, var(&x)))),
                    ),
                    Formula::member(t.clone(), reach),
                ]),
                holds1(p, t.clone()),
            )
        }
        AxiomId::WGeneration => {
            // The printed antecedent reads R(y, x) with x unbound; r is the
            // only reading under which the formula is over Decl(Γ).
            let (r, a, rel) = (i.term(0), i.term(1), i.abs_formula(2));
            let y = f.name();
            let wf = |f: &mut Fresh, e: Term| Formula::wf_elem(e, a.clone(), relation(f, rel));
            let pred = wf(f, var(&y));
            Formula::implies(
                Formula::and(
                    Formula::member(r.clone(), a.clone()),
                    Formula::forall_in(
                        y.clone(),
                        a.clone(),
                        Formula::implies(holds2(rel, var(&y), r.clone()), pred),
                    ),
                ),
                wf(f, r.clone()),
            )
        }
        AxiomId::WInduction => {
            let (p, a, rel, t) = (i.abs_formula(0), i.term(1), i.abs_formula(2), i.term(3));
            let x = f.name();
            let y = f.name();
            let progressive = Formula::forall_in(
                x.clone(),
                a.clone(),
                Formula::implies(
                    Formula::forall_in(
                        y.clone(),
                        a.clone(),
                        Formula::implies(holds2(rel, var(&y), var(&x)), holds1(p, var(&y))),
                    ),
                    holds1(p, var(&x)),
                ),
            );
            let wf = Formula::wf_elem(t.clone(), a.clone(), relation(f, rel));
            Formula::implies(Formula::and(progressive, wf), holds1(p, t.clone()))
        }
        AxiomId::WRNC => {
            let (s, a, rel, step) = (i.term(0), i.term(1), i.abs_formula(2), i.abs_term(3));
            let wf = Formula::wf_elem(s.clone(), a.clone(), relation(f, rel));
            let rec = Term::wf_rec(a.clone(), relation(f, rel), step2(f, step), s.clone());
            sugar::nc(f, wf, rec)
        }
        AxiomId::WRSpecification => {
            let (s, a, rel, step) = (i.term(0), i.term(1), i.abs_formula(2), i.abs_term(3));
            let wf = Formula::wf_elem(s.clone(), a.clone(), relation(f, rel));
            let rec = |f: &mut Fresh, arg: Term| {
                Term::wf_rec(a.clone(), relation(f, rel), step2(f, step), arg)
            };
            let x = f.name();
            // {prl(A;R;F;x) | x ∈ A | R(x, s)}
            let below = Term::indexed_union(
                x.clone(),
                a.clone(),
                Term::cond_singleton(rec(f, var(&x)), holds2(rel, var(&x), s.clone())),
            );
            let rhs = step.apply(&[s.clone(), below]).expect("binary step");
            Formula::implies(wf, Formula::eq(rec(f, s.clone()), rhs))
        }
        AxiomId::PowersetSet => Formula::is_set(Term::powerset(i.term(0).clone())),
        AxiomId::PowersetElement => {
            let (b, a) = (i.term(0), i.term(1));
            Formula::iff(
                Formula::member(b.clone(), Term::powerset(a.clone())),
                Formula::and(
                    Formula::is_set(b.clone()),
                    sugar::subseteq(f, b.clone(), a.clone()),
                ),
            )
        }
        AxiomId::Choice => {
            let (a, fam) = (i.term(0), i.abs_term(1));
            let x = f.name();
            let w = f.name();
            let y = f.name();
            let disjoint = Formula::forall_in(
                x.clone(),
                a.clone(),
                Formula::forall_in(
                    w.clone(),
                    a.clone(),
                    Formula::forall_in(
                        y.clone(),
                        sugar::intersection(f, apply1(fam, var(&x)), apply1(fam, var(&w))),
                        Formula::eq(var(&x), var(&w)),
                    ),
                ),
            );
            let x2 = f.name();
            let y2 = f.name();
            let inhabited = Formula::forall_in(
                x2.clone(),
                a.clone(),
                Formula::exists_in(y2, apply1(fam, var(&x2)), Formula::True),
            );
            let x3 = f.name();
            let x4 = f.name();
            let y4 = f.name();
            let big = f.name();
            let union = Term::indexed_union(x3.clone(), a.clone(), apply1(fam, var(&x3)));
            let picks = Formula::forall_in(
                x4.clone(),
                a.clone(),
                sugar::exists_unique(
                    f,
                    y4.clone(),
                    apply1(fam, var(&x4)),
                    Formula::member(var(&y4), var(&big)),
                ),
            );
            Formula::implies(
                Formula::and(disjoint, inhabited),
                Formula::exists_in(big, Term::powerset(union), picks),
            )
        }
    };
    Ok(out)
}

// ---------------------------------------------------------------------------
// Fragments

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    Full,
    NoChoice,
    Intuitionistic,
    WArithmetical,
    Arithmetical,
}

impl Fragment {
    pub const ALL: [Fragment; 5] = [
        Fragment::Full,
        Fragment::NoChoice,
        Fragment::Intuitionistic,
        Fragment::WArithmetical,
        Fragment::Arithmetical,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Fragment::Full => "full",
            Fragment::NoChoice => "no-choice",
            Fragment::Intuitionistic => "intuitionistic",
            Fragment::WArithmetical => "w-arith",
            Fragment::Arithmetical => "arith",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Fragment> {
        Fragment::ALL.into_iter().find(|f| f.keyword() == s)
    }

    /// Inclusion of fragments as sets of accepted derivations.
    pub fn is_subfragment_of(self, other: Fragment) -> bool {
        use Fragment::*;
        matches!(
            (self, other),
            (_, Full)
                | (NoChoice, NoChoice)
                | (Intuitionistic, NoChoice | Intuitionistic)
                | (WArithmetical, NoChoice | WArithmetical)
                | (Arithmetical, NoChoice | WArithmetical | Arithmetical)
        )
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Something a fragment may exclude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Not,
    WfElem,
    WfRec,
    Powerset,
    Rule(RuleKind),
    Axiom(AxiomId),
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Not => f.write_str("Not"),
            Feature::WfElem => f.write_str("WfElem"),
            Feature::WfRec => f.write_str("WfRec"),
            Feature::Powerset => f.write_str("Powerset"),
            Feature::Rule(r) => write!(f, "{r}"),
            Feature::Axiom(a) => write!(f, "{a}"),
        }
    }
}

pub fn fragment_allows(frag: Fragment, feature: Feature) -> bool {
    use AxiomId as A;
    let w_scheme = |a: AxiomId| {
        matches!(
            a,
            A::WGeneration | A::WInduction | A::WRNC | A::WRSpecification
        )
    };
    let pow_scheme = |a: AxiomId| matches!(a, A::PowersetSet | A::PowersetElement | A::Choice);
    match frag {
        Fragment::Full => true,
        Fragment::NoChoice => feature != Feature::Axiom(A::Choice),
        Fragment::Intuitionistic => !matches!(
            feature,
            Feature::Not
                | Feature::Rule(RuleKind::NegQuodlibet)
                | Feature::Rule(RuleKind::NegCases)
                | Feature::Axiom(A::Choice)
        ),
        Fragment::WArithmetical => match feature {
            Feature::Powerset => false,
            Feature::Axiom(a) => !pow_scheme(a),
            _ => true,
        },
        Fragment::Arithmetical => match feature {
            Feature::WfElem | Feature::WfRec | Feature::Powerset => false,
            Feature::Axiom(a) => !(w_scheme(a) || pow_scheme(a)),
            _ => true,
        },
    }
}

/// First constructor in `phi` the fragment rejects, in traversal order.
fn forbidden_in_formula(frag: Fragment, phi: &Formula) -> Option<Feature> {
    let deny = |f: Feature| (!fragment_allows(frag, f)).then_some(f);
    match phi {
        Formula::False | Formula::True => None,
        Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
            forbidden_in_formula(frag, a).or_else(|| forbidden_in_formula(frag, b))
        }
        Formula::Not(a) => deny(Feature::Not).or_else(|| forbidden_in_formula(frag, a)),
        Formula::ExistsIn { domain, body, .. } | Formula::ForallIn { domain, body, .. } => {
            forbidden_in_term(frag, domain).or_else(|| forbidden_in_formula(frag, body))
        }
        Formula::Eq(s, t) | Formula::In(s, t) => {
            forbidden_in_term(frag, s).or_else(|| forbidden_in_term(frag, t))
        }
        Formula::IsSet(a) => forbidden_in_term(frag, a),
        Formula::WfElem { elem, domain, rel } => deny(Feature::WfElem)
            .or_else(|| forbidden_in_term(frag, elem))
            .or_else(|| forbidden_in_term(frag, domain))
            .or_else(|| forbidden_in_formula(frag, &rel.body)),
    }
}

fn forbidden_in_term(frag: Fragment, t: &Term) -> Option<Feature> {
    let deny = |f: Feature| (!fragment_allows(frag, f)).then_some(f);
    match t {
        Term::Var(_) | Term::Hole(_) | Term::Empty => None,
        Term::Union(a, b) => forbidden_in_term(frag, a).or_else(|| forbidden_in_term(frag, b)),
        Term::IndexedUnion { domain, body, .. } => {
            forbidden_in_term(frag, domain).or_else(|| forbidden_in_term(frag, body))
        }
        Term::CondSingleton(r, phi) => {
            forbidden_in_term(frag, r).or_else(|| forbidden_in_formula(frag, phi))
        }
        Term::UniqueElement(a) => forbidden_in_term(frag, a),
        Term::IterReach { start, step, .. } => {
            forbidden_in_term(frag, start).or_else(|| forbidden_in_term(frag, step))
        }
        Term::WfRec {
            domain,
            rel,
            step,
            arg,
        } => deny(Feature::WfRec)
            .or_else(|| forbidden_in_term(frag, domain))
            .or_else(|| forbidden_in_formula(frag, &rel.body))
            .or_else(|| forbidden_in_term(frag, &step.body))
            .or_else(|| forbidden_in_term(frag, arg)),
        Term::Powerset(a) => deny(Feature::Powerset).or_else(|| forbidden_in_term(frag, a)),
    }
}

fn forbidden_in_param(frag: Fragment, p: &Param) -> Option<Feature> {
    match p {
        Param::Term(t) => forbidden_in_term(frag, t),
        Param::Formula(phi) => forbidden_in_formula(frag, phi),
        Param::AbsTerm(t) => forbidden_in_term(frag, &t.body),
        Param::AbsFormula(phi) => forbidden_in_formula(frag, &phi.body),
    }
}

// ---------------------------------------------------------------------------
// Derivations

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Rule(Rule, Vec<Derivation>),
    Axiom(AxiomInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub step: Step,
    /// Optional on inner nodes, required at the root.
    pub stated: Option<Formula>,
}

impl Derivation {
    pub fn rule(rule: Rule, premises: Vec<Derivation>) -> Self {
        Derivation {
            step: Step::Rule(rule, premises),
            stated: None,
        }
    }

    pub fn axiom(inst: AxiomInstance) -> Self {
        Derivation {
            step: Step::Axiom(inst),
            stated: None,
        }
    }

    pub fn stating(mut self, conclusion: Formula) -> Self {
        self.stated = Some(conclusion);
        self
    }

    pub fn rules_used(&self) -> BTreeSet<RuleKind> {
        let mut out = BTreeSet::new();
        self.walk(&mut |d| {
            if let Step::Rule(r, _) = &d.step {
                out.insert(r.kind());
            }
        });
        out
    }

    pub fn axioms_used(&self) -> BTreeSet<AxiomId> {
        let mut out = BTreeSet::new();
        self.walk(&mut |d| {
            if let Step::Axiom(a) = &d.step {
                out.insert(a.scheme);
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Derivation)) {
        f(self);
        if let Step::Rule(_, premises) = &self.step {
            for p in premises {
                p.walk(f);
            }
        }
    }
}

/// Position of a node: the premise indices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("{rule}: expected {expected}, found {found}")]
    RuleMismatch {
        rule: RuleKind,
        expected: String,
        found: String,
    },
    #[error("{feature} is not part of the {fragment} fragment")]
    FragmentViolation {
        feature: Feature,
        fragment: Fragment,
    },
    #[error("hypothesis {index} is out of range: the context has {available}")]
    HypothesisOutOfRange { index: usize, available: usize },
    #[error("`{0}` is already declared in the context")]
    FreshnessViolation(Name),
    #[error("`{0}` escapes its scope in the conclusion")]
    EigenvariableEscape(Name),
    #[error("stated conclusion {expected} does not match derived {found}")]
    ConclusionMismatch { expected: String, found: String },
    #[error("{rule} takes {expected} premise(s), found {found}")]
    PremiseCount {
        rule: RuleKind,
        expected: usize,
        found: usize,
    },
    #[error("ill-formed {0}")]
    IllFormed(String),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error("the root of a derivation must state its conclusion")]
    MissingConclusion,
}

impl ErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorKind::RuleMismatch { .. } => "RuleMismatch",
            ErrorKind::FragmentViolation { .. } => "FragmentViolation",
            ErrorKind::HypothesisOutOfRange { .. } => "HypothesisOutOfRange",
            ErrorKind::FreshnessViolation(_) => "FreshnessViolation",
            ErrorKind::EigenvariableEscape(_) => "EigenvariableEscape",
            ErrorKind::ConclusionMismatch { .. } => "ConclusionMismatch",
            ErrorKind::PremiseCount { .. } => "PremiseCount",
            ErrorKind::IllFormed(_) => "IllFormed",
            ErrorKind::Axiom(AxiomError::IllFormedParam { .. }) => "IllFormedParam",
            ErrorKind::Axiom(_) => "ArityMismatch",
            ErrorKind::MissingConclusion => "MissingConclusion",
        }
    }

    /// Expected/found pair, when the error has one.
    pub fn expected_found(&self) -> Option<(String, String)> {
        match self {
            ErrorKind::RuleMismatch {
                expected, found, ..
            }
            | ErrorKind::ConclusionMismatch { expected, found } => {
                Some((expected.clone(), found.clone()))
            }
            ErrorKind::FragmentViolation { feature, fragment } => {
                Some((format!("a feature of {fragment}"), feature.to_string()))
            }
            ErrorKind::PremiseCount {
                expected, found, ..
            } => Some((expected.to_string(), found.to_string())),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {path}: {kind}")]
pub struct CheckError {
    pub path: NodePath,
    pub kind: ErrorKind,
}

fn mismatch(rule: RuleKind, expected: impl Into<String>, found: &Formula) -> ErrorKind {
    ErrorKind::RuleMismatch {
        rule,
        expected: expected.into(),
        found: found.to_string(),
    }
}

fn ctx_err(what: &str, e: ContextError) -> ErrorKind {
    match e {
        ContextError::DuplicateDeclaration(x) => ErrorKind::FreshnessViolation(x),
        ContextError::IllFormedOverPrefix(_) => ErrorKind::IllFormed(what.to_string()),
    }
}

fn need_formula(ctx: &LogicalContext, what: &str, phi: &Formula) -> Result<(), ErrorKind> {
    if is_formula_over(ctx.decls(), phi) {
        Ok(())
    } else {
        Err(ErrorKind::IllFormed(format!("{what} {phi}")))
    }
}

fn need_term(ctx: &LogicalContext, what: &str, t: &Term) -> Result<(), ErrorKind> {
    if is_term_over(ctx.decls(), t) {
        Ok(())
    } else {
        Err(ErrorKind::IllFormed(format!("{what} {t}")))
    }
}

impl Rule {
    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Hypothesis(_) => RuleKind::Hypothesis,
            Rule::FalseE(_) => RuleKind::FalseE,
            Rule::TrueI => RuleKind::TrueI,
            Rule::OrIL(_) => RuleKind::OrIL,
            Rule::OrIR(_) => RuleKind::OrIR,
            Rule::OrE => RuleKind::OrE,
            Rule::AndI => RuleKind::AndI,
            Rule::AndEL => RuleKind::AndEL,
            Rule::AndER => RuleKind::AndER,
            Rule::ImpI(_) => RuleKind::ImpI,
            Rule::ImpE => RuleKind::ImpE,
            Rule::NegQuodlibet(_) => RuleKind::NegQuodlibet,
            Rule::NegCases(_) => RuleKind::NegCases,
            Rule::ExistsInI(_) => RuleKind::ExistsInI,
            Rule::ExistsInE(_) => RuleKind::ExistsInE,
            Rule::ForallInI(..) => RuleKind::ForallInI,
            Rule::ForallInE => RuleKind::ForallInE,
            Rule::EqI(_) => RuleKind::EqI,
            Rule::EqE { .. } => RuleKind::EqE,
        }
    }

    pub fn premise_count(&self) -> usize {
        self.kind().premise_count()
    }

    fn first_forbidden(&self, frag: Fragment) -> Option<Feature> {
        let own = Feature::Rule(self.kind());
        if !fragment_allows(frag, own) {
            return Some(own);
        }
        match self {
            Rule::FalseE(p)
            | Rule::OrIL(p)
            | Rule::OrIR(p)
            | Rule::ImpI(p)
            | Rule::NegQuodlibet(p)
            | Rule::NegCases(p)
            | Rule::ExistsInI(p) => forbidden_in_formula(frag, p),
            Rule::ForallInI(_, a) | Rule::EqI(a) => forbidden_in_term(frag, a),
            Rule::EqE { motive, from, to } => forbidden_in_formula(frag, &motive.body)
                .or_else(|| forbidden_in_term(frag, from))
                .or_else(|| forbidden_in_term(frag, to)),
            _ => None,
        }
    }

    /// Context of premise `index`, given the conclusions of the premises
    /// before it.
    pub fn premise_context(
        &self,
        ctx: &LogicalContext,
        index: usize,
        prior: &[Formula],
    ) -> Result<LogicalContext, ErrorKind> {
        let kind = self.kind();
        match (self, index) {
            (Rule::OrE, 1 | 2) => match &prior[0] {
                Formula::Or(a, b) => {
                    let case = if index == 1 { a } else { b };
                    ctx.with_hyp((**case).clone())
                        .map_err(|e| ctx_err("case hypothesis", e))
                }
                other => Err(mismatch(kind, "a disjunction", other)),
            },
            (Rule::ImpI(phi), 0) => ctx
                .with_hyp(phi.clone())
                .map_err(|e| ctx_err("assumption", e)),
            (Rule::NegCases(phi), 0) => ctx
                .with_hyp(phi.clone())
                .map_err(|e| ctx_err("case formula", e)),
            (Rule::NegCases(phi), 1) => ctx
                .with_hyp(Formula::not(phi.clone()))
                .map_err(|e| ctx_err("case formula", e)),
            (Rule::ExistsInE(x), 1) => match &prior[0] {
                Formula::ExistsIn { var, domain, body } => {
                    if ctx.decls().contains(x) {
                        return Err(ErrorKind::FreshnessViolation(x.clone()));
                    }
                    let witness = body.subst(var, &Term::Var(x.clone()));
                    ctx.with_decl(x.clone(), (**domain).clone())
                        .and_then(|c| c.with_hyp(witness))
                        .map_err(|e| ctx_err("witness", e))
                }
                other => Err(mismatch(kind, "a restricted existential", other)),
            },
            (Rule::ForallInI(x, a), 0) => {
                if ctx.decls().contains(x) {
                    return Err(ErrorKind::FreshnessViolation(x.clone()));
                }
                ctx.with_decl(x.clone(), a.clone())
                    .map_err(|e| ctx_err("declaration range", e))
            }
            _ => Ok(ctx.clone()),
        }
    }

    /// The conclusion established in `ctx` from the premises' conclusions.
    pub fn conclude(
        &self,
        ctx: &LogicalContext,
        premises: &[Formula],
    ) -> Result<Formula, ErrorKind> {
        let kind = self.kind();
        if premises.len() != kind.premise_count() {
            return Err(ErrorKind::PremiseCount {
                rule: kind,
                expected: kind.premise_count(),
                found: premises.len(),
            });
        }
        let p = premises;
        match self {
            Rule::Hypothesis(i) => ctx.hyp(*i).ok_or(ErrorKind::HypothesisOutOfRange {
                index: *i,
                available: ctx.len(),
            }),
            Rule::FalseE(goal) => {
                need_formula(ctx, "goal", goal)?;
                match &p[0] {
                    Formula::False => Ok(goal.clone()),
                    other => Err(mismatch(kind, "False", other)),
                }
            }
            Rule::TrueI => Ok(Formula::True),
            Rule::OrIL(right) => {
                need_formula(ctx, "disjunct", right)?;
                Ok(Formula::or(p[0].clone(), right.clone()))
            }
            Rule::OrIR(left) => {
                need_formula(ctx, "disjunct", left)?;
                Ok(Formula::or(left.clone(), p[0].clone()))
            }
            Rule::OrE => {
                if !matches!(p[0], Formula::Or(..)) {
                    return Err(mismatch(kind, "a disjunction", &p[0]));
                }
                if !p[1].alpha_eq(&p[2]) {
                    return Err(mismatch(kind, p[1].to_string(), &p[2]));
                }
                Ok(p[1].clone())
            }
            Rule::AndI => Ok(Formula::and(p[0].clone(), p[1].clone())),
            Rule::AndEL | Rule::AndER => match &p[0] {
                Formula::And(a, b) => Ok(if kind == RuleKind::AndEL {
                    (**a).clone()
                } else {
                    (**b).clone()
                }),
                other => Err(mismatch(kind, "a conjunction", other)),
            },
            Rule::ImpI(phi) => Ok(Formula::implies(phi.clone(), p[0].clone())),
            Rule::ImpE => match &p[0] {
                Formula::Implies(a, b) => {
                    if a.alpha_eq(&p[1]) {
                        Ok((**b).clone())
                    } else {
                        Err(mismatch(kind, a.to_string(), &p[1]))
                    }
                }
                other => Err(mismatch(kind, "an implication", other)),
            },
            Rule::NegQuodlibet(goal) => {
                need_formula(ctx, "goal", goal)?;
                match &p[1] {
                    Formula::Not(a) if a.alpha_eq(&p[0]) => Ok(goal.clone()),
                    Formula::Not(a) => Err(mismatch(kind, a.to_string(), &p[0])),
                    other => Err(mismatch(kind, "a negation", other)),
                }
            }
            Rule::NegCases(_) => {
                if p[0].alpha_eq(&p[1]) {
                    Ok(p[0].clone())
                } else {
                    Err(mismatch(kind, p[0].to_string(), &p[1]))
                }
            }
            Rule::ExistsInI(goal) => {
                need_formula(ctx, "goal", goal)?;
                let Formula::ExistsIn { var, domain, body } = goal else {
                    return Err(mismatch(kind, "a restricted existential goal", goal));
                };
                let Formula::In(t, range) = &p[0] else {
                    return Err(mismatch(kind, "a membership", &p[0]));
                };
                if !range.alpha_eq(domain) {
                    return Err(mismatch(
                        kind,
                        Formula::member((**t).clone(), (**domain).clone()).to_string(),
                        &p[0],
                    ));
                }
                let instance = body.subst(var, t);
                if !instance.alpha_eq(&p[1]) {
                    return Err(mismatch(kind, instance.to_string(), &p[1]));
                }
                Ok(goal.clone())
            }
            Rule::ExistsInE(x) => {
                if !matches!(p[0], Formula::ExistsIn { .. }) {
                    return Err(mismatch(kind, "a restricted existential", &p[0]));
                }
                if p[1].has_free(x) {
                    return Err(ErrorKind::EigenvariableEscape(x.clone()));
                }
                Ok(p[1].clone())
            }
            Rule::ForallInI(x, a) => {
                need_term(ctx, "declaration range", a)?;
                Ok(Formula::forall_in(x.clone(), a.clone(), p[0].clone()))
            }
            Rule::ForallInE => {
                let Formula::ForallIn { var, domain, body } = &p[0] else {
                    return Err(mismatch(kind, "a restricted universal", &p[0]));
                };
                match &p[1] {
                    Formula::In(t, range) if range.alpha_eq(domain) => Ok(body.subst(var, t)),
                    Formula::In(t, _) => Err(mismatch(
                        kind,
                        Formula::member((**t).clone(), (**domain).clone()).to_string(),
                        &p[1],
                    )),
                    other => Err(mismatch(kind, "a membership", other)),
                }
            }
            Rule::EqI(s) => {
                need_term(ctx, "term", s)?;
                Ok(Formula::eq(s.clone(), s.clone()))
            }
            Rule::EqE { motive, from, to } => {
                if motive.arity != 1 || !motive.is_over(ctx.decls()) {
                    return Err(ErrorKind::IllFormed("motive".to_string()));
                }
                need_term(ctx, "term", from)?;
                need_term(ctx, "term", to)?;
                let eq = Formula::eq(from.clone(), to.clone());
                if !eq.alpha_eq(&p[0]) {
                    return Err(mismatch(kind, eq.to_string(), &p[0]));
                }
                let before = motive
                    .apply(std::slice::from_ref(from))
                    .expect("unary motive");
                if !before.alpha_eq(&p[1]) {
                    return Err(mismatch(kind, before.to_string(), &p[1]));
                }
                Ok(motive
                    .apply(std::slice::from_ref(to))
                    .expect("unary motive"))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Checking

#[derive(Debug, Clone)]
pub struct Checked {
    pub sequent: Sequent,
    /// Every node's sequent, in post-order, when tracing is enabled.
    pub trace: Vec<(NodePath, Sequent)>,
}

#[derive(Debug, Clone)]
pub struct Checker {
    fragment: Fragment,
    require_inner_conclusions: bool,
    trace: bool,
}

impl Checker {
    pub fn new(fragment: Fragment) -> Self {
        Checker {
            fragment,
            require_inner_conclusions: false,
            trace: false,
        }
    }

    pub fn require_inner_conclusions(mut self, yes: bool) -> Self {
        self.require_inner_conclusions = yes;
        self
    }

    pub fn trace(mut self, yes: bool) -> Self {
        self.trace = yes;
        self
    }

    pub fn check(&self, ctx: &LogicalContext, d: &Derivation) -> Result<Checked, CheckError> {
        let root = NodePath::root();
        let at = |kind| CheckError {
            path: NodePath::root(),
            kind,
        };
        for entry in ctx.entries() {
            let found = match entry {
                crate::context::Entry::Decl(_, a) => forbidden_in_term(self.fragment, a),
                crate::context::Entry::Hyp(phi) => forbidden_in_formula(self.fragment, phi),
            };
            if let Some(feature) = found {
                return Err(at(ErrorKind::FragmentViolation {
                    feature,
                    fragment: self.fragment,
                }));
            }
        }
        if d.stated.is_none() {
            return Err(at(ErrorKind::MissingConclusion));
        }
        let mut trace = Vec::new();
        let conclusion = self.node(ctx, d, &root, &mut trace)?;
        let sequent = Sequent::new(ctx.clone(), conclusion)
            .map_err(|_| at(ErrorKind::IllFormed("conclusion".to_string())))?;
        Ok(Checked { sequent, trace })
    }

    fn gate(&self, found: Option<Feature>) -> Result<(), ErrorKind> {
        match found {
            Some(feature) => Err(ErrorKind::FragmentViolation {
                feature,
                fragment: self.fragment,
            }),
            None => Ok(()),
        }
    }

    fn node(
        &self,
        ctx: &LogicalContext,
        d: &Derivation,
        path: &NodePath,
        trace: &mut Vec<(NodePath, Sequent)>,
    ) -> Result<Formula, CheckError> {
        let here = |kind| CheckError {
            path: path.clone(),
            kind,
        };
        let derived = match &d.step {
            Step::Axiom(inst) => {
                let own = Feature::Axiom(inst.scheme);
                self.gate((!fragment_allows(self.fragment, own)).then_some(own))
                    .map_err(here)?;
                self.gate(
                    inst.params
                        .iter()
                        .find_map(|p| forbidden_in_param(self.fragment, p)),
                )
                .map_err(here)?;
                instantiate_axiom(inst, ctx).map_err(|e| here(e.into()))?
            }
            Step::Rule(rule, premises) => {
                self.gate(rule.first_forbidden(self.fragment))
                    .map_err(here)?;
                let kind = rule.kind();
                if premises.len() != kind.premise_count() {
                    return Err(here(ErrorKind::PremiseCount {
                        rule: kind,
                        expected: kind.premise_count(),
                        found: premises.len(),
                    }));
                }
                let mut concluded = Vec::with_capacity(premises.len());
                for (i, premise) in premises.iter().enumerate() {
                    let pctx = rule.premise_context(ctx, i, &concluded).map_err(here)?;
                    concluded.push(self.node(&pctx, premise, &path.child(i), trace)?);
                }
                rule.conclude(ctx, &concluded).map_err(here)?
            }
        };
        self.gate(forbidden_in_formula(self.fragment, &derived))
            .map_err(here)?;
        need_formula(ctx, "conclusion", &derived).map_err(here)?;
        let conclusion = match &d.stated {
            Some(stated) => {
                self.gate(forbidden_in_formula(self.fragment, stated))
                    .map_err(here)?;
                if !stated.alpha_eq(&derived) {
                    return Err(here(ErrorKind::ConclusionMismatch {
                        expected: stated.to_string(),
                        found: derived.to_string(),
                    }));
                }
                stated.clone()
            }
            None if self.require_inner_conclusions => {
                return Err(here(ErrorKind::MissingConclusion));
            }
            None => derived,
        };
        if self.trace {
            let s = Sequent::new(ctx.clone(), conclusion.clone())
                .map_err(|_| here(ErrorKind::IllFormed("conclusion".to_string())))?;
            trace.push((path.clone(), s));
        }
        Ok(conclusion)
    }
}

/// Checks `d` in `ctx` under `frag`, returning the established sequent.
pub fn check(ctx: &LogicalContext, d: &Derivation, frag: Fragment) -> Result<Sequent, CheckError> {
    Checker::new(frag).check(ctx, d).map(|c| c.sequent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::decls;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn hyp(i: usize) -> Derivation {
        Derivation::rule(Rule::Hypothesis(i), vec![])
    }

    #[test]
    fn true_intro() {
        let d = Derivation::rule(Rule::TrueI, vec![]).stating(Formula::True);
        let s = check(&LogicalContext::default(), &d, Fragment::Full).unwrap();
        assert_eq!(s.conclusion(), &Formula::True);
    }

    #[test]
    fn reflexivity_over_base() {
        let ctx = LogicalContext::nil(decls(["x"]));
        let goal = Formula::eq(v("x"), v("x"));
        let d = Derivation::rule(Rule::EqI(v("x")), vec![]).stating(goal.clone());
        let s = check(&ctx, &d, Fragment::Full).unwrap();
        assert_eq!(s.conclusion(), &goal);
        // Closed system: x is not declared.
        let err = check(&LogicalContext::default(), &d, Fragment::Full).unwrap_err();
        assert_eq!(err.kind.name(), "IllFormed");
    }

    #[test]
    fn imp_intro_discharges_assumption() {
        let ctx = LogicalContext::nil(decls(["p"]));
        let phi = Formula::is_set(v("p"));
        let d = Derivation::rule(Rule::ImpI(phi.clone()), vec![hyp(0)])
            .stating(Formula::implies(phi.clone(), phi.clone()));
        let s = check(&ctx, &d, Fragment::Full).unwrap();
        assert_eq!(s.conclusion(), &Formula::implies(phi.clone(), phi));
    }

    #[test]
    fn choice_is_rejected_intuitionistically() {
        let inst = AxiomInstance::new(
            AxiomId::Choice,
            vec![
                Term::Empty.into(),
                AbstractedTerm::new(1, Term::Hole(0)).into(),
            ],
        )
        .unwrap();
        let goal = instantiate_axiom(&inst, &LogicalContext::default()).unwrap();
        let d = Derivation::axiom(inst).stating(goal);
        assert!(check(&LogicalContext::default(), &d, Fragment::Full).is_ok());
        let err = check(&LogicalContext::default(), &d, Fragment::Intuitionistic).unwrap_err();
        assert_eq!(err.path, NodePath::root());
        assert!(matches!(
            err.kind,
            ErrorKind::FragmentViolation {
                feature: Feature::Axiom(AxiomId::Choice),
                ..
            }
        ));
    }

    #[test]
    fn axiom_examples() {
        let ctx = LogicalContext::default();
        let inst = AxiomInstance::new(AxiomId::EmptyElement, vec![Term::Empty.into()]).unwrap();
        assert_eq!(
            instantiate_axiom(&inst, &ctx).unwrap(),
            Formula::iff(Formula::member(Term::Empty, Term::Empty), Formula::False)
        );
        let ctx = LogicalContext::nil(decls(["t", "r", "p"]));
        let phi = Formula::is_set(v("p"));
        let inst = AxiomInstance::new(
            AxiomId::CSElement,
            vec![v("t").into(), v("r").into(), phi.clone().into()],
        )
        .unwrap();
        assert_eq!(
            instantiate_axiom(&inst, &ctx).unwrap(),
            Formula::iff(
                Formula::member(v("t"), Term::cond_singleton(v("r"), phi.clone())),
                Formula::and(Formula::eq(v("t"), v("r")), phi)
            )
        );
    }

    #[test]
    fn uenc_matches_expanded_sugar() {
        use crate::sugar::{expand_formula, SugarFormula, SugarTerm};
        let ctx = LogicalContext::nil(decls(["A"]));
        let inst = AxiomInstance::new(AxiomId::UENC, vec![v("A").into()]).unwrap();
        let got = instantiate_axiom(&inst, &ctx).unwrap();
        let a = || Box::new(SugarTerm::var("A"));
        let sugared = SugarFormula::Nc(
            Box::new(SugarFormula::ExistsUnique(
                "x".into(),
                a(),
                Box::new(SugarFormula::True),
            )),
            Box::new(SugarTerm::UniqueElement(a())),
        );
        assert!(got.alpha_eq(&expand_formula(&sugared)));
    }

    #[test]
    fn axiom_parameter_errors() {
        assert!(matches!(
            AxiomInstance::new(AxiomId::EmptyElement, vec![]),
            Err(AxiomError::ArityMismatch { .. })
        ));
        assert!(matches!(
            AxiomInstance::new(AxiomId::IRSet, vec![Term::Empty.into(), Term::Empty.into()]),
            Err(AxiomError::ParamKindMismatch { index: 1, .. })
        ));
        let inst = AxiomInstance::new(AxiomId::EmptyElement, vec![v("y").into()]).unwrap();
        assert_eq!(
            instantiate_axiom(&inst, &LogicalContext::default()),
            Err(AxiomError::IllFormedParam {
                scheme: AxiomId::EmptyElement,
                index: 0
            })
        );
    }

    #[test]
    fn fragment_table() {
        assert!(!fragment_allows(
            Fragment::WArithmetical,
            Feature::Axiom(AxiomId::PowersetSet)
        ));
        assert!(fragment_allows(
            Fragment::Arithmetical,
            Feature::Axiom(AxiomId::IRInduction)
        ));
        assert!(fragment_allows(
            Fragment::Full,
            Feature::Axiom(AxiomId::Choice)
        ));
        assert!(!fragment_allows(
            Fragment::NoChoice,
            Feature::Axiom(AxiomId::Choice)
        ));
        assert!(fragment_allows(Fragment::NoChoice, Feature::Powerset));
        assert!(!fragment_allows(Fragment::Intuitionistic, Feature::Not));
        assert!(fragment_allows(
            Fragment::Intuitionistic,
            Feature::Rule(RuleKind::FalseE)
        ));
        assert!(!fragment_allows(Fragment::Arithmetical, Feature::WfRec));
        assert!(fragment_allows(Fragment::WArithmetical, Feature::WfRec));
    }

    #[test]
    fn fragment_inclusions_match_feature_table() {
        let mut features = vec![
            Feature::Not,
            Feature::WfElem,
            Feature::WfRec,
            Feature::Powerset,
        ];
        features.extend(RuleKind::ALL.map(Feature::Rule));
        features.extend(AxiomId::ALL.map(Feature::Axiom));
        for small in Fragment::ALL {
            for large in Fragment::ALL {
                if small.is_subfragment_of(large) {
                    for f in &features {
                        assert!(
                            !fragment_allows(small, *f) || fragment_allows(large, *f),
                            "{small} allows {f} but {large} does not"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn freshness_violation() {
        let ctx = LogicalContext::nil(decls(["x", "A"]));
        let d = Derivation::rule(
            Rule::ForallInI("x".into(), v("A")),
            vec![Derivation::rule(Rule::TrueI, vec![])],
        )
        .stating(Formula::forall_in("x", v("A"), Formula::True));
        let err = check(&ctx, &d, Fragment::Full).unwrap_err();
        assert_eq!(err.kind, ErrorKind::FreshnessViolation("x".into()));
    }

    #[test]
    fn exists_elim_renames_binder() {
        // (∃y∈A. y ∈ B) ⊢ ∃z∈B. True, using eigenvariable w.
        let ctx = LogicalContext::new(
            decls(["A", "B"]),
            vec![crate::context::Entry::Hyp(Formula::exists_in(
                "y",
                v("A"),
                Formula::member(v("y"), v("B")),
            ))],
        )
        .unwrap();
        let goal = Formula::exists_in("z", v("B"), Formula::True);
        let inner = Derivation::rule(
            Rule::ExistsInI(goal.clone()),
            vec![hyp(2), Derivation::rule(Rule::TrueI, vec![])],
        );
        let d = Derivation::rule(Rule::ExistsInE("w".into()), vec![hyp(0), inner]).stating(goal);
        check(&ctx, &d, Fragment::Full).unwrap();
    }

    #[test]
    fn eigenvariable_may_not_escape() {
        let ctx = LogicalContext::new(
            decls(["A"]),
            vec![crate::context::Entry::Hyp(Formula::exists_in(
                "y",
                v("A"),
                Formula::True,
            ))],
        )
        .unwrap();
        let stated = Formula::member(v("w"), v("A"));
        let d = Derivation::rule(Rule::ExistsInE("w".into()), vec![hyp(0), hyp(1)]);
        let err = Checker::new(Fragment::Full)
            .check(&ctx, &d.stating(stated))
            .unwrap_err();
        assert_eq!(err.kind, ErrorKind::EigenvariableEscape("w".into()));
    }

    #[test]
    fn hypothesis_out_of_range() {
        let d = hyp(0).stating(Formula::True);
        let err = check(&LogicalContext::default(), &d, Fragment::Full).unwrap_err();
        assert!(matches!(
            err.kind,
            ErrorKind::HypothesisOutOfRange {
                index: 0,
                available: 0
            }
        ));
    }

    #[test]
    fn conclusion_mismatch_is_reported_at_node() {
        let d = Derivation::rule(
            Rule::OrIL(Formula::False),
            vec![Derivation::rule(Rule::TrueI, vec![]).stating(Formula::False)],
        )
        .stating(Formula::or(Formula::True, Formula::False));
        let err = check(&LogicalContext::default(), &d, Fragment::Full).unwrap_err();
        assert_eq!(err.path, NodePath(vec![0]));
        assert_eq!(err.kind.name(), "ConclusionMismatch");
    }

    #[test]
    fn eq_elim_rewrites() {
        // a = b, a ∈ C ⊢ b ∈ C
        let ctx = LogicalContext::new(
            decls(["a", "b", "C"]),
            vec![
                crate::context::Entry::Hyp(Formula::eq(v("a"), v("b"))),
                crate::context::Entry::Hyp(Formula::member(v("a"), v("C"))),
            ],
        )
        .unwrap();
        let motive = AbstractedFormula::new(1, Formula::member(Term::Hole(0), v("C")));
        let d = Derivation::rule(
            Rule::EqE {
                motive,
                from: v("a"),
                to: v("b"),
            },
            vec![hyp(0), hyp(1)],
        )
        .stating(Formula::member(v("b"), v("C")));
        check(&ctx, &d, Fragment::Full).unwrap();
    }

    #[test]
    fn trace_records_every_node() {
        let d = Derivation::rule(
            Rule::AndI,
            vec![
                Derivation::rule(Rule::TrueI, vec![]),
                Derivation::rule(Rule::TrueI, vec![]),
            ],
        )
        .stating(Formula::and(Formula::True, Formula::True));
        let checked = Checker::new(Fragment::Full)
            .trace(true)
            .check(&LogicalContext::default(), &d)
            .unwrap();
        let paths: Vec<String> = checked.trace.iter().map(|(p, _)| p.to_string()).collect();
        assert_eq!(paths, ["root.0", "root.1", "root"]);
    }
}
