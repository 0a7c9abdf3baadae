//! Core term and formula ASTs, binding structure, α-equivalence and
//! capture-avoiding substitution.
//!
//! Terms and formulas are mutually recursive. Every binder is explicit in
//! the AST: indexed union, iterative reach, the two dual binders of
//! well-founded recursion, restricted quantifiers and well-founded
//! elementhood. Placeholders of abstracted terms and formulas are a separate
//! node kind ([`Term::Hole`]) so they can never be captured by a binder.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A variable name. Names starting with `_` are reserved for
/// machine-generated binders.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("variable names must be nonempty")]
    Empty,
    #[error("`{0}` is reserved: names starting with `_` are machine-generated")]
    Reserved(String),
}

impl Name {
    /// Builds a name without the user-namespace check. Panics on the empty
    /// string.
    pub fn new(s: impl AsRef<str>) -> Self {
        let s = s.as_ref();
        assert!(!s.is_empty(), "variable names must be nonempty");
        Name(Arc::from(s))
    }

    /// Builds a name from user input, rejecting empty and reserved names.
    pub fn user(s: &str) -> Result<Self, NameError> {
        if s.is_empty() {
            Err(NameError::Empty)
        } else if s.starts_with('_') {
            Err(NameError::Reserved(s.to_string()))
        } else {
            Ok(Name(Arc::from(s)))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// A declaration context: the finite set of variables a term or formula may
/// mention freely.
pub type DeclContext = BTreeSet<Name>;

/// Builds a declaration context from string names.
pub fn decls<'a>(names: impl IntoIterator<Item = &'a str>) -> DeclContext {
    names.into_iter().map(Name::new).collect()
}

/// Two binders sharing one body, as in `x,y.φ` and `z,Y.r`. The second
/// binder is innermost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bind2<T> {
    pub first: Name,
    pub second: Name,
    pub body: Box<T>,
}

impl<T> Bind2<T> {
    pub fn new(first: impl Into<Name>, second: impl Into<Name>, body: T) -> Self {
        Bind2 {
            first: first.into(),
            second: second.into(),
            body: Box::new(body),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    /// Placeholder `z_i` of an abstracted term or formula.
    Hole(usize),
    Empty,
    Union(Box<Term>, Box<Term>),
    /// `⋃_{var ∈ domain} body`
    IndexedUnion {
        var: Name,
        domain: Box<Term>,
        body: Box<Term>,
    },
    /// `⦅r | φ⦆`
    CondSingleton(Box<Term>, Box<Formula>),
    UniqueElement(Box<Term>),
    /// `itset(start, var.step)`
    IterReach {
        start: Box<Term>,
        var: Name,
        step: Box<Term>,
    },
    /// `prl(domain; x,y.rel; z,Y.step; arg)`
    WfRec {
        domain: Box<Term>,
        rel: Bind2<Formula>,
        step: Bind2<Term>,
        arg: Box<Term>,
    },
    Powerset(Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    False,
    True,
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    ExistsIn {
        var: Name,
        domain: Box<Term>,
        body: Box<Formula>,
    },
    ForallIn {
        var: Name,
        domain: Box<Term>,
        body: Box<Formula>,
    },
    Eq(Box<Term>, Box<Term>),
    IsSet(Box<Term>),
    In(Box<Term>, Box<Term>),
    /// `W∈(elem, domain, x,y.rel)`
    WfElem {
        elem: Box<Term>,
        domain: Box<Term>,
        rel: Bind2<Formula>,
    },
}

/// Either syntactic category; used where an operation accepts both.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Term(Term),
    Formula(Formula),
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }
    pub fn union(a: Term, b: Term) -> Term {
        Term::Union(Box::new(a), Box::new(b))
    }
    pub fn indexed_union(var: impl Into<Name>, domain: Term, body: Term) -> Term {
        Term::IndexedUnion {
            var: var.into(),
            domain: Box::new(domain),
            body: Box::new(body),
        }
    }
    pub fn cond_singleton(r: Term, phi: Formula) -> Term {
        Term::CondSingleton(Box::new(r), Box::new(phi))
    }
    /// `{r}` as `⦅r | True⦆`.
    pub fn singleton(r: Term) -> Term {
        Term::cond_singleton(r, Formula::True)
    }
    pub fn uniqel(a: Term) -> Term {
        Term::UniqueElement(Box::new(a))
    }
    pub fn iter_reach(start: Term, var: impl Into<Name>, step: Term) -> Term {
        Term::IterReach {
            start: Box::new(start),
            var: var.into(),
            step: Box::new(step),
        }
    }
    pub fn wf_rec(domain: Term, rel: Bind2<Formula>, step: Bind2<Term>, arg: Term) -> Term {
        Term::WfRec {
            domain: Box::new(domain),
            rel,
            step,
            arg: Box::new(arg),
        }
    }
    pub fn powerset(a: Term) -> Term {
        Term::Powerset(Box::new(a))
    }
}

impl Formula {
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    /// `(a ⇒ b) ∧ (b ⇒ a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn exists_in(var: impl Into<Name>, domain: Term, body: Formula) -> Formula {
        Formula::ExistsIn {
            var: var.into(),
            domain: Box::new(domain),
            body: Box::new(body),
        }
    }
    pub fn forall_in(var: impl Into<Name>, domain: Term, body: Formula) -> Formula {
        Formula::ForallIn {
            var: var.into(),
            domain: Box::new(domain),
            body: Box::new(body),
        }
    }
    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Eq(Box::new(s), Box::new(t))
    }
    pub fn is_set(a: Term) -> Formula {
        Formula::IsSet(Box::new(a))
    }
    pub fn member(s: Term, a: Term) -> Formula {
        Formula::In(Box::new(s), Box::new(a))
    }
    pub fn wf_elem(elem: Term, domain: Term, rel: Bind2<Formula>) -> Formula {
        Formula::WfElem {
            elem: Box::new(elem),
            domain: Box::new(domain),
            rel,
        }
    }
    /// Left-associated conjunction; `True` for the empty list.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }
    /// Left-associated disjunction; `False` for the empty list.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Self {
        Expr::Term(t)
    }
}

impl From<Formula> for Expr {
    fn from(f: Formula) -> Self {
        Expr::Formula(f)
    }
}

// ---------------------------------------------------------------------------
// Free variables and name collection

#[derive(Default)]
struct FreeVars {
    bound: Vec<Name>,
    out: BTreeSet<Name>,
    holes: bool,
}

impl FreeVars {
    fn var(&mut self, x: &Name) {
        if !self.bound.contains(x) {
            self.out.insert(x.clone());
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(x) => self.var(x),
            Term::Hole(_) => self.holes = true,
            Term::Empty => {}
            Term::Union(a, b) => {
                self.term(a);
                self.term(b);
            }
            Term::IndexedUnion { var, domain, body } => {
                self.term(domain);
                self.bound.push(var.clone());
                self.term(body);
                self.bound.pop();
            }
            Term::CondSingleton(r, phi) => {
                self.term(r);
                self.formula(phi);
            }
            Term::UniqueElement(a) | Term::Powerset(a) => self.term(a),
            Term::IterReach { start, var, step } => {
                self.term(start);
                self.bound.push(var.clone());
                self.term(step);
                self.bound.pop();
            }
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => {
                self.term(domain);
                self.bind2(rel, Self::formula);
                self.bind2(step, Self::term);
                self.term(arg);
            }
        }
    }

    fn bind2<T>(&mut self, b: &Bind2<T>, f: fn(&mut Self, &T)) {
        self.bound.push(b.first.clone());
        self.bound.push(b.second.clone());
        f(self, &b.body);
        self.bound.pop();
        self.bound.pop();
    }

    fn formula(&mut self, phi: &Formula) {
        match phi {
            Formula::False | Formula::True => {}
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
                self.formula(a);
                self.formula(b);
            }
            Formula::Not(a) => self.formula(a),
            Formula::ExistsIn { var, domain, body } | Formula::ForallIn { var, domain, body } => {
                self.term(domain);
                self.bound.push(var.clone());
                self.formula(body);
                self.bound.pop();
            }
            Formula::Eq(s, t) | Formula::In(s, t) => {
                self.term(s);
                self.term(t);
            }
            Formula::IsSet(a) => self.term(a),
            Formula::WfElem { elem, domain, rel } => {
                self.term(elem);
                self.term(domain);
                self.bind2(rel, Self::formula);
            }
        }
    }
}

/// Collects every variable name occurring in an expression, free or bound.
#[derive(Default)]
pub(crate) struct AllNames(pub BTreeSet<Name>);

impl AllNames {
    pub fn term(&mut self, t: &Term) {
        match t {
            Term::Var(x) => {
                self.0.insert(x.clone());
            }
            Term::Hole(_) | Term::Empty => {}
            Term::Union(a, b) => {
                self.term(a);
                self.term(b);
            }
            Term::IndexedUnion { var, domain, body } => {
                self.0.insert(var.clone());
                self.term(domain);
                self.term(body);
            }
            Term::CondSingleton(r, phi) => {
                self.term(r);
                self.formula(phi);
            }
            Term::UniqueElement(a) | Term::Powerset(a) => self.term(a),
            Term::IterReach { start, var, step } => {
                self.0.insert(var.clone());
                self.term(start);
                self.term(step);
            }
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => {
                self.term(domain);
                self.0.insert(rel.first.clone());
                self.0.insert(rel.second.clone());
                self.formula(&rel.body);
                self.0.insert(step.first.clone());
                self.0.insert(step.second.clone());
                self.term(&step.body);
                self.term(arg);
            }
        }
    }

    pub fn formula(&mut self, phi: &Formula) {
        match phi {
            Formula::False | Formula::True => {}
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
                self.formula(a);
                self.formula(b);
            }
            Formula::Not(a) => self.formula(a),
            Formula::ExistsIn { var, domain, body } | Formula::ForallIn { var, domain, body } => {
                self.0.insert(var.clone());
                self.term(domain);
                self.formula(body);
            }
            Formula::Eq(s, t) | Formula::In(s, t) => {
                self.term(s);
                self.term(t);
            }
            Formula::IsSet(a) => self.term(a),
            Formula::WfElem { elem, domain, rel } => {
                self.term(elem);
                self.term(domain);
                self.0.insert(rel.first.clone());
                self.0.insert(rel.second.clone());
                self.formula(&rel.body);
            }
        }
    }
}

impl Term {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut fv = FreeVars::default();
        fv.term(self);
        fv.out
    }

    pub fn has_free(&self, x: &Name) -> bool {
        self.free_vars().contains(x)
    }

    /// True when some placeholder occurs in the term.
    pub fn has_holes(&self) -> bool {
        let mut fv = FreeVars::default();
        fv.term(self);
        fv.holes
    }

    pub fn subst(&self, x: &Name, s: &Term) -> Term {
        let mut st = Substitution::single(x, s);
        st.add_avoid_term(self);
        st.term(self, &st.initial())
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        Alpha::default().term(self, other)
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut fv = FreeVars::default();
        fv.formula(self);
        fv.out
    }

    pub fn has_free(&self, x: &Name) -> bool {
        self.free_vars().contains(x)
    }

    pub fn has_holes(&self) -> bool {
        let mut fv = FreeVars::default();
        fv.formula(self);
        fv.holes
    }

    pub fn subst(&self, x: &Name, s: &Term) -> Formula {
        let mut st = Substitution::single(x, s);
        st.add_avoid_formula(self);
        st.formula(self, &st.initial())
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        Alpha::default().formula(self, other)
    }
}

impl Expr {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            Expr::Term(t) => t.free_vars(),
            Expr::Formula(f) => f.free_vars(),
        }
    }

    pub fn subst(&self, x: &Name, s: &Term) -> Expr {
        match self {
            Expr::Term(t) => Expr::Term(t.subst(x, s)),
            Expr::Formula(f) => Expr::Formula(f.subst(x, s)),
        }
    }

    pub fn alpha_eq(&self, other: &Expr) -> bool {
        match (self, other) {
            (Expr::Term(a), Expr::Term(b)) => a.alpha_eq(b),
            (Expr::Formula(a), Expr::Formula(b)) => a.alpha_eq(b),
            _ => false,
        }
    }
}

pub fn free_vars(e: &Expr) -> BTreeSet<Name> {
    e.free_vars()
}

pub fn alpha_eq(a: &Expr, b: &Expr) -> bool {
    a.alpha_eq(b)
}

pub fn subst(e: &Expr, x: &Name, s: &Term) -> Expr {
    e.subst(x, s)
}

// ---------------------------------------------------------------------------
// Fresh names

/// Deterministic source of reserved names `_v0, _v1, …`, skipping any name
/// in its avoid set.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    next: usize,
    avoid: BTreeSet<Name>,
}

impl Fresh {
    pub fn new(avoid: BTreeSet<Name>) -> Self {
        Fresh { next: 0, avoid }
    }

    pub fn avoid(&mut self, x: Name) {
        self.avoid.insert(x);
    }

    pub fn avoid_term(&mut self, t: &Term) {
        let mut names = AllNames::default();
        names.term(t);
        self.avoid.extend(names.0);
    }

    pub fn avoid_formula(&mut self, phi: &Formula) {
        let mut names = AllNames::default();
        names.formula(phi);
        self.avoid.extend(names.0);
    }

    pub fn name(&mut self) -> Name {
        loop {
            let candidate = Name::new(format!("_v{}", self.next));
            self.next += 1;
            if self.avoid.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Simultaneous capture-avoiding substitution

type Map = BTreeMap<Name, Term>;

/// Simultaneous substitution of terms for variables and for placeholders.
struct Substitution<'a> {
    vars: Map,
    holes: &'a [Term],
    fresh: Fresh,
}

impl<'a> Substitution<'a> {
    fn single(x: &Name, s: &Term) -> Self {
        let mut fresh = Fresh::default();
        fresh.avoid(x.clone());
        fresh.avoid_term(s);
        let mut vars = Map::new();
        vars.insert(x.clone(), s.clone());
        Substitution {
            vars,
            holes: &[],
            fresh,
        }
    }

    fn holes(args: &'a [Term]) -> Self {
        let mut fresh = Fresh::default();
        for a in args {
            fresh.avoid_term(a);
        }
        Substitution {
            vars: Map::new(),
            holes: args,
            fresh,
        }
    }

    fn add_avoid_term(&mut self, t: &Term) {
        self.fresh.avoid_term(t);
    }

    fn add_avoid_formula(&mut self, phi: &Formula) {
        self.fresh.avoid_formula(phi);
    }

    fn initial(&self) -> Map {
        self.vars.clone()
    }

    /// Decides the name a binder gets under `map`, returning the inner map.
    /// The binder is renamed only when one of the substituted terms that
    /// actually reaches the body mentions it freely.
    fn enter(
        &mut self,
        x: &Name,
        map: &Map,
        body_fv: &BTreeSet<Name>,
        body_holes: bool,
    ) -> (Name, Map) {
        let mut inner = map.clone();
        inner.remove(x);
        let captured = inner
            .iter()
            .any(|(k, v)| body_fv.contains(k) && v.has_free(x))
            || (body_holes && self.holes.iter().any(|h| h.has_free(x)));
        if captured {
            let renamed = self.fresh.name();
            inner.insert(x.clone(), Term::Var(renamed.clone()));
            (renamed, inner)
        } else {
            (x.clone(), inner)
        }
    }

    fn enter_term(&mut self, x: &Name, map: &Map, body: &Term) -> (Name, Map) {
        let mut fv = FreeVars::default();
        fv.term(body);
        self.enter(x, map, &fv.out, fv.holes)
    }

    fn enter_formula(&mut self, x: &Name, map: &Map, body: &Formula) -> (Name, Map) {
        let mut fv = FreeVars::default();
        fv.formula(body);
        self.enter(x, map, &fv.out, fv.holes)
    }

    fn bind2_formula(&mut self, b: &Bind2<Formula>, map: &Map) -> Bind2<Formula> {
        let (first, m1) = self.enter_formula(&b.first, map, &b.body);
        let (second, m2) = self.enter_formula(&b.second, &m1, &b.body);
        Bind2 {
            first,
            second,
            body: Box::new(self.formula(&b.body, &m2)),
        }
    }

    fn bind2_term(&mut self, b: &Bind2<Term>, map: &Map) -> Bind2<Term> {
        let (first, m1) = self.enter_term(&b.first, map, &b.body);
        let (second, m2) = self.enter_term(&b.second, &m1, &b.body);
        Bind2 {
            first,
            second,
            body: Box::new(self.term(&b.body, &m2)),
        }
    }

    fn term(&mut self, t: &Term, map: &Map) -> Term {
        match t {
            Term::Var(x) => map.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Hole(i) => self.holes.get(*i).cloned().unwrap_or_else(|| t.clone()),
            Term::Empty => Term::Empty,
            Term::Union(a, b) => Term::union(self.term(a, map), self.term(b, map)),
            Term::IndexedUnion { var, domain, body } => {
                let domain = self.term(domain, map);
                let (var, inner) = self.enter_term(var, map, body);
                Term::indexed_union(var, domain, self.term(body, &inner))
            }
            Term::CondSingleton(r, phi) => {
                Term::cond_singleton(self.term(r, map), self.formula(phi, map))
            }
            Term::UniqueElement(a) => Term::uniqel(self.term(a, map)),
            Term::Powerset(a) => Term::powerset(self.term(a, map)),
            Term::IterReach { start, var, step } => {
                let start = self.term(start, map);
                let (var, inner) = self.enter_term(var, map, step);
                Term::iter_reach(start, var, self.term(step, &inner))
            }
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => Term::WfRec {
                domain: Box::new(self.term(domain, map)),
                rel: self.bind2_formula(rel, map),
                step: self.bind2_term(step, map),
                arg: Box::new(self.term(arg, map)),
            },
        }
    }

    fn formula(&mut self, phi: &Formula, map: &Map) -> Formula {
        match phi {
            Formula::False => Formula::False,
            Formula::True => Formula::True,
            Formula::Or(a, b) => Formula::or(self.formula(a, map), self.formula(b, map)),
            Formula::And(a, b) => Formula::and(self.formula(a, map), self.formula(b, map)),
            Formula::Implies(a, b) => Formula::implies(self.formula(a, map), self.formula(b, map)),
            Formula::Not(a) => Formula::not(self.formula(a, map)),
            Formula::ExistsIn { var, domain, body } => {
                let domain = self.term(domain, map);
                let (var, inner) = self.enter_formula(var, map, body);
                Formula::exists_in(var, domain, self.formula(body, &inner))
            }
            Formula::ForallIn { var, domain, body } => {
                let domain = self.term(domain, map);
                let (var, inner) = self.enter_formula(var, map, body);
                Formula::forall_in(var, domain, self.formula(body, &inner))
            }
            Formula::Eq(s, t) => Formula::eq(self.term(s, map), self.term(t, map)),
            Formula::IsSet(a) => Formula::is_set(self.term(a, map)),
            Formula::In(s, t) => Formula::member(self.term(s, map), self.term(t, map)),
            Formula::WfElem { elem, domain, rel } => Formula::WfElem {
                elem: Box::new(self.term(elem, map)),
                domain: Box::new(self.term(domain, map)),
                rel: self.bind2_formula(rel, map),
            },
        }
    }
}

/// Simultaneously substitutes `args[i]` for every variable `vars[i]`.
pub fn subst_many_term(t: &Term, pairs: &[(Name, Term)]) -> Term {
    let mut st = Substitution::holes(&[]);
    st.add_avoid_term(t);
    for (x, s) in pairs {
        st.fresh.avoid(x.clone());
        st.fresh.avoid_term(s);
        st.vars.insert(x.clone(), s.clone());
    }
    let map = st.initial();
    st.term(t, &map)
}

/// Formula counterpart of [`subst_many_term`].
pub fn subst_many_formula(phi: &Formula, pairs: &[(Name, Term)]) -> Formula {
    let mut st = Substitution::holes(&[]);
    st.add_avoid_formula(phi);
    for (x, s) in pairs {
        st.fresh.avoid(x.clone());
        st.fresh.avoid_term(s);
        st.vars.insert(x.clone(), s.clone());
    }
    let map = st.initial();
    st.formula(phi, &map)
}

// ---------------------------------------------------------------------------
// α-equivalence

/// Synchronized traversal; each binder pushes the pair of names it binds on
/// either side. Two variables match when they resolve to the same binder
/// depth, or are both free and equal.
#[derive(Default)]
struct Alpha {
    env: Vec<(Name, Name)>,
}

impl Alpha {
    fn var(&self, a: &Name, b: &Name) -> bool {
        let left = self.env.iter().rposition(|(l, _)| l == a);
        let right = self.env.iter().rposition(|(_, r)| r == b);
        match (left, right) {
            (None, None) => a == b,
            (l, r) => l == r,
        }
    }

    fn under<R>(&mut self, pairs: &[(&Name, &Name)], f: impl FnOnce(&mut Self) -> R) -> R {
        for (a, b) in pairs {
            self.env.push(((*a).clone(), (*b).clone()));
        }
        let r = f(self);
        for _ in pairs {
            self.env.pop();
        }
        r
    }

    fn term(&mut self, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => self.var(x, y),
            (Term::Hole(i), Term::Hole(j)) => i == j,
            (Term::Empty, Term::Empty) => true,
            (Term::Union(a1, a2), Term::Union(b1, b2)) => self.term(a1, b1) && self.term(a2, b2),
            (
                Term::IndexedUnion {
                    var: x,
                    domain: d1,
                    body: b1,
                },
                Term::IndexedUnion {
                    var: y,
                    domain: d2,
                    body: b2,
                },
            ) => self.term(d1, d2) && self.under(&[(x, y)], |s| s.term(b1, b2)),
            (Term::CondSingleton(r1, p1), Term::CondSingleton(r2, p2)) => {
                self.term(r1, r2) && self.formula(p1, p2)
            }
            (Term::UniqueElement(a1), Term::UniqueElement(b1))
            | (Term::Powerset(a1), Term::Powerset(b1)) => self.term(a1, b1),
            (
                Term::IterReach {
                    start: s1,
                    var: x,
                    step: f1,
                },
                Term::IterReach {
                    start: s2,
                    var: y,
                    step: f2,
                },
            ) => self.term(s1, s2) && self.under(&[(x, y)], |s| s.term(f1, f2)),
            (
                Term::WfRec {
                    domain: d1,
                    rel: r1,
                    step: f1,
                    arg: a1,
                },
                Term::WfRec {
                    domain: d2,
                    rel: r2,
                    step: f2,
                    arg: a2,
                },
            ) => {
                self.term(d1, d2)
                    && self.under(&[(&r1.first, &r2.first), (&r1.second, &r2.second)], |s| {
                        s.formula(&r1.body, &r2.body)
                    })
                    && self.under(&[(&f1.first, &f2.first), (&f1.second, &f2.second)], |s| {
                        s.term(&f1.body, &f2.body)
                    })
                    && self.term(a1, a2)
            }
            _ => false,
        }
    }

    fn formula(&mut self, a: &Formula, b: &Formula) -> bool {
        match (a, b) {
            (Formula::False, Formula::False) | (Formula::True, Formula::True) => true,
            (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
                self.formula(a1, b1) && self.formula(a2, b2)
            }
            (Formula::Not(a1), Formula::Not(b1)) => self.formula(a1, b1),
            (
                Formula::ExistsIn {
                    var: x,
                    domain: d1,
                    body: b1,
                },
                Formula::ExistsIn {
                    var: y,
                    domain: d2,
                    body: b2,
                },
            )
            | (
                Formula::ForallIn {
                    var: x,
                    domain: d1,
                    body: b1,
                },
                Formula::ForallIn {
                    var: y,
                    domain: d2,
                    body: b2,
                },
            ) => self.term(d1, d2) && self.under(&[(x, y)], |s| s.formula(b1, b2)),
            (Formula::Eq(s1, t1), Formula::Eq(s2, t2))
            | (Formula::In(s1, t1), Formula::In(s2, t2)) => self.term(s1, s2) && self.term(t1, t2),
            (Formula::IsSet(a1), Formula::IsSet(b1)) => self.term(a1, b1),
            (
                Formula::WfElem {
                    elem: e1,
                    domain: d1,
                    rel: r1,
                },
                Formula::WfElem {
                    elem: e2,
                    domain: d2,
                    rel: r2,
                },
            ) => {
                self.term(e1, e2)
                    && self.term(d1, d2)
                    && self.under(&[(&r1.first, &r2.first), (&r1.second, &r2.second)], |s| {
                        s.formula(&r1.body, &r2.body)
                    })
            }
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Well-formedness in a declaration context

/// Judgment checker: each case mirrors one formation rule, extending the
/// context under binders. `holes` is the number of placeholders allowed.
struct Formation<'a> {
    base: &'a DeclContext,
    local: Vec<Name>,
    holes: usize,
}

impl Formation<'_> {
    fn has(&self, x: &Name) -> bool {
        self.local.contains(x) || self.base.contains(x)
    }

    fn extended<R>(&mut self, xs: &[&Name], f: impl FnOnce(&mut Self) -> R) -> R {
        self.local.extend(xs.iter().map(|x| (*x).clone()));
        let r = f(self);
        let keep = self.local.len() - xs.len();
        self.local.truncate(keep);
        r
    }

    fn term(&mut self, t: &Term) -> bool {
        match t {
            Term::Var(x) => self.has(x),
            Term::Hole(i) => *i < self.holes,
            Term::Empty => true,
            Term::Union(a, b) => self.term(a) && self.term(b),
            Term::IndexedUnion { var, domain, body } => {
                self.term(domain) && self.extended(&[var], |s| s.term(body))
            }
            Term::CondSingleton(r, phi) => self.term(r) && self.formula(phi),
            Term::UniqueElement(a) | Term::Powerset(a) => self.term(a),
            Term::IterReach { start, var, step } => {
                self.term(start) && self.extended(&[var], |s| s.term(step))
            }
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => {
                self.term(domain)
                    && self.extended(&[&rel.first, &rel.second], |s| s.formula(&rel.body))
                    && self.extended(&[&step.first, &step.second], |s| s.term(&step.body))
                    && self.term(arg)
            }
        }
    }

    fn formula(&mut self, phi: &Formula) -> bool {
        match phi {
            Formula::False | Formula::True => true,
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
                self.formula(a) && self.formula(b)
            }
            Formula::Not(a) => self.formula(a),
            Formula::ExistsIn { var, domain, body } | Formula::ForallIn { var, domain, body } => {
                self.term(domain) && self.extended(&[var], |s| s.formula(body))
            }
            Formula::Eq(s, t) | Formula::In(s, t) => self.term(s) && self.term(t),
            Formula::IsSet(a) => self.term(a),
            Formula::WfElem { elem, domain, rel } => {
                self.term(elem)
                    && self.term(domain)
                    && self.extended(&[&rel.first, &rel.second], |s| s.formula(&rel.body))
            }
        }
    }
}

/// `γ ⊢ᵗ t`
pub fn is_term_over(ctx: &DeclContext, t: &Term) -> bool {
    Formation {
        base: ctx,
        local: Vec::new(),
        holes: 0,
    }
    .term(t)
}

/// `γ ⊢ᵖ φ`
pub fn is_formula_over(ctx: &DeclContext, phi: &Formula) -> bool {
    Formation {
        base: ctx,
        local: Vec::new(),
        holes: 0,
    }
    .formula(phi)
}

// ---------------------------------------------------------------------------
// Abstractions

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("arity mismatch: expected {expected} argument(s), found {found}")]
pub struct ArityMismatch {
    pub expected: usize,
    pub found: usize,
}

/// An n-ary abstracted term: a term that may mention placeholders
/// `z_0 … z_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractedTerm {
    pub arity: usize,
    pub body: Term,
}

/// An n-ary abstracted formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractedFormula {
    pub arity: usize,
    pub body: Formula,
}

impl AbstractedTerm {
    pub fn new(arity: usize, body: Term) -> Self {
        AbstractedTerm { arity, body }
    }

    /// `x⃗. t`: turns the named variables into placeholders.
    pub fn abstracting(vars: &[Name], body: &Term) -> Self {
        let pairs: Vec<_> = vars
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), Term::Hole(i)))
            .collect();
        AbstractedTerm {
            arity: vars.len(),
            body: subst_many_term(body, &pairs),
        }
    }

    pub fn apply(&self, args: &[Term]) -> Result<Term, ArityMismatch> {
        check_arity(self.arity, args)?;
        let mut st = Substitution::holes(args);
        st.add_avoid_term(&self.body);
        Ok(st.term(&self.body, &Map::new()))
    }

    /// Over `γ`: free variables in `γ`, placeholders below the arity.
    pub fn is_over(&self, ctx: &DeclContext) -> bool {
        Formation {
            base: ctx,
            local: Vec::new(),
            holes: self.arity,
        }
        .term(&self.body)
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.body.free_vars()
    }

    pub fn alpha_eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.body.alpha_eq(&other.body)
    }
}

impl AbstractedFormula {
    pub fn new(arity: usize, body: Formula) -> Self {
        AbstractedFormula { arity, body }
    }

    pub fn abstracting(vars: &[Name], body: &Formula) -> Self {
        let pairs: Vec<_> = vars
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), Term::Hole(i)))
            .collect();
        AbstractedFormula {
            arity: vars.len(),
            body: subst_many_formula(body, &pairs),
        }
    }

    pub fn apply(&self, args: &[Term]) -> Result<Formula, ArityMismatch> {
        check_arity(self.arity, args)?;
        let mut st = Substitution::holes(args);
        st.add_avoid_formula(&self.body);
        Ok(st.formula(&self.body, &Map::new()))
    }

    pub fn is_over(&self, ctx: &DeclContext) -> bool {
        Formation {
            base: ctx,
            local: Vec::new(),
            holes: self.arity,
        }
        .formula(&self.body)
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.body.free_vars()
    }

    pub fn alpha_eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.body.alpha_eq(&other.body)
    }
}

fn check_arity(arity: usize, args: &[Term]) -> Result<(), ArityMismatch> {
    if arity == args.len() {
        Ok(())
    } else {
        Err(ArityMismatch {
            expected: arity,
            found: args.len(),
        })
    }
}

/// An abstraction of either category.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Abstraction {
    Term(AbstractedTerm),
    Formula(AbstractedFormula),
}

pub fn apply_abstraction(f: &Abstraction, args: &[Term]) -> Result<Expr, ArityMismatch> {
    match f {
        Abstraction::Term(t) => t.apply(args).map(Expr::Term),
        Abstraction::Formula(p) => p.apply(args).map(Expr::Formula),
    }
}

// ---------------------------------------------------------------------------
// Display renaming

/// Renames every reserved binder (`_v…`) to an ordinary name not occurring
/// in the expression. Only bound names are touched, so the result is
/// α-equivalent to the input.
pub fn rename_reserved_formula(phi: &Formula) -> Formula {
    let mut names = AllNames::default();
    names.formula(phi);
    let mut r = Renamer::new(names.0);
    r.formula(phi, &BTreeMap::new())
}

pub fn rename_reserved_term(t: &Term) -> Term {
    let mut names = AllNames::default();
    names.term(t);
    let mut r = Renamer::new(names.0);
    r.term(t, &BTreeMap::new())
}

struct Renamer {
    used: BTreeSet<Name>,
    next: usize,
}

type Rn = BTreeMap<Name, Name>;

impl Renamer {
    fn new(used: BTreeSet<Name>) -> Self {
        Renamer { used, next: 0 }
    }

    fn bind(&mut self, x: &Name, map: &Rn) -> (Name, Rn) {
        let mut inner = map.clone();
        if x.is_reserved() {
            let fresh = loop {
                let candidate = Name::new(format!("v{}", self.next));
                self.next += 1;
                if self.used.insert(candidate.clone()) {
                    break candidate;
                }
            };
            inner.insert(x.clone(), fresh.clone());
            (fresh, inner)
        } else {
            inner.remove(x);
            (x.clone(), inner)
        }
    }

    fn bind2_formula(&mut self, b: &Bind2<Formula>, map: &Rn) -> Bind2<Formula> {
        let (first, m1) = self.bind(&b.first, map);
        let (second, m2) = self.bind(&b.second, &m1);
        Bind2 {
            first,
            second,
            body: Box::new(self.formula(&b.body, &m2)),
        }
    }

    fn bind2_term(&mut self, b: &Bind2<Term>, map: &Rn) -> Bind2<Term> {
        let (first, m1) = self.bind(&b.first, map);
        let (second, m2) = self.bind(&b.second, &m1);
        Bind2 {
            first,
            second,
            body: Box::new(self.term(&b.body, &m2)),
        }
    }

    fn term(&mut self, t: &Term, map: &Rn) -> Term {
        match t {
            Term::Var(x) => Term::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::Hole(_) | Term::Empty => t.clone(),
            Term::Union(a, b) => Term::union(self.term(a, map), self.term(b, map)),
            Term::IndexedUnion { var, domain, body } => {
                let domain = self.term(domain, map);
                let (var, inner) = self.bind(var, map);
                Term::indexed_union(var, domain, self.term(body, &inner))
            }
            Term::CondSingleton(r, phi) => {
                Term::cond_singleton(self.term(r, map), self.formula(phi, map))
            }
            Term::UniqueElement(a) => Term::uniqel(self.term(a, map)),
            Term::Powerset(a) => Term::powerset(self.term(a, map)),
            Term::IterReach { start, var, step } => {
                let start = self.term(start, map);
                let (var, inner) = self.bind(var, map);
                Term::iter_reach(start, var, self.term(step, &inner))
            }
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => Term::WfRec {
                domain: Box::new(self.term(domain, map)),
                rel: self.bind2_formula(rel, map),
                step: self.bind2_term(step, map),
                arg: Box::new(self.term(arg, map)),
            },
        }
    }

    fn formula(&mut self, phi: &Formula, map: &Rn) -> Formula {
        match phi {
            Formula::False | Formula::True => phi.clone(),
            Formula::Or(a, b) => Formula::or(self.formula(a, map), self.formula(b, map)),
            Formula::And(a, b) => Formula::and(self.formula(a, map), self.formula(b, map)),
            Formula::Implies(a, b) => Formula::implies(self.formula(a, map), self.formula(b, map)),
            Formula::Not(a) => Formula::not(self.formula(a, map)),
            Formula::ExistsIn { var, domain, body } => {
                let domain = self.term(domain, map);
                let (var, inner) = self.bind(var, map);
                Formula::exists_in(var, domain, self.formula(body, &inner))
            }
            Formula::ForallIn { var, domain, body } => {
                let domain = self.term(domain, map);
                let (var, inner) = self.bind(var, map);
                Formula::forall_in(var, domain, self.formula(body, &inner))
            }
            Formula::Eq(s, t) => Formula::eq(self.term(s, map), self.term(t, map)),
            Formula::IsSet(a) => Formula::is_set(self.term(a, map)),
            Formula::In(s, t) => Formula::member(self.term(s, map), self.term(t, map)),
            Formula::WfElem { elem, domain, rel } => Formula::WfElem {
                elem: Box::new(self.term(elem, map)),
                domain: Box::new(self.term(domain, map)),
                rel: self.bind2_formula(rel, map),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn free_vars_of_constants_and_binders() {
        assert!(Term::Empty.free_vars().is_empty());
        let t = Term::indexed_union("x", v("A"), Term::singleton(v("x")));
        assert_eq!(t.free_vars(), decls(["A"]));
    }

    #[test]
    fn free_vars_of_wf_elem() {
        // x ∈ A ∧ y = w under the x,y binders
        let rel = Formula::and(Formula::member(v("x"), v("A")), Formula::eq(v("y"), v("w")));
        let phi = Formula::wf_elem(v("s"), v("A"), Bind2::new("x", "y", rel));
        assert_eq!(phi.free_vars(), decls(["s", "A", "w"]));
    }

    #[test]
    fn formation_examples() {
        assert!(!is_term_over(&decls([]), &v("x")));
        assert!(is_term_over(&decls([]), &Term::Empty));
        assert!(is_term_over(&decls(["X"]), &Term::powerset(v("X"))));
        assert!(!is_term_over(&decls([]), &Term::Hole(0)));
    }

    #[test]
    fn subst_simple() {
        let t = Term::union(v("x"), v("y"));
        assert_eq!(
            t.subst(&"x".into(), &Term::Empty),
            Term::union(Term::Empty, v("y"))
        );
    }

    #[test]
    fn subst_avoids_capture() {
        let t = Term::indexed_union("x", v("A"), Term::singleton(v("y")));
        let out = t.subst(&"y".into(), &v("x"));
        match &out {
            Term::IndexedUnion { var, domain, body } => {
                assert_ne!(var.as_str(), "x");
                assert_eq!(**domain, v("A"));
                assert_eq!(**body, Term::singleton(v("x")));
            }
            other => panic!("unexpected {other:?}"),
        }
        let expected = Term::indexed_union("q", v("A"), Term::singleton(v("x")));
        assert!(out.alpha_eq(&expected));
    }

    #[test]
    fn subst_under_quantifier() {
        let phi = Formula::forall_in("x", v("A"), Formula::eq(v("x"), v("z")));
        let out = phi.subst(&"z".into(), &Term::Empty);
        assert_eq!(
            out,
            Formula::forall_in("x", v("A"), Formula::eq(v("x"), Term::Empty))
        );
    }

    #[test]
    fn subst_does_not_touch_bound_occurrence() {
        let phi = Formula::forall_in("x", v("x"), Formula::eq(v("x"), v("x")));
        let out = phi.subst(&"x".into(), &Term::Empty);
        assert_eq!(
            out,
            Formula::forall_in("x", Term::Empty, Formula::eq(v("x"), v("x")))
        );
    }

    #[test]
    fn alpha_examples() {
        let a = Formula::forall_in("x", v("A"), Formula::eq(v("x"), v("x")));
        let b = Formula::forall_in("y", v("A"), Formula::eq(v("y"), v("y")));
        let c = Formula::forall_in("y", v("A"), Formula::eq(v("y"), v("x")));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        let p = Term::iter_reach(v("s"), "x", Term::powerset(v("x")));
        let q = Term::iter_reach(v("s"), "w", Term::powerset(v("w")));
        assert!(p.alpha_eq(&q));
    }

    #[test]
    fn alpha_distinguishes_binder_order() {
        let r1 = Bind2::new("x", "y", Formula::member(v("x"), v("y")));
        let r2 = Bind2::new("a", "b", Formula::member(v("b"), v("a")));
        let f1 = Formula::wf_elem(v("s"), v("A"), r1.clone());
        let f2 = Formula::wf_elem(v("s"), v("A"), r2);
        assert!(!f1.alpha_eq(&f2));
        let r3 = Bind2::new("p", "q", Formula::member(v("p"), v("q")));
        assert!(f1.alpha_eq(&Formula::wf_elem(v("s"), v("A"), r3)));
    }

    #[test]
    fn alpha_shadowing() {
        // ∀x∈A.∀x∈B. x = x  vs  ∀x∈A.∀y∈B. y = y
        let a = Formula::forall_in(
            "x",
            v("A"),
            Formula::forall_in("x", v("B"), Formula::eq(v("x"), v("x"))),
        );
        let b = Formula::forall_in(
            "x",
            v("A"),
            Formula::forall_in("y", v("B"), Formula::eq(v("y"), v("y"))),
        );
        let c = Formula::forall_in(
            "x",
            v("A"),
            Formula::forall_in("y", v("B"), Formula::eq(v("x"), v("y"))),
        );
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn abstraction_examples() {
        let f = AbstractedTerm::new(1, Term::powerset(Term::Hole(0)));
        assert_eq!(
            f.apply(&[Term::Empty]).unwrap(),
            Term::powerset(Term::Empty)
        );
        let p = AbstractedFormula::new(2, Formula::member(Term::Hole(0), Term::Hole(1)));
        assert_eq!(
            p.apply(&[v("x"), v("A")]).unwrap(),
            Formula::member(v("x"), v("A"))
        );
        let c = AbstractedTerm::new(1, Term::Empty);
        assert_eq!(c.apply(&[v("t")]).unwrap(), Term::Empty);
        assert_eq!(
            c.apply(&[]),
            Err(ArityMismatch {
                expected: 1,
                found: 0
            })
        );
    }

    #[test]
    fn abstraction_application_avoids_capture() {
        // z0. ∀x∈A. x ∈ z0   applied to x
        let p = AbstractedFormula::new(
            1,
            Formula::forall_in("x", v("A"), Formula::member(v("x"), Term::Hole(0))),
        );
        let out = p.apply(&[v("x")]).unwrap();
        let expected = Formula::forall_in("y", v("A"), Formula::member(v("y"), v("x")));
        assert!(out.alpha_eq(&expected));
    }

    #[test]
    fn abstracting_round_trip() {
        let body = Formula::member(v("x"), v("B"));
        let p = AbstractedFormula::abstracting(&["x".into()], &body);
        assert_eq!(p.body, Formula::member(Term::Hole(0), v("B")));
        assert_eq!(p.apply(&[v("x")]).unwrap(), body);
    }

    #[test]
    fn reserved_names() {
        assert!(Name::user("_v0").is_err());
        assert!(Name::user("").is_err());
        assert!(Name::user("x").is_ok());
    }

    #[test]
    fn rename_reserved_binders_only() {
        let phi = Formula::forall_in("_v0", v("v0"), Formula::member(v("_v0"), v("B")));
        let out = rename_reserved_formula(&phi);
        assert!(out.alpha_eq(&phi));
        match out {
            Formula::ForallIn { var, .. } => assert_eq!(var.as_str(), "v1"),
            _ => unreachable!(),
        }
    }
}
