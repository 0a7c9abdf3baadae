//! Abbreviations on top of the core language and their expansion.
//!
//! [`SugarTerm`] and [`SugarFormula`] embed every core constructor plus the
//! fixed list of abbreviations. [`expand`] rewrites them into core syntax;
//! binders introduced by the rewriting come from a [`Fresh`] supply seeded
//! with every name of the input, so they are reserved and never escape.

use std::collections::BTreeSet;

use crate::syntax::{Bind2, Expr, Formula, Fresh, Name, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SugarTerm {
    Var(Name),
    Empty,
    Union(Box<SugarTerm>, Box<SugarTerm>),
    IndexedUnion(Name, Box<SugarTerm>, Box<SugarTerm>),
    CondSingleton(Box<SugarTerm>, Box<SugarFormula>),
    UniqueElement(Box<SugarTerm>),
    IterReach(Box<SugarTerm>, Name, Box<SugarTerm>),
    WfRec {
        domain: Box<SugarTerm>,
        rel: (Name, Name, Box<SugarFormula>),
        step: (Name, Name, Box<SugarTerm>),
        arg: Box<SugarTerm>,
    },
    Powerset(Box<SugarTerm>),

    /// `{x ∈ A | P(x)}`
    Separation(Name, Box<SugarTerm>, Box<SugarFormula>),
    /// `{r}`
    Singleton(Box<SugarTerm>),
    /// `{r₀, …, r_{n−1}}`
    FiniteSet(Vec<SugarTerm>),
    /// `{F(x⃗) | x₀ ∈ A₀, x₁ ∈ A₁(x₀), … | P(x⃗)}`; the filter is optional.
    Replacement {
        binders: Vec<(Name, SugarTerm)>,
        body: Box<SugarTerm>,
        filter: Option<Box<SugarFormula>>,
    },
    Intersection(Box<SugarTerm>, Box<SugarTerm>),
    /// `℩x ∈ A. P(x)`
    Iota(Name, Box<SugarTerm>, Box<SugarFormula>),
    /// `⋃𝒜`
    BigUnion(Box<SugarTerm>),
    /// `A₀ ∪ ⋯ ∪ A_{n−1}`
    FiniteUnion(Vec<SugarTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SugarFormula {
    False,
    True,
    Or(Box<SugarFormula>, Box<SugarFormula>),
    And(Box<SugarFormula>, Box<SugarFormula>),
    Implies(Box<SugarFormula>, Box<SugarFormula>),
    Not(Box<SugarFormula>),
    ExistsIn(Name, Box<SugarTerm>, Box<SugarFormula>),
    ForallIn(Name, Box<SugarTerm>, Box<SugarFormula>),
    Eq(Box<SugarTerm>, Box<SugarTerm>),
    IsSet(Box<SugarTerm>),
    In(Box<SugarTerm>, Box<SugarTerm>),
    WfElem {
        elem: Box<SugarTerm>,
        domain: Box<SugarTerm>,
        rel: (Name, Name, Box<SugarFormula>),
    },

    Iff(Box<SugarFormula>, Box<SugarFormula>),
    ExistsUnique(Name, Box<SugarTerm>, Box<SugarFormula>),
    Subseteq(Box<SugarTerm>, Box<SugarTerm>),
    /// Nonsense-convention prerequisite `NC(φ, r)`.
    Nc(Box<SugarFormula>, Box<SugarTerm>),
    FiniteOr(Vec<SugarFormula>),
    FiniteAnd(Vec<SugarFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SugaredExpr {
    Term(SugarTerm),
    Formula(SugarFormula),
}

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

impl SugarTerm {
    pub fn var(x: impl Into<Name>) -> Self {
        SugarTerm::Var(x.into())
    }
}

// ---------------------------------------------------------------------------
// Embedding core syntax

impl From<&Term> for SugarTerm {
    fn from(t: &Term) -> Self {
        match t {
            Term::Var(x) => SugarTerm::Var(x.clone()),
            // Placeholders have no surface form; they only live inside
            // abstraction parameters, which are built after expansion.
            Term::Hole(i) => panic!("placeholder z{i} cannot be embedded in sugared syntax"),
            Term::Empty => SugarTerm::Empty,
            Term::Union(a, b) => SugarTerm::Union(bx((&**a).into()), bx((&**b).into())),
            Term::IndexedUnion { var, domain, body } => {
                SugarTerm::IndexedUnion(var.clone(), bx((&**domain).into()), bx((&**body).into()))
            }
            Term::CondSingleton(r, phi) => {
                SugarTerm::CondSingleton(bx((&**r).into()), bx((&**phi).into()))
            }
            Term::UniqueElement(a) => SugarTerm::UniqueElement(bx((&**a).into())),
            Term::IterReach { start, var, step } => {
                SugarTerm::IterReach(bx((&**start).into()), var.clone(), bx((&**step).into()))
            }
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => SugarTerm::WfRec {
                domain: bx((&**domain).into()),
                rel: (
                    rel.first.clone(),
                    rel.second.clone(),
                    bx((&*rel.body).into()),
                ),
                step: (
                    step.first.clone(),
                    step.second.clone(),
                    bx((&*step.body).into()),
                ),
                arg: bx((&**arg).into()),
            },
            Term::Powerset(a) => SugarTerm::Powerset(bx((&**a).into())),
        }
    }
}

impl From<&Formula> for SugarFormula {
    fn from(phi: &Formula) -> Self {
        match phi {
            Formula::False => SugarFormula::False,
            Formula::True => SugarFormula::True,
            Formula::Or(a, b) => SugarFormula::Or(bx((&**a).into()), bx((&**b).into())),
            Formula::And(a, b) => SugarFormula::And(bx((&**a).into()), bx((&**b).into())),
            Formula::Implies(a, b) => SugarFormula::Implies(bx((&**a).into()), bx((&**b).into())),
            Formula::Not(a) => SugarFormula::Not(bx((&**a).into())),
            Formula::ExistsIn { var, domain, body } => {
                SugarFormula::ExistsIn(var.clone(), bx((&**domain).into()), bx((&**body).into()))
            }
            Formula::ForallIn { var, domain, body } => {
                SugarFormula::ForallIn(var.clone(), bx((&**domain).into()), bx((&**body).into()))
            }
            Formula::Eq(s, t) => SugarFormula::Eq(bx((&**s).into()), bx((&**t).into())),
            Formula::IsSet(a) => SugarFormula::IsSet(bx((&**a).into())),
            Formula::In(s, t) => SugarFormula::In(bx((&**s).into()), bx((&**t).into())),
            Formula::WfElem { elem, domain, rel } => SugarFormula::WfElem {
                elem: bx((&**elem).into()),
                domain: bx((&**domain).into()),
                rel: (
                    rel.first.clone(),
                    rel.second.clone(),
                    bx((&*rel.body).into()),
                ),
            },
        }
    }
}

impl From<Term> for SugarTerm {
    fn from(t: Term) -> Self {
        (&t).into()
    }
}

impl From<Formula> for SugarFormula {
    fn from(phi: Formula) -> Self {
        (&phi).into()
    }
}

// ---------------------------------------------------------------------------
// Names

#[derive(Default)]
struct Names {
    all: BTreeSet<Name>,
    free: BTreeSet<Name>,
    bound: Vec<Name>,
}

impl Names {
    fn var(&mut self, x: &Name) {
        self.all.insert(x.clone());
        if !self.bound.contains(x) {
            self.free.insert(x.clone());
        }
    }

    fn under(&mut self, xs: &[&Name], f: impl FnOnce(&mut Self)) {
        for x in xs {
            self.all.insert((*x).clone());
            self.bound.push((*x).clone());
        }
        f(self);
        let keep = self.bound.len() - xs.len();
        self.bound.truncate(keep);
    }

    fn term(&mut self, t: &SugarTerm) {
        use SugarTerm as S;
        match t {
            S::Var(x) => self.var(x),
            S::Empty => {}
            S::Union(a, b) | S::Intersection(a, b) => {
                self.term(a);
                self.term(b);
            }
            S::IndexedUnion(x, a, b) | S::IterReach(a, x, b) => {
                self.term(a);
                self.under(&[x], |s| s.term(b));
            }
            S::CondSingleton(r, phi) => {
                self.term(r);
                self.formula(phi);
            }
            S::UniqueElement(a) | S::Powerset(a) | S::Singleton(a) | S::BigUnion(a) => self.term(a),
            S::WfRec {
                domain,
                rel,
                step,
                arg,
            } => {
                self.term(domain);
                self.under(&[&rel.0, &rel.1], |s| s.formula(&rel.2));
                self.under(&[&step.0, &step.1], |s| s.term(&step.2));
                self.term(arg);
            }
            S::Separation(x, a, p) | S::Iota(x, a, p) => {
                self.term(a);
                self.under(&[x], |s| s.formula(p));
            }
            S::FiniteSet(items) | S::FiniteUnion(items) => items.iter().for_each(|i| self.term(i)),
            S::Replacement {
                binders,
                body,
                filter,
            } => self.replacement(binders, body, filter.as_deref()),
        }
    }

    fn replacement(
        &mut self,
        binders: &[(Name, SugarTerm)],
        body: &SugarTerm,
        filter: Option<&SugarFormula>,
    ) {
        match binders.split_first() {
            None => {
                self.term(body);
                if let Some(p) = filter {
                    self.formula(p);
                }
            }
            Some(((x, dom), rest)) => {
                self.term(dom);
                self.under(&[x], |s| s.replacement(rest, body, filter));
            }
        }
    }

    fn formula(&mut self, phi: &SugarFormula) {
        use SugarFormula as F;
        match phi {
            F::False | F::True => {}
            F::Or(a, b) | F::And(a, b) | F::Implies(a, b) | F::Iff(a, b) => {
                self.formula(a);
                self.formula(b);
            }
            F::Not(a) => self.formula(a),
            F::ExistsIn(x, a, p) | F::ForallIn(x, a, p) | F::ExistsUnique(x, a, p) => {
                self.term(a);
                self.under(&[x], |s| s.formula(p));
            }
            F::Eq(s, t) | F::In(s, t) | F::Subseteq(s, t) => {
                self.term(s);
                self.term(t);
            }
            F::IsSet(a) => self.term(a),
            F::WfElem { elem, domain, rel } => {
                self.term(elem);
                self.term(domain);
                self.under(&[&rel.0, &rel.1], |s| s.formula(&rel.2));
            }
            F::Nc(p, r) => {
                self.formula(p);
                self.term(r);
            }
            F::FiniteOr(items) | F::FiniteAnd(items) => items.iter().for_each(|i| self.formula(i)),
        }
    }
}

impl SugarTerm {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut n = Names::default();
        n.term(self);
        n.free
    }

    fn all_names(&self) -> BTreeSet<Name> {
        let mut n = Names::default();
        n.term(self);
        n.all
    }

    /// Capture-avoiding substitution on sugared syntax.
    pub fn subst(&self, x: &Name, s: &SugarTerm) -> SugarTerm {
        let mut avoid = self.all_names();
        avoid.extend(s.all_names());
        avoid.insert(x.clone());
        let mut st = SugarSubst {
            target: x.clone(),
            with: s.clone(),
            with_fv: s.free_vars(),
            fresh: Fresh::new(avoid),
        };
        st.term(self, &Vec::new(), true)
    }
}

impl SugarFormula {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut n = Names::default();
        n.formula(self);
        n.free
    }

    fn all_names(&self) -> BTreeSet<Name> {
        let mut n = Names::default();
        n.formula(self);
        n.all
    }

    pub fn subst(&self, x: &Name, s: &SugarTerm) -> SugarFormula {
        let mut avoid = self.all_names();
        avoid.extend(s.all_names());
        avoid.insert(x.clone());
        let mut st = SugarSubst {
            target: x.clone(),
            with: s.clone(),
            with_fv: s.free_vars(),
            fresh: Fresh::new(avoid),
        };
        st.formula(self, &Vec::new(), true)
    }
}

impl SugaredExpr {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            SugaredExpr::Term(t) => t.free_vars(),
            SugaredExpr::Formula(f) => f.free_vars(),
        }
    }
}

// ---------------------------------------------------------------------------
// Substitution on sugared syntax

/// Single-variable substitution. `renames` maps binders renamed on the way
/// down; `active` is false once the target has been shadowed.
struct SugarSubst {
    target: Name,
    with: SugarTerm,
    with_fv: BTreeSet<Name>,
    fresh: Fresh,
}

type Renames = Vec<(Name, Name)>;

impl SugarSubst {
    /// Binder `x`: stop substituting if it shadows the target, rename it if
    /// it would capture a free variable of the substituted term.
    fn bind(&mut self, x: &Name, renames: &Renames, active: bool) -> (Name, Renames, bool) {
        if !active || *x == self.target {
            let mut r = renames.clone();
            r.push((x.clone(), x.clone()));
            return (x.clone(), r, false);
        }
        let mut r = renames.clone();
        if self.with_fv.contains(x) {
            let y = self.fresh.name();
            r.push((x.clone(), y.clone()));
            (y, r, true)
        } else {
            r.push((x.clone(), x.clone()));
            (x.clone(), r, true)
        }
    }

    fn var(&self, x: &Name, renames: &Renames, active: bool) -> SugarTerm {
        if let Some((_, y)) = renames.iter().rev().find(|(from, _)| from == x) {
            return SugarTerm::Var(y.clone());
        }
        if active && *x == self.target {
            self.with.clone()
        } else {
            SugarTerm::Var(x.clone())
        }
    }

    fn term(&mut self, t: &SugarTerm, rn: &Renames, on: bool) -> SugarTerm {
        use SugarTerm as S;
        match t {
            S::Var(x) => self.var(x, rn, on),
            S::Empty => S::Empty,
            S::Union(a, b) => S::Union(bx(self.term(a, rn, on)), bx(self.term(b, rn, on))),
            S::Intersection(a, b) => {
                S::Intersection(bx(self.term(a, rn, on)), bx(self.term(b, rn, on)))
            }
            S::IndexedUnion(x, a, b) => {
                let a = self.term(a, rn, on);
                let (x, rn2, on2) = self.bind(x, rn, on);
                S::IndexedUnion(x, bx(a), bx(self.term(b, &rn2, on2)))
            }
            S::IterReach(a, x, b) => {
                let a = self.term(a, rn, on);
                let (x, rn2, on2) = self.bind(x, rn, on);
                S::IterReach(bx(a), x, bx(self.term(b, &rn2, on2)))
            }
            S::CondSingleton(r, phi) => {
                S::CondSingleton(bx(self.term(r, rn, on)), bx(self.formula(phi, rn, on)))
            }
            S::UniqueElement(a) => S::UniqueElement(bx(self.term(a, rn, on))),
            S::Powerset(a) => S::Powerset(bx(self.term(a, rn, on))),
            S::Singleton(a) => S::Singleton(bx(self.term(a, rn, on))),
            S::BigUnion(a) => S::BigUnion(bx(self.term(a, rn, on))),
            S::WfRec {
                domain,
                rel,
                step,
                arg,
            } => {
                let domain = self.term(domain, rn, on);
                let (r0, rn1, on1) = self.bind(&rel.0, rn, on);
                let (r1, rn2, on2) = self.bind(&rel.1, &rn1, on1);
                let rel_body = self.formula(&rel.2, &rn2, on2);
                let (s0, sn1, so1) = self.bind(&step.0, rn, on);
                let (s1, sn2, so2) = self.bind(&step.1, &sn1, so1);
                let step_body = self.term(&step.2, &sn2, so2);
                S::WfRec {
                    domain: bx(domain),
                    rel: (r0, r1, bx(rel_body)),
                    step: (s0, s1, bx(step_body)),
                    arg: bx(self.term(arg, rn, on)),
                }
            }
            S::Separation(x, a, p) => {
                let a = self.term(a, rn, on);
                let (x, rn2, on2) = self.bind(x, rn, on);
                S::Separation(x, bx(a), bx(self.formula(p, &rn2, on2)))
            }
            S::Iota(x, a, p) => {
                let a = self.term(a, rn, on);
                let (x, rn2, on2) = self.bind(x, rn, on);
                S::Iota(x, bx(a), bx(self.formula(p, &rn2, on2)))
            }
            S::FiniteSet(items) => {
                S::FiniteSet(items.iter().map(|i| self.term(i, rn, on)).collect())
            }
            S::FiniteUnion(items) => {
                S::FiniteUnion(items.iter().map(|i| self.term(i, rn, on)).collect())
            }
            S::Replacement {
                binders,
                body,
                filter,
            } => {
                let mut rn = rn.clone();
                let mut on = on;
                let mut out = Vec::with_capacity(binders.len());
                for (x, dom) in binders {
                    let dom = self.term(dom, &rn, on);
                    let (x, rn2, on2) = self.bind(x, &rn, on);
                    out.push((x, dom));
                    rn = rn2;
                    on = on2;
                }
                S::Replacement {
                    binders: out,
                    body: bx(self.term(body, &rn, on)),
                    filter: filter.as_ref().map(|p| bx(self.formula(p, &rn, on))),
                }
            }
        }
    }

    fn formula(&mut self, phi: &SugarFormula, rn: &Renames, on: bool) -> SugarFormula {
        use SugarFormula as F;
        let bin = |s: &mut Self, a: &F, b: &F| (bx(s.formula(a, rn, on)), bx(s.formula(b, rn, on)));
        match phi {
            F::False => F::False,
            F::True => F::True,
            F::Or(a, b) => {
                let (a, b) = bin(self, a, b);
                F::Or(a, b)
            }
            F::And(a, b) => {
                let (a, b) = bin(self, a, b);
                F::And(a, b)
            }
            F::Implies(a, b) => {
                let (a, b) = bin(self, a, b);
                F::Implies(a, b)
            }
            F::Iff(a, b) => {
                let (a, b) = bin(self, a, b);
                F::Iff(a, b)
            }
            F::Not(a) => F::Not(bx(self.formula(a, rn, on))),
            F::ExistsIn(x, a, p) | F::ForallIn(x, a, p) | F::ExistsUnique(x, a, p) => {
                let a = bx(self.term(a, rn, on));
                let (y, rn2, on2) = self.bind(x, rn, on);
                let p = bx(self.formula(p, &rn2, on2));
                match phi {
                    F::ExistsIn(..) => F::ExistsIn(y, a, p),
                    F::ForallIn(..) => F::ForallIn(y, a, p),
                    _ => F::ExistsUnique(y, a, p),
                }
            }
            F::Eq(s, t) => F::Eq(bx(self.term(s, rn, on)), bx(self.term(t, rn, on))),
            F::In(s, t) => F::In(bx(self.term(s, rn, on)), bx(self.term(t, rn, on))),
            F::Subseteq(s, t) => F::Subseteq(bx(self.term(s, rn, on)), bx(self.term(t, rn, on))),
            F::IsSet(a) => F::IsSet(bx(self.term(a, rn, on))),
            F::WfElem { elem, domain, rel } => {
                let elem = self.term(elem, rn, on);
                let domain = self.term(domain, rn, on);
                let (r0, rn1, on1) = self.bind(&rel.0, rn, on);
                let (r1, rn2, on2) = self.bind(&rel.1, &rn1, on1);
                F::WfElem {
                    elem: bx(elem),
                    domain: bx(domain),
                    rel: (r0, r1, bx(self.formula(&rel.2, &rn2, on2))),
                }
            }
            F::Nc(p, r) => F::Nc(bx(self.formula(p, rn, on)), bx(self.term(r, rn, on))),
            F::FiniteOr(items) => {
                F::FiniteOr(items.iter().map(|i| self.formula(i, rn, on)).collect())
            }
            F::FiniteAnd(items) => {
                F::FiniteAnd(items.iter().map(|i| self.formula(i, rn, on)).collect())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Expansion

struct Expander {
    fresh: Fresh,
}

impl Expander {
    fn term(&mut self, t: &SugarTerm) -> Term {
        use SugarTerm as S;
        match t {
            S::Var(x) => Term::Var(x.clone()),
            S::Empty => Term::Empty,
            S::Union(a, b) => Term::union(self.term(a), self.term(b)),
            S::IndexedUnion(x, a, b) => Term::indexed_union(x.clone(), self.term(a), self.term(b)),
            S::CondSingleton(r, phi) => Term::cond_singleton(self.term(r), self.formula(phi)),
            S::UniqueElement(a) => Term::uniqel(self.term(a)),
            S::IterReach(s, x, r) => Term::iter_reach(self.term(s), x.clone(), self.term(r)),
            S::WfRec {
                domain,
                rel,
                step,
                arg,
            } => Term::wf_rec(
                self.term(domain),
                Bind2::new(rel.0.clone(), rel.1.clone(), self.formula(&rel.2)),
                Bind2::new(step.0.clone(), step.1.clone(), self.term(&step.2)),
                self.term(arg),
            ),
            S::Powerset(a) => Term::powerset(self.term(a)),

            S::Separation(x, a, p) => {
                let a = self.term(a);
                self.separation(x.clone(), a, p)
            }
            S::Singleton(r) => Term::singleton(self.term(r)),
            S::FiniteSet(items) => finite_union(
                items
                    .iter()
                    .map(|r| Term::singleton(self.term(r)))
                    .collect(),
            ),
            S::Replacement {
                binders,
                body,
                filter,
            } => self.replacement(binders, body, filter.as_deref()),
            S::Intersection(a, b) => {
                let x = self.fresh.name();
                let a = self.term(a);
                let b = self.term(b);
                Term::indexed_union(
                    x.clone(),
                    a,
                    Term::cond_singleton(Term::Var(x.clone()), Formula::member(Term::Var(x), b)),
                )
            }
            S::Iota(x, a, p) => {
                let a = self.term(a);
                Term::uniqel(self.separation(x.clone(), a, p))
            }
            S::BigUnion(a) => {
                let x = self.fresh.name();
                Term::indexed_union(x.clone(), self.term(a), Term::Var(x))
            }
            S::FiniteUnion(items) => finite_union(items.iter().map(|a| self.term(a)).collect()),
        }
    }

    /// `⋃_{x∈A} ⦅x | P(x)⦆`
    fn separation(&mut self, x: Name, a: Term, p: &SugarFormula) -> Term {
        let p = self.formula(p);
        Term::indexed_union(x.clone(), a, Term::cond_singleton(Term::Var(x), p))
    }

    fn replacement(
        &mut self,
        binders: &[(Name, SugarTerm)],
        body: &SugarTerm,
        filter: Option<&SugarFormula>,
    ) -> Term {
        match binders.split_first() {
            None => {
                let body = self.term(body);
                let cond = filter.map(|p| self.formula(p)).unwrap_or(Formula::True);
                Term::cond_singleton(body, cond)
            }
            Some(((x, dom), rest)) => {
                let dom = self.term(dom);
                Term::indexed_union(x.clone(), dom, self.replacement(rest, body, filter))
            }
        }
    }

    fn formula(&mut self, phi: &SugarFormula) -> Formula {
        use SugarFormula as F;
        match phi {
            F::False => Formula::False,
            F::True => Formula::True,
            F::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            F::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            F::Implies(a, b) => Formula::implies(self.formula(a), self.formula(b)),
            F::Not(a) => Formula::not(self.formula(a)),
            F::ExistsIn(x, a, p) => Formula::exists_in(x.clone(), self.term(a), self.formula(p)),
            F::ForallIn(x, a, p) => Formula::forall_in(x.clone(), self.term(a), self.formula(p)),
            F::Eq(s, t) => Formula::eq(self.term(s), self.term(t)),
            F::IsSet(a) => Formula::is_set(self.term(a)),
            F::In(s, a) => Formula::member(self.term(s), self.term(a)),
            F::WfElem { elem, domain, rel } => Formula::wf_elem(
                self.term(elem),
                self.term(domain),
                Bind2::new(rel.0.clone(), rel.1.clone(), self.formula(&rel.2)),
            ),

            F::Iff(a, b) => Formula::iff(self.formula(a), self.formula(b)),
            F::ExistsUnique(x, a, p) => {
                let a = self.term(a);
                let p = self.formula(p);
                exists_unique(&mut self.fresh, x.clone(), a, p)
            }
            F::Subseteq(a, b) => {
                let x = self.fresh.name();
                let a = self.term(a);
                let b = self.term(b);
                Formula::forall_in(x.clone(), a, Formula::member(Term::Var(x), b))
            }
            F::Nc(p, r) => {
                let p = self.formula(p);
                let r = self.term(r);
                nc(&mut self.fresh, p, r)
            }
            F::FiniteOr(items) => {
                Formula::disj(items.iter().map(|p| self.formula(p)).collect::<Vec<_>>())
            }
            F::FiniteAnd(items) => {
                Formula::conj(items.iter().map(|p| self.formula(p)).collect::<Vec<_>>())
            }
        }
    }
}

fn finite_union(items: Vec<Term>) -> Term {
    items.into_iter().reduce(Term::union).unwrap_or(Term::Empty)
}

/// `∃x∈A.(P(x) ∧ ∀y∈A.(P(y) ⇒ y = x))` with `y` fresh.
pub(crate) fn exists_unique(fresh: &mut Fresh, x: Name, a: Term, p: Formula) -> Formula {
    // `a` is repeated under the binder, so the binder must not occur free in it.
    let (x, p) = if a.has_free(&x) {
        let x2 = fresh.name();
        let p2 = p.subst(&x, &Term::Var(x2.clone()));
        (x2, p2)
    } else {
        (x, p)
    };
    let y = fresh.name();
    let py = p.subst(&x, &Term::Var(y.clone()));
    Formula::exists_in(
        x.clone(),
        a.clone(),
        Formula::and(
            p,
            Formula::forall_in(
                y.clone(),
                a,
                Formula::implies(py, Formula::eq(Term::Var(y), Term::Var(x))),
            ),
        ),
    )
}

/// `φ ∨ (Set(r) ∧ ∀x∈r. φ)` with `x` fresh.
pub(crate) fn nc(fresh: &mut Fresh, p: Formula, r: Term) -> Formula {
    let x = fresh.name();
    Formula::or(
        p.clone(),
        Formula::and(Formula::is_set(r.clone()), Formula::forall_in(x, r, p)),
    )
}

/// `∀x∈A. x ∈ B` with `x` fresh.
pub(crate) fn subseteq(fresh: &mut Fresh, a: Term, b: Term) -> Formula {
    let x = fresh.name();
    Formula::forall_in(x.clone(), a, Formula::member(Term::Var(x), b))
}

/// `{x ∈ A | x ∈ B}` with `x` fresh.
pub(crate) fn intersection(fresh: &mut Fresh, a: Term, b: Term) -> Term {
    let x = fresh.name();
    Term::indexed_union(
        x.clone(),
        a,
        Term::cond_singleton(Term::Var(x.clone()), Formula::member(Term::Var(x), b)),
    )
}

pub fn expand_term(t: &SugarTerm) -> Term {
    Expander {
        fresh: Fresh::new(t.all_names()),
    }
    .term(t)
}

pub fn expand_formula(phi: &SugarFormula) -> Formula {
    Expander {
        fresh: Fresh::new(phi.all_names()),
    }
    .formula(phi)
}

pub fn expand(e: &SugaredExpr) -> Expr {
    match e {
        SugaredExpr::Term(t) => Expr::Term(expand_term(t)),
        SugaredExpr::Formula(f) => Expr::Formula(expand_formula(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::decls;

    fn sv(x: &str) -> SugarTerm {
        SugarTerm::var(x)
    }
    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn subseteq_expands_to_restricted_forall() {
        let e = expand_formula(&SugarFormula::Subseteq(bx(sv("A")), bx(sv("B"))));
        let expected = Formula::forall_in("x", v("A"), Formula::member(v("x"), v("B")));
        assert!(e.alpha_eq(&expected));
        match e {
            Formula::ForallIn { var, .. } => assert!(var.is_reserved()),
            _ => panic!(),
        }
    }

    #[test]
    fn separation_expansion() {
        let p = SugarFormula::In(bx(sv("x")), bx(sv("B")));
        let e = expand_term(&SugarTerm::Separation("x".into(), bx(sv("A")), bx(p)));
        let expected = Term::indexed_union(
            "x",
            v("A"),
            Term::cond_singleton(v("x"), Formula::member(v("x"), v("B"))),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn nc_expansion() {
        let phi = SugarFormula::In(bx(sv("a")), bx(sv("b")));
        let e = expand_formula(&SugarFormula::Nc(bx(phi), bx(sv("r"))));
        let p = Formula::member(v("a"), v("b"));
        let expected = Formula::or(
            p.clone(),
            Formula::and(Formula::is_set(v("r")), Formula::forall_in("q", v("r"), p)),
        );
        assert!(e.alpha_eq(&expected));
    }

    #[test]
    fn empty_finite_forms() {
        assert_eq!(expand_term(&SugarTerm::FiniteUnion(vec![])), Term::Empty);
        assert_eq!(
            expand_formula(&SugarFormula::FiniteOr(vec![])),
            Formula::False
        );
        assert_eq!(
            expand_formula(&SugarFormula::FiniteAnd(vec![])),
            Formula::True
        );
        assert_eq!(expand_term(&SugarTerm::FiniteSet(vec![])), Term::Empty);
    }

    #[test]
    fn finite_forms_associate_left() {
        let e = expand_term(&SugarTerm::FiniteUnion(vec![sv("a"), sv("b"), sv("c")]));
        assert_eq!(e, Term::union(Term::union(v("a"), v("b")), v("c")));
        let f = expand_formula(&SugarFormula::FiniteAnd(vec![
            SugarFormula::True,
            SugarFormula::False,
            SugarFormula::True,
        ]));
        assert_eq!(
            f,
            Formula::and(Formula::and(Formula::True, Formula::False), Formula::True)
        );
    }

    #[test]
    fn exists_unique_expansion() {
        let p = SugarFormula::In(bx(sv("x")), bx(sv("B")));
        let e = expand_formula(&SugarFormula::ExistsUnique("x".into(), bx(sv("A")), bx(p)));
        let expected = Formula::exists_in(
            "x",
            v("A"),
            Formula::and(
                Formula::member(v("x"), v("B")),
                Formula::forall_in(
                    "y",
                    v("A"),
                    Formula::implies(Formula::member(v("y"), v("B")), Formula::eq(v("y"), v("x"))),
                ),
            ),
        );
        assert!(e.alpha_eq(&expected));
        assert_eq!(e.free_vars(), decls(["A", "B"]));
    }

    #[test]
    fn exists_unique_binder_free_in_domain_is_renamed() {
        // ∃!x∈x. True: the inner ∀y∈x must still refer to the free x.
        let e = expand_formula(&SugarFormula::ExistsUnique(
            "x".into(),
            bx(sv("x")),
            bx(SugarFormula::True),
        ));
        let expected = Formula::exists_in(
            "z",
            v("x"),
            Formula::and(
                Formula::True,
                Formula::forall_in(
                    "y",
                    v("x"),
                    Formula::implies(Formula::True, Formula::eq(v("y"), v("z"))),
                ),
            ),
        );
        assert!(e.alpha_eq(&expected), "{e}");
    }

    #[test]
    fn fresh_binder_avoids_user_names() {
        // A ⊆ _v0 would be captured if the fresh binder reused `_v0`.
        let e = expand_formula(&SugarFormula::Subseteq(bx(sv("A")), bx(sv("_v0"))));
        assert_eq!(e.free_vars(), decls(["A", "_v0"]));
    }

    #[test]
    fn multi_binder_replacement() {
        let r = SugarTerm::Replacement {
            binders: vec![("x".into(), sv("A")), ("y".into(), sv("x"))],
            body: bx(SugarTerm::Union(bx(sv("x")), bx(sv("y")))),
            filter: Some(bx(SugarFormula::In(bx(sv("y")), bx(sv("C"))))),
        };
        let e = expand_term(&r);
        let expected = Term::indexed_union(
            "x",
            v("A"),
            Term::indexed_union(
                "y",
                v("x"),
                Term::cond_singleton(Term::union(v("x"), v("y")), Formula::member(v("y"), v("C"))),
            ),
        );
        assert_eq!(e, expected);
        assert_eq!(r.free_vars(), decls(["A", "C"]));
    }

    #[test]
    fn core_is_fixed_point() {
        let t = Term::indexed_union("x", v("A"), Term::powerset(v("x")));
        assert_eq!(expand_term(&SugarTerm::from(&t)), t);
    }

    #[test]
    fn sugar_subst_avoids_capture() {
        let e = SugarFormula::Subseteq(bx(sv("A")), bx(sv("B")));
        let s = e.subst(&"B".into(), &sv("A"));
        assert_eq!(s, SugarFormula::Subseteq(bx(sv("A")), bx(sv("A"))));
        let sep = SugarTerm::Separation(
            "x".into(),
            bx(sv("A")),
            bx(SugarFormula::In(bx(sv("x")), bx(sv("y")))),
        );
        let out = sep.subst(&"y".into(), &sv("x"));
        assert_eq!(out.free_vars(), decls(["A", "x"]));
    }
}
