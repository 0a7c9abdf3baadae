//! Logical contexts and sequents.
//!
//! A [`LogicalContext`] is an ordered list of declarations `x : A` and
//! hypotheses `φ` over an optional base declaration context `γ`. The empty
//! base gives the closed system; a nonempty base gives the open system over
//! `γ`.

use thiserror::Error;

use crate::syntax::{is_formula_over, is_term_over, DeclContext, Formula, Name, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Entry {
    Decl(Name, Term),
    Hyp(Formula),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("`{0}` is already declared")]
    DuplicateDeclaration(Name),
    #[error("entry {0} mentions a variable that is not declared before it")]
    IllFormedOverPrefix(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogicalContext {
    base: DeclContext,
    entries: Vec<Entry>,
    decls: DeclContext,
}

impl Default for LogicalContext {
    fn default() -> Self {
        LogicalContext::nil(DeclContext::new())
    }
}

impl LogicalContext {
    /// The empty context over `base`.
    pub fn nil(base: DeclContext) -> Self {
        LogicalContext {
            decls: base.clone(),
            base,
            entries: Vec::new(),
        }
    }

    /// Validates `entries` one at a time over `base`.
    pub fn new(base: DeclContext, entries: Vec<Entry>) -> Result<Self, ContextError> {
        let mut ctx = LogicalContext::nil(base);
        for (i, e) in entries.into_iter().enumerate() {
            ctx.push(e).map_err(|err| match err {
                ContextError::IllFormedOverPrefix(_) => ContextError::IllFormedOverPrefix(i),
                other => other,
            })?;
        }
        Ok(ctx)
    }

    fn push(&mut self, entry: Entry) -> Result<(), ContextError> {
        let position = self.entries.len();
        match &entry {
            Entry::Decl(x, a) => {
                if self.decls.contains(x) {
                    return Err(ContextError::DuplicateDeclaration(x.clone()));
                }
                if !is_term_over(&self.decls, a) {
                    return Err(ContextError::IllFormedOverPrefix(position));
                }
                self.decls.insert(x.clone());
            }
            Entry::Hyp(phi) => {
                if !is_formula_over(&self.decls, phi) {
                    return Err(ContextError::IllFormedOverPrefix(position));
                }
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    /// `Γ, x : A`
    pub fn with_decl(&self, x: Name, a: Term) -> Result<Self, ContextError> {
        let mut next = self.clone();
        next.push(Entry::Decl(x, a))?;
        Ok(next)
    }

    /// `Γ, φ`
    pub fn with_hyp(&self, phi: Formula) -> Result<Self, ContextError> {
        let mut next = self.clone();
        next.push(Entry::Hyp(phi))?;
        Ok(next)
    }

    pub fn base(&self) -> &DeclContext {
        &self.base
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// `Decl(Γ)`: the base plus every declared variable.
    pub fn decls(&self) -> &DeclContext {
        &self.decls
    }

    /// `Hyps(Γ)`: `x ∈ A` for each declaration and `φ` for each hypothesis,
    /// in order.
    pub fn hyps(&self) -> Vec<Formula> {
        self.entries
            .iter()
            .map(|e| match e {
                Entry::Decl(x, a) => Formula::member(Term::Var(x.clone()), a.clone()),
                Entry::Hyp(phi) => phi.clone(),
            })
            .collect()
    }

    pub fn hyp(&self, index: usize) -> Option<Formula> {
        self.entries.get(index).map(|e| match e {
            Entry::Decl(x, a) => Formula::member(Term::Var(x.clone()), a.clone()),
            Entry::Hyp(phi) => phi.clone(),
        })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

pub fn decl_of(ctx: &LogicalContext) -> DeclContext {
    ctx.decls().clone()
}

pub fn hyps_of(ctx: &LogicalContext) -> Vec<Formula> {
    ctx.hyps()
}

pub fn wf_context(base: DeclContext, entries: Vec<Entry>) -> Result<LogicalContext, ContextError> {
    LogicalContext::new(base, entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the conclusion mentions variables that are not declared")]
pub struct IllFormedSequent;

/// `Γ ⊢ ψ`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    context: LogicalContext,
    conclusion: Formula,
}

impl Sequent {
    pub fn new(context: LogicalContext, conclusion: Formula) -> Result<Self, IllFormedSequent> {
        if is_formula_over(context.decls(), &conclusion) {
            Ok(Sequent {
                context,
                conclusion,
            })
        } else {
            Err(IllFormedSequent)
        }
    }

    pub fn context(&self) -> &LogicalContext {
        &self.context
    }

    pub fn conclusion(&self) -> &Formula {
        &self.conclusion
    }

    /// The formula over the base that says the same thing as the sequent:
    /// hypotheses become implications and declarations become restricted
    /// universal quantifiers, folded from the right.
    pub fn meaning(&self) -> Formula {
        self.context
            .entries
            .iter()
            .rev()
            .fold(self.conclusion.clone(), |acc, e| match e {
                Entry::Hyp(phi) => Formula::implies(phi.clone(), acc),
                Entry::Decl(x, a) => Formula::forall_in(x.clone(), a.clone(), acc),
            })
    }
}

pub fn sequent_meaning(s: &Sequent) -> Formula {
    s.meaning()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{decls, is_formula_over};

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn atom(p: &str) -> Formula {
        Formula::is_set(v(p))
    }

    #[test]
    fn decl_of_examples() {
        assert!(LogicalContext::default().decls().is_empty());
        assert_eq!(
            LogicalContext::nil(decls(["x", "y"])).decls(),
            &decls(["x", "y"])
        );
        let ctx = LogicalContext::new(
            decls(["A", "B", "p"]),
            vec![
                Entry::Decl("x".into(), v("A")),
                Entry::Hyp(atom("p")),
                Entry::Decl("y".into(), v("B")),
            ],
        )
        .unwrap();
        let declared: Vec<_> = ctx.decls().difference(ctx.base()).cloned().collect();
        assert_eq!(declared, vec![Name::new("x"), Name::new("y")]);
    }

    #[test]
    fn hyps_of_examples() {
        assert!(LogicalContext::default().hyps().is_empty());
        let base = decls(["A", "p", "q"]);
        let ctx = LogicalContext::new(
            base.clone(),
            vec![Entry::Decl("x".into(), v("A")), Entry::Hyp(atom("p"))],
        )
        .unwrap();
        assert_eq!(ctx.hyps(), vec![Formula::member(v("x"), v("A")), atom("p")]);
        let ctx = LogicalContext::new(
            base,
            vec![
                Entry::Hyp(atom("p")),
                Entry::Decl("x".into(), v("A")),
                Entry::Hyp(atom("q")),
            ],
        )
        .unwrap();
        assert_eq!(
            ctx.hyps(),
            vec![atom("p"), Formula::member(v("x"), v("A")), atom("q")]
        );
    }

    #[test]
    fn wf_context_errors() {
        let dup = wf_context(
            decls([]),
            vec![
                Entry::Decl("x".into(), Term::Empty),
                Entry::Decl("x".into(), Term::Empty),
            ],
        );
        assert_eq!(dup, Err(ContextError::DuplicateDeclaration("x".into())));
        let undeclared = wf_context(
            decls([]),
            vec![Entry::Hyp(Formula::member(v("y"), Term::Empty))],
        );
        assert_eq!(undeclared, Err(ContextError::IllFormedOverPrefix(0)));
        let ok = wf_context(
            decls([]),
            vec![
                Entry::Decl("x".into(), Term::Empty),
                Entry::Hyp(Formula::eq(v("x"), v("x"))),
            ],
        );
        assert!(ok.is_ok());
        let shadows_base = wf_context(decls(["x"]), vec![Entry::Decl("x".into(), Term::Empty)]);
        assert_eq!(
            shadows_base,
            Err(ContextError::DuplicateDeclaration("x".into()))
        );
    }

    #[test]
    fn meaning_folds_from_the_right() {
        let base = decls(["A", "B", "C", "p0", "p1"]);
        let phi0 = atom("p0");
        let phi1 = Formula::member(v("p1"), v("x"));
        let psi = Formula::member(v("z"), v("y"));
        let ctx = LogicalContext::new(
            base.clone(),
            vec![
                Entry::Hyp(phi0.clone()),
                Entry::Decl("x".into(), v("A")),
                Entry::Hyp(phi1.clone()),
                Entry::Decl("y".into(), v("B")),
                Entry::Decl("z".into(), v("C")),
            ],
        )
        .unwrap();
        let s = Sequent::new(ctx, psi.clone()).unwrap();
        let expected = Formula::implies(
            phi0,
            Formula::forall_in(
                "x",
                v("A"),
                Formula::implies(
                    phi1,
                    Formula::forall_in("y", v("B"), Formula::forall_in("z", v("C"), psi)),
                ),
            ),
        );
        assert_eq!(s.meaning(), expected);
        assert!(is_formula_over(&base, &s.meaning()));
    }

    #[test]
    fn meaning_of_trivial_sequents() {
        let psi = Formula::True;
        assert_eq!(
            Sequent::new(LogicalContext::default(), psi.clone())
                .unwrap()
                .meaning(),
            psi
        );
        let ctx = LogicalContext::new(decls(["A"]), vec![Entry::Decl("x".into(), v("A"))]).unwrap();
        let s = Sequent::new(ctx, Formula::eq(v("x"), v("x"))).unwrap();
        assert_eq!(
            s.meaning(),
            Formula::forall_in("x", v("A"), Formula::eq(v("x"), v("x")))
        );
    }

    #[test]
    fn sequent_rejects_undeclared_conclusion() {
        assert_eq!(
            Sequent::new(LogicalContext::default(), Formula::is_set(v("x"))),
            Err(IllFormedSequent)
        );
    }
}
