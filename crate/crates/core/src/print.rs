//! S-expression rendering of core terms and formulas.
//!
//! The output is the surface syntax accepted by [`crate::cli::parse`], so
//! anything printed without reserved binder names parses back to an
//! α-equivalent AST. Placeholders print as `?i`; they never occur in a
//! checked statement.

use std::fmt;

use crate::syntax::{Bind2, Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Hole(i) => write!(f, "?{i}"),
            Term::Empty => f.write_str("empty"),
            Term::Union(a, b) => write!(f, "(union {a} {b})"),
            Term::IndexedUnion { var, domain, body } => {
                write!(f, "(iunion ({var} {domain}) {body})")
            }
            Term::CondSingleton(r, phi) => write!(f, "(csing {r} {phi})"),
            Term::UniqueElement(a) => write!(f, "(uniqel {a})"),
            Term::IterReach { start, var, step } => write!(f, "(itset {start} ({var} {step}))"),
            Term::WfRec {
                domain,
                rel,
                step,
                arg,
            } => write!(
                f,
                "(wrec {domain} {} {} {arg})",
                Binder2(rel),
                Binder2(step)
            ),
            Term::Powerset(a) => write!(f, "(pow {a})"),
        }
    }
}

struct Binder2<'a, T>(&'a Bind2<T>);

impl<T: fmt::Display> fmt::Display for Binder2<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.0;
        write!(f, "(({} {}) {})", b.first, b.second, b.body)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::False => f.write_str("false"),
            Formula::True => f.write_str("true"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Implies(a, b) => write!(f, "(=> {a} {b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::ExistsIn { var, domain, body } => {
                write!(f, "(exists ({var} {domain}) {body})")
            }
            Formula::ForallIn { var, domain, body } => {
                write!(f, "(forall ({var} {domain}) {body})")
            }
            Formula::Eq(s, t) => write!(f, "(= {s} {t})"),
            Formula::IsSet(a) => write!(f, "(set? {a})"),
            Formula::In(s, a) => write!(f, "(in {s} {a})"),
            Formula::WfElem { elem, domain, rel } => {
                write!(f, "(wf {elem} {domain} {})", Binder2(rel))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_surface_syntax() {
        let t = Term::indexed_union("x", Term::var("A"), Term::singleton(Term::var("x")));
        assert_eq!(t.to_string(), "(iunion (x A) (csing x true))");
        let phi = Formula::wf_elem(
            Term::var("s"),
            Term::var("A"),
            Bind2::new("x", "y", Formula::member(Term::var("x"), Term::var("y"))),
        );
        assert_eq!(phi.to_string(), "(wf s A ((x y) (in x y)))");
        assert_eq!(Term::Hole(1).to_string(), "?1");
    }
}
