//! Property tests over randomly generated surface syntax.

use std::collections::BTreeSet;

use proptest::prelude::*;

use tops::cli::{parse, render};
use tops::context::LogicalContext;
use tops::hfmodel::{eval_formula, eval_term, EvalConfig, Valuation, Value};
use tops::kernel::{Checker, Derivation, Fragment, Rule};
use tops::sugar::{expand_formula, expand_term, SugarFormula, SugarTerm};
use tops::syntax::{is_formula_over, is_term_over, Formula, Fresh, Name, Term};

const NAMES: [&str; 5] = ["a", "b", "c", "x", "y"];

fn name() -> impl Strategy<Value = Name> {
    prop::sample::select(&NAMES[..]).prop_map(Name::new)
}

fn two_names() -> impl Strategy<Value = (Name, Name)> {
    prop::sample::subsequence(&NAMES[..], 2)
        .prop_shuffle()
        .prop_map(|v| (Name::new(v[0]), Name::new(v[1])))
}

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

fn leaf_term() -> BoxedStrategy<SugarTerm> {
    prop_oneof![3 => name().prop_map(SugarTerm::Var), 1 => Just(SugarTerm::Empty)].boxed()
}

fn atomic(t: BoxedStrategy<SugarTerm>) -> BoxedStrategy<SugarFormula> {
    prop_oneof![
        Just(SugarFormula::True),
        Just(SugarFormula::False),
        (t.clone(), t.clone()).prop_map(|(s, r)| SugarFormula::In(bx(s), bx(r))),
        (t.clone(), t.clone()).prop_map(|(s, r)| SugarFormula::Eq(bx(s), bx(r))),
        t.prop_map(|s| SugarFormula::IsSet(bx(s))),
    ]
    .boxed()
}

/// Terms whose embedded formulas are drawn from `f`.
fn term_with(f: BoxedStrategy<SugarFormula>) -> BoxedStrategy<SugarTerm> {
    leaf_term()
        .prop_recursive(3, 24, 3, move |t| {
            let f = f.clone();
            prop_oneof![
                (t.clone(), t.clone()).prop_map(|(a, b)| SugarTerm::Union(bx(a), bx(b))),
                (name(), t.clone(), t.clone()).prop_map(|(x, a, b)| SugarTerm::IndexedUnion(
                    x,
                    bx(a),
                    bx(b)
                )),
                (t.clone(), f.clone()).prop_map(|(r, p)| SugarTerm::CondSingleton(bx(r), bx(p))),
                t.clone().prop_map(|a| SugarTerm::UniqueElement(bx(a))),
                (t.clone(), name(), t.clone()).prop_map(|(s, x, r)| SugarTerm::IterReach(
                    bx(s),
                    x,
                    bx(r)
                )),
                (
                    t.clone(),
                    two_names(),
                    f.clone(),
                    two_names(),
                    t.clone(),
                    t.clone()
                )
                    .prop_map(|(a, (x, y), p, (z, w), r, s)| SugarTerm::WfRec {
                        domain: bx(a),
                        rel: (x, y, bx(p)),
                        step: (z, w, bx(r)),
                        arg: bx(s),
                    }),
                t.clone().prop_map(|a| SugarTerm::Powerset(bx(a))),
                (name(), t.clone(), f.clone()).prop_map(|(x, a, p)| SugarTerm::Separation(
                    x,
                    bx(a),
                    bx(p)
                )),
                t.clone().prop_map(|a| SugarTerm::Singleton(bx(a))),
                prop::collection::vec(t.clone(), 0..3).prop_map(SugarTerm::FiniteSet),
                (
                    prop::collection::vec((name(), t.clone()), 1..3),
                    t.clone(),
                    prop::option::of(f.clone())
                )
                    .prop_map(|(binders, body, filter)| SugarTerm::Replacement {
                        binders,
                        body: bx(body),
                        filter: filter.map(bx),
                    }),
                (t.clone(), t.clone()).prop_map(|(a, b)| SugarTerm::Intersection(bx(a), bx(b))),
                (name(), t.clone(), f).prop_map(|(x, a, p)| SugarTerm::Iota(x, bx(a), bx(p))),
                t.clone().prop_map(|a| SugarTerm::BigUnion(bx(a))),
                prop::collection::vec(t, 0..3).prop_map(SugarTerm::FiniteUnion),
            ]
        })
        .boxed()
}

fn formula() -> BoxedStrategy<SugarFormula> {
    let t = term_with(atomic(leaf_term()));
    atomic(t.clone())
        .prop_recursive(3, 24, 3, move |f| {
            let t = t.clone();
            prop_oneof![
                (f.clone(), f.clone()).prop_map(|(p, q)| SugarFormula::Or(bx(p), bx(q))),
                (f.clone(), f.clone()).prop_map(|(p, q)| SugarFormula::And(bx(p), bx(q))),
                (f.clone(), f.clone()).prop_map(|(p, q)| SugarFormula::Implies(bx(p), bx(q))),
                f.clone().prop_map(|p| SugarFormula::Not(bx(p))),
                (name(), t.clone(), f.clone()).prop_map(|(x, a, p)| SugarFormula::ExistsIn(
                    x,
                    bx(a),
                    bx(p)
                )),
                (name(), t.clone(), f.clone()).prop_map(|(x, a, p)| SugarFormula::ForallIn(
                    x,
                    bx(a),
                    bx(p)
                )),
                (t.clone(), t.clone(), two_names(), f.clone()).prop_map(|(s, a, (x, y), p)| {
                    SugarFormula::WfElem {
                        elem: bx(s),
                        domain: bx(a),
                        rel: (x, y, bx(p)),
                    }
                }),
                (f.clone(), f.clone()).prop_map(|(p, q)| SugarFormula::Iff(bx(p), bx(q))),
                (name(), t.clone(), f.clone()).prop_map(|(x, a, p)| SugarFormula::ExistsUnique(
                    x,
                    bx(a),
                    bx(p)
                )),
                (t.clone(), t.clone()).prop_map(|(a, b)| SugarFormula::Subseteq(bx(a), bx(b))),
                (f.clone(), t).prop_map(|(p, r)| SugarFormula::Nc(bx(p), bx(r))),
                prop::collection::vec(f.clone(), 0..3).prop_map(SugarFormula::FiniteOr),
                prop::collection::vec(f, 0..3).prop_map(SugarFormula::FiniteAnd),
            ]
        })
        .boxed()
}

fn term() -> BoxedStrategy<SugarTerm> {
    term_with(formula())
}

fn value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![(0u32..3).prop_map(Value::Atom), Just(Value::empty())];
    leaf.prop_recursive(2, 8, 3, |v| {
        prop::collection::vec(v, 0..3).prop_map(Value::set)
    })
}

fn valuation() -> impl Strategy<Value = Valuation> {
    prop::collection::vec(value(), NAMES.len())
        .prop_map(|vals| NAMES.iter().map(Name::new).zip(vals).collect())
}

fn decls() -> impl Strategy<Value = BTreeSet<Name>> {
    prop::sample::subsequence(&NAMES[..], 0..=NAMES.len())
        .prop_map(|v| v.into_iter().map(Name::new).collect())
}

fn cfg() -> EvalConfig {
    EvalConfig {
        max_iter: 16,
        max_powerset_card: 256,
    }
}

/// Renames the outermost quantifier binder of `phi` to a name unused in it.
fn rename_outer_binder(phi: &Formula) -> Option<Formula> {
    let mut fresh = Fresh::new(BTreeSet::new());
    fresh.avoid_formula(phi);
    let z = fresh.name();
    match phi {
        Formula::ForallIn { var, domain, body } => Some(Formula::forall_in(
            z.clone(),
            (**domain).clone(),
            body.subst(var, &Term::Var(z)),
        )),
        Formula::ExistsIn { var, domain, body } => Some(Formula::exists_in(
            z.clone(),
            (**domain).clone(),
            body.subst(var, &Term::Var(z)),
        )),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn expansion_preserves_free_variables(phi in formula(), t in term()) {
        prop_assert_eq!(expand_formula(&phi).free_vars(), phi.free_vars());
        prop_assert_eq!(expand_term(&t).free_vars(), t.free_vars());
    }

    #[test]
    fn expansion_is_idempotent(phi in formula()) {
        let core = expand_formula(&phi);
        let again = expand_formula(&SugarFormula::from(&core));
        prop_assert!(again.alpha_eq(&core));
    }

    #[test]
    fn expansion_commutes_with_substitution(phi in formula(), x in name(), s in term()) {
        let lhs = expand_formula(&phi.subst(&x, &s));
        let rhs = expand_formula(&phi).subst(&x, &expand_term(&s));
        prop_assert!(lhs.alpha_eq(&rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn formation_matches_free_variables(phi in formula(), t in term(), g in decls()) {
        let (phi, t) = (expand_formula(&phi), expand_term(&t));
        prop_assert_eq!(is_formula_over(&g, &phi), phi.free_vars().is_subset(&g));
        prop_assert_eq!(is_term_over(&g, &t), t.free_vars().is_subset(&g));
    }

    #[test]
    fn substitution_free_variable_equation(phi in formula(), x in name(), s in term()) {
        let (phi, s) = (expand_formula(&phi), expand_term(&s));
        let got = phi.subst(&x, &s).free_vars();
        let mut want = phi.free_vars();
        if want.remove(&x) {
            want.extend(s.free_vars());
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn substituting_a_non_free_variable_is_identity(phi in formula(), s in term()) {
        let phi = expand_formula(&phi);
        let z = Name::new("z");
        prop_assert!(phi.subst(&z, &expand_term(&s)).alpha_eq(&phi));
    }

    #[test]
    fn evaluation_respects_alpha_equivalence(
        x in name(), a in term(), body in formula(), rho in valuation()
    ) {
        let phi = expand_formula(&SugarFormula::ForallIn(x, bx(a), bx(body)));
        let renamed = rename_outer_binder(&phi).expect("quantifier at the root");
        prop_assert!(renamed.alpha_eq(&phi));
        prop_assert_eq!(eval_formula(&rho, &renamed, &cfg()), eval_formula(&rho, &phi, &cfg()));
    }

    #[test]
    fn evaluation_substitution_lemma(phi in formula(), x in name(), s in term(), rho in valuation()) {
        let (phi, s) = (expand_formula(&phi), expand_term(&s));
        let Ok(sv) = eval_term(&rho, &s, &cfg()) else { return Ok(()) };
        let Ok(lhs) = eval_formula(&rho, &phi.subst(&x, &s), &cfg()) else { return Ok(()) };
        let mut rho2 = rho.clone();
        rho2.insert(x, sv);
        if let Ok(rhs) = eval_formula(&rho2, &phi, &cfg()) {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sets_are_extensional(items in prop::collection::vec(value(), 0..5)) {
        let mut shuffled = items.clone();
        shuffled.reverse();
        shuffled.extend(items.iter().take(2).cloned());
        prop_assert_eq!(Value::set(items), Value::set(shuffled));
    }

    #[test]
    fn rendered_formulas_parse_back(phi in formula()) {
        let core = expand_formula(&phi);
        let text = format!(
            "(theorem t (base (a b c x y)) (goal {}) (proof true-i))",
            render::formula(&core)
        );
        let script = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}: {text}")))?;
        let goal = &script.theorems().next().expect("one theorem").goal;
        prop_assert!(goal.alpha_eq(&core), "{goal} vs {core}");
    }

    #[test]
    fn identity_proof_checks_for_every_formula(phi in formula()) {
        let phi = expand_formula(&phi);
        let ctx = LogicalContext::nil(NAMES.iter().map(Name::new).collect());
        let d = Derivation::rule(Rule::ImpI(phi.clone()), vec![Derivation::rule(Rule::Hypothesis(0), vec![])])
            .stating(Formula::implies(phi.clone(), phi.clone()));
        let got = Checker::new(Fragment::Full).check(&ctx, &d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(got.sequent.conclusion().alpha_eq(&Formula::implies(phi.clone(), phi)));
    }

    #[test]
    fn fragment_acceptance_is_monotone(t in term()) {
        let t = expand_term(&t);
        let ctx = LogicalContext::nil(NAMES.iter().map(Name::new).collect());
        let d = Derivation::rule(Rule::EqI(t.clone()), vec![]).stating(Formula::eq(t.clone(), t));
        for small in Fragment::ALL {
            if Checker::new(small).check(&ctx, &d).is_ok() {
                for large in Fragment::ALL.into_iter().filter(|l| small.is_subfragment_of(*l)) {
                    prop_assert!(Checker::new(large).check(&ctx, &d).is_ok(), "{small} ok but {large} rejects");
                }
            }
        }
    }
}
