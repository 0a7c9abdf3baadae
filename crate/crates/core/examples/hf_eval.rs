//! Evaluates terms and formulas in the hereditarily finite model,
//! including the coercions for non-sets and undefined cases.
//!
//!     cargo run --example hf_eval

use tops::hfmodel::{eval_formula, eval_term, is_wf_element, EvalConfig, Valuation, Value};
use tops::syntax::{Bind2, Formula, Name, Term};

fn main() {
    let v = Term::var;
    let e = Value::empty;
    let rho: Valuation = [
        ("u", Value::Atom(0)),
        ("A", Value::set([e(), Value::singleton(e())])),
        ("s", Value::singleton(e())),
    ]
    .into_iter()
    .map(|(x, val)| (Name::new(x), val))
    .collect();
    let cfg = EvalConfig {
        max_iter: 3,
        ..EvalConfig::default()
    };

    let terms = [
        ("𝒫u", Term::powerset(v("u"))),
        ("uniqel A", Term::uniqel(v("A"))),
        ("itset(∅, x.x)", Term::iter_reach(Term::Empty, "x", v("x"))),
        (
            "itset(∅, x.𝒫x)",
            Term::iter_reach(Term::Empty, "x", Term::powerset(v("x"))),
        ),
        (
            "prl(A; ∈; z,Y.Y; s)",
            Term::wf_rec(
                v("A"),
                Bind2::new("x", "y", Formula::member(v("x"), v("y"))),
                Bind2::new("z", "Y", v("Y")),
                v("s"),
            ),
        ),
    ];
    for (label, t) in terms {
        match eval_term(&rho, &t, &cfg) {
            Ok(val) => println!("{label:<22} = {val}"),
            Err(err) => println!("{label:<22} : {err}"),
        }
    }

    let formulas = [
        ("s ∈ u", Formula::member(v("s"), v("u"))),
        (
            "u ⊆ s",
            Formula::forall_in("x", v("u"), Formula::member(v("x"), v("s"))),
        ),
        ("Set(u)", Formula::is_set(v("u"))),
    ];
    for (label, f) in formulas {
        println!("{label:<22} = {:?}", eval_formula(&rho, &f, &cfg));
    }

    let a = &rho[&Name::new("A")];
    let member = |x: &Value, y: &Value| Ok(y.contains(x));
    for x in a.elements() {
        println!(
            "{x} well-founded under ∈ on A: {}",
            is_wf_element(x, a, &member).expect("membership never fails")
        );
    }
}
