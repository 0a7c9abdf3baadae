//! Checks a small derivation tree with the kernel, then breaks it and
//! prints the structured error.
//!
//!     cargo run --example kernel_check

use tops::context::LogicalContext;
use tops::kernel::{Checker, Derivation, Fragment, Rule};
use tops::syntax::{decls, Formula, Name, Term};

fn main() {
    let v = Term::var;
    let sub = Formula::forall_in("x", v("X"), Formula::member(v("x"), v("X")));
    let goal = Formula::implies(Formula::is_set(v("X")), sub.clone());

    // imp-i: add Set(X); forall-i: declare x : X; hyp 1 is x ∈ X.
    let proof = Derivation::rule(
        Rule::ImpI(Formula::is_set(v("X"))),
        vec![Derivation::rule(
            Rule::ForallInI(Name::new("x"), v("X")),
            vec![Derivation::rule(Rule::Hypothesis(1), vec![])],
        )],
    )
    .stating(goal.clone());

    let ctx = LogicalContext::nil(decls(["X"]));
    let checked = Checker::new(Fragment::Full)
        .trace(true)
        .check(&ctx, &proof)
        .expect("valid proof");
    for (path, seq) in &checked.trace {
        println!("{path:<10} {}", seq.conclusion());
    }
    println!("rules used: {:?}", proof.rules_used());

    // Citing hypothesis 0 (Set(X)) where x ∈ X is needed.
    let broken = Derivation::rule(
        Rule::ImpI(Formula::is_set(v("X"))),
        vec![Derivation::rule(
            Rule::ForallInI(Name::new("x"), v("X")),
            vec![Derivation::rule(Rule::Hypothesis(0), vec![])],
        )],
    )
    .stating(goal);
    match Checker::new(Fragment::Full).check(&ctx, &broken) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("error at {}: {} ({})", e.path, e.kind.name(), e.kind),
    }
}
