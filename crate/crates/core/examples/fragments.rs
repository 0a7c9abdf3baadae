//! Checks one derivation under every fragment and shows which reject it.
//!
//!     cargo run --example fragments

use tops::context::LogicalContext;
use tops::kernel::{Checker, Derivation, Fragment, Rule};
use tops::syntax::{decls, Formula, Term};

fn main() {
    let v = Term::var;
    let samples = [
        ("𝒫A = 𝒫A", Term::powerset(v("A"))),
        (
            "⋃_{x∈A} x = ⋃_{x∈A} x",
            Term::indexed_union("x", v("A"), v("x")),
        ),
    ];
    let ctx = LogicalContext::nil(decls(["A"]));
    for (label, t) in samples {
        let d = Derivation::rule(Rule::EqI(t.clone()), vec![]).stating(Formula::eq(t.clone(), t));
        println!("{label}");
        for frag in Fragment::ALL {
            let verdict = match Checker::new(frag).check(&ctx, &d) {
                Ok(_) => "ok".to_string(),
                Err(e) => format!("rejected at {}: {}", e.path, e.kind),
            };
            println!("  {:<15} {verdict}", frag.to_string());
        }
    }
}
