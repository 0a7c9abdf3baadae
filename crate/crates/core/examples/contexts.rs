//! Builds an Open-TOPS logical context and prints the sentence a sequent
//! stands for.
//!
//!     cargo run --example contexts

use tops::context::{Entry, LogicalContext, Sequent};
use tops::syntax::{decls, Formula, Name, Term};

fn main() {
    let v = Term::var;
    // Over γ = {A}:  x : A, Set(x), y : x ⊢ y ∈ A
    let ctx = LogicalContext::new(
        decls(["A"]),
        vec![
            Entry::Decl(Name::new("x"), v("A")),
            Entry::Hyp(Formula::is_set(v("x"))),
            Entry::Decl(Name::new("y"), v("x")),
        ],
    )
    .expect("well-formed context");
    println!("declared: {:?}", ctx.decls());
    for (i, h) in ctx.hyps().iter().enumerate() {
        println!("hyp {i}: {h}");
    }

    let seq =
        Sequent::new(ctx.clone(), Formula::member(v("y"), v("A"))).expect("formula over decls");
    println!("meaning: {}", seq.meaning());

    // Redeclaring a variable is rejected.
    match ctx.with_decl(Name::new("x"), Term::Empty) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("rejected: {e}"),
    }
    // A hypothesis that mentions an undeclared variable is rejected.
    match ctx.with_hyp(Formula::member(v("w"), v("A"))) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("rejected: {e}"),
    }
}
