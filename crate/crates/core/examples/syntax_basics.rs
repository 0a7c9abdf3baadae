//! Builds core terms and formulas, then shows free variables,
//! α-equivalence, capture-avoiding substitution and well-formedness.
//!
//!     cargo run --example syntax_basics

use tops::syntax::{decls, is_formula_over, AbstractedTerm, Formula, Name, Term};

fn main() {
    let v = Term::var;
    // ∀x∈A. x ∈ y
    let phi = Formula::forall_in("x", v("A"), Formula::member(v("x"), v("y")));
    println!("phi           = {phi}");
    println!("free vars     = {:?}", phi.free_vars());

    let renamed = Formula::forall_in("z", v("A"), Formula::member(v("z"), v("y")));
    println!("alpha-equal to {renamed}: {}", phi.alpha_eq(&renamed));

    // Substituting x for y must rename the bound x.
    let subst = phi.subst(&Name::new("y"), &v("x"));
    println!("phi[x/y]      = {subst}");
    println!("free vars now  = {:?}", subst.free_vars());

    let gamma = decls(["A", "y"]);
    println!("over {{A, y}}:  {}", is_formula_over(&gamma, &phi));
    println!("over {{A}}:     {}", is_formula_over(&decls(["A"]), &phi));

    // z₀ ∪ B, applied to 𝒫A.
    let f = AbstractedTerm::abstracting(&[Name::new("u")], &Term::union(v("u"), v("B")));
    let applied = f.apply(&[Term::powerset(v("A"))]).expect("arity 1");
    println!("(u. u ∪ B)(𝒫A) = {applied}");
}
