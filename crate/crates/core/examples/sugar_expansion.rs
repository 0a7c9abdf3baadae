//! Expands abbreviations into core syntax.
//!
//!     cargo run --example sugar_expansion

use tops::sugar::{expand_formula, expand_term, SugarFormula, SugarTerm};

fn b<T>(t: T) -> Box<T> {
    Box::new(t)
}

fn main() {
    let v = SugarTerm::var;

    let samples_f = [
        ("A ⊆ B", SugarFormula::Subseteq(b(v("A")), b(v("B")))),
        (
            "∃!x∈A. x ∈ B",
            SugarFormula::ExistsUnique(
                "x".into(),
                b(v("A")),
                b(SugarFormula::In(b(v("x")), b(v("B")))),
            ),
        ),
        (
            "NC(True, r)",
            SugarFormula::Nc(b(SugarFormula::True), b(v("r"))),
        ),
        (
            "φ ⇔ ψ",
            SugarFormula::Iff(b(SugarFormula::True), b(SugarFormula::False)),
        ),
        ("empty disjunction", SugarFormula::FiniteOr(vec![])),
    ];
    for (label, f) in samples_f {
        println!("{label:<20} => {}", expand_formula(&f));
    }

    let samples_t = [
        (
            "{x∈A | x ∈ B}",
            SugarTerm::Separation(
                "x".into(),
                b(v("A")),
                b(SugarFormula::In(b(v("x")), b(v("B")))),
            ),
        ),
        ("{a, b}", SugarTerm::FiniteSet(vec![v("a"), v("b")])),
        ("A ∩ B", SugarTerm::Intersection(b(v("A")), b(v("B")))),
        ("⋃S", SugarTerm::BigUnion(b(v("S")))),
        ("empty union", SugarTerm::FiniteUnion(vec![])),
        (
            "{x ∪ y | x∈A, y∈B}",
            SugarTerm::Replacement {
                binders: vec![("x".into(), v("A")), ("y".into(), v("B"))],
                body: b(SugarTerm::Union(b(v("x")), b(v("y")))),
                filter: None,
            },
        ),
    ];
    for (label, t) in samples_t {
        println!("{label:<20} => {}", expand_term(&t));
    }
}
