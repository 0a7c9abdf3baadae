//! Parses a proof script, checks its theorems and prints the core form.
//!
//!     cargo run --example script_check -- [FILE]

use tops::cli::{check_theorem, parse, render};
use tops::kernel::Fragment;

const DEFAULT: &str = "
(theorem some-self-subset
  (base (A))
  (context (hyp (exists (X A) (set? X))))
  (goal (exists (X A) (subset X X)))
  (proof
    (exists-e w (hyp 0)
      (exists-i (exists (X A) (subset X X)) (hyp 1)
        (forall-i (x w) (hyp 3))))))
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable file"),
        None => DEFAULT.to_string(),
    };
    let script = match parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("parse error: {e}");
            std::process::exit(2);
        }
    };
    let fragment = script.fragment().unwrap_or(Fragment::Full);
    for thm in script.theorems() {
        match check_theorem(thm, fragment, false) {
            Ok(c) => println!("{}: {}", thm.name, render::sequent(&c.sequent)),
            Err(e) => println!("{}: FAILED at {}: {}", thm.name, e.path, e.kind),
        }
    }
    println!("\ncore form:\n{}", render::script(&script));
}
