//! A proof-checking kernel for TOPS, a set theory whose quantifiers are
//! always restricted to a set, together with an abbreviation expander, a
//! finite-model oracle over hereditarily finite sets and a batch front end.
//!
//! The pipeline is: surface script ([`cli`]) → sugared expressions
//! ([`sugar`]) → core terms and formulas ([`syntax`]) → derivations checked
//! in logical contexts ([`context`], [`kernel`]). [`hfmodel`] evaluates core
//! formulas in finite models and [`oracle`] drives randomized soundness
//! suites against the kernel's rules and axiom schemes.

pub mod cli;
pub mod context;
pub mod hfmodel;
pub mod kernel;
pub mod oracle;
mod print;
pub mod sugar;
pub mod syntax;

pub use context::{Entry, LogicalContext, Sequent};
pub use hfmodel::{EvalConfig, Valuation, Value};
pub use kernel::{check, AxiomId, AxiomInstance, Derivation, Fragment, Rule};
pub use syntax::{Formula, Name, Term};
