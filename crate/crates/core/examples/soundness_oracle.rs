//! Runs the randomized axiom and rule soundness suites and prints one row
//! per suite.
//!
//!     cargo run --example soundness_oracle -- [trials] [rank] [seed]

use tops::oracle::{self, OracleConfig};

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let cfg = OracleConfig {
        trials: args.first().copied().unwrap_or(100) as usize,
        rank: args.get(1).copied().unwrap_or(3) as usize,
        seed: args.get(2).copied().unwrap_or(7),
        ..OracleConfig::default()
    };
    let report = oracle::run(&cfg);
    println!("{:<28} {:>5} {:>5} {:>5}", "suite", "pass", "fail", "skip");
    for row in report.axioms.iter().chain(&report.rules) {
        println!(
            "{:<28} {:>5} {:>5} {:>5}",
            row.name, row.pass, row.fail, row.skip
        );
        if let Some(f) = &row.first_failure {
            println!("    first failure: {f}");
        }
    }
    for row in oracle::law_suites(&OracleConfig {
        trials: 1000,
        ..cfg
    }) {
        println!(
            "{:<28} {:>5} {:>5} {:>5}",
            row.name, row.pass, row.fail, row.skip
        );
    }
}
