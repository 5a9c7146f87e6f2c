//! Solve a DIMACS file, or a built-in formula when no path is given.
//!
//! ```text
//! cargo run --example solve_dimacs -- path/to/file.cnf
//! ```

use bpa_sat::dimacs;
use bpa_sat::solver::{solve, EndReason, SolverConfig};

const DEMO: &str = "c small satisfiable formula
p cnf 5 6
1 2 -3 0
-1 4 0
3 -4 5 0
-2 -5 0
2 3 4 0
-1 -2 -3 0
";

fn main() -> anyhow::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEMO.to_string(),
    };
    let formula = dimacs::parse_dimacs(&text)?;
    println!("{} variables, {} clauses", formula.num_vars(), formula.num_clauses());

    let outcome = solve(&formula, &SolverConfig::default())?;
    for (k, rec) in outcome.records.iter().enumerate() {
        let end = match rec.end {
            EndReason::Solved => "solved",
            EndReason::Converged => "converged without a model",
            EndReason::Exhausted => "iteration budget spent",
        };
        println!("attempt {k}: {} iterations, {end}", rec.iterations);
    }
    match outcome.assignment() {
        Some(a) => {
            assert!(formula.verify(a)?.is_satisfied());
            let lits: Vec<String> = a.to_dimacs_literals().iter().map(|l| l.to_string()).collect();
            println!("s SATISFIABLE\nv {} 0", lits.join(" "));
        }
        None => println!("s UNKNOWN"),
    }
    Ok(())
}
