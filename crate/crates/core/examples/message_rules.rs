//! One round of clause messages next to brute-force enumeration, then a few
//! full iterations of the posteriors.

use bpa_sat::engine::{init_messages, iterate, oracle_clause_marginal, update_clause_to_var, InitPolicy};
use bpa_sat::{CnfFormula, EngineConfig, FactorGraph};

fn main() -> anyhow::Result<()> {
    // (x1 ∨ ¬x2 ∨ x3) ∧ (¬x1 ∨ x2) ∧ (x2 ∨ ¬x3)
    let f = CnfFormula::from_dimacs_clauses(3, &[&[1, -2, 3], &[-1, 2], &[2, -3]])?;
    let g = FactorGraph::from_cnf(&f)?;
    let config = EngineConfig::default();
    let mut state = init_messages(&g, InitPolicy::Random { seed: 7 }, &config);

    let r = update_clause_to_var(&g, &state);
    println!("{:>6} {:>4} {:>12} {:>12} {:>12} {:>12}", "clause", "var", "r(0)", "oracle", "r(1)", "oracle");
    for (c, clause) in f.clauses().iter().enumerate() {
        let q_one: Vec<f64> = g.check_edges(c).map(|id| state.q[id][1]).collect();
        for (k, id) in g.check_edges(c).enumerate() {
            println!(
                "{:>6} {:>4} {:>12.9} {:>12.9} {:>12.9} {:>12.9}",
                c + 1,
                clause[k].to_dimacs(),
                r[id][0],
                oracle_clause_marginal(clause, &q_one, k, false)?,
                r[id][1],
                oracle_clause_marginal(clause, &q_one, k, true)?,
            );
        }
    }

    for _ in 0..5 {
        let delta = iterate(&g, &mut state, &config);
        let post: Vec<String> = state.posterior.iter().map(|p| format!("{:.4}", p[1])).collect();
        println!("iteration {}: P(x=1) = [{}], max q change {delta:.2e}", state.iteration, post.join(", "));
    }
    Ok(())
}
