//! Completeness and iteration statistics on generated 3-SAT classes.
//!
//! ```text
//! cargo run --release --example easy_region_bench -- [ratio] [count]
//! ```

use bpa_sat::bench::{self, BenchConfig, GenSpec};
use bpa_sat::solver::SolverConfig;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let ratio: f64 = args.next().map_or(Ok(2.0), |s| s.parse())?;
    let count: usize = args.next().map_or(Ok(100), |s| s.parse())?;

    let specs: Vec<GenSpec> = [20, 50, 100]
        .into_iter()
        .map(|n| GenSpec { vars: n, clauses: (n as f64 * ratio).round() as usize, count, seed: 2024 })
        .collect();
    let instances = bench::generate_instances(&specs)?;

    for (label, solver) in
        [("no restarts", SolverConfig::default().without_restarts()), ("10 attempts", SolverConfig::default())]
    {
        let run = bench::run_bench(&instances, &BenchConfig { solver, ..Default::default() }, None)?;
        println!("{label}:");
        println!(
            "  {:<14} {:>6} {:>13} {:>11} {:>13}",
            "class", "solved", "completeness", "mean iters", "median iters"
        );
        for c in &run.report.classes {
            println!(
                "  {:<14} {:>3}/{:<3} {:>12.3} {:>11.1} {:>13.1}",
                c.class,
                c.solved,
                c.total,
                c.completeness,
                c.mean_iters.unwrap_or(f64::NAN),
                c.median_iters.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
