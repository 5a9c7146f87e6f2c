//! How often break-and-restart rescues an instance that the first attempt
//! leaves unsolved.
//!
//! ```text
//! cargo run --release --example restarts -- [vars] [ratio] [count]
//! ```

use bpa_sat::generator::gen_random_3sat;
use bpa_sat::solver::{solve_batch, SolverConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(50), |s| s.parse())?;
    let ratio: f64 = args.next().map_or(Ok(2.0), |s| s.parse())?;
    let count: u64 = args.next().map_or(Ok(100), |s| s.parse())?;

    let m = (n as f64 * ratio).round() as usize;
    let formulas = (0..count).map(|k| gen_random_3sat(n, m, k)).collect::<Result<Vec<_>, _>>()?;
    let config = SolverConfig::default();
    let once = solve_batch(&formulas, &config.without_restarts());
    let with = solve_batch(&formulas, &config);

    let mut histogram = vec![0usize; config.max_restarts + 1];
    let (mut first, mut total) = (0, 0);
    for (a, b) in once.iter().zip(&with) {
        let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
        first += a.is_sat() as usize;
        if b.is_sat() {
            total += 1;
            histogram[b.attempts - 1] += 1;
        }
    }
    println!("{n} variables, {m} clauses, {count} instances");
    println!("solved by the first attempt: {first}");
    println!("solved within {} attempts:   {total}", config.max_restarts + 1);
    for (k, h) in histogram.iter().enumerate().filter(|(_, &h)| h > 0) {
        println!("  attempt {:>2}: {h}", k + 1);
    }
    Ok(())
}
