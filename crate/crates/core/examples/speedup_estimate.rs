//! Hardware time per iteration and estimated speedup over a software solver.
//!
//! ```text
//! cargo run --example speedup_estimate -- <baseline seconds> <iterations>
//! ```

use bpa_sat::bench::{estimate_speedup, hardware_seconds, SpiModel};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let t: f64 = args.next().map_or(Ok(0.01), |s| s.parse())?;
    let iters: usize = args.next().map_or(Ok(20), |s| s.parse())?;

    let model = SpiModel::default();
    println!(
        "codeword {} bits at {:.3e} bit/s, {} iterations per codeword",
        model.codeword_length, model.throughput, model.reference_iterations
    );
    println!("seconds per iteration: {:.4e}", model.spi());
    println!("hardware time for {iters} iterations: {:.4e} s", hardware_seconds(iters, &model));
    println!("speedup over {t} s: {:.1}x", estimate_speedup(t, iters, &model)?);
    Ok(())
}
