//! The 3×4 parity-check matrix as a factor graph, read from alist text.

use bpa_sat::alist;
use bpa_sat::graph::FactorGraph;

const H: &str = "4 3
3 3
2 3 2 2
3 3 3
1 2
1 2 3
1 3
2 3
1 2 3
1 2 4
2 3 4
";

fn main() -> anyhow::Result<()> {
    let h = alist::parse_alist(H)?;
    let g = FactorGraph::from_parity_matrix(&h)?;
    println!("{} checks, {} bits, {} edges", g.num_checks(), g.num_vars(), g.num_edges());
    for c in 0..g.num_checks() {
        let bits: Vec<String> = g.check_edges(c).map(|id| format!("v{}", g.edge(id).var + 1)).collect();
        println!("  c{} - {}", c + 1, bits.join(" "));
    }

    println!("codewords:");
    for w in 0u32..1 << h.num_cols() {
        let word: Vec<bool> = (0..h.num_cols()).map(|k| w >> k & 1 == 1).collect();
        if h.is_codeword(&word) {
            println!("  {}", word.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
        }
    }
    print!("{}", alist::write_alist(&h));
    Ok(())
}
