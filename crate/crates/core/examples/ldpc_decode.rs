//! Sum-product decoding of a noisy word on the 3×4 code, compared with
//! maximum likelihood by enumeration.

use bpa_sat::graph::{FactorGraph, ParityMatrix};
use bpa_sat::ldpc::{brute_force_ml, decode, DecodeOutcome, ParityInstance};
use bpa_sat::EngineConfig;

fn bits(word: &[bool]) -> String {
    word.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn main() -> anyhow::Result<()> {
    let h = ParityMatrix::from_dense(&[[1u8, 1, 1, 0], [1, 1, 0, 1], [0, 1, 1, 1]])?;
    // channel beliefs P(bit = 1): a clean 1011, an ambiguous word on which the
    // loopy decoder keeps flipping, and a word near 0000
    for priors in [vec![0.9, 0.1, 0.9, 0.9], vec![0.8, 0.55, 0.3, 0.9], vec![0.2, 0.3, 0.1, 0.6]] {
        let instance = ParityInstance::new(FactorGraph::from_parity_matrix(&h)?, priors.clone())?;
        let ml = brute_force_ml(&h, &priors).expect("the zero word is always a codeword");
        match decode(&instance, &EngineConfig::default())? {
            DecodeOutcome::Codeword { bits: word, iterations } => {
                println!("{priors:?}: decoded {} in {iterations} iterations, ML {}", bits(&word), bits(&ml))
            }
            DecodeOutcome::Failed { iterations } => {
                println!("{priors:?}: no codeword after {iterations} iterations, ML {}", bits(&ml))
            }
        }
    }
    Ok(())
}
