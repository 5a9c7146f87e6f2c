//! Uniform random 3-SAT instances in the shape of SATLIB's `uf` families.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{CnfFormula, Literal, Polarity};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("random 3-SAT needs at least 3 variables, got {0}")]
pub struct TooFewVariables(pub usize);

/// `m` clauses over `n` variables. Each clause picks 3 distinct variables
/// uniformly and negates each with probability 1/2.
pub fn gen_random_3sat(n: usize, m: usize, seed: u64) -> Result<CnfFormula, TooFewVariables> {
    if n < 3 {
        return Err(TooFewVariables(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            index::sample(&mut rng, n, 3)
                .into_iter()
                .map(|v| {
                    let polarity = if rng.random::<bool>() { Polarity::Negated } else { Polarity::Positive };
                    Literal::new(v as u32 + 1, polarity)
                })
                .collect()
        })
        .collect();
    Ok(CnfFormula::new(n, clauses).expect("generated clauses are in range and non-empty"))
}

/// Conventional class label, e.g. `uf20-91`.
pub fn class_label(prefix: &str, n: usize, m: usize) -> String {
    format!("{prefix}{n}-{m}")
}
