//! Probability-domain sum-product decoding over parity checks.
//!
//! Shares the variable-side phases with [`crate::engine`]; the differences are
//! the XOR check rule and the channel prior, which multiplies into every `q`
//! and posterior here.

use thiserror::Error;

use crate::engine::{self, EngineConfig, EngineError, Pair};
use crate::graph::{FactorGraph, GraphKind, ParityMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum LdpcError {
    #[error("graph is not built from a parity-check matrix")]
    NotParityGraph,
    #[error("{got} priors for {expected} variables")]
    PriorCount { expected: usize, got: usize },
    #[error("prior {index} = {value} is not in (0, 1)")]
    PriorRange { index: usize, value: f64 },
    #[error("invalid priors file: {0}")]
    PriorSyntax(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A parity graph plus `P(v = 1)` for every bit.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityInstance {
    graph: FactorGraph,
    priors: Vec<f64>,
}

impl ParityInstance {
    pub fn new(graph: FactorGraph, priors: Vec<f64>) -> Result<Self, LdpcError> {
        if graph.kind() != GraphKind::Parity {
            return Err(LdpcError::NotParityGraph);
        }
        if priors.len() != graph.num_vars() {
            return Err(LdpcError::PriorCount { expected: graph.num_vars(), got: priors.len() });
        }
        if let Some((index, &value)) = priors.iter().enumerate().find(|(_, &p)| !(p > 0.0 && p < 1.0)) {
            return Err(LdpcError::PriorRange { index, value });
        }
        Ok(ParityInstance { graph, priors })
    }

    pub fn graph(&self) -> &FactorGraph {
        &self.graph
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `word · Hᵀ = 0`, checked on the graph's adjacency.
    pub fn satisfies_checks(&self, word: &[bool]) -> bool {
        (0..self.graph.num_checks())
            .all(|c| !self.graph.check_edges(c).fold(false, |acc, id| acc ^ word[self.graph.edge(id).var]))
    }
}

/// Whitespace-separated probabilities; `#` starts a comment.
pub fn parse_priors(text: &str) -> Result<Vec<f64>, LdpcError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|t| t.parse::<f64>().map_err(|_| LdpcError::PriorSyntax(format!("`{t}` is not a number"))))
        .collect()
}

/// Message from a parity check to one of its bits.
///
/// `others` are the `q` pairs of the check's other bits. The result is the
/// probability that the check can be satisfied with the target bit at 0 and
/// at 1, i.e. that the other bits have even / odd parity.
pub fn xor_check_to_var(others: impl IntoIterator<Item = Pair>) -> Pair {
    let bias: f64 = others.into_iter().map(|q| 1.0 - 2.0 * q[1]).product();
    let zero = 0.5 + 0.5 * bias;
    [zero, 1.0 - zero]
}

/// Check→variable messages for every edge of a parity graph.
pub fn update_parity_to_var(g: &FactorGraph, q: &[Pair]) -> Vec<Pair> {
    let mut r = vec![[0.0; 2]; g.num_edges()];
    let mut bias = Vec::new();
    for check in 0..g.num_checks() {
        let ids = g.check_edges(check);
        bias.clear();
        bias.extend(ids.clone().map(|id| 1.0 - 2.0 * q[id][1]));
        engine::for_each_excluded_product(&bias, |k, b| {
            let zero = 0.5 + 0.5 * b;
            r[ids.start + k] = [zero, 1.0 - zero];
        });
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Codeword { bits: Vec<bool>, iterations: usize },
    Failed { iterations: usize },
}

/// Flooding sum-product decoding. Stops as soon as the hard decision
/// satisfies every check, or when the iteration budget is spent.
pub fn decode(instance: &ParityInstance, config: &EngineConfig) -> Result<DecodeOutcome, LdpcError> {
    config.validate()?;
    let g = &instance.graph;
    let priors = instance.priors.as_slice();
    let mut q: Vec<Pair> = g.edges().iter().map(|e| [1.0 - priors[e.var], priors[e.var]]).collect();
    for iteration in 1..=config.max_iterations {
        let r = update_parity_to_var(g, &q);
        q = engine::variable_messages(g, &r, &q, Some(priors), config);
        let bits: Vec<bool> =
            engine::posteriors(g, &r, Some(priors)).iter().map(|p| engine::decide(p[1], config.tie_value)).collect();
        if instance.satisfies_checks(&bits) {
            return Ok(DecodeOutcome::Codeword { bits, iterations: iteration });
        }
    }
    Ok(DecodeOutcome::Failed { iterations: config.max_iterations })
}

/// Maximum-likelihood codeword by enumeration of all `2^n` words (`n ≤ 20`).
/// Ties go to the smallest word in bit order.
pub fn brute_force_ml(matrix: &ParityMatrix, priors: &[f64]) -> Option<Vec<bool>> {
    let n = matrix.num_cols();
    assert!(n <= 20, "enumeration limited to 20 bits");
    (0u32..1 << n)
        .map(|w| (0..n).map(|k| w >> k & 1 == 1).collect::<Vec<_>>())
        .filter(|word| matrix.is_codeword(word))
        .map(|word| {
            let like: f64 = word.iter().zip(priors).map(|(&b, &p)| if b { p } else { 1.0 - p }).product();
            (word, like)
        })
        .fold(None, |best: Option<(Vec<bool>, f64)>, (w, l)| match best {
            Some((bw, bl)) if bl >= l => Some((bw, bl)),
            _ => Some((w, l)),
        })
        .map(|(w, _)| w)
}
