//! Flooding belief propagation over clause graphs.
//!
//! One iteration is three phases separated by full barriers:
//!
//! 1. every clause→variable message `r` is recomputed from the previous `q`;
//! 2. every variable→clause message `q` is recomputed from the new `r`;
//! 3. every variable posterior `Q` is recomputed from the new `r`.
//!
//! Each phase reads only buffers written by an earlier phase, so the per-edge
//! (or per-variable) work inside a phase is order independent.
//!
//! Probability pairs are stored as `[p(0), p(1)]`, indexed by the variable
//! value. Variable-side products carry no channel prior: with no information
//! about a SAT instance, the uniform prior contributes only a constant factor
//! that normalization removes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{Assignment, CnfFormula, Literal};
use crate::graph::{EdgeKind, FactorGraph, GraphKind};

/// `[p(v = 0), p(v = 1)]`.
pub type Pair = [f64; 2];

pub const UNIFORM: Pair = [0.5, 0.5];

/// Longest clause [`oracle_clause_marginal`] will enumerate.
pub const ORACLE_MAX_CLAUSE: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("epsilon must lie in (0, 0.5), got {0}")]
    Epsilon(f64),
    #[error("damping must lie in [0, 1), got {0}")]
    Damping(f64),
    #[error("convergence tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("max_iterations must be at least 1")]
    NoIterations,
    #[error("factor graph does not match the formula")]
    GraphMismatch,
    #[error("operation needs a clause graph")]
    NotClauseGraph,
    #[error("message state does not fit the graph")]
    StateMismatch,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("clause of length {0} exceeds the enumeration limit of {ORACLE_MAX_CLAUSE}")]
    ClauseTooLong(usize),
    #[error("position {position} outside clause of length {len}")]
    Position { position: usize, len: usize },
    #[error("{got} q values for a clause of length {len}")]
    Length { got: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub max_iterations: usize,
    /// `q` components are clamped to `[epsilon, 1 - epsilon]`.
    pub epsilon: f64,
    /// A run whose largest `q` change drops below this is at a fixed point.
    pub convergence_tol: f64,
    /// Weight of the previous `q` when mixing in the new one.
    pub damping: f64,
    /// Decision for a variable whose posterior is exactly 1/2.
    pub tie_value: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_iterations: 200, epsilon: 1e-6, convergence_tol: 1e-9, damping: 0.0, tie_value: false }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(EngineError::Epsilon(self.epsilon));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(EngineError::Damping(self.damping));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(EngineError::Tolerance(self.convergence_tol));
        }
        if self.max_iterations == 0 {
            return Err(EngineError::NoIterations);
        }
        Ok(())
    }
}

/// Starting point for the `q` messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitPolicy {
    /// Every `q(1) = 0.5`.
    Uniform,
    /// Every `q(1)` drawn uniformly from `[epsilon, 1 - epsilon]`.
    Random { seed: u64 },
}

/// Per-edge `r` and `q` messages and per-variable posteriors of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    pub r: Vec<Pair>,
    pub q: Vec<Pair>,
    pub posterior: Vec<Pair>,
    pub iteration: usize,
}

impl MessageState {
    fn fits(&self, g: &FactorGraph) -> bool {
        self.r.len() == g.num_edges() && self.q.len() == g.num_edges() && self.posterior.len() == g.num_vars()
    }
}

pub fn init_messages(g: &FactorGraph, policy: InitPolicy, config: &EngineConfig) -> MessageState {
    let q = match policy {
        InitPolicy::Uniform => vec![UNIFORM; g.num_edges()],
        InitPolicy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (lo, hi) = (config.epsilon, 1.0 - config.epsilon);
            (0..g.num_edges())
                .map(|_| {
                    let one = rng.random_range(lo..=hi);
                    [1.0 - one, one]
                })
                .collect()
        }
    };
    MessageState { r: vec![[0.0; 2]; g.num_edges()], q, posterior: vec![[0.0; 2]; g.num_vars()], iteration: 0 }
}

/// Clause→variable messages from the current `q`.
///
/// For an edge whose literal is made true by value `t`, `r(t) = 1` and
/// `r(¬t) = 1 - Π (1 - P_true)` over the other literals of the clause, where
/// `P_true` is the probability the neighbour's `q` gives its literal being true.
///
/// # Panics
///
/// On a parity graph.
pub fn update_clause_to_var(g: &FactorGraph, state: &MessageState) -> Vec<Pair> {
    assert_eq!(g.kind(), GraphKind::Clauses, "clause rule on a parity graph");
    let mut r = vec![[0.0; 2]; g.num_edges()];
    let mut falsify = Vec::new();
    for check in 0..g.num_checks() {
        let ids = g.check_edges(check);
        falsify.clear();
        falsify.extend(ids.clone().map(|id| 1.0 - literal_true(g.edge(id).kind, state.q[id])));
        for_each_excluded_product(&falsify, |k, others_false| {
            let id = ids.start + k;
            let sat = satisfying_value(g.edge(id).kind) as usize;
            r[id][sat] = 1.0;
            r[id][1 - sat] = 1.0 - others_false;
        });
    }
    r
}

/// Variable→clause messages from the current `r`, clamped and optionally
/// damped against the current `q`.
pub fn update_var_to_clause(g: &FactorGraph, state: &MessageState, config: &EngineConfig) -> Vec<Pair> {
    variable_messages(g, &state.r, &state.q, None, config)
}

/// Posterior of every variable from all incident `r`. Isolated variables get
/// `(0.5, 0.5)`.
pub fn compute_posteriors(g: &FactorGraph, state: &MessageState) -> Vec<Pair> {
    posteriors(g, &state.r, None)
}

/// MAP threshold on the posteriors. Variables in no clause are always false.
pub fn hard_decision(g: &FactorGraph, state: &MessageState, config: &EngineConfig) -> Assignment {
    Assignment::from_bits(
        state
            .posterior
            .iter()
            .enumerate()
            .map(|(v, p)| g.var_degree(v) > 0 && decide(p[1], config.tie_value))
            .collect(),
    )
}

pub(crate) fn decide(p_one: f64, tie_value: bool) -> bool {
    if p_one == 0.5 {
        tie_value
    } else {
        p_one > 0.5
    }
}

/// Runs one full iteration in place and returns the largest absolute change
/// of any `q` component.
pub fn iterate(g: &FactorGraph, state: &mut MessageState, config: &EngineConfig) -> f64 {
    state.r = update_clause_to_var(g, state);
    let q = update_var_to_clause(g, state, config);
    let delta = max_change(&state.q, &q);
    state.q = q;
    state.posterior = compute_posteriors(g, state);
    state.iteration += 1;
    delta
}

/// How an inner-loop run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InnerOutcome {
    /// The hard decision satisfies every clause.
    Solved { assignment: Assignment, iterations: usize },
    /// Messages stopped moving without a satisfying decision.
    Converged { iterations: usize },
    /// The iteration budget ran out.
    Exhausted { iterations: usize },
}

impl InnerOutcome {
    pub fn iterations(&self) -> usize {
        match *self {
            InnerOutcome::Solved { iterations, .. }
            | InnerOutcome::Converged { iterations }
            | InnerOutcome::Exhausted { iterations } => iterations,
        }
    }
}

/// Iterates from `init` until the decision satisfies `formula`, the messages
/// reach a fixed point, or `config.max_iterations` is spent.
pub fn run_inner_loop(
    formula: &CnfFormula,
    g: &FactorGraph,
    init: MessageState,
    config: &EngineConfig,
) -> Result<InnerOutcome, EngineError> {
    config.validate()?;
    if !g.matches_formula(formula) {
        return Err(EngineError::GraphMismatch);
    }
    if !init.fits(g) {
        return Err(EngineError::StateMismatch);
    }
    let mut state = init;
    let start = state.iteration;
    loop {
        let delta = iterate(g, &mut state, config);
        let iterations = state.iteration - start;
        let assignment = hard_decision(g, &state, config);
        let verdict = formula.verify(&assignment).expect("assignment sized from the graph");
        if verdict.is_satisfied() {
            return Ok(InnerOutcome::Solved { assignment, iterations });
        }
        if delta < config.convergence_tol {
            return Ok(InnerOutcome::Converged { iterations });
        }
        if iterations >= config.max_iterations {
            return Ok(InnerOutcome::Exhausted { iterations });
        }
    }
}

/// Brute-force `P(clause satisfied | literal at `fixed` has variable value
/// `value`)`, with every other variable independently 1 with probability
/// `q_one[k]`. `q_one[fixed]` is ignored.
pub fn oracle_clause_marginal(
    clause: &[Literal],
    q_one: &[f64],
    fixed: usize,
    value: bool,
) -> Result<f64, OracleError> {
    let len = clause.len();
    if len > ORACLE_MAX_CLAUSE {
        return Err(OracleError::ClauseTooLong(len));
    }
    if fixed >= len {
        return Err(OracleError::Position { position: fixed, len });
    }
    if q_one.len() != len {
        return Err(OracleError::Length { got: q_one.len(), len });
    }
    let others: Vec<usize> = (0..len).filter(|&k| k != fixed).collect();
    let mut total = 0.0;
    for bits in 0u32..(1 << others.len()) {
        let mut weight = 1.0;
        let mut satisfied = clause[fixed].is_true_under(value);
        for (slot, &k) in others.iter().enumerate() {
            let v = bits >> slot & 1 == 1;
            weight *= if v { q_one[k] } else { 1.0 - q_one[k] };
            satisfied |= clause[k].is_true_under(v);
        }
        if satisfied {
            total += weight;
        }
    }
    Ok(total)
}

fn satisfying_value(kind: EdgeKind) -> bool {
    match kind {
        EdgeKind::Positive => true,
        EdgeKind::Negated => false,
        EdgeKind::Parity => unreachable!("parity edge in a clause graph"),
    }
}

#[inline]
fn literal_true(kind: EdgeKind, q: Pair) -> f64 {
    q[satisfying_value(kind) as usize]
}

/// Calls `f(k, Π_{l≠k} factors[l])` for every `k`, via prefix and suffix
/// products (no division).
pub(crate) fn for_each_excluded_product(factors: &[f64], mut f: impl FnMut(usize, f64)) {
    let n = factors.len();
    let mut suffix = vec![1.0; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] * factors[k];
    }
    let mut prefix = 1.0;
    for k in 0..n {
        f(k, prefix * suffix[k + 1]);
        prefix *= factors[k];
    }
}

const RESCALE_BELOW: f64 = 1e-150;

#[inline]
fn mul_pair(a: Pair, b: Pair) -> Pair {
    let p = [a[0] * b[0], a[1] * b[1]];
    let m = p[0].max(p[1]);
    if m > 0.0 && m < RESCALE_BELOW {
        [p[0] / m, p[1] / m]
    } else {
        p
    }
}

/// Normalizes to sum one; an all-zero pair carries no information and maps to
/// `(0.5, 0.5)`.
#[inline]
pub(crate) fn normalize(p: Pair) -> Pair {
    let s = p[0] + p[1];
    if s > 0.0 && s.is_finite() {
        [p[0] / s, p[1] / s]
    } else {
        UNIFORM
    }
}

#[inline]
fn clamp(p: Pair, eps: f64) -> Pair {
    if p[1] < eps {
        [1.0 - eps, eps]
    } else if p[0] < eps {
        [eps, 1.0 - eps]
    } else {
        p
    }
}

pub(crate) fn max_change(old: &[Pair], new: &[Pair]) -> f64 {
    old.iter().zip(new).map(|(a, b)| (a[0] - b[0]).abs().max((a[1] - b[1]).abs())).fold(0.0, f64::max)
}

/// Extrinsic variable→check messages shared by the clause and parity paths.
/// `priors[v]` is `P(v = 1)`; `None` drops the prior term.
pub(crate) fn variable_messages(
    g: &FactorGraph,
    r: &[Pair],
    prev_q: &[Pair],
    priors: Option<&[f64]>,
    config: &EngineConfig,
) -> Vec<Pair> {
    let mut q = vec![UNIFORM; g.num_edges()];
    let mut suffix: Vec<Pair> = Vec::new();
    for v in 0..g.num_vars() {
        let ids = g.var_edges(v);
        let base = priors.map_or([1.0, 1.0], |p| [1.0 - p[v], p[v]]);
        suffix.clear();
        suffix.resize(ids.len() + 1, [1.0, 1.0]);
        for k in (0..ids.len()).rev() {
            suffix[k] = mul_pair(suffix[k + 1], r[ids[k]]);
        }
        let mut prefix = base;
        for (k, &id) in ids.iter().enumerate() {
            let fresh = clamp(normalize(mul_pair(prefix, suffix[k + 1])), config.epsilon);
            q[id] = if config.damping > 0.0 {
                let old = prev_q[id];
                let mixed = [
                    (1.0 - config.damping) * fresh[0] + config.damping * old[0],
                    (1.0 - config.damping) * fresh[1] + config.damping * old[1],
                ];
                clamp(normalize(mixed), config.epsilon)
            } else {
                fresh
            };
            prefix = mul_pair(prefix, r[id]);
        }
    }
    q
}

pub(crate) fn posteriors(g: &FactorGraph, r: &[Pair], priors: Option<&[f64]>) -> Vec<Pair> {
    (0..g.num_vars())
        .map(|v| {
            let base = priors.map_or([1.0, 1.0], |p| [1.0 - p[v], p[v]]);
            normalize(g.var_edges(v).iter().fold(base, |acc, &id| mul_pair(acc, r[id])))
        })
        .collect()
}
