//! Break-and-restart driver around the inner message-passing loop.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cnf::{Assignment, CnfFormula};
use crate::engine::{self, EngineConfig, EngineError, InitPolicy, InnerOutcome};
use crate::graph::{FactorGraph, GraphError};

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartPolicy {
    /// First attempt from uniform messages, later ones from random messages.
    UniformFirstThenRandom,
    AllRandom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub engine: EngineConfig,
    /// Extra attempts after the first; 0 disables restarts.
    pub max_restarts: usize,
    pub seed: u64,
    pub restart_policy: RestartPolicy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            engine: EngineConfig::default(),
            max_restarts: 9,
            seed: 0,
            restart_policy: RestartPolicy::UniformFirstThenRandom,
        }
    }
}

impl SolverConfig {
    pub fn without_restarts(self) -> Self {
        SolverConfig { max_restarts: 0, ..self }
    }
}

/// Independent seed number `index` of the stream rooted at `master`.
///
/// Uses ChaCha's stream selector, so derived seeds depend only on
/// `(master, index)` and never on how many other seeds were drawn.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndReason {
    Solved,
    Converged,
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttemptRecord {
    pub iterations: usize,
    pub end: EndReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Sat(Assignment),
    /// No satisfying assignment found. Says nothing about satisfiability.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub total_iterations: usize,
    pub attempts: usize,
    pub records: Vec<AttemptRecord>,
    /// Set for a formula without clauses, which is returned as satisfied
    /// without running the engine.
    pub degenerate: bool,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self.status, SolveStatus::Sat(_))
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match &self.status {
            SolveStatus::Sat(a) => Some(a),
            SolveStatus::Unknown => None,
        }
    }

    /// Iterations of the attempt that found the assignment.
    pub fn solving_attempt_iterations(&self) -> Option<usize> {
        self.records.last().filter(|r| r.end == EndReason::Solved).map(|r| r.iterations)
    }
}

fn attempt_policy(config: &SolverConfig, attempt: usize) -> InitPolicy {
    match (config.restart_policy, attempt) {
        (RestartPolicy::UniformFirstThenRandom, 0) => InitPolicy::Uniform,
        _ => InitPolicy::Random { seed: derive_seed(config.seed, attempt as u64) },
    }
}

pub fn solve(formula: &CnfFormula, config: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    config.engine.validate()?;
    if formula.is_empty() {
        return Ok(SolveOutcome {
            status: SolveStatus::Sat(Assignment::all_false(formula.num_vars())),
            total_iterations: 0,
            attempts: 0,
            records: Vec::new(),
            degenerate: true,
        });
    }
    let graph = FactorGraph::from_cnf(formula)?;
    let mut records = Vec::with_capacity(config.max_restarts + 1);
    for attempt in 0..=config.max_restarts {
        let init = engine::init_messages(&graph, attempt_policy(config, attempt), &config.engine);
        let outcome = engine::run_inner_loop(formula, &graph, init, &config.engine)?;
        let iterations = outcome.iterations();
        let (end, found) = match outcome {
            InnerOutcome::Solved { assignment, .. } => (EndReason::Solved, Some(assignment)),
            InnerOutcome::Converged { .. } => (EndReason::Converged, None),
            InnerOutcome::Exhausted { .. } => (EndReason::Exhausted, None),
        };
        records.push(AttemptRecord { iterations, end });
        if let Some(assignment) = found {
            debug_assert!(formula.verify(&assignment).is_ok_and(|v| v.is_satisfied()));
            return Ok(finish(SolveStatus::Sat(assignment), records));
        }
    }
    Ok(finish(SolveStatus::Unknown, records))
}

fn finish(status: SolveStatus, records: Vec<AttemptRecord>) -> SolveOutcome {
    SolveOutcome {
        status,
        total_iterations: records.iter().map(|r| r.iterations).sum(),
        attempts: records.len(),
        records,
        degenerate: false,
    }
}

/// Config for instance `index` of a batch rooted at `config.seed`.
pub fn instance_config(config: &SolverConfig, index: usize) -> SolverConfig {
    SolverConfig { seed: derive_seed(config.seed, index as u64), ..*config }
}

/// Solves every instance on the rayon pool. Results are identical to
/// [`solve_batch_sequential`].
pub fn solve_batch(instances: &[CnfFormula], config: &SolverConfig) -> Vec<Result<SolveOutcome, SolveError>> {
    instances.par_iter().enumerate().map(|(i, f)| solve(f, &instance_config(config, i))).collect()
}

pub fn solve_batch_sequential(
    instances: &[CnfFormula],
    config: &SolverConfig,
) -> Vec<Result<SolveOutcome, SolveError>> {
    instances.iter().enumerate().map(|(i, f)| solve(f, &instance_config(config, i))).collect()
}
