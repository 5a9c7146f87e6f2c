//! Belief-propagation SAT solving.
//!
//! A CNF formula becomes a bipartite graph of clause and variable nodes.
//! Clause→variable and variable→clause probability messages are iterated on a
//! flooding schedule, the variable posteriors are thresholded into an
//! assignment, and the assignment is checked against the formula after every
//! iteration. Runs that stall are abandoned and restarted from random messages.
//! The solver is incomplete: it finds satisfying assignments or gives up, and
//! never proves unsatisfiability.
//!
//! - [`cnf`], [`dimacs`], [`generator`]: formulas, DIMACS I/O, random 3-SAT.
//! - [`graph`], [`alist`]: factor graphs from clauses or parity-check matrices.
//! - [`engine`]: the message-passing inner loop.
//! - [`solver`]: break-and-restart driver and batches.
//! - [`ldpc`]: classical XOR-check sum-product decoding on the same machinery.
//! - [`bench`]: completeness statistics, hardware time model, CSV reports.
//!
//! ```
//! use bpa_sat::{dimacs, solver};
//!
//! let f = dimacs::parse_dimacs("p cnf 3 2\n1 -3 0\n2 3 -1 0\n").unwrap();
//! let out = solver::solve(&f, &solver::SolverConfig::default()).unwrap();
//! let a = out.assignment().expect("satisfiable and easy");
//! assert!(f.verify(a).unwrap().is_satisfied());
//! ```

pub mod alist;
pub mod bench;
pub mod cnf;
pub mod dimacs;
pub mod engine;
pub mod generator;
pub mod graph;
pub mod ldpc;
pub mod solver;

pub use cnf::{Assignment, CnfFormula, Literal, Polarity, Verdict};
pub use engine::{EngineConfig, InitPolicy, MessageState};
pub use graph::{FactorGraph, ParityMatrix};
pub use solver::{solve, SolveOutcome, SolveStatus, SolverConfig};
