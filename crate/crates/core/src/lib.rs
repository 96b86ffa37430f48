//! Monotone and nonmonotone trust-region methods for smooth unconstrained
//! minimization, with a problem registry and a benchmarking harness.
//!
//! ```
//! use nmtr::{minimize, problems, SolverConfig, Strategy};
//!
//! let p = problems::get_problem("NCR", None).unwrap();
//! let out = minimize(&p, &SolverConfig::with_strategy(Strategy::Term2)).unwrap();
//! assert!(out.run.final_grad_norm <= 1e-5);
//! ```

pub mod config;
pub mod experiment;
pub mod gradcheck;
pub mod hessian;
pub mod nonmonotone;
pub mod problem;
pub mod problems;
pub mod profiles;
pub mod solver;
pub mod subproblem;

pub use config::{ConfigError, RadiusRule, SolverConfig, Strategy};
pub use problem::{FnObjective, IterateRecord, Objective, Problem, RunRecord, Status};
pub use solver::{minimize, minimize_from, solver_label, SolverError, SolverOutcome};
