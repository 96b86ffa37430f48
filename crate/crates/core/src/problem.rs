//! Objective oracles and run records shared by the solver and the harness.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A smooth objective `f: ℝⁿ → ℝ` with a hand-coded gradient.
///
/// Implementations must be pure: the same input yields bit-identical output.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Writes `∇f(x)` into `grad`, which has the same length as `x`.
    fn gradient(&self, x: &[f64], grad: &mut [f64]);
}

/// Adapter turning a pair of closures into an [`Objective`].
pub struct FnObjective<F, G> {
    f: F,
    g: G,
}

impl<F, G> FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    pub fn new(f: F, g: G) -> Self {
        Self { f, g }
    }
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        (self.g)(x, grad)
    }
}

/// A test problem: objective, dimension, standard start and (optionally) the
/// known solution.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub x0: Vec<f64>,
    pub f_star: Option<f64>,
    pub x_star: Option<Vec<f64>>,
    objective: Arc<dyn Objective>,
}

impl Problem {
    pub fn new(name: impl Into<String>, x0: Vec<f64>, objective: Arc<dyn Objective>) -> Self {
        assert!(!x0.is_empty(), "problem dimension must be positive");
        Self {
            name: name.into(),
            x0,
            f_star: None,
            x_star: None,
            objective,
        }
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn with_x_star(mut self, x_star: Vec<f64>) -> Self {
        assert_eq!(x_star.len(), self.x0.len());
        self.x_star = Some(x_star);
        self
    }

    /// Same objective, different starting point.
    pub fn with_start(mut self, name: impl Into<String>, x0: Vec<f64>) -> Self {
        assert_eq!(x0.len(), self.x0.len());
        self.name = name.into();
        self.x0 = x0;
        self
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    pub fn eval_f(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        self.objective.value(x)
    }

    pub fn eval_grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.eval_grad_into(x, &mut g);
        g
    }

    pub fn eval_grad_into(&self, x: &[f64], g: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        self.objective.gradient(x, g);
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("f_star", &self.f_star)
            .finish_non_exhaustive()
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIter,
    SubproblemFailure,
    NumericFailure,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIter => "max_iter",
            Status::SubproblemFailure => "subproblem_failure",
            Status::NumericFailure => "numeric_failure",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "converged" => Ok(Status::Converged),
            "max_iter" => Ok(Status::MaxIter),
            "subproblem_failure" => Ok(Status::SubproblemFailure),
            "numeric_failure" => Ok(Status::NumericFailure),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

/// One trial step of the outer/inner cycle.
///
/// `x`, `f`, `grad_norm`, `reference` and `flk` describe the current iterate
/// `x_k`; `delta`, `f_trial`, `pred` and `ratio` describe the trial step taken
/// from it. A rejected trial is followed by another record with the same `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateRecord {
    pub k: usize,
    pub x: Vec<f64>,
    pub f: f64,
    pub grad_norm: f64,
    pub delta: f64,
    /// Reference value `T_k` used in the ratio.
    pub reference: f64,
    /// Running maximum `f_{l(k)}` over the nonmonotone window.
    pub flk: f64,
    pub step_norm: f64,
    pub f_trial: f64,
    pub pred: f64,
    pub ratio: f64,
    pub accepted: bool,
}

/// Per-run safeguards and checks, reported alongside the counters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    /// Number of subproblem solves checked against the Cauchy-fraction bound.
    pub cauchy_checks: usize,
    pub cauchy_violations: usize,
    /// Longest run of consecutive rejections within one outer iteration.
    pub max_inner_rejections: usize,
    pub bfgs_skips: usize,
    pub cg_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem_name: String,
    pub solver_name: String,
    pub n_iter: usize,
    pub n_feval: usize,
    pub n_geval: usize,
    pub final_f: f64,
    pub final_grad_norm: f64,
    pub status: Status,
    pub trace: Vec<IterateRecord>,
    pub diagnostics: RunDiagnostics,
}

impl RunRecord {
    pub fn accepted(&self) -> impl Iterator<Item = &IterateRecord> {
        self.trace.iter().filter(|r| r.accepted)
    }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
