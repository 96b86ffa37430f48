//! Benchmark harness behind the command-line front end.
//!
//! An experiment runs every solver of a roster on every problem of a suite and
//! writes:
//!
//! - `results.csv` with `problem,solver,ng,nf,status`,
//! - `traces/<problem>__<solver>.csv`, one line per trial step,
//! - `profiles_<measure>.csv` with `solver,tau,rho` for `ng`, `nf` and `mixed`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{RadiusRule, SolverConfig, Strategy};
use crate::gradcheck;
use crate::nonmonotone::{convex_weights, tbar_direct, NonmonotoneState};
use crate::problem::{Problem, RunRecord, Status};
use crate::problems::{self, ProblemError};
use crate::profiles::{
    default_grid, performance_ratios, profile_curve, write_profile_csv, Measure, ProfileError,
    ProfileMatrix,
};
use crate::solver::{minimize, solver_label, write_trace_csv, SolverError};

/// Window length used by every windowed strategy in the experiments.
pub const DEFAULT_WINDOW: usize = 10;
/// Fixed weight of the Zhang–Hager average.
pub const ZHANG_HAGER_ETA: f64 = 0.85;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown solver `{0}` (expected ttr, nmtr-g, nmtr-h, nmtr-n, nmtr-m, nmtr-1 or nmtr-2, optionally suffixed with -<eta0>)")]
    UnknownSolver(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("invalid configuration for `{solver}`: {source}")]
    Solver {
        solver: String,
        #[source]
        source: SolverError,
    },
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

impl ExperimentError {
    fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Errors caused by the user's input rather than the environment.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Self::UnknownSolver(_) | Self::Problem(_) | Self::Solver { .. } | Self::Config(_)
        )
    }
}

/// Per-solver knobs that may differ from the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverride {
    pub eta0: Option<f64>,
    pub window_n: Option<usize>,
    pub radius_rule: Option<RadiusRule>,
}

fn default_suite() -> String {
    "table1".to_string()
}

fn default_solvers() -> Vec<String> {
    ["ttr", "nmtr-1", "nmtr-2"].map(String::from).to_vec()
}

fn default_epsilon() -> f64 {
    1e-5
}

fn default_k_max() -> usize {
    10_000
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_workers() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_suite")]
    pub suite: String,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<String>,
    /// Keyed by the base solver name (`nmtr-1`, ...).
    #[serde(default)]
    pub overrides: BTreeMap<String, SolverOverride>,
    /// Expands each schedule-driven solver into one entry per `η_0`.
    #[serde(default)]
    pub eta_sweep: Vec<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suite: default_suite(),
            solvers: default_solvers(),
            overrides: BTreeMap::new(),
            eta_sweep: Vec::new(),
            epsilon: default_epsilon(),
            k_max: default_k_max(),
            out_dir: default_out_dir(),
            workers: default_workers(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    /// Resolves the solver roster, applying the sweep and overrides.
    pub fn solver_specs(&self) -> Result<Vec<SolverSpec>, ExperimentError> {
        if self.solvers.is_empty() {
            return Err(ExperimentError::Config("solver list is empty".into()));
        }
        if self.workers == 0 {
            return Err(ExperimentError::Config("workers must be ≥ 1".into()));
        }
        for key in self.overrides.keys() {
            strategy_for(key).ok_or_else(|| ExperimentError::UnknownSolver(key.clone()))?;
        }
        let mut specs = Vec::new();
        for name in &self.solvers {
            let (base, eta) = split_solver_name(name)?;
            let strategy = strategy_for(base).expect("validated by split_solver_name");
            let sweepable = uses_schedule(strategy);
            if eta.is_none() && sweepable && !self.eta_sweep.is_empty() {
                for &e in &self.eta_sweep {
                    specs.push(self.spec(base, Some(e))?);
                }
            } else {
                specs.push(self.spec(base, eta)?);
            }
        }
        Ok(specs)
    }

    fn spec(&self, base: &str, eta0: Option<f64>) -> Result<SolverSpec, ExperimentError> {
        let strategy = strategy_for(base).ok_or_else(|| ExperimentError::UnknownSolver(base.into()))?;
        let mut cfg = default_solver_config(strategy);
        cfg.epsilon = self.epsilon;
        cfg.k_max = self.k_max;
        if let Some(o) = self.overrides.get(base) {
            if let Some(e) = o.eta0 {
                cfg.eta0 = e;
            }
            if let Some(n) = o.window_n {
                cfg.window_n = n;
            }
            if let Some(r) = o.radius_rule {
                cfg.radius_rule = r;
            }
        }
        let label = match eta0 {
            Some(e) => {
                cfg.eta0 = e;
                format!("{base}-{e}")
            }
            None => base.to_string(),
        };
        let cfg = cfg.validate().map_err(|e| ExperimentError::Solver {
            solver: label.clone(),
            source: e.into(),
        })?;
        Ok(SolverSpec { label, config: cfg })
    }
}

/// A named solver configuration in an experiment roster.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec {
    pub label: String,
    pub config: SolverConfig,
}

pub fn strategy_for(name: &str) -> Option<Strategy> {
    Strategy::ALL
        .into_iter()
        .find(|&s| solver_label(s).eq_ignore_ascii_case(name))
}

fn uses_schedule(s: Strategy) -> bool {
    matches!(s, Strategy::Amini | Strategy::Mo | Strategy::Term1 | Strategy::Term2)
}

/// Splits `nmtr-1-0.15` into `("nmtr-1", Some(0.15))`.
fn split_solver_name(name: &str) -> Result<(&str, Option<f64>), ExperimentError> {
    if strategy_for(name).is_some() {
        return Ok((name, None));
    }
    if let Some((base, eta)) = name.rsplit_once('-') {
        if let (Some(s), Ok(e)) = (strategy_for(base), eta.parse::<f64>()) {
            if uses_schedule(s) {
                return Ok((base, Some(e)));
            }
        }
    }
    Err(ExperimentError::UnknownSolver(name.to_string()))
}

/// Solver settings used in the experiments for each strategy.
pub fn default_solver_config(strategy: Strategy) -> SolverConfig {
    SolverConfig {
        window_n: DEFAULT_WINDOW,
        eta_fixed: Some(ZHANG_HAGER_ETA),
        ..SolverConfig::with_strategy(strategy)
    }
}

/// Runs every solver on every problem. Results come back ordered by problem,
/// then solver, whatever the worker count.
pub fn run_matrix(
    problems: &[Problem],
    solvers: &[SolverSpec],
    workers: usize,
) -> Result<Vec<RunRecord>, ExperimentError> {
    let jobs: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|p| (0..solvers.len()).map(move |s| (p, s)))
        .collect();
    let run_one = |&(p, s): &(usize, usize)| -> Result<RunRecord, ExperimentError> {
        let spec = &solvers[s];
        let outcome = minimize(&problems[p], &spec.config).map_err(|e| ExperimentError::Solver {
            solver: spec.label.clone(),
            source: e,
        });
        Ok(match outcome {
            Ok(o) => {
                let mut run = o.run;
                run.solver_name = spec.label.clone();
                run
            }
            Err(ExperimentError::Solver {
                source: SolverError::NonFiniteStart,
                ..
            }) => failed_start(&problems[p], &spec.label),
            Err(e) => return Err(e),
        })
    };
    if workers <= 1 {
        return jobs.iter().map(run_one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    pool.install(|| jobs.par_iter().map(run_one).collect())
}

fn failed_start(problem: &Problem, solver: &str) -> RunRecord {
    RunRecord {
        problem_name: problem.name.clone(),
        solver_name: solver.to_string(),
        n_iter: 0,
        n_feval: 1,
        n_geval: 1,
        final_f: f64::NAN,
        final_grad_norm: f64::NAN,
        status: Status::NumericFailure,
        trace: Vec::new(),
        diagnostics: Default::default(),
    }
}

/// Writes `problem,solver,ng,nf,status`.
pub fn write_results_csv<W: Write>(runs: &[RunRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["problem", "solver", "ng", "nf", "status"])?;
    for r in runs {
        w.write_record([
            r.problem_name.as_str(),
            r.solver_name.as_str(),
            &r.n_geval.to_string(),
            &r.n_feval.to_string(),
            r.status.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ResultRow {
    pub problem: String,
    pub solver: String,
    pub ng: usize,
    pub nf: usize,
    pub status: String,
}

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<ResultRow>, ExperimentError> {
    let mut rdr = csv::Reader::from_reader(input);
    let rows: Result<Vec<ResultRow>, _> = rdr.deserialize().collect();
    Ok(rows?)
}

/// Builds the measure matrix from result rows; anything not `converged` is a
/// failure. Problems and solvers keep their first-appearance order.
pub fn profile_matrix(rows: &[ResultRow], measure: Measure) -> Result<ProfileMatrix, ExperimentError> {
    let mut problems: Vec<String> = Vec::new();
    let mut solvers: Vec<String> = Vec::new();
    for r in rows {
        if !problems.contains(&r.problem) {
            problems.push(r.problem.clone());
        }
        if !solvers.contains(&r.solver) {
            solvers.push(r.solver.clone());
        }
    }
    let mut t = vec![vec![f64::NAN; solvers.len()]; problems.len()];
    let mut failed = vec![vec![true; solvers.len()]; problems.len()];
    let mut seen = vec![vec![false; solvers.len()]; problems.len()];
    for r in rows {
        let p = problems.iter().position(|x| x == &r.problem).unwrap();
        let s = solvers.iter().position(|x| x == &r.solver).unwrap();
        if seen[p][s] {
            return Err(ExperimentError::Config(format!(
                "duplicate result row for {} / {}",
                r.problem, r.solver
            )));
        }
        seen[p][s] = true;
        let converged = r
            .status
            .parse::<Status>()
            .map_err(ExperimentError::Config)?
            == Status::Converged;
        t[p][s] = measure.value(r.nf, r.ng);
        failed[p][s] = !converged;
    }
    if seen.iter().flatten().any(|&v| !v) {
        return Err(ExperimentError::Config(
            "result matrix is incomplete: every problem needs a row for every solver".into(),
        ));
    }
    Ok(ProfileMatrix::new(problems, solvers, t, failed)?)
}

/// Computes the profile for `measure` and writes it as `solver,tau,rho`.
/// Returns the names of problems no solver solved.
pub fn write_profile<W: Write>(
    rows: &[ResultRow],
    measure: Measure,
    out: W,
) -> Result<Vec<String>, ExperimentError> {
    let m = profile_matrix(rows, measure)?;
    let r = performance_ratios(&m)?;
    let grid = default_grid(&r);
    let curves = profile_curve(&r, &grid)?;
    write_profile_csv(&r, &grid, &curves, out)?;
    Ok(r.excluded)
}

fn trace_file_name(run: &RunRecord) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
            .collect()
    };
    format!("{}__{}.csv", clean(&run.problem_name), clean(&run.solver_name))
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>, ExperimentError> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| ExperimentError::io(path, e))
}

#[derive(Debug)]
pub struct ExperimentSummary {
    pub runs: Vec<RunRecord>,
    pub out_dir: PathBuf,
    /// Problems left out of the profiles because every solver failed.
    pub excluded: Vec<String>,
}

/// Runs the experiment and writes all artifacts under `cfg.out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary, ExperimentError> {
    let specs = cfg.solver_specs()?;
    let problems = problems::list_suite(&cfg.suite)?;
    let runs = run_matrix(&problems, &specs, cfg.workers)?;

    let out = &cfg.out_dir;
    let traces = out.join("traces");
    fs::create_dir_all(&traces).map_err(|e| ExperimentError::io(&traces, e))?;

    let results_path = out.join("results.csv");
    write_results_csv(&runs, create(&results_path)?)?;
    for run in &runs {
        let path = traces.join(trace_file_name(run));
        write_trace_csv(run, create(&path)?)?;
    }

    let rows: Vec<ResultRow> = runs
        .iter()
        .map(|r| ResultRow {
            problem: r.problem_name.clone(),
            solver: r.solver_name.clone(),
            ng: r.n_geval,
            nf: r.n_feval,
            status: r.status.as_str().to_string(),
        })
        .collect();
    let mut excluded = Vec::new();
    for measure in Measure::ALL {
        let path = out.join(format!("profiles_{}.csv", measure.as_str()));
        let mut file = create(&path)?;
        match write_profile(&rows, measure, &mut file) {
            Ok(ex) => excluded = ex,
            Err(ExperimentError::Profile(ProfileError::NothingSolved)) => {
                writeln!(file, "solver,tau,rho").map_err(|e| ExperimentError::io(&path, e))?;
                excluded = rows.iter().map(|r| r.problem.clone()).collect();
                excluded.dedup();
            }
            Err(e) => return Err(e),
        }
        file.flush().map_err(|e| ExperimentError::io(&path, e))?;
    }
    Ok(ExperimentSummary {
        runs,
        out_dir: out.clone(),
        excluded,
    })
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn print<W: Write>(&self, mut out: W) -> io::Result<()> {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{mark}  {:<40} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Largest deviations seen by [`term_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermEquivalence {
    pub windows: usize,
    pub max_rel_diff: f64,
    pub max_weight_sum_err: f64,
}

/// Feeds random `(f, η)` sequences through the recursive state and compares
/// its `T̄` with the direct windowed sum.
pub fn term_equivalence(windows: usize, seed: u64) -> TermEquivalence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel_diff = 0.0f64;
    let mut max_weight_sum_err = 0.0f64;
    for _ in 0..windows {
        let n = rng.gen_range(1..=10);
        let steps = rng.gen_range(0..=3 * n + 2);
        let mut st = NonmonotoneState::new(Strategy::Term1, rng.gen_range(-10.0..=10.0), n);
        for _ in 0..steps {
            st.update(rng.gen_range(-10.0..=10.0), rng.gen_range(0.0..1.0))
                .expect("sampled values are valid");
        }
        let f: Vec<f64> = st.f_window().collect();
        let eta_all: Vec<f64> = st.eta_window().collect();
        let eta = &eta_all[eta_all.len() + 1 - f.len()..];
        let direct = tbar_direct(&f, eta).expect("aligned windows");
        let rel = (direct - st.tbar()).abs() / direct.abs().max(1.0);
        max_rel_diff = max_rel_diff.max(rel);
        let sum: f64 = convex_weights(eta).iter().sum();
        max_weight_sum_err = max_weight_sum_err.max((sum - 1.0).abs());
    }
    TermEquivalence {
        windows,
        max_rel_diff,
        max_weight_sum_err,
    }
}

/// Gradient checks for an explicit problem list.
pub fn verify_gradients(problems: &[Problem]) -> Vec<CheckResult> {
    problems
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let report = gradcheck::check_problem(p, 10, 0x5eed + i as u64);
            CheckResult {
                name: format!("gradient {}", p.name),
                passed: report.passed(),
                detail: format!(
                    "max rel err {:.2e} over {} points",
                    report.worst_error, report.points
                ),
            }
        })
        .collect()
}

/// Runs every strategy on `problems` with the Cauchy-fraction check enabled.
pub fn verify_cauchy(problems: &[Problem], workers: usize) -> Result<Vec<CheckResult>, ExperimentError> {
    let specs: Vec<SolverSpec> = Strategy::ALL
        .into_iter()
        .map(|s| SolverSpec {
            label: solver_label(s).to_string(),
            config: SolverConfig {
                cauchy_fraction_check: Some(0.5),
                ..default_solver_config(s)
            },
        })
        .collect();
    let runs = run_matrix(problems, &specs, workers)?;
    let checks: usize = runs.iter().map(|r| r.diagnostics.cauchy_checks).sum();
    let violations: Vec<String> = runs
        .iter()
        .filter(|r| r.diagnostics.cauchy_violations > 0)
        .map(|r| format!("{}/{}", r.problem_name, r.solver_name))
        .collect();
    Ok(vec![CheckResult {
        name: "cauchy fraction (beta = 0.5)".into(),
        passed: violations.is_empty(),
        detail: if violations.is_empty() {
            format!("{checks} subproblem solves, no violations")
        } else {
            format!("violations in {}", violations.join(", "))
        },
    }])
}

/// Full verification of a list of problems.
pub fn verify_problems(problems: &[Problem], workers: usize) -> Result<VerifyReport, ExperimentError> {
    let mut checks = verify_gradients(problems);
    let eq = term_equivalence(1000, 42);
    checks.push(CheckResult {
        name: "windowed term direct vs recursive".into(),
        passed: eq.max_rel_diff <= 1e-12 && eq.max_weight_sum_err <= 1e-14,
        detail: format!(
            "{} windows, max rel diff {:.2e}, max weight-sum err {:.2e}",
            eq.windows, eq.max_rel_diff, eq.max_weight_sum_err
        ),
    });
    checks.extend(verify_cauchy(problems, workers)?);
    Ok(VerifyReport { checks })
}

/// Verification over a named suite.
pub fn verify(suite: &str, workers: usize) -> Result<VerifyReport, ExperimentError> {
    let problems = problems::list_suite(suite)?;
    verify_problems(&problems, workers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_roster_resolves() {
        let specs = ExperimentConfig::default().solver_specs().unwrap();
        let labels: Vec<&str> = specs.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["ttr", "nmtr-1", "nmtr-2"]);
        assert_eq!(specs[1].config.eta0, 0.25);
        assert_eq!(specs[2].config.eta0, 0.45);
        assert_eq!(specs[1].config.window_n, 10);
        assert_eq!(specs[0].config.strategy, Strategy::Monotone);
    }

    #[test]
    fn eta_sweep_expands_schedule_solvers() {
        let cfg = ExperimentConfig {
            solvers: vec!["ttr".into(), "nmtr-1".into(), "nmtr-2".into()],
            eta_sweep: vec![0.15, 0.25, 0.35, 0.45],
            ..ExperimentConfig::default()
        };
        let specs = cfg.solver_specs().unwrap();
        assert_eq!(specs.len(), 9);
        assert_eq!(specs[1].label, "nmtr-1-0.15");
        assert_eq!(specs[8].label, "nmtr-2-0.45");
        assert_eq!(specs[8].config.eta0, 0.45);
        assert_eq!(specs[3].config.eta0, 0.35);
    }

    #[test]
    fn suffixed_names_and_overrides() {
        let cfg = ExperimentConfig::from_json(
            r#"{"solvers": ["nmtr-2-0.15", "nmtr-h", "nmtr-g"],
                "overrides": {"nmtr-g": {"window_n": 5, "radius_rule": "classic"}}}"#,
        )
        .unwrap();
        let specs = cfg.solver_specs().unwrap();
        assert_eq!(specs[0].config.eta0, 0.15);
        assert_eq!(specs[1].config.eta_fixed, Some(0.85));
        assert_eq!(specs[2].config.window_n, 5);
        assert_eq!(specs[2].config.radius_rule, RadiusRule::Classic);
    }

    #[test]
    fn config_errors() {
        for bad in [
            r#"{"solvers": ["lbfgs"]}"#,
            r#"{"solvers": ["ttr-0.2"]}"#,
            r#"{"overrides": {"nope": {}}}"#,
            r#"{"solvers": []}"#,
            r#"{"workers": 0}"#,
        ] {
            let err = ExperimentConfig::from_json(bad)
                .and_then(|c| c.solver_specs())
                .unwrap_err();
            assert!(err.is_config_error(), "{bad}: {err}");
        }
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let eta = ExperimentConfig {
            solvers: vec!["nmtr-1-1.5".into()],
            ..ExperimentConfig::default()
        };
        assert!(matches!(eta.solver_specs(), Err(ExperimentError::Solver { .. })));
    }

    #[test]
    fn results_round_trip_into_a_profile() {
        let rows = vec![
            ResultRow { problem: "a".into(), solver: "x".into(), ng: 1, nf: 1, status: "converged".into() },
            ResultRow { problem: "a".into(), solver: "y".into(), ng: 2, nf: 3, status: "converged".into() },
            ResultRow { problem: "b".into(), solver: "x".into(), ng: 4, nf: 4, status: "max_iter".into() },
            ResultRow { problem: "b".into(), solver: "y".into(), ng: 2, nf: 2, status: "converged".into() },
        ];
        let m = profile_matrix(&rows, Measure::Ng).unwrap();
        assert_eq!(m.t, vec![vec![1.0, 2.0], vec![4.0, 2.0]]);
        assert_eq!(m.failed, vec![vec![false, false], vec![true, false]]);
        let mut buf = Vec::new();
        write_profile(&rows, Measure::Mixed, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("solver,tau,rho\n"));
        assert!(profile_matrix(&rows[..3], Measure::Nf).is_err());
    }

    #[test]
    fn term_equivalence_holds() {
        let eq = term_equivalence(200, 3);
        assert!(eq.max_rel_diff <= 1e-12);
        assert!(eq.max_weight_sum_err <= 1e-14);
    }
}
