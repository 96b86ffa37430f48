//! Outer trust-region driver.
//!
//! With [`Strategy::Monotone`] this is the classical trust-region method; any
//! other strategy swaps `f_k` in the acceptance ratio for the strategy's
//! reference value `T_k`. Rejected trials shrink the radius and re-solve the
//! subproblem with `T_k` held fixed; the nonmonotone state, the BFGS matrix
//! and the weight schedule advance only on acceptance.

use std::io::Write;

use thiserror::Error;

use crate::config::{ConfigError, RadiusRule, SolverConfig, Strategy};
use crate::hessian::{HessianApprox, UpdateOutcome};
use crate::nonmonotone::{eta_schedule, NonmonotoneState};
use crate::problem::{norm2, IterateRecord, Problem, RunDiagnostics, RunRecord, Status};
use crate::subproblem::{cauchy_bound, steihaug_solve};

/// Consecutive rejections allowed in one outer iteration before the run is
/// declared a numeric failure. The radius guard usually fires first.
pub const MAX_INNER_REJECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("objective or gradient is not finite at the starting point")]
    NonFiniteStart,
    #[error("predicted reduction must be positive, got {0}")]
    NonPositivePred(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOutcome {
    pub run: RunRecord,
    pub x_final: Vec<f64>,
}

/// Nonmonotone acceptance ratio `(T − f_trial) / pred`.
///
/// With `reference = f_k` this is the classical ratio of actual to predicted
/// reduction.
pub fn ratio(reference: f64, f_trial: f64, pred: f64) -> Result<f64, SolverError> {
    if !(pred > 0.0) {
        return Err(SolverError::NonPositivePred(pred));
    }
    Ok((reference - f_trial) / pred)
}

/// New trust radius after a trial with step length `d_norm` and ratio `r_hat`.
pub fn update_radius(
    rule: RadiusRule,
    delta: f64,
    d_norm: f64,
    r_hat: f64,
    cfg: &SolverConfig,
) -> f64 {
    // NaN ratios (non-finite trial values) count as rejections.
    let rejected = !(r_hat >= cfg.mu1);
    match rule {
        RadiusRule::StepBased => {
            if rejected {
                cfg.c1 * d_norm
            } else if r_hat < cfg.mu2 {
                delta
            } else {
                delta.max(cfg.c2 * d_norm)
            }
        }
        RadiusRule::Classic => {
            if rejected {
                cfg.rho1 * delta
            } else if r_hat < cfg.mu2 {
                delta
            } else {
                cfg.rho2 * delta
            }
        }
    }
}

/// Display name used in result tables.
pub fn solver_label(strategy: Strategy) -> &'static str {
    match strategy {
        Strategy::Monotone => "ttr",
        Strategy::Grippo => "nmtr-g",
        Strategy::ZhangHager => "nmtr-h",
        Strategy::Amini => "nmtr-n",
        Strategy::Mo => "nmtr-m",
        Strategy::Term1 => "nmtr-1",
        Strategy::Term2 => "nmtr-2",
    }
}

/// Weight sequence fed to the nonmonotone state, one value per accepted step.
struct EtaSequence {
    fixed: Option<f64>,
    current: f64,
    previous: f64,
    k: usize,
}

impl EtaSequence {
    fn new(cfg: &SolverConfig) -> Self {
        let fixed = match cfg.strategy {
            Strategy::ZhangHager => cfg.eta_fixed,
            _ => None,
        };
        Self {
            fixed,
            current: cfg.eta0,
            previous: cfg.eta0,
            k: 0,
        }
    }

    fn current(&self) -> f64 {
        self.fixed.unwrap_or(self.current)
    }

    fn advance(&mut self) {
        self.k += 1;
        let next = eta_schedule(self.current, self.previous, self.k);
        self.previous = self.current;
        self.current = next;
    }
}

/// Minimizes `problem` from its standard start.
pub fn minimize(problem: &Problem, cfg: &SolverConfig) -> Result<SolverOutcome, SolverError> {
    minimize_from(problem, &problem.x0, cfg)
}

pub fn minimize_from(
    problem: &Problem,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<SolverOutcome, SolverError> {
    let cfg = cfg.clone().validate()?;
    let n = problem.dim();
    assert_eq!(x0.len(), n, "start point has the wrong dimension");

    let mut x = x0.to_vec();
    let mut f = problem.eval_f(&x);
    let mut g = problem.eval_grad(&x);
    let mut n_feval = 1;
    let mut n_geval = 1;
    if !f.is_finite() || g.iter().any(|a| !a.is_finite()) {
        return Err(SolverError::NonFiniteStart);
    }
    let mut gnorm = norm2(&g);

    let mut hess = HessianApprox::identity(n);
    let mut state = NonmonotoneState::new(cfg.strategy, f, cfg.window_n);
    let mut etas = EtaSequence::new(&cfg);
    let mut delta = cfg.delta0_scale * gnorm;
    let mut diag = RunDiagnostics::default();
    let mut trace = Vec::new();
    let mut k = 0;

    let mut trial = vec![0.0; n];
    let mut g_new = vec![0.0; n];

    let status = 'outer: loop {
        if gnorm < cfg.epsilon {
            break Status::Converged;
        }
        if k >= cfg.k_max {
            break Status::MaxIter;
        }
        let reference = state.reference_value();
        let flk = state.flk();
        let delta_min = 1e-14 * norm2(&x).max(1.0);
        let mut rejections = 0;

        let (step, r_hat, f_trial) = loop {
            let sub = match steihaug_solve(&g, |v, out| hess.matvec_into(v, out), delta) {
                Ok(sub) => sub,
                Err(_) => break 'outer Status::NumericFailure,
            };
            diag.cg_iterations += sub.cg_iters;
            if let Some(beta) = cfg.cauchy_fraction_check {
                diag.cauchy_checks += 1;
                let bound = cauchy_bound(beta, gnorm, delta, hess.norm_bound());
                if !(sub.pred >= bound * (1.0 - 1e-8)) {
                    diag.cauchy_violations += 1;
                }
            }
            if !(sub.pred > 0.0) || !sub.pred.is_finite() {
                break 'outer Status::SubproblemFailure;
            }
            for ((t, xi), di) in trial.iter_mut().zip(&x).zip(&sub.d) {
                *t = xi + di;
            }
            let f_trial = problem.eval_f(&trial);
            n_feval += 1;
            let r_hat = if f_trial.is_finite() {
                ratio(reference, f_trial, sub.pred)?
            } else {
                f64::NAN
            };
            let d_norm = norm2(&sub.d);
            let accepted = r_hat >= cfg.mu1;
            trace.push(IterateRecord {
                k,
                x: x.clone(),
                f,
                grad_norm: gnorm,
                delta,
                reference,
                flk,
                step_norm: d_norm,
                f_trial,
                pred: sub.pred,
                ratio: r_hat,
                accepted,
            });
            if accepted {
                diag.max_inner_rejections = diag.max_inner_rejections.max(rejections);
                break (sub.d, r_hat, f_trial);
            }
            rejections += 1;
            delta = update_radius(cfg.radius_rule, delta, d_norm, r_hat, &cfg);
            if delta < delta_min || rejections > MAX_INNER_REJECTIONS {
                diag.max_inner_rejections = diag.max_inner_rejections.max(rejections);
                break 'outer Status::NumericFailure;
            }
        };

        problem.eval_grad_into(&trial, &mut g_new);
        n_geval += 1;
        let s = step;
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        x.copy_from_slice(&trial);
        f = f_trial;
        std::mem::swap(&mut g, &mut g_new);
        gnorm = norm2(&g);
        k += 1;
        if !gnorm.is_finite() {
            break Status::NumericFailure;
        }

        match hess.bfgs_update(&s, &y) {
            Ok(UpdateOutcome::Applied) => {}
            Ok(UpdateOutcome::Skipped) => diag.bfgs_skips += 1,
            Err(_) => break Status::NumericFailure,
        }
        delta = update_radius(cfg.radius_rule, delta, norm2(&s), r_hat, &cfg);
        if state.update(f, etas.current()).is_err() {
            break Status::NumericFailure;
        }
        etas.advance();
    };

    let run = RunRecord {
        problem_name: problem.name.clone(),
        solver_name: solver_label(cfg.strategy).to_string(),
        n_iter: k,
        n_feval,
        n_geval,
        final_f: f,
        final_grad_norm: gnorm,
        status,
        trace,
        diagnostics: diag,
    };
    Ok(SolverOutcome { run, x_final: x })
}

/// Writes one CSV line per trial: `k,f,grad_norm,delta,T,ratio,accepted`.
pub fn write_trace_csv<W: Write>(run: &RunRecord, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "f", "grad_norm", "delta", "T", "ratio", "accepted"])?;
    for r in &run.trace {
        w.write_record(&[
            r.k.to_string(),
            r.f.to_string(),
            r.grad_norm.to_string(),
            r.delta.to_string(),
            r.reference.to_string(),
            r.ratio.to_string(),
            r.accepted.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{dot, FnObjective};
    use std::sync::Arc;

    fn sphere(x0: Vec<f64>) -> Problem {
        Problem::new(
            "sphere",
            x0,
            Arc::new(FnObjective::new(
                |x: &[f64]| 0.5 * dot(x, x),
                |x: &[f64], g: &mut [f64]| g.copy_from_slice(x),
            )),
        )
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio(10.0, 9.0, 2.0), Ok(0.5));
        assert!(matches!(ratio(10.0, 9.0, 0.0), Err(SolverError::NonPositivePred(_))));
        // A larger reference can only raise the ratio.
        let (fk, trial, pred) = (3.0, 2.5, 1.0);
        assert!(ratio(4.0, trial, pred).unwrap() >= ratio(fk, trial, pred).unwrap());
    }

    #[test]
    fn radius_rule_examples() {
        let cfg = SolverConfig::default();
        assert_eq!(update_radius(RadiusRule::StepBased, 1.0, 1.0, 0.95, &cfg), 2.5);
        assert_eq!(update_radius(RadiusRule::StepBased, 1.0, 0.2, 0.01, &cfg), 0.05);
        assert_eq!(update_radius(RadiusRule::StepBased, 1.0, 0.2, 0.5, &cfg), 1.0);
        assert_eq!(update_radius(RadiusRule::Classic, 1.0, 0.3, 0.95, &cfg), 2.5);
        assert_eq!(update_radius(RadiusRule::Classic, 1.0, 0.3, 0.0, &cfg), 0.25);
        assert_eq!(update_radius(RadiusRule::StepBased, 1.0, 0.2, f64::NAN, &cfg), 0.05);
        // r̂ = μ1 exactly is a success.
        assert_eq!(update_radius(RadiusRule::StepBased, 1.0, 0.2, cfg.mu1, &cfg), 1.0);
    }

    #[test]
    fn quadratic_is_solved_in_one_newton_step() {
        let p = sphere(vec![1.0, 1.0]);
        for s in Strategy::ALL {
            let cfg = SolverConfig {
                delta0_scale: 1.0,
                ..SolverConfig::with_strategy(s)
            };
            let out = minimize(&p, &cfg).unwrap();
            assert_eq!(out.run.status, Status::Converged, "{s:?}");
            assert_eq!(out.run.n_iter, 1);
            assert_eq!(out.x_final, vec![0.0, 0.0]);
            assert_eq!(out.run.n_geval, out.run.n_iter + 1);
            assert_eq!(out.run.n_feval, 2);
        }
    }

    #[test]
    fn small_start_radius_still_converges() {
        let out = minimize(&sphere(vec![3.0, -4.0, 1.0]), &SolverConfig::default()).unwrap();
        assert_eq!(out.run.status, Status::Converged);
        assert!(out.run.final_grad_norm < 1e-5);
    }

    #[test]
    fn zero_gradient_start_converges_immediately() {
        let out = minimize(&sphere(vec![0.0, 0.0]), &SolverConfig::default()).unwrap();
        assert_eq!(out.run.status, Status::Converged);
        assert_eq!((out.run.n_iter, out.run.n_feval, out.run.n_geval), (0, 1, 1));
        assert!(out.run.trace.is_empty());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = SolverConfig {
            mu1: 0.0,
            ..SolverConfig::default()
        };
        assert!(matches!(
            minimize(&sphere(vec![1.0]), &cfg),
            Err(SolverError::Config(_))
        ));
    }

    #[test]
    fn non_finite_start_is_rejected() {
        let p = Problem::new(
            "bad",
            vec![1.0],
            Arc::new(FnObjective::new(
                |_: &[f64]| f64::NAN,
                |_: &[f64], g: &mut [f64]| g[0] = 1.0,
            )),
        );
        assert_eq!(
            minimize(&p, &SolverConfig::default()),
            Err(SolverError::NonFiniteStart)
        );
    }

    #[test]
    fn non_finite_trials_are_rejected_and_retried() {
        // Finite only inside |x| < 2. With B = I the first step is -g = -15,
        // clipped to the radius 4.5, which lands outside.
        let p = Problem::new(
            "walled",
            vec![1.5],
            Arc::new(FnObjective::new(
                |x: &[f64]| {
                    if x[0].abs() < 2.0 {
                        5.0 * x[0] * x[0]
                    } else {
                        f64::INFINITY
                    }
                },
                |x: &[f64], g: &mut [f64]| g[0] = 10.0 * x[0],
            )),
        );
        let cfg = SolverConfig {
            delta0_scale: 3.0,
            ..SolverConfig::default()
        };
        let out = minimize(&p, &cfg).unwrap();
        assert_eq!(out.run.status, Status::Converged);
        assert!(out.run.trace.iter().any(|r| !r.accepted && r.f_trial.is_infinite()));
        let evals = out.run.trace.len() + 1;
        assert_eq!(out.run.n_feval, evals);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let cfg = SolverConfig {
            k_max: 1,
            ..SolverConfig::default()
        };
        let out = minimize(&sphere(vec![30.0, -40.0]), &cfg).unwrap();
        assert_eq!(out.run.status, Status::MaxIter);
        assert_eq!(out.run.n_iter, 1);
        assert!(out.run.final_grad_norm >= cfg.epsilon);
    }

    #[test]
    fn trace_csv_has_one_line_per_trial() {
        let out = minimize(&sphere(vec![3.0, -4.0]), &SolverConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&out.run, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("k,f,grad_norm,delta,T,ratio,accepted"));
        assert_eq!(lines.count(), out.run.trace.len());
    }
}
