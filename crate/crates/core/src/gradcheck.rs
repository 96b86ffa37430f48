//! Central-difference gradient checks for problem oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problem::Problem;

/// Acceptance threshold on the relative error.
pub const GRADIENT_TOLERANCE: f64 = 1e-6;
/// Points with `|f|` above this are not sampled.
pub const MAX_ABS_F: f64 = 1e8;

/// Central-difference gradient with `h_i = 1e-6·max(1, |x_i|)`.
pub fn central_difference(problem: &Problem, x: &[f64]) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-6 * x[i].abs().max(1.0);
            xp[i] = x[i] + h;
            let fp = problem.eval_f(&xp);
            xp[i] = x[i] - h;
            let fm = problem.eval_f(&xp);
            xp[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// `‖g_fd − g‖∞ / max(1, ‖g‖∞)` at `x`.
pub fn relative_error(problem: &Problem, x: &[f64]) -> f64 {
    let g = problem.eval_grad(x);
    let fd = central_difference(problem, x);
    let scale = g.iter().fold(1.0f64, |m, a| m.max(a.abs()));
    let err = g
        .iter()
        .zip(&fd)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    err / scale
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientReport {
    pub problem: String,
    pub points: usize,
    pub worst_error: f64,
}

impl GradientReport {
    pub fn passed(&self) -> bool {
        self.points > 0 && self.worst_error <= GRADIENT_TOLERANCE
    }
}

/// Checks the gradient at `points` random points near the standard start.
///
/// Each coordinate is perturbed uniformly by up to `0.5·max(1, |x0_i|)`;
/// samples with non-finite or too large `|f|` are redrawn a bounded number of
/// times with a smaller spread.
pub fn check_problem(problem: &Problem, points: usize, seed: u64) -> GradientReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut taken = 0;
    let mut spread = 0.5;
    let mut attempts = 0;
    while taken < points && attempts < 20 * points {
        attempts += 1;
        let x: Vec<f64> = problem
            .x0
            .iter()
            .map(|&a| a + spread * a.abs().max(1.0) * rng.gen_range(-1.0..=1.0))
            .collect();
        let f = problem.eval_f(&x);
        if !f.is_finite() || f.abs() > MAX_ABS_F {
            spread *= 0.7;
            continue;
        }
        let err = relative_error(problem, &x);
        worst = if err.is_nan() { f64::INFINITY } else { worst.max(err) };
        taken += 1;
    }
    GradientReport {
        problem: problem.name.clone(),
        points: taken,
        worst_error: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::FnObjective;
    use std::sync::Arc;

    #[test]
    fn detects_a_wrong_gradient() {
        let good = Problem::new(
            "cubic",
            vec![1.0, 2.0],
            Arc::new(FnObjective::new(
                |x: &[f64]| x[0].powi(3) + x[0] * x[1],
                |x: &[f64], g: &mut [f64]| {
                    g[0] = 3.0 * x[0] * x[0] + x[1];
                    g[1] = x[0];
                },
            )),
        );
        assert!(check_problem(&good, 10, 1).passed());
        let bad = Problem::new(
            "cubic-wrong",
            vec![1.0, 2.0],
            Arc::new(FnObjective::new(
                |x: &[f64]| x[0].powi(3) + x[0] * x[1],
                |x: &[f64], g: &mut [f64]| {
                    g[0] = 3.0 * x[0] * x[0];
                    g[1] = x[0];
                },
            )),
        );
        let report = check_problem(&bad, 10, 1);
        assert!(!report.passed());
        assert_eq!(report.problem, "cubic-wrong");
    }
}
