//! Two-dimensional problems with curved narrow valleys.

use std::sync::Arc;

use crate::problem::{FnObjective, Problem};

/// Nesterov–Chebyshev–Rosenbrock: `¼(x₁−1)² + (x₂ − 2x₁² + 1)²`.
pub fn nesterov_chebyshev_rosenbrock() -> Problem {
    let obj = FnObjective::new(
        |x: &[f64]| {
            let r = x[1] - 2.0 * x[0] * x[0] + 1.0;
            0.25 * (x[0] - 1.0).powi(2) + r * r
        },
        |x: &[f64], g: &mut [f64]| {
            let r = x[1] - 2.0 * x[0] * x[0] + 1.0;
            g[0] = 0.5 * (x[0] - 1.0) - 8.0 * x[0] * r;
            g[1] = 2.0 * r;
        },
    );
    Problem::new("NCR", vec![-1.0, 1.5], Arc::new(obj))
        .with_f_star(0.0)
        .with_x_star(vec![1.0, 1.0])
}

/// Maratos: `x₁ + θ(x₁² + x₂² − 1)²`.
pub fn maratos(theta: f64) -> Problem {
    let obj = FnObjective::new(
        move |x: &[f64]| {
            let c = x[0] * x[0] + x[1] * x[1] - 1.0;
            x[0] + theta * c * c
        },
        move |x: &[f64], g: &mut [f64]| {
            let c = x[0] * x[0] + x[1] * x[1] - 1.0;
            g[0] = 1.0 + 4.0 * theta * x[0] * c;
            g[1] = 4.0 * theta * x[1] * c;
        },
    );
    Problem::new("MARATOS", vec![1.0, 0.95], Arc::new(obj))
}

/// Two-dimensional NONDIA: `(1 − x₂)² + θ(x₁ − x₂²)²`.
pub fn nondia(theta: f64) -> Problem {
    let obj = FnObjective::new(
        move |x: &[f64]| {
            let r = x[0] - x[1] * x[1];
            (1.0 - x[1]).powi(2) + theta * r * r
        },
        move |x: &[f64], g: &mut [f64]| {
            let r = x[0] - x[1] * x[1];
            g[0] = 2.0 * theta * r;
            g[1] = -2.0 * (1.0 - x[1]) - 4.0 * theta * x[1] * r;
        },
    );
    Problem::new("NONDIA", vec![-0.9, 1.17], Arc::new(obj))
        .with_f_star(0.0)
        .with_x_star(vec![1.0, 1.0])
}
