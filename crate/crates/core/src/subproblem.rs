//! Steihaug–Toint truncated conjugate gradient for the trust-region
//! subproblem `min gᵀd + ½ dᵀBd` subject to `‖d‖₂ ≤ δ`.

use thiserror::Error;

use crate::problem::{dot, norm2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubproblemError {
    #[error("non-finite value from the model matrix product")]
    NonFinite,
    #[error("gradient is zero; the subproblem has no descent step")]
    ZeroGradient,
    #[error("trust radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("boundary intersection needs a nonzero direction")]
    DegenerateDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubproblemExit {
    SmallResidual,
    Boundary,
    NegativeCurvature,
    MaxCg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemResult {
    pub d: Vec<f64>,
    /// Model decrease `q(0) − q(d) = −gᵀd − ½ dᵀBd`.
    pub pred: f64,
    pub hit_boundary: bool,
    pub cg_iters: usize,
    pub exit: SubproblemExit,
}

/// Larger root `τ ≥ 0` of `‖p + τd‖ = δ` for `p` inside the ball.
pub fn boundary_tau(p: &[f64], d: &[f64], delta: f64) -> Result<f64, SubproblemError> {
    let a = dot(d, d);
    if !(a > 0.0) || !a.is_finite() {
        return Err(SubproblemError::DegenerateDirection);
    }
    let b = 2.0 * dot(p, d);
    // p may sit on the boundary up to roundoff.
    let c = (dot(p, p) - delta * delta).min(0.0);
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    // Avoid cancellation between -b and disc.
    let tau = if b <= 0.0 {
        (-b + disc) / (2.0 * a)
    } else {
        -2.0 * c / (b + disc)
    };
    Ok(tau.max(0.0))
}

/// Solves the subproblem with model gradient `g` and matrix product `matvec`
/// (`out = B v`), within radius `delta`.
///
/// CG stops when the model residual satisfies
/// `‖r‖ ≤ min{1/10, ‖g‖^{1/2}}·‖g‖`, when an iterate would leave the region,
/// when negative curvature shows up (the step then runs to the boundary), or
/// after `n + 10` iterations.
pub fn steihaug_solve<M>(g: &[f64], matvec: M, delta: f64) -> Result<SubproblemResult, SubproblemError>
where
    M: Fn(&[f64], &mut [f64]),
{
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(SubproblemError::BadRadius(delta));
    }
    let n = g.len();
    let gnorm = norm2(g);
    if gnorm == 0.0 {
        return Err(SubproblemError::ZeroGradient);
    }
    if !gnorm.is_finite() {
        return Err(SubproblemError::NonFinite);
    }
    let tol = gnorm.sqrt().min(0.1) * gnorm;
    let max_iters = n + 10;

    let mut z = vec![0.0; n];
    let mut r = g.to_vec();
    let mut p: Vec<f64> = g.iter().map(|a| -a).collect();
    let mut bp = vec![0.0; n];
    let mut rr = gnorm * gnorm;
    let mut iters = 0;
    let mut exit = SubproblemExit::MaxCg;
    #[cfg(debug_assertions)]
    let mut last_norm = 0.0f64;

    while iters < max_iters {
        iters += 1;
        matvec(&p, &mut bp);
        if bp.iter().any(|a| !a.is_finite()) {
            return Err(SubproblemError::NonFinite);
        }
        let curv = dot(&p, &bp);
        if curv <= 0.0 {
            let tau = boundary_tau(&z, &p, delta)?;
            axpy(tau, &p, &mut z);
            exit = SubproblemExit::NegativeCurvature;
            break;
        }
        let alpha = rr / curv;
        let z_next: Vec<f64> = z.iter().zip(&p).map(|(zi, pi)| zi + alpha * pi).collect();
        if norm2(&z_next) >= delta {
            let tau = boundary_tau(&z, &p, delta)?;
            axpy(tau, &p, &mut z);
            exit = SubproblemExit::Boundary;
            break;
        }
        z = z_next;
        #[cfg(debug_assertions)]
        {
            let zn = norm2(&z);
            debug_assert!(zn >= last_norm * (1.0 - 1e-10), "CG iterate norms must not shrink");
            last_norm = zn;
        }
        axpy(alpha, &bp, &mut r);
        let rr_next = dot(&r, &r);
        if rr_next.sqrt() <= tol {
            exit = SubproblemExit::SmallResidual;
            break;
        }
        let beta = rr_next / rr;
        rr = rr_next;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = -ri + beta * *pi;
        }
    }

    matvec(&z, &mut bp);
    if bp.iter().any(|a| !a.is_finite()) {
        return Err(SubproblemError::NonFinite);
    }
    let pred = -dot(g, &z) - 0.5 * dot(&z, &bp);
    let hit_boundary = matches!(
        exit,
        SubproblemExit::Boundary | SubproblemExit::NegativeCurvature
    );
    Ok(SubproblemResult {
        d: z,
        pred,
        hit_boundary,
        cg_iters: iters,
        exit,
    })
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Cauchy-fraction lower bound `β·‖g‖·min{δ, ‖g‖/‖B‖}`.
pub fn cauchy_bound(beta: f64, gnorm: f64, delta: f64, b_norm: f64) -> f64 {
    let ratio = if b_norm > 0.0 { gnorm / b_norm } else { f64::INFINITY };
    beta * gnorm * delta.min(ratio)
}
