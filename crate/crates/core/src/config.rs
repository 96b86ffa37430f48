//! Solver configuration and validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reference-value strategy used in the acceptance ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Classic ratio against the current value `f_k`.
    Monotone,
    /// Running maximum over the last `N + 1` accepted values.
    Grippo,
    /// Weighted average `C_k` with normalizer `Q_k`.
    ZhangHager,
    /// Exponential average `D_k`.
    Mo,
    /// Convex combination of the running maximum and the current value.
    Amini,
    /// Windowed convex term with a max guard once the window is full.
    Term1,
    /// Running maximum during warm-up, then the windowed convex term.
    Term2,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Monotone,
        Strategy::Grippo,
        Strategy::ZhangHager,
        Strategy::Mo,
        Strategy::Amini,
        Strategy::Term1,
        Strategy::Term2,
    ];

    pub fn is_monotone(self) -> bool {
        self == Strategy::Monotone
    }
}

/// Trust-radius update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusRule {
    /// Multiply by `rho1` on rejection and by `rho2` on very successful steps.
    Classic,
    /// Scale from the step length with `c1` / `c2`.
    StepBased,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub mu1: f64,
    pub mu2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub c1: f64,
    pub c2: f64,
    /// Stop once `‖g‖ < epsilon`.
    pub epsilon: f64,
    /// Maximum number of outer iterations.
    pub k_max: usize,
    pub window_n: usize,
    /// Starting value of the averaging-weight schedule.
    pub eta0: f64,
    /// Constant weight for the Zhang–Hager term. `None` falls back to the schedule.
    pub eta_fixed: Option<f64>,
    pub strategy: Strategy,
    pub radius_rule: RadiusRule,
    /// Initial radius is `delta0_scale * ‖g_0‖`.
    pub delta0_scale: f64,
    /// When set, every subproblem solve is checked against the Cauchy-fraction
    /// bound with this `β` and violations are counted in the run diagnostics.
    pub cauchy_fraction_check: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu1: 0.05,
            mu2: 0.9,
            rho1: 0.25,
            rho2: 2.5,
            c1: 0.25,
            c2: 2.5,
            epsilon: 1e-5,
            k_max: 10_000,
            window_n: 10,
            eta0: 0.25,
            eta_fixed: Some(0.85),
            strategy: Strategy::Monotone,
            radius_rule: RadiusRule::StepBased,
            delta0_scale: 0.1,
            cauchy_fraction_check: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be {constraint} (got {value})")]
    OutOfRange {
        field: &'static str,
        constraint: &'static str,
        value: f64,
    },
    #[error("mu2 ≥ mu1 required (mu1 = {mu1}, mu2 = {mu2})")]
    MuOrdering { mu1: f64, mu2: f64 },
    #[error("window_n must be ≥ 1")]
    EmptyWindow,
}

fn check(
    ok: bool,
    field: &'static str,
    constraint: &'static str,
    value: f64,
) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::OutOfRange {
            field,
            constraint,
            value,
        })
    }
}

fn in_unit_half_open(v: f64) -> bool {
    (0.0..1.0).contains(&v)
}

impl SolverConfig {
    /// Defaults for one of the named strategies; [`Strategy::Term2`] starts
    /// its weight schedule at 0.45, everything else at 0.25.
    pub fn with_strategy(strategy: Strategy) -> Self {
        let eta0 = if strategy == Strategy::Term2 { 0.45 } else { 0.25 };
        Self {
            strategy,
            eta0,
            ..Self::default()
        }
    }

    /// Checks every field constraint and returns the config unchanged.
    ///
    /// The first violated constraint is reported.
    pub fn validate(self) -> Result<Self, ConfigError> {
        let c = &self;
        if !(c.mu1 > 0.0) {
            return Err(ConfigError::OutOfRange {
                field: "mu1",
                constraint: "> 0",
                value: c.mu1,
            });
        }
        check(c.mu1 <= 1.0, "mu1", "≤ 1", c.mu1)?;
        if !(c.mu2 >= c.mu1) {
            return Err(ConfigError::MuOrdering {
                mu1: c.mu1,
                mu2: c.mu2,
            });
        }
        check(c.mu2 <= 1.0, "mu2", "≤ 1", c.mu2)?;
        check(c.rho1 > 0.0 && c.rho1 <= 1.0, "rho1", "in (0, 1]", c.rho1)?;
        check(c.rho2 >= 1.0, "rho2", "≥ 1", c.rho2)?;
        check(c.c1 > 0.0 && c.c1 < 1.0, "c1", "in (0, 1)", c.c1)?;
        check(c.c2 > 1.0, "c2", "> 1", c.c2)?;
        check(c.epsilon > 0.0, "epsilon", "> 0", c.epsilon)?;
        if c.window_n == 0 {
            return Err(ConfigError::EmptyWindow);
        }
        check(in_unit_half_open(c.eta0), "eta0", "in [0, 1)", c.eta0)?;
        if let Some(eta) = c.eta_fixed {
            check(in_unit_half_open(eta), "eta_fixed", "in [0, 1)", eta)?;
        }
        check(
            c.delta0_scale > 0.0 && c.delta0_scale.is_finite(),
            "delta0_scale",
            "> 0",
            c.delta0_scale,
        )?;
        if let Some(beta) = c.cauchy_fraction_check {
            check(
                beta > 0.0 && beta < 1.0,
                "cauchy_fraction_check",
                "in (0, 1)",
                beta,
            )?;
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_defaults_are_valid() {
        let cfg = SolverConfig {
            mu1: 0.05,
            mu2: 0.9,
            rho1: 0.25,
            rho2: 2.5,
            ..SolverConfig::default()
        };
        assert_eq!(cfg.clone().validate(), Ok(cfg));
    }

    #[test]
    fn zero_mu1_is_rejected() {
        let err = SolverConfig {
            mu1: 0.0,
            ..SolverConfig::default()
        }
        .validate()
        .unwrap_err();
        assert_eq!(err.to_string(), "mu1 must be > 0 (got 0)");
    }

    #[test]
    fn mu_ordering_is_enforced() {
        let err = SolverConfig {
            mu1: 0.9,
            mu2: 0.05,
            ..SolverConfig::default()
        }
        .validate()
        .unwrap_err();
        assert!(matches!(err, ConfigError::MuOrdering { .. }));
        assert!(err.to_string().starts_with("mu2 ≥ mu1 required"));
    }

    #[test]
    fn window_and_eta_bounds() {
        let base = SolverConfig::default();
        assert_eq!(
            SolverConfig {
                window_n: 0,
                ..base.clone()
            }
            .validate(),
            Err(ConfigError::EmptyWindow)
        );
        assert!(SolverConfig {
            eta0: 1.0,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            rho2: 0.5,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            eta0: 0.0,
            ..base
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn nan_fields_are_rejected() {
        assert!(SolverConfig {
            mu1: f64::NAN,
            ..SolverConfig::default()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            mu2: f64::NAN,
            ..SolverConfig::default()
        }
        .validate()
        .is_err());
    }
}
