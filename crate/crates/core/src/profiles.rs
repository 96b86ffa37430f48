//! Dolan–Moré performance profiles.
//!
//! For a measure `t_{p,s}` (lower is better) the ratio of solver `s` on problem
//! `p` is `r_{p,s} = t_{p,s} / min_s t_{p,s}`, failures get a sentinel
//! `r_failed` above every finite ratio, and the profile of `s` is
//! `ρ_s(τ) = |{p : r_{p,s} ≤ τ}| / n_p`.
//!
//! Ties at the minimum give every tying solver `r = 1`. Problems that no solver
//! solved are dropped (and reported) before `n_p` is counted.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lower bound on the failure sentinel.
pub const MIN_R_FAILED: f64 = 1e6;
/// Points in the default τ grid.
pub const TAU_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("measure for `{problem}` / `{solver}` must be finite and positive, got {value}")]
    BadMeasure {
        problem: String,
        solver: String,
        value: f64,
    },
    #[error("tau grid is empty")]
    EmptyGrid,
    #[error("tau grid must be sorted and start at ≥ 1")]
    BadGrid,
    #[error("no problem was solved by any solver")]
    NothingSolved,
}

/// Which count to profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Gradient evaluations (equal to iterations + 1).
    Ng,
    /// Function evaluations.
    Nf,
    /// `N_f + 3·N_g`.
    Mixed,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Ng, Measure::Nf, Measure::Mixed];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Ng => "ng",
            Measure::Nf => "nf",
            Measure::Mixed => "mixed",
        }
    }

    pub fn value(self, nf: usize, ng: usize) -> f64 {
        match self {
            Measure::Ng => ng as f64,
            Measure::Nf => nf as f64,
            Measure::Mixed => mixed_measure(nf, ng) as f64,
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ng" => Ok(Measure::Ng),
            "nf" => Ok(Measure::Nf),
            "mixed" => Ok(Measure::Mixed),
            other => Err(format!("unknown measure `{other}` (expected ng, nf or mixed)")),
        }
    }
}

/// A gradient is charged as three function values.
pub fn mixed_measure(nf: usize, ng: usize) -> usize {
    nf + 3 * ng
}

/// Performance measures, rows = problems, columns = solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileMatrix {
    pub problems: Vec<String>,
    pub solvers: Vec<String>,
    pub t: Vec<Vec<f64>>,
    pub failed: Vec<Vec<bool>>,
}

impl ProfileMatrix {
    pub fn new(
        problems: Vec<String>,
        solvers: Vec<String>,
        t: Vec<Vec<f64>>,
        failed: Vec<Vec<bool>>,
    ) -> Result<Self, ProfileError> {
        if t.len() != problems.len() || failed.len() != problems.len() {
            return Err(ProfileError::Shape(format!(
                "{} problems but {} measure rows and {} failure rows",
                problems.len(),
                t.len(),
                failed.len()
            )));
        }
        for (p, (row, frow)) in t.iter().zip(&failed).enumerate() {
            if row.len() != solvers.len() || frow.len() != solvers.len() {
                return Err(ProfileError::Shape(format!(
                    "row {p} has {} measures and {} flags for {} solvers",
                    row.len(),
                    frow.len(),
                    solvers.len()
                )));
            }
            for (s, (&v, &f)) in row.iter().zip(frow).enumerate() {
                if !f && !(v.is_finite() && v > 0.0) {
                    return Err(ProfileError::BadMeasure {
                        problem: problems[p].clone(),
                        solver: solvers[s].clone(),
                        value: v,
                    });
                }
            }
        }
        Ok(Self {
            problems,
            solvers,
            t,
            failed,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioMatrix {
    /// Problems kept (solved by at least one solver).
    pub problems: Vec<String>,
    pub solvers: Vec<String>,
    pub r: Vec<Vec<f64>>,
    pub r_failed: f64,
    /// Problems dropped because every solver failed.
    pub excluded: Vec<String>,
}

/// Performance ratios with failures mapped to `r_failed`.
///
/// `r_failed = max(2·max finite ratio, 1e6)`.
pub fn performance_ratios(m: &ProfileMatrix) -> Result<RatioMatrix, ProfileError> {
    let mut problems = Vec::new();
    let mut excluded = Vec::new();
    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    for (p, name) in m.problems.iter().enumerate() {
        let best = m.t[p]
            .iter()
            .zip(&m.failed[p])
            .filter(|(_, &f)| !f)
            .map(|(&v, _)| v)
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            excluded.push(name.clone());
            continue;
        }
        problems.push(name.clone());
        rows.push(
            m.t[p]
                .iter()
                .zip(&m.failed[p])
                .map(|(&v, &f)| if f { None } else { Some(v / best) })
                .collect(),
        );
    }
    if problems.is_empty() {
        return Err(ProfileError::NothingSolved);
    }
    let max_finite = rows
        .iter()
        .flatten()
        .flatten()
        .copied()
        .fold(1.0f64, f64::max);
    let r_failed = (2.0 * max_finite).max(MIN_R_FAILED);
    let r = rows
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.unwrap_or(r_failed)).collect())
        .collect();
    Ok(RatioMatrix {
        problems,
        solvers: m.solvers.clone(),
        r,
        r_failed,
        excluded,
    })
}

/// `ρ_s(τ)` for every solver (outer index) and grid point (inner index).
pub fn profile_curve(r: &RatioMatrix, taus: &[f64]) -> Result<Vec<Vec<f64>>, ProfileError> {
    if taus.is_empty() {
        return Err(ProfileError::EmptyGrid);
    }
    if !(taus[0] >= 1.0) || taus.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(ProfileError::BadGrid);
    }
    let n_p = r.problems.len() as f64;
    Ok((0..r.solvers.len())
        .map(|s| {
            let mut col: Vec<f64> = r.r.iter().map(|row| row[s]).collect();
            col.sort_by(f64::total_cmp);
            taus.iter()
                .map(|&tau| col.partition_point(|&v| v <= tau) as f64 / n_p)
                .collect()
        })
        .collect())
}

/// Geometric grid of `points` values from 1 to `upper`.
pub fn tau_grid(upper: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && upper >= 1.0);
    let log_hi = upper.ln();
    let mut grid: Vec<f64> = (0..points)
        .map(|i| (log_hi * i as f64 / (points - 1) as f64).exp())
        .collect();
    grid[0] = 1.0;
    grid[points - 1] = upper;
    grid
}

/// Default grid for a ratio matrix: 200 points from 1 to `r_failed / 2`.
pub fn default_grid(r: &RatioMatrix) -> Vec<f64> {
    tau_grid(r.r_failed / 2.0, TAU_POINTS)
}

/// Writes `solver,tau,rho` rows.
pub fn write_profile_csv<W: Write>(
    r: &RatioMatrix,
    taus: &[f64],
    curves: &[Vec<f64>],
    out: W,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["solver", "tau", "rho"])?;
    for (solver, curve) in r.solvers.iter().zip(curves) {
        for (tau, rho) in taus.iter().zip(curve) {
            w.write_record([solver.as_str(), &tau.to_string(), &rho.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
