//! Dense BFGS approximation of the Hessian used in the quadratic model.

use thiserror::Error;

use crate::problem::{dot, norm2};

/// Curvature threshold: updates with `sᵀy ≤ SKIP_TOL·‖s‖·‖y‖` are skipped.
pub const SKIP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HessianError {
    #[error("non-finite value in BFGS update input")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Outcome of a [`HessianApprox::bfgs_update`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    Applied,
    Skipped,
}

/// Symmetric `n × n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianApprox {
    n: usize,
    data: Vec<f64>,
    skips: usize,
}

impl HessianApprox {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data, skips: 0 }
    }

    /// Builds from row-major entries; the input is symmetrized.
    pub fn from_rows(n: usize, rows: Vec<f64>) -> Self {
        assert_eq!(rows.len(), n * n);
        let mut h = Self {
            n,
            data: rows,
            skips: 0,
        };
        h.symmetrize();
        h
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn skips(&self) -> usize {
        self.skips
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// `out = B v`.
    pub fn matvec_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), v);
        }
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.matvec_into(v, &mut out);
        out
    }

    /// Maximum absolute row sum. Bounds the spectral norm from above for a
    /// symmetric matrix.
    pub fn norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Rank-two BFGS update
    /// `B' = B + yyᵀ/(sᵀy) − (Bs)(Bs)ᵀ/(sᵀBs)`.
    ///
    /// Skipped (and counted) when the curvature condition fails.
    pub fn bfgs_update(&mut self, s: &[f64], y: &[f64]) -> Result<UpdateOutcome, HessianError> {
        for v in [s, y] {
            if v.len() != self.n {
                return Err(HessianError::Dimension {
                    expected: self.n,
                    got: v.len(),
                });
            }
        }
        if s.iter().chain(y).any(|a| !a.is_finite()) {
            return Err(HessianError::NonFinite);
        }
        let sy = dot(s, y);
        let bs = self.matvec(s);
        let sbs = dot(s, &bs);
        if !(sy > SKIP_TOL * norm2(s) * norm2(y)) || !(sbs > 0.0) {
            self.skips += 1;
            return Ok(UpdateOutcome::Skipped);
        }
        let n = self.n;
        for i in 0..n {
            let (yi, bsi) = (y[i] / sy, bs[i] / sbs);
            let row = &mut self.data[i * n..(i + 1) * n];
            for j in 0..n {
                row[j] += yi * y[j] - bsi * bs[j];
            }
        }
        self.symmetrize();
        if self.data.iter().any(|a| !a.is_finite()) {
            return Err(HessianError::NonFinite);
        }
        Ok(UpdateOutcome::Applied)
    }

    fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg;
            }
        }
    }

    /// `max |B − Bᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i]).abs());
            }
        }
        worst
    }
}
