//! Numerical integration engine.
//!
//! Integrands are complex-valued functions of a real variable. Contract
//! violations (empty intervals, misplaced poles, non-finite samples) are
//! errors; failure to reach the requested tolerance is reported through
//! [`QuadratureResult::converged`] with the best value found.

mod abel;
mod direct;
mod epsilon;
mod gauss_kronrod;
mod oscillatory;
mod principal;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use abel::{abel_regularized, abel_regularized_with, AbelOptions, DEFAULT_EPS_LADDER};
pub use direct::{direct_integral, split_point, tail_frequencies, DirectMethod, TailPiece};
pub use epsilon::EpsilonTable;
pub use gauss_kronrod::adaptive_finite;
pub use oscillatory::{oscillatory_tail, MAX_ARCS, TABLE_DEPTH};
pub use principal::pv_simple_pole;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("empty or reversed interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("pole {pole} is not strictly inside ({lo}, {hi})")]
    PoleOutside { pole: f64, lo: f64, hi: f64 },
    #[error("integrand returned a non-finite value at q = {at}")]
    NonFinite { at: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: u64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            max_evaluations: 10_000_000,
        }
    }
}

impl ToleranceSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evaluations: u64) -> Result<Self, QuadratureError> {
        let t = Self {
            abs_tol,
            rel_tol,
            max_evaluations,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) || self.max_evaluations == 0 {
            return Err(QuadratureError::InvalidTolerance(format!("{self:?}")));
        }
        Ok(())
    }

    /// Error budget for a result of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }

    /// Same budget scaled by `factor` (used to hand sub-integrals a share).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_evaluations: self.max_evaluations,
        }
    }

    pub fn with_max_evaluations(&self, max_evaluations: u64) -> Self {
        Self {
            max_evaluations: max_evaluations.max(1),
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
    pub diagnostics: Vec<(String, f64)>,
}

impl QuadratureResult {
    pub(crate) fn diag(mut self, name: impl Into<String>, metric: f64) -> Self {
        self.diagnostics.push((name.into(), metric));
        self
    }

    /// Looks up the first diagnostic with the given name.
    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }
}

/// Plain sum of sub-results: values and error estimates add, convergence is
/// the conjunction. Diagnostics are prefixed with `label`.
pub(crate) fn accumulate(total: &mut QuadratureResult, part: &QuadratureResult, weight: Complex64, label: &str) {
    total.value += weight * part.value;
    total.abs_error_estimate += weight.norm() * part.abs_error_estimate;
    total.evaluations += part.evaluations;
    total.converged &= part.converged;
    for (k, v) in &part.diagnostics {
        total.diagnostics.push((format!("{label}.{k}"), *v));
    }
}

pub(crate) fn empty_result() -> QuadratureResult {
    QuadratureResult {
        value: Complex64::new(0.0, 0.0),
        abs_error_estimate: 0.0,
        evaluations: 0,
        converged: true,
        diagnostics: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceSpec::new(0.0, 1e-8, 10).is_err());
        assert!(ToleranceSpec::new(1e-8, -1.0, 10).is_err());
        assert!(ToleranceSpec::new(1e-8, 1e-8, 0).is_err());
        let t = ToleranceSpec::default();
        assert_eq!(t.abs_tol, 1e-8);
        assert_eq!(t.rel_tol, 1e-8);
        assert_eq!(t.max_evaluations, 10_000_000);
        assert_eq!(t.target(1e3), 1e-5);
    }
}
