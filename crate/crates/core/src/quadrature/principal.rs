use num_complex::Complex64;

use super::{adaptive_finite, QuadratureError, QuadratureResult, ToleranceSpec};

/// Cauchy principal value of `f` over `[lo, hi]` with a simple pole at
/// `pole` carrying `residue`.
///
/// The singular part `residue / (q - pole)` is subtracted, the remainder is
/// integrated on both sides of the pole, and the exact principal value of the
/// singular part, `residue ln((hi - pole) / (pole - lo))`, is added back. A
/// residue that does not match `f` leaves a `1/(q - pole)` remainder, which
/// shows up as a non-converged result.
pub fn pv_simple_pole<F>(
    f: F,
    pole: f64,
    residue: Complex64,
    lo: f64,
    hi: f64,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> Complex64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadratureError::EmptyInterval { lo, hi });
    }
    if !(lo < pole && pole < hi) {
        return Err(QuadratureError::PoleOutside { pole, lo, hi });
    }
    let regular = |q: f64| f(q) - residue / (q - pole);
    let half = tol.scaled(0.5);
    let left = adaptive_finite(regular, lo, pole, &half)?;
    let right = adaptive_finite(
        regular,
        pole,
        hi,
        &half.with_max_evaluations(tol.max_evaluations.saturating_sub(left.evaluations)),
    )?;
    let log_part = residue * ((hi - pole) / (pole - lo)).ln();
    let value = left.value + right.value + log_part;
    let error = left.abs_error_estimate + right.abs_error_estimate;
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        evaluations: left.evaluations + right.evaluations,
        converged: left.converged && right.converged && error <= tol.target(value.norm()),
        diagnostics: vec![
            ("left_panels".into(), left.diagnostic("panels").unwrap_or(0.0)),
            ("right_panels".into(), right.diagnostic("panels").unwrap_or(0.0)),
        ],
    })
}
