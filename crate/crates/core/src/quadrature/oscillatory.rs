use num_complex::Complex64;

use super::epsilon::EpsilonTable;
use super::{adaptive_finite, QuadratureError, QuadratureResult, ToleranceSpec};

/// Maximum number of partial sums kept in the epsilon table.
pub const TABLE_DEPTH: usize = 30;

/// Maximum number of arcs integrated before giving up.
pub const MAX_ARCS: usize = 200;

const MIN_ARCS: usize = 6;

/// Integral of an oscillating, slowly decaying `f` over `[start, inf)`.
///
/// The half-line is cut into consecutive arcs of length `half_period`; for an
/// integrand `g(q) cos(w q + phi)` with smooth `g` and `half_period = pi / w`
/// the arc integrals alternate in sign whatever the phase. Each arc is
/// integrated with [`adaptive_finite`] and the partial sums are accelerated
/// with the Wynn epsilon algorithm.
pub fn oscillatory_tail<F>(
    f: F,
    start: f64,
    half_period: f64,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> Complex64,
{
    if !(start.is_finite() && half_period.is_finite() && half_period > 0.0) {
        return Err(QuadratureError::InvalidArgument(format!(
            "oscillatory tail needs finite start and positive half-period, got start={start}, half_period={half_period}"
        )));
    }
    tol.validate()?;

    let arc_tol = ToleranceSpec {
        abs_tol: tol.abs_tol * 1e-3,
        rel_tol: 1e-13_f64.max(tol.rel_tol * 1e-3),
        max_evaluations: tol.max_evaluations,
    };
    let mut table = EpsilonTable::new(TABLE_DEPTH);
    let mut partial = Complex64::new(0.0, 0.0);
    let mut evaluations = 0u64;
    let mut arc_error = 0.0;
    let mut best = None;
    let mut arcs = 0usize;
    let mut converged = false;

    for k in 0..MAX_ARCS {
        let remaining = tol.max_evaluations.saturating_sub(evaluations);
        if remaining < 21 {
            break;
        }
        let lo = start + k as f64 * half_period;
        let hi = lo + half_period;
        let arc = adaptive_finite(&f, lo, hi, &arc_tol.with_max_evaluations(remaining))?;
        evaluations += arc.evaluations;
        arc_error += arc.abs_error_estimate;
        partial += arc.value;
        arcs = k + 1;
        let e = table.push(partial);
        let total_error = e.error + arc_error;
        best = Some((e, total_error));
        if arcs >= MIN_ARCS && arc.converged && total_error <= tol.target(e.value.norm()) {
            converged = true;
            break;
        }
    }

    let (e, total_error) = best.expect("at least one arc is integrated");
    Ok(QuadratureResult {
        value: e.value,
        abs_error_estimate: total_error,
        evaluations,
        converged,
        diagnostics: vec![
            ("arcs".into(), arcs as f64),
            ("table_depth".into(), table.len() as f64),
            ("epsilon_column".into(), e.column as f64),
            ("epsilon_breakdowns".into(), table.breakdowns() as f64),
        ],
    })
}
