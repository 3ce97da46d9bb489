use num_complex::Complex64;

use super::{adaptive_finite, QuadratureError, QuadratureResult, ToleranceSpec};
use crate::numeric::neville;

/// Damping ladder used when none is supplied.
pub const DEFAULT_EPS_LADDER: [f64; 6] = [0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625];

/// Damped integrals are truncated where `exp(-eps L)` drops below this.
const TRUNCATION: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelOptions {
    /// Lower limit of a half-line integral; `None` integrates the whole line
    /// with damping `exp(-eps |q|)`.
    pub start: Option<f64>,
    /// Width of the panels the damped integrand is cut into.
    pub panel_width: f64,
}

impl Default for AbelOptions {
    fn default() -> Self {
        Self {
            start: None,
            panel_width: 1.0,
        }
    }
}

/// Abel-regularized whole-line integral: `I(eps) = Int f(q) exp(-eps |q|) dq`
/// on a descending ladder of `eps`, extrapolated to `eps = 0` with the
/// interpolating polynomial through every rung.
pub fn abel_regularized<F>(f: F, tol: &ToleranceSpec, eps_ladder: &[f64]) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> Complex64,
{
    abel_regularized_with(f, tol, eps_ladder, AbelOptions::default())
}

/// [`abel_regularized`] with an explicit domain and panel width. On a half
/// line `[start, inf)` the damping is `exp(-eps (q - start))`.
pub fn abel_regularized_with<F>(
    f: F,
    tol: &ToleranceSpec,
    eps_ladder: &[f64],
    options: AbelOptions,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> Complex64,
{
    tol.validate()?;
    if eps_ladder.len() < 2 {
        return Err(QuadratureError::InvalidArgument(
            "Abel ladder needs at least two rungs".into(),
        ));
    }
    if eps_ladder.iter().any(|&e| !(e.is_finite() && e > 0.0)) || eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(QuadratureError::InvalidArgument(format!(
            "Abel ladder must be positive and strictly descending, got {eps_ladder:?}"
        )));
    }
    if !(options.panel_width.is_finite() && options.panel_width > 0.0) {
        return Err(QuadratureError::InvalidArgument(format!(
            "panel width must be positive, got {}",
            options.panel_width
        )));
    }

    let panel_tol = ToleranceSpec {
        abs_tol: tol.abs_tol * 1e-3,
        rel_tol: 1e-13_f64.max(tol.rel_tol * 1e-3),
        max_evaluations: tol.max_evaluations,
    };

    let mut evaluations = 0u64;
    let mut damped = Vec::with_capacity(eps_ladder.len());
    let mut rung_errors = Vec::with_capacity(eps_ladder.len());
    let mut all_converged = true;
    let mut diagnostics = Vec::new();

    for (i, &eps) in eps_ladder.iter().enumerate() {
        let length = -TRUNCATION.ln() / eps;
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        let mut rung_converged = true;
        let halves: &[(f64, f64)] = match options.start {
            Some(s) => &[(s, 1.0)],
            None => &[(0.0, 1.0), (0.0, -1.0)],
        };
        for &(origin, direction) in halves {
            let damped_f = |u: f64| f(origin + direction * u) * (-eps * u).exp();
            let panels = (length / options.panel_width).ceil() as usize;
            for p in 0..panels {
                let remaining = tol.max_evaluations.saturating_sub(evaluations);
                if remaining < 21 {
                    rung_converged = false;
                    break;
                }
                let lo = p as f64 * options.panel_width;
                let hi = lo + options.panel_width;
                let r = adaptive_finite(damped_f, lo, hi, &panel_tol.with_max_evaluations(remaining))?;
                evaluations += r.evaluations;
                value += r.value;
                error += r.abs_error_estimate;
                rung_converged &= r.converged;
            }
        }
        all_converged &= rung_converged;
        diagnostics.push((format!("ladder[{i}].eps"), eps));
        diagnostics.push((format!("ladder[{i}].re"), value.re));
        diagnostics.push((format!("ladder[{i}].im"), value.im));
        damped.push(value);
        rung_errors.push(error);
    }

    let extrapolated = neville(eps_ladder, &damped, 0.0);
    // the same extrapolation without the coarsest rung
    let reduced = neville(&eps_ladder[1..], &damped[1..], 0.0);
    let extrapolation_error = (extrapolated - reduced).norm();
    let lebesgue = lagrange_weights_at_zero(eps_ladder)
        .iter()
        .map(|w| w.abs())
        .sum::<f64>();
    let propagated = lebesgue * rung_errors.iter().copied().fold(0.0, f64::max);
    let error = extrapolation_error + propagated;

    // damped values growing ever faster as eps shrinks signal a divergent integral
    let increments: Vec<f64> = damped.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let blowup = increments.len() >= 2
        && increments.windows(2).rev().take(2).all(|w| w[1] > 1.5 * w[0])
        && increments.last().copied().unwrap_or(0.0) > tol.target(extrapolated.norm());

    diagnostics.push(("extrapolation_degree".into(), (eps_ladder.len() - 1) as f64));
    diagnostics.push(("extrapolation_error".into(), extrapolation_error));
    diagnostics.push(("lebesgue_constant".into(), lebesgue));
    if blowup {
        diagnostics.push(("ladder_blowup".into(), 1.0));
    }

    Ok(QuadratureResult {
        value: extrapolated,
        abs_error_estimate: error,
        evaluations,
        converged: all_converged && !blowup && error <= tol.target(extrapolated.norm()),
        diagnostics,
    })
}

/// Lagrange basis polynomials of the ladder nodes evaluated at zero.
fn lagrange_weights_at_zero(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| xj / (xj - xi))
                .product()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::quadrature::oscillatory_tail;

    fn tol(t: f64) -> ToleranceSpec {
        ToleranceSpec::new(t, t, 50_000_000).unwrap()
    }

    #[test]
    fn gaussian_is_unaffected() {
        let f = |q: f64| Complex64::new((-q * q).exp(), 0.0);
        let r = abel_regularized(f, &tol(1e-10), &DEFAULT_EPS_LADDER).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value.re - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn doubled_dirichlet_integral() {
        let f = |q: f64| Complex64::new(if q == 0.0 { 1.0 } else { q.sin() / q }, 0.0);
        let r = abel_regularized(f, &tol(1e-8), &DEFAULT_EPS_LADDER).unwrap();
        assert!((r.value.re - PI).abs() < 1e-6, "{}", r.value.re);
        assert!(r.value.im.abs() < 1e-12);
    }

    #[test]
    fn agrees_with_partition_extrapolation() {
        type Case = (fn(f64) -> f64, f64, f64);
        let cases: [Case; 2] = [
            (|q| q.cos() / q.sqrt(), 1.0, PI),
            (|q| q.powf(-0.5) * (PI * q / 2.0).cos(), 3.0, 2.0),
        ];
        for (g, start, half_period) in cases {
            let f = |q: f64| Complex64::new(g(q), 0.0);
            let t = tol(1e-10);
            let tail = oscillatory_tail(f, start, half_period, &t).unwrap();
            let abel = abel_regularized_with(
                f,
                &t,
                &DEFAULT_EPS_LADDER,
                AbelOptions {
                    start: Some(start),
                    panel_width: 2.0 * half_period,
                },
            )
            .unwrap();
            let bound = 1e-6_f64.max(10.0 * (tail.abs_error_estimate + abel.abs_error_estimate));
            assert!(
                (tail.value - abel.value).norm() < bound,
                "{} vs {}",
                tail.value,
                abel.value
            );
        }
        // the second case against a 30-digit reference
        let f = |q: f64| Complex64::new(q.powf(-0.5) * (PI * q / 2.0).cos(), 0.0);
        let tail = oscillatory_tail(f, 3.0, 2.0, &tol(1e-12)).unwrap();
        assert!((tail.value.re - 0.357_887_627_178_643_86).abs() < 1e-10);
    }

    #[test]
    fn divergent_integral_is_not_converged() {
        let f = |_q: f64| Complex64::new(1.0, 0.0);
        let r = abel_regularized_with(
            f,
            &tol(1e-8),
            &DEFAULT_EPS_LADDER,
            AbelOptions {
                start: Some(0.0),
                panel_width: 4.0,
            },
        )
        .unwrap();
        assert!(!r.converged);
        assert_eq!(r.diagnostic("ladder[5].eps"), Some(0.00625));
    }

    #[test]
    fn ladder_validation() {
        let f = |q: f64| Complex64::new(q, 0.0);
        assert!(abel_regularized(f, &tol(1e-8), &[0.1]).is_err());
        assert!(abel_regularized(f, &tol(1e-8), &[0.1, 0.2]).is_err());
        assert!(abel_regularized(f, &tol(1e-8), &[0.1, -0.2]).is_err());
    }

    #[test]
    fn lagrange_weights_sum_to_one() {
        let w = lagrange_weights_at_zero(&DEFAULT_EPS_LADDER);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
