//! Real-axis evaluation of the integral representation of a box state.
//!
//! The integrand `F(q)` satisfies `F(-q) = conj(F(q))`, so the whole-line
//! integral is folded onto `[0, inf)`. The finite part `[0, Q0]` is
//! integrated directly; beyond `Q0` the folded integrand is rewritten as a
//! sum of `h(q) cos(w q)` pieces with `h(q) = q^alpha / (q^2 - n^2)` and
//! `w = pi |x_tilde +- 1| / 2`, each handled by the selected tail method.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    abel_regularized_with, accumulate, adaptive_finite, empty_result, oscillatory_tail, AbelOptions, QuadratureResult,
    ToleranceSpec, DEFAULT_EPS_LADDER,
};
use crate::numeric::cos_pi;
use crate::well::{integral_prefactor, integrand, ScaledPosition, StateIndex, WellConfig};
use crate::Result;

/// `|x_tilde +- 1|` below this falls back to the kernel's own spacing of 2.
const DEGENERATE_OFFSET: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DirectMethod {
    /// Arc partition of the tail plus Wynn epsilon acceleration.
    TailAcceleration,
    /// Exponential damping of the tail extrapolated to zero damping.
    AbelLadder,
}

/// One `weight * Int_{Q0}^inf h(q) cos(pi offset q / 2) dq` term of the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPiece {
    pub weight: f64,
    /// `|x_tilde +- 1|`
    pub offset: f64,
    pub half_period: f64,
}

/// Damping ladder for a tail oscillating at `pi offset / 2`. The damped
/// integral is analytic in `eps` only out to the frequency, so slow tails get
/// a proportionally finer ladder.
fn abel_ladder(offset: f64) -> [f64; 6] {
    let factor = offset.clamp(DEGENERATE_OFFSET, 1.0);
    DEFAULT_EPS_LADDER.map(|e| e * factor)
}

/// `Q0 = max(8, 4n)`.
pub fn split_point(n: StateIndex) -> f64 {
    (4.0 * n.as_f64()).max(8.0)
}

/// Decomposition of the folded tail integrand into cosine pieces.
///
/// Odd `n`: `cos(pi q / 2) cos(pi q x / 2)` splits into
/// `[cos(w+ q) + cos(w- q)] / 2`; even `n`: `sin(pi q / 2) sin(pi q x / 2)`
/// into `[cos(w- q) - cos(w+ q)] / 2`.
pub fn tail_frequencies(cfg: &WellConfig, n: StateIndex, x_tilde: ScaledPosition) -> [TailPiece; 2] {
    let nf = n.as_f64();
    let scale = 2.0 * integral_prefactor(cfg, n) / nf.powf(cfg.alpha()) * n.parity_sign() * nf * 0.5;
    let x = x_tilde.value();
    let plus = (x + 1.0).abs();
    let minus = (x - 1.0).abs();
    let half_period = |offset: f64| if offset < DEGENERATE_OFFSET { 2.0 } else { 2.0 / offset };
    let (w_plus, w_minus) = if n.is_odd() { (-scale, -scale) } else { (-scale, scale) };
    [
        TailPiece {
            weight: w_plus,
            offset: plus,
            half_period: half_period(plus),
        },
        TailPiece {
            weight: w_minus,
            offset: minus,
            half_period: half_period(minus),
        },
    ]
}

/// Whole-line integral of [`integrand`] for state `n` at `x_tilde`.
///
/// The imaginary part, zero analytically, is dropped when it is below the
/// error budget and recorded as the `discarded_imag` diagnostic.
pub fn direct_integral(
    cfg: &WellConfig,
    n: StateIndex,
    x_tilde: ScaledPosition,
    method: DirectMethod,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult> {
    let x_tilde = x_tilde.require_interior_or_exterior()?;
    tol.validate()?;
    let q0 = split_point(n);
    let nf = n.as_f64();
    let alpha = cfg.alpha();

    let mut total = empty_result();

    let folded = |q: f64| integrand(cfg, n, x_tilde, q) + integrand(cfg, n, x_tilde, -q);
    let finite = adaptive_finite(folded, 0.0, q0, &tol.scaled(0.1))?;
    accumulate(&mut total, &finite, Complex64::new(1.0, 0.0), "finite");

    for (i, piece) in tail_frequencies(cfg, n, x_tilde).iter().enumerate() {
        if piece.weight == 0.0 {
            continue;
        }
        let offset = piece.offset;
        let h = move |q: f64| Complex64::new(q.powf(alpha) / ((q - nf) * (q + nf)) * cos_pi(0.5 * offset * q), 0.0);
        let budget = tol.max_evaluations.saturating_sub(total.evaluations).max(1);
        let piece_tol = tol
            .scaled(0.45 / piece.weight.abs().max(1e-300))
            .with_max_evaluations(budget);
        let tail = match method {
            DirectMethod::TailAcceleration => oscillatory_tail(h, q0, piece.half_period, &piece_tol)?,
            DirectMethod::AbelLadder => abel_regularized_with(
                h,
                &piece_tol,
                &abel_ladder(offset),
                AbelOptions {
                    start: Some(q0),
                    panel_width: 2.0 * piece.half_period,
                },
            )?,
        };
        accumulate(
            &mut total,
            &tail,
            Complex64::new(piece.weight, 0.0),
            &format!("tail[{i}]"),
        );
    }

    let target = tol.target(total.value.norm());
    total.converged &= total.abs_error_estimate <= target;
    let imag = total.value.im;
    if imag.abs() <= target {
        total.value.im = 0.0;
        total.diagnostics.push(("discarded_imag".into(), imag));
    } else {
        total.converged = false;
        total.diagnostics.push(("imaginary_residue".into(), imag));
    }
    total.diagnostics.push(("split_point".into(), q0));
    Ok(total)
}
