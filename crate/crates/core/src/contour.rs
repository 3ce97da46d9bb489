//! Contour route: the Riesz symbol is continued as
//! `[(iq)^alpha + (-iq)^alpha] / (2 cos(alpha pi / 2))` and the integrand is
//! split into four exponential pieces
//!
//! ```text
//! g(q) = c * (+-iq)^alpha / (2 cos(alpha pi / 2)) * exp(i k q) / (q^2 - n^2)
//! ```
//!
//! one per choice of exponential in the box kernel (`exp(+-i pi q / 2)`) and
//! per power. Each piece is closed in the half-plane where `exp(i k q)`
//! decays. The real poles at `q = +-n` are excluded by small semicircles,
//! so the principal value of a piece is
//!
//! * `+i pi (Res(+n) + Res(-n)) + cut` when closed in the upper half-plane,
//! * `-i pi (Res(+n) + Res(-n)) + cut` when closed in the lower half-plane,
//!
//! where `cut` is the wrap-around integral along the branch cut of the power,
//! present only for `(iq)^alpha` closed upward and `(-iq)^alpha` closed
//! downward. With `q = +-i s` both cases reduce to
//!
//! ```text
//! cut = -i c Int_0^inf J(s) exp(-|k| s) / (s^2 + n^2) ds
//! ```
//!
//! with `J` the jump returned by [`cut_discontinuity`]. The four principal
//! values add up to the original integral because the summed integrand is
//! regular at `q = +-n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numeric::cis_pi;
use crate::quadrature::{
    accumulate, adaptive_finite, empty_result, oscillatory_tail, pv_simple_pole, split_point, QuadratureResult,
    ToleranceSpec,
};
use crate::symbol::{cut_discontinuity, power_term, PowerFactor};
use crate::well::{integral_prefactor, ScaledPosition, StateIndex, WellConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Closure {
    Upper,
    Lower,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialPiece {
    /// Includes the `-A / (pi n^alpha)` prefactor share and the `1/2` of the
    /// kernel's exponential split.
    pub coefficient: Complex64,
    /// `x_tilde +- 1`; the exponent is `i pi offset q / 2`.
    pub offset: f64,
    pub power: PowerFactor,
    pub n: StateIndex,
    pub alpha: f64,
}

impl ExponentialPiece {
    /// Coefficient of `i q` in the exponent.
    pub fn slope(&self) -> f64 {
        0.5 * PI * self.offset
    }

    /// Simple poles of the kernel, `[+n, -n]`.
    pub fn poles(&self) -> [f64; 2] {
        let nf = self.n.as_f64();
        [nf, -nf]
    }

    /// The piece at a complex point off its cut.
    pub fn evaluate(&self, q: Complex64) -> Result<Complex64> {
        let nf = self.n.as_f64();
        let oscillation = (Complex64::new(0.0, self.slope()) * q).exp();
        Ok(self.coefficient * power_term(q, self.alpha, self.power)? * oscillation / (q * q - nf * nf))
    }

    /// The piece on the real axis.
    pub fn evaluate_real(&self, q: f64) -> Complex64 {
        let nf = self.n.as_f64();
        let term = power_term(Complex64::new(q, 0.0), self.alpha, self.power).expect("real axis is off both cuts");
        self.coefficient * term * cis_pi(0.5 * self.offset * q) / ((q - nf) * (q + nf))
    }

    /// Residue at one of the real poles `+-n`.
    pub fn residue(&self, pole: f64) -> Complex64 {
        let term = power_term(Complex64::new(pole, 0.0), self.alpha, self.power).expect("real axis is off both cuts");
        self.coefficient * term * cis_pi(0.5 * self.offset * pole) / (2.0 * pole)
    }
}

/// Splits the continued integrand for state `n` at `x_tilde` into its four
/// exponential pieces, ordered
/// `[(+, iq), (+, -iq), (-, iq), (-, -iq)]` by kernel exponential and power.
pub fn decompose(cfg: &WellConfig, n: StateIndex, x_tilde: ScaledPosition) -> Vec<ExponentialPiece> {
    let nf = n.as_f64();
    let scale = integral_prefactor(cfg, n) / nf.powf(cfg.alpha());
    let mut pieces = Vec::with_capacity(4);
    for sigma in [1.0, -1.0] {
        // odd n: cos = (e+ + e-)/2; even n: i sin = (e+ - e-)/2
        let split = if n.is_odd() { 1.0 } else { sigma };
        let coefficient = Complex64::new(-scale * nf * n.parity_sign() * split * 0.5, 0.0);
        for power in [PowerFactor::Iq, PowerFactor::MinusIq] {
            pieces.push(ExponentialPiece {
                coefficient,
                offset: x_tilde.value() + sigma,
                power,
                n,
                alpha: cfg.alpha(),
            });
        }
    }
    pieces
}

pub fn closure_halfplane(piece: &ExponentialPiece) -> Closure {
    if piece.offset > 0.0 {
        Closure::Upper
    } else if piece.offset < 0.0 {
        Closure::Lower
    } else {
        Closure::Degenerate
    }
}

/// Indentation contribution of one real pole: `+i pi Res` for an upward
/// closure, `-i pi Res` for a downward one.
pub fn half_residue(piece: &ExponentialPiece, pole: f64) -> Result<Complex64> {
    let sign = match closure_halfplane(piece) {
        Closure::Upper => 1.0,
        Closure::Lower => -1.0,
        Closure::Degenerate => return Err(Error::DegenerateClosure),
    };
    Ok(Complex64::new(0.0, sign * PI) * piece.residue(pole))
}

/// `i pi` times the sum of residues of all pieces at `pole`, i.e. the
/// indentation term every piece would pick up under one common detour.
/// Vanishes because the summed integrand is regular at `+-n`.
pub fn indentation_imbalance(pieces: &[ExponentialPiece], pole: f64) -> Complex64 {
    Complex64::new(0.0, PI) * pieces.iter().map(|p| p.residue(pole)).sum::<Complex64>()
}

fn cut_is_enclosed(piece: &ExponentialPiece) -> bool {
    matches!(
        (closure_halfplane(piece), piece.power),
        (Closure::Upper, PowerFactor::Iq) | (Closure::Lower, PowerFactor::MinusIq)
    )
}

/// Wrap-around integral along the branch cut enclosed by the piece's
/// closure; zero when the cut lies in the other half-plane or when
/// `sin(pi alpha) = 0`.
pub fn branch_cut_integral(piece: &ExponentialPiece, tol: &ToleranceSpec) -> Result<QuadratureResult> {
    if closure_halfplane(piece) == Closure::Degenerate {
        return Err(Error::DegenerateClosure);
    }
    tol.validate()?;
    let side = piece.power.cut_side();
    let unit_jump = cut_discontinuity(1.0, piece.alpha, side);
    if !cut_is_enclosed(piece) || unit_jump.norm() == 0.0 {
        return Ok(empty_result().diag("cut_active", 0.0));
    }

    let decay = piece.slope().abs();
    let nf = piece.n.as_f64();
    let alpha = piece.alpha;
    let weight = Complex64::new(0.0, -1.0) * piece.coefficient;
    let scale = (weight * unit_jump).norm();
    let budget = tol.abs_tol / scale.max(f64::MIN_POSITIVE);

    // truncate where the integrand envelope drops below budget / 100
    let envelope = |s: f64| (-decay * s).exp() * s.powf(alpha) / (nf * nf + s * s);
    let mut upper = nf.max(1.0);
    while envelope(upper) >= 0.01 * budget {
        upper *= 2.0;
    }
    // Int_S^inf s^(alpha-2) e^(-k s) ds <= S^(alpha-2) e^(-k S) / k
    let remainder = upper.powf(alpha - 2.0) * (-decay * upper).exp() / decay;

    let integrand = move |s: f64| cut_discontinuity(s, alpha, side) * (-decay * s).exp() / (s * s + nf * nf);
    let inner_tol = tol.scaled(0.1 / scale.max(f64::MIN_POSITIVE));
    let raw = adaptive_finite(integrand, 0.0, upper, &inner_tol)?;
    let value = weight * raw.value;
    let error = weight.norm() * raw.abs_error_estimate + scale * remainder;
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        evaluations: raw.evaluations,
        converged: raw.converged && error <= tol.target(value.norm()),
        diagnostics: vec![
            ("cut_active".into(), 1.0),
            ("truncation".into(), upper),
            ("truncation_remainder".into(), scale * remainder),
            ("panels".into(), raw.diagnostic("panels").unwrap_or(0.0)),
        ],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PieceContribution {
    pub piece: ExponentialPiece,
    pub closure: Closure,
    /// Indentation terms at `[+n, -n]`.
    pub half_residues: [Complex64; 2],
    pub cut: Complex64,
    pub cut_error: f64,
    /// Numerical principal value of the piece along the real axis, filled in
    /// by [`audit_principal_values`].
    pub principal_value: Option<QuadratureResult>,
}

impl PieceContribution {
    /// Contour value of this piece's principal-value integral.
    pub fn contour_value(&self) -> Complex64 {
        self.half_residues[0] + self.half_residues[1] + self.cut
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourEvaluation {
    pub pieces: Vec<PieceContribution>,
    /// Full residues of poles strictly inside a closed contour. The kernel
    /// has no poles off the real axis, so this stays zero.
    pub residue_sum: Complex64,
    pub half_residue_sum: Complex64,
    pub cut_sum: Complex64,
    /// Sum of the numerically integrated piece principal values, when
    /// audited.
    pub pv_sum: Option<Complex64>,
    pub total: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// Assembles half-residues and cut integrals of all four pieces.
pub fn contour_evaluate(
    cfg: &WellConfig,
    n: StateIndex,
    x_tilde: ScaledPosition,
    tol: &ToleranceSpec,
) -> Result<ContourEvaluation> {
    let x_tilde = x_tilde.require_interior_or_exterior()?;
    tol.validate()?;
    let pieces = decompose(cfg, n, x_tilde);
    let piece_tol = tol.scaled(0.25);

    let mut contributions = Vec::with_capacity(pieces.len());
    let mut half_residue_sum = Complex64::new(0.0, 0.0);
    let mut cut_sum = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    for piece in pieces {
        let [p_plus, p_minus] = piece.poles();
        let half_residues = [half_residue(&piece, p_plus)?, half_residue(&piece, p_minus)?];
        let cut = branch_cut_integral(&piece, &piece_tol)?;
        half_residue_sum += half_residues[0] + half_residues[1];
        cut_sum += cut.value;
        error += cut.abs_error_estimate;
        evaluations += cut.evaluations;
        converged &= cut.converged;
        contributions.push(PieceContribution {
            piece,
            closure: closure_halfplane(&piece),
            half_residues,
            cut: cut.value,
            cut_error: cut.abs_error_estimate,
            principal_value: None,
        });
    }
    let total = half_residue_sum + cut_sum;
    // rounding floor of the residue arithmetic
    error += 16.0 * f64::EPSILON * contributions.iter().map(|c| c.contour_value().norm()).sum::<f64>();
    Ok(ContourEvaluation {
        pieces: contributions,
        residue_sum: Complex64::new(0.0, 0.0),
        half_residue_sum,
        cut_sum,
        pv_sum: None,
        total,
        abs_error_estimate: error,
        evaluations,
        converged: converged && error <= tol.target(total.norm()),
    })
}

/// Real-axis principal value of one piece, integrated numerically: poles are
/// handled by [`pv_simple_pole`] on `[-Q0, 0]` and `[0, Q0]`, the two tails
/// by [`oscillatory_tail`].
pub fn piece_principal_value(piece: &ExponentialPiece, tol: &ToleranceSpec) -> Result<QuadratureResult> {
    if closure_halfplane(piece) == Closure::Degenerate {
        return Err(Error::DegenerateClosure);
    }
    let q0 = split_point(piece.n);
    let [p_plus, p_minus] = piece.poles();
    let share = tol.scaled(0.25);
    let half_period = PI / piece.slope().abs();
    let f = |q: f64| piece.evaluate_real(q);
    let mirrored = |q: f64| piece.evaluate_real(-q);

    let mut total = empty_result();
    let right = pv_simple_pole(f, p_plus, piece.residue(p_plus), 0.0, q0, &share)?;
    accumulate(&mut total, &right, Complex64::new(1.0, 0.0), "pv_right");
    let left = pv_simple_pole(f, p_minus, piece.residue(p_minus), -q0, 0.0, &share)?;
    accumulate(&mut total, &left, Complex64::new(1.0, 0.0), "pv_left");
    let tail_right = oscillatory_tail(f, q0, half_period, &share)?;
    accumulate(&mut total, &tail_right, Complex64::new(1.0, 0.0), "tail_right");
    let tail_left = oscillatory_tail(mirrored, q0, half_period, &share)?;
    accumulate(&mut total, &tail_left, Complex64::new(1.0, 0.0), "tail_left");
    total.converged &= total.abs_error_estimate <= tol.target(total.value.norm());
    Ok(total)
}

/// Fills every piece's numerical principal value and `pv_sum`.
pub fn audit_principal_values(evaluation: &mut ContourEvaluation, tol: &ToleranceSpec) -> Result<()> {
    let mut sum = Complex64::new(0.0, 0.0);
    for contribution in &mut evaluation.pieces {
        let pv = piece_principal_value(&contribution.piece, tol)?;
        sum += pv.value;
        contribution.principal_value = Some(pv);
    }
    evaluation.pv_sum = Some(sum);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::complex_power_pair;
    use crate::well::{mode_kernel, mode_phase, piecewise_state};

    fn n(k: i64) -> StateIndex {
        StateIndex::new(k).unwrap()
    }

    fn pos(x: f64) -> ScaledPosition {
        ScaledPosition::new(x).unwrap()
    }

    fn continued_integrand(cfg: &WellConfig, n: StateIndex, x: f64, q: f64) -> Complex64 {
        let scale = integral_prefactor(cfg, n) / n.as_f64().powf(cfg.alpha());
        -scale
            * complex_power_pair(Complex64::new(q, 0.0), cfg.alpha()).unwrap()
            * mode_phase(n)
            * mode_kernel(n, q)
            * Complex64::from_polar(1.0, PI * q * x / 2.0)
    }

    #[test]
    fn slopes_at_centre() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        let pieces = decompose(&cfg, n(1), pos(0.0));
        assert_eq!(pieces.len(), 4);
        let slopes: Vec<f64> = pieces.iter().map(|p| p.slope()).collect();
        assert_eq!(slopes, vec![PI / 2.0, PI / 2.0, -PI / 2.0, -PI / 2.0]);
    }

    #[test]
    fn outside_all_pieces_close_upward() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        let pieces = decompose(&cfg, n(1), pos(2.0));
        let slopes: Vec<f64> = pieces.iter().map(|p| p.slope()).collect();
        assert_eq!(slopes, vec![1.5 * PI, 1.5 * PI, PI / 2.0, PI / 2.0]);
        assert!(pieces.iter().all(|p| closure_halfplane(p) == Closure::Upper));
    }

    #[test]
    fn closure_by_slope_sign() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        let mut p = decompose(&cfg, n(1), pos(0.0))[0];
        p.offset = 1.0;
        assert_eq!(closure_halfplane(&p), Closure::Upper);
        p.offset = -3.0;
        assert_eq!(closure_halfplane(&p), Closure::Lower);
        p.offset = 0.0;
        assert_eq!(closure_halfplane(&p), Closure::Degenerate);
        assert!(half_residue(&p, 1.0).is_err());
    }

    #[test]
    fn boundary_marks_degenerate_pieces() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        let pieces = decompose(&cfg, n(1), pos(1.0));
        let degenerate = pieces
            .iter()
            .filter(|p| closure_halfplane(p) == Closure::Degenerate)
            .count();
        assert_eq!(degenerate, 2);
        assert!(contour_evaluate(&cfg, n(1), pos(-1.0), &ToleranceSpec::default()).is_err());
    }

    #[test]
    fn pieces_reconstruct_continued_integrand() {
        for &alpha in &[1.25, 1.5, 2.0] {
            let cfg = WellConfig::nondimensional(alpha).unwrap();
            for k in 1..4 {
                for &x in &[0.5, -0.25, 2.5] {
                    let pieces = decompose(&cfg, n(k), pos(x));
                    for &q in &[0.3, -1.7, 4.4, -9.1] {
                        let sum: Complex64 = pieces.iter().map(|p| p.evaluate_real(q)).sum();
                        let expected = continued_integrand(&cfg, n(k), x, q);
                        assert!(
                            (sum - expected).norm() <= 1e-12 * expected.norm().max(1e-3),
                            "alpha={alpha} n={k} x={x} q={q}: {sum} vs {expected}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn residue_matches_numerical_limit() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        for piece in decompose(&cfg, n(2), pos(0.3)) {
            for pole in piece.poles() {
                let h = 1e-6;
                let numeric = 0.5 * h * (piece.evaluate_real(pole + h) - piece.evaluate_real(pole - h));
                assert!((numeric - piece.residue(pole)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn half_residues_of_one_piece_by_hand() {
        // alpha = 2, x = 0, n = 1, piece (e^{+i pi q/2}, (iq)^2): g = -q^2 e^{i pi q/2} / (4 pi (q^2 - 1))
        // Res(+1) = -e^{i pi/2} / (8 pi) = -i/(8 pi), half residue i pi Res = 1/8
        let cfg = WellConfig::nondimensional(2.0).unwrap();
        let piece = decompose(&cfg, n(1), pos(0.0))[0];
        let h = half_residue(&piece, 1.0).unwrap();
        assert!((h - Complex64::new(0.125, 0.0)).norm() < 1e-15, "{h}");
    }

    #[test]
    fn indentation_terms_cancel_across_pieces() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        let pieces = decompose(&cfg, n(1), pos(0.5));
        for pole in [1.0, -1.0] {
            assert!(indentation_imbalance(&pieces, pole).norm() < 1e-12);
        }
    }

    #[test]
    fn alpha_two_reproduces_piecewise_state() {
        let cfg = WellConfig::nondimensional(2.0).unwrap();
        for k in 1..4 {
            for &x in &[0.0, 0.5, -0.75, 2.0, -2.5] {
                let e = contour_evaluate(&cfg, n(k), pos(x), &ToleranceSpec::default()).unwrap();
                assert_eq!(e.cut_sum.norm(), 0.0);
                let expected = piecewise_state(&cfg, n(k), x);
                assert!(
                    (e.total - expected).norm() < 1e-10,
                    "n={k} x={x} {} vs {expected}",
                    e.total
                );
            }
        }
        let e = contour_evaluate(&cfg, n(1), pos(0.0), &ToleranceSpec::default()).unwrap();
        assert!((e.half_residue_sum - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cut_integral_zero_cases() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        let pieces = decompose(&cfg, n(1), pos(0.0));
        // piece 1 is (-iq) closed upward: its cut is in the lower half-plane
        let r = branch_cut_integral(&pieces[1], &ToleranceSpec::default()).unwrap();
        assert_eq!(r.value.norm(), 0.0);
        let cfg2 = WellConfig::nondimensional(2.0).unwrap();
        for p in decompose(&cfg2, n(1), pos(0.3)) {
            assert!(branch_cut_integral(&p, &ToleranceSpec::default()).unwrap().value.norm() < 1e-14);
        }
        let active = branch_cut_integral(&pieces[0], &ToleranceSpec::default()).unwrap();
        assert!(active.value.norm() > 0.0);
        assert_eq!(active.diagnostic("cut_active"), Some(1.0));
    }

    #[test]
    fn each_piece_matches_its_real_axis_principal_value() {
        let cfg = WellConfig::nondimensional(1.5).unwrap();
        let tol = ToleranceSpec::default();
        let mut e = contour_evaluate(&cfg, n(1), pos(0.5), &tol).unwrap();
        audit_principal_values(&mut e, &tol).unwrap();
        for c in &e.pieces {
            let pv = c.principal_value.as_ref().unwrap();
            assert!(
                (pv.value - c.contour_value()).norm() < 1e-7,
                "{:?} {:?}: {} vs {}",
                c.closure,
                c.piece.power,
                pv.value,
                c.contour_value()
            );
        }
        assert!((e.pv_sum.unwrap() - e.total).norm() < 1e-7);
    }
}
