//! The Riesz symbol `|q|^alpha` and its analytic continuation
//! `[(iq)^alpha + (-iq)^alpha] / (2 cos(alpha pi / 2))`.
//!
//! All complex powers use the principal branch, `arg` in `(-pi, pi]`, so
//! `(iq)^alpha` is cut along the positive imaginary axis and `(-iq)^alpha`
//! along the negative imaginary axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numeric::{cis_pi, cos_pi, sin_pi};
use crate::{Error, Result};

/// Absolute distance from the imaginary axis inside which direct evaluation
/// of a cut power is refused.
pub const CUT_PROXIMITY: f64 = 1e-10;

/// `|2 cos(alpha pi / 2)|` below this value is flagged as ill-conditioned.
pub const CONDITIONING_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CutSide {
    /// Cut of `(iq)^alpha`.
    PositiveImaginaryAxis,
    /// Cut of `(-iq)^alpha`.
    NegativeImaginaryAxis,
}

/// Which half of the continued symbol a term carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PowerFactor {
    /// `(iq)^alpha`
    Iq,
    /// `(-iq)^alpha`
    MinusIq,
}

impl PowerFactor {
    pub fn cut_side(self) -> CutSide {
        match self {
            PowerFactor::Iq => CutSide::PositiveImaginaryAxis,
            PowerFactor::MinusIq => CutSide::NegativeImaginaryAxis,
        }
    }

    fn base(self, q: Complex64) -> Complex64 {
        match self {
            PowerFactor::Iq => Complex64::new(-q.im, q.re),
            PowerFactor::MinusIq => Complex64::new(q.im, -q.re),
        }
    }
}

pub fn abs_power(q: f64, alpha: f64) -> f64 {
    q.abs().powf(alpha)
}

/// `2 cos(alpha pi / 2)`, exactly `-2` at `alpha = 2`.
pub fn normalization(alpha: f64) -> f64 {
    2.0 * cos_pi(0.5 * alpha)
}

pub fn is_ill_conditioned(alpha: f64) -> bool {
    normalization(alpha).abs() < CONDITIONING_THRESHOLD
}

/// Principal-branch `z^alpha`. Points on the imaginary axis (including the
/// signed-zero real parts produced by multiplying a real `q` by `+-i`) take
/// an exact-phase path.
pub fn principal_power(z: Complex64, alpha: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.re == 0.0 {
        let half_turn = if z.im > 0.0 { 0.5 * alpha } else { -0.5 * alpha };
        return z.im.abs().powf(alpha) * cis_pi(half_turn);
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Complex64::new(z.re.powf(alpha), 0.0);
    }
    let modulus = z.norm().powf(alpha);
    Complex64::from_polar(modulus, alpha * z.arg())
}

fn check_cut(q: Complex64, side: CutSide) -> Result<()> {
    let on_side = match side {
        CutSide::PositiveImaginaryAxis => q.im > CUT_PROXIMITY,
        CutSide::NegativeImaginaryAxis => q.im < -CUT_PROXIMITY,
    };
    if on_side && q.re.abs() < CUT_PROXIMITY {
        Err(Error::NearBranchCut {
            re: q.re,
            im: q.im,
            threshold: CUT_PROXIMITY,
        })
    } else {
        Ok(())
    }
}

/// One normalized half of the continued symbol,
/// `(+-iq)^alpha / (2 cos(alpha pi / 2))`.
pub fn power_term(q: Complex64, alpha: f64, factor: PowerFactor) -> Result<Complex64> {
    check_cut(q, factor.cut_side())?;
    Ok(principal_power(factor.base(q), alpha) / normalization(alpha))
}

/// `[(iq)^alpha + (-iq)^alpha] / (2 cos(alpha pi / 2))`; equals `|q|^alpha`
/// on the real axis.
pub fn complex_power_pair(q: Complex64, alpha: f64) -> Result<Complex64> {
    Ok(power_term(q, alpha, PowerFactor::Iq)? + power_term(q, alpha, PowerFactor::MinusIq)?)
}

/// `|complex_power_pair(q) - |q|^alpha|` for real `q`.
pub fn symbol_identity_residual(q: f64, alpha: f64) -> f64 {
    let pair = complex_power_pair(Complex64::new(q, 0.0), alpha).expect("real q never lies on an imaginary-axis cut");
    (pair - abs_power(q, alpha)).norm()
}

/// Jump of the normalized power across its cut at `q = +-i s`, taken as the
/// value on the side reached first when circling counterclockwise minus the
/// value on the other side: `2 i s^alpha sin(pi alpha) / (2 cos(alpha pi / 2))`
/// for both cuts.
pub fn cut_discontinuity(s: f64, alpha: f64, side: CutSide) -> Complex64 {
    debug_assert!(s > 0.0);
    // (iq)^a just right of +is is s^a e^{i pi a}, just left s^a e^{-i pi a};
    // (-iq)^a just left of -is is s^a e^{i pi a}, just right s^a e^{-i pi a}.
    // Both orderings give the same jump.
    let _ = side;
    Complex64::new(0.0, 2.0 * s.powf(alpha) * sin_pi(alpha)) / normalization(alpha)
}
