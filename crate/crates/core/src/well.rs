//! Physical configuration of the infinite well, the piecewise eigenstates,
//! and the integrand of their Fourier representation.
//!
//! Positions are scaled by the half-width, `x_tilde = x / a`, so the well
//! occupies `[-1, 1]` and the integration variable `q` is the wavenumber in
//! units of `pi / (2a)`. With `E_n = D_alpha (n pi hbar / 2a)^alpha` the
//! integral representation of state `n` reads
//!
//! ```text
//! psi_n(x) = -(A D_alpha / (pi E_n)) (n pi hbar / 2a)^alpha
//!            * Int dq |q / n|^alpha  M_n(q)  exp(i pi q x_tilde / 2)
//! ```
//!
//! where `M_n` is the Fourier kernel of the box mode (see [`mode_kernel`] and
//! [`mode_phase`]). The prefactor collapses to `-A / pi`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numeric::{cis_pi, sin_pi};
use crate::{Error, Result};

/// Distance from `q = +-n` inside which the kernel returns its analytic limit.
pub const REMOVABLE_FILL_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellConfig {
    a: f64,
    hbar: f64,
    d_alpha: f64,
    alpha: f64,
    amplitude: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// Checks `1 < alpha <= 2`.
pub fn validate_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
        Ok(alpha)
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

impl WellConfig {
    pub fn new(a: f64, hbar: f64, d_alpha: f64, alpha: f64, amplitude: f64) -> Result<Self> {
        Ok(Self {
            a: positive("a", a)?,
            hbar: positive("hbar", hbar)?,
            d_alpha: positive("d_alpha", d_alpha)?,
            alpha: validate_alpha(alpha)?,
            amplitude: positive("amplitude", amplitude)?,
        })
    }

    /// `a = hbar = D_alpha = A = 1`.
    pub fn nondimensional(alpha: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, alpha, 1.0)
    }

    /// Replaces the amplitude by the box normalization `1 / sqrt(a)`.
    pub fn with_normalized_amplitude(mut self) -> Self {
        self.amplitude = 1.0 / self.a.sqrt();
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = validate_alpha(alpha)?;
        Ok(self)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn d_alpha(&self) -> f64 {
        self.d_alpha
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
}

/// Quantum number of a box eigenstate, `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateIndex(u32);

impl StateIndex {
    pub const GROUND: StateIndex = StateIndex(1);

    pub fn new(n: i64) -> Result<Self> {
        if (1..=i64::from(u32::MAX)).contains(&n) {
            Ok(Self(n as u32))
        } else {
            Err(Error::InvalidState(n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// Odd states are cosines, even states sines.
    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    /// `+1` or `-1`: the sign of `sin(n pi / 2)` for odd `n`, of
    /// `cos(n pi / 2)` for even `n`.
    pub fn parity_sign(self) -> f64 {
        let k = if self.is_odd() { (self.0 - 1) / 2 } else { self.0 / 2 };
        if k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Position in units of the half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPosition(f64);

impl ScaledPosition {
    pub fn new(x_tilde: f64) -> Result<Self> {
        if x_tilde.is_finite() {
            Ok(Self(x_tilde))
        } else {
            Err(Error::NonFinitePosition(x_tilde))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_boundary(self) -> bool {
        self.0.abs() == 1.0
    }

    /// Errors on `x_tilde = +-1`, where the contour closure degenerates.
    pub fn require_interior_or_exterior(self) -> Result<Self> {
        if self.is_boundary() {
            Err(Error::Boundary(self.0))
        } else {
            Ok(self)
        }
    }
}

/// `E_n = D_alpha (n pi hbar / 2a)^alpha`.
pub fn energy_level(cfg: &WellConfig, n: StateIndex) -> f64 {
    cfg.d_alpha * (n.as_f64() * PI * cfg.hbar / (2.0 * cfg.a)).powf(cfg.alpha)
}

/// `(A D_alpha / (pi E_n)) (n pi hbar / 2a)^alpha`, identically `A / pi`.
pub fn integral_prefactor(cfg: &WellConfig, n: StateIndex) -> f64 {
    let momentum = (n.as_f64() * PI * cfg.hbar / (2.0 * cfg.a)).powf(cfg.alpha);
    cfg.amplitude * cfg.d_alpha / (PI * energy_level(cfg, n)) * momentum
}

/// Piecewise eigenstate at physical position `x`: `A cos(n pi x / 2a)` for odd
/// `n`, `A sin(n pi x / 2a)` for even `n` inside the well, exactly zero for
/// `|x| >= a`.
pub fn piecewise_state(cfg: &WellConfig, n: StateIndex, x: f64) -> f64 {
    if x.abs() >= cfg.a {
        return 0.0;
    }
    let phase = n.as_f64() * x / (2.0 * cfg.a);
    let v = if n.is_odd() {
        crate::numeric::cos_pi(phase)
    } else {
        sin_pi(phase)
    };
    cfg.amplitude * v
}

/// Real factor of the box-mode Fourier kernel.
///
/// Odd `n`: `s n cos(pi q / 2) / (q^2 - n^2)` with `s = sin(n pi / 2)`, which
/// is `cos(pi q / 2) / (q^2 - 1)` at `n = 1`. Even `n`:
/// `c n sin(pi q / 2) / (q^2 - n^2)` with `c = cos(n pi / 2)`. The even kernel
/// enters the integrand multiplied by `i` (see [`mode_phase`]).
///
/// Evaluated as `-+ n sin(pi t / 2) / (t (q + n))` with `t = |q| - n`, which
/// has no cancellation near the removable singularity; within
/// [`REMOVABLE_FILL_RADIUS`] of `+-n` the analytic limit `-+pi/4` is returned.
pub fn mode_kernel(n: StateIndex, q: f64) -> f64 {
    let nf = n.as_f64();
    let aq = q.abs();
    let t = aq - nf;
    let magnitude = if t.abs() < REMOVABLE_FILL_RADIUS {
        FRAC_PI_4
    } else {
        nf * sin_pi(0.5 * t) / (t * (aq + nf))
    };
    if n.is_odd() || q < 0.0 {
        -magnitude
    } else {
        magnitude
    }
}

/// `1` for odd states, `i` for even states.
pub fn mode_phase(n: StateIndex) -> Complex64 {
    if n.is_odd() {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// Full integrand of the Fourier representation of state `n` at scaled
/// position `x_tilde`, including the prefactor.
pub fn integrand(cfg: &WellConfig, n: StateIndex, x_tilde: ScaledPosition, q: f64) -> Complex64 {
    let symbol = (q.abs() / n.as_f64()).powf(cfg.alpha);
    let kernel = mode_phase(n) * mode_kernel(n, q);
    -integral_prefactor(cfg, n) * symbol * kernel * cis_pi(0.5 * q * x_tilde.value())
}
