//! Riesz derivative on a periodic grid.
//!
//! A sampled function is transformed with an FFT, multiplied by `-|q_k|^alpha`
//! at the discrete wavenumbers `q_k = 2 pi k / L`, and transformed back. The
//! multiplier can also be built from the continued pair
//! `[(iq)^alpha + (-iq)^alpha] / (2 cos(alpha pi / 2))`, which coincides with
//! `|q|^alpha` on the real axis.
//!
//! [`sfse_residual`] applies the fractional Hamiltonian
//! `H = -D_alpha hbar^alpha R^alpha` to the piecewise box state embedded in a
//! period `L`, and reports `H psi - E_n psi`. With `alpha = 2` and
//! `D_2 = 1/2m` this is the textbook `-(hbar^2 / 2m) psi''` convention.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::symbol::{abs_power, complex_power_pair};
use crate::well::{energy_level, piecewise_state, validate_alpha, StateIndex, WellConfig};
use crate::{Error, Result};

pub const MIN_GRID: usize = 8;

/// Cells on each side of `x = +-a` left out of the residual norms.
pub const GUARD_CELLS: usize = 8;

/// Smallest period, in units of `a`, accepted by [`sfse_residual`].
pub const MIN_PERIOD_OVER_A: f64 = 8.0;

/// Default period, in units of `a`.
pub const DEFAULT_PERIOD_OVER_A: f64 = 16.0;

/// Samples at `x_j = -L/2 + j L / N`, `j = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    period: f64,
    samples: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(period: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::NonPositive {
                name: "period",
                value: period,
            });
        }
        check_grid_size(samples.len())?;
        if let Some(j) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidGrid(format!("sample {j} is not finite")));
        }
        Ok(Self { period, samples })
    }

    pub fn from_fn(len: usize, period: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_grid_size(len)?;
        let h = period / len as f64;
        let samples = (0..len).map(|j| f(-0.5 * period + j as f64 * h)).collect();
        Self::new(period, samples)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.len() as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -0.5 * self.period + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.node(j))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn check_grid_size(len: usize) -> Result<()> {
    if len < MIN_GRID || !len.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "grid size must be a power of two >= {MIN_GRID}, got {len}"
        )));
    }
    Ok(())
}

/// Wavenumber of DFT bin `j` on an `len`-point grid of period `period`; bins
/// at or above `len / 2` wrap to negative frequencies.
pub fn wavenumber(j: usize, len: usize, period: f64) -> f64 {
    let signed = if j < len / 2 { j as f64 } else { j as f64 - len as f64 };
    2.0 * PI * signed / period
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Multiplier {
    /// `-|q|^alpha`
    AbsPower,
    /// `-[(iq)^alpha + (-iq)^alpha] / (2 cos(alpha pi / 2))`
    PowerPair,
}

/// Riesz derivative with the `-|q|^alpha` multiplier.
pub fn riesz_apply(f: &SampledFunction, alpha: f64) -> Result<SampledFunction> {
    riesz_apply_with(f, alpha, Multiplier::AbsPower)
}

pub fn riesz_apply_with(f: &SampledFunction, alpha: f64, multiplier: Multiplier) -> Result<SampledFunction> {
    let alpha = validate_alpha(alpha)?;
    let len = f.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);

    let mut buffer = f.samples.clone();
    forward.process(&mut buffer);
    let norm = 1.0 / len as f64;
    for (j, z) in buffer.iter_mut().enumerate() {
        let q = wavenumber(j, len, f.period);
        let symbol = match multiplier {
            Multiplier::AbsPower => Complex64::new(abs_power(q, alpha), 0.0),
            Multiplier::PowerPair => complex_power_pair(Complex64::new(q, 0.0), alpha)?,
        };
        *z *= -symbol * norm;
    }
    inverse.process(&mut buffer);
    Ok(SampledFunction {
        period: f.period,
        samples: buffer,
    })
}

/// Relative max-norm error of [`riesz_apply`] on the pure mode
/// `exp(i q_k x)`, `q_k = 2 pi k / L`, against `-|q_k|^alpha exp(i q_k x)`.
pub fn eigenmode_error(len: usize, period: f64, alpha: f64, k: usize) -> Result<f64> {
    check_grid_size(len)?;
    if k >= len / 2 {
        return Err(Error::InvalidGrid(format!("mode {k} is not resolved on {len} points")));
    }
    let q = 2.0 * PI * k as f64 / period;
    let mode = SampledFunction::from_fn(len, period, |x| Complex64::from_polar(1.0, q * x))?;
    let applied = riesz_apply(&mode, alpha)?;
    let expected = -abs_power(q, alpha);
    let error = mode
        .samples
        .iter()
        .zip(&applied.samples)
        .map(|(m, r)| (r - expected * m).norm())
        .fold(0.0, f64::max);
    Ok(error / expected.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfseResidual {
    pub residual: SampledFunction,
    pub energy: f64,
    /// Max `|r|` over `|x| < a - guard`.
    pub interior_max: f64,
    /// Max `|r|` over `|x| > a + guard`.
    pub exterior_max: f64,
    pub guard_width: f64,
}

impl SfseResidual {
    /// Max `|r|` over nodes with `lo <= |x| <= hi`.
    pub fn max_in_band(&self, lo: f64, hi: f64) -> f64 {
        self.residual
            .nodes()
            .zip(self.residual.samples())
            .filter(|(x, _)| (lo..=hi).contains(&x.abs()))
            .map(|(_, r)| r.norm())
            .fold(0.0, f64::max)
    }
}

/// `r = -D_alpha hbar^alpha R^alpha psi - E_n psi` for the piecewise state,
/// sampled on `len` points of period `period` (physical units).
pub fn sfse_residual(cfg: &WellConfig, n: StateIndex, len: usize, period: f64) -> Result<SfseResidual> {
    if period.is_nan() || period < MIN_PERIOD_OVER_A * cfg.a() {
        return Err(Error::InvalidGrid(format!(
            "period {period} is below {MIN_PERIOD_OVER_A} a = {}",
            MIN_PERIOD_OVER_A * cfg.a()
        )));
    }
    let psi = SampledFunction::from_fn(len, period, |x| Complex64::new(piecewise_state(cfg, n, x), 0.0))?;
    let applied = riesz_apply(&psi, cfg.alpha())?;
    let energy = energy_level(cfg, n);
    let coupling = cfg.d_alpha() * cfg.hbar().powf(cfg.alpha());
    let samples: Vec<Complex64> = psi
        .samples
        .iter()
        .zip(&applied.samples)
        .map(|(p, r)| -coupling * r - energy * p)
        .collect();
    let residual = SampledFunction { period, samples };

    let guard_width = GUARD_CELLS as f64 * residual.spacing();
    let mut interior_max: f64 = 0.0;
    let mut exterior_max: f64 = 0.0;
    for (x, r) in residual.nodes().zip(&residual.samples) {
        let distance = x.abs() - cfg.a();
        if distance < -guard_width {
            interior_max = interior_max.max(r.norm());
        } else if distance > guard_width {
            exterior_max = exterior_max.max(r.norm());
        }
    }
    Ok(SfseResidual {
        residual,
        energy,
        interior_max,
        exterior_max,
        guard_width,
    })
}
