//! Fractional infinite-well integral representation.
//!
//! The ground state (and every higher state) of the infinite square well can
//! be written as a Fourier integral whose kernel carries the Riesz symbol
//! `|q|^alpha`. This crate evaluates that integral along two independent
//! routes and compares both against the piecewise eigenstate:
//!
//! * [`quadrature::direct_integral`] integrates along the real axis, either by
//!   partitioning the oscillatory tail and accelerating the arc sums, or by
//!   Abel damping followed by extrapolation to zero damping;
//! * [`contour::contour_evaluate`] continues `|q|^alpha` into the complex plane
//!   as `[(iq)^alpha + (-iq)^alpha] / (2 cos(alpha pi / 2))`, splits the
//!   integrand into four exponential pieces, and sums indentation
//!   half-residues plus branch-cut integrals.
//!
//! [`spectral`] applies the Riesz derivative on a periodic grid and
//! [`consistency`] runs grid scans and builds the deviation report.

pub mod config;
pub mod consistency;
pub mod contour;
mod error;
pub mod numeric;
pub mod parallel;
pub mod quadrature;
pub mod report;
pub mod spectral;
pub mod symbol;
pub mod well;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Tool version reported in provenance blocks and `--version`.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Version of the CSV/JSON report schema and config format.
pub const SCHEMA_VERSION: &str = "1";
