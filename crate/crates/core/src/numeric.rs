//! Small floating-point helpers shared across modules.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `sin(pi x)` with exact zeros at integers and exact `+-1` at half-integers.
pub fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    // r in [-1, 1]; fold onto [-1/2, 1/2]
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

/// `cos(pi x)` with exact zeros at half-integers and exact `+-1` at integers.
pub fn cos_pi(x: f64) -> f64 {
    let mut r = x.abs() % 2.0;
    if r > 1.0 {
        r = 2.0 - r;
    }
    // r in [0, 1]
    if r == 0.5 {
        0.0
    } else if r < 0.5 {
        (PI * r).cos()
    } else {
        -(PI * (1.0 - r)).cos()
    }
}

/// `exp(i pi x)` built from [`sin_pi`] and [`cos_pi`].
pub fn cis_pi(x: f64) -> Complex64 {
    Complex64::new(cos_pi(x), sin_pi(x))
}

/// Barycentric-free Neville evaluation of the interpolating polynomial
/// through `(xs[i], ys[i])` at `x`.
pub fn neville(xs: &[f64], ys: &[Complex64], x: f64) -> Complex64 {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let mut p = ys.to_vec();
    let m = xs.len();
    for level in 1..m {
        for i in 0..m - level {
            let j = i + level;
            p[i] = ((x - xs[j]) * p[i] + (xs[i] - x) * p[i + 1]) / (xs[i] - xs[j]);
        }
    }
    p[0]
}
