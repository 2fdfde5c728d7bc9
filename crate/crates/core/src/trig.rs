//! Trigonometric functions of `π·x` with exact argument reduction.
//!
//! Reducing `x` modulo 2 before multiplying by π keeps zeros at integer
//! arguments exact and avoids the phase error of `sin(π * x)` for large `x`.

use std::f64::consts::PI;

#[inline]
fn reduce(x: f64) -> f64 {
    // r in [-1, 1]
    x - 2.0 * (0.5 * x).round()
}

/// `sin(π x)`.
pub fn sin_pi(x: f64) -> f64 {
    let r = reduce(x);
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    // fold into [-1/2, 1/2] where sin is evaluated most accurately
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(π x)`.
pub fn cos_pi(x: f64) -> f64 {
    let r = reduce(x).abs();
    if r == 0.5 {
        return 0.0;
    }
    if r > 0.5 {
        -(PI * (1.0 - r)).cos()
    } else {
        (PI * r).cos()
    }
}

/// `cot(π x)`; infinite at integers.
pub fn cot_pi(x: f64) -> f64 {
    cos_pi(x) / sin_pi(x)
}

/// `csc²(π x)`.
pub fn csc2_pi(x: f64) -> f64 {
    let s = sin_pi(x);
    1.0 / (s * s)
}

/// Distance from `x` to the nearest integer, and that integer.
pub fn nearest_integer(x: f64) -> (f64, f64) {
    let n = x.round();
    ((x - n).abs(), n)
}
