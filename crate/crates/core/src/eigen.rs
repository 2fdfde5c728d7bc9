//! Eigenfunctions, inside amplitude and phase shift.
//!
//! A normal eigenfunction with momentum `k` has two equivalent forms:
//!
//! * product form: `𝒩 sin(πNk) sin(kx)` inside the small cavity and
//!   `𝒩 sin(πk) sin(k(L - x))` outside;
//! * amplitude/phase form: `𝒞 A_N(k) sin(kx)` inside and
//!   `𝒞 sin(kx + δ_N(k))` outside,
//!
//! where `A_N = |D_N|` with `D_N(k) = sin(πNk)/sin(πk)`. The two forms differ
//! by the overall sign `sign(sin(πNk))`, which reduces to `sign(D_N(k))` when
//! `sin(πk) > 0`.
//!
//! Both normalization constants come from closed-form integrals of `sin²`
//! over each cavity, so they are valid for any `k`, root or not.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::spectrum::{solve_level_with, SolverOptions};
use crate::trig::{cos_pi, nearest_integer, sin_pi};

/// Width of the window around integer `k` where analytic limits replace
/// `0/0` evaluations.
pub const INTEGER_WINDOW: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// `𝒩 {θ(π-x) sin(πNk) sin(kx) + θ(x-π) sin(πk) sin(k(L-x))}`
    Product,
    /// `𝒞 {A θ(π-x) sin(kx) + θ(x-π) sin(kx + δ)}`
    AmplitudePhase,
}

/// `D_N(k) = sin(πNk)/sin(πk)`, with the limit `N (-1)^{n(N+1)}` at integer `k = n`.
pub fn dirichlet_kernel(k: f64, cavity: u32) -> f64 {
    let (dist, n) = nearest_integer(k);
    if dist < INTEGER_WINDOW {
        let parity = (n as i64).rem_euclid(2) * i64::from((cavity + 1) % 2);
        let sign = if parity == 0 { 1.0 } else { -1.0 };
        return sign * f64::from(cavity);
    }
    sin_pi(f64::from(cavity) * k) / sin_pi(k)
}

/// `A_N(k) = |D_N(k)|`, equal to `N` at integers.
pub fn inside_amplitude(k: f64, cavity: u32) -> f64 {
    dirichlet_kernel(k, cavity).abs()
}

/// Relative phase `δ_N(k) ∈ (-π, π]` of the outside wave, the two-argument
/// arctangent of
///
/// ```text
/// ( -sin(πk) cos(π(N+1)k) / sin(πNk),  sin(πk) sin(π(N+1)k) / sin(πNk) ).
/// ```
///
/// Both components are rescaled by the positive factor `|sin(πNk)/sin(πk)|`,
/// which leaves the angle unchanged and removes the poles at `k = s/N`.
/// At integer `k` the value is `π` (the left/right limits are `π` and `-π`);
/// at `k = s/N` it takes the one-sided limit from the side where `D_N ≥ 0`.
pub fn phase_shift(k: f64, cavity: u32) -> f64 {
    let (dist, _) = nearest_integer(k);
    if dist < INTEGER_WINDOW {
        return PI;
    }
    let d = dirichlet_kernel(k, cavity);
    let sign = if d >= 0.0 { 1.0 } else { -1.0 };
    let mk = f64::from(cavity + 1) * k;
    let x = -sign * cos_pi(mk);
    let y = sign * sin_pi(mk);
    y.atan2(x)
}

/// `-π(N+1)k` reduced modulo π into `[0, π)`; congruent to [`phase_shift`]
/// modulo π.
pub fn reduced_phase(k: f64, cavity: u32) -> f64 {
    let mk = f64::from(cavity + 1) * k;
    // -π·mk mod π = π·(1 - frac(mk)) mod π
    let frac = mk - mk.floor();
    if frac == 0.0 {
        0.0
    } else {
        PI * (1.0 - frac)
    }
}

/// Product-form normalization `𝒩_N(k)`.
pub fn norm_product(k: f64, cavity: u32) -> f64 {
    let big_n = f64::from(cavity);
    let sn = sin_pi(big_n * k);
    let s1 = sin_pi(k);
    let inner = PI / 2.0 - sin_pi(2.0 * k) / (4.0 * k);
    let outer = PI * big_n / 2.0 - sin_pi(2.0 * big_n * k) / (4.0 * k);
    (sn * sn * inner + s1 * s1 * outer).powf(-0.5)
}

/// Amplitude/phase-form normalization `𝒞_N(k)`.
pub fn norm_amplitude_phase(k: f64, cavity: u32) -> f64 {
    let big_n = f64::from(cavity);
    let d = dirichlet_kernel(k, cavity);
    let inner = PI / 2.0 - sin_pi(2.0 * k) / (4.0 * k);
    let outer = PI * big_n / 2.0 - sin_pi(2.0 * big_n * k) / (4.0 * k);
    (d * d * inner + outer).powf(-0.5)
}

fn check_domain(x: f64, cfg: &ModelConfig) -> Result<()> {
    let length = cfg.length();
    if !(0.0..=length).contains(&x) {
        return Err(Error::OutOfDomain { x, length });
    }
    Ok(())
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("k must be > 0, got {k}")));
    }
    Ok(())
}

/// `ψ(k; x)` for any `k > 0` (roots of the quantization condition or not).
/// The barrier point `x = π` takes the inside branch; both branches agree there.
pub fn eval_normal_eigenfunction(k: f64, x: f64, cfg: &ModelConfig, form: Form) -> Result<f64> {
    check_k(k)?;
    check_domain(x, cfg)?;
    let cavity = cfg.cavity();
    let inside = x <= PI;
    Ok(match form {
        Form::Product => {
            let norm = norm_product(k, cavity);
            if inside {
                norm * sin_pi(f64::from(cavity) * k) * (k * x).sin()
            } else {
                norm * sin_pi(k) * (k * (cfg.length() - x)).sin()
            }
        }
        Form::AmplitudePhase => {
            let norm = norm_amplitude_phase(k, cavity);
            if inside {
                norm * inside_amplitude(k, cavity) * (k * x).sin()
            } else {
                norm * (k * x + phase_shift(k, cavity)).sin()
            }
        }
    })
}

/// One-sided slopes `(ψ'(π⁻), ψ'(π⁺))` at the barrier.
pub fn barrier_slopes(k: f64, cfg: &ModelConfig, form: Form) -> Result<(f64, f64)> {
    check_k(k)?;
    let cavity = cfg.cavity();
    let big_n = f64::from(cavity);
    Ok(match form {
        Form::Product => {
            let norm = norm_product(k, cavity);
            // d/dx sin(k(L-x)) = -k cos(k(L-x)), and k(L-π) = πNk
            let left = norm * sin_pi(big_n * k) * k * cos_pi(k);
            let right = -norm * sin_pi(k) * k * cos_pi(big_n * k);
            (left, right)
        }
        Form::AmplitudePhase => {
            let norm = norm_amplitude_phase(k, cavity);
            let left = norm * inside_amplitude(k, cavity) * k * cos_pi(k);
            let right = norm * k * (PI * k + phase_shift(k, cavity)).cos();
            (left, right)
        }
    })
}

/// Residual of the barrier jump condition
/// `ψ'(π⁺) - ψ'(π⁻) - ψ(π)/(πg)`; vanishes exactly when `k` solves the
/// quantization condition.
pub fn jump_condition_residual(k: f64, cfg: &ModelConfig, form: Form) -> Result<f64> {
    let (left, right) = barrier_slopes(k, cfg, form)?;
    let at_barrier = eval_normal_eigenfunction(k, PI, cfg, form)?;
    Ok(right - left - at_barrier / (PI * cfg.coupling()))
}

/// `φ_n(x) = √(2/L) sin(n x)`, the coupling-independent exceptional eigenfunction.
pub fn eval_exceptional_eigenfunction(n: u32, x: f64, cfg: &ModelConfig) -> Result<f64> {
    check_domain(x, cfg)?;
    Ok((2.0 / cfg.length()).sqrt() * (f64::from(n) * x).sin())
}

/// Observables attached to one momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionRecord {
    pub k: f64,
    pub norm_old: f64,
    pub norm_new: f64,
    pub inside_amplitude: f64,
    pub phase_shift: f64,
    pub dirichlet: f64,
}

pub fn eigenfunction_record(k: f64, cavity: u32) -> EigenfunctionRecord {
    let dirichlet = dirichlet_kernel(k, cavity);
    EigenfunctionRecord {
        k,
        norm_old: norm_product(k, cavity),
        norm_new: norm_amplitude_phase(k, cavity),
        inside_amplitude: dirichlet.abs(),
        phase_shift: phase_shift(k, cavity),
        dirichlet,
    }
}

/// Inside amplitude and phase of level `s` at one coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservablePoint {
    pub g: f64,
    pub result: Result<Observables>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub k: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// `A_{s/N}(g)` and `δ_{s/N}(g)` at one coupling.
pub fn observables_at(g: f64, cavity: u32, s: u32, opts: &SolverOptions) -> Result<Observables> {
    let cfg = ModelConfig::new(g, cavity)?;
    let lev = solve_level_with(&cfg, s, opts)?;
    Ok(Observables {
        k: lev.k,
        amplitude: inside_amplitude(lev.k, cavity),
        phase: phase_shift(lev.k, cavity),
    })
}

/// Solves level `s` at every coupling and evaluates `A` and `δ` there.
/// Failures stay attached to their grid point.
pub fn observables_vs_coupling(
    couplings: &[f64],
    cavity: u32,
    s: u32,
    opts: &SolverOptions,
) -> Vec<ObservablePoint> {
    couplings
        .iter()
        .map(|&g| ObservablePoint {
            g,
            result: observables_at(g, cavity, s, opts),
        })
        .collect()
}

/// Local maximum of `A_N(k)` inside `(lo, hi)` by golden-section search.
/// The interval must enclose a single lobe of `|sin(πNk)|`.
pub fn amplitude_local_max(cavity: u32, lo: f64, hi: f64) -> (f64, f64) {
    let f = |k: f64| inside_amplitude(k, cavity);
    let k = golden_max(f, lo, hi, 1e-13);
    (k, f(k))
}

pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (1.0 + a.abs().max(b.abs())) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
