//! Normal-level quantization condition and its bracketed solver.
//!
//! Normal momenta solve
//!
//! ```text
//! F(k) = cot(π k) + cot(π N k) + 1/(π g k) = 0,
//! ```
//!
//! whose poles sit at the multiples of `1/N`. Between consecutive poles `F`
//! falls strictly from `+∞` to `-∞`, so level `s` is the single root in
//! `((s-1)/N, s/N)`.
//!
//! The solver works in the offset `t = s/N - k`. Both cotangents reduce
//! exactly in that coordinate (`cot(π N k) = -cot(π N t)`), so a root lying
//! `1e-10` below its free-limit value still comes out with full relative
//! precision in `t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{label_from_s, LevelLabel, ModelConfig};
use crate::trig::{cot_pi, csc2_pi, nearest_integer};

/// Default guard: no evaluation closer than `1e-12 / N` to a pole.
pub const DEFAULT_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Bisection stops once the bracket width drops below `tol` times the
    /// current offset from the free-limit momentum.
    pub tol: f64,
    /// Pole guard in units of `1/N`.
    pub guard: f64,
    pub max_iter: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            guard: DEFAULT_GUARD,
            max_iter: 200,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// A solved normal level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumLevel {
    pub label: LevelLabel,
    pub k: f64,
    /// `s/N - k`, carried separately with full relative precision.
    pub offset: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    /// `|F|` at the returned root.
    pub residual: f64,
    pub iterations: u32,
}

impl MomentumLevel {
    pub fn s(&self) -> u32 {
        self.label.s.expect("normal level carries s")
    }
}

/// `F(k) = cot(πk) + cot(πNk) + 1/(πgk)` with the default pole guard.
pub fn spectral_fn(k: f64, cfg: &ModelConfig) -> Result<f64> {
    spectral_fn_guarded(k, cfg, DEFAULT_GUARD)
}

/// As [`spectral_fn`], refusing any `k` within `guard / N` of a pole.
pub fn spectral_fn_guarded(k: f64, cfg: &ModelConfig, guard: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("k must be > 0, got {k}")));
    }
    let big_n = f64::from(cfg.cavity());
    let (dist, pole) = nearest_integer(big_n * k);
    if dist < guard {
        return Err(Error::PoleProximity {
            k,
            pole: pole / big_n,
            guard: guard / big_n,
        });
    }
    Ok(cot_pi(k) + cot_pi(big_n * k) + 1.0 / (std::f64::consts::PI * cfg.coupling() * k))
}

/// `F` written in the offset `t = s/N - k`, `0 < t < 1/N`.
pub(crate) fn spectral_fn_offset(t: f64, s: u32, cfg: &ModelConfig) -> f64 {
    let cavity = cfg.cavity();
    let big_n = f64::from(cavity);
    let r = s % cavity;
    // cot(πk) with πk = π q + π(r/N - t)
    let first = if r == 0 {
        -cot_pi(t)
    } else {
        cot_pi(f64::from(r) / big_n - t)
    };
    let second = -cot_pi(big_n * t);
    let k = f64::from(s) / big_n - t;
    first + second + 1.0 / (std::f64::consts::PI * cfg.coupling() * k)
}

/// `∂F/∂k` in the offset coordinate; strictly negative.
pub(crate) fn spectral_dk_offset(t: f64, s: u32, cfg: &ModelConfig) -> f64 {
    let cavity = cfg.cavity();
    let big_n = f64::from(cavity);
    let r = s % cavity;
    let first = if r == 0 {
        csc2_pi(t)
    } else {
        csc2_pi(f64::from(r) / big_n - t)
    };
    let second = csc2_pi(big_n * t);
    let k = f64::from(s) / big_n - t;
    let pi = std::f64::consts::PI;
    -pi * first - pi * big_n * second - 1.0 / (pi * cfg.coupling() * k * k)
}

/// Open interval `((s-1)/N, s/N)` holding exactly one root of `F` for every
/// `g > 0`.
pub fn bracket_for(s: u32, cavity: u32) -> (f64, f64) {
    let big_n = f64::from(cavity);
    (f64::from(s - 1) / big_n, f64::from(s) / big_n)
}

/// Solves level `s` with default options except for `tol`.
pub fn solve_level(cfg: &ModelConfig, s: u32, tol: f64) -> Result<MomentumLevel> {
    solve_level_with(cfg, s, &SolverOptions::with_tol(tol))
}

/// Bisection for the unique root of `F` in `bracket_for(s, N)`.
pub fn solve_level_with(cfg: &ModelConfig, s: u32, opts: &SolverOptions) -> Result<MomentumLevel> {
    if s == 0 {
        return Err(Error::InvalidArgument("level index s must be >= 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be > 0, got {}",
            opts.tol
        )));
    }
    let big_n = f64::from(cfg.cavity());
    let (bracket_lo, bracket_hi) = bracket_for(s, cfg.cavity());
    let width = 1.0 / big_n;
    let guard = opts.guard * width;

    // F → -∞ as t → 0⁺ (k → s/N⁻) and F → +∞ as t → 1/N⁻.
    let mut lo = guard;
    let mut hi = width - guard;
    if !(lo < hi) || spectral_fn_offset(lo, s, cfg) >= 0.0 || spectral_fn_offset(hi, s, cfg) <= 0.0
    {
        return Err(Error::NoSignChange {
            s,
            lo: bracket_lo,
            hi: bracket_hi,
        });
    }

    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= opts.tol * mid {
            break;
        }
        if iterations >= opts.max_iter {
            return Err(Error::NonConvergence { s, iterations });
        }
        iterations += 1;
        let f = spectral_fn_offset(mid, s, cfg);
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let offset = 0.5 * (lo + hi);
    Ok(MomentumLevel {
        label: label_from_s(s, cfg.cavity()),
        k: f64::from(s) / big_n - offset,
        offset,
        bracket_lo,
        bracket_hi,
        residual: spectral_fn_offset(offset, s, cfg).abs(),
        iterations,
    })
}

/// Limit of level `s` as `g → ∞`: the zero `u/(N+1)` of `sin(π(N+1)k)` inside
/// the bracket, with `u = s + n` for `l > 0` and `u = s + n - 1` for `l ≤ 0`.
pub fn strong_coupling_limit(s: u32, cavity: u32) -> f64 {
    let lab = label_from_s(s, cavity);
    let u = if lab.l > 0 {
        i64::from(s) + lab.n
    } else {
        i64::from(s) + lab.n - 1
    };
    u as f64 / f64::from(cavity + 1)
}

/// Integer momenta `1..=⌊k_max⌋`; these are eigenvalues at every coupling.
pub fn exceptional_levels(k_max: f64) -> Vec<u32> {
    if !(k_max >= 1.0) {
        return Vec::new();
    }
    (1..=k_max.floor() as u32).collect()
}

/// Exceptional and normal labels with free-limit momentum up to `k_max`,
/// ordered by momentum (each `p_n` sits right above the resonant level
/// `s = nN`).
pub fn levels_up_to(cavity: u32, k_max: f64) -> Vec<LevelLabel> {
    let s_max = (k_max * f64::from(cavity) + 1e-9).floor() as u32;
    let exc = exceptional_levels(k_max);
    interleave(1..=s_max, cavity, &exc)
}

/// The `count` lowest levels of the spectrum, exceptional ones included.
pub fn lowest_levels(cavity: u32, count: usize) -> Vec<LevelLabel> {
    let mut out = Vec::with_capacity(count);
    let mut s = 1;
    while out.len() < count {
        out.push(label_from_s(s, cavity));
        if s % cavity == 0 && out.len() < count {
            out.push(LevelLabel::exceptional(s / cavity));
        }
        s += 1;
    }
    out
}

/// Normal levels of `s_range` in order, with `p_n` inserted after `s = nN`
/// whenever that resonant partner is part of the range.
pub fn interleave(
    s_range: impl IntoIterator<Item = u32>,
    cavity: u32,
    exceptional: &[u32],
) -> Vec<LevelLabel> {
    let mut out = Vec::new();
    for s in s_range {
        out.push(label_from_s(s, cavity));
        if s % cavity == 0 && exceptional.contains(&(s / cavity)) {
            out.push(LevelLabel::exceptional(s / cavity));
        }
    }
    out
}
