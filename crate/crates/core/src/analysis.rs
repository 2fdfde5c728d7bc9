//! Derivatives, spacing scans, doublet detection and resonance locators.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{inside_amplitude, phase_shift};
use crate::error::{Error, Result};
use crate::model::{label_from_s, LevelKind, LevelLabel, ModelConfig};
use crate::spectrum::{
    interleave, solve_level_with, spectral_dk_offset, MomentumLevel, SolverOptions,
};
use crate::trig::cos_pi;

/// `k'(g) = -(∂F/∂g)/(∂F/∂k)` at the solved root; strictly negative.
pub fn level_derivative(cfg: &ModelConfig, s: u32) -> Result<f64> {
    level_derivative_with(cfg, s, &SolverOptions::default())
}

pub fn level_derivative_with(cfg: &ModelConfig, s: u32, opts: &SolverOptions) -> Result<f64> {
    let level = solve_level_with(cfg, s, opts)?;
    Ok(derivative_at(&level, cfg))
}

fn derivative_at(level: &MomentumLevel, cfg: &ModelConfig) -> f64 {
    let g = cfg.coupling();
    let df_dg = -1.0 / (PI * g * g * level.k);
    let df_dk = spectral_dk_offset(level.offset, level.s(), cfg);
    -df_dg / df_dk
}

/// Step used for the second derivative: `max(10⁻⁶, 10⁻⁴ g)`.
pub fn second_derivative_step(g: f64) -> f64 {
    (1e-4 * g).max(1e-6)
}

/// `k''(g)` by a central difference of the analytic first derivative.
pub fn level_second_derivative(cfg: &ModelConfig, s: u32) -> Result<f64> {
    level_second_derivative_with(cfg, s, &SolverOptions::default())
}

pub fn level_second_derivative_with(
    cfg: &ModelConfig,
    s: u32,
    opts: &SolverOptions,
) -> Result<f64> {
    let g = cfg.coupling();
    let h = second_derivative_step(g);
    if g - h <= 0.0 {
        return Err(Error::StepUnderflow { g, step: h });
    }
    let up = level_derivative_with(&cfg.with_coupling(g + h)?, s, opts)?;
    let down = level_derivative_with(&cfg.with_coupling(g - h)?, s, opts)?;
    Ok((up - down) / (2.0 * h))
}

/// `count` couplings from `lo` to `hi`, evenly spaced in `log g`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    check_range(lo, hi)?;
    if count < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 points".into(),
        ));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect())
}

/// `count` couplings from `lo` to `hi`, evenly spaced.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    check_range(lo, hi)?;
    if count < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 points".into(),
        ));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / last
            }
        })
        .collect())
}

fn check_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "coupling range must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty coupling grid".into()));
    }
    if !grid.iter().all(|g| *g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidArgument(
            "couplings must be finite and > 0".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "coupling grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    K,
    DkDg,
    D2kDg2,
}

/// A grid point where one quantity could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanFailure {
    pub level: usize,
    pub point: usize,
    pub quantity: Quantity,
    pub error: Error,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub solver: SolverOptions,
    pub second_derivative: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            second_derivative: true,
        }
    }
}

/// Levels × couplings table. Failed cells hold NaN and are listed in
/// `failures`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub cavity: u32,
    pub g_grid: Vec<f64>,
    pub levels: Vec<LevelLabel>,
    pub k: Vec<Vec<f64>>,
    pub dk_dg: Vec<Vec<f64>>,
    pub d2k_dg2: Vec<Vec<f64>>,
    /// `spacing[i][j] = k[i+1][j] - k[i][j]`.
    pub spacing: Vec<Vec<f64>>,
    pub failures: Vec<ScanFailure>,
}

struct Cell {
    // k = numerator/N - offset, kept apart so spacings stay precise
    numerator: i64,
    offset: f64,
    k: f64,
    dk: f64,
    d2k: f64,
    failures: Vec<(Quantity, Error)>,
}

fn nan_cell(numerator: i64) -> Cell {
    Cell {
        numerator,
        offset: f64::NAN,
        k: f64::NAN,
        dk: f64::NAN,
        d2k: f64::NAN,
        failures: Vec::new(),
    }
}

fn scan_cell(label: &LevelLabel, g: f64, cavity: u32, opts: &ScanOptions) -> Cell {
    let big_n = i64::from(cavity);
    let s = match label.s {
        None => {
            return Cell {
                numerator: label.n * big_n,
                offset: 0.0,
                k: label.n as f64,
                dk: 0.0,
                d2k: 0.0,
                failures: Vec::new(),
            }
        }
        Some(s) => s,
    };
    let mut cell = nan_cell(i64::from(s));
    let cfg = match ModelConfig::new(g, cavity) {
        Ok(c) => c,
        Err(e) => {
            cell.failures.push((Quantity::K, e));
            return cell;
        }
    };
    match solve_level_with(&cfg, s, &opts.solver) {
        Ok(level) => {
            cell.offset = level.offset;
            cell.k = level.k;
            cell.dk = derivative_at(&level, &cfg);
        }
        Err(e) => {
            cell.failures.push((Quantity::K, e));
            return cell;
        }
    }
    if opts.second_derivative {
        match level_second_derivative_with(&cfg, s, &opts.solver) {
            Ok(v) => cell.d2k = v,
            Err(e) => cell.failures.push((Quantity::D2kDg2, e)),
        }
    }
    cell
}

/// Solves every level of `s_range` (with the exceptional levels `p_n`
/// inserted after `s = nN`) on every coupling of `g_grid`.
pub fn spacing_scan(
    g_grid: &[f64],
    cavity: u32,
    s_range: std::ops::RangeInclusive<u32>,
    opts: &ScanOptions,
) -> Result<ScanTable> {
    let exceptional: Vec<u32> = s_range
        .clone()
        .filter(|s| s % cavity == 0)
        .map(|s| s / cavity)
        .collect();
    let levels = interleave(s_range, cavity, &exceptional);
    scan_levels(g_grid, cavity, &levels, opts)
}

/// Like [`spacing_scan`] for an explicit, momentum-ordered level list.
pub fn scan_levels(
    g_grid: &[f64],
    cavity: u32,
    levels: &[LevelLabel],
    opts: &ScanOptions,
) -> Result<ScanTable> {
    check_grid(g_grid)?;
    if cavity == 0 {
        return Err(Error::InvalidModel("cavity length N must be >= 1".into()));
    }
    if levels.iter().any(|l| l.s == Some(0)) {
        return Err(Error::InvalidArgument("level index s must be >= 1".into()));
    }
    let width = g_grid.len();
    let cells: Vec<Cell> = (0..levels.len() * width)
        .into_par_iter()
        .map(|idx| scan_cell(&levels[idx / width], g_grid[idx % width], cavity, opts))
        .collect();

    let big_n = f64::from(cavity);
    let mut table = ScanTable {
        cavity,
        g_grid: g_grid.to_vec(),
        levels: levels.to_vec(),
        k: Vec::with_capacity(levels.len()),
        dk_dg: Vec::with_capacity(levels.len()),
        d2k_dg2: Vec::with_capacity(levels.len()),
        spacing: Vec::with_capacity(levels.len().saturating_sub(1)),
        failures: Vec::new(),
    };
    for (i, row) in cells.chunks(width).enumerate() {
        table.k.push(row.iter().map(|c| c.k).collect());
        table.dk_dg.push(row.iter().map(|c| c.dk).collect());
        table.d2k_dg2.push(row.iter().map(|c| c.d2k).collect());
        for (j, c) in row.iter().enumerate() {
            for (quantity, error) in &c.failures {
                table.failures.push(ScanFailure {
                    level: i,
                    point: j,
                    quantity: *quantity,
                    error: error.clone(),
                });
            }
        }
    }
    for pair in cells.chunks(width).collect::<Vec<_>>().windows(2) {
        table.spacing.push(
            pair[0]
                .iter()
                .zip(pair[1])
                .map(|(lo, hi)| {
                    (hi.numerator - lo.numerator) as f64 / big_n + (lo.offset - hi.offset)
                })
                .collect(),
        );
    }
    Ok(table)
}

/// Spacing `k_{s+1}(g) - k_s(g)` computed from the offsets.
pub fn level_spacing(cfg: &ModelConfig, s: u32, opts: &SolverOptions) -> Result<f64> {
    let lo = solve_level_with(cfg, s, opts)?;
    let hi = solve_level_with(cfg, s + 1, opts)?;
    Ok(1.0 / f64::from(cfg.cavity()) + (lo.offset - hi.offset))
}

/// Gap `p_n - k_{nN}(g)` of the `g → 0` doublet.
pub fn exceptional_gap(cfg: &ModelConfig, n: u32, opts: &SolverOptions) -> Result<f64> {
    let level = solve_level_with(cfg, n * cfg.cavity(), opts)?;
    Ok(level.offset)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubletReport {
    pub j: u32,
    /// Lower and upper level of the pair (`s = nN - j` and `nN - j + 1`;
    /// for `j = 0` the resonant level and `p_n`).
    pub lower: LevelLabel,
    pub upper: LevelLabel,
    pub g_min: f64,
    pub spacing_min: f64,
    pub predicted_g: f64,
    pub relative_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DoubletScan {
    pub reports: Vec<DoubletReport>,
    pub warnings: Vec<String>,
}

/// Minimum grid points required inside each `(g_j, g_{j+1})`.
pub const MIN_POINTS_PER_INTERVAL: usize = 20;

/// Locates the spacing minima of the pairs `(nN - j, nN - j + 1)` for
/// `j = 1..=j_max` and compares them with `g_j = j/(nN)`. The `j = 0`
/// doublet (resonant level and `p_n`) closes as `g → 0` and is reported
/// analytically.
pub fn find_quasi_degenerate(
    g_grid: &[f64],
    cavity: u32,
    n: u32,
    j_max: u32,
    opts: &SolverOptions,
) -> Result<DoubletScan> {
    check_grid(g_grid)?;
    if n == 0 || cavity == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and N >= 1".into()));
    }
    let resonant = n * cavity;
    if j_max >= resonant {
        return Err(Error::InvalidArgument(format!(
            "j_max = {j_max} must be below nN = {resonant}"
        )));
    }
    let unit = f64::from(n) * f64::from(cavity);
    let mut out = DoubletScan::default();
    out.reports.push(DoubletReport {
        j: 0,
        lower: label_from_s(resonant, cavity),
        upper: LevelLabel::exceptional(n),
        g_min: 0.0,
        spacing_min: 0.0,
        predicted_g: 0.0,
        relative_offset: 0.0,
    });

    for j in 1..=j_max {
        let (g_lo, g_hi) = (f64::from(j) / unit, f64::from(j + 1) / unit);
        let inside = g_grid.iter().filter(|g| **g > g_lo && **g < g_hi).count();
        if inside < MIN_POINTS_PER_INTERVAL {
            out.warnings.push(format!(
                "j={j}: only {inside} grid points in ({g_lo:.6}, {g_hi:.6}); need {MIN_POINTS_PER_INTERVAL}"
            ));
        }
        let s = resonant - j;
        let spacing =
            |g: f64| -> Result<f64> { level_spacing(&ModelConfig::new(g, cavity)?, s, opts) };
        let values: Vec<Result<f64>> = g_grid.par_iter().map(|&g| spacing(g)).collect();
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in values.iter().enumerate() {
            match v {
                Ok(v) if best.is_none_or(|(_, b)| *v < b) => best = Some((i, *v)),
                Ok(_) => {}
                Err(e) => out.warnings.push(format!("j={j}: g={}: {e}", g_grid[i])),
            }
        }
        let Some((i, _)) = best else {
            out.warnings
                .push(format!("j={j}: no spacing could be computed"));
            continue;
        };
        if i == 0 || i == g_grid.len() - 1 {
            out.warnings.push(format!(
                "j={j}: spacing minimum at grid endpoint g={}; widen the grid",
                g_grid[i]
            ));
            continue;
        }
        let (a, b) = (g_grid[i - 1].ln(), g_grid[i + 1].ln());
        let u = golden_min(|u| spacing(u.exp()).unwrap_or(f64::INFINITY), a, b, 1e-12);
        let g_min = u.exp();
        let spacing_min = spacing(g_min)?;
        out.reports.push(DoubletReport {
            j,
            lower: label_from_s(s, cavity),
            upper: label_from_s(s + 1, cavity),
            g_min,
            spacing_min,
            predicted_g: g_lo,
            relative_offset: (g_min - g_lo).abs() / g_lo,
        });
    }
    Ok(out)
}

fn golden_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    crate::eigen::golden_max(|x| -f(x), a, b, tol)
}

/// Default number of log-spaced probes used to bracket locator features.
pub const LOCATOR_PROBES: usize = 400;

fn level_k(g: f64, cavity: u32, s: u32, opts: &SolverOptions) -> Result<f64> {
    Ok(solve_level_with(&ModelConfig::new(g, cavity)?, s, opts)?.k)
}

/// Bisection in `log g` on a sign change of `f` between `lo` and `hi`.
fn bisect_log<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let lo_sign = f_lo.signum();
    for _ in 0..200 {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-14 * hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First coupling in `g_range` where `f` changes sign, located by a
/// log-spaced probe followed by bisection.
fn first_sign_change<F: Fn(f64) -> Result<f64> + Sync>(f: F, lo: f64, hi: f64) -> Result<f64> {
    let grid = log_grid(lo, hi, LOCATOR_PROBES)?;
    let values = grid
        .par_iter()
        .map(|&g| f(g))
        .collect::<Result<Vec<f64>>>()?;
    for i in 0..grid.len() - 1 {
        if values[i] == 0.0 {
            return Ok(grid[i]);
        }
        if values[i].signum() != values[i + 1].signum() {
            return bisect_log(&f, grid[i], grid[i + 1], values[i]);
        }
    }
    Err(Error::NoCrossing { lo, hi })
}

/// First coupling where the phase shift of level `s` reaches `-π/2 (mod π)`,
/// i.e. where `cos δ` changes sign.
pub fn resonance_locator_phase(cavity: u32, s: u32, g_range: (f64, f64)) -> Result<f64> {
    let opts = SolverOptions::default();
    let m = f64::from(cavity + 1);
    // cos δ has the sign of -sgn(D) cos(πMk); D keeps its sign inside a bracket
    let f = |g: f64| -> Result<f64> { Ok(cos_pi(m * level_k(g, cavity, s, &opts)?)) };
    first_sign_change(f, g_range.0, g_range.1)
}

/// Interior maximum `(g, A)` of the inside amplitude of level `s`.
pub fn amplitude_peak_locator(cavity: u32, s: u32, g_range: (f64, f64)) -> Result<(f64, f64)> {
    let opts = SolverOptions::default();
    let amp =
        |g: f64| -> Result<f64> { Ok(inside_amplitude(level_k(g, cavity, s, &opts)?, cavity)) };
    let grid = log_grid(g_range.0, g_range.1, LOCATOR_PROBES)?;
    let values = grid
        .par_iter()
        .map(|&g| amp(g))
        .collect::<Result<Vec<f64>>>()?;
    let (i, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
            if v > best.1 {
                (i, v)
            } else {
                best
            }
        });
    if i == 0 || i == grid.len() - 1 {
        return Err(Error::BoundaryMaximum { g: grid[i] });
    }
    let u = crate::eigen::golden_max(
        |u| amp(u.exp()).unwrap_or(f64::NEG_INFINITY),
        grid[i - 1].ln(),
        grid[i + 1].ln(),
        1e-12,
    );
    let g = u.exp();
    Ok((g, amp(g)?))
}

/// First coupling where the inside amplitudes of levels `s_a` and `s_b`
/// cross, with the common amplitude.
pub fn amplitude_crossing_locator(
    cavity: u32,
    s_a: u32,
    s_b: u32,
    g_range: (f64, f64),
) -> Result<(f64, f64)> {
    let opts = SolverOptions::default();
    let amp = |g: f64, s: u32| -> Result<f64> {
        Ok(inside_amplitude(level_k(g, cavity, s, &opts)?, cavity))
    };
    let diff = |g: f64| -> Result<f64> { Ok(amp(g, s_a)? - amp(g, s_b)?) };
    let g = first_sign_change(diff, g_range.0, g_range.1)?;
    Ok((g, amp(g, s_a)?))
}

/// Phase shift `δ_{s/N}(g)` of level `s`.
pub fn level_phase(cfg: &ModelConfig, s: u32) -> Result<f64> {
    Ok(phase_shift(
        solve_level_with(cfg, s, &SolverOptions::default())?.k,
        cfg.cavity(),
    ))
}

/// `true` for levels whose momentum depends on `g`.
pub fn is_normal(label: &LevelLabel) -> bool {
    label.kind != LevelKind::Exceptional
}
