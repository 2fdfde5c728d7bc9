//! Weak-coupling expansions of the normal levels.
//!
//! * Ordinary (fixed-order) theory expands `k` in powers of `g` at fixed `N`.
//!   The coefficients grow with `N` (secular terms), so the series is only
//!   useful while `g N ≪ 1`.
//! * Resummed theory keeps `ξ = g N` fixed while `g → 0`, collecting the
//!   secular terms into functions `h⁽ⁱ⁾(ξ)`. The resonant series is singular
//!   at `g_j = j/(nN)`; the non-resonant one at `g = -l/(nN)` (only for `l < 0`).
//!
//! Every result carries `shift = k₀ - k`, where `k₀` is the free-limit
//! momentum. The shift is computed without forming `k₀ - (k₀ - shift)`, so
//! it keeps full relative precision and can be compared with
//! [`MomentumLevel::offset`](crate::spectrum::MomentumLevel::offset).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::trig::{cot_pi, csc2_pi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Ordinary,
    OrdinaryLargeN,
    Resummed,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Ordinary => "ordinary",
            Scheme::OrdinaryLargeN => "ordinary_large_n",
            Scheme::Resummed => "resummed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbativeResult {
    pub k_approx: f64,
    /// Free-limit momentum minus `k_approx`.
    pub shift: f64,
    pub order: u32,
    pub scheme: Scheme,
    /// `ξ = g N`.
    pub xi: f64,
    /// Distance in `g` to the nearest singular coupling (resummed only;
    /// `None` when the series has no singularity at positive `g`).
    pub distance_to_singularity: Option<f64>,
}

/// Exclusion radius around singular couplings, in units of `1/(nN)`.
pub const DEFAULT_SINGULARITY_GUARD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResummedOptions {
    /// Radius, as a fraction of `1/(nN)`, inside which a singularity error
    /// is returned instead of a value.
    pub guard: f64,
}

impl Default for ResummedOptions {
    fn default() -> Self {
        Self {
            guard: DEFAULT_SINGULARITY_GUARD,
        }
    }
}

fn check_order(order: u32, lo: u32) -> Result<()> {
    if !(lo..=3).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "order must be in {lo}..=3, got {order}"
        )));
    }
    Ok(())
}

fn check_nonresonant(n: i64, l: i64, cavity: u32) -> Result<f64> {
    let big_n = i64::from(cavity);
    if l == 0 {
        return Err(Error::InvalidArgument(
            "non-resonant level needs l != 0".into(),
        ));
    }
    if 2 * l <= -big_n || 2 * l > big_n {
        return Err(Error::InvalidArgument(format!(
            "remainder l = {l} outside (-N/2, N/2] for N = {cavity}"
        )));
    }
    if n < 0 || n * big_n + l <= 0 {
        return Err(Error::InvalidArgument(format!(
            "(n, l) = ({n}, {l}) does not label a positive momentum"
        )));
    }
    Ok(n as f64 + l as f64 / f64::from(cavity))
}

/// `Σ_{i=lo}^{order} gⁱ cᵢ` with `coeffs[i-1] = cᵢ`.
fn series(g: f64, coeffs: &[f64], lo: usize, order: u32) -> f64 {
    (lo..=order as usize)
        .map(|i| g.powi(i as i32) * coeffs[i - 1])
        .sum()
}

fn result(
    k0: f64,
    correction: f64,
    order: u32,
    scheme: Scheme,
    cfg: &ModelConfig,
    distance: Option<f64>,
) -> PerturbativeResult {
    PerturbativeResult {
        k_approx: k0 * (1.0 + correction),
        shift: -k0 * correction,
        order,
        scheme,
        xi: cfg.xi(),
        distance_to_singularity: distance,
    }
}

/// Ordinary coefficients `c⁽¹⁾, c⁽²⁾, c⁽³⁾` of a resonant level `s = nN`.
pub fn ordinary_resonant_coeffs(n: u32, cavity: u32) -> [f64; 3] {
    let r = 1.0 + 1.0 / f64::from(cavity);
    let nu = PI * f64::from(n);
    [
        -r,
        r * r,
        r * r * r * (nu * nu * f64::from(cavity) / 3.0 - 1.0),
    ]
}

/// `k ≈ n (1 + Σ gⁱ c⁽ⁱ⁾)` for the resonant level `s = nN`.
pub fn ordinary_resonant_k(n: u32, cfg: &ModelConfig, order: u32) -> Result<PerturbativeResult> {
    check_order(order, 1)?;
    if n == 0 {
        return Err(Error::InvalidArgument("resonant level needs n >= 1".into()));
    }
    let c = ordinary_resonant_coeffs(n, cfg.cavity());
    let corr = series(cfg.coupling(), &c, 1, order);
    Ok(result(
        f64::from(n),
        corr,
        order,
        Scheme::Ordinary,
        cfg,
        None,
    ))
}

/// Exact (finite-`N`) ordinary coefficients of a non-resonant level `s = nN + l`.
pub fn ordinary_nonresonant_coeffs(n: i64, l: i64, cavity: u32) -> Result<[f64; 3]> {
    let q = check_nonresonant(n, l, cavity)?;
    let big_n = f64::from(cavity);
    let a = l as f64 / big_n;
    let cot = cot_pi(a);
    let csc2 = csc2_pi(a);
    let c1 = -1.0 / big_n;
    let c2 = PI / big_n * q * cot + 1.0 / (big_n * big_n);
    let c3 = -PI * PI / big_n * (1.0 - 1.0 / big_n) * q * q * csc2
        - 3.0 * PI / (big_n * big_n) * q * cot
        + 4.0 * PI * PI / (3.0 * big_n) * q * q
        - 1.0 / (big_n * big_n * big_n);
    Ok([c1, c2, c3])
}

/// `k ≈ (n + l/N)(1 + Σ gⁱ c⁽ⁱ⁾)` with the exact finite-`N` coefficients.
pub fn ordinary_nonresonant_k(
    n: i64,
    l: i64,
    cfg: &ModelConfig,
    order: u32,
) -> Result<PerturbativeResult> {
    check_order(order, 1)?;
    let q = check_nonresonant(n, l, cfg.cavity())?;
    let c = ordinary_nonresonant_coeffs(n, l, cfg.cavity())?;
    let corr = series(cfg.coupling(), &c, 1, order);
    Ok(result(q, corr, order, Scheme::Ordinary, cfg, None))
}

/// Large-`N` truncation of the non-resonant coefficients:
/// `c⁽¹⁾ = -1/N`, `c⁽²⁾ = n/l + 1/N`,
/// `c⁽³⁾ = -(n/l)² N + n(n-2l)/l² + (π²n² - n/l - 1)/N`.
pub fn ordinary_nonresonant_large_n_coeffs(n: i64, l: i64, cavity: u32, i: u32) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "non-resonant level needs l != 0".into(),
        ));
    }
    let big_n = f64::from(cavity);
    let (nf, lf) = (n as f64, l as f64);
    let ratio = nf / lf;
    match i {
        1 => Ok(-1.0 / big_n),
        2 => Ok(ratio + 1.0 / big_n),
        3 => Ok(-ratio * ratio * big_n
            + nf * (nf - 2.0 * lf) / (lf * lf)
            + (PI * PI * nf * nf - ratio - 1.0) / big_n),
        _ => Err(Error::InvalidArgument(format!(
            "coefficient index must be 1..=3, got {i}"
        ))),
    }
}

/// Same as [`ordinary_nonresonant_k`] but with the large-`N` coefficients.
pub fn ordinary_nonresonant_large_n_k(
    n: i64,
    l: i64,
    cfg: &ModelConfig,
    order: u32,
) -> Result<PerturbativeResult> {
    check_order(order, 1)?;
    let q = check_nonresonant(n, l, cfg.cavity())?;
    let mut c = [0.0; 3];
    for (i, slot) in c.iter_mut().enumerate() {
        *slot = ordinary_nonresonant_large_n_coeffs(n, l, cfg.cavity(), i as u32 + 1)?;
    }
    let corr = series(cfg.coupling(), &c, 1, order);
    Ok(result(q, corr, order, Scheme::OrdinaryLargeN, cfg, None))
}

/// Resummed resonant functions `[h⁽¹⁾, h⁽²⁾(ξ), h⁽³⁾(ξ)]` with `ν = πn`.
pub fn resummed_resonant_h(n: u32, xi: f64) -> [f64; 3] {
    let nu = PI * f64::from(n);
    // cot(νξ) = cot(π·nξ), reduced exactly
    let ct = cot_pi(f64::from(n) * xi);
    let h2 = -nu * ct + 1.0;
    let h3 = nu.powi(3) * xi * ct.powi(3) - nu * nu * (1.0 + xi) * ct * ct
        + nu * (nu * nu * xi + 3.0) * ct
        + nu * nu * (1.0 / 3.0 - xi)
        - 1.0;
    [-1.0, h2, h3]
}

/// Resummed non-resonant functions `[h⁽²⁾(ξ), h⁽³⁾(ξ)]`.
pub fn resummed_nonresonant_h(n: i64, l: i64, xi: f64) -> [f64; 2] {
    let (nf, lf) = (n as f64, l as f64);
    let d = lf + nf * xi;
    let h2 = nf / d - 1.0 / xi;
    let h3 = lf * nf * nf / d.powi(3) - lf * nf / (d * d) - nf / d + 1.0 / xi;
    [h2, h3]
}

/// `g_j = j/(nN)` for `j = 1..=j_max`.
pub fn singular_couplings(n: u32, cavity: u32, j_max: u32) -> Vec<f64> {
    let unit = f64::from(n) * f64::from(cavity);
    (1..=j_max).map(|j| f64::from(j) / unit).collect()
}

/// Nearest singular coupling `g_j` (`j ≥ 1`) of the resonant series.
fn nearest_resonant_pole(n: u32, cfg: &ModelConfig) -> f64 {
    let unit = f64::from(n) * f64::from(cfg.cavity());
    let j = (cfg.coupling() * unit).round().max(1.0);
    j / unit
}

/// `k ≈ n (1 + Σ gⁱ h⁽ⁱ⁾(ξ))` for the resonant level `s = nN`.
pub fn resummed_resonant_k(n: u32, cfg: &ModelConfig, order: u32) -> Result<PerturbativeResult> {
    resummed_resonant_k_with(n, cfg, order, &ResummedOptions::default())
}

pub fn resummed_resonant_k_with(
    n: u32,
    cfg: &ModelConfig,
    order: u32,
    opts: &ResummedOptions,
) -> Result<PerturbativeResult> {
    check_order(order, 1)?;
    if n == 0 {
        return Err(Error::InvalidArgument("resonant level needs n >= 1".into()));
    }
    let g = cfg.coupling();
    let pole = nearest_resonant_pole(n, cfg);
    let distance = (g - pole).abs();
    // h⁽¹⁾ is regular; the poles enter from second order on
    if order >= 2 {
        let radius = opts.guard / (f64::from(n) * f64::from(cfg.cavity()));
        if distance < radius {
            return Err(Error::SingularityProximity { g, pole, distance });
        }
    }
    let h = resummed_resonant_h(n, cfg.xi());
    let corr = series(g, &h, 1, order);
    Ok(result(
        f64::from(n),
        corr,
        order,
        Scheme::Resummed,
        cfg,
        Some(distance),
    ))
}

/// `k ≈ (n + l/N)(1 + g² h⁽²⁾(ξ) + g³ h⁽³⁾(ξ))`; the series starts at
/// second order, so `order ∈ {2, 3}`.
pub fn resummed_nonresonant_k(
    n: i64,
    l: i64,
    cfg: &ModelConfig,
    order: u32,
) -> Result<PerturbativeResult> {
    resummed_nonresonant_k_with(n, l, cfg, order, &ResummedOptions::default())
}

pub fn resummed_nonresonant_k_with(
    n: i64,
    l: i64,
    cfg: &ModelConfig,
    order: u32,
    opts: &ResummedOptions,
) -> Result<PerturbativeResult> {
    check_order(order, 2)?;
    let q = check_nonresonant(n, l, cfg.cavity())?;
    let g = cfg.coupling();
    let distance = if l < 0 && n > 0 {
        let unit = n as f64 * f64::from(cfg.cavity());
        let pole = -(l as f64) / unit;
        let distance = (g - pole).abs();
        if distance < opts.guard / unit {
            return Err(Error::SingularityProximity { g, pole, distance });
        }
        Some(distance)
    } else {
        None
    };
    let [h2, h3] = resummed_nonresonant_h(n, l, cfg.xi());
    let corr = series(g, &[0.0, h2, h3], 2, order);
    Ok(result(q, corr, order, Scheme::Resummed, cfg, distance))
}

/// Pole of the infinite-volume resonance, `χ_n = n(1 - g + g²(1 - iπn))`
/// truncated at `order ∈ {1, 2}`.
pub fn infinite_volume_pole(n: u32, g: f64, order: u32) -> Result<Complex64> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "order must be 1 or 2, got {order}"
        )));
    }
    let nf = f64::from(n);
    let mut b = Complex64::new(1.0 - g, 0.0);
    if order == 2 {
        b += g * g * Complex64::new(1.0, -PI * nf);
    }
    Ok(nf * b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WidthVariant {
    /// Lowest order, `4π n³ g²`.
    #[serde(rename = "lo")]
    LowestOrder,
    /// Resummed, `(n/π) log(1 + (2πng)²)`.
    #[serde(rename = "LO")]
    Resummed,
    /// Large-`ng` asymptotics, `(2/π) n log(ng)`.
    #[serde(rename = "as")]
    Asymptotic,
}

/// Decay width of the `n`-th infinite-volume resonance.
pub fn decay_width(n: u32, g: f64, variant: WidthVariant) -> f64 {
    let nf = f64::from(n);
    match variant {
        WidthVariant::LowestOrder => 4.0 * PI * nf.powi(3) * g * g,
        WidthVariant::Resummed => nf / PI * (2.0 * PI * nf * g).powi(2).ln_1p(),
        WidthVariant::Asymptotic => 2.0 / PI * nf * (nf * g).ln(),
    }
}

/// Reference values of the infinite-volume model at one coupling; the
/// width fields follow the lo/LO/as naming of [`WidthVariant`].
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfiniteVolumeReference {
    pub chi_n: Complex64,
    pub width_lo: f64,
    pub width_LO: f64,
    pub width_as: f64,
}

pub fn infinite_volume_reference(n: u32, g: f64) -> InfiniteVolumeReference {
    InfiniteVolumeReference {
        chi_n: infinite_volume_pole(n, g, 2).expect("order 2 is valid"),
        width_lo: decay_width(n, g, WidthVariant::LowestOrder),
        width_LO: decay_width(n, g, WidthVariant::Resummed),
        width_as: decay_width(n, g, WidthVariant::Asymptotic),
    }
}
