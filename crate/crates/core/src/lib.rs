//! Finite-volume Winter model: a small cavity `[0, π]` coupled through a δ
//! barrier to a large cavity `[π, (N+1)π]`, with reflecting walls at both ends.
//!
//! The crate solves the quantization condition
//!
//! ```text
//! cot(πk) + cot(πNk) + 1/(πgk) = 0
//! ```
//!
//! for every normal level, evaluates eigenfunctions and resonance
//! observables (inside amplitude, phase shift), implements ordinary and
//! resummed weak-coupling expansions, and scans levels across couplings.
//!
//! ```
//! use winter_core::{solve_level, ModelConfig};
//!
//! let cfg = ModelConfig::new(0.05, 9).unwrap();
//! let level = solve_level(&cfg, 9, 1e-13).unwrap();
//! // the resonant level sits just below the exceptional momentum p_1 = 1
//! assert!(level.k < 1.0 && level.k > 0.95);
//! ```

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod model;
pub mod perturbation;
pub mod quadrature;
pub mod spectrum;
pub mod trig;

pub use analysis::{
    amplitude_crossing_locator, amplitude_peak_locator, find_quasi_degenerate, level_derivative,
    level_second_derivative, linear_grid, log_grid, resonance_locator_phase, spacing_scan,
    DoubletReport, ScanOptions, ScanTable,
};
pub use eigen::{
    dirichlet_kernel, eval_exceptional_eigenfunction, eval_normal_eigenfunction, inside_amplitude,
    phase_shift, Form,
};
pub use error::{Error, Result};
pub use model::{label_from_s, LevelKind, LevelLabel, ModelConfig};
pub use perturbation::{
    decay_width, infinite_volume_pole, ordinary_nonresonant_k, ordinary_resonant_k,
    resummed_nonresonant_k, resummed_resonant_k, singular_couplings, PerturbativeResult, Scheme,
    WidthVariant,
};
pub use spectrum::{
    bracket_for, exceptional_levels, solve_level, solve_level_with, spectral_fn,
    strong_coupling_limit, MomentumLevel, SolverOptions,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/eigenfunctions.md")]
    mod eigenfunctions {}
    #[doc = include_str!("../../../book/src/perturbation.md")]
    mod perturbation {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
}
