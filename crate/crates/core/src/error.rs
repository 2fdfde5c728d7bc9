use thiserror::Error;

/// Errors raised by the spectral solvers, eigenfunction evaluators and
/// perturbative expansions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `k` sits within the guard distance of a pole of the spectral function.
    #[error("k = {k} lies within {guard:e} of the pole at {pole}; shrink the bracket")]
    PoleProximity { k: f64, pole: f64, guard: f64 },

    /// The guard windows at the bracket ends leave no sign change to bisect.
    #[error("no sign change for level s = {s} in ({lo}, {hi}); guard swallows the root")]
    NoSignChange { s: u32, lo: f64, hi: f64 },

    #[error("solver did not converge for level s = {s} after {iterations} iterations")]
    NonConvergence { s: u32, iterations: u32 },

    #[error("position x = {x} outside the box [0, {length}]")]
    OutOfDomain { x: f64, length: f64 },

    /// The coupling sits within the exclusion radius of a pole `g_j` of a
    /// resummed expansion.
    #[error("g = {g} lies within {distance:e} of the resummation pole g_j = {pole}")]
    SingularityProximity { g: f64, pole: f64, distance: f64 },

    #[error("finite-difference step {step:e} does not fit below g = {g}")]
    StepUnderflow { g: f64, step: f64 },

    #[error("no crossing found in the coupling range [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("maximum sits at the range boundary g = {g}")]
    BoundaryMaximum { g: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (estimated error {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
