//! Model parameters and level labels.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the finite-volume model: a small cavity `[0, π]` coupled
/// through a δ barrier of strength `1/(π g)` to a large cavity `[π, L]`.
///
/// `cavity` is the large-cavity length `N` in units of π, so the whole box
/// has length `L = M π` with `M = N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    coupling: f64,
    cavity: u32,
}

impl ModelConfig {
    /// Builds a repulsive-coupling model. Requires `g > 0` (finite) and `N ≥ 1`.
    pub fn new(coupling: f64, cavity: u32) -> Result<Self> {
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::InvalidModel(format!(
                "coupling g must be finite and > 0, got {coupling}"
            )));
        }
        if cavity == 0 {
            return Err(Error::InvalidModel("cavity length N must be >= 1".into()));
        }
        Ok(Self { coupling, cavity })
    }

    /// Coupling `g`.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Large-cavity length `N` in units of π.
    pub fn cavity(&self) -> u32 {
        self.cavity
    }

    /// Total length `M = N + 1` in units of π.
    pub fn total(&self) -> u32 {
        self.cavity + 1
    }

    /// Total length `L = M π`.
    pub fn length(&self) -> f64 {
        f64::from(self.total()) * PI
    }

    /// Effective coupling `ξ = g N`.
    pub fn xi(&self) -> f64 {
        self.coupling * f64::from(self.cavity)
    }

    /// Same cavity, different coupling.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(coupling, self.cavity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    /// Integer momentum `p_n = n`, independent of the coupling.
    Exceptional,
    /// Normal level with `s = nN`, degenerate with `p_n` as `g → 0`.
    Resonant,
    NonResonant,
}

impl LevelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LevelKind::Exceptional => "exceptional",
            LevelKind::Resonant => "resonant",
            LevelKind::NonResonant => "non_resonant",
        }
    }
}

impl fmt::Display for LevelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifies one level of the spectrum.
///
/// Normal levels are keyed by their free-limit index `s` (`k → s/N` as
/// `g → 0`), decomposed as `s = nN + l` with `-N/2 < l ≤ N/2`.
/// Exceptional levels carry no `s`; `n` is their integer momentum and `l = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelLabel {
    pub s: Option<u32>,
    pub n: i64,
    pub l: i64,
    pub kind: LevelKind,
}

impl LevelLabel {
    pub fn exceptional(n: u32) -> Self {
        Self {
            s: None,
            n: i64::from(n),
            l: 0,
            kind: LevelKind::Exceptional,
        }
    }

    /// Free-limit momentum: `s/N` for normal levels, `n` for exceptional ones.
    pub fn free_limit(&self, cavity: u32) -> f64 {
        match self.s {
            Some(s) => f64::from(s) / f64::from(cavity),
            None => self.n as f64,
        }
    }

    /// Inverse of [`label_from_s`] for a normal level given as `(n, l)`.
    pub fn from_nl(n: i64, l: i64, cavity: u32) -> Result<Self> {
        let big_n = i64::from(cavity);
        if 2 * l <= -big_n || 2 * l > big_n {
            return Err(Error::InvalidArgument(format!(
                "remainder l = {l} outside (-N/2, N/2] for N = {cavity}"
            )));
        }
        let s = n * big_n + l;
        if s < 1 {
            return Err(Error::InvalidArgument(format!(
                "(n, l) = ({n}, {l}) gives non-positive s = {s}"
            )));
        }
        let s = u32::try_from(s)
            .map_err(|_| Error::InvalidArgument(format!("s = {s} out of range")))?;
        Ok(label_from_s(s, cavity))
    }
}

impl fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.s {
            Some(s) => write!(f, "s={s} (n={}, l={}, {})", self.n, self.l, self.kind),
            None => write!(f, "p={} (exceptional)", self.n),
        }
    }
}

/// Decomposes `s = nN + l` with the remainder in the symmetric range
/// `-N/2 < l ≤ N/2`.
pub fn label_from_s(s: u32, cavity: u32) -> LevelLabel {
    assert!(cavity >= 1, "cavity length must be >= 1");
    let big_n = i64::from(cavity);
    let s_i = i64::from(s);
    let mut n = s_i / big_n;
    let mut l = s_i % big_n;
    if 2 * l > big_n {
        l -= big_n;
        n += 1;
    }
    let kind = if l == 0 {
        LevelKind::Resonant
    } else {
        LevelKind::NonResonant
    };
    LevelLabel {
        s: Some(s),
        n,
        l,
        kind,
    }
}
