//! Run configuration, shared by flags, presets and replayed JSON documents.

use serde::{Deserialize, Serialize};
use winter_core::analysis::{linear_grid, log_grid};
use winter_core::spectrum::{exceptional_levels, lowest_levels};
use winter_core::{label_from_s, LevelLabel};

/// A configuration problem; maps to exit status 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bail<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Spectrum,
    Scan,
    Eigenfunction,
    Observables,
    Perturbation,
    Doublets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>, ConfigError> {
        let grid = match self.spacing {
            Spacing::Log => log_grid(self.min, self.max, self.count),
            Spacing::Linear => linear_grid(self.min, self.max, self.count),
        };
        grid.map_err(|e| ConfigError(format!("coupling grid: {e}")))
    }
}

/// Which levels to report. Selections are merged and sorted by momentum;
/// exceptional levels `p_n` are included up to `k_max`, or next to any
/// selected resonant level when `exceptional` is set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelSelection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nl: Vec<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lowest: Option<usize>,
    #[serde(default)]
    pub exceptional: bool,
}

impl LevelSelection {
    pub fn is_empty(&self) -> bool {
        self.s.is_empty() && self.nl.is_empty() && self.k_max.is_none() && self.lowest.is_none()
    }

    /// Resolves the selection into momentum-ordered labels.
    pub fn resolve(&self, cavity: u32) -> Result<Vec<LevelLabel>, ConfigError> {
        let big_n = i64::from(cavity);
        let mut normal: Vec<u32> = self.s.clone();
        for &(n, l) in &self.nl {
            let label =
                LevelLabel::from_nl(n, l, cavity).map_err(|e| ConfigError(e.to_string()))?;
            normal.push(label.s.expect("normal level"));
        }
        let mut exceptional: Vec<u32> = Vec::new();
        if let Some(k_max) = self.k_max {
            if !(k_max > 0.0 && k_max.is_finite()) {
                return bail(format!("kmax must be > 0, got {k_max}"));
            }
            let s_max = (k_max * f64::from(cavity) + 1e-9).floor();
            if s_max > 1e6 {
                return bail(format!("kmax = {k_max} selects too many levels"));
            }
            normal.extend(1..=s_max as u32);
            exceptional.extend(exceptional_levels(k_max));
        }
        if let Some(count) = self.lowest {
            for label in lowest_levels(cavity, count) {
                match label.s {
                    Some(s) => normal.push(s),
                    None => exceptional.push(label.n as u32),
                }
            }
        }
        if normal.contains(&0) {
            return bail("level index s must be >= 1");
        }
        normal.sort_unstable();
        normal.dedup();
        if self.exceptional {
            exceptional.extend(
                normal
                    .iter()
                    .filter(|&&s| s % cavity == 0)
                    .map(|s| s / cavity),
            );
        }
        exceptional.sort_unstable();
        exceptional.dedup();

        // order by momentum: p_n sits between s = nN and s = nN + 1
        let mut out: Vec<LevelLabel> = Vec::new();
        let mut exc = exceptional.iter().peekable();
        for s in normal {
            while let Some(&&n) = exc.peek() {
                if i64::from(n) * big_n < i64::from(s) {
                    out.push(LevelLabel::exceptional(n));
                    exc.next();
                } else {
                    break;
                }
            }
            out.push(label_from_s(s, cavity));
        }
        out.extend(exc.map(|&n| LevelLabel::exceptional(n)));
        if out.is_empty() {
            return bail("no levels selected (use --s, --level, --kmax or --lowest)");
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    Exact,
    Ordinary,
    Resummed,
}

impl SchemeChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeChoice::Exact => "exact",
            SchemeChoice::Ordinary => "ordinary",
            SchemeChoice::Resummed => "resummed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
    /// Significant decimal digits, 6..=17.
    pub precision: u32,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Csv,
            precision: DEFAULT_PRECISION,
        }
    }
}

pub const DEFAULT_PRECISION: u32 = 15;
pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_GRID_POINTS: usize = 400;

/// Momentum grid for kernel tables (inside amplitude and phase versus `k`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Position grid for eigenfunction tables; `max` defaults to `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionGrid {
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

/// Singular couplings `j/(nN)` to list as marker rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Markers {
    pub n: u32,
    pub j_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    /// Large-cavity length `N`; the total length is `M = N + 1`.
    pub cavity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub levels: LevelSelection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momenta: Option<MomentumGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<PositionGrid>,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<SchemeChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<u32>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Append free- and strong-coupling limit rows for each level.
    #[serde(default)]
    pub references: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markers: Option<Markers>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Figure preset this configuration came from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
}

fn default_order() -> u32 {
    3
}

fn default_schemes() -> Vec<SchemeChoice> {
    vec![SchemeChoice::Exact]
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl RunConfig {
    pub fn new(command: Command, cavity: u32) -> Self {
        Self {
            command,
            cavity,
            coupling: None,
            grid: None,
            levels: LevelSelection::default(),
            momenta: None,
            positions: None,
            order: default_order(),
            schemes: default_schemes(),
            n: None,
            j_max: None,
            tol: DEFAULT_TOL,
            references: false,
            markers: None,
            output: OutputSpec::default(),
            preset: None,
        }
    }

    /// Checks everything that can be checked before any computation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.cavity == 0 {
            return bail("cavity length N must be >= 1 (M >= 2)");
        }
        if !(6..=17).contains(&self.output.precision) {
            return bail(format!(
                "precision must be in 6..=17, got {}",
                self.output.precision
            ));
        }
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return bail(format!("tolerance must be in (0, 1e-3), got {}", self.tol));
        }
        if let Some(g) = self.coupling {
            if !(g > 0.0 && g.is_finite()) {
                return bail(format!("coupling g must be finite and > 0, got {g}"));
            }
        }
        if let Some(grid) = &self.grid {
            if grid.count < 2 {
                return bail("coupling grid needs at least 2 points");
            }
            grid.points()?;
        }
        let needs_grid = matches!(
            self.command,
            Command::Scan | Command::Perturbation | Command::Doublets
        ) || (self.command == Command::Observables && self.momenta.is_none());
        if needs_grid && self.grid.is_none() {
            return bail("this command needs a coupling grid (--gmin/--gmax)");
        }
        let needs_coupling = matches!(self.command, Command::Spectrum | Command::Eigenfunction);
        if needs_coupling && self.coupling.is_none() {
            return bail("this command needs a coupling (--g)");
        }
        if let Some(m) = &self.momenta {
            if !(m.min > 0.0 && m.max > m.min && m.count >= 2) {
                return bail("momentum grid needs 0 < kmin < kmax and at least 2 points");
            }
        }
        if let Some(p) = &self.positions {
            if p.count < 2 {
                return bail("position grid needs at least 2 points");
            }
        }
        match self.command {
            Command::Doublets => {
                let n = self.n.unwrap_or(1);
                let j_max = self.j_max.unwrap_or(3);
                if n == 0 || j_max == 0 || j_max >= n * self.cavity {
                    return bail("doublets need n >= 1 and 1 <= jmax < nN");
                }
            }
            Command::Observables if self.momenta.is_some() => {}
            _ => {
                self.levels.resolve(self.cavity)?;
            }
        }
        if self.command == Command::Perturbation {
            if !(1..=3).contains(&self.order) {
                return bail(format!("order must be in 1..=3, got {}", self.order));
            }
            if self.schemes.is_empty() {
                return bail("at least one scheme is required");
            }
        }
        if let Some(m) = &self.markers {
            if m.n == 0 {
                return bail("marker n must be >= 1");
            }
        }
        Ok(())
    }
}
