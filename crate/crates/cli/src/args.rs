//! Command-line flags and their translation into a [`RunConfig`].

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{
    Command, ConfigError, Format, GridSpec, MomentumGrid, PositionGrid, RunConfig, SchemeChoice,
    Spacing, DEFAULT_GRID_POINTS,
};
use crate::presets::figure_preset;

#[derive(Debug, Parser)]
#[command(
    name = "winter",
    version,
    about = "Finite-volume Winter model: spectra, observables and perturbation theory"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Levels at one coupling, with k'(g), inside amplitude and phase shift
    Spectrum(Common),
    /// Levels, derivatives and spacings over a coupling grid
    Scan(Common),
    /// Eigenfunctions on a position grid at one coupling
    Eigenfunction(Common),
    /// Inside amplitude and phase shift over couplings (or over k with --kmin/--kmax)
    Observables(Common),
    /// Exact levels against ordinary and resummed perturbation theory
    Perturbation(Common),
    /// Quasi-degenerate doublets below resonance n
    Doublets(Common),
    /// Reproduce the data behind a figure
    Figure {
        /// Preset name, e.g. pNsmall, presum, pfase
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run from a JSON output document or a configuration file
    Replay {
        file: String,
        /// Write here instead of the recorded path
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Exact,
    Ordinary,
    Resummed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Large-cavity length N (in units of π)
    #[arg(long = "N", conflicts_with = "m")]
    pub n_cavity: Option<u32>,
    /// Total length M = N + 1 (in units of π)
    #[arg(long = "M", id = "m")]
    pub m_total: Option<u32>,
    /// Coupling g
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub gmin: Option<f64>,
    #[arg(long)]
    pub gmax: Option<f64>,
    #[arg(long)]
    pub gpoints: Option<usize>,
    #[arg(long, value_enum)]
    pub gspacing: Option<SpacingArg>,
    /// Level indices s (comma-separated; ranges as a..b, inclusive)
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<String>,
    /// Level as n,l (repeatable)
    #[arg(long = "level", allow_hyphen_values = true)]
    pub level: Vec<String>,
    /// All levels with free-limit momentum up to kmax, exceptional ones included
    #[arg(long)]
    pub kmax: Option<f64>,
    /// The lowest levels of the spectrum, exceptional ones included
    #[arg(long)]
    pub lowest: Option<usize>,
    /// Add p_n next to every selected resonant level
    #[arg(long)]
    pub exceptional: bool,
    /// Perturbative order (1..3)
    #[arg(long)]
    pub order: Option<u32>,
    /// Schemes for the perturbation command (comma-separated)
    #[arg(long, value_enum, value_delimiter = ',')]
    pub scheme: Vec<SchemeArg>,
    /// Resonance index n (doublets, presum)
    #[arg(long)]
    pub n: Option<u32>,
    /// Highest doublet index j
    #[arg(long)]
    pub jmax: Option<u32>,
    /// Momentum range for kernel tables
    #[arg(long)]
    pub kmin: Option<f64>,
    #[arg(long)]
    pub kpoints: Option<usize>,
    /// Number of x points for eigenfunction tables
    #[arg(long)]
    pub xpoints: Option<usize>,
    /// Append free/strong-coupling limit rows
    #[arg(long)]
    pub references: bool,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Output file (default: standard output)
    #[arg(long)]
    pub out: Option<String>,
    /// Root-finder relative tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Significant digits in the output (6..17)
    #[arg(long)]
    pub precision: Option<u32>,
}

fn parse_s(items: &[String]) -> Result<Vec<u32>, ConfigError> {
    let mut out = Vec::new();
    for item in items {
        let item = item.trim();
        if let Some((a, b)) = item.split_once("..") {
            let a: u32 = a
                .parse()
                .map_err(|_| ConfigError(format!("bad range '{item}'")))?;
            let b: u32 = b
                .trim_start_matches('=')
                .parse()
                .map_err(|_| ConfigError(format!("bad range '{item}'")))?;
            if a > b {
                return Err(ConfigError(format!("empty range '{item}'")));
            }
            out.extend(a..=b);
        } else {
            out.push(
                item.parse()
                    .map_err(|_| ConfigError(format!("bad level index '{item}'")))?,
            );
        }
    }
    Ok(out)
}

fn parse_level(item: &str) -> Result<(i64, i64), ConfigError> {
    let bad = || ConfigError(format!("--level expects n,l; got '{item}'"));
    let (n, l) = item.split_once(',').ok_or_else(bad)?;
    Ok((
        n.trim().parse().map_err(|_| bad())?,
        l.trim().parse().map_err(|_| bad())?,
    ))
}

impl Common {
    fn cavity(&self) -> Result<Option<u32>, ConfigError> {
        match (self.n_cavity, self.m_total) {
            (Some(n), _) => Ok(Some(n)),
            (None, Some(m)) if m >= 2 => Ok(Some(m - 1)),
            (None, Some(m)) => Err(ConfigError(format!("M must be >= 2, got {m}"))),
            (None, None) => Ok(None),
        }
    }

    /// Overlays the flags on `cfg`; only flags that were given change it.
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), ConfigError> {
        if let Some(n) = self.cavity()? {
            cfg.cavity = n;
        }
        if self.g.is_some() {
            cfg.coupling = self.g;
        }
        if self.gmin.is_some()
            || self.gmax.is_some()
            || self.gpoints.is_some()
            || self.gspacing.is_some()
        {
            let base = cfg
                .grid
                .unwrap_or(GridSpec::log(f64::NAN, f64::NAN, DEFAULT_GRID_POINTS));
            let grid = GridSpec {
                min: self.gmin.unwrap_or(base.min),
                max: self.gmax.unwrap_or(base.max),
                count: self.gpoints.unwrap_or(base.count),
                spacing: match self.gspacing {
                    Some(SpacingArg::Linear) => Spacing::Linear,
                    Some(SpacingArg::Log) => Spacing::Log,
                    None => base.spacing,
                },
            };
            if grid.min.is_nan() || grid.max.is_nan() {
                return Err(ConfigError(
                    "a coupling grid needs both --gmin and --gmax".into(),
                ));
            }
            cfg.grid = Some(grid);
        }
        let s = parse_s(&self.s)?;
        let nl = self
            .level
            .iter()
            .map(|l| parse_level(l))
            .collect::<Result<Vec<_>, _>>()?;
        if !s.is_empty() || !nl.is_empty() || self.kmax.is_some() || self.lowest.is_some() {
            cfg.levels.s = s;
            cfg.levels.nl = nl;
            cfg.levels.k_max = self
                .kmax
                .filter(|_| cfg.command != Command::Observables || self.kmin.is_none());
            cfg.levels.lowest = self.lowest;
        }
        if self.exceptional {
            cfg.levels.exceptional = true;
        }
        if let Some(order) = self.order {
            cfg.order = order;
        }
        if !self.scheme.is_empty() {
            cfg.schemes = self
                .scheme
                .iter()
                .map(|s| match s {
                    SchemeArg::Exact => SchemeChoice::Exact,
                    SchemeArg::Ordinary => SchemeChoice::Ordinary,
                    SchemeArg::Resummed => SchemeChoice::Resummed,
                })
                .collect();
        }
        if self.n.is_some() {
            cfg.n = self.n;
        }
        if self.jmax.is_some() {
            cfg.j_max = self.jmax;
        }
        if let Some(kmin) = self.kmin {
            let kmax = self
                .kmax
                .ok_or_else(|| ConfigError("--kmin needs --kmax".into()))?;
            cfg.momenta = Some(MomentumGrid {
                min: kmin,
                max: kmax,
                count: self.kpoints.unwrap_or(2001),
            });
        } else if let (Some(points), Some(m)) = (self.kpoints, cfg.momenta.as_mut()) {
            m.count = points;
        }
        if let Some(count) = self.xpoints {
            let max = cfg.positions.and_then(|p| p.max);
            cfg.positions = Some(PositionGrid { count, max });
        }
        if self.references {
            cfg.references = true;
        }
        if let Some(f) = self.format {
            cfg.output.format = match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
        }
        if self.out.is_some() {
            cfg.output.path = self.out.clone();
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(p) = self.precision {
            cfg.output.precision = p;
        }
        Ok(())
    }
}

/// Builds the configuration for a direct (non-preset) command.
pub fn direct_config(command: Command, common: &Common) -> Result<RunConfig, ConfigError> {
    let cavity = common
        .cavity()?
        .ok_or_else(|| ConfigError("the cavity size is required (--N or --M)".into()))?;
    let mut cfg = RunConfig::new(command, cavity);
    common.apply(&mut cfg)?;
    Ok(cfg)
}

/// Builds the configuration for `figure <name>`, with flags as overrides.
pub fn preset_config(name: &str, common: &Common) -> Result<RunConfig, ConfigError> {
    let mut cfg = figure_preset(name, common.n)?;
    common.apply(&mut cfg)?;
    Ok(cfg)
}

/// Reads a configuration from a JSON output document (its `config` field)
/// or from a bare configuration object.
pub fn replay_config(text: &str) -> Result<RunConfig, ConfigError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ConfigError(format!("invalid JSON: {e}")))?;
    let config = value.get("config").cloned().unwrap_or(value);
    serde_json::from_value(config).map_err(|e| ConfigError(format!("invalid configuration: {e}")))
}
