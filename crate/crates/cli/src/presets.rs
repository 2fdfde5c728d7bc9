//! Figure presets: the cavity, coupling range and level set of each figure.
//!
//! Every coupling scan uses [`DEFAULT_GRID_POINTS`] points, enough to
//! resolve the spacing minima and resonance crossings the figures show.

use crate::config::{
    Command, ConfigError, GridSpec, LevelSelection, Markers, MomentumGrid, PositionGrid, RunConfig,
    SchemeChoice, DEFAULT_GRID_POINTS,
};

pub const PRESETS: [&str; 18] = [
    "pNsmall",
    "pNsmall2",
    "pNlarge",
    "pfirstder",
    "psecder",
    "pdifferenza",
    "pinsamp",
    "pfase",
    "peigenfun1",
    "peigenfun2",
    "peigenfun3",
    "pinsideamp",
    "prelphase",
    "prelphase2",
    "pordpert",
    "presum",
    "presum2",
    "pordresum",
];

/// Levels `s = nN + l` for the given remainders, plus `p_n`.
fn around(n: i64, ls: &[i64], exceptional: bool) -> LevelSelection {
    LevelSelection {
        nl: ls.iter().map(|&l| (n, l)).collect(),
        exceptional,
        ..Default::default()
    }
}

fn with(command: Command, cavity: u32, name: &str) -> RunConfig {
    let mut c = RunConfig::new(command, cavity);
    c.preset = Some(name.to_string());
    c
}

fn log_scan(name: &str, cavity: u32, lo: f64, hi: f64) -> RunConfig {
    let mut c = with(Command::Scan, cavity, name);
    c.grid = Some(GridSpec::log(lo, hi, DEFAULT_GRID_POINTS));
    c
}

/// Levels of the resummed figures: `l = 0, -1, -2, -3` around resonance `n`.
fn resummed(name: &str, n: u32) -> RunConfig {
    let cavity = 99;
    let mut c = with(Command::Perturbation, cavity, name);
    let g_max = 4.5 / f64::from(n * cavity);
    c.grid = Some(GridSpec::log(1e-4, g_max, DEFAULT_GRID_POINTS));
    c.levels = around(i64::from(n), &[-3, -2, -1, 0], false);
    c.schemes = vec![SchemeChoice::Exact, SchemeChoice::Resummed];
    c.n = Some(n);
    c.markers = Some(Markers { n, j_max: 4 });
    c
}

/// Configuration reproducing the named figure. `n` selects the resonance
/// for the resummed presets (`presum` defaults to 1, `presum2` to 2).
pub fn figure_preset(name: &str, n: Option<u32>) -> Result<RunConfig, ConfigError> {
    let c = match name {
        // M = 4: first nine levels with their free and strong-coupling limits
        "pNsmall" => {
            let mut c = log_scan(name, 3, 1e-3, 1e2);
            c.levels.lowest = Some(9);
            c.references = true;
            c
        }
        // M = 6: lowest seven levels, containing the first resonance
        "pNsmall2" => {
            let mut c = log_scan(name, 5, 1e-3, 1e2);
            c.levels.lowest = Some(7);
            c.references = true;
            c
        }
        // M = 200: levels around n = 1, markers at j/199
        "pNlarge" => {
            let mut c = log_scan(name, 199, 1e-4, 0.05);
            c.levels = around(1, &[-5, -4, -3, -2, -1, 0, 1, 2, 3], true);
            c.references = true;
            c.markers = Some(Markers { n: 1, j_max: 9 });
            c
        }
        // M = 200: levels below and including the first resonance
        "pfirstder" | "psecder" | "pdifferenza" => {
            let mut c = log_scan(name, 199, 1e-3, 0.05);
            c.levels = around(1, &[-5, -4, -3, -2, -1, 0], name == "pdifferenza");
            c.markers = Some(Markers { n: 1, j_max: 9 });
            c
        }
        // M = 10: one period 0.5 <= k <= 1.5 of A_N and δ_N
        "pinsamp" | "pfase" => {
            let mut c = with(Command::Observables, 9, name);
            c.momenta = Some(MomentumGrid {
                min: 0.5,
                max: 1.5,
                count: 2001,
            });
            c
        }
        // N = 9: levels l = 0, -1, -2 of the first resonance over [0, 10π]
        "peigenfun1" | "peigenfun2" | "peigenfun3" => {
            let mut c = with(Command::Eigenfunction, 9, name);
            c.coupling = Some(match name {
                "peigenfun1" => 0.05,
                "peigenfun2" => 0.1,
                _ => 0.2,
            });
            c.levels = around(1, &[-2, -1, 0], false);
            c.positions = Some(PositionGrid {
                count: 1001,
                max: None,
            });
            c
        }
        // N = 9: inside amplitudes for 0.02 <= g <= 0.5 (linear axis)
        "pinsideamp" => {
            let mut c = with(Command::Observables, 9, name);
            c.grid = Some(GridSpec::linear(0.02, 0.5, DEFAULT_GRID_POINTS));
            c.levels = around(1, &[-3, -2, -1, 0, 1], false);
            c
        }
        // N = 9: phase shifts over a wide (log) range of couplings
        "prelphase" => {
            let mut c = with(Command::Observables, 9, name);
            c.grid = Some(GridSpec::log(1e-3, 1e3, DEFAULT_GRID_POINTS));
            c.levels = around(1, &[-3, -2, -1, 0, 1], false);
            c
        }
        // N = 9: phase shifts at small couplings (linear axis)
        "prelphase2" => {
            let mut c = with(Command::Observables, 9, name);
            c.grid = Some(GridSpec::linear(0.001, 0.3, DEFAULT_GRID_POINTS));
            c.levels = around(1, &[-3, -2, -1, 0, 1], false);
            c
        }
        // M = 100: exact levels and ordinary perturbation theory around n = 1
        "pordpert" => {
            let mut c = with(Command::Perturbation, 99, name);
            c.grid = Some(GridSpec::log(1e-4, 0.1, DEFAULT_GRID_POINTS));
            c.levels = around(1, &[-3, -2, -1, 0, 1, 2, 3], true);
            c.schemes = vec![SchemeChoice::Exact, SchemeChoice::Ordinary];
            c
        }
        "presum" => resummed(name, n.unwrap_or(1)),
        "presum2" => resummed(name, n.unwrap_or(2)),
        // M = 100: ordinary versus resummed around n = 1, with p_1
        "pordresum" => {
            let mut c = with(Command::Perturbation, 99, name);
            c.grid = Some(GridSpec::log(1e-4, 0.05, DEFAULT_GRID_POINTS));
            c.levels = around(1, &[-3, -2, -1, 0, 1], true);
            c.schemes = vec![
                SchemeChoice::Exact,
                SchemeChoice::Ordinary,
                SchemeChoice::Resummed,
            ];
            c.markers = Some(Markers { n: 1, j_max: 4 });
            c
        }
        other => {
            return Err(ConfigError(format!(
                "unknown preset '{other}'; known presets: {}",
                PRESETS.join(", ")
            )))
        }
    };
    if n.is_some() && !matches!(name, "presum" | "presum2") {
        return Err(ConfigError(format!("preset '{name}' does not take --n")));
    }
    Ok(c)
}
