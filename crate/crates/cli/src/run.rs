//! Executes a [`RunConfig`] and renders its table.

use std::io::Write;

use winter_core::analysis::{find_quasi_degenerate, scan_levels, ScanOptions};
use winter_core::eigen::{
    eval_exceptional_eigenfunction, eval_normal_eigenfunction, inside_amplitude, phase_shift, Form,
};
use winter_core::perturbation::{
    ordinary_nonresonant_k, ordinary_resonant_k, resummed_nonresonant_k, resummed_resonant_k,
    singular_couplings, PerturbativeResult,
};
use winter_core::trig::sin_pi;
use winter_core::{
    level_derivative, solve_level_with, strong_coupling_limit, Error, LevelKind, LevelLabel,
    ModelConfig, SolverOptions,
};

use crate::config::{Command, ConfigError, Format, RunConfig, SchemeChoice};
use crate::output::{to_csv, to_json, Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub table: Table,
    /// Rows whose status reports a numerical failure.
    pub failures: usize,
    pub warnings: Vec<String>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures > 0 {
            EXIT_NUMERICAL
        } else {
            EXIT_OK
        }
    }
}

/// Short status code for a per-point error.
pub fn status_code(e: &Error) -> &'static str {
    match e {
        Error::InvalidModel(_) => "invalid_model",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::PoleProximity { .. } => "pole_proximity",
        Error::NoSignChange { .. } => "no_sign_change",
        Error::NonConvergence { .. } => "non_convergence",
        Error::OutOfDomain { .. } => "out_of_domain",
        Error::SingularityProximity { .. } => "singular",
        Error::StepUnderflow { .. } => "step_underflow",
        Error::NoCrossing { .. } => "no_crossing",
        Error::BoundaryMaximum { .. } => "boundary_maximum",
        Error::Quadrature { .. } => "quadrature",
    }
}

const OK: &str = "ok";

/// Statuses that annotate a row without counting as a failure.
fn is_annotation(status: &str) -> bool {
    status == OK || status == "singular"
}

fn label_cells(label: &LevelLabel) -> Vec<Cell> {
    vec![
        label.s.map_or(Cell::Empty, Cell::from),
        Cell::Int(label.n),
        Cell::Int(label.l),
        Cell::text(label.kind.as_str()),
    ]
}

fn model(cfg: &RunConfig, g: f64) -> Result<ModelConfig, Error> {
    ModelConfig::new(g, cfg.cavity)
}

fn solver(cfg: &RunConfig) -> SolverOptions {
    SolverOptions::with_tol(cfg.tol)
}

fn reference_rows(
    table: &mut Table,
    label: &LevelLabel,
    cavity: u32,
    k_col: usize,
    scheme_col: usize,
) {
    let (free, strong) = match label.s {
        Some(s) => (
            f64::from(s) / f64::from(cavity),
            strong_coupling_limit(s, cavity),
        ),
        None => (label.n as f64, label.n as f64),
    };
    for (scheme, k) in [("free_limit", free), ("strong_limit", strong)] {
        let mut row = label_cells(label);
        row.resize(table.columns.len(), Cell::Empty);
        row[k_col] = Cell::num(k);
        row[scheme_col] = Cell::text(scheme);
        *row.last_mut().expect("status column") = Cell::text(OK);
        table.push(row);
    }
}

fn marker_rows(table: &mut Table, cfg: &RunConfig) {
    let Some(m) = cfg.markers else { return };
    let g_col = table.column("g").expect("g column");
    let scheme_col = table.column("scheme").expect("scheme column");
    for (j, g) in singular_couplings(m.n, cfg.cavity, m.j_max)
        .into_iter()
        .enumerate()
    {
        let mut row = vec![Cell::Empty; table.columns.len()];
        row[1] = Cell::from(m.n);
        row[2] = Cell::Int(j as i64 + 1);
        row[3] = Cell::text("marker");
        row[g_col] = Cell::num(g);
        row[scheme_col] = Cell::text("singular_coupling");
        *row.last_mut().expect("status column") = Cell::text(OK);
        table.push(row);
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Table, ConfigError> {
    let g = cfg.coupling.expect("validated");
    let levels = cfg.levels.resolve(cfg.cavity)?;
    let mut t = Table::new(
        "spectrum",
        &[
            "s", "n", "l", "kind", "g", "k", "dk_dg", "A", "delta", "scheme", "status",
        ],
    );
    let opts = solver(cfg);
    for label in &levels {
        let mut row = label_cells(label);
        row.push(Cell::num(g));
        match label.s {
            None => {
                row.extend([
                    Cell::num(label.n as f64),
                    Cell::num(0.0),
                    Cell::Empty,
                    Cell::Empty,
                ]);
                row.extend([Cell::text("exact"), Cell::text(OK)]);
            }
            Some(s) => {
                let solved = model(cfg, g).and_then(|m| {
                    let level = solve_level_with(&m, s, &opts)?;
                    Ok((level.k, level_derivative(&m, s)?))
                });
                match solved {
                    Ok((k, dk)) => {
                        row.extend([
                            Cell::num(k),
                            Cell::num(dk),
                            Cell::num(inside_amplitude(k, cfg.cavity)),
                            Cell::num(phase_shift(k, cfg.cavity)),
                        ]);
                        row.extend([Cell::text("exact"), Cell::text(OK)]);
                    }
                    Err(e) => {
                        row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
                        row.extend([Cell::text("exact"), Cell::text(status_code(&e))]);
                    }
                }
            }
        }
        t.push(row);
    }
    Ok(t)
}

fn scan(cfg: &RunConfig) -> Result<Table, ConfigError> {
    let grid = cfg.grid.expect("validated").points()?;
    let levels = cfg.levels.resolve(cfg.cavity)?;
    let opts = ScanOptions {
        solver: solver(cfg),
        second_derivative: true,
    };
    let table =
        scan_levels(&grid, cfg.cavity, &levels, &opts).map_err(|e| ConfigError(e.to_string()))?;
    let mut t = Table::new(
        "scan",
        &[
            "s", "n", "l", "kind", "g", "k", "dk_dg", "d2k_dg2", "spacing", "A", "delta", "scheme",
            "status",
        ],
    );
    for (i, label) in levels.iter().enumerate() {
        for (j, &g) in grid.iter().enumerate() {
            let status = table
                .failures
                .iter()
                .find(|f| f.level == i && f.point == j)
                .map_or(OK, |f| status_code(&f.error));
            let k = table.k[i][j];
            let (a, d) = if label.kind == LevelKind::Exceptional || !k.is_finite() {
                (Cell::Empty, Cell::Empty)
            } else {
                (
                    Cell::num(inside_amplitude(k, cfg.cavity)),
                    Cell::num(phase_shift(k, cfg.cavity)),
                )
            };
            let spacing = table.spacing.get(i).map_or(f64::NAN, |row| row[j]);
            let mut row = label_cells(label);
            row.extend([
                Cell::num(g),
                Cell::num(k),
                Cell::num(table.dk_dg[i][j]),
                Cell::num(table.d2k_dg2[i][j]),
                Cell::num(spacing),
                a,
                d,
                Cell::text("exact"),
                Cell::text(status),
            ]);
            t.push(row);
        }
        if cfg.references {
            reference_rows(&mut t, label, cfg.cavity, 5, 11);
        }
    }
    marker_rows(&mut t, cfg);
    Ok(t)
}

fn eigenfunction(cfg: &RunConfig) -> Result<Table, ConfigError> {
    let g = cfg.coupling.expect("validated");
    let levels = cfg.levels.resolve(cfg.cavity)?;
    let m = model(cfg, g).map_err(|e| ConfigError(e.to_string()))?;
    let positions = cfg.positions.unwrap_or(crate::config::PositionGrid {
        count: 1001,
        max: None,
    });
    let x_max = positions.max.unwrap_or(m.length());
    if !(x_max > 0.0 && x_max <= m.length()) {
        return Err(ConfigError(format!(
            "x range must lie in (0, L = {}]",
            m.length()
        )));
    }
    let last = (positions.count - 1) as f64;
    let xs: Vec<f64> = (0..positions.count)
        .map(|i| {
            if i == positions.count - 1 {
                x_max
            } else {
                x_max * i as f64 / last
            }
        })
        .collect();
    let mut t = Table::new(
        "eigenfunction",
        &[
            "s",
            "n",
            "l",
            "kind",
            "g",
            "k",
            "x",
            "psi_product",
            "psi_amplitude_phase",
            "scheme",
            "status",
        ],
    );
    let opts = solver(cfg);
    for label in &levels {
        let k = match label.s {
            None => Ok(label.n as f64),
            Some(s) => solve_level_with(&m, s, &opts).map(|l| l.k),
        };
        for &x in &xs {
            let mut row = label_cells(label);
            row.push(Cell::num(g));
            let values = k.clone().and_then(|k| {
                let (a, b) = match label.s {
                    None => {
                        let v = eval_exceptional_eigenfunction(label.n as u32, x, &m)?;
                        (v, v)
                    }
                    Some(_) => (
                        eval_normal_eigenfunction(k, x, &m, Form::Product)?,
                        eval_normal_eigenfunction(k, x, &m, Form::AmplitudePhase)?,
                    ),
                };
                Ok((k, a, b))
            });
            match values {
                Ok((k, a, b)) => {
                    row.extend([Cell::num(k), Cell::num(x), Cell::num(a), Cell::num(b)]);
                    row.extend([Cell::text("exact"), Cell::text(OK)]);
                }
                Err(e) => {
                    row.extend([Cell::Empty, Cell::num(x), Cell::Empty, Cell::Empty]);
                    row.extend([Cell::text("exact"), Cell::text(status_code(&e))]);
                }
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn kernel(cfg: &RunConfig) -> Table {
    let m = cfg.momenta.expect("kernel mode");
    let mut t = Table::new(
        "kernel",
        &[
            "N",
            "k",
            "A",
            "delta",
            "sin_numerator",
            "inv_denominator",
            "status",
        ],
    );
    let big_n = f64::from(cfg.cavity);
    let last = (m.count - 1) as f64;
    for i in 0..m.count {
        let k = if i == m.count - 1 {
            m.max
        } else {
            m.min + (m.max - m.min) * i as f64 / last
        };
        let den = sin_pi(k).abs();
        t.push(vec![
            Cell::from(cfg.cavity),
            Cell::num(k),
            Cell::num(inside_amplitude(k, cfg.cavity)),
            Cell::num(phase_shift(k, cfg.cavity)),
            Cell::num(sin_pi(big_n * k).abs()),
            Cell::num(1.0 / den),
            Cell::text(OK),
        ]);
    }
    t
}

fn observables(cfg: &RunConfig) -> Result<Table, ConfigError> {
    if cfg.momenta.is_some() {
        return Ok(kernel(cfg));
    }
    let grid = cfg.grid.expect("validated").points()?;
    let levels = cfg.levels.resolve(cfg.cavity)?;
    let mut t = Table::new(
        "observables",
        &[
            "s", "n", "l", "kind", "g", "k", "A", "delta", "scheme", "status",
        ],
    );
    let opts = solver(cfg);
    for label in &levels {
        for &g in &grid {
            let mut row = label_cells(label);
            row.push(Cell::num(g));
            match label.s {
                None => row.extend([
                    Cell::num(label.n as f64),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::text("exact"),
                    Cell::text(OK),
                ]),
                Some(s) => match winter_core::eigen::observables_at(g, cfg.cavity, s, &opts) {
                    Ok(o) => row.extend([
                        Cell::num(o.k),
                        Cell::num(o.amplitude),
                        Cell::num(o.phase),
                        Cell::text("exact"),
                        Cell::text(OK),
                    ]),
                    Err(e) => row.extend([
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::text("exact"),
                        Cell::text(status_code(&e)),
                    ]),
                },
            }
            t.push(row);
        }
    }
    marker_rows(&mut t, cfg);
    Ok(t)
}

fn perturbative(
    label: &LevelLabel,
    scheme: SchemeChoice,
    m: &ModelConfig,
    order: u32,
) -> Result<PerturbativeResult, Error> {
    let (n, l) = (label.n, label.l);
    match (scheme, l) {
        (SchemeChoice::Ordinary, 0) => ordinary_resonant_k(n as u32, m, order),
        (SchemeChoice::Ordinary, _) => ordinary_nonresonant_k(n, l, m, order),
        (SchemeChoice::Resummed, 0) => resummed_resonant_k(n as u32, m, order),
        // the non-resonant resummed series starts at second order
        (SchemeChoice::Resummed, _) => resummed_nonresonant_k(n, l, m, order.max(2)),
        (SchemeChoice::Exact, _) => unreachable!("exact rows are solved directly"),
    }
}

fn perturbation(cfg: &RunConfig) -> Result<Table, ConfigError> {
    let grid = cfg.grid.expect("validated").points()?;
    let levels = cfg.levels.resolve(cfg.cavity)?;
    let mut t = Table::new(
        "perturbation",
        &[
            "s", "n", "l", "kind", "g", "k", "shift", "xi", "distance", "order", "scheme", "status",
        ],
    );
    let opts = solver(cfg);
    for label in &levels {
        for &scheme in &cfg.schemes {
            if label.kind == LevelKind::Exceptional && scheme != SchemeChoice::Exact {
                continue;
            }
            for &g in &grid {
                let mut row = label_cells(label);
                row.push(Cell::num(g));
                let xi = g * f64::from(cfg.cavity);
                let m = match model(cfg, g) {
                    Ok(m) => m,
                    Err(e) => return Err(ConfigError(e.to_string())),
                };
                let (cells, status) = match (scheme, label.s) {
                    (SchemeChoice::Exact, None) => (
                        [
                            Cell::num(label.n as f64),
                            Cell::num(0.0),
                            Cell::num(xi),
                            Cell::Empty,
                            Cell::Empty,
                        ],
                        OK,
                    ),
                    (SchemeChoice::Exact, Some(s)) => match solve_level_with(&m, s, &opts) {
                        Ok(lev) => (
                            [
                                Cell::num(lev.k),
                                Cell::num(lev.offset),
                                Cell::num(xi),
                                Cell::Empty,
                                Cell::Empty,
                            ],
                            OK,
                        ),
                        Err(e) => (
                            [
                                Cell::Empty,
                                Cell::Empty,
                                Cell::num(xi),
                                Cell::Empty,
                                Cell::Empty,
                            ],
                            status_code(&e),
                        ),
                    },
                    (_, _) => match perturbative(label, scheme, &m, cfg.order) {
                        Ok(r) => (
                            [
                                Cell::num(r.k_approx),
                                Cell::num(r.shift),
                                Cell::num(r.xi),
                                Cell::opt_num(r.distance_to_singularity),
                                Cell::from(r.order),
                            ],
                            OK,
                        ),
                        Err(e) => (
                            [
                                Cell::Empty,
                                Cell::Empty,
                                Cell::num(xi),
                                Cell::Empty,
                                Cell::from(cfg.order),
                            ],
                            status_code(&e),
                        ),
                    },
                };
                row.extend(cells);
                row.extend([Cell::text(scheme.as_str()), Cell::text(status)]);
                t.push(row);
            }
        }
    }
    marker_rows(&mut t, cfg);
    Ok(t)
}

fn doublets(cfg: &RunConfig) -> Result<(Table, Vec<String>), ConfigError> {
    let grid = cfg.grid.expect("validated").points()?;
    let n = cfg.n.unwrap_or(1);
    let j_max = cfg.j_max.unwrap_or(3);
    let scan = find_quasi_degenerate(&grid, cfg.cavity, n, j_max, &solver(cfg))
        .map_err(|e| ConfigError(e.to_string()))?;
    let mut t = Table::new(
        "doublets",
        &[
            "j",
            "s_lower",
            "s_upper",
            "g_min",
            "spacing_min",
            "g_pred",
            "relative_offset",
            "status",
        ],
    );
    for r in &scan.reports {
        t.push(vec![
            Cell::from(r.j),
            r.lower.s.map_or(Cell::Empty, Cell::from),
            r.upper.s.map_or(Cell::Empty, Cell::from),
            Cell::num(r.g_min),
            Cell::num(r.spacing_min),
            Cell::num(r.predicted_g),
            Cell::num(r.relative_offset),
            Cell::text(OK),
        ]);
    }
    Ok((t, scan.warnings))
}

/// Computes the table described by `cfg`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    cfg.validate()?;
    let mut warnings = Vec::new();
    let table = match cfg.command {
        Command::Spectrum => spectrum(cfg)?,
        Command::Scan => scan(cfg)?,
        Command::Eigenfunction => eigenfunction(cfg)?,
        Command::Observables => observables(cfg)?,
        Command::Perturbation => perturbation(cfg)?,
        Command::Doublets => {
            let (t, w) = doublets(cfg)?;
            warnings = w;
            t
        }
    };
    let status_col = table.columns.len() - 1;
    let failures = table
        .rows
        .iter()
        .filter(|row| matches!(&row[status_col], Cell::Text(s) if !is_annotation(s)))
        .count();
    Ok(RunOutcome {
        table,
        failures,
        warnings,
    })
}

/// Renders the outcome in the configured format.
pub fn render(outcome: &RunOutcome, cfg: &RunConfig) -> String {
    match cfg.output.format {
        Format::Csv => to_csv(&outcome.table, cfg.output.precision),
        Format::Json => to_json(&outcome.table, cfg, cfg.output.precision),
    }
}

/// Runs, writes the output (file or stdout) and returns the exit status.
pub fn execute(cfg: &RunConfig) -> i32 {
    let outcome = match run(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let text = render(&outcome, cfg);
    let written = match &cfg.output.path {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_CONFIG;
    }
    if outcome.failures > 0 {
        eprintln!(
            "{} row(s) carry numerical failures; see the status column",
            outcome.failures
        );
    }
    outcome.exit_code()
}
