//! The four subcommands. Each returns its tables plus the number of rows that
//! carry an error; writing and exit codes are handled by the caller.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use odlro_core::fock_extraction::{analytic_extraction_negativity, extracted_state};
use odlro_core::odlro::{default_path, odlro_detect, offdiagonal_scan, SpectrumInput};
use odlro_core::sweep::PreparedSweep;
use odlro_core::validate::{run_suite, Fault, PropertyOutcome, ValidateOptions};
use odlro_core::Error;

use crate::config::RunConfig;
use crate::table::{Cell, Table};

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub tables: Vec<Table>,
    pub row_errors: usize,
}

/// Per-point counter on stderr.
pub struct Progress {
    total: usize,
    done: AtomicUsize,
    enabled: bool,
}

impl Progress {
    pub fn new(total: usize, enabled: bool) -> Self {
        Progress {
            total,
            done: AtomicUsize::new(0),
            enabled,
        }
    }

    fn tick(&self) {
        let k = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if self.enabled {
            eprintln!("point {k}/{}", self.total);
        }
    }
}

pub const EXTRACT_COLUMNS: [&str; 4] = ["g", "negativity_analytic", "negativity_oracle", "abs_diff"];

pub fn run_extract(cfg: &RunConfig) -> CommandOutput {
    let mut table = Table::new(None, &EXTRACT_COLUMNS);
    for k in 0..cfg.g_steps {
        let g = k as f64 * PI / cfg.g_steps as f64;
        let analytic = analytic_extraction_negativity(g);
        let oracle = extracted_state(g).negativity().negativity;
        table.push(vec![
            Cell::Float(g),
            Cell::Float(analytic),
            Cell::Float(oracle),
            Cell::Float((analytic - oracle).abs()),
        ]);
    }
    CommandOutput {
        tables: vec![table],
        row_errors: 0,
    }
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "T",
    "T_over_Tc",
    "mu",
    "condensate_fraction",
    "tail_weight",
    "chi_norm_sq",
    "negativity_analytic",
    "negativity_oracle",
    "negative_eigenvalue_count",
    "error",
];

fn temperatures(cfg: &RunConfig, sweep: &PreparedSweep) -> Vec<f64> {
    cfg.temperature_grid()
        .values()
        .into_iter()
        .map(|t| sweep.absolute_temperature(t))
        .collect()
}

pub fn run_sweep(cfg: &RunConfig, show_progress: bool) -> Result<CommandOutput, Error> {
    let sweep = PreparedSweep::new(cfg.sweep_setup())?;
    let temps = temperatures(cfg, &sweep);
    let progress = Progress::new(temps.len(), show_progress);
    let rows: Vec<(Vec<Cell>, bool)> = temps
        .par_iter()
        .map(|&t| {
            let row = sweep_row(&sweep, t, cfg.oracle);
            progress.tick();
            row
        })
        .collect();
    let mut table = Table::new(None, &SWEEP_COLUMNS);
    let mut row_errors = 0;
    for (row, failed) in rows {
        row_errors += failed as usize;
        table.push(row);
    }
    Ok(CommandOutput {
        tables: vec![table],
        row_errors,
    })
}

fn sweep_row(sweep: &PreparedSweep, t: f64, with_oracle: bool) -> (Vec<Cell>, bool) {
    let reduced = Cell::opt_float(sweep.critical_temperature().map(|tc| t / tc));
    match sweep.evaluate(t, with_oracle) {
        Ok(p) => {
            let (oracle, count, error) = match &p.oracle {
                None => (Cell::Empty, Cell::Empty, None),
                Some(Ok(r)) => (
                    Cell::Float(r.value),
                    r.negative_eigenvalue_count.map_or(Cell::Empty, |c| Cell::Int(c as u64)),
                    None,
                ),
                Some(Err(e)) => (Cell::Empty, Cell::Empty, Some(e.to_string())),
            };
            let failed = error.is_some();
            (
                vec![
                    Cell::Float(t),
                    reduced,
                    Cell::opt_float(p.state.chemical_potential),
                    Cell::Float(p.condensate_fraction()),
                    Cell::Float(p.state.tail_weight),
                    Cell::Float(p.chi_norm_squared),
                    Cell::Float(p.analytic.value),
                    oracle,
                    count,
                    error.map_or(Cell::Empty, Cell::Text),
                ],
                failed,
            )
        }
        Err(e) => {
            let mut row = vec![Cell::Float(t), reduced];
            row.extend(std::iter::repeat_n(Cell::Empty, SWEEP_COLUMNS.len() - 3));
            row.push(Cell::Text(e.to_string()));
            (row, true)
        }
    }
}

pub const SCAN_COLUMNS: [&str; 7] = ["T", "T_over_Tc", "separation", "x", "x_prime", "rho1_offdiag", "error"];
pub const SPECTRAL_COLUMNS: [&str; 5] = ["T", "T_over_Tc", "alpha", "odlro_flag", "error"];

/// Off-diagonal scan along the split axis plus the spectral detector, per
/// temperature. With `spectrum`, only the detector runs, on those eigenvalues.
pub fn run_scan(cfg: &RunConfig, spectrum: Option<&[f64]>, show_progress: bool) -> Result<CommandOutput, Error> {
    let mut spectral = Table::new(Some("spectral"), &SPECTRAL_COLUMNS);
    if let Some(values) = spectrum {
        let report = odlro_detect(SpectrumInput::Eigenvalues(values), cfg.threshold)?;
        spectral.push(vec![
            Cell::Empty,
            Cell::Empty,
            Cell::Float(report.alpha),
            Cell::Bool(report.flag),
            Cell::Empty,
        ]);
        return Ok(CommandOutput {
            tables: vec![spectral],
            row_errors: 0,
        });
    }

    let sweep = PreparedSweep::new(cfg.sweep_setup())?;
    let temps = temperatures(cfg, &sweep);
    let path = default_path(cfg.dimension, cfg.axis);
    let progress = Progress::new(temps.len(), show_progress);
    let results: Vec<_> = temps
        .par_iter()
        .map(|&t| {
            let r = sweep.thermal_state(t).and_then(|state| {
                let scan = offdiagonal_scan(&state.occupations, sweep.modes(), &path)?;
                let report = odlro_detect(
                    SpectrumInput::IdealGas {
                        occupations: &state.occupations,
                        particle_number: state.particle_number,
                    },
                    cfg.threshold,
                )?;
                Ok((scan, report))
            });
            progress.tick();
            (t, r)
        })
        .collect();

    let mut scan_table = Table::new(Some("scan"), &SCAN_COLUMNS);
    let mut row_errors = 0;
    for (t, r) in results {
        let reduced = Cell::opt_float(sweep.critical_temperature().map(|tc| t / tc));
        match r {
            Ok((scan, report)) => {
                for p in scan.points {
                    scan_table.push(vec![
                        Cell::Float(t),
                        reduced.clone(),
                        Cell::Float(p.separation),
                        Cell::Float(p.x[cfg.axis]),
                        Cell::Float(p.x_prime[cfg.axis]),
                        Cell::Float(p.value),
                        Cell::Empty,
                    ]);
                }
                spectral.push(vec![
                    Cell::Float(t),
                    reduced,
                    Cell::Float(report.alpha),
                    Cell::Bool(report.flag),
                    Cell::Empty,
                ]);
            }
            Err(e) => {
                row_errors += 1;
                spectral.push(vec![
                    Cell::Float(t),
                    reduced,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Text(e.to_string()),
                ]);
            }
        }
    }
    Ok(CommandOutput {
        tables: vec![scan_table, spectral],
        row_errors,
    })
}

/// Eigenvalues from a JSON array or whitespace / comma separated text.
pub fn parse_spectrum(text: &str) -> Result<Vec<f64>, String> {
    if let Ok(v) = serde_json::from_str::<Vec<f64>>(text) {
        return Ok(v);
    }
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| format!("bad eigenvalue {s:?}: {e}")))
        .collect()
}

pub const VALIDATE_COLUMNS: [&str; 4] = ["property", "passed", "detail", "failing_case"];

pub fn run_validate(cfg: &RunConfig, fault: Option<Fault>) -> (Vec<PropertyOutcome>, CommandOutput) {
    let outcomes = run_suite(&ValidateOptions { seed: cfg.seed, fault });
    let mut table = Table::new(None, &VALIDATE_COLUMNS);
    for o in &outcomes {
        table.push(vec![
            Cell::Text(o.name.into()),
            Cell::Bool(o.passed),
            Cell::Text(o.detail.clone()),
            o.failing_case.clone().map_or(Cell::Empty, Cell::Text),
        ]);
    }
    let row_errors = outcomes.iter().filter(|o| !o.passed).count();
    (
        outcomes,
        CommandOutput {
            tables: vec![table],
            row_errors,
        },
    )
}
