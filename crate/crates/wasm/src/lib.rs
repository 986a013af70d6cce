//! Browser bindings. Every export returns a flat `Float64Array` of
//! fixed-width records so the page can plot without further parsing.

use wasm_bindgen::prelude::*;

use odlro_core::fock_extraction::{analytic_extraction_negativity, extracted_state};
use odlro_core::geometry::PartitionSpec;
use odlro_core::odlro::{default_path, offdiagonal_scan};
use odlro_core::sweep::{GridSpacing, PreparedSweep, SweepSetup, TemperatureGrid};

fn js(e: odlro_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn prepare(dimension: usize, cutoff: u32, particle_number: f64, a: f64, b: f64) -> Result<PreparedSweep, JsError> {
    PreparedSweep::new(SweepSetup {
        dimension,
        cutoff,
        particle_number,
        partition: PartitionSpec::new(a, b).map_err(js)?,
    })
    .map_err(js)
}

/// Records `[g, closed form, eigensolver]` for `g = k pi / steps`.
#[wasm_bindgen]
pub fn extraction_curve(steps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(3 * steps);
    for k in 0..steps {
        let g = k as f64 * std::f64::consts::PI / steps as f64;
        out.extend([
            g,
            analytic_extraction_negativity(g),
            extracted_state(g).negativity().negativity,
        ]);
    }
    out
}

/// Records `[T, T / T_c or NaN, condensate fraction, negativity]` over a log
/// grid (in units of `T_c` for a 3D box).
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn negativity_sweep(
    dimension: usize,
    cutoff: u32,
    particle_number: f64,
    a: f64,
    b: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    let sweep = prepare(dimension, cutoff, particle_number, a, b)?;
    let grid = TemperatureGrid::new(t_min, t_max, steps, GridSpacing::Log).map_err(js)?;
    let mut out = Vec::with_capacity(4 * steps);
    for t in grid.values() {
        let p = sweep.evaluate(sweep.absolute_temperature(t), false).map_err(js)?;
        out.extend([
            p.temperature,
            p.reduced_temperature.unwrap_or(f64::NAN),
            p.condensate_fraction(),
            p.analytic.value,
        ]);
    }
    Ok(out)
}

/// Records `[separation, rho_1 V]` along the first axis at one temperature
/// (in units of `T_c` for a 3D box).
#[wasm_bindgen]
pub fn offdiagonal_profile(dimension: usize, cutoff: u32, particle_number: f64, t: f64) -> Result<Vec<f64>, JsError> {
    let sweep = prepare(dimension, cutoff, particle_number, 0.5, 0.5)?;
    let state = sweep.thermal_state(sweep.absolute_temperature(t)).map_err(js)?;
    let scan = offdiagonal_scan(&state.occupations, sweep.modes(), &default_path(dimension, 0)).map_err(js)?;
    Ok(scan.points.iter().flat_map(|p| [p.separation, p.value]).collect())
}
