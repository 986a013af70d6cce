//! Temperature sweeps of the ideal gas: thermodynamics, `<chi|chi>` and the
//! negativity at each point.

use serde::{Deserialize, Serialize};

use crate::bose_gas::{critical_temperature, BoxSpectrum, Mode, ThermalState};
use crate::error::{Error, Result};
use crate::geometry::{gram_matrices, GramSet, PartitionSpec};
use crate::negativity::{chi_norm_squared, negativity_analytic, pt_oracle, ChiVector, NegativityReport, ReportContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
    pub spacing: GridSpacing,
}

impl TemperatureGrid {
    pub fn new(t_min: f64, t_max: f64, steps: usize, spacing: GridSpacing) -> Result<Self> {
        if !(t_min > 0.0) || !(t_max >= t_min) || !t_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "temperature grid needs 0 < t_min <= t_max, got [{t_min}, {t_max}]"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter(
                "temperature grid needs at least one step".into(),
            ));
        }
        Ok(TemperatureGrid {
            t_min,
            t_max,
            steps,
            spacing,
        })
    }

    /// Endpoints included; a single step yields `t_min`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t_min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let f = i as f64 / last;
                match self.spacing {
                    GridSpacing::Linear => self.t_min + f * (self.t_max - self.t_min),
                    GridSpacing::Log => (self.t_min.ln() + f * (self.t_max / self.t_min).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSetup {
    pub dimension: usize,
    pub cutoff: u32,
    pub particle_number: f64,
    pub partition: PartitionSpec,
}

/// Everything about a sweep that does not depend on temperature.
#[derive(Debug, Clone)]
pub struct PreparedSweep {
    setup: SweepSetup,
    spectrum: BoxSpectrum,
    grams: GramSet,
    critical_temperature: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub temperature: f64,
    /// `T / T_c`, 3D only.
    pub reduced_temperature: Option<f64>,
    pub state: ThermalState,
    pub chi_norm_squared: f64,
    pub analytic: NegativityReport,
    pub oracle: Option<std::result::Result<NegativityReport, Error>>,
}

impl SweepPoint {
    pub fn condensate_fraction(&self) -> f64 {
        self.state.condensate_fraction()
    }
}

impl PreparedSweep {
    pub fn new(setup: SweepSetup) -> Result<Self> {
        let spectrum = BoxSpectrum::new(setup.dimension, setup.cutoff)?;
        if setup.partition.axis() >= setup.dimension {
            return Err(Error::InvalidParameter(format!(
                "split axis {} out of range for a {}D box",
                setup.partition.axis(),
                setup.dimension
            )));
        }
        let grams = gram_matrices(spectrum.modes(), &setup.partition)?;
        let critical_temperature = if setup.dimension == 3 {
            Some(critical_temperature(setup.particle_number, 1.0, 3)?)
        } else {
            None
        };
        Ok(PreparedSweep {
            setup,
            spectrum,
            grams,
            critical_temperature,
        })
    }

    pub fn setup(&self) -> &SweepSetup {
        &self.setup
    }

    pub fn spectrum(&self) -> &BoxSpectrum {
        &self.spectrum
    }

    pub fn modes(&self) -> &[Mode] {
        self.spectrum.modes()
    }

    pub fn grams(&self) -> &GramSet {
        &self.grams
    }

    pub fn critical_temperature(&self) -> Option<f64> {
        self.critical_temperature
    }

    /// Grid values are in units of `T_c` in 3D and absolute otherwise.
    pub fn absolute_temperature(&self, grid_value: f64) -> f64 {
        match self.critical_temperature {
            Some(tc) => grid_value * tc,
            None => grid_value,
        }
    }

    pub fn thermal_state(&self, temperature: f64) -> Result<ThermalState> {
        ThermalState::grand_canonical(&self.spectrum, self.setup.particle_number, temperature)
    }

    pub fn evaluate(&self, temperature: f64, with_oracle: bool) -> Result<SweepPoint> {
        let state = self.thermal_state(temperature)?;
        self.evaluate_state(state, with_oracle)
    }

    /// Entanglement quantities for a given thermal state on this sweep's modes.
    pub fn evaluate_state(&self, state: ThermalState, with_oracle: bool) -> Result<SweepPoint> {
        let temperature = state.temperature;
        let chi = ChiVector::new(&state.occupations, &self.grams)?;
        let norm = chi_norm_squared(&chi, &self.grams)?;
        let context = ReportContext {
            temperature,
            partition: self.setup.partition,
            mode_cutoff: self.setup.cutoff,
            tail_weight: state.tail_weight,
        };
        let analytic = negativity_analytic(&chi, &self.grams, &self.setup.partition)?.with_context(context.clone());
        let oracle = with_oracle.then(|| {
            pt_oracle(&state.occupations, self.modes(), &self.setup.partition, &self.grams)
                .map(|r| r.with_context(context.clone()))
        });
        Ok(SweepPoint {
            temperature,
            reduced_temperature: self.critical_temperature.map(|tc| temperature / tc),
            state,
            chi_norm_squared: norm,
            analytic,
            oracle,
        })
    }
}
