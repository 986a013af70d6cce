//! Effective run configuration: built-in defaults, then an optional JSON
//! config file, then command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use odlro_core::geometry::PartitionSpec;
use odlro_core::sweep::{GridSpacing, SweepSetup, TemperatureGrid};

pub const CONFIG_ENV: &str = "ODLRO_LAB_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

impl From<Spacing> for GridSpacing {
    fn from(s: Spacing) -> Self {
        match s {
            Spacing::Linear => GridSpacing::Linear,
            Spacing::Log => GridSpacing::Log,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dimension: usize,
    pub mode_cutoff: u32,
    pub particle_number: f64,
    /// Temperature grid, in units of `T_c` for a 3D box and absolute otherwise.
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
    pub spacing: Spacing,
    /// Number of coupling strengths `g = k pi / g_steps`, `k = 0 .. g_steps - 1`.
    pub g_steps: usize,
    pub partition_a: f64,
    pub partition_b: f64,
    pub axis: usize,
    pub threshold: f64,
    pub oracle: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dimension: 3,
            mode_cutoff: 8,
            particle_number: 1e4,
            t_min: 0.1,
            t_max: 3.0,
            steps: 50,
            spacing: Spacing::Log,
            g_steps: 64,
            partition_a: 0.5,
            partition_b: 0.5,
            axis: 0,
            threshold: odlro_core::odlro::DEFAULT_THRESHOLD,
            oracle: false,
            out: None,
            format: OutputFormat::Csv,
            seed: 20240601,
        }
    }
}

/// A config file: any subset of the `RunConfig` fields.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    dimension: Option<usize>,
    mode_cutoff: Option<u32>,
    particle_number: Option<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    steps: Option<usize>,
    spacing: Option<Spacing>,
    g_steps: Option<usize>,
    partition_a: Option<f64>,
    partition_b: Option<f64>,
    axis: Option<usize>,
    threshold: Option<f64>,
    oracle: Option<bool>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    seed: Option<u64>,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigFlags {
    /// JSON config file (defaults to $ODLRO_LAB_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub dimension: Option<usize>,
    #[arg(long, global = true)]
    pub mode_cutoff: Option<u32>,
    #[arg(long, short = 'n', global = true)]
    pub particle_number: Option<f64>,
    #[arg(long, global = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, value_enum, global = true)]
    pub spacing: Option<Spacing>,
    #[arg(long, global = true)]
    pub g_steps: Option<usize>,
    #[arg(long, global = true)]
    pub partition_a: Option<f64>,
    #[arg(long, global = true)]
    pub partition_b: Option<f64>,
    #[arg(long, global = true)]
    pub axis: Option<usize>,
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Also run the eigensolver oracle (`--oracle`, `--oracle false`).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub oracle: Option<bool>,
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config file {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

macro_rules! overlay {
    ($cfg:expr, $src:expr, $($field:ident),+) => {
        $( if let Some(v) = $src.$field.clone() { $cfg.$field = v; } )+
    };
}

impl RunConfig {
    pub fn apply_file(&mut self, file: &ConfigFile) {
        overlay!(
            self,
            file,
            dimension,
            mode_cutoff,
            particle_number,
            t_min,
            t_max,
            steps,
            spacing,
            g_steps,
            partition_a,
            partition_b,
            axis,
            threshold,
            oracle,
            format,
            seed
        );
        if file.out.is_some() {
            self.out = file.out.clone();
        }
    }

    pub fn apply_flags(&mut self, flags: &ConfigFlags) {
        overlay!(
            self,
            flags,
            dimension,
            mode_cutoff,
            particle_number,
            t_min,
            t_max,
            steps,
            spacing,
            g_steps,
            partition_a,
            partition_b,
            axis,
            threshold,
            oracle,
            format,
            seed
        );
        if flags.out.is_some() {
            self.out = flags.out.clone();
        }
    }

    /// Defaults, then the config file named by `--config` or `env_config`, then flags.
    pub fn resolve(flags: &ConfigFlags, env_config: Option<PathBuf>) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = flags.config.clone().or(env_config) {
            cfg.apply_file(&load_file(&path)?);
        }
        cfg.apply_flags(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        if !(1..=3).contains(&self.dimension) {
            return bad(format!("dimension must be 1, 2 or 3, got {}", self.dimension));
        }
        if self.mode_cutoff == 0 {
            return bad("mode_cutoff must be at least 1 (empty mode list)".into());
        }
        if !(self.particle_number >= 1.0) || !self.particle_number.is_finite() {
            return bad(format!("particle_number must be >= 1, got {}", self.particle_number));
        }
        if !(self.t_min > 0.0) || !(self.t_max >= self.t_min) || !self.t_max.is_finite() {
            return bad(format!("need 0 < t_min <= t_max, got [{}, {}]", self.t_min, self.t_max));
        }
        if self.steps == 0 || self.g_steps == 0 {
            return bad("steps and g_steps must be at least 1".into());
        }
        if !(self.partition_a > 0.0 && self.partition_a <= self.partition_b && self.partition_b < 1.0) {
            return bad(format!(
                "need 0 < partition_a <= partition_b < 1, got a = {}, b = {}",
                self.partition_a, self.partition_b
            ));
        }
        if self.axis >= self.dimension {
            return bad(format!(
                "axis {} out of range for dimension {}",
                self.axis, self.dimension
            ));
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return bad(format!("threshold must lie in (0, 1], got {}", self.threshold));
        }
        Ok(())
    }

    pub fn partition(&self) -> PartitionSpec {
        PartitionSpec::with_axis(self.partition_a, self.partition_b, self.axis).expect("validated partition")
    }

    pub fn sweep_setup(&self) -> SweepSetup {
        SweepSetup {
            dimension: self.dimension,
            cutoff: self.mode_cutoff,
            particle_number: self.particle_number,
            partition: self.partition(),
        }
    }

    pub fn temperature_grid(&self) -> TemperatureGrid {
        TemperatureGrid::new(self.t_min, self.t_max, self.steps, self.spacing.into()).expect("validated grid")
    }
}

pub fn load_file(path: &Path) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_owned(),
        source,
    })
}
