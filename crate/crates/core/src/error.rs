use thiserror::Error;

use crate::geometry::Region;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "chemical potential solver did not converge after {iterations} iterations \
         (mu bracket [{mu_low}, {mu_high}])"
    )]
    SolverFailure {
        mu_low: f64,
        mu_high: f64,
        iterations: usize,
    },

    #[error("chemical potential {mu} is not below the ground energy {ground_energy}")]
    ChemicalPotentialTooHigh { mu: f64, ground_energy: f64 },

    #[error("mode {mode} has zero weight in region {region}")]
    EmptyRegion { region: Region, mode: usize },

    #[error(
        "gram matrix of region {region} is numerically singular: min eigenvalue {min_eigenvalue:e} \
         below threshold {threshold:e} ({modes} modes)"
    )]
    IllConditionedGram {
        region: Region,
        min_eigenvalue: f64,
        threshold: f64,
        modes: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("partition has a gap region (max p_C = {max_gap_weight:e}); use the gapped formula")]
    GappedPartition { max_gap_weight: f64 },

    #[error("not a density operator: eigenvalue {0:e} is negative")]
    NegativeEigenvalue(f64),

    #[error("outside the supported regime: {0}")]
    RegimeExceeded(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
