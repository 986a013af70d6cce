//! Off-diagonal long-range order diagnostics.
//!
//! `rho_1` is kept at unit trace; multiply by `N` for the extensive
//! normalization `Tr rho_1 = N`.

use serde::Serialize;

use crate::bose_gas::Mode;
use crate::error::{Error, Result};
use crate::geometry::mode_wavefunction_value;

pub const DEFAULT_THRESHOLD: f64 = 0.1;
const SPECTRUM_HEAD: usize = 5;
const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// `sum_k (<n_k> / sum n) phi_k(x) phi_k(x')`.
pub fn rho1_position(occupations: &[f64], modes: &[Mode], x: &[f64], x_prime: &[f64]) -> f64 {
    let total: f64 = occupations.iter().sum();
    occupations
        .iter()
        .zip(modes)
        .filter(|(&n, _)| n != 0.0)
        .map(|(&n, mode)| (n / total) * mode_wavefunction_value(mode, x) * mode_wavefunction_value(mode, x_prime))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub separation: f64,
    pub x: Vec<f64>,
    pub x_prime: Vec<f64>,
    /// `rho_1(x, x') * V`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffDiagonalScan {
    pub points: Vec<ScanPoint>,
    pub volume: f64,
}

/// A pair of points to evaluate `rho_1` at.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPair {
    pub x: Vec<f64>,
    pub x_prime: Vec<f64>,
}

/// Pairs `c -/+ s/2` along `axis`, other coordinates at the box center.
pub fn antipodal_path(dimension: usize, axis: usize, center: f64, separations: &[f64]) -> Vec<ScanPair> {
    separations
        .iter()
        .map(|&s| {
            let mut x = vec![0.5; dimension];
            let mut x_prime = vec![0.5; dimension];
            x[axis] = center - 0.5 * s;
            x_prime[axis] = center + 0.5 * s;
            ScanPair { x, x_prime }
        })
        .collect()
}

/// Separations `0, 0.05, ..., 0.9` around the box center.
pub fn default_path(dimension: usize, axis: usize) -> Vec<ScanPair> {
    let separations: Vec<f64> = (0..=18).map(|k| k as f64 * 0.05).collect();
    antipodal_path(dimension, axis, 0.5, &separations)
}

pub fn offdiagonal_scan(occupations: &[f64], modes: &[Mode], path: &[ScanPair]) -> Result<OffDiagonalScan> {
    if path.is_empty() {
        return Err(Error::InvalidParameter("scan path is empty".into()));
    }
    if occupations.len() != modes.len() {
        return Err(Error::DimensionMismatch {
            expected: modes.len(),
            found: occupations.len(),
        });
    }
    if !(occupations.iter().sum::<f64>() > 0.0) {
        return Err(Error::InvalidParameter("occupations sum to zero".into()));
    }
    let points = path
        .iter()
        .map(|pair| {
            let separation = pair
                .x
                .iter()
                .zip(&pair.x_prime)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            ScanPoint {
                separation,
                x: pair.x.clone(),
                x_prime: pair.x_prime.clone(),
                value: rho1_position(occupations, modes, &pair.x, &pair.x_prime),
            }
        })
        .collect();
    Ok(OffDiagonalScan { points, volume: 1.0 })
}

/// Input to the spectral detector.
#[derive(Debug, Clone, Copy)]
pub enum SpectrumInput<'a> {
    /// Eigenvalues of any reduced density operator, in any normalization.
    Eigenvalues(&'a [f64]),
    /// Ideal gas: the eigenvalues of `rho_1` are `<n_k> / N` exactly.
    IdealGas {
        occupations: &'a [f64],
        particle_number: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdlroReport {
    /// Dominant eigenvalue over the trace.
    pub alpha: f64,
    pub threshold: f64,
    pub flag: bool,
    /// Largest few eigenvalue fractions, descending.
    pub spectrum_head: Vec<f64>,
}

/// Flags a dominant eigenvalue carrying at least `threshold` of the trace.
pub fn odlro_detect(spectrum: SpectrumInput<'_>, threshold: f64) -> Result<OdlroReport> {
    let (values, trace) = match spectrum {
        SpectrumInput::Eigenvalues(v) => (v, v.iter().sum::<f64>()),
        SpectrumInput::IdealGas {
            occupations,
            particle_number,
        } => (occupations, particle_number),
    };
    if let Some(&neg) = values.iter().find(|&&l| l < -NEGATIVE_TOLERANCE || l.is_nan()) {
        return Err(Error::NegativeEigenvalue(neg));
    }
    if !values.iter().any(|&l| l > 0.0) || !(trace > 0.0) {
        return Err(Error::InvalidParameter("spectrum has no positive eigenvalue".into()));
    }
    let largest = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let alpha = largest / trace;
    let mut head: Vec<f64> = values.iter().map(|l| l / trace).collect();
    head.sort_by(|a, b| b.total_cmp(a));
    head.truncate(SPECTRUM_HEAD);
    Ok(OdlroReport {
        alpha,
        threshold,
        flag: alpha >= threshold,
        spectrum_head: head,
    })
}
