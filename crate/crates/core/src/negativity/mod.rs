//! Negativity of the partially transposed single-particle density matrix.
//!
//! Each trap eigenstate splits across the partition as
//! `sqrt(pA_k) |A_k>|0_B> + sqrt(pB_k) |0_A>|B_k>` plus a piece in the gap C
//! which, once C is traced out, only feeds the vacuum-vacuum projector. The
//! partial transpose of the resulting `rho_1` has a single negative
//! eigenvalue, `(q - sqrt(4 <d|d> + q^2)) / 2`, which for the half-box
//! collapses to `-sqrt(<chi|chi>) / 2`. Values are reported as magnitudes.

mod oracle;
mod transpose;

pub use oracle::{
    pt_oracle, single_particle_density_matrix, GRAM_CONDITIONING_THRESHOLD, ORACLE_MAX_COMPONENT, ORACLE_MAX_MODES,
};
pub use transpose::{
    negativity_of_density_matrix, partial_transpose, PartialTransposeSpectrum, SparseSymmetric,
    NEGATIVE_EIGENVALUE_TOLERANCE,
};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GramSet, PartitionSpec};

/// Largest possible negativity of a single shared particle.
pub const MAX_NEGATIVITY: f64 = 0.5;

const RANGE_SLACK: f64 = 1e-12;

/// Mode weights entering the entangled component of `rho_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiVector {
    /// `c_k = <n_k> / N`, normalized over the given modes.
    pub coefficients: Vec<f64>,
    /// `d_k = c_k sqrt(pA_k pB_k)`.
    pub delta: Vec<f64>,
    /// `q = sum_k c_k pC_k`, the vacuum weight left by the gap.
    pub vacuum_weight: f64,
}

impl ChiVector {
    pub fn new(occupations: &[f64], grams: &GramSet) -> Result<Self> {
        if occupations.len() != grams.len() {
            return Err(Error::DimensionMismatch {
                expected: grams.len(),
                found: occupations.len(),
            });
        }
        if occupations.iter().any(|&n| !(n >= 0.0) || !n.is_finite()) {
            return Err(Error::InvalidParameter(
                "occupations must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = occupations.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter("occupations sum to zero".into()));
        }
        let coefficients: Vec<f64> = occupations.iter().map(|n| n / total).collect();
        Ok(Self::from_coefficients(coefficients, grams))
    }

    fn from_coefficients(coefficients: Vec<f64>, grams: &GramSet) -> Self {
        let delta = coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c * (grams.p_a[k] * grams.p_b[k]).sqrt())
            .collect();
        let vacuum_weight = coefficients.iter().zip(&grams.p_c).map(|(c, p)| c * p).sum();
        ChiVector {
            coefficients,
            delta,
            vacuum_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    AnalyticAdjacent,
    AnalyticGapped,
    AnalyticGroundState,
    PtOracle,
}

/// Where a reported value came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportContext {
    pub temperature: f64,
    pub partition: PartitionSpec,
    pub mode_cutoff: u32,
    pub tail_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityReport {
    pub value: f64,
    pub method: Method,
    /// Only the eigensolver route counts eigenvalues.
    pub negative_eigenvalue_count: Option<usize>,
    pub context: Option<ReportContext>,
}

impl NegativityReport {
    /// Checks `value` lies in `[0, 1/2]` (up to rounding) and clamps it there.
    pub(crate) fn checked(value: f64, method: Method) -> Result<Self> {
        if !(-RANGE_SLACK..=MAX_NEGATIVITY + RANGE_SLACK).contains(&value) {
            return Err(Error::InvariantViolation(format!(
                "{method:?} negativity {value} outside [0, 1/2]"
            )));
        }
        Ok(NegativityReport {
            value: value.clamp(0.0, MAX_NEGATIVITY),
            method,
            negative_eigenvalue_count: None,
            context: None,
        })
    }

    pub fn with_context(mut self, context: ReportContext) -> Self {
        self.context = Some(context);
        self
    }
}

fn weighted_hadamard_form(weights: &[f64], gram_a: &DMatrix<f64>, gram_b: &DMatrix<f64>) -> f64 {
    let n = weights.len();
    let mut sum = 0.0;
    for l in 0..n {
        let wl = weights[l];
        if wl == 0.0 {
            continue;
        }
        for k in 0..n {
            let g = gram_a[(k, l)] * gram_b[(k, l)];
            if g != 0.0 {
                sum += weights[k] * wl * g;
            }
        }
    }
    sum
}

/// `<chi|chi> = sum_{k,l} c_k c_l gramA_kl gramB_kl`, in `[0, 1]`.
pub fn chi_norm_squared(chi: &ChiVector, grams: &GramSet) -> Result<f64> {
    if chi.len() != grams.len() {
        return Err(Error::DimensionMismatch {
            expected: grams.len(),
            found: chi.len(),
        });
    }
    let value = weighted_hadamard_form(&chi.coefficients, &grams.gram_a, &grams.gram_b);
    if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&value) {
        return Err(Error::InvariantViolation(format!("<chi|chi> = {value} outside [0, 1]")));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `<d|d> = sum_{k,l} d_k d_l gramA_kl gramB_kl`.
pub fn delta_norm_squared(chi: &ChiVector, grams: &GramSet) -> Result<f64> {
    if chi.len() != grams.len() {
        return Err(Error::DimensionMismatch {
            expected: grams.len(),
            found: chi.len(),
        });
    }
    Ok(weighted_hadamard_form(&chi.delta, &grams.gram_a, &grams.gram_b).max(0.0))
}

/// `sqrt(<chi|chi>) / 2` for a partition without a gap.
///
/// The coefficients are taken as `2 sqrt(pA_k pB_k) c_k`, which is exactly
/// `c_k` on the half-box and keeps the formula valid for lopsided splits.
pub fn negativity_adjacent(chi: &ChiVector, grams: &GramSet) -> Result<NegativityReport> {
    let max_gap = grams.max_gap_weight();
    if max_gap > RANGE_SLACK {
        return Err(Error::GappedPartition {
            max_gap_weight: max_gap,
        });
    }
    let balanced = ChiVector {
        coefficients: chi.delta.iter().map(|d| 2.0 * d).collect(),
        delta: chi.delta.clone(),
        vacuum_weight: chi.vacuum_weight,
    };
    let norm = chi_norm_squared(&balanced, grams)?;
    NegativityReport::checked(0.5 * norm.sqrt(), Method::AnalyticAdjacent)
}

/// `(sqrt(4 <d|d> + q^2) - q) / 2`, evaluated as `2 <d|d> / (sqrt(4 <d|d> + q^2) + q)`.
pub fn negativity_gapped(chi: &ChiVector, grams: &GramSet) -> Result<NegativityReport> {
    let dd = delta_norm_squared(chi, grams)?;
    let q = chi.vacuum_weight;
    let value = if dd == 0.0 {
        0.0
    } else {
        2.0 * dd / ((4.0 * dd + q * q).sqrt() + q)
    };
    NegativityReport::checked(value, Method::AnalyticGapped)
}

/// Zero-temperature negativity `(p0C / 2) (sqrt(1 + 4 p0A p0B / p0C^2) - 1)`,
/// continued to `sqrt(p0A p0B)` at `p0C = 0`.
pub fn negativity_ground_state_gapped(p0a: f64, p0b: f64, p0c: f64) -> Result<NegativityReport> {
    if [p0a, p0b, p0c].iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "region probabilities must be nonnegative, got ({p0a}, {p0b}, {p0c})"
        )));
    }
    let sum = p0a + p0b + p0c;
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "region probabilities sum to {sum}, expected 1"
        )));
    }
    let value = if p0c == 0.0 {
        (p0a * p0b).sqrt()
    } else {
        0.5 * p0c * ((1.0 + 4.0 * p0a * p0b / (p0c * p0c)).sqrt() - 1.0)
    };
    NegativityReport::checked(value, Method::AnalyticGroundState)
}

/// Picks the adjacent or gapped closed form according to the partition.
pub fn negativity_analytic(chi: &ChiVector, grams: &GramSet, partition: &PartitionSpec) -> Result<NegativityReport> {
    if partition.is_adjacent() {
        negativity_adjacent(chi, grams)
    } else {
        negativity_gapped(chi, grams)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bose_gas::box_modes;
    use crate::geometry::{gram_matrices, partition_probabilities};
    use std::f64::consts::PI;

    fn half_box_grams(cutoff: u32) -> GramSet {
        gram_matrices(&box_modes(1, cutoff).unwrap(), &PartitionSpec::half_box()).unwrap()
    }

    #[test]
    fn single_mode_chi_is_one() {
        let grams = half_box_grams(1);
        let chi = ChiVector::new(&[3.0], &grams).unwrap();
        assert_eq!(chi_norm_squared(&chi, &grams).unwrap(), 1.0);
    }

    #[test]
    fn ground_state_half_box_is_maximal() {
        let grams = half_box_grams(4);
        let chi = ChiVector::new(&[1.0, 0.0, 0.0, 0.0], &grams).unwrap();
        assert!((chi_norm_squared(&chi, &grams).unwrap() - 1.0).abs() < 1e-15);
        let r = negativity_adjacent(&chi, &grams).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert_eq!(r.method, Method::AnalyticAdjacent);
    }

    #[test]
    fn two_mode_half_box_fixture() {
        let grams = half_box_grams(2);
        let chi = ChiVector::new(&[0.8, 0.2], &grams).unwrap();
        let g = 8.0 / (3.0 * PI);
        let expected = 0.8 * 0.8 + 0.2 * 0.2 - 2.0 * 0.8 * 0.2 * g * g;
        let norm = chi_norm_squared(&chi, &grams).unwrap();
        assert!((norm - expected).abs() < 1e-14);
        assert!((norm - 0.4494).abs() < 1e-4);
        let neg = negativity_adjacent(&chi, &grams).unwrap().value;
        assert!((neg - 0.5 * expected.sqrt()).abs() < 1e-14);
        assert!((neg - 0.335_20).abs() < 1e-5);
    }

    #[test]
    fn orthogonal_parts_give_parseval_value() {
        // Odd box modes have mutually orthogonal halves on the half-box.
        let modes = box_modes(1, 7).unwrap();
        let odd: Vec<_> = modes.into_iter().filter(|m| m.quantum_numbers[0] % 2 == 1).collect();
        let grams = gram_matrices(&odd, &PartitionSpec::half_box()).unwrap();
        assert!((&grams.gram_a - DMatrix::identity(4, 4)).amax() < 1e-14);
        let chi = ChiVector::new(&[1.0; 4], &grams).unwrap();
        let neg = negativity_adjacent(&chi, &grams).unwrap().value;
        assert!((neg - 0.5 * (0.25f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn adjacent_formula_rejects_gap() {
        let grams = gram_matrices(&box_modes(1, 2).unwrap(), &PartitionSpec::new(0.3, 0.6).unwrap()).unwrap();
        let chi = ChiVector::new(&[1.0, 1.0], &grams).unwrap();
        assert!(matches!(
            negativity_adjacent(&chi, &grams),
            Err(Error::GappedPartition { .. })
        ));
    }

    #[test]
    fn gapped_reduces_to_adjacent() {
        let grams = half_box_grams(3);
        let chi = ChiVector::new(&[0.6, 0.3, 0.1], &grams).unwrap();
        assert_eq!(chi.vacuum_weight, 0.0);
        let a = negativity_adjacent(&chi, &grams).unwrap().value;
        let g = negativity_gapped(&chi, &grams).unwrap().value;
        assert!((a - g).abs() < 1e-15);
    }

    #[test]
    fn gapped_ground_mode_fixture() {
        let part = PartitionSpec::new(0.25, 0.75).unwrap();
        let grams = gram_matrices(&box_modes(1, 3).unwrap(), &part).unwrap();
        let chi = ChiVector::new(&[1.0, 0.0, 0.0], &grams).unwrap();
        let value = negativity_gapped(&chi, &grams).unwrap().value;
        let pa = 0.25 - 1.0 / (2.0 * PI);
        let pc = 1.0 - 2.0 * pa;
        let expected = 0.5 * pc * ((1.0 + 4.0 * pa * pa / (pc * pc)).sqrt() - 1.0);
        assert!((value - expected).abs() < 1e-15);
        assert!((value - 0.009_964).abs() < 1e-6);
    }

    #[test]
    fn no_coherence_no_negativity() {
        let grams = gram_matrices(&box_modes(1, 2).unwrap(), &PartitionSpec::new(0.3, 0.6).unwrap()).unwrap();
        let chi = ChiVector {
            coefficients: vec![0.5, 0.5],
            delta: vec![0.0, 0.0],
            vacuum_weight: 0.4,
        };
        assert_eq!(negativity_gapped(&chi, &grams).unwrap().value, 0.0);
    }

    #[test]
    fn ground_state_closed_form() {
        let pa = 0.25 - 1.0 / (2.0 * PI);
        let r = negativity_ground_state_gapped(pa, pa, 1.0 - 2.0 * pa).unwrap();
        assert!((r.value - 0.009_964).abs() < 1e-6);
        assert_eq!(r.method, Method::AnalyticGroundState);
        assert!((negativity_ground_state_gapped(0.5, 0.5, 0.0).unwrap().value - 0.5).abs() < 1e-15);
        let near = negativity_ground_state_gapped(0.5 - 5e-7, 0.5 - 5e-7, 1e-6)
            .unwrap()
            .value;
        assert!((near - 0.5).abs() < 1e-6);
        assert_eq!(negativity_ground_state_gapped(0.0, 0.4, 0.6).unwrap().value, 0.0);
        assert!(negativity_ground_state_gapped(0.3, 0.3, 0.3).is_err());
    }

    #[test]
    fn ground_state_pair_agrees_for_any_gap() {
        let modes = box_modes(1, 2).unwrap();
        for (a, b) in [(0.1, 0.9), (0.2, 0.5), (0.45, 0.55), (0.3, 0.31)] {
            let part = PartitionSpec::new(a, b).unwrap();
            let grams = gram_matrices(&modes, &part).unwrap();
            let chi = ChiVector::new(&[1.0, 0.0], &grams).unwrap();
            let p = partition_probabilities(&modes[0], &part).unwrap();
            let x = negativity_gapped(&chi, &grams).unwrap().value;
            let y = negativity_ground_state_gapped(p.a, p.b, p.c).unwrap().value;
            assert!((x - y).abs() < 1e-12, "a={a} b={b}: {x} vs {y}");
        }
    }

    #[test]
    fn chi_dimension_mismatch() {
        let grams = half_box_grams(2);
        assert!(matches!(
            ChiVector::new(&[1.0, 2.0, 3.0], &grams),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        assert!(NegativityReport::checked(0.6, Method::AnalyticGapped).is_err());
        assert!(NegativityReport::checked(-0.1, Method::AnalyticGapped).is_err());
        assert_eq!(
            NegativityReport::checked(0.5 + 1e-14, Method::AnalyticGapped)
                .unwrap()
                .value,
            0.5
        );
    }
}
