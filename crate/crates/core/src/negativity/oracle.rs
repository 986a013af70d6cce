//! Eigensolver route to the negativity, independent of the closed forms.
//!
//! `rho_1` is written out in an orthonormal product basis of the two local
//! Fock spaces `span{|0>, e_1..e_M}` (A and B separately), where the `e_j`
//! come from symmetric orthogonalization of the normalized restrictions
//! `|A_k>` (resp. `|B_k>`). In that basis `|A_k>` has coordinates given by
//! column `k` of `G_A^{1/2}`. The operator is then partially transposed
//! on B and diagonalized, one connected block at a time.

use nalgebra::DMatrix;

use super::transpose::{PartialTransposeSpectrum, SparseSymmetric};
use super::{Method, NegativityReport};
use crate::bose_gas::Mode;
use crate::error::{Error, Result};
use crate::geometry::{GramSet, PartitionSpec, Region};
use crate::linalg::spd_sqrt;

/// Gram eigenvalues below this make the orthogonalization ill defined.
pub const GRAM_CONDITIONING_THRESHOLD: f64 = 1e-12;
pub const ORACLE_MAX_MODES: usize = 512;
/// Largest connected block handed to the dense eigensolver.
pub const ORACLE_MAX_COMPONENT: usize = 5000;

fn orthogonalized_coordinates(gram: &DMatrix<f64>, region: Region) -> Result<DMatrix<f64>> {
    let (root, min_eigenvalue) = spd_sqrt(gram);
    if !(min_eigenvalue >= GRAM_CONDITIONING_THRESHOLD) {
        return Err(Error::IllConditionedGram {
            region,
            min_eigenvalue,
            threshold: GRAM_CONDITIONING_THRESHOLD,
            modes: gram.nrows(),
        });
    }
    Ok(root)
}

/// Trace-one `rho_1` on `(1 + M) x (1 + M)` product states, index 0 of each
/// factor being the local vacuum.
pub fn single_particle_density_matrix(occupations: &[f64], grams: &GramSet) -> Result<SparseSymmetric> {
    let m = grams.len();
    if occupations.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: occupations.len(),
        });
    }
    if m > ORACLE_MAX_MODES {
        return Err(Error::RegimeExceeded(format!(
            "eigensolver oracle handles at most {ORACLE_MAX_MODES} modes, got {m}"
        )));
    }
    let total: f64 = occupations.iter().sum();
    if !(total > 0.0) || occupations.iter().any(|&n| !(n >= 0.0)) {
        return Err(Error::InvalidParameter(
            "occupations must be nonnegative with positive sum".into(),
        ));
    }
    let weights: Vec<f64> = occupations.iter().map(|n| n / total).collect();

    let coords_a = orthogonalized_coordinates(&grams.gram_a, Region::A)?;
    let coords_b = orthogonalized_coordinates(&grams.gram_b, Region::B)?;

    // Columns scaled by the amplitude each mode puts into the region.
    let mut wa = coords_a;
    let mut wb = coords_b;
    for (k, w) in weights.iter().enumerate() {
        wa.column_mut(k).scale_mut((w * grams.p_a[k]).sqrt());
        wb.column_mut(k).scale_mut((w * grams.p_b[k]).sqrt());
    }
    let aa = &wa * wa.transpose();
    let bb = &wb * wb.transpose();
    let ab = &wa * wb.transpose();

    let mut rho = SparseSymmetric::new(m + 1, m + 1);
    let vac = rho.index(0, 0);
    let gap_weight: f64 = weights.iter().zip(&grams.p_c).map(|(w, p)| w * p).sum();
    rho.add(vac, vac, gap_weight);
    for i in 0..m {
        let a_i = rho.index(i + 1, 0);
        let b_i = rho.index(0, i + 1);
        for j in 0..m {
            let a_j = rho.index(j + 1, 0);
            let b_j = rho.index(0, j + 1);
            rho.add(a_i, a_j, aa[(i, j)]);
            rho.add(b_i, b_j, bb[(i, j)]);
            rho.add(a_i, b_j, ab[(i, j)]);
            rho.add(b_j, a_i, ab[(i, j)]);
        }
    }
    Ok(rho)
}

/// Negativity of `rho_1^{T_B}` by explicit diagonalization.
pub fn pt_oracle(
    occupations: &[f64],
    modes: &[Mode],
    partition: &PartitionSpec,
    grams: &GramSet,
) -> Result<NegativityReport> {
    if modes.len() != grams.len() {
        return Err(Error::DimensionMismatch {
            expected: grams.len(),
            found: modes.len(),
        });
    }
    if let Some(m) = modes.iter().find(|m| m.dimension() <= partition.axis()) {
        return Err(Error::InvalidParameter(format!(
            "split axis {} missing from {}D mode",
            partition.axis(),
            m.dimension()
        )));
    }
    let rho = single_particle_density_matrix(occupations, grams)?;
    let eigenvalues = rho
        .partial_transpose()
        .component_eigenvalues(ORACLE_MAX_COMPONENT)
        .map_err(|size| {
            Error::RegimeExceeded(format!(
                "partial transpose has a connected block of size {size} > {ORACLE_MAX_COMPONENT}"
            ))
        })?;
    let spectrum = PartialTransposeSpectrum::from_eigenvalues(eigenvalues);
    let mut report = NegativityReport::checked(spectrum.negativity, Method::PtOracle)?;
    report.negative_eigenvalue_count = Some(spectrum.negative_count);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bose_gas::box_modes;
    use crate::geometry::gram_matrices;
    use crate::negativity::{negativity_gapped, negativity_of_density_matrix, ChiVector};

    #[test]
    fn cold_half_box_is_maximal_with_one_negative_eigenvalue() {
        let modes = box_modes(1, 4).unwrap();
        let part = PartitionSpec::half_box();
        let grams = gram_matrices(&modes, &part).unwrap();
        let r = pt_oracle(&[1.0, 0.0, 0.0, 0.0], &modes, &part, &grams).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert_eq!(r.negative_eigenvalue_count, Some(1));
        assert_eq!(r.method, Method::PtOracle);
    }

    #[test]
    fn trace_is_one() {
        let modes = box_modes(2, 3).unwrap();
        let part = PartitionSpec::new(0.3, 0.55).unwrap();
        let grams = gram_matrices(&modes, &part).unwrap();
        let occ: Vec<f64> = (0..modes.len()).map(|k| 1.0 / (k + 1) as f64).collect();
        let rho = single_particle_density_matrix(&occ, &grams).unwrap();
        let trace: f64 = (0..rho.dim()).map(|i| rho.get(i, i)).sum();
        assert!((trace - 1.0).abs() < 1e-13);
    }

    #[test]
    fn sparse_route_matches_full_dense_route() {
        let modes = box_modes(1, 4).unwrap();
        for part in [PartitionSpec::half_box(), PartitionSpec::new(0.3, 0.6).unwrap()] {
            let grams = gram_matrices(&modes, &part).unwrap();
            let occ = [0.5, 0.25, 0.15, 0.1];
            let rho = single_particle_density_matrix(&occ, &grams).unwrap();
            let dense = negativity_of_density_matrix(&rho.to_dense(), 5, 5);
            let sparse = pt_oracle(&occ, &modes, &part, &grams).unwrap();
            assert!((dense.negativity - sparse.value).abs() < 1e-13);
            assert_eq!(Some(dense.negative_count), sparse.negative_eigenvalue_count);
        }
    }

    #[test]
    fn gapped_ground_mode_matches_closed_form() {
        let modes = box_modes(1, 3).unwrap();
        let part = PartitionSpec::new(0.25, 0.75).unwrap();
        let grams = gram_matrices(&modes, &part).unwrap();
        let occ = [1.0, 0.0, 0.0];
        let oracle = pt_oracle(&occ, &modes, &part, &grams).unwrap().value;
        let formula = negativity_gapped(&ChiVector::new(&occ, &grams).unwrap(), &grams)
            .unwrap()
            .value;
        assert!((oracle - formula).abs() < 1e-12);
        assert!((oracle - 0.009_964).abs() < 1e-6);
    }

    #[test]
    fn singular_gram_is_rejected() {
        let modes = box_modes(1, 8).unwrap();
        let part = PartitionSpec::new(0.1, 0.9).unwrap();
        let grams = gram_matrices(&modes, &part).unwrap();
        let err = pt_oracle(&[1.0; 8], &modes, &part, &grams).unwrap_err();
        assert!(
            matches!(err, Error::IllConditionedGram { region: Region::A, .. }),
            "{err}"
        );
    }

    #[test]
    fn too_many_modes() {
        let modes = box_modes(3, 9).unwrap();
        let part = PartitionSpec::half_box();
        let grams = GramSet {
            p_a: vec![0.5; modes.len()],
            p_b: vec![0.5; modes.len()],
            p_c: vec![0.0; modes.len()],
            gram_a: DMatrix::identity(modes.len(), modes.len()),
            gram_b: DMatrix::identity(modes.len(), modes.len()),
        };
        let occ = vec![1.0; modes.len()];
        assert!(matches!(
            pt_oracle(&occ, &modes, &part, &grams),
            Err(Error::RegimeExceeded(_))
        ));
    }
}
