use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use odlro_core::bose_gas::{box_modes, ThermalState};
use odlro_core::fock_extraction::{
    analytic_extraction_negativity, apply_coupling, build_initial_state, extracted_state, Configuration,
};
use odlro_core::geometry::{gram_matrices, partition_probabilities, PartitionSpec};
use odlro_core::negativity::{chi_norm_squared, negativity_analytic, pt_oracle, ChiVector};
use odlro_core::odlro::{odlro_detect, rho1_position, SpectrumInput};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coupling_preserves_norm(g in -20.0f64..20.0) {
        let s = apply_coupling(&build_initial_state(), g);
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coupling_composes(g1 in -5.0f64..5.0, g2 in -5.0f64..5.0) {
        let s0 = build_initial_state();
        let two = apply_coupling(&apply_coupling(&s0, g1), g2);
        let one = apply_coupling(&s0, g1 + g2);
        for c in Configuration::ALL {
            prop_assert!((two.amplitude(c) - one.amplitude(c)).norm() < 1e-12);
        }
    }

    #[test]
    fn extraction_oracle_agrees(g in 0.0f64..6.3) {
        let oracle = extracted_state(g).negativity().negativity;
        prop_assert!((oracle - analytic_extraction_negativity(g)).abs() < 1e-12);
        prop_assert!((0.0..=0.5 + 1e-15).contains(&oracle));
    }

    #[test]
    fn probabilities_sum_to_one(n in 1u32..30, a in 0.0f64..1.0, w in 0.0f64..1.0) {
        let b = a + w * (1.0 - a);
        let p = partition_probabilities(&odlro_core::bose_gas::Mode::box_mode(vec![n]).unwrap(), &PartitionSpec::new(a, b).unwrap()).unwrap();
        prop_assert!((p.a + p.b + p.c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_closed_form_on_1d_gas(
        a in 0.2f64..0.5,
        right in 0.2f64..0.5,
        adjacent in any::<bool>(),
        t in 1.0f64..500.0,
    ) {
        let b = if adjacent { a } else { 1.0 - right };
        let part = PartitionSpec::new(a, b).unwrap();
        let modes = box_modes(1, 4).unwrap();
        let grams = gram_matrices(&modes, &part).unwrap();
        let state = ThermalState::grand_canonical_truncated(&modes, 50.0, t).unwrap();
        let chi = ChiVector::new(&state.occupations, &grams).unwrap();
        let norm = chi_norm_squared(&chi, &grams).unwrap();
        prop_assert!((0.0..=1.0).contains(&norm));
        let formula = negativity_analytic(&chi, &grams, &part).unwrap().value;
        let oracle = pt_oracle(&state.occupations, &modes, &part, &grams).unwrap();
        prop_assert!((formula - oracle.value).abs() < 1e-9, "{formula} vs {}", oracle.value);
        prop_assert_eq!(oracle.negative_eigenvalue_count, Some(1));
    }

    #[test]
    fn rho1_obeys_cauchy_schwarz(x in 0.0f64..1.0, y in 0.0f64..1.0, t in 1.0f64..200.0) {
        let modes = box_modes(1, 8).unwrap();
        let occ = ThermalState::grand_canonical_truncated(&modes, 20.0, t).unwrap().occupations;
        let off = rho1_position(&occ, &modes, &[x], &[y]);
        let bound = (rho1_position(&occ, &modes, &[x], &[x]) * rho1_position(&occ, &modes, &[y], &[y])).sqrt();
        prop_assert!(off.abs() <= bound + 1e-12);
    }

    #[test]
    fn detector_alpha_is_scale_free(v in prop::collection::vec(0.0f64..10.0, 1..20), s in 0.1f64..100.0) {
        prop_assume!(v.iter().any(|&x| x > 0.0));
        let scaled: Vec<f64> = v.iter().map(|x| x * s).collect();
        let a = odlro_detect(SpectrumInput::Eigenvalues(&v), 0.1).unwrap().alpha;
        let b = odlro_detect(SpectrumInput::Eigenvalues(&scaled), 0.1).unwrap().alpha;
        prop_assert!((a - b).abs() < 1e-12);
    }
}
