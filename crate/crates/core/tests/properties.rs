mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn modulus_never_exceeds_total_mass(a in atoms(), alpha in 0.1f64..3.0, theta in -200.0f64..200.0) {
        triangle_atoms(&a, alpha, theta)?;
    }

    #[test]
    fn derivative_matches_differences_and_bound(a in atoms(), alpha in 0.1f64..3.0, theta in -50.0f64..50.0) {
        derivative_bound(&a, alpha, theta)?;
    }

    #[test]
    fn exp_kernel_derivative_bound(lambda in 0.2f64..5.0, alpha in 0.3f64..3.0, theta in -20.0f64..20.0) {
        kernel_derivative_bound(lambda, alpha, theta)?;
    }

    #[test]
    fn verdicts_invariant_under_scaling_and_powers(case in fast_case(), c in 0.01f64..100.0, g in 0.25f64..4.0) {
        scaling_invariance(&case, c, g)?;
    }

    #[test]
    fn log_periodic_tail_identity(spec in counterexample_spec(), x in 1.0f64..1e8) {
        log_periodicity(&spec, x)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn law_modulus_bounded(d in continuous_law(), theta in -40.0f64..40.0) {
        triangle_law(&d, theta)?;
    }

    #[test]
    fn transform_is_conjugate_symmetric(d in continuous_law(), theta in 0.0f64..40.0) {
        conjugate_symmetry(&d, theta)?;
    }

    #[test]
    fn fast_path_matches_scan(case in fast_case()) {
        fast_path_agrees_with_scan(&case)?;
    }
}
