mod common;

use common::*;
use proptest::prelude::*;
use purify_core::linalg::hermitian_eig;
use purify_core::qstate::{
    min_partial_transpose_eigenvalue, product_determinant, reshape_to_matrix, schmidt_decompose, validate_density,
    DensityMatrix4Q, System, SystemOrder,
};
use purify_core::sample;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_reconstruction_validates_to_itself(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = rng(seed);
        let rho = sample::random_density::<f64, _>(rank, &mut rng);
        let rebuilt = validate_density(rho.eig().reconstruct(), 1e-9).unwrap();
        prop_assert!((rebuilt.matrix() - rho.matrix()).max_abs() <= 1e-10);
    }

    #[test]
    fn schmidt_coefficients_are_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let psi = sample::random_pure::<f64, _>(&mut rng);
        let (ua, ub) = unitaries(&mut rng);
        let before = schmidt_decompose(psi.as_slice(), (2, 2), 1e-9).unwrap().coefficients;
        let after = schmidt_decompose(psi.local_unitary(&ua, &ub).as_slice(), (2, 2), 1e-9).unwrap().coefficients;
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn determinant_is_product_of_schmidt_coefficients(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let psi = sample::random_pure::<f64, _>(&mut rng);
        let (ua, ub) = unitaries(&mut rng);
        let c = schmidt_decompose(psi.as_slice(), (2, 2), 1e-9).unwrap().coefficients;
        let det = product_determinant(psi.as_slice()).norm();
        prop_assert!((det - c[0] * c[1]).abs() <= 1e-12);
        let moved = purify_core::qstate::det2(&reshape_to_matrix(&psi.local_unitary(&ua, &ub))).norm();
        prop_assert!((moved - det).abs() <= 1e-12);
    }

    #[test]
    fn permutation_preserves_spectrum(seed in any::<u64>(), perm in Just([System::A, System::B, System::APrime, System::BPrime]).prop_shuffle()) {
        let mut rng = rng(seed);
        let rho = sample::random_density::<f64, _>(2, &mut rng);
        let sigma = sample::random_density::<f64, _>(3, &mut rng);
        let joint = DensityMatrix4Q::product(&rho, &sigma);
        let moved = joint.permute_systems(SystemOrder::new(perm).unwrap());
        let a = hermitian_eig(joint.matrix(), 1e-9).unwrap().values;
        let b = hermitian_eig(moved.matrix(), 1e-9).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn partial_transpose_sign_is_local_unitary_invariant(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = rng(seed);
        let rho = sample::random_density::<f64, _>(rank, &mut rng);
        let (ua, ub) = unitaries(&mut rng);
        let before = min_partial_transpose_eigenvalue(&rho);
        let after = min_partial_transpose_eigenvalue(&rho.local_unitary(&ua, &ub));
        prop_assume!(before.abs() > 1e-9);
        prop_assert_eq!(before < 0.0, after < 0.0);
    }
}
