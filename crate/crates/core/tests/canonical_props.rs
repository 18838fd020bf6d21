mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use purify_core::canonical::{reconstruct, w_canonicalize, WCanonicalForm};
use purify_core::linalg::hermitian_eig;
use purify_core::range::classify_range;

/// `(α, β, γ)` on the positive octant from two angles.
fn octant() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.05f64..1.52, 0.0f64..1.45).prop_map(|(t, s)| {
        let (a, b) = (t.cos(), t.sin());
        (a * s.cos(), b * s.cos(), s.sin())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn parameters_survive_local_unitaries(seed in any::<u64>(), p in 0.05f64..0.95, (a, b, g) in octant()) {
        prop_assume!(a * b > 0.01);
        let mut rng = rng(seed);
        let (ua, ub) = unitaries(&mut rng);
        let form = WCanonicalForm::from_params(p, a, b, g).with_unitaries(ua, ub);
        let rho = reconstruct(&form, &tols()).unwrap();
        let (va, vb) = unitaries(&mut rng);
        let back = w_canonicalize(&rho.local_unitary(&va, &vb), &tols()).unwrap();
        for (x, y) in [(back.p, p), (back.alpha, a), (back.beta, b), (back.gamma, g)] {
            prop_assert!((x - y).abs() <= 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn peel_is_extremal(seed in any::<u64>(), excess in 1e-6f64..0.5) {
        let mut rng = rng(seed);
        let rho = w_state(&w_form(&mut rng));
        let form = w_canonicalize(&rho, &tols()).unwrap();
        let mut over = form.canonical_matrix();
        over[(0, 0)] -= Complex64::new(1.0 - form.p + excess, 0.0);
        prop_assert!(hermitian_eig(&over, 1e-9).unwrap().min_value() < 0.0);
    }

    #[test]
    fn reconstruction_is_w_class(p in 0.01f64..0.99, (a, b, g) in octant()) {
        prop_assume!(a * b > 1e-3);
        let rho = reconstruct(&WCanonicalForm::from_params(p, a, b, g), &tols()).unwrap();
        prop_assert!(classify_range(&rho, &tols()).unwrap().is_w_class());
    }
}
