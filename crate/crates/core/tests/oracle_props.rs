mod common;

use common::*;
use proptest::prelude::*;
use purify_core::linalg::hermitian_eig;
use purify_core::oracle::{search_best_protocol, SearchConfig};
use purify_core::protocol::optimal_probability;
use purify_core::qstate::{schmidt_decompose, DensityMatrix4Q};
use purify_core::sample;

fn small(seed: u64) -> SearchConfig {
    SearchConfig { seed, restarts: 3, iterations_per_restart: 300, ..Default::default() }
}

/// Deviation of Schmidt coefficients from the nearest uniform rank-2 or rank-4 vector.
fn schmidt_gap(c: &[f64]) -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let two = (c[0] - h).abs().max((c[1] - h).abs()).max(c[2]).max(c[3]);
    let four = c.iter().fold(0.0f64, |m, v| m.max((v - 0.5).abs()));
    two.min(four)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn identical_config_gives_identical_result(seed in any::<u64>(), cfg_seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (rho, sigma) = (w_state(&w_form(&mut rng)), sample::random_density(2, &mut rng));
        let cfg = SearchConfig { iterations_per_restart: 80, ..small(cfg_seed) };
        prop_assert_eq!(search_best_protocol(&rho, &sigma, &cfg).unwrap(), search_best_protocol(&rho, &sigma, &cfg).unwrap());
    }

    #[test]
    fn reported_outcome_survives_dense_reverification(seed in any::<u64>(), w_partner in any::<bool>()) {
        let mut rng = rng(seed);
        let fa = w_form(&mut rng);
        let fb = w_form(&mut rng);
        let rho = w_state(&fa);
        let sigma = if w_partner { w_state(&fb) } else { sample::random_density(2, &mut rng) };
        let cfg = small(seed);
        let r = search_best_protocol(&rho, &sigma, &cfg).unwrap();
        let out = DensityMatrix4Q::product(&rho, &sigma).apply_local(&r.best_operators.0, &r.best_operators.1, 1e-9).unwrap();
        let t = out.trace();
        prop_assert!((t - r.best_probability).abs() <= 1e-9);
        prop_assert!(r.best_operators.0.operator_norm() <= 1.0 + 1e-12);
        prop_assert!(r.best_operators.1.operator_norm() <= 1.0 + 1e-12);
        let e = hermitian_eig(&out.matrix().scale_real(1.0 / t), 1e-9).unwrap();
        let purity: f64 = e.values.iter().map(|l| l * l).sum();
        prop_assert!((purity - r.output_purity).abs() <= 1e-8);
        if r.feasible {
            prop_assert!(purity >= 1.0 - cfg.purity_eps - 1e-9);
            let top = &e.vectors[0];
            let c = schmidt_decompose(top, (4, 4), 1e-8).unwrap().coefficients;
            prop_assert!(schmidt_gap(&c) <= cfg.entanglement_eps + 1e-8);
            if w_partner {
                prop_assert!(r.best_probability <= optimal_probability(&fa, &fb) + 1e-6);
            }
        }
    }
}
