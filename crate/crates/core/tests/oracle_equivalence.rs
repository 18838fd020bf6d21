use purify_core::oracle::{sample_product_zeros, ProductZeros};
use purify_core::range::classify_2d_subspace;
use purify_core::sample::{constructed_plane, random_subspace, PlaneKind};
use purify_core::tol::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agree(sub: &purify_core::range::Subspace<f64>) -> (ProductZeros, ProductZeros) {
    let class = classify_2d_subspace(sub, &Tolerances::default()).unwrap();
    let expected = ProductZeros::of_class(&class).unwrap();
    (expected, sample_product_zeros(sub, 48).unwrap())
}

#[test]
fn random_planes_have_two_rays() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let sub = random_subspace::<f64, _>(2, &mut rng);
        let (expected, found) = agree(&sub);
        assert_eq!(expected, ProductZeros::Finite(2));
        assert_eq!(found, expected);
    }
}

#[test]
fn constructed_planes_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for kind in [PlaneKind::Continuum, PlaneKind::SingleRay, PlaneKind::TwoRays] {
        for _ in 0..20 {
            let sub = constructed_plane::<f64, _>(kind, &mut rng);
            let (expected, found) = agree(&sub);
            assert_eq!(found, expected, "{kind:?}");
        }
    }
}
