#![allow(dead_code)]

use purify_core::canonical::{reconstruct, WCanonicalForm};
use purify_core::linalg::CMatrix;
use purify_core::qstate::{DensityMatrix2Q, PureState2Q};
use purify_core::sample;
use purify_core::tol::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tols() -> Tolerances<f64> {
    Tolerances::default()
}

pub fn unitaries(rng: &mut ChaCha8Rng) -> (CMatrix<f64>, CMatrix<f64>) {
    (sample::random_unitary(2, rng), sample::random_unitary(2, rng))
}

/// W-class form in the default fleet range, in random local frames.
pub fn w_form(rng: &mut ChaCha8Rng) -> WCanonicalForm<f64> {
    sample::random_w_form((0.05, 0.95), 0.01, rng)
}

pub fn w_state(form: &WCanonicalForm<f64>) -> DensityMatrix2Q<f64> {
    reconstruct(form, &tols()).expect("valid form")
}

/// `p|Φ⁺⟩⟨Φ⁺| + (1−p)|00⟩⟨00|`.
pub fn bell_mixture(p: f64) -> DensityMatrix2Q<f64> {
    DensityMatrix2Q::mixture(&[(p, PureState2Q::phi_plus()), (1.0 - p, PureState2Q::basis(0))], 1e-12)
        .expect("valid mixture")
}
