//! Seeded random states, unitaries, subspaces and canonical forms for tests
//! and fleets.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::canonical::WCanonicalForm;
use crate::linalg::{self, CMatrix};
use crate::qstate::{DensityMatrix2Q, PureState2Q, Qubit1State};
use crate::range::Subspace;
use crate::scalar::{Real, C};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random unit vector in `C^dim`.
pub fn random_ket<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C<T>> {
    loop {
        let v: Vec<C<T>> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Some(v) = linalg::normalized(&v) {
            return v;
        }
    }
}

pub fn random_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Qubit1State<T> {
    Qubit1State::from_unnormalized(&random_ket::<T, R>(2, rng)).expect("nonzero")
}

pub fn random_pure<T: Real, R: Rng + ?Sized>(rng: &mut R) -> PureState2Q<T> {
    PureState2Q::from_unnormalized(&random_ket::<T, R>(4, rng)).expect("nonzero")
}

/// Haar-random unitary: Gram-Schmidt on a Ginibre matrix, column by column.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C<T>> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj = linalg::inner(q, &v);
                linalg::axpy(-proj, q, &mut v);
            }
        }
        if linalg::norm(&v) > T::lit(1e-6) {
            cols.push(linalg::normalized(&v).expect("nonzero"));
        }
    }
    CMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random rank-`rank` density matrix with Haar eigenvectors and uniform
/// Dirichlet weights.
pub fn random_density<T: Real, R: Rng + ?Sized>(rank: usize, rng: &mut R) -> DensityMatrix2Q<T> {
    let u = random_unitary::<T, R>(4, rng);
    let w: Vec<f64> = (0..rank).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    let mut m = CMatrix::zeros(4, 4);
    for (k, wk) in w.iter().enumerate() {
        m = &m + &CMatrix::projector(&u.column(k)).scale_real(T::lit(wk / total));
    }
    DensityMatrix2Q::new(m.hermitian_part(), T::lit(1e-9)).expect("valid by construction")
}

/// Span of `dim` Haar-random vectors in `C²⊗C²`.
pub fn random_subspace<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Subspace<T> {
    loop {
        let vs: Vec<Vec<C<T>>> = (0..dim).map(|_| random_ket(4, rng)).collect();
        if let Some(s) = Subspace::spanned_by(&vs, T::lit(1e-9)) {
            if s.dim() == dim {
                return s;
            }
        }
    }
}

/// Shape of a constructed two-dimensional subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    /// `span{e⊗f, e⊗g}` or `span{e⊗f, g⊗f}`: every member is a product.
    Continuum,
    /// `span{e⊗f, a e⊥⊗f + b e⊗f⊥ + c e⊗f}`: one double root.
    SingleRay,
    /// `span{e⊗f, g⊗h}` with `e ≠ g`, `f ≠ h`.
    TwoRays,
}

/// Plane with a prescribed product-ray structure, in random local frames.
pub fn constructed_plane<T: Real, R: Rng + ?Sized>(kind: PlaneKind, rng: &mut R) -> Subspace<T> {
    let (e, f) = (random_ket::<T, R>(2, rng), random_ket::<T, R>(2, rng));
    let perp = |v: &[C<T>]| vec![-v[1].conj(), v[0].conj()];
    let first = linalg::kron_vec(&e, &f);
    let second = match kind {
        PlaneKind::Continuum => {
            let g = random_ket::<T, R>(2, rng);
            if rng.random::<bool>() {
                linalg::kron_vec(&e, &g)
            } else {
                linalg::kron_vec(&g, &f)
            }
        }
        PlaneKind::SingleRay => {
            let coeffs = random_ket::<T, R>(3, rng);
            let mut v = linalg::kron_vec(&perp(&e), &f);
            v.iter_mut().for_each(|z| *z = *z * coeffs[0]);
            linalg::axpy(coeffs[1], &linalg::kron_vec(&e, &perp(&f)), &mut v);
            linalg::axpy(coeffs[2], &first, &mut v);
            v
        }
        PlaneKind::TwoRays => {
            let (g, h) = (random_ket::<T, R>(2, rng), random_ket::<T, R>(2, rng));
            linalg::kron_vec(&g, &h)
        }
    };
    Subspace::spanned_by(&[first, second], T::lit(1e-9)).expect("independent spanning vectors")
}

/// Parameters of a random W-class form: `p` uniform in `p_range`, `(α, β, γ)`
/// uniform on the positive octant of the unit sphere with `αβ > min_ab`,
/// and Haar-random local unitaries.
pub fn random_w_form<T: Real, R: Rng + ?Sized>(p_range: (f64, f64), min_ab: f64, rng: &mut R) -> WCanonicalForm<T> {
    let p = rng.random_range(p_range.0..p_range.1);
    let (a, b, g) = loop {
        let v: [f64; 3] = [
            rng.sample::<f64, _>(StandardNormal).abs(),
            rng.sample::<f64, _>(StandardNormal).abs(),
            rng.sample::<f64, _>(StandardNormal).abs(),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let (a, b, g) = (v[0] / n, v[1] / n, v[2] / n);
        if a * b > min_ab {
            break (a, b, g);
        }
    };
    WCanonicalForm::from_params(T::lit(p), T::lit(a), T::lit(b), T::lit(g))
        .with_unitaries(random_unitary(2, rng), random_unitary(2, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [2, 4] {
            let u = random_unitary::<f64, _>(dim, &mut rng);
            assert!(linalg::unitarity_defect(&u) < 1e-13);
        }
    }

    #[test]
    fn densities_have_requested_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for rank in 1..=4 {
            let rho = random_density::<f64, _>(rank, &mut rng);
            assert_eq!(rho.eig().numerical_rank(1e-9), rank);
        }
    }

    #[test]
    fn w_forms_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_w_form::<f64, _>((0.05, 0.95), 0.01, &mut rng);
            assert!(f.alpha * f.beta > 0.01);
            assert!(f.p >= 0.05 && f.p < 0.95);
            let n = f.alpha.powi(2) + f.beta.powi(2) + f.gamma.powi(2);
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
