//! Normal form `ρ = p|Φ⟩⟨Φ| + (1−p)|00⟩⟨00|`, `Φ = α|01⟩ + β|10⟩ + γ|00⟩`,
//! for rank-two states whose range holds exactly one product ray.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, CMatrix};
use crate::qstate::{DensityMatrix2Q, PureState2Q, Qubit1State};
use crate::range::{classify_range, RangeClass};
use crate::scalar::{cis, czero, Real, C};
use crate::tol::Tolerances;

/// Local unitaries and parameters with
/// `(u_a⊗u_b) ρ (u_a⊗u_b)† = p|Φ⟩⟨Φ| + (1−p)|00⟩⟨00|`.
///
/// `α`, `β`, `γ` are real with `α, β > 0` and `γ ≥ 0`; all amplitude phases
/// are absorbed into diagonal phase factors of `u_a`, `u_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct WCanonicalForm<T: Real> {
    pub u_a: CMatrix<T>,
    pub u_b: CMatrix<T>,
    pub p: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    /// Set when a tiny `|γ|` was rounded to zero during canonicalization.
    pub gamma_snapped: bool,
}

impl<T: Real> WCanonicalForm<T> {
    /// Form with identity local unitaries.
    pub fn from_params(p: T, alpha: T, beta: T, gamma: T) -> Self {
        Self { u_a: CMatrix::identity(2), u_b: CMatrix::identity(2), p, alpha, beta, gamma, gamma_snapped: false }
    }

    pub fn with_unitaries(mut self, u_a: CMatrix<T>, u_b: CMatrix<T>) -> Self {
        self.u_a = u_a;
        self.u_b = u_b;
        self
    }

    pub fn validate(&self, tols: &Tolerances<T>) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        let (p, a, b, g) = (self.p, self.alpha, self.beta, self.gamma);
        if ![p, a, b, g].iter().all(|x| x.is_finite()) {
            return bad("non-finite parameter".into());
        }
        if !(p > T::zero() && p < T::one()) {
            return bad(format!("p = {p} outside (0, 1)"));
        }
        if !(a > T::zero() && b > T::zero()) {
            return bad(format!("alpha = {a}, beta = {b} must be positive"));
        }
        if g < T::zero() {
            return bad(format!("gamma = {g} must be nonnegative"));
        }
        let norm = a * a + b * b + g * g;
        if (norm - T::one()).abs() > tols.validation {
            return bad(format!("alpha² + beta² + gamma² = {norm}"));
        }
        for (name, u) in [("u_a", &self.u_a), ("u_b", &self.u_b)] {
            if u.rows() != 2 || u.cols() != 2 {
                return bad(format!("{name} is not 2x2"));
            }
            let defect = linalg::unitarity_defect(u);
            if defect > tols.reconstruction {
                return bad(format!("{name} not unitary (defect {:e})", defect.as_f64()));
            }
        }
        Ok(())
    }

    /// `Φ = γ|00⟩ + α|01⟩ + β|10⟩` in the canonical frame.
    pub fn phi(&self) -> PureState2Q<T> {
        let r = |x: T| Complex::new(x, T::zero());
        PureState2Q::from_unnormalized(&[r(self.gamma), r(self.alpha), r(self.beta), czero()]).expect("alpha > 0")
    }

    /// `p|Φ⟩⟨Φ| + (1−p)|00⟩⟨00|` in the canonical frame.
    pub fn canonical_matrix(&self) -> CMatrix<T> {
        let phi = self.phi().projector().scale_real(self.p);
        let zero = PureState2Q::<T>::basis(0).projector().scale_real(T::one() - self.p);
        &phi + &zero
    }

    /// `u_a ⊗ u_b`.
    pub fn local_unitary(&self) -> CMatrix<T> {
        self.u_a.kron(&self.u_b)
    }

    /// Frobenius distance between the reconstructed state and `state`.
    pub fn residual(&self, state: &DensityMatrix2Q<T>) -> T {
        let u = self.local_unitary();
        let rebuilt = u.adjoint().conjugate(&self.canonical_matrix());
        (&rebuilt - state.matrix()).frobenius_norm()
    }
}

/// Rebuilds the state `(u_a⊗u_b)† [p|Φ⟩⟨Φ| + (1−p)|00⟩⟨00|] (u_a⊗u_b)`.
pub fn reconstruct<T: Real>(form: &WCanonicalForm<T>, tols: &Tolerances<T>) -> Result<DensityMatrix2Q<T>> {
    form.validate(tols)?;
    let u = form.local_unitary();
    let m = u.adjoint().conjugate(&form.canonical_matrix());
    DensityMatrix2Q::new(m.hermitian_part(), tols.validation)
}

/// Unitary with first row `⟨e|`, so that `U|e⟩ = |0⟩`.
fn rotate_to_zero<T: Real>(e: &Qubit1State<T>) -> CMatrix<T> {
    let [e0, e1] = *e.amplitudes();
    CMatrix::from_vec(2, 2, vec![e0.conj(), e1.conj(), -e1, e0])
}

fn phase_diag<T: Real>(theta: T) -> CMatrix<T> {
    CMatrix::diagonal(&[C::new(T::one(), T::zero()), cis(-theta)])
}

/// Reduces a W-class state to its normal form.
///
/// 1. Rotate the unique product ray of the range to `|00⟩`.
/// 2. Remove the largest multiple of `|00⟩⟨00|` keeping the state positive:
///    `1−p = 1/⟨00|ρ̃⁺|00⟩`, with `ρ̃⁺` the pseudo-inverse on the range. The
///    remainder is rank one and normalizes to `Φ`.
/// 3. Absorb the phases of Φ's amplitudes into diagonal phases of `u_a`, `u_b`.
pub fn w_canonicalize<T: Real>(state: &DensityMatrix2Q<T>, tols: &Tolerances<T>) -> Result<WCanonicalForm<T>> {
    let class = classify_range(state, tols)?;
    let ray = match class {
        RangeClass::Dim2SingleProductRay(ray) => ray,
        other => return Err(Error::NotWClass { class: other.tag().to_string() }),
    };
    let mut u_a = rotate_to_zero(&ray.a);
    let mut u_b = rotate_to_zero(&ray.b);
    let rotated = u_a.kron(&u_b).conjugate(state.matrix()).hermitian_part();

    let eig = hermitian_eig(&rotated, T::infinity())?;
    let rank = eig.numerical_rank(tols.rank);
    let mut zero_weight = T::zero();
    for k in 0..rank {
        zero_weight = zero_weight + eig.vectors[k][0].norm_sqr() / eig.values[k];
    }
    let peel = zero_weight.recip();
    let p = T::one() - peel;

    let mut remainder = rotated.clone();
    remainder[(0, 0)] = remainder[(0, 0)] - Complex::new(peel, T::zero());
    let rem = hermitian_eig(&remainder, T::infinity())?;
    let top = rem.max_value();
    let second = rem.values[1].abs().max(rem.min_value().abs());
    if !(top > T::zero()) || second > tols.validation * top.max(T::one()) {
        return Err(Error::RankDeficientPeel { ratio: (second / top).as_f64() });
    }
    let phi = &rem.vectors[0];
    if phi[3].norm() > tols.degeneracy.sqrt() {
        return Err(Error::NotWClass { class: format!("remainder has |11> amplitude {:e}", phi[3].norm().as_f64()) });
    }

    let (g, a, b) = (phi[0], phi[1], phi[2]);
    let (gamma, theta0, gamma_snapped) = if g.norm() < tols.gamma_snap {
        (T::zero(), T::zero(), g.norm() > T::zero())
    } else {
        (g.norm(), g.arg(), false)
    };
    let (alpha, beta) = (a.norm(), b.norm());
    if !(alpha > T::zero() && beta > T::zero()) {
        return Err(Error::NotWClass { class: "alpha * beta = 0".into() });
    }
    // |01⟩ carries B's excitation, |10⟩ carries A's
    u_b = &phase_diag(a.arg() - theta0) * &u_b;
    u_a = &phase_diag(b.arg() - theta0) * &u_a;
    let norm = (alpha * alpha + beta * beta + gamma * gamma).sqrt();

    Ok(WCanonicalForm { u_a, u_b, p, alpha: alpha / norm, beta: beta / norm, gamma: gamma / norm, gamma_snapped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::range::classify_range;

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn recovers_parameters_of_canonical_input() {
        let t = tols();
        let form = WCanonicalForm::from_params(0.5, 0.6, 0.8, 0.0);
        let rho = reconstruct(&form, &t).unwrap();
        let got = w_canonicalize(&rho, &t).unwrap();
        assert!((got.p - 0.5).abs() < 1e-12);
        assert!((got.alpha - 0.6).abs() < 1e-12);
        assert!((got.beta - 0.8).abs() < 1e-12);
        assert!(got.gamma.abs() < 1e-12);
        for u in [&got.u_a, &got.u_b] {
            assert!(u[(0, 1)].norm() < 1e-12 && u[(1, 0)].norm() < 1e-12);
            assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        }
        assert!(got.residual(&rho) < 1e-9);
    }

    #[test]
    fn gamma_normalization_on_recovery() {
        let t = tols();
        let beta = (1.0f64 - 0.04 - 0.16).sqrt();
        let form = WCanonicalForm::from_params(0.3, 0.4, beta, 0.2);
        let got = w_canonicalize(&reconstruct(&form, &t).unwrap(), &t).unwrap();
        let n = got.alpha.powi(2) + got.beta.powi(2) + got.gamma.powi(2);
        assert!((n - 1.0).abs() < 1e-12);
        assert!((got.gamma - 0.2).abs() < 1e-10);
        assert!((got.alpha - 0.4).abs() < 1e-10);
    }

    #[test]
    fn reconstruct_symmetric_example() {
        let t = tols();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = reconstruct(&WCanonicalForm::from_params(0.5, h, h, 0.0), &t).unwrap();
        let want =
            DensityMatrix2Q::mixture(&[(0.5, PureState2Q::psi_plus()), (0.5, PureState2Q::basis(0))], 1e-12).unwrap();
        assert!((rho.matrix() - want.matrix()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn near_pure_state_still_w_class() {
        let t = tols();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = reconstruct(&WCanonicalForm::from_params(1.0 - 1e-6, h, h, 0.0), &t).unwrap();
        assert!(classify_range(&rho, &t).unwrap().is_w_class());
        let got = w_canonicalize(&rho, &t).unwrap();
        assert!((got.p - (1.0 - 1e-6)).abs() < 1e-10);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let t = tols();
        for form in [
            WCanonicalForm::from_params(1.0, 0.6, 0.8, 0.0),
            WCanonicalForm::from_params(0.5, 0.0, 1.0, 0.0),
            WCanonicalForm::from_params(0.5, 0.6, 0.6, 0.0),
            WCanonicalForm::from_params(0.5, 0.6, 0.8, -0.0001),
        ] {
            assert!(matches!(reconstruct(&form, &t), Err(Error::InvalidParameters(_))));
        }
    }

    #[test]
    fn non_w_state_rejected() {
        let t = tols();
        let npt =
            DensityMatrix2Q::mixture(&[(0.5, PureState2Q::phi_plus()), (0.5, PureState2Q::basis(0))], 1e-9).unwrap();
        assert!(matches!(w_canonicalize(&npt, &t), Err(Error::NotWClass { .. })));
    }

    #[test]
    fn peel_is_extremal() {
        let t = tols();
        let form = WCanonicalForm::from_params(0.4, 0.5, 0.7, (1.0f64 - 0.25 - 0.49).sqrt());
        let canon = form.canonical_matrix();
        let peel = 1.0 - form.p;
        let mut over = canon.clone();
        over[(0, 0)] -= Complex::new(peel + 1e-6, 0.0);
        let e = hermitian_eig(&over, 1e-12).unwrap();
        assert!(e.min_value() < -1e-9);
        let mut at = canon;
        at[(0, 0)] -= Complex::new(peel, 0.0);
        let e = hermitian_eig(&at, 1e-12).unwrap();
        assert!(e.min_value() > -t.validation);
    }
}
