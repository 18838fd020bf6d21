//! Two-copy purification: filters `m` on `AA′` and `n` on `BB′` that turn a
//! pair of W-class states into a maximally entangled state, exactly.

use num_complex::Complex;

use crate::canonical::{w_canonicalize, WCanonicalForm};
use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, CMatrix};
use crate::qstate::{
    permute_vector, schmidt_decompose, DensityMatrix2Q, DensityMatrix4Q, LocalOperator2Q, Party, SystemOrder,
};
use crate::range::{classify_range, RangeClass};
use crate::scalar::{czero, Real, C};
use crate::tol::Tolerances;

/// Filters built from the canonical forms of `ρ` (first) and `σ` (second).
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOperators<T: Real> {
    pub m_aa: LocalOperator2Q<T>,
    pub n_bb: LocalOperator2Q<T>,
    pub expected_probability: T,
    pub canon_a: WCanonicalForm<T>,
    pub canon_b: WCanonicalForm<T>,
    /// `|αβ′ − α′β|` fell below the tie tolerance.
    pub tie: bool,
}

/// `2pq · min{α²β′², α′²β²}`.
pub fn optimal_probability<T: Real>(canon_a: &WCanonicalForm<T>, canon_b: &WCanonicalForm<T>) -> T {
    let x = canon_a.alpha * canon_b.beta;
    let y = canon_b.alpha * canon_a.beta;
    let m = x.min(y);
    T::lit(2.0) * canon_a.p * canon_b.p * m * m
}

fn check_form<T: Real>(form: &WCanonicalForm<T>, which: &str, tols: &Tolerances<T>) -> Result<()> {
    form.validate(tols).map_err(|e| Error::InvalidForm(format!("{which}: {e}")))
}

/// In the canonical frames, `m = μ[(1/αβ′)|01⟩⟨01| + (1/α′β)|10⟩⟨10|]` with
/// `μ = min{αβ′, α′β}` and `n = |01⟩⟨01| + |10⟩⟨10|`. Each is then composed
/// with the canonicalizing unitaries of its two qubits.
pub fn build_protocol<T: Real>(
    canon_a: &WCanonicalForm<T>,
    canon_b: &WCanonicalForm<T>,
    tols: &Tolerances<T>,
) -> Result<ProtocolOperators<T>> {
    check_form(canon_a, "first form", tols)?;
    check_form(canon_b, "second form", tols)?;
    let x = canon_a.alpha * canon_b.beta;
    let y = canon_b.alpha * canon_a.beta;
    let tie = (x - y).abs() <= tols.tie;
    let mu = if tie { x } else { x.min(y) };
    let r = |v: T| Complex::new(v, T::zero());
    let m_c = CMatrix::diagonal(&[czero(), r(mu / x), r(mu / y), czero()]);
    let n_c = CMatrix::diagonal(&[czero(), r(T::one()), r(T::one()), czero()]);
    let m = &m_c * &canon_a.u_a.kron(&canon_b.u_a);
    let n = &n_c * &canon_a.u_b.kron(&canon_b.u_b);
    // rounding slack: 1e-12 in double precision, a few ulps otherwise
    let slack = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
    Ok(ProtocolOperators {
        m_aa: LocalOperator2Q::new(m, Party::AAPrime, slack)?,
        n_bb: LocalOperator2Q::new(n, Party::BBPrime, slack)?,
        expected_probability: optimal_probability(canon_a, canon_b),
        canon_a: canon_a.clone(),
        canon_b: canon_b.clone(),
        tie,
    })
}

/// Certified result of applying the filters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutput<T: Real> {
    /// Trace of the unnormalized output: the success probability.
    pub probability: T,
    /// The same trace computed from the dense 16×16 product state.
    pub dense_probability: T,
    /// Unnormalized output in order `(A, A′, B, B′)`.
    pub state: DensityMatrix4Q<T>,
    /// Normalized output ket in order `(A, A′, B, B′)`, phase fixed.
    pub vector: Vec<C<T>>,
    /// `λ₂ / λ₁` of the output.
    pub rank_ratio: T,
    /// Schmidt coefficients across `AA′ | BB′`, descending.
    pub schmidt_coefficients: Vec<T>,
    /// Largest deviation of the Schmidt coefficients from `(1/√2, 1/√2, 0, 0)`.
    pub schmidt_margin: T,
}

/// Applies `(m⊗n)(ρ⊗σ)(m⊗n)†` and measures the output without certifying it.
///
/// The output is assembled from the spectral realizations of `ρ` and `σ`:
/// every kept eigenpair product `λ_i μ_j` contributes `|K v_i⊗w_j⟩⟨·|` with
/// `K = m⊗n`. Summing rank-one terms keeps the annihilated directions at
/// relative rounding level, which the rank certificate needs when the success
/// probability is small. The dense route is evaluated alongside for the trace.
pub fn apply_channel<T: Real>(
    rho: &DensityMatrix2Q<T>,
    sigma: &DensityMatrix2Q<T>,
    m: &LocalOperator2Q<T>,
    n: &LocalOperator2Q<T>,
    tols: &Tolerances<T>,
) -> Result<ChannelOutput<T>> {
    let k = m.matrix().kron(n.matrix());
    let (er, es) = (rho.eig(), sigma.eig());
    let (kr, ks) = (er.numerical_rank(tols.rank), es.numerical_rank(tols.rank));
    let mut terms: Vec<Vec<C<T>>> = Vec::with_capacity(kr * ks);
    for i in 0..kr {
        for j in 0..ks {
            let w = (er.values[i] * es.values[j]).sqrt();
            let v = linalg::kron_vec(&er.vectors[i], &es.vectors[j]);
            let v = permute_vector(&v, SystemOrder::PAIRS, SystemOrder::PARTIES);
            let y: Vec<C<T>> = k.mul_vec(&v).into_iter().map(|z| z * w).collect();
            terms.push(y);
        }
    }

    let r = terms.len();
    let gram = CMatrix::from_fn(r, r, |a, b| linalg::inner(&terms[a], &terms[b]));
    let ge = hermitian_eig(&gram, T::infinity())?;
    let probability = gram.trace().re;
    let top = ge.max_value();
    let second = if r > 1 { ge.values[1].max(T::zero()) } else { T::zero() };
    let rank_ratio = if top > T::zero() { second / top } else { T::infinity() };

    let mut out = CMatrix::zeros(16, 16);
    for y in &terms {
        out = &out + &CMatrix::projector(y);
    }
    let state = DensityMatrix4Q::new(out.hermitian_part(), SystemOrder::PARTIES, tols.validation)?;

    let dense = DensityMatrix4Q::product(rho, sigma).apply_local(m, n, tols.validation)?;
    let dense_probability = dense.trace();

    let mut vector = vec![czero(); 16];
    if top > T::zero() {
        for (y, g) in terms.iter().zip(&ge.vectors[0]) {
            linalg::axpy(*g, y, &mut vector);
        }
    }
    let (vector, schmidt_coefficients, schmidt_margin) = match linalg::normalized(&vector) {
        Some(v) => {
            let v = linalg::fix_phase(v);
            let s = schmidt_decompose(&v, (4, 4), T::lit(1e-8).max(T::epsilon() * T::lit(64.0)))?;
            let h = T::FRAC_1_SQRT_2();
            let margin = s
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, &c)| if i < 2 { (c - h).abs() } else { c.abs() })
                .fold(T::zero(), T::max);
            (v, s.coefficients, margin)
        }
        None => (vector, vec![T::zero(); 4], T::infinity()),
    };

    Ok(ChannelOutput {
        probability,
        dense_probability,
        state,
        vector,
        rank_ratio,
        schmidt_coefficients,
        schmidt_margin,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Purifiable,
    NotPurifiable(String),
}

impl Verdict {
    pub fn is_purifiable(&self) -> bool {
        matches!(self, Verdict::Purifiable)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurificationReport<T: Real> {
    pub verdict: Verdict,
    /// Success probability; zero when not purifiable.
    pub probability: T,
    pub operators: Option<ProtocolOperators<T>>,
    pub output: Option<ChannelOutput<T>>,
    /// Range class tags of the two inputs.
    pub classes: [String; 2],
    /// Single-copy filtering probability `2c₂²` for inputs that are already
    /// pure and entangled.
    pub pure_input_probability: [Option<T>; 2],
}

impl<T: Real> PurificationReport<T> {
    pub fn schmidt_margin(&self) -> Option<T> {
        self.output.as_ref().map(|o| o.schmidt_margin)
    }
}

/// Applies the protocol and certifies rank one, the analytic trace and
/// maximal entanglement. A failed certificate is an internal inconsistency.
pub fn apply_protocol<T: Real>(
    rho: &DensityMatrix2Q<T>,
    sigma: &DensityMatrix2Q<T>,
    ops: &ProtocolOperators<T>,
    tols: &Tolerances<T>,
) -> Result<PurificationReport<T>> {
    for (form, state) in [(&ops.canon_a, rho), (&ops.canon_b, sigma)] {
        let residual = form.residual(state);
        if !(residual <= tols.consistency) {
            return Err(Error::InconsistentInput { residual: residual.as_f64() });
        }
    }
    let out = apply_channel(rho, sigma, &ops.m_aa, &ops.n_bb, tols)?;
    let expected = ops.expected_probability;
    for actual in [out.probability, out.dense_probability] {
        if !((actual - expected).abs() <= tols.probability) {
            return Err(Error::ProbabilityMismatch { expected: expected.as_f64(), actual: actual.as_f64() });
        }
    }
    if !(out.rank_ratio <= tols.output_rank) {
        return Err(Error::OutputNotRankOne { ratio: out.rank_ratio.as_f64() });
    }
    if !(out.schmidt_margin <= tols.schmidt) {
        return Err(Error::NotMaximallyEntangled { margin: out.schmidt_margin.as_f64() });
    }
    Ok(PurificationReport {
        verdict: Verdict::Purifiable,
        probability: out.probability,
        operators: Some(ops.clone()),
        output: Some(out),
        classes: ["Dim2SingleProductRay".to_string(), "Dim2SingleProductRay".to_string()],
        pure_input_probability: [None, None],
    })
}

fn pure_probability<T: Real>(state: &DensityMatrix2Q<T>, tols: &Tolerances<T>) -> Option<T> {
    let eig = state.eig();
    let v = linalg::normalized(&eig.vectors[0])?;
    procrustean_step(&v, (2, 2), tols).ok().map(|f| f.probability)
}

/// Classifies both ranges; purifies when both are W class.
pub fn purify_pair<T: Real>(
    rho: &DensityMatrix2Q<T>,
    sigma: &DensityMatrix2Q<T>,
    tols: &Tolerances<T>,
) -> Result<PurificationReport<T>> {
    let ca = classify_range(rho, tols)?;
    let cb = classify_range(sigma, tols)?;
    if ca.is_w_class() && cb.is_w_class() {
        let fa = w_canonicalize(rho, tols)?;
        let fb = w_canonicalize(sigma, tols)?;
        let ops = build_protocol(&fa, &fb, tols)?;
        return apply_protocol(rho, sigma, &ops, tols);
    }
    let mut reasons = Vec::new();
    for (label, class) in [("first", &ca), ("second", &cb)] {
        if !class.is_w_class() {
            let why = match class {
                RangeClass::Dim1Entangled => "pure input, rank two required",
                RangeClass::Dim1Product(_) => "pure product state",
                _ => "range spanned by product states",
            };
            reasons.push(format!("{label} state: {} ({why})", class.tag()));
        }
    }
    let pure = |class: &RangeClass<T>, s: &DensityMatrix2Q<T>| match class {
        RangeClass::Dim1Entangled => pure_probability(s, tols),
        _ => None,
    };
    Ok(PurificationReport {
        verdict: Verdict::NotPurifiable(reasons.join("; ")),
        probability: T::zero(),
        operators: None,
        output: None,
        pure_input_probability: [pure(&ca, rho), pure(&cb, sigma)],
        classes: [ca.tag().to_string(), cb.tag().to_string()],
    })
}

/// Local filter turning a pure entangled state into a maximally entangled one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcrusteanFilter<T: Real> {
    /// Acts on the first party; attenuates every Schmidt component down to the smallest.
    pub filter: CMatrix<T>,
    /// `k · c_k²` for Schmidt rank `k` (`2c₂²` for qubits).
    pub probability: T,
    pub schmidt_rank: usize,
}

/// `F = Σ_i (c_k / c_i) |e_i⟩⟨e_i|` over the nonzero Schmidt components.
pub fn procrustean_step<T: Real>(
    pure: &[C<T>],
    dims: (usize, usize),
    tols: &Tolerances<T>,
) -> Result<ProcrusteanFilter<T>> {
    let s = schmidt_decompose(pure, dims, tols.validation)?;
    let k = s.rank(tols.product);
    if k < 2 {
        return Err(Error::ProductState);
    }
    let ck = s.coefficients[k - 1];
    let mut filter = CMatrix::zeros(dims.0, dims.0);
    for i in 0..k {
        let p = CMatrix::projector(&s.left[i]).scale_real(ck / s.coefficients[i]);
        filter = &filter + &p;
    }
    Ok(ProcrusteanFilter { filter, probability: T::from_usize(k).unwrap() * ck * ck, schmidt_rank: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::reconstruct;
    use crate::qstate::PureState2Q;

    type F = WCanonicalForm<f64>;

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn pair(a: &F, b: &F) -> PurificationReport<f64> {
        let t = tols();
        let ops = build_protocol(a, b, &t).unwrap();
        let rho = reconstruct(a, &t).unwrap();
        let sigma = reconstruct(b, &t).unwrap();
        apply_protocol(&rho, &sigma, &ops, &t).unwrap()
    }

    #[test]
    fn symmetric_pair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = F::from_params(0.5, h, h, 0.0);
        let t = tols();
        let ops = build_protocol(&f, &f, &t).unwrap();
        assert!(ops.tie);
        let want = CMatrix::diagonal(&[czero(), C::new(1.0, 0.0), C::new(1.0, 0.0), czero()]);
        assert!((ops.m_aa.matrix() - &want).frobenius_norm() < 1e-15);
        assert!((ops.expected_probability - 0.125).abs() < 1e-15);

        let rep = pair(&f, &f);
        let out = rep.output.unwrap();
        assert!((out.state.trace() - 0.125).abs() < 1e-12);
        // (|01⟩|10⟩ + |10⟩|01⟩)/√2 in (A, A′, B, B′)
        let mut target = vec![czero(); 16];
        target[4 + 2] = C::new(h, 0.0);
        target[8 + 1] = C::new(h, 0.0);
        assert!((linalg::inner(&target, &out.vector).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_pair() {
        let a = F::from_params(0.5, 0.8, 0.6, 0.0);
        let b = F::from_params(0.5, 0.6, 0.8, 0.0);
        let rep = pair(&a, &b);
        assert!((rep.probability - 0.0648).abs() < 1e-12);
        let swapped = pair(&b, &a);
        assert!((swapped.probability - rep.probability).abs() < 1e-15);
    }

    #[test]
    fn output_is_gamma_independent() {
        let g = 0.3f64;
        let a0 = F::from_params(0.4, 0.6, 0.8, 0.0);
        let s = (1.0 - g * g).sqrt();
        let a1 = F::from_params(0.4, 0.6 * s, 0.8 * s, g);
        let b = F::from_params(0.7, 0.5, (0.75f64).sqrt(), 0.0);
        let r0 = pair(&a0, &b);
        let r1 = pair(&a1, &b);
        let p0 = 2.0 * 0.4 * 0.7 * f64::min(0.36 * 0.75, 0.25 * 0.64);
        assert!((r0.probability - p0).abs() < 1e-12);
        let p1 = 2.0 * 0.4 * 0.7 * f64::min(0.36 * s.powi(2) * 0.75, 0.25 * 0.64 * s.powi(2));
        assert!((r1.probability - p1).abs() < 1e-12);
        let (v0, v1) = (r0.output.unwrap().vector, r1.output.unwrap().vector);
        assert!((linalg::inner(&v0, &v1).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernels_contain_00() {
        let a = F::from_params(0.3, 0.5, 0.7, (1.0f64 - 0.74).sqrt());
        let b = F::from_params(0.6, 0.9, (0.19f64).sqrt(), 0.0);
        let ops = build_protocol(&a, &b, &tols()).unwrap();
        let mut e0 = vec![czero(); 4];
        e0[0] = C::new(1.0, 0.0);
        // |00⟩ on AA′ in the canonical frames, pulled back to the input frames
        let back_a = a.u_a.kron(&b.u_a).adjoint().mul_vec(&e0);
        let back_b = a.u_b.kron(&b.u_b).adjoint().mul_vec(&e0);
        assert!(linalg::norm(&ops.m_aa.matrix().mul_vec(&back_a)) < 1e-12);
        assert!(linalg::norm(&ops.n_bb.matrix().mul_vec(&back_b)) < 1e-12);
    }

    #[test]
    fn purify_pair_paths() {
        let t = tols();
        let w = reconstruct(&F::from_params(0.5, 0.6, 0.8, 0.0), &t).unwrap();
        let rep = purify_pair(&w, &w, &t).unwrap();
        assert!(rep.verdict.is_purifiable());
        assert!((rep.probability - 2.0 * 0.25 * 0.36 * 0.64).abs() < 1e-12);

        let npt =
            DensityMatrix2Q::mixture(&[(0.5, PureState2Q::phi_plus()), (0.5, PureState2Q::basis(0))], 1e-9).unwrap();
        let rep = purify_pair(&w, &npt, &t).unwrap();
        match rep.verdict {
            Verdict::NotPurifiable(reason) => assert!(reason.contains("Dim2ProductSpannedTwoRays")),
            Verdict::Purifiable => panic!("product-spanned pair purified"),
        }

        let pure = PureState2Q::from_unnormalized(&[czero(), C::new(0.8, 0.0), C::new(0.6, 0.0), czero()])
            .unwrap()
            .to_density();
        let rep = purify_pair(&pure, &w, &t).unwrap();
        assert!(!rep.verdict.is_purifiable());
        assert!((rep.pure_input_probability[0].unwrap() - 0.72).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_input_rejected() {
        let t = tols();
        let a = F::from_params(0.5, 0.6, 0.8, 0.0);
        let ops = build_protocol(&a, &a, &t).unwrap();
        let other = reconstruct(&F::from_params(0.4, 0.6, 0.8, 0.0), &t).unwrap();
        let rho = reconstruct(&a, &t).unwrap();
        assert!(matches!(apply_protocol(&rho, &other, &ops, &t), Err(Error::InconsistentInput { .. })));
    }

    #[test]
    fn procrustean_examples() {
        let t = tols();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [czero(), C::new(h, 0.0), C::new(h, 0.0), czero()];
        let f = procrustean_step(&bell, (2, 2), &t).unwrap();
        assert!((f.probability - 1.0).abs() < 1e-12);
        assert!((&f.filter - &CMatrix::identity(2)).frobenius_norm() < 1e-12);

        let psi = [czero(), C::new(0.8, 0.0), C::new(0.6, 0.0), czero()];
        let f = procrustean_step(&psi, (2, 2), &t).unwrap();
        assert!((f.probability - 0.72).abs() < 1e-12);
        let out = f.filter.kron(&CMatrix::identity(2)).mul_vec(&psi);
        assert!((linalg::norm(&out).powi(2) - 0.72).abs() < 1e-12);
        let out = linalg::normalized(&out).unwrap();
        let s = schmidt_decompose(&out, (2, 2), 1e-12).unwrap();
        assert!((s.coefficients[0] - h).abs() < 1e-12 && (s.coefficients[1] - h).abs() < 1e-12);

        let prod = [C::new(1.0, 0.0), czero(), czero(), czero()];
        assert_eq!(procrustean_step(&prod, (2, 2), &t), Err(Error::ProductState));
    }

    #[test]
    fn procrustean_on_surviving_pure_state() {
        let (a, b) = (F::from_params(0.5, 0.8, 0.6, 0.0), F::from_params(0.3, 0.6, 0.8, 0.0));
        let x = a.alpha * b.beta;
        let y = b.alpha * a.beta;
        let mut psi = vec![czero(); 16];
        psi[4 + 2] = C::new(x, 0.0);
        psi[8 + 1] = C::new(y, 0.0);
        let weight = a.p * b.p * (x * x + y * y);
        let psi = linalg::normalized(&psi).unwrap();
        let f = procrustean_step(&psi, (4, 4), &tols()).unwrap();
        let want = 2.0 * x.min(y).powi(2) / (x * x + y * y);
        assert!((f.probability - want).abs() < 1e-12);
        assert!((f.probability * weight - optimal_probability(&a, &b)).abs() < 1e-12);
    }
}
