//! Validated two-qubit states, composites of two two-qubit systems, and the
//! local operators acting on them.
//!
//! Basis convention: `|ab⟩ ↦ 2a + b`. Four-qubit objects carry an explicit
//! [`SystemOrder`]; qubit `k` of the order is bit `3 − k` of the index.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, svd, CMatrix, HermitianEig};
use crate::scalar::{czero, Real, C};

/// Normalized single-qubit ket in the basis `{|0⟩, |1⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit1State<T: Real> {
    amps: [C<T>; 2],
}

impl<T: Real> Qubit1State<T> {
    pub fn new(a0: C<T>, a1: C<T>, tol: T) -> Result<Self> {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if !((n - T::one()).abs() <= tol) {
            return Err(Error::NotNormalized { norm: n.as_f64() });
        }
        Ok(Self { amps: [a0, a1] })
    }

    /// Normalizes `v`; `None` for the zero vector.
    pub fn from_unnormalized(v: &[C<T>]) -> Option<Self> {
        assert_eq!(v.len(), 2);
        linalg::normalized(v).map(|u| Self { amps: [u[0], u[1]] })
    }

    pub fn zero() -> Self {
        Self { amps: [C::one(), C::zero()] }
    }

    pub fn one() -> Self {
        Self { amps: [C::zero(), C::one()] }
    }

    pub fn amplitudes(&self) -> &[C<T>; 2] {
        &self.amps
    }

    /// Global phase fixed so the first nonzero (largest) amplitude is real positive.
    pub fn phase_fixed(&self) -> Self {
        let v = linalg::normalized(&self.amps).unwrap_or(self.amps.to_vec());
        let v = linalg::fix_phase(v);
        Self { amps: [v[0], v[1]] }
    }
}

/// Normalized two-qubit ket, amplitudes in the order `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2Q<T: Real> {
    amps: [C<T>; 4],
}

impl<T: Real> PureState2Q<T> {
    pub fn new(amps: [C<T>; 4], tol: T) -> Result<Self> {
        if !amps.iter().all(|&z| crate::scalar::is_finite(z)) {
            return Err(Error::NotFinite);
        }
        let n = linalg::norm(&amps);
        if !((n - T::one()).abs() <= tol) {
            return Err(Error::NotNormalized { norm: n.as_f64() });
        }
        Ok(Self { amps })
    }

    pub fn from_unnormalized(v: &[C<T>]) -> Option<Self> {
        assert_eq!(v.len(), 4);
        linalg::normalized(v).map(|u| Self { amps: [u[0], u[1], u[2], u[3]] })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize) -> Self {
        let mut amps = [czero(); 4];
        amps[index] = C::one();
        Self { amps }
    }

    pub fn product(a: &Qubit1State<T>, b: &Qubit1State<T>) -> Self {
        let v = linalg::kron_vec(a.amplitudes(), b.amplitudes());
        Self { amps: [v[0], v[1], v[2], v[3]] }
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self { amps: [czero(), C::new(h, T::zero()), C::new(-h, T::zero()), czero()] }
    }

    /// `(|01⟩ + |10⟩)/√2`.
    pub fn psi_plus() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self { amps: [czero(), C::new(h, T::zero()), C::new(h, T::zero()), czero()] }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn phi_plus() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self { amps: [C::new(h, T::zero()), czero(), czero(), C::new(h, T::zero())] }
    }

    pub fn amplitudes(&self) -> &[C<T>; 4] {
        &self.amps
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn projector(&self) -> CMatrix<T> {
        CMatrix::projector(&self.amps)
    }

    pub fn to_density(&self) -> DensityMatrix2Q<T> {
        DensityMatrix2Q::from_pure(self)
    }

    /// Applies `u_a ⊗ u_b`.
    pub fn local_unitary(&self, u_a: &CMatrix<T>, u_b: &CMatrix<T>) -> Self {
        let v = u_a.kron(u_b).mul_vec(&self.amps);
        Self { amps: [v[0], v[1], v[2], v[3]] }
    }
}

/// Validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix2Q<T: Real> {
    matrix: CMatrix<T>,
    eigenvalues: Vec<T>,
}

impl<T: Real> DensityMatrix2Q<T> {
    /// Validates a 4×4 matrix as a density operator. See [`validate_density`].
    pub fn new(entries: CMatrix<T>, tol: T) -> Result<Self> {
        validate_density(entries, tol)
    }

    pub fn from_pure(state: &PureState2Q<T>) -> Self {
        let matrix = state.projector();
        let mut eigenvalues = vec![T::zero(); 4];
        eigenvalues[0] = T::one();
        Self { matrix, eigenvalues }
    }

    /// `Σ w_i |ψ_i⟩⟨ψ_i|`; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(T, PureState2Q<T>)], tol: T) -> Result<Self> {
        let mut m = CMatrix::zeros(4, 4);
        for (w, psi) in terms {
            m = &m + &psi.projector().scale_real(*w);
        }
        validate_density(m, tol)
    }

    pub fn maximally_mixed() -> Self {
        let q = T::lit(0.25);
        Self { matrix: CMatrix::identity(4).scale_real(q), eigenvalues: vec![q; 4] }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// Eigenvalues, descending, computed at validation time.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eig(&self) -> HermitianEig<T> {
        hermitian_eig(&self.matrix, T::infinity()).expect("validated state is Hermitian")
    }

    /// `(u_a ⊗ u_b) ρ (u_a ⊗ u_b)†`; spectrum is unchanged.
    pub fn local_unitary(&self, u_a: &CMatrix<T>, u_b: &CMatrix<T>) -> Self {
        let u = u_a.kron(u_b);
        Self { matrix: u.conjugate(&self.matrix).hermitian_part(), eigenvalues: self.eigenvalues.clone() }
    }
}

/// Checks finiteness, Hermiticity, unit trace and positivity (in that order)
/// and returns the validated state with its spectrum, sorted descending.
pub fn validate_density<T: Real>(entries: CMatrix<T>, tol: T) -> Result<DensityMatrix2Q<T>> {
    if entries.rows() != 4 || entries.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4".into(),
            found: format!("{}x{}", entries.rows(), entries.cols()),
        });
    }
    if !entries.is_finite() {
        return Err(Error::NotFinite);
    }
    let deviation = entries.hermitian_deviation();
    if !(deviation <= tol) {
        return Err(Error::NotHermitian { deviation: deviation.as_f64() });
    }
    let matrix = entries.hermitian_part();
    let tr = matrix.trace();
    if !((tr.re - T::one()).abs() <= tol) || !(tr.im.abs() <= tol) {
        return Err(Error::TraceNotOne { trace: tr.re.as_f64() });
    }
    let eig = hermitian_eig(&matrix, tol)?;
    if eig.min_value() < -tol {
        return Err(Error::NotPositive { min_eigenvalue: eig.min_value().as_f64() });
    }
    Ok(DensityMatrix2Q { matrix, eigenvalues: eig.values })
}

/// One of the four qubits of two two-qubit systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum System {
    A,
    B,
    APrime,
    BPrime,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::A => "A",
            System::B => "B",
            System::APrime => "A'",
            System::BPrime => "B'",
        })
    }
}

/// Tensor-factor order of a four-qubit object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemOrder([System; 4]);

impl SystemOrder {
    /// `ρ_AB ⊗ σ_A′B′` as built by [`kron`].
    pub const PAIRS: SystemOrder = SystemOrder([System::A, System::B, System::APrime, System::BPrime]);
    /// Grouped by party: `AA′ | BB′`.
    pub const PARTIES: SystemOrder = SystemOrder([System::A, System::APrime, System::B, System::BPrime]);

    pub fn new(order: [System; 4]) -> Result<Self> {
        for (i, s) in order.iter().enumerate() {
            if order[..i].contains(s) {
                return Err(Error::InvalidPermutation(format!("{s} appears twice")));
            }
        }
        Ok(Self(order))
    }

    pub fn systems(&self) -> [System; 4] {
        self.0
    }

    fn position(&self, s: System) -> usize {
        self.0.iter().position(|&x| x == s).expect("valid permutation")
    }

    /// For each output index, the input index it reads from when moving from
    /// `self` to `target`.
    fn index_map(&self, target: SystemOrder) -> [usize; 16] {
        let mut map = [0usize; 16];
        for (out_idx, slot) in map.iter_mut().enumerate() {
            let mut in_idx = 0;
            for (k, &s) in target.0.iter().enumerate() {
                let bit = (out_idx >> (3 - k)) & 1;
                in_idx |= bit << (3 - self.position(s));
            }
            *slot = in_idx;
        }
        map
    }
}

impl fmt::Display for SystemOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Reorders the tensor factors of a 16-dimensional vector.
pub fn permute_vector<T: Real>(v: &[C<T>], from: SystemOrder, to: SystemOrder) -> Vec<C<T>> {
    assert_eq!(v.len(), 16);
    let map = from.index_map(to);
    map.iter().map(|&i| v[i]).collect()
}

/// Sixteen-dimensional state of two two-qubit systems. Sub-normalized states
/// (trace below one) are allowed and flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4Q<T: Real> {
    matrix: CMatrix<T>,
    order: SystemOrder,
    normalized: bool,
}

impl<T: Real> DensityMatrix4Q<T> {
    pub fn new(matrix: CMatrix<T>, order: SystemOrder, tol: T) -> Result<Self> {
        if matrix.rows() != 16 || matrix.cols() != 16 {
            return Err(Error::DimensionMismatch {
                expected: "16x16".into(),
                found: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NotFinite);
        }
        let eig = hermitian_eig(&matrix, tol)?;
        if eig.min_value() < -tol {
            return Err(Error::NotPositive { min_eigenvalue: eig.min_value().as_f64() });
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if tr > T::one() + tol {
            return Err(Error::TraceAboveOne { trace: tr.as_f64() });
        }
        Ok(Self { normalized: (tr - T::one()).abs() <= tol, matrix, order })
    }

    /// `ρ_AB ⊗ σ_A′B′` in order `(A, B, A′, B′)`.
    pub fn product(rho: &DensityMatrix2Q<T>, sigma: &DensityMatrix2Q<T>) -> Self {
        Self { matrix: rho.matrix().kron(sigma.matrix()), order: SystemOrder::PAIRS, normalized: true }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn order(&self) -> SystemOrder {
        self.order
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// Reindexes so that qubit `k` of the result is `target[k]`.
    pub fn permute_systems(&self, target: SystemOrder) -> Self {
        let map = self.order.index_map(target);
        let matrix = CMatrix::from_fn(16, 16, |i, j| self.matrix[(map[i], map[j])]);
        Self { matrix, order: target, normalized: self.normalized }
    }

    /// `(m ⊗ n) ρ (m ⊗ n)†` with `m` on `AA′` and `n` on `BB′`. The state is
    /// permuted to `(A, A′, B, B′)` first.
    pub fn apply_local(&self, m: &LocalOperator2Q<T>, n: &LocalOperator2Q<T>, tol: T) -> Result<Self> {
        if m.party() != Party::AAPrime || n.party() != Party::BBPrime {
            return Err(Error::DimensionMismatch {
                expected: "operators on AA' then BB'".into(),
                found: format!("{:?}, {:?}", m.party(), n.party()),
            });
        }
        let grouped = self.permute_systems(SystemOrder::PARTIES);
        let k = m.matrix().kron(n.matrix());
        let out = k.conjugate(&grouped.matrix).hermitian_part();
        Self::new(out, SystemOrder::PARTIES, tol)
    }
}

/// The party holding a pair of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    #[serde(rename = "AA'")]
    AAPrime,
    #[serde(rename = "BB'")]
    BBPrime,
}

/// Local filter on one party's two qubits with operator norm at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator2Q<T: Real> {
    matrix: CMatrix<T>,
    party: Party,
}

impl<T: Real> LocalOperator2Q<T> {
    pub fn new(matrix: CMatrix<T>, party: Party, tol: T) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: "4x4".into(),
                found: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NotFinite);
        }
        let norm = linalg::operator_norm(&matrix);
        if norm > T::one() + tol {
            return Err(Error::NormExceeded { norm: norm.as_f64() });
        }
        Ok(Self { matrix, party })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn operator_norm(&self) -> T {
        linalg::operator_norm(&self.matrix)
    }
}

/// Schmidt form `Σ c_i |e_i⟩|f_i⟩` of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct Schmidt<T: Real> {
    /// `min(d_A, d_B)` coefficients, descending.
    pub coefficients: Vec<T>,
    pub left: Vec<Vec<C<T>>>,
    pub right: Vec<Vec<C<T>>>,
}

impl<T: Real> Schmidt<T> {
    pub fn reconstruct(&self) -> Vec<C<T>> {
        let da = self.left.first().map_or(0, Vec::len);
        let db = self.right.first().map_or(0, Vec::len);
        let mut out = vec![czero(); da * db];
        for ((&c, e), f) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            let term = linalg::kron_vec(e, f);
            linalg::axpy(Complex::new(c, T::zero()), &term, &mut out);
        }
        out
    }

    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: T) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }
}

/// Schmidt decomposition of a unit vector on `C^{d_A} ⊗ C^{d_B}` via the SVD
/// of its coefficient matrix.
pub fn schmidt_decompose<T: Real>(state: &[C<T>], dims: (usize, usize), tol: T) -> Result<Schmidt<T>> {
    let (da, db) = dims;
    if state.len() != da * db {
        return Err(Error::DimensionMismatch { expected: format!("{}", da * db), found: format!("{}", state.len()) });
    }
    let n = linalg::norm(state);
    if !((n - T::one()).abs() <= tol) {
        return Err(Error::NotNormalized { norm: n.as_f64() });
    }
    let coeffs = CMatrix::from_vec(da, db, state.to_vec());
    let s = svd(&coeffs);
    let k = s.singular_values.len();
    // C = U Σ V†, so C_ab = Σ_i σ_i U_ai conj(V_bi): right factors are conj(V)
    let left = (0..k).map(|i| s.u.column(i)).collect();
    let right = (0..k).map(|i| s.v.column(i).into_iter().map(|z| z.conj()).collect()).collect();
    Ok(Schmidt { coefficients: s.singular_values, left, right })
}

/// Kronecker product of two operators (or column vectors stored as matrices).
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kron(b)
}

/// Which qubit of a two-qubit state to transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Partial transpose on one qubit: `(ρ^{T_A})_{ab,a′b′} = ρ_{a′b,ab′}`.
pub fn partial_transpose<T: Real>(state: &DensityMatrix2Q<T>, side: Side) -> CMatrix<T> {
    let m = state.matrix();
    CMatrix::from_fn(4, 4, |i, j| {
        let (a, b) = (i >> 1, i & 1);
        let (a2, b2) = (j >> 1, j & 1);
        match side {
            Side::A => m[((a2 << 1) | b, (a << 1) | b2)],
            Side::B => m[((a << 1) | b2, (a2 << 1) | b)],
        }
    })
}

/// Smallest eigenvalue of the partial transpose; negative certifies entanglement.
pub fn min_partial_transpose_eigenvalue<T: Real>(state: &DensityMatrix2Q<T>) -> T {
    let pt = partial_transpose(state, Side::A);
    hermitian_eig(&pt, T::infinity()).expect("partial transpose is Hermitian").min_value()
}

/// Coefficient matrix `[[c00, c01], [c10, c11]]`.
pub fn reshape_to_matrix<T: Real>(state: &PureState2Q<T>) -> CMatrix<T> {
    CMatrix::from_vec(2, 2, state.amplitudes().to_vec())
}

pub fn det2<T: Real>(m: &CMatrix<T>) -> C<T> {
    debug_assert!(m.rows() == 2 && m.cols() == 2);
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `det` of the reshaped amplitudes: zero exactly for product states, and
/// `2|det|` is the concurrence.
pub fn product_determinant<T: Real>(amps: &[C<T>]) -> C<T> {
    amps[0] * amps[3] - amps[1] * amps[2]
}
