//! Range of a two-qubit state and the product states it contains.
//!
//! A unit vector `x ∈ C²⊗C²` is a product state exactly when the 2×2 matrix of
//! its amplitudes is singular. On a two-dimensional subspace spanned by `V`,
//! `W` the determinant of `aV + bW` is a homogeneous quadratic in `(a, b)`,
//! so the product rays of the subspace are the roots of that quadratic on the
//! projective line: none vanish identically and a double root is the W-class
//! geometry, two simple roots give a product-spanned plane, and an identically
//! vanishing quadratic means every member is product.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, svd, CMatrix};
use crate::qstate::{self, det2, reshape_to_matrix, DensityMatrix2Q, PureState2Q, Qubit1State};
use crate::scalar::{czero, Real, C};
use crate::tol::Tolerances;

/// Orthonormal basis of a subspace of `C²⊗C²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Real> {
    basis: Vec<PureState2Q<T>>,
    tol: T,
}

impl<T: Real> Subspace<T> {
    /// Wraps a basis as given. Orthonormality is checked by the operations
    /// that rely on it (see [`Subspace::gram_deviation`]).
    pub fn new(basis: Vec<PureState2Q<T>>, tol: T) -> Self {
        assert!((1..=4).contains(&basis.len()), "subspace dimension must be 1..=4");
        Self { basis, tol }
    }

    /// Orthonormalizes `vectors` (modified Gram-Schmidt, in order). Returns
    /// `None` if they are linearly dependent at tolerance `tol`.
    pub fn spanned_by(vectors: &[Vec<C<T>>], tol: T) -> Option<Self> {
        let mut out: Vec<Vec<C<T>>> = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            for _ in 0..2 {
                for b in &out {
                    let coeff = linalg::inner(b, &w);
                    linalg::axpy(-coeff, b, &mut w);
                }
            }
            if linalg::norm(&w) <= tol {
                return None;
            }
            out.push(linalg::normalized(&w)?);
        }
        let basis = out.iter().map(|v| PureState2Q::from_unnormalized(v)).collect::<Option<Vec<_>>>()?;
        Some(Self::new(basis, T::epsilon().sqrt()))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PureState2Q<T>] {
        &self.basis
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    fn basis_vecs(&self) -> Vec<Vec<C<T>>> {
        self.basis.iter().map(|b| b.as_slice().to_vec()).collect()
    }

    /// `max |⟨b_i|b_j⟩ − δ_ij|`.
    pub fn gram_deviation(&self) -> T {
        let mut dev = T::zero();
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate() {
                let ip = linalg::inner(u.as_slice(), v.as_slice());
                let want = if i == j { T::one() } else { T::zero() };
                dev = dev.max((ip - Complex::new(want, T::zero())).norm());
            }
        }
        dev
    }

    /// Norm of the part of `v` outside the subspace.
    pub fn membership_residual(&self, v: &[C<T>]) -> T {
        linalg::residual_from_span(v, &self.basis_vecs())
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Vec<Vec<C<T>>> {
        linalg::complete_orthonormal(&self.basis_vecs(), 4).into_iter().skip(self.dim()).collect()
    }
}

/// A product ray `|e⟩⊗|f⟩`, each factor normalized with its global phase fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductRay<T: Real> {
    pub a: Qubit1State<T>,
    pub b: Qubit1State<T>,
}

impl<T: Real> ProductRay<T> {
    pub fn new(a: Qubit1State<T>, b: Qubit1State<T>) -> Self {
        Self { a: a.phase_fixed(), b: b.phase_fixed() }
    }

    /// Nearest product ray to the amplitude matrix `m` (top singular pair).
    pub fn from_amplitude_matrix(m: &CMatrix<T>) -> Option<Self> {
        let s = svd(m);
        if s.singular_values[0] <= T::zero() {
            return None;
        }
        let a = Qubit1State::from_unnormalized(&s.u.column(0))?;
        let conj_v: Vec<C<T>> = s.v.column(0).iter().map(|z| z.conj()).collect();
        let b = Qubit1State::from_unnormalized(&conj_v)?;
        Some(Self::new(a, b))
    }

    pub fn to_state(&self) -> PureState2Q<T> {
        PureState2Q::product(&self.a, &self.b)
    }
}

/// Geometry of a range: its dimension and which product states it holds.
#[derive(Debug, Clone, PartialEq)]
pub enum RangeClass<T: Real> {
    Dim1Product(ProductRay<T>),
    Dim1Entangled,
    /// Exactly one product ray: the W-class case, the only purifiable one.
    Dim2SingleProductRay(ProductRay<T>),
    Dim2ProductSpannedTwoRays(ProductRay<T>, ProductRay<T>),
    Dim2ProductSpannedContinuum,
    Dim3ProductSpanned([ProductRay<T>; 3]),
    Dim4FullSpace,
}

impl<T: Real> RangeClass<T> {
    pub fn dimension(&self) -> usize {
        match self {
            RangeClass::Dim1Product(_) | RangeClass::Dim1Entangled => 1,
            RangeClass::Dim2SingleProductRay(_)
            | RangeClass::Dim2ProductSpannedTwoRays(..)
            | RangeClass::Dim2ProductSpannedContinuum => 2,
            RangeClass::Dim3ProductSpanned(_) => 3,
            RangeClass::Dim4FullSpace => 4,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            RangeClass::Dim1Product(_) => "Dim1Product",
            RangeClass::Dim1Entangled => "Dim1Entangled",
            RangeClass::Dim2SingleProductRay(_) => "Dim2SingleProductRay",
            RangeClass::Dim2ProductSpannedTwoRays(..) => "Dim2ProductSpannedTwoRays",
            RangeClass::Dim2ProductSpannedContinuum => "Dim2ProductSpannedContinuum",
            RangeClass::Dim3ProductSpanned(_) => "Dim3ProductSpanned",
            RangeClass::Dim4FullSpace => "Dim4FullSpace",
        }
    }

    pub fn product_rays(&self) -> Vec<ProductRay<T>> {
        match self {
            RangeClass::Dim1Product(r) | RangeClass::Dim2SingleProductRay(r) => vec![*r],
            RangeClass::Dim2ProductSpannedTwoRays(r, s) => vec![*r, *s],
            RangeClass::Dim3ProductSpanned(rays) => rays.to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn is_w_class(&self) -> bool {
        matches!(self, RangeClass::Dim2SingleProductRay(_))
    }

    /// True when the range admits a basis of product states.
    pub fn is_product_spanned(&self) -> bool {
        !matches!(self, RangeClass::Dim1Entangled | RangeClass::Dim2SingleProductRay(_))
    }
}

impl<T: Real> fmt::Display for RangeClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Coefficients of `det(aV + bW) = c20·a² + c11·ab + c02·b²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantQuadratic<T: Real> {
    pub c20: C<T>,
    pub c11: C<T>,
    pub c02: C<T>,
}

impl<T: Real> DeterminantQuadratic<T> {
    pub fn from_basis(v: &PureState2Q<T>, w: &PureState2Q<T>) -> Self {
        let mv = reshape_to_matrix(v);
        let mw = reshape_to_matrix(w);
        let dv = det2(&mv);
        let dw = det2(&mw);
        let dsum = det2(&(&mv + &mw));
        Self { c20: dv, c11: dsum - dv - dw, c02: dw }
    }

    pub fn scale(&self) -> T {
        self.c20.norm() + self.c11.norm() + self.c02.norm()
    }

    pub fn discriminant(&self) -> C<T> {
        self.c11 * self.c11 - self.c20 * self.c02.scale(T::lit(4.0))
    }

    /// `|disc| / (|c20| + |c11| + |c02|)²`.
    pub fn relative_discriminant(&self) -> T {
        let s = self.scale();
        if s == T::zero() {
            return T::zero();
        }
        self.discriminant().norm() / (s * s)
    }

    pub fn eval(&self, a: C<T>, b: C<T>) -> C<T> {
        self.c20 * a * a + self.c11 * a * b + self.c02 * b * b
    }

    /// Projective root of multiplicity two, assuming the discriminant vanishes.
    fn double_root(&self) -> (C<T>, C<T>) {
        let two = T::lit(2.0);
        // b/a = −c11/(2 c02) = −2 c20/c11: take the better conditioned form
        let r1 = (self.c02.scale(two), -self.c11);
        let r2 = (-self.c11, self.c20.scale(two));
        let n1 = r1.0.norm_sqr() + r1.1.norm_sqr();
        let n2 = r2.0.norm_sqr() + r2.1.norm_sqr();
        if n1 >= n2 {
            r1
        } else {
            r2
        }
    }

    /// The two projective roots, via the cancellation-free quadratic formula.
    fn simple_roots(&self) -> [(C<T>, C<T>); 2] {
        let sq = self.discriminant().sqrt();
        let sign = if (self.c11.conj() * sq).re >= T::zero() { T::one() } else { -T::one() };
        let q = (self.c11 + sq.scale(sign)).scale(T::lit(-0.5));
        // t = b/a solves c02 t² + c11 t + c20 = 0 with t₁ = q/c02, t₂ = c20/q
        [(self.c02, q), (q, self.c20)]
    }
}

fn combination<T: Real>(v: &PureState2Q<T>, w: &PureState2Q<T>, a: C<T>, b: C<T>) -> CMatrix<T> {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a.unscale(n), b.unscale(n));
    let amps: Vec<C<T>> = v.as_slice().iter().zip(w.as_slice()).map(|(&x, &y)| a * x + b * y).collect();
    CMatrix::from_vec(2, 2, amps)
}

/// Two-dimensional classification with its numerical margins.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneClassification<T: Real> {
    pub class: RangeClass<T>,
    pub quadratic: DeterminantQuadratic<T>,
    pub relative_discriminant: T,
}

/// Classifies a two-dimensional subspace by the root structure of its
/// determinant quadratic.
pub fn classify_2d_subspace<T: Real>(sub: &Subspace<T>, tols: &Tolerances<T>) -> Result<RangeClass<T>> {
    classify_plane(sub, tols).map(|p| p.class)
}

pub fn classify_plane<T: Real>(sub: &Subspace<T>, tols: &Tolerances<T>) -> Result<PlaneClassification<T>> {
    if sub.dim() != 2 {
        return Err(Error::WrongSubspaceDimension { expected: 2, found: sub.dim() });
    }
    let dev = sub.gram_deviation();
    if !(dev <= sub.tol()) {
        return Err(Error::DegenerateBasis { deviation: dev.as_f64() });
    }
    let (v, w) = (&sub.basis()[0], &sub.basis()[1]);
    let quad = DeterminantQuadratic::from_basis(v, w);
    let rel = quad.relative_discriminant();
    // orthonormal basis: the quadratic's natural scale is one
    let zero = tols.zero_quadratic;
    let class = if quad.c20.norm() <= zero && quad.c11.norm() <= zero && quad.c02.norm() <= zero {
        RangeClass::Dim2ProductSpannedContinuum
    } else if rel <= tols.degeneracy {
        let (a, b) = quad.double_root();
        let ray = ProductRay::from_amplitude_matrix(&combination(v, w, a, b))
            .expect("nonzero combination of independent vectors");
        RangeClass::Dim2SingleProductRay(ray)
    } else {
        let [r1, r2] = quad.simple_roots();
        let ray1 = ProductRay::from_amplitude_matrix(&combination(v, w, r1.0, r1.1)).expect("nonzero combination");
        let ray2 = ProductRay::from_amplitude_matrix(&combination(v, w, r2.0, r2.1)).expect("nonzero combination");
        RangeClass::Dim2ProductSpannedTwoRays(ray1, ray2)
    };
    Ok(PlaneClassification { class, quadratic: quad, relative_discriminant: rel })
}

/// Three product rays spanning a three-dimensional subspace.
///
/// The orthocomplement is a single vector with Schmidt form
/// `α|e₀f₀⟩ + β|e₁f₁⟩`; in that local basis the subspace is spanned by
/// `|e₁f₀⟩`, `|e₀f₁⟩` and `(β|e₀⟩ − α|e₁⟩)(|f₀⟩ + |f₁⟩)/√2`.
pub fn product_basis_dim3<T: Real>(sub: &Subspace<T>) -> Result<[ProductRay<T>; 3]> {
    if sub.dim() != 3 {
        return Err(Error::WrongSubspaceDimension { expected: 3, found: sub.dim() });
    }
    let mut proj = CMatrix::identity(4);
    for b in sub.basis() {
        proj = &proj - &b.projector();
    }
    let eig = hermitian_eig(&proj.hermitian_part(), T::infinity())?;
    let perp = &eig.vectors[0];
    let schmidt = qstate::schmidt_decompose(perp, (2, 2), T::lit(1e-6))?;
    let (alpha, beta) = (schmidt.coefficients[0], schmidt.coefficients[1]);
    let (e0, e1) = (&schmidt.left[0], &schmidt.left[1]);
    let (f0, f1) = (&schmidt.right[0], &schmidt.right[1]);
    let q = |v: &[C<T>]| Qubit1State::from_unnormalized(v).expect("unit Schmidt vector");

    let h = T::FRAC_1_SQRT_2();
    let mixed_a: Vec<C<T>> = e0.iter().zip(e1).map(|(&x, &y)| x.scale(beta) - y.scale(alpha)).collect();
    let plus_b: Vec<C<T>> = f0.iter().zip(f1).map(|(&x, &y)| (x + y).scale(h)).collect();
    Ok([ProductRay::new(q(e1), q(f0)), ProductRay::new(q(e0), q(f1)), ProductRay::new(q(&mixed_a), q(&plus_b))])
}

/// Eigenvectors of `state` whose eigenvalue exceeds `rank_tol · λ_max`.
pub fn range_basis<T: Real>(state: &DensityMatrix2Q<T>, rank_tol: T) -> Subspace<T> {
    let eig = state.eig();
    let rank = eig.numerical_rank(rank_tol).max(1);
    let basis =
        eig.vectors[..rank].iter().map(|v| PureState2Q::from_unnormalized(v).expect("unit eigenvector")).collect();
    Subspace::new(basis, T::epsilon().sqrt())
}

/// How far the spectrum sits from the rank threshold, and for planes how far
/// the discriminant sits from the degeneracy threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeMargins<T: Real> {
    pub rank_tol: T,
    /// Smallest retained eigenvalue divided by `λ_max`.
    pub smallest_kept_ratio: T,
    /// Largest discarded eigenvalue divided by `λ_max` (zero at full rank).
    pub largest_dropped_ratio: T,
    pub relative_discriminant: Option<T>,
    pub degeneracy_tol: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeAnalysis<T: Real> {
    pub rank: usize,
    pub eigenvalues: Vec<T>,
    pub subspace: Subspace<T>,
    pub class: RangeClass<T>,
    pub margins: RangeMargins<T>,
}

pub fn analyze_range<T: Real>(state: &DensityMatrix2Q<T>, tols: &Tolerances<T>) -> Result<RangeAnalysis<T>> {
    let eig = state.eig();
    let sub = range_basis(state, tols.rank);
    let rank = sub.dim();
    let lmax = eig.max_value();
    let ratio = |l: T| if lmax > T::zero() { l / lmax } else { T::zero() };
    let smallest_kept_ratio = ratio(eig.values[rank - 1]);
    let largest_dropped_ratio = eig.values.get(rank).map_or(T::zero(), |&l| ratio(l.max(T::zero())));

    let mut relative_discriminant = None;
    let class = match rank {
        1 => {
            let v = &sub.basis()[0];
            if qstate::product_determinant(v.as_slice()).norm() <= tols.product {
                let ray = ProductRay::from_amplitude_matrix(&reshape_to_matrix(v)).expect("unit vector");
                RangeClass::Dim1Product(ray)
            } else {
                RangeClass::Dim1Entangled
            }
        }
        2 => {
            let plane = classify_plane(&sub, tols)?;
            relative_discriminant = Some(plane.relative_discriminant);
            plane.class
        }
        3 => RangeClass::Dim3ProductSpanned(product_basis_dim3(&sub)?),
        _ => RangeClass::Dim4FullSpace,
    };
    Ok(RangeAnalysis {
        rank,
        eigenvalues: eig.values,
        subspace: sub,
        class,
        margins: RangeMargins {
            rank_tol: tols.rank,
            smallest_kept_ratio,
            largest_dropped_ratio,
            relative_discriminant,
            degeneracy_tol: tols.degeneracy,
        },
    })
}

/// Range classification of a state: rank 1 by the determinant test, rank 2 by
/// the determinant quadratic, rank 3 always product spanned, rank 4 the whole space.
pub fn classify_range<T: Real>(state: &DensityMatrix2Q<T>, tols: &Tolerances<T>) -> Result<RangeClass<T>> {
    analyze_range(state, tols).map(|a| a.class)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleCopyVerdict {
    pub purifiable: bool,
    pub reason: String,
}

/// A single copy can only be "purified" if it is already a pure entangled
/// state: a local filter of full rank on each qubit is injective and cannot
/// merge the range of a mixed state onto one ray, while a rank-one local
/// filter destroys the entanglement.
pub fn purifiable_single_copy<T: Real>(state: &DensityMatrix2Q<T>, tols: &Tolerances<T>) -> Result<SingleCopyVerdict> {
    let analysis = analyze_range(state, tols)?;
    Ok(match analysis.class {
        RangeClass::Dim1Entangled => {
            SingleCopyVerdict { purifiable: true, reason: "already a pure entangled state".into() }
        }
        RangeClass::Dim1Product(_) => {
            SingleCopyVerdict { purifiable: false, reason: "pure product state carries no entanglement".into() }
        }
        ref class => SingleCopyVerdict {
            purifiable: false,
            reason: format!("mixed state of rank {} ({class}): a single copy cannot be purified", analysis.rank),
        },
    })
}

/// `n` copies purify to a pure entangled state iff `n ≥ 2` and the range
/// contains exactly one product ray.
pub fn purifiable_n_copies<T: Real>(state: &DensityMatrix2Q<T>, n: usize, tols: &Tolerances<T>) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    Ok(classify_range(state, tols)?.is_w_class())
}

/// `|00⟩` as an amplitude vector, handy for kernel checks.
pub fn ket00<T: Real>() -> Vec<C<T>> {
    let mut v = vec![czero(); 4];
    v[0] = C::new(T::one(), T::zero());
    v
}
