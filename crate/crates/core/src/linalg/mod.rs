//! Small dense complex linear algebra.
//!
//! Matrices here are at most 16×16, so everything is a row-major `Vec` and
//! the algorithms favour accuracy and determinism over asymptotic speed.

mod eig;
mod svd;

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::scalar::{czero, Real, C};

pub(crate) use eig::fix_phase;
pub use eig::{hermitian_eig, HermitianEig};
pub use svd::{svd, Svd};

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn diagonal(values: &[C<T>]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { czero() })
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[C<T>]) -> Self {
        Self::outer(v, v)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C<T>]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(C::new(s, T::zero()))
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest entrywise deviation from Hermiticity, `max |a_ij − conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> T {
        assert!(self.is_square());
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|&z| crate::scalar::is_finite(z))
    }

    /// Kronecker product `self ⊗ other`, row index `i·rows(other) + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| self[(i / r2, j / c2)] * other[(i % r2, j % c2)])
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(czero(), |acc, (&a, &x)| acc + a * x)).collect()
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &[C<T>], v: &[C<T>]) -> C<T> {
        inner(u, &self.mul_vec(v))
    }

    /// `A X A†`.
    pub fn conjugate(&self, x: &Self) -> Self {
        &(self * x) * &self.adjoint()
    }

    /// Maps every entry through `f`, keeping the shape.
    pub fn map<U: Real>(&self, f: impl Fn(C<T>) -> C<U>) -> CMatrix<U> {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<C<T>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] = out.data[i * rhs.cols + j] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
}

pub fn norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Returns `v/‖v‖`, or `None` for a zero vector.
pub fn normalized<T: Real>(v: &[C<T>]) -> Option<Vec<C<T>>> {
    let n = norm(v);
    if n > T::zero() && n.is_finite() {
        Some(v.iter().map(|&z| z.unscale(n)).collect())
    } else {
        None
    }
}

pub fn kron_vec<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

pub fn axpy<T: Real>(alpha: C<T>, x: &[C<T>], y: &mut [C<T>]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

/// Norm of the component of `v` orthogonal to the span of the orthonormal
/// vectors `basis`.
pub fn residual_from_span<T: Real>(v: &[C<T>], basis: &[Vec<C<T>>]) -> T {
    let mut r = v.to_vec();
    for b in basis {
        let coeff = inner(b, v);
        axpy(-coeff, b, &mut r);
    }
    norm(&r)
}

/// Extends an orthonormal family to an orthonormal basis of `C^dim`.
///
/// Candidates are the standard basis vectors in order, orthogonalized twice
/// (classical Gram-Schmidt with reorthogonalization); the result is
/// deterministic for fixed input.
pub fn complete_orthonormal<T: Real>(family: &[Vec<C<T>>], dim: usize) -> Vec<Vec<C<T>>> {
    let mut basis: Vec<Vec<C<T>>> = family.to_vec();
    let threshold = T::lit(1e-6);
    let mut candidates: Vec<usize> = (0..dim).collect();
    // most orthogonal candidates first keeps the completion well conditioned
    candidates.sort_by(|&a, &b| {
        let wa: T = basis.iter().map(|v| v[a].norm_sqr()).sum();
        let wb: T = basis.iter().map(|v| v[b].norm_sqr()).sum();
        wa.partial_cmp(&wb).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for k in candidates {
        if basis.len() == dim {
            break;
        }
        let mut e = vec![czero(); dim];
        e[k] = C::one();
        for _ in 0..2 {
            for b in &basis {
                let coeff = inner(b, &e);
                axpy(-coeff, b, &mut e);
            }
        }
        if norm(&e) > threshold {
            basis.push(normalized(&e).expect("nonzero"));
        }
    }
    basis
}

/// Maximum singular value (spectral norm) of a matrix.
pub fn operator_norm<T: Real>(a: &CMatrix<T>) -> T {
    svd(a).singular_values.first().copied().unwrap_or_else(T::zero)
}

/// Frobenius distance of `U†U` from the identity.
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> T {
    let g = &u.adjoint() * u;
    (&g - &CMatrix::identity(u.cols())).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn m(rows: &[&[(f64, f64)]]) -> CMatrix<f64> {
        CMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&(a, b)| c(a, b)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::<f64>::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_basis_kets() {
        let zero = [c(1.0, 0.0), c(0.0, 0.0)];
        let one = [c(0.0, 0.0), c(1.0, 0.0)];
        let v = kron_vec(&zero, &one);
        assert_eq!(v[1], c(1.0, 0.0));
        assert_eq!(norm(&v), 1.0);
    }

    #[test]
    fn product_and_adjoint() {
        let a = m(&[&[(1.0, 1.0), (2.0, 0.0)], &[(0.0, -1.0), (3.0, 0.5)]]);
        let ad = a.adjoint();
        assert_eq!(ad[(0, 1)], c(0.0, 1.0));
        let p = &a * &CMatrix::identity(2);
        assert_eq!(p, a);
        let g = &ad * &a;
        assert!(g.hermitian_deviation() < 1e-15);
    }

    #[test]
    fn completion_is_orthonormal() {
        let v = normalized(&[c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)]).unwrap();
        let basis = complete_orthonormal(&[v], 3);
        assert_eq!(basis.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let ip = inner(&basis[i], &basis[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }
}
