//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use std::cmp::Ordering;

use num_complex::Complex;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};

/// Spectral decomposition `A = Σ λ_k v_k v_k†`, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Real> {
    pub values: Vec<T>,
    /// Orthonormal eigenvectors, `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<C<T>>>,
}

impl<T: Real> HermitianEig<T> {
    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> CMatrix<T> {
        let n = self.values.len();
        let mut out = CMatrix::zeros(n, n);
        for (&lambda, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                let vi = v[i].scale(lambda);
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn max_value(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Number of eigenvalues strictly above `rel_tol · λ_max`.
    pub fn numerical_rank(&self, rel_tol: T) -> usize {
        let cut = rel_tol * self.max_value().max(T::zero());
        self.values.iter().filter(|&&l| l > cut).count()
    }
}

/// Unitary `G` (entries `g_pp, g_pq, g_qp, g_qq`) with `G† [[a_pp, a_pq], [a_pq*, a_qq]] G`
/// diagonal. Returns `None` when the block is already diagonal.
pub(crate) fn jacobi_rotation<T: Real>(app: T, aqq: T, apq: C<T>) -> Option<[C<T>; 4]> {
    let g = apq.norm();
    if !g.is_normal() {
        return None;
    }
    let phase = apq.unscale(g);
    let phase = phase.unscale(phase.norm());
    let theta = (aqq - app) / (g + g);
    let t = if theta.abs() > T::lit(1e150) {
        (theta + theta).recip()
    } else {
        let mag = (theta.abs() + (T::one() + theta * theta).sqrt()).recip();
        if theta < T::zero() {
            -mag
        } else {
            mag
        }
    };
    let cos = (T::one() + t * t).sqrt().recip();
    let sin = t * cos;
    let d = phase.conj();
    Some([Complex::new(cos, T::zero()), Complex::new(sin, T::zero()), d.scale(-sin), d.scale(cos)])
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within `tol` (entrywise); its Hermitian part is
/// diagonalized. Eigenvectors are phase-fixed so that their first
/// largest-magnitude component is real and positive, making the output a
/// deterministic function of the input bits.
pub fn hermitian_eig<T: Real>(a: &CMatrix<T>, tol: T) -> Result<HermitianEig<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".to_string(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let deviation = a.hermitian_deviation();
    if !(deviation <= tol) {
        return Err(Error::NotHermitian { deviation: deviation.as_f64() });
    }
    let n = a.rows();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
    }
    let mut v = CMatrix::<T>::identity(n);
    let eps = T::epsilon();

    for sweep in 0..64 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<T>()
            .sqrt();
        let scale = m.frobenius_norm();
        if off <= eps * scale * T::lit(1e-2) || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let g = apq.norm();
                if sweep > 3 && g * T::lit(1e3) + app.abs() == app.abs() && g * T::lit(1e3) + aqq.abs() == aqq.abs() {
                    m[(p, q)] = czero();
                    m[(q, p)] = czero();
                    continue;
                }
                let Some([gpp, gpq, gqp, gqq]) = jacobi_rotation(app, aqq, apq) else {
                    continue;
                };
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp * gpp + akq * gqp;
                    m[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    m[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                m[(p, q)] = czero();
                m[(q, p)] = czero();
                m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
                m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = order.iter().map(|&j| fix_phase(v.column(j))).collect();
    Ok(HermitianEig { values, vectors })
}

/// Rotates the global phase so the first component of (near) maximal
/// magnitude is real positive.
pub(crate) fn fix_phase<T: Real>(mut v: Vec<C<T>>) -> Vec<C<T>> {
    let max = v.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if max == T::zero() {
        return v;
    }
    let cut = max * (T::one() - T::lit(1e-8));
    if let Some(pivot) = v.iter().find(|z| z.norm() >= cut).copied() {
        let phase = pivot.conj().unscale(pivot.norm());
        for z in v.iter_mut() {
            *z = *z * phase;
        }
    }
    v
}
