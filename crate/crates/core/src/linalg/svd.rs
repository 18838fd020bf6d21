//! One-sided (Hestenes) Jacobi singular value decomposition.

use std::cmp::Ordering;

use super::eig::jacobi_rotation;
use super::{complete_orthonormal, inner, norm, CMatrix};
use crate::scalar::{Real, C};

/// Thin SVD `A = U diag(s) V†` with `k = min(rows, cols)` singular triplets,
/// singular values descending. `U` and `V` have orthonormal columns; columns
/// belonging to (numerically) zero singular values are completed
/// deterministically.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: CMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: CMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> CMatrix<T> {
        let k = self.singular_values.len();
        let s = CMatrix::diagonal(&self.singular_values.iter().map(|&x| C::new(x, T::zero())).collect::<Vec<_>>());
        debug_assert_eq!(s.rows(), k);
        &(&self.u * &s) * &self.v.adjoint()
    }
}

pub fn svd<T: Real>(a: &CMatrix<T>) -> Svd<T> {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint());
        return Svd { u: t.v, singular_values: t.singular_values, v: t.u };
    }
    svd_tall(a)
}

fn svd_tall<T: Real>(a: &CMatrix<T>) -> Svd<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut w: Vec<Vec<C<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = CMatrix::<T>::identity(n);
    let eps = T::epsilon();

    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: T = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&w[p], &w[q]);
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() == T::zero() {
                    continue;
                }
                let Some([gpp, gpq, gqp, gqq]) = jacobi_rotation(alpha, beta, gamma) else {
                    continue;
                };
                rotated = true;
                for i in 0..m {
                    let (x, y) = (w[p][i], w[q][i]);
                    w[p][i] = x * gpp + y * gqp;
                    w[q][i] = x * gpq + y * gqq;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * gpp + y * gqp;
                    v[(i, q)] = x * gpq + y * gqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<T> = w.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    let smax = order.first().map_or(T::zero(), |&i| sigma[i]);
    let cut = smax * eps * T::lit((4 * m.max(n)) as f64);

    let mut u_cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    for &j in &order {
        if sigma[j] > cut && sigma[j] > T::zero() {
            u_cols.push(w[j].iter().map(|&z| z.unscale(sigma[j])).collect());
        } else {
            break;
        }
    }
    let kept = u_cols.len();
    if kept < n {
        let full = complete_orthonormal(&u_cols, m);
        u_cols.extend(full.into_iter().skip(kept).take(n - kept));
    }

    let mut u = CMatrix::zeros(m, n);
    let mut vs = CMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        u.set_column(k, &u_cols[k]);
        vs.set_column(k, &v.column(j));
    }
    Svd { u, singular_values: order.iter().map(|&j| sigma[j]).collect(), v: vs }
}
