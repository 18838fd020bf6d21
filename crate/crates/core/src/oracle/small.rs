//! Allocation-free Hermitian eigensolver for the search's inner loop.

use num_complex::Complex64;

/// Eigenvalues (descending) and eigenvectors of a Hermitian `n×n` matrix,
/// `n ≤ N`; `vector(k)` belongs to `vals[k]`.
pub(crate) struct SmallEig<const N: usize> {
    pub n: usize,
    pub vals: [f64; N],
    vecs: [[Complex64; N]; N],
}

impl<const N: usize> SmallEig<N> {
    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vecs[k][..self.n]
    }
}

/// Cyclic Jacobi on the row-major `n×n` matrix `input[..n*n]`.
pub(crate) fn eig<const N: usize>(input: &[Complex64], n: usize, want_vectors: bool) -> SmallEig<N> {
    assert!(n <= N);
    let mut a = [[Complex64::default(); N]; N];
    for i in 0..n {
        a[i][..n].copy_from_slice(&input[i * n..(i + 1) * n]);
    }
    // columns of v are eigenvectors
    let mut v = [[Complex64::default(); N]; N];
    for (i, row) in v.iter_mut().enumerate().take(n) {
        row[i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = a.iter().flat_map(|r| r.iter()).map(|z| z.norm_sqr()).sum();
    for _ in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i][j].norm_sqr();
                }
            }
        }
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                let g = apq.norm();
                if !g.is_normal() {
                    continue;
                }
                let phase = apq / g;
                let phase = phase / phase.norm();
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * g);
                let t = {
                    let mag = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -mag
                    } else {
                        mag
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = [[c, s], [-s·conj(phase), c·conj(phase)]] on columns p, q
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = phase.conj() * -s;
                let g_qq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * g_pp + akq * g_qp;
                    a[k][q] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q][k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[k][p];
                        let vkq = v[k][q];
                        v[k][p] = vkp * g_pp + vkq * g_qp;
                        v[k][q] = vkp * g_pq + vkq * g_qq;
                    }
                }
            }
        }
    }
    let mut order = [0usize; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order[..n].sort_by(|&x, &y| a[y][y].re.total_cmp(&a[x][x].re));
    let mut out = SmallEig { n, vals: [0.0; N], vecs: [[Complex64::default(); N]; N] };
    for (k, &i) in order[..n].iter().enumerate() {
        out.vals[k] = a[i][i].re;
        if want_vectors {
            for r in 0..n {
                out.vecs[k][r] = v[r][i];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_hermitian() {
        let n = 5;
        let mut a = vec![Complex64::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                let z = Complex64::new((i * 3 + j) as f64 % 1.7, (i as f64 - j as f64) * 0.3);
                a[i * n + j] += z;
                a[j * n + i] += z.conj();
            }
        }
        let e = eig::<8>(&a, n, true);
        for k in 0..n {
            let v = e.vector(k);
            for i in 0..n {
                let av: Complex64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
                assert!((av - v[i] * e.vals[k]).norm() < 1e-12);
            }
        }
        assert!(e.vals.windows(2).take(n - 1).all(|w| w[0] >= w[1]));
    }
}
