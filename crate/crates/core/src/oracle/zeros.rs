//! Brute-force count of product vectors in a two-dimensional subspace, by
//! sampling `|det|` of the reshaped amplitudes over the projective line.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::range::{RangeClass, Subspace};

/// Number of product rays found in a plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductZeros {
    Finite(usize),
    /// `det` vanishes along a curve of the grid: every member is a product.
    Continuum,
}

impl ProductZeros {
    /// Zero structure implied by a two-dimensional range class.
    pub fn of_class<T: crate::scalar::Real>(class: &RangeClass<T>) -> Option<Self> {
        match class {
            RangeClass::Dim2ProductSpannedContinuum => Some(Self::Continuum),
            RangeClass::Dim2SingleProductRay(_) => Some(Self::Finite(1)),
            RangeClass::Dim2ProductSpannedTwoRays(..) => Some(Self::Finite(2)),
            _ => None,
        }
    }
}

/// `|det|` of a reshaped unit vector below this counts as zero.
const ZERO: f64 = 1e-9;
/// Rays closer than this chordal distance are the same zero.
const SEPARATION: f64 = 1e-4;

struct Plane {
    v: [Complex64; 4],
    w: [Complex64; 4],
}

impl Plane {
    /// `|det|` at the ray `a V + b W`, with `(a, b)` normalized first.
    fn abs_det(&self, a: Complex64, b: Complex64) -> f64 {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let x: Vec<Complex64> = (0..4).map(|i| (a * self.v[i] + b * self.w[i]) / n).collect();
        (x[0] * x[3] - x[1] * x[2]).norm()
    }
}

/// Point of the projective line in one of two affine charts:
/// `(1, t)` when `upper` is false, `(t, 1)` otherwise.
#[derive(Debug, Clone, Copy)]
struct ChartPoint {
    upper: bool,
    t: Complex64,
}

impl ChartPoint {
    fn from_angles(theta: f64, phi: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        if c >= s {
            Self { upper: false, t: Complex64::from_polar(s / c, phi) }
        } else {
            Self { upper: true, t: Complex64::from_polar(c / s, -phi) }
        }
    }

    fn coords(&self) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        if self.upper {
            (self.t, one)
        } else {
            (one, self.t)
        }
    }

    fn with_t(&self, t: Complex64) -> Self {
        Self { upper: self.upper, t }
    }
}

/// `√(1 − |⟨x|y⟩|²)` for the unit coefficient vectors of two rays.
fn chordal(x: &ChartPoint, y: &ChartPoint) -> f64 {
    let (a, b) = x.coords();
    let (c, d) = y.coords();
    let nx = a.norm_sqr() + b.norm_sqr();
    let ny = c.norm_sqr() + d.norm_sqr();
    let overlap = (a.conj() * c + b.conj() * d).norm_sqr() / (nx * ny);
    (1.0 - overlap).max(0.0).sqrt()
}

/// Golden-section minimum of `f` on `[lo, hi]`.
fn line_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

/// Alternating bracketed line searches along the real and imaginary axes of
/// the chart coordinate, halving the bracket each round.
fn refine(f: &impl Fn(&ChartPoint) -> f64, start: ChartPoint, width: f64) -> ChartPoint {
    let mut p = start;
    let mut h = width;
    while h > 1e-13 {
        let re = line_min(|x| f(&p.with_t(Complex64::new(x, p.t.im))), p.t.re - h, p.t.re + h);
        let im = line_min(|y| f(&p.with_t(Complex64::new(re, y))), p.t.im - h, p.t.im + h);
        p = p.with_t(Complex64::new(re, im));
        h *= 0.5;
    }
    p
}

/// Grid minimizer of `f` over `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`, and the number
/// of samples at or below `ZERO`.
fn grid_min(f: &impl Fn(&ChartPoint) -> f64, points: usize) -> (ChartPoint, usize) {
    let mut best = (ChartPoint::from_angles(0.0, 0.0), f64::INFINITY);
    let mut zeros = 0;
    for i in 0..points {
        let theta = std::f64::consts::FRAC_PI_2 * i as f64 / (points - 1) as f64;
        // the poles are single points
        let phis = if i == 0 || i + 1 == points { 1 } else { points };
        for j in 0..phis {
            let phi = std::f64::consts::TAU * j as f64 / points as f64;
            let p = ChartPoint::from_angles(theta, phi);
            let v = f(&p);
            if v <= ZERO {
                zeros += 1;
            }
            if v < best.1 {
                best = (p, v);
            }
        }
    }
    (best.0, zeros)
}

/// Counts the product rays of `sub` by sampling `|det(cos θ·V + e^{iφ} sin θ·W)|`
/// on a `grid_points × grid_points` grid and refining minima. The second zero
/// is sought on `|det| / d(·, z₁)`, so a double root is found once.
///
/// More than `grid_points` vanishing samples are reported as a continuum.
pub fn sample_product_zeros(sub: &Subspace<f64>, grid_points: usize) -> Result<ProductZeros> {
    if sub.dim() != 2 {
        return Err(Error::WrongSubspaceDimension { expected: 2, found: sub.dim() });
    }
    let points = grid_points.max(8);
    let basis = sub.basis();
    let plane = Plane {
        v: basis[0].as_slice().try_into().expect("four amplitudes"),
        w: basis[1].as_slice().try_into().expect("four amplitudes"),
    };
    let f = |p: &ChartPoint| {
        let (a, b) = p.coords();
        plane.abs_det(a, b)
    };
    let (start, vanishing) = grid_min(&f, points);
    if vanishing > points {
        return Ok(ProductZeros::Continuum);
    }
    let width = 4.0 * std::f64::consts::TAU / points as f64;
    let z1 = refine(&f, start, width);
    if f(&z1) > ZERO {
        return Ok(ProductZeros::Finite(0));
    }
    // z₁ itself is excluded: a sample landing on an exact zero would give 0/0
    let deflated = |p: &ChartPoint| {
        let d = chordal(p, &z1);
        if d < 1e-12 {
            f64::INFINITY
        } else {
            f(p) / d
        }
    };
    let (start, _) = grid_min(&deflated, points);
    let z2 = refine(&deflated, start, width);
    let distinct = f(&z2) <= ZERO && chordal(&z1, &z2) > SEPARATION;
    Ok(ProductZeros::Finite(if distinct { 2 } else { 1 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::range::ket00;

    fn plane(v: [f64; 4], w: [f64; 4]) -> Subspace<f64> {
        let c = |a: [f64; 4]| a.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        Subspace::spanned_by(&[c(v), c(w)], 1e-9).unwrap()
    }

    #[test]
    fn two_basis_products() {
        let sub = plane([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(sample_product_zeros(&sub, 64).unwrap(), ProductZeros::Finite(2));
    }

    #[test]
    fn double_root() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sub = plane([1.0, 0.0, 0.0, 0.0], [0.0, h, h, 0.0]);
        assert_eq!(sample_product_zeros(&sub, 64).unwrap(), ProductZeros::Finite(1));
    }

    #[test]
    fn all_products() {
        let sub = plane([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(sample_product_zeros(&sub, 64).unwrap(), ProductZeros::Continuum);
    }

    #[test]
    fn rejects_other_dimensions() {
        let sub = Subspace::spanned_by(&[ket00::<f64>()], 1e-9).unwrap();
        assert!(sample_product_zeros(&sub, 64).is_err());
    }
}
