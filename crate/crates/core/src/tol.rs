//! Numerical thresholds. Every decision in the library reads its boundary
//! from here; nothing is hard-coded in the algorithms.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances<T> {
    /// Hermiticity, trace and positivity checks on input states.
    pub validation: T,
    /// Reconstruction identities (spectral, Schmidt, canonical round trip).
    pub reconstruction: T,
    /// Eigenvalues above `rank · λ_max` count towards the numerical rank.
    pub rank: T,
    /// Relative discriminant threshold separating a double product ray from two rays.
    pub degeneracy: T,
    /// Determinant-quadratic coefficients below this vanish identically.
    pub zero_quadratic: T,
    /// `|det|` of a reshaped unit vector below this marks a product state.
    pub product: T,
    /// Residual allowed between a state and the canonical form a protocol was built from.
    pub consistency: T,
    /// Allowed gap between channel trace and the analytic success probability.
    pub probability: T,
    /// Output is rank one when `λ₂ ≤ output_rank · λ₁`.
    pub output_rank: T,
    /// Allowed deviation of output Schmidt coefficients from `(1/√2, 1/√2)`.
    pub schmidt: T,
    /// `|γ|` below this is snapped to zero during canonicalization.
    pub gamma_snap: T,
    /// `|αβ′ − α′β|` below this is reported as a tie.
    pub tie: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            validation: T::lit(1e-9),
            reconstruction: T::lit(1e-10),
            rank: T::lit(1e-9),
            degeneracy: T::lit(1e-8),
            zero_quadratic: T::lit(1e-10),
            product: T::lit(1e-9),
            consistency: T::lit(1e-8),
            probability: T::lit(1e-9),
            output_rank: T::lit(1e-10),
            schmidt: T::lit(1e-9),
            gamma_snap: T::lit(1e-12),
            tie: T::lit(1e-12),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Defaults with the validation and rank thresholds replaced by `tol`.
    pub fn with_tol(tol: T) -> Self {
        Self { validation: tol, rank: tol, ..Self::default() }
    }

    /// Thresholds scaled for single precision.
    pub fn single_precision() -> Self {
        Self {
            validation: T::lit(1e-5),
            reconstruction: T::lit(1e-5),
            rank: T::lit(1e-5),
            degeneracy: T::lit(1e-3),
            zero_quadratic: T::lit(1e-5),
            product: T::lit(1e-4),
            consistency: T::lit(1e-4),
            probability: T::lit(1e-5),
            output_rank: T::lit(1e-5),
            schmidt: T::lit(1e-4),
            gamma_snap: T::lit(1e-6),
            tie: T::lit(1e-6),
        }
    }
}
