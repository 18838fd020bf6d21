//! Exact entanglement purification of two-qubit mixed states from two copies.
//!
//! The state types, range classification, canonical forms and protocol are
//! generic over the scalar ([`scalar::Real`], implemented for `f32` and `f64`).
//! The numerical oracles and the JSON layer work in `f64`; the aliases below
//! name the `f64` instances.
//!
//! ```
//! use purify_core::{purify_pair, reconstruct, Tolerances, WCanonicalForm};
//!
//! let tols = Tolerances::default();
//! let rho = reconstruct(&WCanonicalForm::from_params(0.5, 0.6, 0.8, 0.0), &tols)?;
//! let report = purify_pair(&rho, &rho, &tols)?;
//! assert!(report.verdict.is_purifiable());
//! assert!((report.probability - 0.1152).abs() < 1e-12);
//! # Ok::<(), purify_core::Error>(())
//! ```

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod protocol;
pub mod qstate;
pub mod range;
pub mod sample;
pub mod scalar;
pub mod tol;

pub use canonical::{reconstruct, w_canonicalize};
pub use error::{Error, Result};
pub use oracle::{sample_product_zeros, search_best_protocol, ProductZeros, SearchConfig, SearchResult};
pub use protocol::{apply_protocol, build_protocol, optimal_probability, procrustean_step, purify_pair, Verdict};
pub use qstate::{Party, SystemOrder};
pub use range::{analyze_range, classify_2d_subspace, classify_range, purifiable_n_copies, purifiable_single_copy};
pub use scalar::Real;

pub type Qubit1State = qstate::Qubit1State<f64>;
pub type PureState2Q = qstate::PureState2Q<f64>;
pub type DensityMatrix2Q = qstate::DensityMatrix2Q<f64>;
pub type DensityMatrix4Q = qstate::DensityMatrix4Q<f64>;
pub type LocalOperator2Q = qstate::LocalOperator2Q<f64>;
pub type Subspace = range::Subspace<f64>;
pub type ProductRay = range::ProductRay<f64>;
pub type RangeClass = range::RangeClass<f64>;
pub type WCanonicalForm = canonical::WCanonicalForm<f64>;
pub type ProtocolOperators = protocol::ProtocolOperators<f64>;
pub type PurificationReport = protocol::PurificationReport<f64>;
pub type Tolerances = tol::Tolerances<f64>;
pub type CMatrix = linalg::CMatrix<f64>;
