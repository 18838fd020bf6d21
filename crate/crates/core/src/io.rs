//! JSON schemas for input states and for the analysis, protocol and search
//! reports, plus a writer that prints every float with 17 significant digits.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::canonical::{reconstruct, WCanonicalForm};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::oracle::{RestartSummary, SearchConfig, SearchResult};
use crate::protocol::{PurificationReport, Verdict};
use crate::qstate::{validate_density, DensityMatrix2Q, LocalOperator2Q, Qubit1State};
use crate::range::{purifiable_n_copies, purifiable_single_copy, RangeAnalysis};
use crate::tol::Tolerances;

pub type Cx = [f64; 2];
pub type MatrixJson = Vec<Vec<Cx>>;

pub fn cx(z: Complex64) -> Cx {
    [z.re, z.im]
}

pub fn matrix_json(m: &CMatrix<f64>) -> MatrixJson {
    (0..m.rows()).map(|i| m.row(i).iter().copied().map(cx).collect()).collect()
}

/// Parses a `rows × cols` matrix, rejecting ragged or misshapen input.
pub fn matrix_from_json(rows: &MatrixJson, n_rows: usize, n_cols: usize) -> Result<CMatrix<f64>> {
    let shape_ok = rows.len() == n_rows && rows.iter().all(|r| r.len() == n_cols);
    if !shape_ok {
        let found = rows.iter().map(|r| r.len().to_string()).collect::<Vec<_>>().join(",");
        return Err(Error::DimensionMismatch {
            expected: format!("{n_rows}x{n_cols}"),
            found: format!("{} rows of lengths [{found}]", rows.len()),
        });
    }
    let data = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    Ok(CMatrix::from_vec(n_rows, n_cols, data))
}

/// A two-qubit state as read from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Dense {
        matrix: MatrixJson,
    },
    /// `(u_a ⊗ u_b)† [p|Φ⟩⟨Φ| + (1−p)|00⟩⟨00|] (u_a ⊗ u_b)` with
    /// `Φ = γ|00⟩ + α|01⟩ + β|10⟩`; missing unitaries are the identity.
    WParam {
        p: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u_a: Option<MatrixJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u_b: Option<MatrixJson>,
    },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn dense(state: &DensityMatrix2Q<f64>) -> Self {
        Self::Dense { matrix: matrix_json(state.matrix()) }
    }

    pub fn w_param(form: &WCanonicalForm<f64>) -> Self {
        Self::WParam {
            p: form.p,
            alpha: form.alpha,
            beta: form.beta,
            gamma: form.gamma,
            u_a: Some(matrix_json(&form.u_a)),
            u_b: Some(matrix_json(&form.u_b)),
        }
    }

    /// Validated density matrix; `tols.validation` bounds Hermiticity, trace and
    /// positivity defects of dense input.
    pub fn to_state(&self, tols: &Tolerances<f64>) -> Result<DensityMatrix2Q<f64>> {
        match self {
            Self::Dense { matrix } => validate_density(matrix_from_json(matrix, 4, 4)?, tols.validation),
            Self::WParam { p, alpha, beta, gamma, u_a, u_b } => {
                let unitary = |u: &Option<MatrixJson>| match u {
                    Some(m) => matrix_from_json(m, 2, 2),
                    None => Ok(CMatrix::identity(2)),
                };
                let form =
                    WCanonicalForm::from_params(*p, *alpha, *beta, *gamma).with_unitaries(unitary(u_a)?, unitary(u_b)?);
                form.validate(tols)?;
                reconstruct(&form, tols)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayJson {
    pub a: [Cx; 2],
    pub b: [Cx; 2],
}

fn qubit_json(q: &Qubit1State<f64>) -> [Cx; 2] {
    let [a, b] = *q.amplitudes();
    [cx(a), cx(b)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginsJson {
    pub rank_tol: f64,
    pub smallest_kept_ratio: f64,
    pub largest_dropped_ratio: f64,
    pub relative_discriminant: Option<f64>,
    pub degeneracy_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopiesJson {
    pub n: usize,
    pub purifiable: bool,
}

/// Range classification of one state with its `n`-copy verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub rank: usize,
    pub class: String,
    pub eigenvalues: Vec<f64>,
    pub product_rays: Vec<RayJson>,
    pub margins: MarginsJson,
    pub single_copy_reason: String,
    pub n_copies: Vec<CopiesJson>,
    pub tolerances: Tolerances<f64>,
}

impl ClassificationReport {
    pub fn new(
        state: &DensityMatrix2Q<f64>,
        analysis: &RangeAnalysis<f64>,
        copies: &[usize],
        tols: &Tolerances<f64>,
    ) -> Result<Self> {
        let m = &analysis.margins;
        let n_copies = copies
            .iter()
            .map(|&n| Ok(CopiesJson { n, purifiable: purifiable_n_copies(state, n, tols)? }))
            .collect::<Result<_>>()?;
        Ok(Self {
            rank: analysis.rank,
            class: analysis.class.tag().to_string(),
            eigenvalues: analysis.eigenvalues.clone(),
            product_rays: analysis
                .class
                .product_rays()
                .iter()
                .map(|r| RayJson { a: qubit_json(&r.a), b: qubit_json(&r.b) })
                .collect(),
            margins: MarginsJson {
                rank_tol: m.rank_tol,
                smallest_kept_ratio: m.smallest_kept_ratio,
                largest_dropped_ratio: m.largest_dropped_ratio,
                relative_discriminant: m.relative_discriminant,
                degeneracy_tol: m.degeneracy_tol,
            },
            single_copy_reason: purifiable_single_copy(state, tols)?.reason,
            n_copies,
            tolerances: *tols,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorsJson {
    pub m: MatrixJson,
    pub n: MatrixJson,
    pub system_order: String,
}

impl OperatorsJson {
    pub fn new(m: &LocalOperator2Q<f64>, n: &LocalOperator2Q<f64>) -> Self {
        Self { m: matrix_json(m.matrix()), n: matrix_json(n.matrix()), system_order: "AA'|BB'".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub gamma_snapped: bool,
    pub u_a: MatrixJson,
    pub u_b: MatrixJson,
}

impl From<&WCanonicalForm<f64>> for FormJson {
    fn from(f: &WCanonicalForm<f64>) -> Self {
        Self {
            p: f.p,
            alpha: f.alpha,
            beta: f.beta,
            gamma: f.gamma,
            gamma_snapped: f.gamma_snapped,
            u_a: matrix_json(&f.u_a),
            u_b: matrix_json(&f.u_b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurificationJson {
    /// `"purifiable"` or `"not_purifiable"`.
    pub verdict: String,
    pub reason: Option<String>,
    pub probability: f64,
    pub classes: [String; 2],
    pub operators: Option<OperatorsJson>,
    pub expected_probability: Option<f64>,
    pub tie: Option<bool>,
    pub canon_a: Option<FormJson>,
    pub canon_b: Option<FormJson>,
    /// Normalized output ket, order `(A, A′, B, B′)`.
    pub output_vector: Option<Vec<Cx>>,
    pub schmidt_coefficients: Option<Vec<f64>>,
    pub schmidt_margin: Option<f64>,
    pub rank_ratio: Option<f64>,
    pub dense_probability: Option<f64>,
    /// `2c₂²` for inputs that are already pure and entangled.
    pub pure_input_probability: [Option<f64>; 2],
    pub tolerances: Tolerances<f64>,
}

impl PurificationJson {
    pub fn new(report: &PurificationReport<f64>, tols: &Tolerances<f64>) -> Self {
        let (verdict, reason) = match &report.verdict {
            Verdict::Purifiable => ("purifiable", None),
            Verdict::NotPurifiable(r) => ("not_purifiable", Some(r.clone())),
        };
        let ops = report.operators.as_ref();
        let out = report.output.as_ref();
        Self {
            verdict: verdict.into(),
            reason,
            probability: report.probability,
            classes: report.classes.clone(),
            operators: ops.map(|o| OperatorsJson::new(&o.m_aa, &o.n_bb)),
            expected_probability: ops.map(|o| o.expected_probability),
            tie: ops.map(|o| o.tie),
            canon_a: ops.map(|o| FormJson::from(&o.canon_a)),
            canon_b: ops.map(|o| FormJson::from(&o.canon_b)),
            output_vector: out.map(|o| o.vector.iter().copied().map(cx).collect()),
            schmidt_coefficients: out.map(|o| o.schmidt_coefficients.clone()),
            schmidt_margin: out.map(|o| o.schmidt_margin),
            rank_ratio: out.map(|o| o.rank_ratio),
            dense_probability: out.map(|o| o.dense_probability),
            pure_input_probability: report.pure_input_probability,
            tolerances: *tols,
        }
    }
}

/// Search outcome with the analytic optimum when both inputs are W class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchJson {
    pub config: SearchConfig,
    pub best_probability: f64,
    pub operators: OperatorsJson,
    pub output_purity: f64,
    pub output_schmidt_gap: f64,
    pub feasible: bool,
    pub best_restart: usize,
    pub feasible_restarts: usize,
    pub analytic_probability: Option<f64>,
    /// `best_probability − analytic_probability`.
    pub gap: Option<f64>,
    /// Feasible restarts within `1e-6` of the best probability, other than the best.
    pub near_ties: Vec<usize>,
    pub restarts: Vec<RestartSummary>,
}

impl SearchJson {
    pub fn new(cfg: &SearchConfig, r: &SearchResult, analytic: Option<f64>) -> Self {
        let near_ties = r
            .restarts
            .iter()
            .filter(|s| s.feasible && s.index != r.best_restart)
            .filter(|s| (s.probability - r.best_probability).abs() <= 1e-6)
            .map(|s| s.index)
            .collect();
        Self {
            config: *cfg,
            best_probability: r.best_probability,
            operators: OperatorsJson::new(&r.best_operators.0, &r.best_operators.1),
            output_purity: r.output_purity,
            output_schmidt_gap: r.output_schmidt_gap,
            feasible: r.feasible,
            best_restart: r.best_restart,
            feasible_restarts: r.feasible_restarts,
            analytic_probability: analytic,
            gap: analytic.map(|a| r.best_probability - a),
            near_ties,
            restarts: r.restarts.clone(),
        }
    }
}

/// Pretty JSON with two-space indentation, floats as `d.dddddddddddddddde±x`
/// (17 significant digits) and non-finite floats as `null`.
pub fn to_json_string<S: Serialize>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => out.push_str(&u.to_string()),
            (_, Some(i), _) => out.push_str(&i.to_string()),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&format!("{f:.16e}")),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            // arrays of scalars stay on one line
            if items.iter().all(|x| !x.is_array() && !x.is_object()) || items.iter().all(is_pair) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(x, depth, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(depth + 1, out);
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push('}');
        }
    }
}

fn is_pair(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState2Q;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = to_json_string(&vec![0.1, 1.0 / 3.0, -2.5e-300]).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1, 3.3333333333333331e-1, -2.5000000000000000e-300]\n");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0 / 3.0, -2.5e-300]);
    }

    #[test]
    fn dense_state_round_trips_bitwise() {
        let phi = PureState2Q::<f64>::phi_plus();
        let zero = PureState2Q::<f64>::basis(0);
        let rho = DensityMatrix2Q::mixture(&[(0.3, phi), (0.7, zero)], 1e-9).unwrap();
        let text = to_json_string(&StateSpec::dense(&rho)).unwrap();
        let back = StateSpec::from_json(&text).unwrap().to_state(&Tolerances::default()).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn w_param_defaults_to_identity_frames() {
        let spec = StateSpec::from_json(r#"{"kind":"w_param","p":0.5,"alpha":0.6,"beta":0.8,"gamma":0}"#).unwrap();
        let rho = spec.to_state(&Tolerances::default()).unwrap();
        // p|Φ⟩⟨Φ| with Φ = 0.6|01⟩ + 0.8|10⟩ plus (1−p)|00⟩⟨00|
        assert!((rho.matrix().as_slice()[5].re - 0.18).abs() < 1e-15);
        assert!((rho.matrix().as_slice()[0].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_shapes() {
        assert!(StateSpec::from_json(r#"{"kind":"dense","matrix":[],"x":1}"#).is_err());
        let spec = StateSpec::from_json(r#"{"kind":"dense","matrix":[[[1,0]]]}"#).unwrap();
        assert!(matches!(spec.to_state(&Tolerances::default()), Err(Error::DimensionMismatch { .. })));
        assert!(StateSpec::from_json(r#"{"kind":"dense","matrix":"#).is_err());
    }
}
