//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use purify_cli::ExitStatus;
use purify_core::canonical::{reconstruct, w_canonicalize, WCanonicalForm};
use purify_core::linalg::{hermitian_eig, svd, CMatrix};
use purify_core::oracle::{sample_product_zeros, search_best_protocol, ProductZeros, SearchConfig};
use purify_core::protocol::purify_pair;
use purify_core::qstate::{min_partial_transpose_eigenvalue, product_determinant, DensityMatrix2Q, PureState2Q};
use purify_core::range::{classify_2d_subspace, product_basis_dim3, purifiable_n_copies, Subspace};
use purify_core::sample::{self, constructed_plane, PlaneKind};
use purify_core::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tols() -> Tolerances {
    Tolerances::default()
}

/// `p, q ∈ [0.05, 0.95]`, `(α, β, γ)` on the positive octant with `αβ > 0.01`,
/// in random local frames.
fn w_form(rng: &mut ChaCha8Rng) -> WCanonicalForm<f64> {
    sample::random_w_form((0.05, 0.95), 0.01, rng)
}

fn w_state(form: &WCanonicalForm<f64>) -> DensityMatrix2Q<f64> {
    reconstruct(form, &tols()).expect("valid form")
}

fn formula(a: &WCanonicalForm<f64>, b: &WCanonicalForm<f64>) -> f64 {
    2.0 * a.p * b.p * (a.alpha * b.beta).powi(2).min((b.alpha * a.beta).powi(2))
}

fn bell_mixture(p: f64) -> DensityMatrix2Q<f64> {
    DensityMatrix2Q::mixture(&[(p, PureState2Q::phi_plus()), (1.0 - p, PureState2Q::basis(0))], 1e-12)
        .expect("valid mixture")
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

/// Dense trace of the filtered pair against the closed form.
fn probability_formula() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (fa, fb) = (w_form(&mut rng), w_form(&mut rng));
        let report = purify_pair(&w_state(&fa), &w_state(&fb), &tols()).expect("W pair");
        let out = report.output.expect("purifiable");
        worst = worst.max((out.dense_probability - formula(&fa, &fb)).abs());
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-9 && within(t, 10.0),
        format!("max |trace − 2pq·min(α²β′², α′²β²)| = {worst:.2e}, {:.2} s", t.as_secs_f64()),
    )
}

/// Rank one and maximally entangled, checked on the dense 16×16 output.
fn output_certification() -> Outcome {
    let mut rng = rng(1);
    let (mut ratio, mut schmidt): (f64, f64) = (0.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..500 {
        let (fa, fb) = (w_form(&mut rng), w_form(&mut rng));
        let out = purify_pair(&w_state(&fa), &w_state(&fb), &tols()).unwrap().output.unwrap();
        let eig = hermitian_eig(out.state.matrix(), 1e-12).unwrap();
        ratio = ratio.max(eig.values[1].max(0.0) / eig.values[0]);
        let s = svd(&CMatrix::from_vec(4, 4, eig.vectors[0].clone())).singular_values;
        let dev = (s[0] - h).abs().max((s[1] - h).abs()).max(s[2]).max(s[3]);
        schmidt = schmidt.max(dev);
    }
    outcome(
        ratio <= 1e-10 && schmidt <= 1e-9,
        format!("max λ₂/λ₁ = {ratio:.2e}, max Schmidt deviation = {schmidt:.2e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(3);
    let mut planes: Vec<Subspace<f64>> = (0..500).map(|_| sample::random_subspace(2, &mut rng)).collect();
    let kinds = [PlaneKind::Continuum, PlaneKind::SingleRay, PlaneKind::TwoRays];
    planes.extend((0..50).map(|i| constructed_plane(kinds[i % 3], &mut rng)));
    let disagreements = planes
        .iter()
        .filter(|sub| {
            let class = classify_2d_subspace(sub, &tols()).unwrap();
            ProductZeros::of_class(&class) != Some(sample_product_zeros(sub, 48).unwrap())
        })
        .count();
    let t = start.elapsed();
    outcome(
        disagreements == 0 && within(t, 30.0),
        format!("{disagreements} disagreements over {} planes, {:.2} s", planes.len(), t.as_secs_f64()),
    )
}

fn dim3_construction() -> Outcome {
    let mut rng = rng(4);
    let (mut residual, mut det, mut rank_ok): (f64, f64, usize) = (0.0, 0.0, 0);
    for _ in 0..200 {
        let sub = sample::random_subspace(3, &mut rng);
        let rays: Vec<PureState2Q<f64>> = product_basis_dim3(&sub).unwrap().iter().map(|r| r.to_state()).collect();
        for v in &rays {
            residual = residual.max(sub.membership_residual(v.as_slice()));
            det = det.max(product_determinant(v.as_slice()).norm());
        }
        let gram = CMatrix::from_fn(3, 3, |i, j| purify_core::linalg::inner(rays[i].as_slice(), rays[j].as_slice()));
        if hermitian_eig(&gram, 1e-12).unwrap().numerical_rank(1e-10) == 3 {
            rank_ok += 1;
        }
    }
    outcome(
        residual <= 1e-8 && det <= 1e-8 && rank_ok == 200,
        format!("max residual = {residual:.2e}, max |det| = {det:.2e}, Gram rank 3 in {rank_ok}/200"),
    )
}

fn canonical_round_trip() -> Outcome {
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let form = w_form(&mut rng);
        let (ua, ub) = (sample::random_unitary(2, &mut rng), sample::random_unitary(2, &mut rng));
        let back = w_canonicalize(&w_state(&form).local_unitary(&ua, &ub), &tols()).unwrap();
        for (x, y) in [(back.p, form.p), (back.alpha, form.alpha), (back.beta, form.beta), (back.gamma, form.gamma)] {
            worst = worst.max((x - y).abs());
        }
    }
    outcome(worst <= 1e-8, format!("max parameter error = {worst:.2e}"))
}

fn necessary_condition() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let (mut npt, mut refused, mut infeasible) = (0, 0, 0);
    let mut best: f64 = 0.0;
    for i in 0..50 {
        let rho = bell_mixture(0.1 + 0.8 * i as f64 / 49.0);
        if min_partial_transpose_eigenvalue(&rho) < 0.0 {
            npt += 1;
        }
        if !purify_pair(&rho, &rho, &tols()).unwrap().verdict.is_purifiable() {
            refused += 1;
        }
        let result = search_best_protocol(&rho, &rho, &cfg).unwrap();
        if !result.feasible {
            infeasible += 1;
        }
        best = best.max(result.output_purity);
    }
    outcome(
        npt == 50 && refused == 50 && infeasible == 50,
        format!(
            "NPT {npt}/50, refused {refused}/50, search infeasible {infeasible}/50 (max output purity {best:.6}), {:.0} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn optimality_evidence() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(7);
    let cfg = SearchConfig::default();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut feasible = 0;
    for _ in 0..10 {
        let (fa, fb) = (w_form(&mut rng), w_form(&mut rng));
        let result = search_best_protocol(&w_state(&fa), &w_state(&fb), &cfg).unwrap();
        let gap = result.best_probability - formula(&fa, &fb);
        if result.feasible {
            feasible += 1;
            lo = lo.min(gap);
            hi = hi.max(gap);
        }
    }
    let t = start.elapsed();
    outcome(
        feasible == 10 && lo >= -1e-3 && hi <= 1e-6 && within(t, 300.0),
        format!("feasible {feasible}/10, gap ∈ [{lo:.2e}, {hi:.2e}], {:.0} s", t.as_secs_f64()),
    )
}

fn n_copy_matrix() -> Outcome {
    let mut rng = rng(8);
    let product = |rng: &mut ChaCha8Rng| PureState2Q::product(&sample::random_qubit(rng), &sample::random_qubit(rng));
    let separable = DensityMatrix2Q::mixture(&[(0.5, product(&mut rng)), (0.5, product(&mut rng))], 1e-12).unwrap();
    let states = [
        ("W class", w_state(&w_form(&mut rng)), true),
        ("product-spanned entangled", bell_mixture(0.5), false),
        ("separable", separable, false),
        ("pure Bell", DensityMatrix2Q::from_pure(&PureState2Q::phi_plus()), false),
    ];
    let mut mismatches = Vec::new();
    for (name, rho, w) in &states {
        for n in [1, 2, 5] {
            if purifiable_n_copies(rho, n, &tols()).unwrap() != (*w && n >= 2) {
                mismatches.push(format!("{name} n={n}"));
            }
        }
    }
    outcome(mismatches.is_empty(), format!("{} mismatches of 12 {:?}", mismatches.len(), mismatches))
}

fn write_state(name: &str, json: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn search_determinism() -> Outcome {
    let a = write_state("acceptance_a.json", r#"{"kind":"w_param","p":0.5,"alpha":0.6,"beta":0.8,"gamma":0}"#);
    let b = write_state("acceptance_b.json", r#"{"kind":"w_param","p":0.7,"alpha":0.48,"beta":0.6,"gamma":0.64}"#);
    let run = || {
        let mut out = Vec::new();
        let args = ["purify", "search", a.to_str().unwrap(), b.to_str().unwrap(), "--seed", "7", "--json"];
        let status = purify_cli::run(args, &mut out, &mut std::io::sink());
        (status, out)
    };
    let (first, second) = (run(), run());
    let same = first.1 == second.1 && first.0 == second.0;
    let ran = matches!(first.0, ExitStatus::Success | ExitStatus::NotPurifiable) && !first.1.is_empty();
    outcome(same && ran, format!("exit {}, {} bytes, identical: {same}", first.0.code(), first.1.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("probability formula", probability_formula),
        ("output certification", output_certification),
        ("classification oracle equivalence", oracle_equivalence),
        ("three-dimensional product basis", dim3_construction),
        ("canonicalization round trip", canonical_round_trip),
        ("product-spanned negatives", necessary_condition),
        ("search optimality evidence", optimality_evidence),
        ("n-copy predicate", n_copy_matrix),
        ("search determinism", search_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !result.pass {
            failed += 1;
        }
        println!("criterion {}: {} {name}: {}", i + 1, if result.pass { "PASS" } else { "FAIL" }, result.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
