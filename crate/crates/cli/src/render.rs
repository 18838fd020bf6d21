//! Plain-text views of the JSON report objects.

use std::fmt::Write;

use purify_core::io::{ClassificationReport, Cx, MatrixJson, OperatorsJson, PurificationJson, SearchJson};

fn complex(z: &Cx) -> String {
    let sign = if z[1] < 0.0 { '-' } else { '+' };
    format!("{:.6}{sign}{:.6}i", z[0], z[1].abs())
}

fn matrix(out: &mut String, label: &str, m: &MatrixJson) {
    let _ = writeln!(out, "  {label} =");
    for row in m {
        let cells: Vec<String> = row.iter().map(|z| format!("{:>20}", complex(z))).collect();
        let _ = writeln!(out, "    [{} ]", cells.join(""));
    }
}

fn operators(out: &mut String, ops: &OperatorsJson) {
    let _ = writeln!(out, "operators ({}):", ops.system_order);
    matrix(out, "m", &ops.m);
    matrix(out, "n", &ops.n);
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn classification(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "class: {}", r.class);
    let _ = writeln!(out, "rank: {}", r.rank);
    let eig: Vec<String> = r.eigenvalues.iter().map(|l| format!("{l:.6e}")).collect();
    let _ = writeln!(out, "eigenvalues: {}", eig.join(", "));
    if r.product_rays.is_empty() {
        let _ = writeln!(out, "product rays: none listed");
    } else {
        let _ = writeln!(out, "product rays:");
        for ray in &r.product_rays {
            let _ = writeln!(
                out,
                "  ({}, {}) ⊗ ({}, {})",
                complex(&ray.a[0]),
                complex(&ray.a[1]),
                complex(&ray.b[0]),
                complex(&ray.b[1])
            );
        }
    }
    let m = &r.margins;
    let _ = writeln!(
        out,
        "rank margins: smallest kept {:.3e}, largest dropped {:.3e} (tolerance {:.1e})",
        m.smallest_kept_ratio, m.largest_dropped_ratio, m.rank_tol
    );
    if let Some(d) = m.relative_discriminant {
        let _ = writeln!(out, "relative discriminant: {d:.3e} (degeneracy tolerance {:.1e})", m.degeneracy_tol);
    }
    let _ = writeln!(out, "n-copy purifiability:");
    for c in &r.n_copies {
        let _ = writeln!(out, "  n = {}: {}", c.n, yes_no(c.purifiable));
    }
    let _ = writeln!(out, "single copy: {}", r.single_copy_reason);
    let two = r.n_copies.iter().any(|c| c.n == 2 && c.purifiable);
    let _ = writeln!(out, "{} purifiable (n≥2): {}", r.class, yes_no(two));
    out
}

pub fn purification(r: &PurificationJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "classes: {}, {}", r.classes[0], r.classes[1]);
    match &r.reason {
        None => {
            let _ = writeln!(out, "verdict: purifiable");
        }
        Some(why) => {
            let _ = writeln!(out, "verdict: not purifiable ({why})");
        }
    }
    let _ = writeln!(out, "probability: {:.12}", r.probability);
    for (label, p) in ["first", "second"].iter().zip(&r.pure_input_probability) {
        if let Some(p) = p {
            let _ = writeln!(out, "{label} input is pure: single-copy filtering succeeds with probability {p:.12}");
        }
    }
    for (label, f) in [("first", &r.canon_a), ("second", &r.canon_b)] {
        if let Some(f) = f {
            let _ = writeln!(
                out,
                "{label} canonical form: p = {:.10}, alpha = {:.10}, beta = {:.10}, gamma = {:.10}{}",
                f.p,
                f.alpha,
                f.beta,
                f.gamma,
                if f.gamma_snapped { " (gamma snapped to 0)" } else { "" }
            );
        }
    }
    if let Some(ops) = &r.operators {
        operators(&mut out, ops);
    }
    if r.tie == Some(true) {
        let _ = writeln!(out, "note: alpha·beta' and alpha'·beta tie; m uses the first scaling");
    }
    if let (Some(rank), Some(margin), Some(dense)) = (r.rank_ratio, r.schmidt_margin, r.dense_probability) {
        let _ =
            writeln!(out, "certification: rank ratio {rank:.3e}, Schmidt margin {margin:.3e}, dense trace {dense:.12}");
    }
    out
}

pub fn search(r: &SearchJson) -> String {
    let mut out = String::new();
    let c = &r.config;
    let _ = writeln!(
        out,
        "search: seed {}, {} restarts × {} generations, purity_eps {:.1e}, entanglement_eps {:.1e}",
        c.seed, c.restarts, c.iterations_per_restart, c.purity_eps, c.entanglement_eps
    );
    let _ = writeln!(out, "best found: {:.12} (restart {})", r.best_probability, r.best_restart);
    match (r.analytic_probability, r.gap) {
        (Some(a), Some(g)) => {
            let _ = writeln!(out, "analytic optimum: {a:.12}");
            let _ = writeln!(out, "gap (found − optimum): {g:+.3e}");
        }
        _ => {
            let _ = writeln!(out, "analytic optimum: not applicable (inputs are not both W class)");
        }
    }
    if r.feasible {
        let _ = writeln!(out, "feasible: yes ({} of {} restarts)", r.feasible_restarts, r.restarts.len());
    } else {
        let _ = writeln!(out, "infeasible within budget");
    }
    let _ = writeln!(out, "output purity: {:.12}, Schmidt gap: {:.3e}", r.output_purity, r.output_schmidt_gap);
    if !r.near_ties.is_empty() {
        let ties: Vec<String> = r.near_ties.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "near ties (within 1e-6): restarts {}", ties.join(", "));
    }
    operators(&mut out, &r.operators);
    out
}
