//! Text and JSON rendering of check reports.

use gvir_core::diffop::DiffOp;
use gvir_core::{AlgebraSpec, CheckReport, Element, PairedElement, Residual, Scalar};
use gvir_core::expr::print_canonical;
use gvir_core::scalar::format_rational;
use serde_json::{json, Map, Value};

pub const ARTIFACT_VERSION: &str = "1";

fn element_json<S: Scalar>(e: &Element<S>) -> Value {
    let terms: Map<String, Value> = e
        .terms()
        .map(|(x, c)| (x.to_string(), Value::String(c.to_string())))
        .collect();
    json!({ "terms": terms, "theta": e.theta().to_string() })
}

fn paired_json<S: Scalar>(p: &PairedElement<S>) -> Value {
    json!({ "primal": element_json(&p.primal), "dual": element_json(&p.dual) })
}

fn operator_json<S: Scalar>(d: &DiffOp<S>) -> Value {
    let terms: Map<String, Value> = d
        .terms()
        .map(|((a, b), c)| (format!("x^{a}*d^{b}"), Value::String(c.to_string())))
        .collect();
    json!({ "operator": terms })
}

pub fn residual_json<S: Scalar>(r: &Residual<S>) -> Value {
    match r {
        Residual::Element(e) => element_json(e),
        Residual::Paired(p) => paired_json(p),
        Residual::Operator(d) => operator_json(d),
    }
}

pub fn report_json<S: Scalar>(r: &CheckReport<S>) -> Value {
    let cex: Vec<Value> = r
        .counterexamples
        .iter()
        .map(|c| json!({ "indices": c.indices, "residual": residual_json(&c.residual) }))
        .collect();
    json!({
        "check": r.check,
        "window": { "lo": r.window.lo, "hi": r.window.hi },
        "verdict": r.verdict.as_str(),
        "tuples_checked": r.tuples_checked,
        "counterexamples": cex,
        "undefined_points": r.undefined_points,
    })
}

pub fn spec_echo(spec: &AlgebraSpec) -> Value {
    json!({
        "f": print_canonical(&spec.f),
        "f_theta": spec.f_theta.as_ref().map(print_canonical),
        "a": format_rational(&spec.a),
        "b": format_rational(&spec.b),
        "eps": format_rational(&spec.eps),
        "scalar": spec.scalar_mode.to_string(),
    })
}

/// `{artifact_version, spec_echo, reports}`, pretty-printed with a trailing newline.
pub fn document(spec_echo: Value, reports: Vec<Value>) -> String {
    let doc = json!({
        "artifact_version": ARTIFACT_VERSION,
        "spec_echo": spec_echo,
        "reports": reports,
    });
    serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
}

fn tuple(t: &[i64]) -> String {
    let parts: Vec<String> = t.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Human summary: one headline, the first counterexample expanded, notes.
pub fn report_text<S: Scalar>(r: &CheckReport<S>) -> String {
    let poles = r.undefined_points.len();
    let mut out = format!(
        "{} on {}: {} ({} tuples, {} poles",
        r.check,
        r.window,
        r.verdict.as_str().to_uppercase(),
        r.tuples_checked,
        poles
    );
    if r.fails() {
        out.push_str(&format!(", {} failing", r.failures));
    }
    out.push_str(")\n");
    if let Some(c) = r.counterexamples.first() {
        out.push_str(&format!("  first counterexample {}: {}\n", tuple(&c.indices), c.residual));
    }
    for n in &r.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}
