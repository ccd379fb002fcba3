//! Subcommand implementations.

use std::io::Write;

use gvir_core::burgers::{
    emit_burgers, emit_extended_hydro, graded_truncate, lsa_table_check, parse_rho, parse_table, Format,
    TableText,
};
use gvir_core::cohomology::{
    delta1, kernel_basis, parse_cochain1, parse_cochain2, solve_coboundary, Cochain1Text, Cochain2,
    Cochain2Text, CoboundaryVerdict,
};
use gvir_core::diffop::{lk_suite, LkOptions, LK_CHECKS};
use gvir_core::extensions::{
    check_double_lsa, check_rho1_lift, check_rho2_compat, check_tstar_lsa, deform_product, Rho2,
};
use gvir_core::identities::{self as id, HereditaryVariant, JacobiForm, Mode};
use gvir_core::report::{sweep, Window};
use gvir_core::scalar::parse_rational;
use gvir_core::{
    parse_expr, print_canonical, Algebra, AlgebraSpec, CheckReport, DualRational, EndoSpec, Rational,
    Scalar, ScalarMode, Verdict,
};
use serde_json::{json, Value};

use crate::plan::{self, exit_code, limited, load_spec, parse_window, read, Expectations, InputError};
use crate::render::{document, report_json, report_text, spec_echo};
use crate::{BurgersArgs, CheckArgs, CohomologyArgs, ExtensionsArgs, LkArgs, OutputArgs};

type Res = Result<i32, InputError>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum OutFormat {
    Text,
    Json,
}

fn out_format(s: &str) -> Result<OutFormat, InputError> {
    match s {
        "text" => Ok(OutFormat::Text),
        "json" => Ok(OutFormat::Json),
        other => Err(InputError(format!("unknown format `{other}` (text | json)"))),
    }
}

fn io(e: std::io::Error) -> InputError {
    InputError(format!("write failed: {e}"))
}

/// Emits reports (tagged with the check name that requested them) and
/// returns the exit code implied by the expectations.
fn emit<S: Scalar>(
    reports: &[(String, CheckReport<S>)],
    echo: Value,
    warnings: &[String],
    o: &OutputArgs,
    out: &mut dyn Write,
) -> Res {
    let fmt = out_format(&o.format)?;
    let exp = Expectations::parse(&o.expect)?;
    let mut results = Vec::new();
    let mut text = String::new();
    for w in warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    for (requested, r) in reports {
        let want = exp.lookup(&r.check, requested);
        results.push((r.verdict, want));
        text.push_str(&report_text(r));
        if let Some(w) = want.filter(|w| *w != r.verdict) {
            text.push_str(&format!("  UNEXPECTED: expected {w}\n"));
        }
    }
    match fmt {
        OutFormat::Text => out.write_all(text.as_bytes()).map_err(io)?,
        OutFormat::Json => {
            let js = reports.iter().map(|(_, r)| report_json(r)).collect();
            out.write_all(document(echo, js).as_bytes()).map_err(io)?
        }
    }
    Ok(exit_code(&results))
}

// ------------------------------------------------------------------ check

/// Every check name accepted by `gvir check`, with its index count.
pub const CHECKS: [(&str, usize); 21] = [
    ("skew", 2),
    ("jacobi", 3),
    ("jacobi_tg", 3),
    ("lsa", 3),
    ("lsa_scalar", 3),
    ("assoc", 3),
    ("alternative", 2),
    ("derivation", 3),
    ("derivation_scalar", 3),
    ("cocycle", 3),
    ("hereditary", 2),
    ("bianchi", 3),
    ("rho_compat", 2),
    ("rho_compat_difference", 2),
    ("universal", 4),
    ("filippov", 5),
    ("bremner", 7),
    ("bmod", 4),
    ("bmod_jacobi", 6),
    ("crosscheck", 3),
    ("skew_system", 2),
];

fn default_window(arity: usize) -> Window {
    match arity {
        0..=3 => Window::symmetric(4),
        4 => Window::symmetric(3),
        5 => Window::symmetric(2),
        _ => Window::symmetric(1),
    }
}

fn variant(s: &str) -> Result<HereditaryVariant, InputError> {
    Ok(match s {
        "scalar_shift" => HereditaryVariant::ScalarShift,
        "general_table" => HereditaryVariant::GeneralTable,
        "shift1_table" => HereditaryVariant::Shift1Table,
        "element_def" => HereditaryVariant::ElementDef,
        other => return Err(InputError(format!("unknown hereditary variant `{other}`"))),
    })
}

struct CheckPlan {
    /// `(name, window)` in request order; `bmod` also schedules `bmod_jacobi`.
    items: Vec<(String, Window)>,
}

fn plan_checks(a: &CheckArgs) -> Result<CheckPlan, InputError> {
    let global = a.window.as_deref().map(parse_window).transpose()?;
    let mut overrides = std::collections::BTreeMap::new();
    for item in &a.window_for {
        let (name, w) = item
            .split_once('=')
            .ok_or_else(|| InputError(format!("--window-for expects name=lo..hi, got `{item}`")))?;
        overrides.insert(name.trim().to_string(), parse_window(w.trim())?);
    }
    let mut items = Vec::new();
    let mut requested: Vec<&str> = Vec::new();
    for name in a.checks.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        if !requested.contains(&name) {
            requested.push(name);
        }
    }
    for name in requested {
        let &(_, arity) = CHECKS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
            let names: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
            InputError(format!("unknown check `{name}` (known: {})", names.join(", ")))
        })?;
        let mut schedule = vec![(name, arity)];
        if name == "bmod" {
            schedule.push(("bmod_jacobi", 6));
        }
        for (n, ar) in schedule {
            // bmod_jacobi only follows an explicit override; the global window
            // would usually be far too large for six free indices.
            let w = overrides
                .get(n)
                .copied()
                .or(if n == "bmod_jacobi" { None } else { global })
                .unwrap_or_else(|| default_window(ar));
            items.push((n.to_string(), limited(n, w, ar)?));
        }
    }
    Ok(CheckPlan { items })
}

fn cochain2_as<S: Scalar>(psi: &Cochain2<Rational>) -> Cochain2<S> {
    let mut out = Cochain2::zero();
    for (i, j, v) in psi.entries() {
        out.set(i, j, S::from_rational(v)).expect("antisymmetric input");
    }
    out
}

fn run_checks<S: Scalar>(
    alg: &Algebra<S>,
    a: &CheckArgs,
    plan: &CheckPlan,
) -> Result<Vec<(String, CheckReport<S>)>, InputError> {
    let cap = a.out.cap;
    let endo: EndoSpec<S> = match &a.endo {
        Some(p) => plan::parse_endo(&read(p)?)?,
        None => EndoSpec::Shift(a.shift),
    };
    let bmod_jacobi = plan.items.iter().find(|(n, _)| n == "bmod_jacobi").map(|x| x.1);
    let mut out = Vec::new();
    for (name, w) in &plan.items {
        let w = *w;
        let mut push = |r: CheckReport<S>| out.push((name.clone(), r));
        match name.as_str() {
            "skew" => push(id::check_skew(alg, w, cap)),
            "jacobi" => push(id::check_jacobi(alg, w, cap, JacobiForm::J)),
            "jacobi_tg" => push(id::check_jacobi(alg, w, cap, JacobiForm::TG)),
            "lsa" => push(id::check_quasi_assoc(alg, w, cap, Mode::Element)),
            "lsa_scalar" => push(id::check_quasi_assoc(alg, w, cap, Mode::Scalar)),
            "assoc" => push(id::check_associativity(alg, w, cap)),
            "alternative" => {
                let (x, y) = id::check_alternative(alg, w, cap);
                push(x);
                push(y);
            }
            "derivation" => push(id::check_derivation(alg, w, cap, Mode::Element)),
            "derivation_scalar" => push(id::check_derivation(alg, w, cap, Mode::Scalar)),
            "cocycle" => {
                let path = a.psi.as_ref().ok_or_else(|| InputError("`cocycle` needs --psi FILE".into()))?;
                let psi = cochain2_as::<S>(&parse_cochain2(&read(path)?)?);
                push(id::check_cocycle(alg, w, cap, &psi));
            }
            "hereditary" => push(id::check_hereditary(alg, w, cap, &endo, variant(&a.variant)?)?),
            "bianchi" => push(id::check_bianchi_p(alg, w, cap, a.shift)),
            "rho_compat" => push(id::check_rho_compat(alg, w, cap, &endo, Mode::Element)?),
            "rho_compat_difference" => push(id::check_rho_compat(alg, w, cap, &endo, Mode::Scalar)?),
            "universal" => push(id::check_universal(alg, w, cap)),
            "filippov" => push(id::check_filippov(alg, w, cap)),
            "bremner" => push(id::check_bremner(alg, w, cap)),
            "bmod" => {
                let (s, j) = id::check_bmod(alg, w, bmod_jacobi.unwrap_or(w), cap);
                push(s);
                out.push(("bmod_jacobi".to_string(), j));
            }
            "bmod_jacobi" => {}
            "crosscheck" => {
                for r in id::crosscheck_virasoro_closed_forms(alg, w, cap) {
                    push(r);
                }
            }
            "skew_system" => push(id::check_skew_system(alg, w, cap)),
            other => unreachable!("validated check name {other}"),
        }
    }
    Ok(out)
}

pub fn check(a: &CheckArgs, out: &mut dyn Write) -> Res {
    let spec = load_spec(&a.spec)?;
    let plan = plan_checks(a)?;
    let echo = spec_echo(&spec);
    match spec.scalar_mode {
        ScalarMode::Rational => {
            let reports = run_checks(&Algebra::<Rational>::new(&spec), a, &plan)?;
            emit(&reports, echo, &spec.warnings, &a.out, out)
        }
        ScalarMode::Dual => {
            let reports = run_checks(&Algebra::<DualRational>::new(&spec), a, &plan)?;
            emit(&reports, echo, &spec.warnings, &a.out, out)
        }
    }
}

// ------------------------------------------------------------- cohomology

pub fn cohomology(a: &CohomologyArgs, out: &mut dyn Write) -> Res {
    let spec = load_spec(&a.spec)?;
    let w = limited(&a.action, parse_window(&a.window)?, 3)?;
    let alg = Algebra::<Rational>::new(&spec);
    let fmt = out_format(&a.out.format)?;
    fn need<'p>(p: &'p Option<std::path::PathBuf>, action: &str, flag: &str) -> Result<&'p std::path::Path, InputError> {
        p.as_deref().ok_or_else(|| InputError(format!("`{action}` needs --{flag} FILE")))
    }
    match a.action.as_str() {
        "delta1" => {
            let phi = parse_cochain1(&read(need(&a.phi, &a.action, "phi")?)?)?;
            let (psi, poles) = delta1(&alg, &phi, w)?;
            let mut text = Cochain2Text(&psi).to_string();
            for (i, j) in &poles {
                text.push_str(&format!("# pole {i} {j}\n"));
            }
            let body = match fmt {
                OutFormat::Text => text,
                OutFormat::Json => {
                    let entries: Vec<Value> =
                        psi.entries().map(|(i, j, v)| json!([i, j, v.to_string()])).collect();
                    document(spec_echo(&spec), vec![json!({ "psi": entries, "poles": poles })])
                }
            };
            out.write_all(body.as_bytes()).map_err(io)?;
            Ok(0)
        }
        "delta2" => {
            let psi = parse_cochain2(&read(need(&a.psi, &a.action, "psi")?)?)?;
            let mut r = id::check_cocycle(&alg, w, a.out.cap, &psi);
            // δ₂ on w reads ψ at index sums, i.e. on the doubled window.
            let (lo, hi) = psi
                .entries()
                .fold((i64::MAX, i64::MIN), |(lo, hi), (i, j, _)| (lo.min(i), hi.max(j)));
            let d = w.doubled();
            if lo <= hi && (d.lo < lo || d.hi > hi) {
                r = r.with_note(format!(
                    "psi is given on [{lo}, {hi}] but delta2 on {w} reads it on {d}; missing entries count as 0"
                ));
            }
            emit(&[("delta2".to_string(), r)], spec_echo(&spec), &spec.warnings, &a.out, out)
        }
        "solve" => {
            let psi = parse_cochain2(&read(need(&a.psi, &a.action, "psi")?)?)?;
            let verdict = solve_coboundary(&alg, &psi, w);
            // A solvable system is reported as `holds` for --expect purposes.
            let v = if verdict.is_solvable() { Verdict::Holds } else { Verdict::Fails };
            let exp = Expectations::parse(&a.out.expect)?;
            let body = match (&verdict, fmt) {
                (CoboundaryVerdict::Solution(phi), OutFormat::Text) => {
                    format!("solvable on {w} (window-relative)\n{}", Cochain1Text(phi))
                }
                (CoboundaryVerdict::Infeasible { combination, residual }, OutFormat::Text) => {
                    let mut s = format!("infeasible on {w} (window-relative); combination sums to 0 = {residual}\n");
                    for (eq, c) in combination {
                        s.push_str(&format!("  {c} x pair ({}, {}) rhs {}\n", eq.pair.0, eq.pair.1, eq.rhs));
                    }
                    s
                }
                (CoboundaryVerdict::Solution(phi), OutFormat::Json) => {
                    let phi: Vec<Value> = phi.phi.iter().map(|(x, v)| json!([x, v.to_string()])).collect();
                    document(spec_echo(&spec), vec![json!({ "solvable": true, "window": {"lo": w.lo, "hi": w.hi}, "phi": phi })])
                }
                (CoboundaryVerdict::Infeasible { combination, residual }, OutFormat::Json) => {
                    let comb: Vec<Value> = combination
                        .iter()
                        .map(|(eq, c)| json!({ "pair": [eq.pair.0, eq.pair.1], "multiplier": c.to_string(), "rhs": eq.rhs.to_string() }))
                        .collect();
                    document(spec_echo(&spec), vec![json!({ "solvable": false, "window": {"lo": w.lo, "hi": w.hi}, "combination": comb, "residual": residual.to_string() })])
                }
            };
            out.write_all(body.as_bytes()).map_err(io)?;
            Ok(exit_code(&[(v, exp.lookup("solve", "solve"))]))
        }
        "kernel" => {
            let basis = kernel_basis::<Rational, _>(&alg, w);
            let mut text = format!("kernel dimension {} on {w} (unknowns on {})\n", basis.len(), w.doubled());
            for (n, phi) in basis.iter().enumerate() {
                let vals: Vec<String> = phi.phi.iter().filter(|(_, v)| **v != Rational::from_integer(0.into())).map(|(x, v)| format!("{x}:{v}")).collect();
                text.push_str(&format!("  k{n}: {}\n", vals.join(" ")));
            }
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(0)
        }
        other => Err(InputError(format!("unknown cohomology action `{other}` (delta1 | delta2 | solve | kernel)"))),
    }
}

// ------------------------------------------------------------- extensions

fn style(s: &str) -> Result<Format, InputError> {
    s.parse().map_err(InputError)
}

pub fn extensions(a: &ExtensionsArgs, out: &mut dyn Write) -> Res {
    if a.action == "hydro" {
        let path = a.table.as_ref().ok_or_else(|| InputError("`hydro` needs --table FILE".into()))?;
        let t = parse_table(&read(path)?)?;
        let rho = a.rho.as_ref().map(|p| read(p).and_then(|s| Ok(parse_rho(&s)?))).transpose()?;
        if let Some(r) = &rho {
            if r.dim() != t.dim() {
                return Err(InputError(format!("rho has dim {} but the table has dim {}", r.dim(), t.dim())));
            }
        }
        out.write_all(emit_extended_hydro(&t, rho.as_ref(), style(&a.style)?).as_bytes()).map_err(io)?;
        return Ok(0);
    }
    let spec = load_spec(&a.spec)?;
    if spec.has_theta() {
        return Err(InputError("extensions need a spec without f_theta (θ has no dual)".into()));
    }
    let cap = a.out.cap;
    let w = parse_window(&a.window)?;
    let alg = Algebra::<Rational>::new(&spec);
    let reports: Vec<(String, CheckReport<Rational>)> = match a.action.as_str() {
        "tstar" => vec![("tstar".into(), check_tstar_lsa(&alg, limited("tstar", w, 4)?, cap))],
        "double" => vec![("double".into(), check_double_lsa(&alg, limited("double", w, 4)?, cap))],
        "rho1" => vec![("rho1".into(), check_rho1_lift(&alg, limited("rho1", w, 2)?, cap, a.shift))],
        "rho2" => {
            let [g, mu, nu] = &a.rho2[..] else {
                return Err(InputError("`rho2` needs --rho2 g,mu,nu".into()));
            };
            let q = |s: &String| parse_rational(s).map_err(InputError::from);
            let r2 = Rho2 { rho: EndoSpec::Shift(a.shift), g: q(g)?, mu: q(mu)?, nu: q(nu)? };
            vec![("rho2".into(), check_rho2_compat(&alg, limited("rho2", w, 2)?, cap, &r2))]
        }
        "deform" => {
            let w = limited("deform", w, 3)?;
            let dual = Algebra::<DualRational>::new(&spec);
            let rho = EndoSpec::Shift(a.shift);
            let d = deform_product(&dual, &rho);
            let lsa = id::check_quasi_assoc(&d, w, cap, Mode::Element);
            // Shown in the rational report list as an exact projection of
            // the dual report: verdicts and indices are what matter here.
            let compat = id::check_rho_compat(&alg, w, cap, &EndoSpec::Shift(a.shift), Mode::Element)?;
            let fmt = out_format(&a.out.format)?;
            let exp = Expectations::parse(&a.out.expect)?;
            let results = vec![
                (lsa.verdict, exp.lookup("deform_lsa", "deform")),
                (compat.verdict, exp.lookup(&compat.check, "deform")),
            ];
            let mut lsa = lsa;
            lsa.check = "deform_lsa".into();
            let body = match fmt {
                OutFormat::Text => report_text(&lsa) + &report_text(&compat),
                OutFormat::Json => document(spec_echo(&spec), vec![report_json(&lsa), report_json(&compat)]),
            };
            out.write_all(body.as_bytes()).map_err(io)?;
            return Ok(exit_code(&results));
        }
        other => {
            return Err(InputError(format!(
                "unknown extensions action `{other}` (tstar | double | deform | rho1 | rho2 | hydro)"
            )))
        }
    };
    emit(&reports, spec_echo(&spec), &spec.warnings, &a.out, out)
}

// --------------------------------------------------------------------- lk

pub fn lk(a: &LkArgs, out: &mut dyn Write) -> Res {
    if !(0..=8).contains(&a.pmax) {
        return Err(InputError(format!("--pmax {} outside 0..=8", a.pmax)));
    }
    if !(0..=2).contains(&a.bremner_pmax) {
        return Err(InputError(format!("--bremner-pmax {} outside 0..=2", a.bremner_pmax)));
    }
    let mut opts = LkOptions::new(a.pmax);
    opts.bremner_pmax = a.bremner_pmax;
    opts.cap = a.out.cap;
    if !a.checks.is_empty() {
        for c in &a.checks {
            if !LK_CHECKS.contains(&c.as_str()) {
                return Err(InputError(format!("unknown lk check `{c}` (known: {})", LK_CHECKS.join(", "))));
            }
        }
        opts.checks = a.checks.clone();
    }
    let reports: Vec<(String, CheckReport<Rational>)> =
        lk_suite(&opts).into_iter().map(|r| ("lk".to_string(), r)).collect();
    emit(&reports, json!({ "pmax": a.pmax, "bremner_pmax": a.bremner_pmax }), &[], &a.out, out)
}

// ---------------------------------------------------------------- burgers

pub fn burgers(a: &BurgersArgs, out: &mut dyn Write) -> Res {
    let table = || -> Result<_, InputError> {
        let path = a.table.as_ref().ok_or_else(|| InputError(format!("`{}` needs --table FILE", a.action)))?;
        Ok(parse_table(&read(path)?)?)
    };
    match a.action.as_str() {
        "check" => {
            let t = table()?;
            let (rel, def) = lsa_table_check(&t, a.out.cap);
            let agree = rel.verdict == def.verdict;
            let mut reports = vec![("check".to_string(), rel), ("check".to_string(), def)];
            if !agree {
                // Both methods are the same identity; disagreement is a bug.
                let w = Window::new(0, 0).expect("valid");
                let mut r: CheckReport<Rational> = sweep("lsa_table_agreement", w, 0, 1, |_| Ok(gvir_core::Element::zero().into()));
                r.verdict = Verdict::Fails;
                reports.push(("check".into(), r));
            }
            emit(&reports, json!({ "dim": t.dim() }), &[], &a.out, out)
        }
        "emit" => {
            let t = table()?;
            out.write_all(emit_burgers(&t, style(&a.style)?).as_bytes()).map_err(io)?;
            Ok(0)
        }
        "truncate" => {
            let spec: AlgebraSpec = load_spec(&a.spec)?;
            let w = limited("truncate", parse_window(&a.window)?, 2)?;
            let (t, rep) = graded_truncate(&Algebra::<Rational>::new(&spec), w);
            let mut s = format!("# e_x on {w} is table index x - ({}) + 1\n", w.lo);
            s.push_str(&TableText(&t).to_string());
            for (i, j) in &rep.dropped {
                s.push_str(&format!("# dropped {i} {j}\n"));
            }
            for (i, j) in &rep.undefined {
                s.push_str(&format!("# dropped-undefined {i} {j}\n"));
            }
            for (i, j) in &rep.theta_dropped {
                s.push_str(&format!("# theta-dropped {i} {j}\n"));
            }
            out.write_all(s.as_bytes()).map_err(io)?;
            Ok(0)
        }
        other => Err(InputError(format!("unknown burgers action `{other}` (check | emit | truncate)"))),
    }
}

// ------------------------------------------------------------------ parse

pub fn parse(expr: &str, out: &mut dyn Write) -> Res {
    let ast = parse_expr(expr).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.offset));
        InputError(format!("{e}\n  {expr}\n  {caret}"))
    })?;
    writeln!(out, "{}", print_canonical(&ast)).map_err(io)?;
    writeln!(out, "{ast:?}").map_err(io)?;
    Ok(0)
}
