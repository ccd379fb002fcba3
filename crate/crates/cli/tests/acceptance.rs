//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to fail: the computation
//! contradicts the stated outcome. They still print FAIL with the evidence,
//! but do not fail the target. Any other failure, or a known failure that
//! starts passing, exits non-zero.

use std::time::Instant;

use clap::Parser;
use gvir_core::burgers::{compute_a, emit_burgers, lsa_table_check, parse_table, Format, StructureTable};
use gvir_core::cohomology::{delta1, delta2, kernel_basis, solve_coboundary, Cochain1, CoboundaryVerdict};
use gvir_core::diffop::{lk_suite, LkOptions};
use gvir_core::expr::{presets, Var};
use gvir_core::extensions::{check_tstar_lsa, deform_product};
use gvir_core::identities::{self as id, HereditaryVariant, JacobiForm, Mode};
use gvir_core::{
    parse_expr, print_canonical, Algebra, AlgebraSpec, CheckReport, DualRational, Element, EndoSpec, ExprAst,
    ProductExt, Rational, Scalar, Window,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const KNOWN_FAILURES: [(u32, &str); 1] = [(
    3,
    "the centrally extended product is left-symmetric at every non-pole tuple; \
     the theta part of the defect cancels identically",
)];

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn w(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

fn spec(f: &str, eps: Rational) -> AlgebraSpec {
    AlgebraSpec::new(parse_expr(f).unwrap()).with_eps(eps)
}

fn witt_spec() -> AlgebraSpec {
    spec(presets::WITT_F, q(0, 1))
}

fn kupershmidt_spec(eps: Rational) -> AlgebraSpec {
    spec(presets::KUPERSHMIDT_F, eps)
}

fn virasoro_spec() -> AlgebraSpec {
    kupershmidt_spec(q(1, 2)).with_theta(parse_expr(presets::VIRASORO_F_THETA).unwrap())
}

fn rat(s: &AlgebraSpec) -> Algebra<Rational> {
    Algebra::new(s)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_cex<S: Scalar>(r: &CheckReport<S>) -> String {
    match r.counterexamples.first() {
        Some(c) => format!("{} {:?}: {}", r.check, c.indices, c.residual),
        None => format!("{}: {:?}", r.check, r.verdict),
    }
}

fn holds<S: Scalar>(r: &CheckReport<S>) -> Result<(), String> {
    ensure(r.holds(), || format!("expected holds, got {}", first_cex(r)))
}

// 1. Kupershmidt recovery
fn c1() -> Outcome {
    let alg = rat(&kupershmidt_spec(q(1, 2)));
    let r = id::check_quasi_assoc(&alg, w(-8, 8), 20, Mode::Element);
    holds(&r)?;
    ensure(!r.undefined_points.is_empty(), || "no pole tuples reported".into())?;
    for t in &r.undefined_points {
        let (i, j, k) = (t[0], t[1], t[2]);
        ensure([i + j, j + k, i + k, i + j + k].contains(&-2), || format!("unexpected pole {t:?}"))?;
    }
    let mut pairs = 0;
    for p in -8..=8 {
        for s in -8..=8 {
            match alg.bracket(&Element::basis(p), &Element::basis(s)) {
                Ok(b) => {
                    ensure(b == Element::monomial(p + s, q(p - s, 1)), || format!("bracket({p},{s}) = {b}"))?;
                    pairs += 1;
                }
                Err(_) => ensure(p + s == -2, || format!("unexpected bracket pole at ({p},{s})"))?,
            }
        }
    }
    Ok(format!("{} triples, {} poles; {pairs} brackets equal (p-q)e_(p+q)", r.tuples_checked, r.undefined_points.len()))
}

// 2. Central term
fn c2() -> Outcome {
    let alg = rat(&virasoro_spec());
    for p in -8i64..=8 {
        let b = alg.bracket(&Element::basis(p), &Element::basis(-p)).map_err(|e| format!("{e}"))?;
        ensure(*b.theta() == q(p * p * p - p, 1), || format!("p = {p}: theta {}", b.theta()))?;
    }
    Ok("theta(bracket(e_p, e_-p)) = p^3 - p for p in [-8, 8]".into())
}

// 3. Non-left-symmetry of the centrally extended product
fn c3() -> Outcome {
    let alg = rat(&virasoro_spec());
    let (lsym, _) = id::check_alternative(&alg, w(-6, 6), 20);
    let r = id::check_quasi_assoc(&alg, w(-4, 4), 20, Mode::Element);
    for c in &r.counterexamples {
        let e = c.residual.as_element().unwrap();
        ensure(e.theta().is_zero() || c.indices.iter().sum::<i64>() == 0, || {
            format!("theta counterexample off i+j+k=0 at {:?}", c.indices)
        })?;
    }
    let degenerate = if lsym.holds() { "holds" } else { "FAILS" };
    ensure(r.fails(), || {
        format!(
            "quasi_assoc on [-4,4]^3 {} ({} tuples, {} poles, 0 counterexamples); degenerate lsym on [-6,6]^2 {degenerate}",
            r.verdict,
            r.tuples_checked,
            r.undefined_points.len()
        )
    })?;
    holds(&lsym)?;
    Ok(format!("{} failing triples", r.failures))
}

// 4. Jacobi forms
fn c4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tuples: Vec<Vec<i64>> = (0..1000).map(|_| (0..3).map(|_| rng.gen_range(-12..=12)).collect()).collect();
    let mut poles = 0;
    for (name, s) in [("witt", witt_spec()), ("kupershmidt", kupershmidt_spec(q(1, 2))), ("virasoro", virasoro_spec())] {
        let r = id::check_jacobi_forms_agree(&rat(&s), w(-12, 12), 20, tuples.clone());
        holds(&r).map_err(|e| format!("{name}: {e}"))?;
        poles += r.undefined_points.len();
    }
    let witt = rat(&witt_spec());
    holds(&id::check_jacobi(&witt, w(-6, 6), 20, JacobiForm::J))?;
    holds(&id::check_jacobi(&witt, w(-6, 6), 20, JacobiForm::TG))?;
    Ok(format!("1000 random tuples x 3 specs agree ({poles} pole tuples skipped); both forms hold for Witt"))
}

// 5. Derivation counterexample
fn c5() -> Outcome {
    let witt = rat(&witt_spec());
    let el = id::check_derivation(&witt, w(-4, 4), 729, Mode::Element);
    let sc = id::check_derivation(&witt, w(-4, 4), 729, Mode::Scalar);
    ensure(el.fails() && sc.fails(), || "derivation does not fail".into())?;
    for t in w(-4, 4).tuples(3) {
        let (i, j, k) = (t[0], t[1], t[2]);
        let want = Element::monomial(i + j + k, q(i * i, 1));
        for r in [&el, &sc] {
            let got = r.residual_at(&t).and_then(|x| x.as_element()).cloned().unwrap_or_else(Element::zero);
            ensure(got == want, || format!("{} at {t:?}: {got}", r.check))?;
        }
    }
    Ok(format!("{} failing triples, residual i^2 e_(i+j+k) in both forms", el.failures))
}

// 6. Hereditary
fn c6() -> Outcome {
    let witt = rat(&witt_spec());
    for x0 in 1..=3 {
        let r = id::check_hereditary(&witt, w(-8, 8), 20, &EndoSpec::Shift(x0), HereditaryVariant::ScalarShift)
            .map_err(|e| e.to_string())?;
        holds(&r).map_err(|e| format!("x0 = {x0}: {e}"))?;
    }
    let vir = rat(&virasoro_spec());
    let res = id::hereditary_residual(&vir, &EndoSpec::Shift(1), HereditaryVariant::ScalarShift, 1, -2)
        .map_err(|e| e.to_string())?;
    ensure(res == Element::central(q(6, 1)), || format!("virasoro (1,-2,1): {res}"))?;
    Ok("Witt holds on [-8,8]^2 for x0 = 1,2,3; Virasoro residual at (1,-2) is 6 theta".into())
}

// 7. ρ-compatibility and the dual-number deformation
fn c7() -> Outcome {
    let flat = rat(&kupershmidt_spec(q(0, 1)));
    for x0 in -3..=3 {
        let r = id::check_rho_compat(&flat, w(-8, 8), 20, &EndoSpec::Shift(x0), Mode::Element).map_err(|e| e.to_string())?;
        holds(&r).map_err(|e| format!("eps = 0, x0 = {x0}: {e}"))?;
    }
    let half = rat(&kupershmidt_spec(q(1, 2)));
    let r = id::rho_compat_residual(&half, &EndoSpec::Shift(1), Mode::Element, 1, 2).map_err(|e| e.to_string())?;
    ensure(r == Element::monomial(4, q(-1, 6)), || format!("eps = 1/2 at (1,2): {r}"))?;

    let mut agree = 0;
    for eps in [q(0, 1), q(1, 2)] {
        let s = kupershmidt_spec(eps.clone());
        for x0 in -2..=2 {
            let rho = EndoSpec::<DualRational>::Shift(x0);
            let dual = Algebra::<DualRational>::new(&s);
            let deformed = id::check_quasi_assoc(&deform_product(&dual, &rho), w(-4, 4), 1, Mode::Element);
            let compat = id::check_rho_compat(&rat(&s), w(-4, 4), 1, &EndoSpec::Shift(x0), Mode::Element)
                .map_err(|e| e.to_string())?;
            ensure(deformed.holds() == compat.holds(), || {
                format!("eps = {eps}, x0 = {x0}: deformation {} but compatibility {}", deformed.verdict, compat.verdict)
            })?;
            agree += 1;
        }
    }
    Ok(format!("eps = 0 holds for x0 in [-3,3]; -1/6 e_4 at (1,2); deformation verdict matches in {agree} cases"))
}

// 8. Cohomology
fn c8() -> Outcome {
    let witt = rat(&witt_spec());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 0..100 {
        let vals: Vec<i64> = (0..41).map(|_| rng.gen_range(-100..=100)).collect();
        let phi = Cochain1::from_fn(w(-20, 20), |x| q(vals[(x + 20) as usize], 1));
        let (psi, _) = delta1(&witt, &phi, w(-10, 10)).map_err(|e| e.to_string())?;
        let d2 = delta2(&witt, &psi, w(-5, 5));
        ensure(d2.len() == 1331 && d2.values().all(Zero::is_zero), || format!("sample {n}: delta2 delta1 != 0"))?;
    }
    let phi = Cochain1::from_fn(w(-8, 8), |x| q(x * x, 1));
    let (psi, _) = delta1(&witt, &phi, w(-4, 4)).map_err(|e| e.to_string())?;
    let CoboundaryVerdict::Solution(sol) = solve_coboundary(&witt, &psi, w(-4, 4)) else {
        return Err("x^2 coboundary reported infeasible".into());
    };
    let (back, _) = delta1(&witt, &sol, w(-4, 4)).map_err(|e| e.to_string())?;
    ensure(back == psi, || "delta1 of the recovered solution differs".into())?;
    // φ_x = x lies in the kernel: δ₁φ = 0, and the kernel has the matching free coordinates.
    let lin = Cochain1::from_fn(w(-6, 6), |x| q(x, 1));
    let (d, _) = delta1(&witt, &lin, w(-3, 3)).map_err(|e| e.to_string())?;
    ensure(d.is_zero(), || "delta1(x) != 0".into())?;
    let basis = kernel_basis::<Rational, _>(&witt, w(-3, 3));
    let in_span = span_contains(&basis, &lin);
    ensure(in_span, || "phi_x = x not in the kernel span".into())?;
    Ok(format!("100 random phi; x^2 roundtrip; kernel dim {} contains x", basis.len()))
}

/// Gaussian elimination on the basis with the target appended.
fn span_contains(basis: &[Cochain1<Rational>], target: &Cochain1<Rational>) -> bool {
    let keys: Vec<i64> = target.phi.keys().copied().collect();
    let row = |c: &Cochain1<Rational>| keys.iter().map(|k| c.phi.get(k).cloned().unwrap_or_default()).collect::<Vec<_>>();
    let rank = |rows: Vec<Vec<Rational>>| {
        let mut m = rows;
        let mut r = 0;
        for col in 0..keys.len() {
            let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
            m.swap(r, p);
            for i in 0..m.len() {
                if i != r && !m[i][col].is_zero() {
                    let f = m[i][col].clone() / m[r][col].clone();
                    let pivot = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot) {
                        *x -= f.clone() * y;
                    }
                }
            }
            r += 1;
        }
        r
    };
    let rows: Vec<_> = basis.iter().map(row).collect();
    let mut with = rows.clone();
    with.push(row(target));
    rank(rows) == rank(with)
}

// 9. Universal identity
fn c9() -> Outcome {
    for (name, s) in [("witt", witt_spec()), ("kupershmidt", kupershmidt_spec(q(1, 2)))] {
        let alg = rat(&s);
        holds(&id::check_quasi_assoc(&alg, w(-3, 3), 20, Mode::Element)).map_err(|e| format!("{name}: {e}"))?;
        holds(&id::check_universal(&alg, w(-3, 3), 20)).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("holds on [-3,3]^4 for Witt and Kupershmidt".into())
}

// 10. T*A closure
fn c10() -> Outcome {
    let t = Instant::now();
    let a = check_tstar_lsa(&rat(&witt_spec()), w(-4, 4), 20);
    holds(&a).map_err(|e| format!("witt: {e}"))?;
    let b = check_tstar_lsa(&rat(&kupershmidt_spec(q(1, 2))), w(-4, 4), 20);
    holds(&b).map_err(|e| format!("kupershmidt: {e}"))?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("Witt and Kupershmidt hold ({} poles excluded) in {secs:.1}s", b.undefined_points.len()))
}

// 11. L_k suite
fn c11() -> Outcome {
    let reports: Vec<CheckReport<Rational>> = lk_suite(&LkOptions::new(6));
    let required = [
        "lk_assoc",
        "lk_product_closed",
        "lk_triple_closed",
        "lk_ternary",
        "lk_filippov",
        "lk_bremner",
        "lk_derivation",
        "lk_final",
        "lk_ops_h3",
    ];
    for name in required {
        let r = reports.iter().find(|r| r.check == name).ok_or(format!("{name} missing"))?;
        holds(r)?;
    }
    let assoc = reports.iter().find(|r| r.check == "lk_assoc").unwrap();
    ensure(assoc.tuples_checked == 343, || format!("assoc checked {}", assoc.tuples_checked))?;
    let bremner = reports.iter().find(|r| r.check == "lk_bremner").unwrap();
    ensure(bremner.window == w(0, 2), || format!("bremner window {}", bremner.window))?;
    Ok(format!("{} identities hold at pmax = 6 (Bremner at 2)", required.len()))
}

// 12. Burgers
fn c12() -> Outcome {
    let one = parse_table("dim 1\n1 1 1 1\n").map_err(|e| e.to_string())?;
    let text = emit_burgers(&one, Format::Plain);
    ensure(text == "u1_t = u1_xx + 2*u1*u1_x\n", || format!("emitted {text:?}"))?;
    ensure(compute_a(&one).is_zero(), || "A != 0".into())?;
    let two = parse_table("dim 2\n1 2 1 1\n").map_err(|e| e.to_string())?;
    let (rel, _) = lsa_table_check(&two, 20);
    ensure(rel.fails() && rel.counterexamples.first().map(|c| c.indices.clone()) == Some(vec![1, 1, 2, 2]), || {
        format!("rejection witness: {}", first_cex(&rel))
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut holds_count = 0;
    for n in 0..200 {
        let mut t = StructureTable::<Rational>::zero(3).unwrap();
        // Sparse so that both verdicts occur.
        for _ in 0..rng.gen_range(0..5) {
            let (j, k, i) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
            t.set(j, k, i, q(rng.gen_range(-2..=2), 1)).unwrap();
        }
        let (a, b) = lsa_table_check(&t, 1);
        ensure(a.verdict == b.verdict, || format!("table {n}: {} vs {}", a.verdict, b.verdict))?;
        holds_count += usize::from(a.holds());
    }
    Ok(format!("N=1 emission exact; N=2 witness (1,1,2,2); 200 random tables agree ({holds_count} LSA)"))
}

fn random_ast(rng: &mut ChaCha8Rng, depth: u32) -> ExprAst {
    let b = Box::new;
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => ExprAst::Const(q(rng.gen_range(0..40), rng.gen_range(1..7))),
            1 => ExprAst::Var(Var::I),
            2 => ExprAst::Var(Var::J),
            _ => ExprAst::Eps,
        };
    }
    let op = rng.gen_range(0..7);
    let mut sub = || b(random_ast(rng, depth - 1));
    match op {
        0 => ExprAst::Neg(sub()),
        1 => ExprAst::Add(sub(), sub()),
        2 => ExprAst::Sub(sub(), sub()),
        3 => ExprAst::Mul(sub(), sub()),
        4 => ExprAst::Div(sub(), sub()),
        5 => ExprAst::Pow(sub(), depth % 4),
        _ => ExprAst::Delta(sub()),
    }
}

// 13. Parser
fn c13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 0..1000 {
        let t = random_ast(&mut rng, 6);
        let s = print_canonical(&t);
        let back = parse_expr(&s).map_err(|e| format!("case {n}: {s}: {e}"))?;
        ensure(back == t, || format!("case {n}: {s} changed"))?;
    }
    let malformed = [("", 0), ("i +", 3), ("(i", 2), ("i)", 1), ("junk((", 0), ("i ^ j", 4), ("2 * * j", 4), ("i $ j", 2)];
    for (src, offset) in malformed {
        let cli = gvir_cli::Cli::try_parse_from(["gvir", "check", "--f", src, "--checks", "skew"]).map_err(|e| e.to_string())?;
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = gvir_cli::run(cli, &mut out, &mut err);
        let err = String::from_utf8(err).unwrap();
        ensure(code == 2 && err.contains(&format!("byte {offset}")), || format!("{src:?}: exit {code}, {err}"))?;
    }
    Ok(format!("1000 round trips; {} malformed inputs exit 2 with offsets", malformed.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 13] = [
        (1, "Kupershmidt recovery", c1),
        (2, "central term recovery", c2),
        (3, "centrally extended product is not left-symmetric", c3),
        (4, "Jacobi dual forms", c4),
        (5, "derivation counterexample", c5),
        (6, "hereditary operator", c6),
        (7, "rho-compatibility and deformation", c7),
        (8, "cohomology", c8),
        (9, "universal identity", c9),
        (10, "T*A closure", c10),
        (11, "L_k suite", c11),
        (12, "Burgers tables", c12),
        (13, "parser", c13),
    ];
    let mut unexpected = Vec::new();
    for (n, title, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n);
        match (&outcome, known) {
            (Ok(detail), None) => println!("PASS [{n:>2}] {title}: {detail} ({secs:.1}s)"),
            (Ok(detail), Some(_)) => {
                println!("PASS [{n:>2}] {title}: {detail} ({secs:.1}s) -- listed as a known failure");
                unexpected.push(n);
            }
            (Err(why), Some((_, reason))) => {
                println!("FAIL [{n:>2}] {title}: {why} ({secs:.1}s)");
                println!("     known failure: {reason}");
            }
            (Err(why), None) => {
                println!("FAIL [{n:>2}] {title}: {why} ({secs:.1}s)");
                unexpected.push(n);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
