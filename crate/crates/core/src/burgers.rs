//! Finite-dimensional structure-constant tables, the integrability
//! relations for the associated Burgers systems, and their symbolic
//! emission.
//!
//! Indices are 1-based throughout, matching the table file format.

use std::fmt::{self, Write as _};

use crate::algebra::Product;
use crate::element::Element;
use crate::report::{sweep, CheckReport, Residual, Window};
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::Rational;

/// `C[j][k][i]` is the coefficient of `e_i` in `e_j ⋆ e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable<S> {
    dim: usize,
    c: Vec<S>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dimension must be positive")]
    ZeroDim,
    #[error("index {index} outside 1..={dim}")]
    OutOfRange { index: usize, dim: usize },
}

impl<S: Scalar> StructureTable<S> {
    pub fn zero(dim: usize) -> Result<Self, TableError> {
        if dim == 0 {
            return Err(TableError::ZeroDim);
        }
        Ok(StructureTable {
            dim,
            c: vec![S::zero(); dim * dim * dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, j: usize, k: usize, i: usize) -> usize {
        debug_assert!((1..=self.dim).contains(&j) && (1..=self.dim).contains(&k) && (1..=self.dim).contains(&i));
        ((j - 1) * self.dim + (k - 1)) * self.dim + (i - 1)
    }

    /// `C^i_{jk}`.
    pub fn get(&self, j: usize, k: usize, i: usize) -> &S {
        &self.c[self.slot(j, k, i)]
    }

    pub fn set(&mut self, j: usize, k: usize, i: usize, v: S) -> Result<(), TableError> {
        for index in [j, k, i] {
            if !(1..=self.dim).contains(&index) {
                return Err(TableError::OutOfRange { index, dim: self.dim });
            }
        }
        let s = self.slot(j, k, i);
        self.c[s] = v;
        Ok(())
    }

    /// Nonzero entries as `(j, k, i, value)`, lexicographic.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &S)> + '_ {
        let n = self.dim;
        (1..=n)
            .flat_map(move |j| (1..=n).flat_map(move |k| (1..=n).map(move |i| (j, k, i))))
            .map(|(j, k, i)| (j, k, i, self.get(j, k, i)))
            .filter(|e| !e.3.is_zero())
    }

    fn index_window(&self) -> Window {
        Window::new(1, self.dim as i64).expect("dim >= 1")
    }

    /// `e_j ⋆ e_k` as an element indexed by `1..=N`.
    pub fn star_basis(&self, j: usize, k: usize) -> Element<S> {
        Element::from_terms((1..=self.dim).map(|i| (i as i64, self.get(j, k, i).clone())), S::zero())
    }

    pub fn star(&self, x: &Element<S>, y: &Element<S>) -> Element<S> {
        let mut out = Element::zero();
        for (j, a) in x.terms() {
            for (k, b) in y.terms() {
                out.add_scaled(&(a.clone() * b.clone()), &self.star_basis(j as usize, k as usize));
            }
        }
        out
    }
}

/// Parses `dim N` followed by `j k i value` lines; `#` starts a comment.
pub fn parse_table(src: &str) -> Result<StructureTable<Rational>, TableError> {
    let err = |line, message: String| TableError::Parse { line, message };
    let mut lines = src.lines().enumerate().filter_map(|(n, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((n + 1, l))
    });
    let (line, head) = lines.next().ok_or_else(|| err(1, "missing 'dim N' header".into()))?;
    let dim = match head.split_whitespace().collect::<Vec<_>>()[..] {
        ["dim", n] => n.parse::<usize>().map_err(|_| err(line, format!("bad dimension '{n}'")))?,
        _ => return Err(err(line, "expected 'dim N'".into())),
    };
    let mut t = StructureTable::zero(dim)?;
    let mut seen = std::collections::BTreeMap::new();
    for (line, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        let [j, k, i, v] = f[..] else {
            return Err(err(line, "expected 'j k i value'".into()));
        };
        let idx = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("bad index '{s}'")));
        let (j, k, i) = (idx(j)?, idx(k)?, idx(i)?);
        let v = parse_rational(v).map_err(|e| err(line, e.to_string()))?;
        if let Some(first) = seen.insert((j, k, i), line) {
            return Err(err(line, format!("entry ({j},{k},{i}) already given on line {first}")));
        }
        t.set(j, k, i, v).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(t)
}

pub struct TableText<'a>(pub &'a StructureTable<Rational>);

impl fmt::Display for TableText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.0.dim)?;
        for (j, k, i, v) in self.0.entries() {
            writeln!(f, "{j} {k} {i} {}", format_rational(v))?;
        }
        Ok(())
    }
}

fn sum<S: Scalar>(n: usize, f: impl Fn(usize) -> S) -> S {
    (1..=n).fold(S::zero(), |acc, r| acc + f(r))
}

/// `C^i_{jr}C^r_{km} − C^i_{kr}C^r_{jm} − (C^r_{jk} − C^r_{kj}) C^i_{rm}`.
pub fn relation_residual<S: Scalar>(t: &StructureTable<S>, i: usize, j: usize, k: usize, m: usize) -> S {
    let n = t.dim;
    let c = |j, k, i| t.get(j, k, i).clone();
    let lhs = sum(n, |r| c(j, r, i) * c(k, m, r)) - sum(n, |r| c(k, r, i) * c(j, m, r));
    let rhs = sum(n, |r| (c(j, k, r) - c(k, j, r)) * c(r, m, i));
    lhs - rhs
}

/// `(index relation over (i,j,k,m), left-symmetry defect over (j,k,m))`.
///
/// The two formulations are equivalent; both verdicts are reported so
/// that disagreement would be visible.
pub fn lsa_table_check<S: Scalar>(t: &StructureTable<S>, cap: usize) -> (CheckReport<S>, CheckReport<S>) {
    let w = t.index_window();
    let u = |x: i64| x as usize;
    let relation = sweep("lsa_table_relation", w, 4, cap, |x| {
        let v = relation_residual(t, u(x[0]), u(x[1]), u(x[2]), u(x[3]));
        Ok(Residual::from(Element::monomial(x[0], v)))
    });
    let defect = sweep("lsa_table_defect", w, 3, cap, |x| {
        let e = |n: i64| Element::<S>::basis(n);
        let assoc = |a: &Element<S>, b: &Element<S>, c: &Element<S>| {
            t.star(&t.star(a, b), c) - t.star(a, &t.star(b, c))
        };
        let (a, b, c) = (e(x[0]), e(x[1]), e(x[2]));
        Ok(Residual::from(assoc(&a, &b, &c) - assoc(&b, &a, &c)))
    });
    (relation, defect)
}

/// `A^i_{jkm}`, stored densely; see [`Quartic::get`].
#[derive(Debug, Clone, PartialEq)]
pub struct Quartic<S> {
    dim: usize,
    a: Vec<S>,
}

impl<S: Scalar> Quartic<S> {
    /// `A^i_{jkm}`.
    pub fn get(&self, i: usize, j: usize, k: usize, m: usize) -> &S {
        let n = self.dim;
        &self.a[(((i - 1) * n + (j - 1)) * n + (k - 1)) * n + (m - 1)]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|v| v.is_zero())
    }
}

/// `A^i_{jkm} = ⅓(C^i_{jr}C^r_{km} + C^i_{kr}C^r_{mj} + C^i_{mr}C^r_{jk}
///              − C^i_{rj}C^r_{km} − C^i_{rk}C^r_{mj} − C^i_{rm}C^r_{jk})`.
pub fn compute_a<S: Scalar>(t: &StructureTable<S>) -> Quartic<S> {
    let n = t.dim;
    let third = S::one().checked_div(&S::from_i64(3)).expect("3 is a unit");
    // C^i_{ab} is t.get(a, b, i)
    let c = |i, a, b| t.get(a, b, i).clone();
    let mut a = Vec::with_capacity(n.pow(4));
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for m in 1..=n {
                    let v = sum(n, |r| {
                        c(i, j, r) * c(r, k, m) + c(i, k, r) * c(r, m, j) + c(i, m, r) * c(r, j, k)
                            - c(i, r, j) * c(r, k, m)
                            - c(i, r, k) * c(r, m, j)
                            - c(i, r, m) * c(r, j, k)
                    });
                    a.push(third.clone() * v);
                }
            }
        }
    }
    Quartic { dim: n, a }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(Format::Plain),
            "latex" => Ok(Format::Latex),
            _ => Err(format!("unknown format '{s}' (plain|latex)")),
        }
    }
}

/// One symbolic factor of a monomial.
#[derive(Clone, Copy)]
enum Var {
    U(usize),
    Ux(usize),
    Uxx(usize),
    Dual(usize),
    DualT(usize),
    Ut(usize),
}

fn var(v: Var, fmt: Format) -> String {
    match (fmt, v) {
        (Format::Plain, Var::U(i)) => format!("u{i}"),
        (Format::Plain, Var::Ux(i)) => format!("u{i}_x"),
        (Format::Plain, Var::Uxx(i)) => format!("u{i}_xx"),
        (Format::Plain, Var::Dual(i)) => format!("u{i}'"),
        (Format::Plain, Var::DualT(i)) => format!("u{i}'_t"),
        (Format::Plain, Var::Ut(i)) => format!("u{i}_t"),
        (Format::Latex, Var::U(i)) => format!("u^{{{i}}}"),
        (Format::Latex, Var::Ux(i)) => format!("u^{{{i}}}_x"),
        (Format::Latex, Var::Uxx(i)) => format!("u^{{{i}}}_{{xx}}"),
        (Format::Latex, Var::Dual(i)) => format!("u'^{{{i}}}"),
        (Format::Latex, Var::DualT(i)) => format!("u'^{{{i}}}_t"),
        (Format::Latex, Var::Ut(i)) => format!("u^{{{i}}}_t"),
    }
}

fn coeff_text(c: &Rational, fmt: Format) -> String {
    if c.is_integer() {
        return format!("{}", c.numer());
    }
    match fmt {
        Format::Plain => format!("({})", format_rational(c)),
        Format::Latex => format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()),
    }
}

/// Builds `lhs = t1 + t2 - …`, suppressing zero terms; `0` if none remain.
fn equation(lhs: Var, terms: &[(Rational, Vec<Var>)], fmt: Format) -> String {
    use num_traits::{One, Signed, Zero};
    let mut out = format!("{} =", var(lhs, fmt));
    let (mul, sep) = match fmt {
        Format::Plain => ("*", "*"),
        Format::Latex => (" ", " "),
    };
    let mut first = true;
    for (c, vars) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let body = vars.iter().map(|&v| var(v, fmt)).collect::<Vec<_>>().join(sep);
        let mag = c.abs();
        let lead = if mag.is_one() { String::new() } else { format!("{}{mul}", coeff_text(&mag, fmt)) };
        let sign = match (first, c.is_negative()) {
            (true, false) => " ",
            (true, true) => " -",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        let _ = write!(out, "{sign}{lead}{body}");
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
    out
}

/// `u^i_t = u^i_xx + 2 C^i_{jk} u^k u^j_x + A^i_{jkm} u^k u^j u^m`, one line per
/// component, terms ordered by `(j, k, m)`.
pub fn emit_burgers(t: &StructureTable<Rational>, fmt: Format) -> String {
    let n = t.dim;
    let a = compute_a(t);
    let two = Rational::from_integer(2.into());
    let mut lines = Vec::new();
    for i in 1..=n {
        let mut terms = vec![(Rational::from_integer(1.into()), vec![Var::Uxx(i)])];
        for j in 1..=n {
            for k in 1..=n {
                terms.push((two.clone() * t.get(j, k, i), vec![Var::U(k), Var::Ux(j)]));
            }
        }
        for j in 1..=n {
            for k in 1..=n {
                for m in 1..=n {
                    terms.push((a.get(i, j, k, m).clone(), vec![Var::U(k), Var::U(j), Var::U(m)]));
                }
            }
        }
        lines.push(equation(Var::Ut(i), &terms, fmt));
    }
    lines.join("\n") + "\n"
}

/// The extended system on `T*A`, written per component:
///
/// ```text
/// u^i_t  = ρ^i_j u^j_x + C^i_{jk} u^j_x u^k
/// u'^i_t = −C^k_{ji} u^j_x u'^k
/// ```
///
/// The dual-line sign comes from the pairing `⟨e_j⋆e'_k, e_i⟩ = −⟨e'_k, e_j⋆e_i⟩`.
/// Pass `None` for `ρ = 0`.
pub fn emit_extended_hydro(
    t: &StructureTable<Rational>,
    rho: Option<&RhoMatrix>,
    fmt: Format,
) -> String {
    let n = t.dim;
    let mut lines = Vec::new();
    for i in 1..=n {
        let mut terms = Vec::new();
        if let Some(rho) = rho {
            for j in 1..=n {
                terms.push((rho.get(j, i).clone(), vec![Var::Ux(j)]));
            }
        }
        for j in 1..=n {
            for k in 1..=n {
                terms.push((t.get(j, k, i).clone(), vec![Var::Ux(j), Var::U(k)]));
            }
        }
        lines.push(equation(Var::Ut(i), &terms, fmt));
    }
    for i in 1..=n {
        let mut terms = Vec::new();
        for j in 1..=n {
            for k in 1..=n {
                terms.push((-t.get(j, i, k).clone(), vec![Var::Ux(j), Var::Dual(k)]));
            }
        }
        lines.push(equation(Var::DualT(i), &terms, fmt));
    }
    lines.join("\n") + "\n"
}

/// Square matrix `ρ(e_j) = Σ_i ρ^i_j e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoMatrix {
    dim: usize,
    m: Vec<Rational>,
}

impl RhoMatrix {
    pub fn zero(dim: usize) -> Self {
        RhoMatrix { dim, m: vec![Rational::from_integer(0.into()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut r = Self::zero(dim);
        for j in 1..=dim {
            r.m[(j - 1) * dim + (j - 1)] = Rational::from_integer(1.into());
        }
        r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ρ^i_j`.
    pub fn get(&self, j: usize, i: usize) -> &Rational {
        &self.m[(j - 1) * self.dim + (i - 1)]
    }
}

/// Parses `dim N` followed by `j i value` lines (`ρ(e_j)` has `value` on `e_i`).
pub fn parse_rho(src: &str) -> Result<RhoMatrix, TableError> {
    // Reuse the table parser by padding each data line with a dummy slot.
    let mut padded = String::new();
    for (n, l) in src.lines().enumerate() {
        let body = l.split('#').next().unwrap_or("").trim();
        let f: Vec<&str> = body.split_whitespace().collect();
        match f.len() {
            0 => padded.push('\n'),
            3 => padded.push_str(&format!("1 {}\n", body)),
            _ if f.first() == Some(&"dim") => padded.push_str(&format!("{body}\n")),
            _ => {
                return Err(TableError::Parse { line: n + 1, message: "expected 'j i value'".into() })
            }
        }
    }
    let t = parse_table(&padded)?;
    let mut r = RhoMatrix::zero(t.dim);
    for (_, j, i, v) in t.entries() {
        r.m[(j - 1) * t.dim + (i - 1)] = v.clone();
    }
    Ok(r)
}

/// What [`graded_truncate`] left out.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Truncation {
    /// Pairs whose product index falls outside the window (and is nonzero).
    pub dropped: Vec<(i64, i64)>,
    /// Pairs at a pole of the structure function.
    pub undefined: Vec<(i64, i64)>,
    /// Pairs whose nonzero `θ` component was discarded.
    pub theta_dropped: Vec<(i64, i64)>,
}

/// Restricts a graded product to `{e_x : x ∈ w}`; `e_x` becomes table index
/// `x − lo + 1`.
pub fn graded_truncate<P: Product<Rational> + ?Sized>(
    p: &P,
    w: Window,
) -> (StructureTable<Rational>, Truncation) {
    let mut t = StructureTable::zero(w.len()).expect("windows are nonempty");
    let mut report = Truncation::default();
    let idx = |x: i64| (x - w.lo + 1) as usize;
    for i in w.iter() {
        for j in w.iter() {
            let prod = match p.basis(i, j) {
                Ok(e) => e,
                Err(_) => {
                    report.undefined.push((i, j));
                    continue;
                }
            };
            use num_traits::Zero;
            if !prod.theta().is_zero() {
                report.theta_dropped.push((i, j));
            }
            let mut outside = false;
            for (x, c) in prod.terms() {
                if w.contains(x) {
                    t.set(idx(i), idx(j), idx(x), c.clone()).expect("in range");
                } else {
                    outside = true;
                }
            }
            if outside {
                report.dropped.push((i, j));
            }
        }
    }
    (t, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::expr::{parse_expr, presets};
    use crate::scalar::parse_rational;
    use crate::spec::AlgebraSpec;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn table(src: &str) -> StructureTable<Rational> {
        parse_table(src).unwrap()
    }

    #[test]
    fn lsa_examples() {
        let (a, b) = lsa_table_check(&table("dim 1\n1 1 1 1\n"), 5);
        assert!(a.holds() && b.holds());
        let (a, b) = lsa_table_check(&table("dim 2\n1 2 2 1\n"), 5);
        assert!(a.holds() && b.holds());
        let (a, b) = lsa_table_check(&table("dim 2\n1 2 1 1\n"), 50);
        assert!(a.fails() && b.fails());
        let r = a.residual_at(&[1, 1, 2, 2]).unwrap().as_element().unwrap();
        assert_eq!(r.coeff(1), q("-1"));
    }

    #[test]
    fn a_tensor() {
        assert!(compute_a(&table("dim 1\n1 1 1 1\n")).is_zero());
        assert!(compute_a(&StructureTable::<Rational>::zero(3).unwrap()).is_zero());
    }

    #[test]
    fn emission() {
        assert_eq!(emit_burgers(&table("dim 1\n1 1 1 1\n"), Format::Plain), "u1_t = u1_xx + 2*u1*u1_x\n");
        assert_eq!(emit_burgers(&table("dim 2\n"), Format::Plain), "u1_t = u1_xx\nu2_t = u2_xx\n");
        assert_eq!(
            emit_burgers(&table("dim 1\n1 1 1 1\n"), Format::Latex),
            "u^{1}_t = u^{1}_{xx} + 2 u^{1} u^{1}_x\n"
        );
        assert_eq!(
            emit_burgers(&table("dim 1\n1 1 1 -1/2\n"), Format::Plain),
            "u1_t = u1_xx - u1*u1_x\n"
        );
    }

    #[test]
    fn extended_hydro() {
        let one = table("dim 1\n1 1 1 1\n");
        assert_eq!(emit_extended_hydro(&one, None, Format::Plain), "u1_t = u1_x*u1\nu1'_t = -u1_x*u1'\n");
        let zero = table("dim 1\n");
        assert_eq!(
            emit_extended_hydro(&zero, Some(&RhoMatrix::identity(1)), Format::Plain),
            "u1_t = u1_x\nu1'_t = 0\n"
        );
        let rho = parse_rho("dim 2\n1 2 3\n").unwrap();
        assert_eq!(rho.get(1, 2), &q("3"));
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let t = table("dim 2\n# comment\n1 2 2 1/3\n2 2 1 -4\n");
        assert_eq!(parse_table(&TableText(&t).to_string()).unwrap(), t);
        assert!(matches!(parse_table("dim 2\n1 3 1 1\n"), Err(TableError::Parse { line: 2, .. })));
        assert!(matches!(parse_table("dim 0\n"), Err(TableError::ZeroDim)));
        assert!(matches!(parse_table("1 1 1 1\n"), Err(TableError::Parse { line: 1, .. })));
    }

    #[test]
    fn truncation() {
        let witt = Algebra::<Rational>::new(&AlgebraSpec::new(parse_expr(presets::WITT_F).unwrap()));
        let (t, rep) = graded_truncate(&witt, Window::new(0, 2).unwrap());
        assert_eq!(t.get(1, 2, 2), &q("-1"));
        assert!(rep.dropped.contains(&(1, 2)));
        let (t, _) = graded_truncate(&witt, Window::new(0, 0).unwrap());
        assert_eq!(t.get(1, 1, 1), &q("0"));
        let k = Algebra::<Rational>::new(
            &AlgebraSpec::new(parse_expr(presets::KUPERSHMIDT_F).unwrap()).with_eps(q("1/2")),
        );
        let (_, rep) = graded_truncate(&k, Window::new(-1, 1).unwrap());
        assert_eq!(rep.undefined, vec![(-1, -1)]);
    }
}
