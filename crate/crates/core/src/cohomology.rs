//! Degree-0 cochains `φ(e_x) = φ_x e_x`, graded 2-cochains
//! `ψ(e_i, e_j) = ψ_{i,j} e_{i+j}`, the coboundaries `δ₁`, `δ₂` and an exact
//! solver for `δ₁φ = ψ`.
//!
//! Only the plain part of the bracket enters; `θ` components are ignored.
//! All verdicts are relative to the finite window they were computed on.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Product, ProductExt};
use crate::element::PoleError;
use crate::report::Window;
use crate::scalar::{format_rational, parse_rational, Field, Scalar};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("phi has no value at index {0}")]
    MissingSupport(i64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("psi must be antisymmetric: {message}")]
    NotAntisymmetric { message: String },
}

/// `φ_x` for finitely many `x`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cochain1<S> {
    pub phi: BTreeMap<i64, S>,
}

impl<S: Scalar> Cochain1<S> {
    pub fn new() -> Self {
        Cochain1 { phi: BTreeMap::new() }
    }

    pub fn from_fn(w: Window, f: impl Fn(i64) -> S) -> Self {
        Cochain1 {
            phi: w.iter().map(|x| (x, f(x))).collect(),
        }
    }

    pub fn get(&self, x: i64) -> Result<&S, CohomologyError> {
        self.phi.get(&x).ok_or(CohomologyError::MissingSupport(x))
    }
}

/// Antisymmetric `ψ_{i,j}`; absent pairs read as zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cochain2<S> {
    psi: BTreeMap<(i64, i64), S>,
}

impl<S: Scalar> Cochain2<S> {
    pub fn zero() -> Self {
        Cochain2 { psi: BTreeMap::new() }
    }

    /// Sets `ψ_{i,j} = v` and `ψ_{j,i} = −v`.
    pub fn set(&mut self, i: i64, j: i64, v: S) -> Result<(), CohomologyError> {
        if i == j {
            if v.is_zero() {
                return Ok(());
            }
            return Err(CohomologyError::NotAntisymmetric {
                message: format!("psi({i},{i}) = {v} must vanish"),
            });
        }
        if v.is_zero() {
            self.psi.remove(&(i, j));
            self.psi.remove(&(j, i));
        } else {
            self.psi.insert((j, i), -v.clone());
            self.psi.insert((i, j), v);
        }
        Ok(())
    }

    /// Fills every pair of `w` from `f`, which must be antisymmetric.
    pub fn from_fn(w: Window, f: impl Fn(i64, i64) -> S) -> Result<Self, CohomologyError> {
        let mut c = Cochain2::zero();
        for i in w.iter() {
            for j in w.iter() {
                let v = f(i, j);
                if v != -f(j, i) {
                    return Err(CohomologyError::NotAntisymmetric {
                        message: format!("psi({i},{j}) = {v} but psi({j},{i}) = {}", f(j, i)),
                    });
                }
                if i < j {
                    c.set(i, j, v)?;
                }
            }
        }
        Ok(c)
    }

    pub fn get(&self, i: i64, j: i64) -> S {
        self.psi.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    /// Nonzero entries with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, &S)> + '_ {
        self.psi.iter().filter(|((i, j), _)| i < j).map(|(&(i, j), v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.psi.is_empty()
    }
}

/// `ψ = δ₁φ` on every pair of `w`: `ψ_{i,j} = g(i,j)(φ_{i+j} − φ_i − φ_j)`.
///
/// Pairs at a pole of `g` are left out and returned separately. `φ` must
/// cover `w.doubled()`.
pub fn delta1<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    phi: &Cochain1<S>,
    w: Window,
) -> Result<(Cochain2<S>, Vec<(i64, i64)>), CohomologyError> {
    let mut psi = Cochain2::zero();
    let mut poles = Vec::new();
    for i in w.iter() {
        for j in w.iter().filter(|&j| j > i) {
            let d = phi.get(i + j)?.clone() - phi.get(i)?.clone() - phi.get(j)?.clone();
            match p.g_from_f(i, j) {
                Ok((g, _)) => psi.set(i, j, g * d)?,
                Err(_) => poles.push((i, j)),
            }
        }
    }
    Ok((psi, poles))
}

/// The six-term `δ₂ψ` residual at `(i, j, k)`.
pub fn delta2_at<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    psi: &Cochain2<S>,
    i: i64,
    j: i64,
    k: i64,
) -> Result<S, PoleError> {
    let g = |a, b| p.g_from_f(a, b).map(|v| v.0);
    Ok(g(i, j)? * psi.get(i + j, k) + g(j, k)? * psi.get(j + k, i) + g(k, i)? * psi.get(i + k, j)
        - g(i, j + k)? * psi.get(j, k)
        + g(j, i + k)? * psi.get(i, k)
        - g(k, i + j)? * psi.get(i, j))
}

/// `δ₂ψ` on every triple of `w` that avoids poles.
pub fn delta2<S: Scalar, P: Product<S> + ?Sized>(
    p: &P,
    psi: &Cochain2<S>,
    w: Window,
) -> BTreeMap<(i64, i64, i64), S> {
    w.tuples(3)
        .filter_map(|t| delta2_at(p, psi, t[0], t[1], t[2]).ok().map(|v| ((t[0], t[1], t[2]), v)))
        .collect()
}

/// One linear condition `Σ row_x φ_x = rhs` contributed by the pair `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CobEquation<S> {
    pub pair: (i64, i64),
    pub row: BTreeMap<i64, S>,
    pub rhs: S,
}

/// The system `δ₁φ = ψ` on `w`, one equation per non-pole pair `i < j`.
///
/// With `g(i,j) ≠ 0` the equation is `φ_{i+j} − φ_i − φ_j = ψ_{i,j}/g(i,j)`;
/// with `g(i,j) = 0` it degenerates to `0 = ψ_{i,j}`.
pub fn coboundary_equations<S: Field, P: Product<S> + ?Sized>(
    p: &P,
    psi: &Cochain2<S>,
    w: Window,
) -> Vec<CobEquation<S>> {
    let mut out = Vec::new();
    for i in w.iter() {
        for j in w.iter().filter(|&j| j > i) {
            let Ok((g, _)) = p.g_from_f(i, j) else { continue };
            let v = psi.get(i, j);
            let eq = match g.inverse() {
                None => CobEquation { pair: (i, j), row: BTreeMap::new(), rhs: v },
                Some(ginv) => {
                    let mut row = BTreeMap::new();
                    for (x, c) in [(i + j, 1), (i, -1), (j, -1)] {
                        let e: &mut S = row.entry(x).or_insert_with(S::zero);
                        *e = e.clone() + S::from_i64(c);
                    }
                    row.retain(|_, c: &mut S| !c.is_zero());
                    CobEquation { pair: (i, j), row, rhs: v * ginv }
                }
            };
            out.push(eq);
        }
    }
    out
}

/// Outcome of [`solve_coboundary`].
#[derive(Debug, Clone, PartialEq)]
pub enum CoboundaryVerdict<S> {
    /// A `φ` on `w.doubled()` with `δ₁φ = ψ` on `w` (free unknowns set to 0).
    Solution(Cochain1<S>),
    /// Multipliers `c_e` with `Σ c_e·row_e = 0` but `Σ c_e·rhs_e = residual ≠ 0`.
    Infeasible {
        combination: Vec<(CobEquation<S>, S)>,
        residual: S,
    },
}

impl<S: Field> CoboundaryVerdict<S> {
    pub fn is_solvable(&self) -> bool {
        matches!(self, CoboundaryVerdict::Solution(_))
    }
}

/// Reduced row echelon form of `rows`, tracking which combination of the
/// input rows produced each output row.
struct Echelon<S> {
    /// `(row, rhs, combination)`
    rows: Vec<(Vec<S>, S, Vec<S>)>,
    pivots: Vec<usize>,
}

fn eliminate<S: Field>(rows: Vec<(Vec<S>, S)>, ncols: usize) -> Echelon<S> {
    let m = rows.len();
    let mut rows: Vec<(Vec<S>, S, Vec<S>)> = rows
        .into_iter()
        .enumerate()
        .map(|(n, (r, b))| {
            let mut comb = vec![S::zero(); m];
            comb[n] = S::one();
            (r, b, comb)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(pr) = (next..m).find(|&r| !rows[r].0[col].is_zero()) else { continue };
        rows.swap(next, pr);
        let inv = rows[next].0[col].inverse().expect("nonzero in a field");
        let (r, b, c) = &mut rows[next];
        r.iter_mut().for_each(|x| *x = x.clone() * inv.clone());
        *b = b.clone() * inv.clone();
        c.iter_mut().for_each(|x| *x = x.clone() * inv.clone());
        let pivot = rows[next].clone();
        for (n, row) in rows.iter_mut().enumerate() {
            if n == next || row.0[col].is_zero() {
                continue;
            }
            let factor = row.0[col].clone();
            for (x, y) in row.0.iter_mut().zip(&pivot.0) {
                *x = x.clone() - factor.clone() * y.clone();
            }
            row.1 = row.1.clone() - factor.clone() * pivot.1.clone();
            for (x, y) in row.2.iter_mut().zip(&pivot.2) {
                *x = x.clone() - factor.clone() * y.clone();
            }
        }
        pivots.push(col);
        next += 1;
    }
    Echelon { rows, pivots }
}

fn dense<S: Field>(eqs: &[CobEquation<S>], unknowns: &[i64]) -> Vec<(Vec<S>, S)> {
    let col: BTreeMap<i64, usize> = unknowns.iter().enumerate().map(|(n, &x)| (x, n)).collect();
    eqs.iter()
        .map(|eq| {
            let mut r = vec![S::zero(); unknowns.len()];
            for (x, c) in &eq.row {
                r[col[x]] = c.clone();
            }
            (r, eq.rhs.clone())
        })
        .collect()
}

/// Decides whether `ψ` restricted to `w` is `δ₁` of some degree-0 `φ`.
pub fn solve_coboundary<S: Field, P: Product<S> + ?Sized>(
    p: &P,
    psi: &Cochain2<S>,
    w: Window,
) -> CoboundaryVerdict<S> {
    let eqs = coboundary_equations(p, psi, w);
    let unknowns: Vec<i64> = w.doubled().iter().collect();
    let ech = eliminate(dense(&eqs, &unknowns), unknowns.len());
    let rank = ech.pivots.len();
    if let Some((_, b, comb)) = ech.rows[rank..].iter().find(|(_, b, _)| !b.is_zero()) {
        let combination = eqs
            .iter()
            .zip(comb)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        return CoboundaryVerdict::Infeasible {
            combination,
            residual: b.clone(),
        };
    }
    let mut phi = Cochain1::from_fn(w.doubled(), |_| S::zero());
    for (n, &col) in ech.pivots.iter().enumerate() {
        phi.phi.insert(unknowns[col], ech.rows[n].1.clone());
    }
    CoboundaryVerdict::Solution(phi)
}

/// A basis of `{φ on w.doubled() : δ₁φ = 0 on w}`.
pub fn kernel_basis<S: Field, P: Product<S> + ?Sized>(p: &P, w: Window) -> Vec<Cochain1<S>> {
    let eqs = coboundary_equations(p, &Cochain2::zero(), w);
    let unknowns: Vec<i64> = w.doubled().iter().collect();
    let ech = eliminate(dense(&eqs, &unknowns), unknowns.len());
    let free = (0..unknowns.len()).filter(|c| !ech.pivots.contains(c));
    free.map(|f| {
        let mut phi = Cochain1::from_fn(w.doubled(), |_| S::zero());
        phi.phi.insert(unknowns[f], S::one());
        for (n, &col) in ech.pivots.iter().enumerate() {
            phi.phi.insert(unknowns[col], -ech.rows[n].0[f].clone());
        }
        phi
    })
    .collect()
}

// ------------------------------------------------------------------ text I/O

fn data_lines(src: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    src.lines().enumerate().filter_map(|(n, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (n + 1, l.split_whitespace().collect()))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> CohomologyError {
    CohomologyError::Parse { line, message: message.into() }
}

fn int_field(line: usize, s: &str) -> Result<i64, CohomologyError> {
    s.parse().map_err(|_| parse_err(line, format!("bad index '{s}'")))
}

fn rat_field(line: usize, s: &str) -> Result<Rational, CohomologyError> {
    parse_rational(s).map_err(|e| parse_err(line, e.to_string()))
}

/// Parses lines `x value`; `#` starts a comment.
pub fn parse_cochain1(src: &str) -> Result<Cochain1<Rational>, CohomologyError> {
    let mut c = Cochain1::new();
    for (line, f) in data_lines(src) {
        let [x, v] = f[..] else {
            return Err(parse_err(line, "expected 'x value'"));
        };
        let x = int_field(line, x)?;
        if c.phi.insert(x, rat_field(line, v)?).is_some() {
            return Err(parse_err(line, format!("duplicate index {x}")));
        }
    }
    Ok(c)
}

/// Parses lines `i j value`. Each unordered pair may be given once (either
/// order); the antisymmetric partner is implied.
pub fn parse_cochain2(src: &str) -> Result<Cochain2<Rational>, CohomologyError> {
    let mut c = Cochain2::zero();
    let mut seen = BTreeMap::new();
    for (line, f) in data_lines(src) {
        let [i, j, v] = f[..] else {
            return Err(parse_err(line, "expected 'i j value'"));
        };
        let (i, j) = (int_field(line, i)?, int_field(line, j)?);
        if let Some(first) = seen.insert((i.min(j), i.max(j)), line) {
            return Err(parse_err(line, format!("pair ({i},{j}) already given on line {first}")));
        }
        c.set(i, j, rat_field(line, v)?)
            .map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(c)
}

pub struct Cochain1Text<'a>(pub &'a Cochain1<Rational>);
pub struct Cochain2Text<'a>(pub &'a Cochain2<Rational>);

impl fmt::Display for Cochain1Text<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, v) in &self.0.phi {
            writeln!(f, "{x} {}", format_rational(v))?;
        }
        Ok(())
    }
}

impl fmt::Display for Cochain2Text<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, v) in self.0.entries() {
            writeln!(f, "{i} {j} {}", format_rational(v))?;
        }
        Ok(())
    }
}
