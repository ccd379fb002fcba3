//! Windows, verdicts and check reports, plus the parallel tuple sweep that
//! every windowed check is built on.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::diffop::DiffOp;
use crate::element::{Element, PairedElement, PoleError};
use crate::scalar::Scalar;

/// Default number of counterexamples kept in a report.
pub const DEFAULT_CAP: usize = 20;

/// Inclusive index range `lo..=hi`, used for every free index of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WindowError {
    #[error("window lower bound {lo} exceeds upper bound {hi}")]
    Inverted { lo: i64, hi: i64 },
    #[error("cannot parse window `{0}` (expected lo..hi)")]
    Syntax(String),
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self, WindowError> {
        if lo > hi {
            Err(WindowError::Inverted { lo, hi })
        } else {
            Ok(Window { lo, hi })
        }
    }

    /// Symmetric window `[-r, r]`.
    pub fn symmetric(r: i64) -> Self {
        Window { lo: -r.abs(), hi: r.abs() }
    }

    // A window always has at least one point.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// `[2·lo, 2·hi]`, the range of all pairwise sums.
    pub fn doubled(&self) -> Window {
        Window {
            lo: 2 * self.lo,
            hi: 2 * self.hi,
        }
    }

    /// Every tuple of the given arity in lexicographic order.
    pub fn tuples(&self, arity: usize) -> impl Iterator<Item = Vec<i64>> + '_ {
        let n = self.len() as u64;
        let total = n.pow(arity as u32);
        (0..total).map(move |idx| self.decode(idx, arity))
    }

    fn decode(&self, mut idx: u64, arity: usize) -> Vec<i64> {
        let n = self.len() as u64;
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = self.lo + (idx % n) as i64;
            idx /= n;
        }
        t
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = WindowError;
    fn from_str(s: &str) -> Result<Self, WindowError> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| WindowError::Syntax(s.to_string()))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| WindowError::Syntax(s.to_string()))
        };
        Window::new(parse(lo)?, parse(hi)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Vacuous,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Vacuous => "vacuous",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "holds" => Ok(Verdict::Holds),
            "fails" => Ok(Verdict::Fails),
            "vacuous" => Ok(Verdict::Vacuous),
            other => Err(format!("unknown verdict `{other}` (expected holds | fails | vacuous)")),
        }
    }
}

/// What a check measured at one tuple; zero means the identity held there.
#[derive(Debug, Clone, PartialEq)]
pub enum Residual<S> {
    Element(Element<S>),
    Paired(PairedElement<S>),
    Operator(DiffOp<S>),
}

impl<S: Scalar> Residual<S> {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Element(e) => e.is_zero(),
            Residual::Paired(p) => p.is_zero(),
            Residual::Operator(d) => d.is_zero(),
        }
    }

    /// The element residual, if this is one.
    pub fn as_element(&self) -> Option<&Element<S>> {
        match self {
            Residual::Element(e) => Some(e),
            _ => None,
        }
    }
}

impl<S: Scalar> From<Element<S>> for Residual<S> {
    fn from(e: Element<S>) -> Self {
        Residual::Element(e)
    }
}

impl<S: Scalar> From<PairedElement<S>> for Residual<S> {
    fn from(p: PairedElement<S>) -> Self {
        Residual::Paired(p)
    }
}

impl<S: Scalar> From<DiffOp<S>> for Residual<S> {
    fn from(d: DiffOp<S>) -> Self {
        Residual::Operator(d)
    }
}

impl<S: Scalar> fmt::Display for Residual<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Element(e) => write!(f, "{e}"),
            Residual::Paired(p) => write!(f, "{p}"),
            Residual::Operator(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample<S> {
    pub indices: Vec<i64>,
    pub residual: Residual<S>,
}

/// Outcome of one windowed check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport<S> {
    pub check: String,
    pub window: Window,
    pub verdict: Verdict,
    /// Tuples that were evaluated (pole tuples excluded).
    pub tuples_checked: u64,
    /// Lexicographically sorted, at most `cap` entries.
    pub counterexamples: Vec<Counterexample<S>>,
    /// Total number of failing tuples, including those beyond the cap.
    pub failures: u64,
    pub undefined_points: Vec<Vec<i64>>,
    /// Free-form remarks shown in text output.
    pub notes: Vec<String>,
}

impl<S: Scalar> CheckReport<S> {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Residual recorded for `indices`, if it is among the kept counterexamples.
    pub fn residual_at(&self, indices: &[i64]) -> Option<&Residual<S>> {
        self.counterexamples
            .iter()
            .find(|c| c.indices == indices)
            .map(|c| &c.residual)
    }

    /// Builds a report from per-tuple outcomes already in lexicographic order.
    pub fn from_outcomes(
        check: impl Into<String>,
        window: Window,
        cap: usize,
        outcomes: impl IntoIterator<Item = (Vec<i64>, Outcome<S>)>,
        tuples_checked: u64,
    ) -> Self {
        let mut counterexamples = Vec::new();
        let mut undefined_points = Vec::new();
        let mut failures = 0;
        for (indices, outcome) in outcomes {
            match outcome {
                Outcome::Pole => undefined_points.push(indices),
                Outcome::Fail(residual) => {
                    failures += 1;
                    if counterexamples.len() < cap {
                        counterexamples.push(Counterexample { indices, residual });
                    }
                }
            }
        }
        let verdict = if failures > 0 {
            Verdict::Fails
        } else if tuples_checked == 0 {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        };
        CheckReport {
            check: check.into(),
            window,
            verdict,
            tuples_checked,
            counterexamples,
            failures,
            undefined_points,
            notes: Vec::new(),
        }
    }
}

/// Non-passing result of evaluating one tuple.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<S> {
    Pole,
    Fail(Residual<S>),
}

fn classify<S: Scalar>(r: Result<Residual<S>, PoleError>) -> Option<Outcome<S>> {
    match r {
        Err(_) => Some(Outcome::Pole),
        Ok(res) if res.is_zero() => None,
        Ok(res) => Some(Outcome::Fail(res)),
    }
}

/// Evaluates `eval` on every `arity`-tuple of `window` in parallel.
///
/// A `PoleError` marks the tuple undefined; a nonzero residual is a
/// counterexample. Output order is lexicographic regardless of scheduling.
pub fn sweep<S, F>(check: &str, window: Window, arity: usize, cap: usize, eval: F) -> CheckReport<S>
where
    S: Scalar,
    F: Fn(&[i64]) -> Result<Residual<S>, PoleError> + Sync,
{
    let total = (window.len() as u64).pow(arity as u32);
    let outcomes: Vec<(Vec<i64>, Outcome<S>)> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let t = window.decode(idx, arity);
            classify(eval(&t)).map(|o| (t, o))
        })
        .collect();
    let poles = outcomes.iter().filter(|(_, o)| *o == Outcome::Pole).count() as u64;
    CheckReport::from_outcomes(check, window, cap, outcomes, total - poles)
}

/// Like [`sweep`] but over an explicit tuple list (sorted and deduplicated first).
pub fn sweep_tuples<S, F>(
    check: &str,
    window: Window,
    mut tuples: Vec<Vec<i64>>,
    cap: usize,
    eval: F,
) -> CheckReport<S>
where
    S: Scalar,
    F: Fn(&[i64]) -> Result<Residual<S>, PoleError> + Sync,
{
    tuples.sort();
    tuples.dedup();
    let total = tuples.len() as u64;
    let outcomes: Vec<(Vec<i64>, Outcome<S>)> = tuples
        .into_par_iter()
        .filter_map(|t| classify(eval(&t)).map(|o| (t, o)))
        .collect();
    let poles = outcomes.iter().filter(|(_, o)| *o == Outcome::Pole).count() as u64;
    CheckReport::from_outcomes(check, window, cap, outcomes, total - poles)
}
