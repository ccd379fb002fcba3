//! Input resolution: specs, windows with hard limits, expectations.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use gvir_core::report::Window;
use gvir_core::scalar::parse_rational;
use gvir_core::spec::ConfigError;
use gvir_core::{parse_config, AlgebraSpec, EndoSpec, Rational, Scalar, ScalarMode, Verdict};

use crate::SpecArgs;

/// Anything that should end the run with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

macro_rules! input_from {
    ($($t:ty),*) => {$(
        impl From<$t> for InputError {
            fn from(e: $t) -> Self {
                InputError(e.to_string())
            }
        }
    )*};
}

input_from!(
    ConfigError,
    gvir_core::expr::ParseError,
    gvir_core::report::WindowError,
    gvir_core::identities::CheckError,
    gvir_core::cohomology::CohomologyError,
    gvir_core::burgers::TableError,
    gvir_core::scalar::RationalParseError
);

pub fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Resolves `--config` or the inline flags into a spec.
pub fn load_spec(a: &SpecArgs) -> Result<AlgebraSpec, InputError> {
    if let Some(path) = &a.config {
        let src = read(path)?;
        return parse_config(&src).map_err(|e| InputError(format!("{}: {e}", path.display())));
    }
    let f = a
        .f
        .as_deref()
        .ok_or_else(|| InputError("no algebra given: use --config FILE or --f EXPR".into()))?;
    let scalar = match &a.scalar {
        Some(s) => s.parse::<ScalarMode>().map_err(InputError)?,
        None => ScalarMode::Rational,
    };
    Ok(AlgebraSpec::from_sources(
        f,
        a.f_theta.as_deref(),
        a.a.as_deref().unwrap_or("1"),
        a.b.as_deref().unwrap_or("1"),
        a.eps.as_deref().unwrap_or("0"),
        scalar,
    )?)
}

/// Largest window length allowed for a check of the given arity.
pub fn max_len(arity: usize) -> usize {
    match arity {
        0..=3 => 41,
        4 => 13,
        5 | 6 => 9,
        _ => 3,
    }
}

pub fn parse_window(text: &str) -> Result<Window, InputError> {
    Ok(text.parse::<Window>()?)
}

/// Rejects windows beyond the hard limit for `arity`.
pub fn limited(name: &str, w: Window, arity: usize) -> Result<Window, InputError> {
    let max = max_len(arity);
    if w.len() > max {
        return Err(InputError(format!(
            "window {w} for `{name}` has {} values; the limit for {arity}-index checks is {max}",
            w.len()
        )));
    }
    Ok(w)
}

/// Per-report expected verdicts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expectations {
    pub global: Option<Verdict>,
    pub named: BTreeMap<String, Verdict>,
}

impl Expectations {
    /// Entries are `verdict` (applies to every report) or `name=verdict`.
    pub fn parse(items: &[String]) -> Result<Self, InputError> {
        let mut e = Expectations::default();
        for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((name, v)) => {
                    let v = v.trim().parse().map_err(InputError)?;
                    e.named.insert(name.trim().to_string(), v);
                }
                None => {
                    if e.global.is_some() {
                        return Err(InputError("more than one global --expect".into()));
                    }
                    e.global = Some(item.parse().map_err(InputError)?);
                }
            }
        }
        Ok(e)
    }

    /// Looks up the report name, then the requested check name, then the
    /// global expectation.
    pub fn lookup(&self, report: &str, requested: &str) -> Option<Verdict> {
        self.named
            .get(report)
            .or_else(|| self.named.get(requested))
            .copied()
            .or(self.global)
    }
}

/// `0` when every `(actual, expected)` pair agrees (missing expectations
/// always agree), `1` otherwise.
pub fn exit_code(results: &[(Verdict, Option<Verdict>)]) -> i32 {
    let bad = results.iter().any(|(got, want)| want.is_some_and(|w| w != *got));
    i32::from(bad)
}

/// Endomorphism table: lines `src dst value`, optionally `theta value`
/// (default `theta 1`).
pub fn parse_endo<S: Scalar>(src: &str) -> Result<EndoSpec<S>, InputError> {
    let mut entries = Vec::new();
    let mut theta = Rational::from_integer(1.into());
    for (n, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = || InputError(format!("line {}: expected `src dst value` or `theta value`", n + 1));
        match f[..] {
            ["theta", v] => theta = parse_rational(v).map_err(|e| InputError(format!("line {}: {e}", n + 1)))?,
            [s, d, v] => {
                let s: i64 = s.parse().map_err(|_| bad())?;
                let d: i64 = d.parse().map_err(|_| bad())?;
                let v = parse_rational(v).map_err(|e| InputError(format!("line {}: {e}", n + 1)))?;
                entries.push((s, d, S::from_rational(&v)));
            }
            _ => return Err(bad()),
        }
    }
    Ok(EndoSpec::from_entries(entries, S::from_rational(&theta)))
}
