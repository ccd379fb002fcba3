//! Algebra configuration files and the parsed [`AlgebraSpec`].
//!
//! The file format is flat `key = value` lines with `#` comments:
//!
//! ```text
//! # Witt algebra
//! f = "-j"
//! a = 1
//! b = 1
//! eps = 0
//! scalar = rational
//! ```
//!
//! Keys are exactly `f`, `f_theta` (optional), `a`, `b`, `eps`, `scalar`.
//! Values may be wrapped in double quotes.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::expr::{parse_expr, print_canonical, ExprAst, ParseError};
use crate::scalar::{format_rational, parse_rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Rational,
    Dual,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Dual => "dual",
        })
    }
}

impl std::str::FromStr for ScalarMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rational" => Ok(ScalarMode::Rational),
            "dual" => Ok(ScalarMode::Dual),
            other => Err(format!("unknown scalar mode `{other}` (expected rational | dual)")),
        }
    }
}

/// A fully parsed algebra: structure functions plus the bracket weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    pub f: ExprAst,
    pub f_theta: Option<ExprAst>,
    pub a: BigRational,
    pub b: BigRational,
    pub eps: BigRational,
    pub scalar_mode: ScalarMode,
    /// Non-fatal diagnostics, e.g. `b < 0`.
    pub warnings: Vec<String>,
}

impl AlgebraSpec {
    /// Spec with `a = b = 1`, `eps = 0`, rational scalars.
    pub fn new(f: ExprAst) -> Self {
        AlgebraSpec {
            f,
            f_theta: None,
            a: BigRational::from_integer(1.into()),
            b: BigRational::from_integer(1.into()),
            eps: BigRational::zero(),
            scalar_mode: ScalarMode::Rational,
            warnings: Vec::new(),
        }
    }

    pub fn from_sources(
        f: &str,
        f_theta: Option<&str>,
        a: &str,
        b: &str,
        eps: &str,
        scalar: ScalarMode,
    ) -> Result<Self, ConfigError> {
        let field = |key: &'static str, text: &str| -> Result<BigRational, ConfigError> {
            parse_rational(text).map_err(|_| ConfigError::BadFlag {
                key,
                message: format!("`{text}` is not an exact rational"),
            })
        };
        let expr = |key: &'static str, text: &str| -> Result<ExprAst, ConfigError> {
            parse_expr(text).map_err(|source| ConfigError::BadFlagExpr { key, source })
        };
        let mut spec = AlgebraSpec {
            f: expr("f", f)?,
            f_theta: f_theta.map(|t| expr("f-theta", t)).transpose()?,
            a: field("a", a)?,
            b: field("b", b)?,
            eps: field("eps", eps)?,
            scalar_mode: scalar,
            warnings: Vec::new(),
        };
        spec.check_weights();
        Ok(spec)
    }

    pub fn with_theta(mut self, f_theta: ExprAst) -> Self {
        self.f_theta = Some(f_theta);
        self
    }

    pub fn with_weights(mut self, a: BigRational, b: BigRational) -> Self {
        self.a = a;
        self.b = b;
        self.warnings.clear();
        self.check_weights();
        self
    }

    pub fn with_eps(mut self, eps: BigRational) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_scalar_mode(mut self, mode: ScalarMode) -> Self {
        self.scalar_mode = mode;
        self
    }

    pub fn has_theta(&self) -> bool {
        self.f_theta.as_ref().is_some_and(|t| !t.is_zero_const())
    }

    fn check_weights(&mut self) {
        if self.b.is_negative() {
            self.warnings.push(format!(
                "b = {} is negative; the bracket weights are meant to satisfy b > 0",
                format_rational(&self.b)
            ));
        }
    }

    /// Canonical `key = value` rendering accepted by [`parse_config`].
    pub fn to_config(&self) -> String {
        let mut out = format!("f = \"{}\"\n", print_canonical(&self.f));
        if let Some(t) = &self.f_theta {
            out.push_str(&format!("f_theta = \"{}\"\n", print_canonical(t)));
        }
        out.push_str(&format!(
            "a = {}\nb = {}\neps = {}\nscalar = {}\n",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.eps),
            self.scalar_mode
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    DuplicateKey { line: usize, key: String, first: usize },
    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },
    #[error("line {line}: bad value for `{key}`: {message}")]
    BadValue { line: usize, key: &'static str, message: String },
    #[error("line {line}: bad expression for `{key}`: {source}")]
    BadExpr {
        line: usize,
        key: &'static str,
        #[source]
        source: ParseError,
    },
    /// Inline (flag) values have no line number.
    #[error("bad value for --{key}: {message}")]
    BadFlag { key: &'static str, message: String },
    #[error("bad expression for --{key}: {source}")]
    BadFlagExpr {
        key: &'static str,
        #[source]
        source: ParseError,
    },
}

const KEYS: [&str; 6] = ["f", "f_theta", "a", "b", "eps", "scalar"];

fn unquote(v: &str) -> &str {
    let v = v.trim();
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

/// Parses the configuration text into an [`AlgebraSpec`].
pub fn parse_config(src: &str) -> Result<AlgebraSpec, ConfigError> {
    let mut seen: BTreeMap<&'static str, (usize, String)> = BTreeMap::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ConfigError::Malformed { line })?;
        let key = key.trim();
        let Some(&key) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if let Some((first, _)) = seen.get(key) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
                first: *first,
            });
        }
        seen.insert(key, (line, unquote(value).to_string()));
    }

    let take = |key: &'static str| seen.get(key).ok_or(ConfigError::MissingKey { key });
    let rational = |key: &'static str| -> Result<BigRational, ConfigError> {
        let (line, text) = take(key)?;
        parse_rational(text).map_err(|_| ConfigError::BadValue {
            line: *line,
            key,
            message: format!("`{text}` is not an exact rational"),
        })
    };
    let expr = |key: &'static str, line: usize, text: &str| {
        parse_expr(text).map_err(|source| ConfigError::BadExpr { line, key, source })
    };

    let (f_line, f_text) = take("f")?;
    let f = expr("f", *f_line, f_text)?;
    let f_theta = match seen.get("f_theta") {
        Some((line, text)) => Some(expr("f_theta", *line, text)?),
        None => None,
    };
    let a = rational("a")?;
    let b = rational("b")?;
    let eps = rational("eps")?;
    let (mode_line, mode_text) = take("scalar")?;
    let scalar_mode = mode_text.parse().map_err(|message| ConfigError::BadValue {
        line: *mode_line,
        key: "scalar",
        message,
    })?;

    let mut spec = AlgebraSpec {
        f,
        f_theta,
        a,
        b,
        eps,
        scalar_mode,
        warnings: Vec::new(),
    };
    spec.check_weights();
    Ok(spec)
}
