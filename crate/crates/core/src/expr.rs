//! Structure-function expression language.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-'? atom ('^' nat)?
//! atom     := 'i' | 'j' | 'eps' | rational | '(' expr ')' | 'delta' '(' expr ')'
//! rational := int ('/' int)?
//! ```
//!
//! An integer immediately followed by `/` and another integer is read as a
//! single rational literal, so `1/2` is `Const(1/2)` while `(1)/(2)` is a
//! division node.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{format_rational, Scalar};

/// Which index variable of `f(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    I,
    J,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    /// Non-negative rational literal (the parser never yields a negative one).
    Const(BigRational),
    Var(Var),
    /// The algebra parameter `eps`.
    Eps,
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
    /// Kronecker delta: 1 when the child evaluates to exactly zero, else 0.
    Delta(Box<ExprAst>),
}

/// A parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match b {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                out.push((start, Tok::Int(src[start..pos].parse().expect("digits"))));
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                out.push((start, Tok::Ident(src[start..pos].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    expected: vec!["token"],
                    found: format!("character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        pos += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

const ATOM_START: &[&str] = &["`i`", "`j`", "`eps`", "integer", "`(`", "`delta`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let idx = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[idx].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut node = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.peek().clone() {
                Tok::Int(n) => {
                    let exp = u32::try_from(&n).map_err(|_| ParseError {
                        offset: self.offset(),
                        expected: vec!["exponent below 2^32"],
                        found: format!("`{n}`"),
                    })?;
                    self.bump();
                    node = ExprAst::Pow(Box::new(node), exp);
                }
                _ => return Err(self.error(&["natural exponent"])),
            }
        }
        Ok(if negate {
            ExprAst::Neg(Box::new(node))
        } else {
            node
        })
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if let (Tok::Slash, Tok::Int(d)) = (self.peek().clone(), self.peek_at(1).clone()) {
                    if d.is_zero() {
                        self.bump();
                        return Err(ParseError {
                            offset: self.offset(),
                            expected: vec!["nonzero denominator"],
                            found: "`0`".to_string(),
                        });
                    }
                    self.bump();
                    self.bump();
                    return Ok(ExprAst::Const(BigRational::new(n, d)));
                }
                Ok(ExprAst::Const(BigRational::from_integer(n)))
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => {
                    self.bump();
                    Ok(ExprAst::Var(self::Var::I))
                }
                "j" => {
                    self.bump();
                    Ok(ExprAst::Var(self::Var::J))
                }
                "eps" => {
                    self.bump();
                    Ok(ExprAst::Eps)
                }
                "delta" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(ExprAst::Delta(Box::new(inner)))
                }
                _ => Err(self.error(ATOM_START)),
            },
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

/// Parses an expression in `i`, `j`, `eps`.
pub fn parse_expr(src: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(ast)
}

/// Fully parenthesized rendering that re-parses to the same tree.
pub fn print_canonical(ast: &ExprAst) -> String {
    let mut out = String::new();
    write_canonical(ast, &mut out);
    out
}

fn write_canonical(ast: &ExprAst, out: &mut String) {
    use ExprAst::*;
    let bin = |out: &mut String, a: &ExprAst, op: char, b: &ExprAst| {
        out.push('(');
        write_canonical(a, out);
        out.push(op);
        write_canonical(b, out);
        out.push(')');
    };
    match ast {
        Const(q) if q.is_negative() => {
            out.push_str("(-(");
            out.push_str(&format_rational(&-q.clone()));
            out.push_str("))");
        }
        Const(q) => {
            out.push('(');
            out.push_str(&format_rational(q));
            out.push(')');
        }
        Var(self::Var::I) => out.push('i'),
        Var(self::Var::J) => out.push('j'),
        Eps => out.push_str("eps"),
        Neg(a) => {
            out.push_str("(-");
            write_canonical(a, out);
            out.push(')');
        }
        Add(a, b) => bin(out, a, '+', b),
        Sub(a, b) => bin(out, a, '-', b),
        Mul(a, b) => bin(out, a, '*', b),
        Div(a, b) => bin(out, a, '/', b),
        Pow(a, n) => {
            out.push('(');
            write_canonical(a, out);
            out.push('^');
            out.push_str(&n.to_string());
            out.push(')');
        }
        Delta(a) => {
            out.push_str("delta(");
            write_canonical(a, out);
            out.push(')');
        }
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_canonical(self))
    }
}

/// Exact evaluation at `(i, j)`; `None` marks a pole.
pub fn eval_ast<S: Scalar>(ast: &ExprAst, i: i64, j: i64, eps: &S) -> Option<S> {
    use ExprAst::*;
    Some(match ast {
        Const(q) => S::from_rational(q),
        Var(self::Var::I) => S::from_i64(i),
        Var(self::Var::J) => S::from_i64(j),
        Eps => eps.clone(),
        Neg(a) => -eval_ast(a, i, j, eps)?,
        Add(a, b) => eval_ast(a, i, j, eps)? + eval_ast(b, i, j, eps)?,
        Sub(a, b) => eval_ast(a, i, j, eps)? - eval_ast(b, i, j, eps)?,
        Mul(a, b) => eval_ast(a, i, j, eps)? * eval_ast(b, i, j, eps)?,
        Div(a, b) => {
            let num = eval_ast(a, i, j, eps)?;
            let den = eval_ast(b, i, j, eps)?;
            num.checked_div(&den)?
        }
        Pow(a, n) => eval_ast(a, i, j, eps)?.pow(*n),
        Delta(a) => {
            if eval_ast(a, i, j, eps)?.is_zero() {
                S::one()
            } else {
                S::zero()
            }
        }
    })
}

impl ExprAst {
    pub fn constant(q: BigRational) -> Self {
        ExprAst::Const(q)
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, ExprAst::Const(q) if q.is_zero())
    }

    pub fn one() -> Self {
        ExprAst::Const(BigRational::one())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        use ExprAst::*;
        match self {
            Const(_) | Var(_) | Eps => 1,
            Neg(a) | Pow(a, _) | Delta(a) => 1 + a.size(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Sources for the structure functions used throughout the tests and docs.
pub mod presets {
    /// Witt: `e_i ⋆ e_j = -j e_{i+j}`.
    pub const WITT_F: &str = "-j";
    /// Kupershmidt's centerless quasi-associative product.
    pub const KUPERSHMIDT_F: &str = "-(j*(1 + eps*j)) / (1 + eps*(i+j))";
    /// Central part of the centrally extended product.
    pub const VIRASORO_F_THETA: &str = "(1/2)*(i^3 - i + (eps - 1/eps)*i^2)*delta(i+j)";
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn kupershmidt_value() {
        let ast = parse_expr(presets::KUPERSHMIDT_F).unwrap();
        assert_eq!(eval_ast(&ast, 1, 2, &q(1, 2)), Some(q(-8, 5)));
        assert_eq!(eval_ast(&ast, 3, -5, &q(1, 2)), None);
    }

    #[test]
    fn zero_literal() {
        assert_eq!(parse_expr("0").unwrap(), ExprAst::Const(q(0, 1)));
    }

    #[test]
    fn rational_literal_versus_division() {
        assert_eq!(parse_expr("1/2").unwrap(), ExprAst::Const(q(1, 2)));
        assert_eq!(
            parse_expr("i/2").unwrap(),
            ExprAst::Div(Box::new(ExprAst::Var(self::Var::I)), Box::new(ExprAst::Const(q(2, 1))))
        );
        assert!(matches!(parse_expr("(1)/(2)").unwrap(), ExprAst::Div(..)));
    }

    #[test]
    fn precedence_and_associativity() {
        // 1 - 2 - 3 = -4, 2*3^2 = 18, -2^2 = -4
        let v = |s: &str| eval_ast(&parse_expr(s).unwrap(), 0, 0, &q(0, 1)).unwrap();
        assert_eq!(v("1 - 2 - 3"), q(-4, 1));
        assert_eq!(v("2*3^2"), q(18, 1));
        assert_eq!(v("-2^2"), q(-4, 1));
        assert_eq!(v("12/2/3"), q(2, 1));
        assert_eq!(v("0^0"), q(1, 1));
    }

    #[test]
    fn delta_semantics() {
        let ast = parse_expr("delta(i+j)").unwrap();
        assert_eq!(eval_ast(&ast, 3, -3, &q(0, 1)), Some(q(1, 1)));
        assert_eq!(eval_ast(&ast, 3, -2, &q(0, 1)), Some(q(0, 1)));
    }

    #[test]
    fn division_by_zero_eps_is_undefined() {
        let ast = parse_expr("1/eps").unwrap();
        assert_eq!(eval_ast(&ast, 0, 0, &q(0, 1)), None);
        assert_eq!(eval_ast(&ast, 0, 0, &q(1, 3)), Some(q(3, 1)));
    }

    #[test]
    fn const_prints_parenthesized() {
        assert_eq!(print_canonical(&ExprAst::Const(q(1, 2))), "(1/2)");
    }

    #[test]
    fn virasoro_theta_roundtrips() {
        let ast = parse_expr(presets::VIRASORO_F_THETA).unwrap();
        assert_eq!(parse_expr(&print_canonical(&ast)).unwrap(), ast);
        assert!(matches!(ast, ExprAst::Mul(_, ref d) if matches!(**d, ExprAst::Delta(_))));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_expr("junk((").unwrap_err();
        assert_eq!(e.offset, 0);
        let e = parse_expr("i + ").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(e.found, "end of input");
        let e = parse_expr("i ^ j").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse_expr("(i").unwrap_err();
        assert_eq!(e.expected, vec!["`)`"]);
        let e = parse_expr("i $ j").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_expr("3/0").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_expr("i j").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(parse_expr("k").is_err());
        assert!(parse_expr("0.5").is_err());
    }
}
