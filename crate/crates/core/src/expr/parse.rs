//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' INT)?
//! atom   := NUMBER | 'i' | 'z' | 'conj(z)' | FUNC '(' expr ')' | '(' expr ')' | '-' atom
//! FUNC   := exp | log | sin | cos
//! ```

use std::fmt;
use std::sync::Arc;

use super::{Expr, Func, MAX_EXPONENT};
use crate::Complex;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax {
        expected: Vec<&'static str>,
        found: String,
    },
    Arity {
        func: &'static str,
        expected: usize,
        found: usize,
    },
    ExponentOutOfRange {
        exponent: i64,
    },
    InvalidNumber(String),
}

/// Parse failure with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => write!(
                f,
                "syntax error at byte {}: found {}, expected one of [{}]",
                self.offset,
                found,
                expected.join(", ")
            ),
            ParseErrorKind::Arity {
                func,
                expected,
                found,
            } => write!(
                f,
                "arity error at byte {}: {func} takes {expected} argument(s), got {found}",
                self.offset
            ),
            ParseErrorKind::ExponentOutOfRange { exponent } => write!(
                f,
                "exponent {exponent} at byte {} is outside [-{MAX_EXPONENT}, {MAX_EXPONENT}]",
                self.offset
            ),
            ParseErrorKind::InvalidNumber(text) => {
                write!(f, "invalid number literal {text:?} at byte {}", self.offset)
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number { value: f64, integer: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number { value, .. } => format!("number {value}"),
            Tok::Ident(name) => format!("identifier '{name}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' | b'.' => {
                let mut integer = true;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    integer = false;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        integer = false;
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::InvalidNumber(text.to_string()),
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::InvalidNumber(text.to_string()),
                    });
                }
                out.push((Tok::Number { value, integer }, start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Syntax {
                        expected: vec!["expression"],
                        found: format!("character {ch:?}"),
                    },
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const ATOM_START: &[&str] = &[
    "number", "'i'", "'z'", "'conj'", "'exp'", "'log'", "'sin'", "'cos'", "'('", "'-'",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax {
                expected,
                found: self.peek().describe(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Arc::new(lhs), Arc::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Arc::new(lhs), Arc::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Arc::new(lhs), Arc::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Arc::new(lhs), Arc::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let offset = self.offset();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let magnitude = match self.peek().clone() {
            Tok::Number {
                value,
                integer: true,
            } => {
                self.bump();
                value
            }
            _ => return Err(self.unexpected(vec!["integer exponent"])),
        };
        let exponent = if negative { -magnitude } else { magnitude };
        if exponent.abs() > MAX_EXPONENT as f64 {
            let clamped = exponent.clamp(i64::MIN as f64, i64::MAX as f64) as i64;
            return Err(ParseError {
                offset,
                kind: ParseErrorKind::ExponentOutOfRange { exponent: clamped },
            });
        }
        Ok(Expr::PowInt(Arc::new(base), exponent as i32))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Number { value, .. } => {
                self.bump();
                Ok(Expr::Const(Complex::new(value, 0.0)))
            }
            Tok::Minus => {
                self.bump();
                let inner = self.atom()?;
                Ok(Expr::Neg(Arc::new(inner)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "z" => Ok(Expr::Z),
                    "i" => Ok(Expr::Const(Complex::new(0.0, 1.0))),
                    "conj" => {
                        self.expect(Tok::LParen, "'('")?;
                        if *self.peek() != Tok::Ident("z".into()) {
                            return Err(self.unexpected(vec!["'z'"]));
                        }
                        self.bump();
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Zbar)
                    }
                    other => match Func::from_name(other) {
                        Some(func) => {
                            self.expect(Tok::LParen, "'('")?;
                            let arg = self.expr()?;
                            if *self.peek() == Tok::Comma {
                                let mut found = 1;
                                while *self.peek() == Tok::Comma {
                                    self.bump();
                                    self.expr()?;
                                    found += 1;
                                }
                                return Err(ParseError {
                                    offset,
                                    kind: ParseErrorKind::Arity {
                                        func: func.name(),
                                        expected: 1,
                                        found,
                                    },
                                });
                            }
                            self.expect(Tok::RParen, "')'")?;
                            Ok(Expr::Call(func, Arc::new(arg)))
                        }
                        None => {
                            self.pos -= 1;
                            Err(self.unexpected(ATOM_START.to_vec()))
                        }
                    },
                }
            }
            _ => Err(self.unexpected(ATOM_START.to_vec())),
        }
    }
}

pub(super) fn parse(source: &str) -> Result<Expr, ParseError> {
    let toks = lex(source)?;
    let mut parser = Parser { toks, pos: 0 };
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected(vec!["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Arc<Expr> {
        Arc::new(Expr::Const(Complex::new(re, 0.0)))
    }

    #[test]
    fn reciprocal() {
        assert_eq!(parse("1/z").unwrap(), Expr::Div(c(1.0), Arc::new(Expr::Z)));
    }

    #[test]
    fn log_call() {
        assert_eq!(
            parse("log(z)").unwrap(),
            Expr::Call(Func::Log, Arc::new(Expr::Z))
        );
    }

    #[test]
    fn sector_weight() {
        let expected = Expr::Sub(
            Arc::new(Expr::Z),
            Arc::new(Expr::Mul(c(2.0), Arc::new(Expr::Zbar))),
        );
        assert_eq!(parse("(z - 2*conj(z))").unwrap(), expected);
        assert_eq!(parse("  ( z-2 * conj ( z ) ) ").unwrap(), expected);
    }

    #[test]
    fn unary_minus_binds_inside_power() {
        let e = parse("-z^2").unwrap();
        assert_eq!(e, Expr::PowInt(Arc::new(Expr::Neg(Arc::new(Expr::Z))), 2));
        let e = parse("z^-3").unwrap();
        assert_eq!(e, Expr::PowInt(Arc::new(Expr::Z), -3));
    }

    #[test]
    fn numbers_with_exponents() {
        assert_eq!(
            parse("1.5e-3").unwrap(),
            Expr::Const(Complex::new(1.5e-3, 0.0))
        );
        assert_eq!(parse(".25").unwrap(), Expr::Const(Complex::new(0.25, 0.0)));
    }

    #[test]
    fn syntax_error_reports_offset_and_expected_set() {
        let err = parse("z + * 2").unwrap_err();
        assert_eq!(err.offset, 4);
        match err.kind {
            ParseErrorKind::Syntax { expected, .. } => assert!(expected.contains(&"'('")),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse("(z").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse("foo(z)").unwrap_err();
        assert_eq!(err.offset, 0);
        let err = parse("z z").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn arity_error() {
        let err = parse("exp(z, 1)").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::Arity {
                func: "exp",
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn exponent_range() {
        assert!(parse("z^64").is_ok());
        assert!(parse("z^-64").is_ok());
        let err = parse("z^65").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::ExponentOutOfRange { exponent: 65 }
        );
        assert!(parse("z^1.5").is_err());
    }

    #[test]
    fn conj_only_accepts_z() {
        assert!(parse("conj(z+1)").is_err());
        assert!(parse("conj(2)").is_err());
    }
}
