//! Expressions in the two formal variables `z` and `conj(z)`.
//!
//! An [`Expr`] is an immutable tree. It can be parsed from text, printed back
//! to text that parses to the same tree, evaluated at a point (with `conj(z)`
//! bound to the conjugate of that point) and differentiated symbolically with
//! respect to either Wirtinger variable.

mod diff;
mod eval;
mod parse;

use std::fmt;
use std::sync::Arc;

use crate::Complex;

pub use eval::EvalError;
pub use parse::{ParseError, ParseErrorKind};

/// Largest permitted magnitude of an integer exponent.
pub const MAX_EXPONENT: i32 = 64;

/// Unary functions available in the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    /// Principal branch, imaginary part in `(-π, π]`.
    Log,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }
}

/// Abstract syntax tree of a function `f(z, conj(z))`.
///
/// Children are reference counted so derivative trees can share subtrees with
/// their source; values are `Send + Sync`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex),
    Z,
    Zbar,
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    PowInt(Arc<Expr>, i32),
    Call(Func, Arc<Expr>),
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, ParseError> {
        parse::parse(source)
    }

    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex::new(x, 0.0))
    }

    pub fn constant(c: Complex) -> Expr {
        Expr::Const(c)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.re == 0.0 && c.im == 0.0)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.re == 1.0 && c.im == 0.0)
    }

    /// True when the tree mentions `conj(z)` anywhere.
    pub fn depends_on_zbar(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Zbar))
    }

    /// True when the tree mentions `z` anywhere.
    pub fn depends_on_z(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Z))
    }

    fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Const(_) | Expr::Z | Expr::Zbar => false,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Call(_, a) => a.any(pred),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.any(pred) || b.any(pred)
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Z | Expr::Zbar => 1,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Symbolic `∂/∂z`, treating `conj(z)` as an independent variable.
    pub fn wirtinger_dz(&self) -> Expr {
        diff::derivative(self, diff::Var::Z)
    }

    /// Symbolic `∂/∂conj(z)`, treating `z` as an independent variable.
    pub fn wirtinger_dzbar(&self) -> Expr {
        diff::derivative(self, diff::Var::Zbar)
    }

    /// Derivative along the real axis, `d/dx = ∂/∂z + ∂/∂conj(z)`.
    pub fn real_derivative(&self) -> Expr {
        diff::add(self.wirtinger_dz(), self.wirtinger_dzbar())
    }

    /// Substitutes `z -> z + shift` (and `conj(z) -> conj(z) + conj(shift)`).
    pub fn translate(&self, shift: Complex) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Z => Expr::Add(Arc::new(Expr::Z), Arc::new(Expr::Const(shift))),
            Expr::Zbar => Expr::Add(Arc::new(Expr::Zbar), Arc::new(Expr::Const(shift.conj()))),
            Expr::Neg(a) => Expr::Neg(Arc::new(a.translate(shift))),
            Expr::Add(a, b) => {
                Expr::Add(Arc::new(a.translate(shift)), Arc::new(b.translate(shift)))
            }
            Expr::Sub(a, b) => {
                Expr::Sub(Arc::new(a.translate(shift)), Arc::new(b.translate(shift)))
            }
            Expr::Mul(a, b) => {
                Expr::Mul(Arc::new(a.translate(shift)), Arc::new(b.translate(shift)))
            }
            Expr::Div(a, b) => {
                Expr::Div(Arc::new(a.translate(shift)), Arc::new(b.translate(shift)))
            }
            Expr::PowInt(a, n) => Expr::PowInt(Arc::new(a.translate(shift)), *n),
            Expr::Call(f, a) => Expr::Call(*f, Arc::new(a.translate(shift))),
        }
    }

    /// Visits every `log` argument in the tree.
    pub fn log_arguments(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        self.walk_borrowed(&mut |e| {
            if let Expr::Call(Func::Log, a) = e {
                out.push(&**a);
            }
        });
        out
    }

    /// Visits every denominator (right operand of a division, or base of a
    /// negative power) in the tree.
    pub fn denominators(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        self.walk_borrowed(&mut |e| match e {
            Expr::Div(_, b) => out.push(&**b),
            Expr::PowInt(a, n) if *n < 0 => out.push(&**a),
            _ => {}
        });
        out
    }

    fn walk_borrowed<'a>(&'a self, visit: &mut dyn FnMut(&'a Expr)) {
        visit(self);
        match self {
            Expr::Const(_) | Expr::Z | Expr::Zbar => {}
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Call(_, a) => a.walk_borrowed(visit),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.walk_borrowed(visit);
                b.walk_borrowed(visit);
            }
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

// Printing precedence levels, loosest first.
const LEVEL_SUM: u8 = 0;
const LEVEL_TERM: u8 = 1;
const LEVEL_FACTOR: u8 = 2;
const LEVEL_ATOM: u8 = 3;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => LEVEL_SUM,
        Expr::Mul(..) | Expr::Div(..) => LEVEL_TERM,
        Expr::PowInt(..) => LEVEL_FACTOR,
        _ => LEVEL_ATOM,
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // `Debug` is the shortest representation that round-trips and always
    // carries a fraction or exponent, both of which the lexer accepts.
    write!(f, "{x:?}")
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex) -> fmt::Result {
    if c.re == 0.0 && c.im == 1.0 && c.re.is_sign_positive() {
        return f.write_str("i");
    }
    if c.im == 0.0 && c.re.is_sign_positive() {
        return write_number(f, c.re);
    }
    // Anything else is spelled as an equivalent parenthesised expression.
    f.write_str("(")?;
    let mut wrote = false;
    if c.re != 0.0 || c.im == 0.0 {
        if c.re < 0.0 || c.re.is_sign_negative() {
            f.write_str("-")?;
        }
        write_number(f, c.re.abs())?;
        wrote = true;
    }
    if c.im != 0.0 {
        if c.im < 0.0 {
            f.write_str("-")?;
        } else if wrote {
            f.write_str("+")?;
        }
        write_number(f, c.im.abs())?;
        f.write_str("*i")?;
    }
    f.write_str(")")
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min_level: u8) -> fmt::Result {
    if level(e) < min_level {
        f.write_str("(")?;
        write_expr(f, e)?;
        f.write_str(")")
    } else {
        write_expr(f, e)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Const(c) => write_const(f, *c),
        Expr::Z => f.write_str("z"),
        Expr::Zbar => f.write_str("conj(z)"),
        Expr::Neg(a) => {
            f.write_str("-")?;
            write_at(f, a, LEVEL_ATOM)
        }
        Expr::Add(a, b) => {
            write_at(f, a, LEVEL_SUM)?;
            f.write_str(" + ")?;
            write_at(f, b, LEVEL_TERM)
        }
        Expr::Sub(a, b) => {
            write_at(f, a, LEVEL_SUM)?;
            f.write_str(" - ")?;
            write_at(f, b, LEVEL_TERM)
        }
        Expr::Mul(a, b) => {
            write_at(f, a, LEVEL_TERM)?;
            f.write_str("*")?;
            write_at(f, b, LEVEL_FACTOR)
        }
        Expr::Div(a, b) => {
            write_at(f, a, LEVEL_TERM)?;
            f.write_str("/")?;
            write_at(f, b, LEVEL_FACTOR)
        }
        Expr::PowInt(a, n) => {
            write_at(f, a, LEVEL_ATOM)?;
            write!(f, "^{n}")
        }
        Expr::Call(func, a) => {
            f.write_str(func.name())?;
            f.write_str("(")?;
            write_expr(f, a)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        assert_eq!(p("1/z").to_string(), "1.0/z");
        assert_eq!(p("(z - 2*conj(z))").to_string(), "z - 2.0*conj(z)");
        assert_eq!(p("z - (z - z)").to_string(), "z - (z - z)");
        assert_eq!(p("-(z^2)").to_string(), "-(z^2)");
        assert_eq!(p("-z^2").to_string(), "-z^2");
        assert_eq!(p("(1+z)^-3").to_string(), "(1.0 + z)^-3");
    }

    #[test]
    fn non_literal_constants_print_as_expressions() {
        let e = Expr::Const(Complex::new(-1.5, 2.0));
        let printed = e.to_string();
        assert_eq!(printed, "(-1.5+2.0*i)");
        let back = Expr::parse(&printed).unwrap();
        let v = back.eval(Complex::new(0.3, 0.1)).unwrap();
        assert_eq!(v, Complex::new(-1.5, 2.0));
    }

    #[test]
    fn dependency_queries() {
        assert!(p("z*conj(z)").depends_on_zbar());
        assert!(!p("1/z").depends_on_zbar());
        assert!(!p("conj(z)^2").depends_on_z());
        assert_eq!(p("log(z) + 1/(z-1)").denominators().len(), 1);
        assert_eq!(p("log(z) + log(z*z)").log_arguments().len(), 2);
    }
}
