//! Symbolic Wirtinger derivatives with light constant folding.

use std::sync::Arc;

use super::{Expr, Func};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Var {
    Z,
    Zbar,
}

fn konst(c: Complex) -> Expr {
    Expr::Const(c)
}

fn zero() -> Expr {
    konst(Complex::new(0.0, 0.0))
}

fn one() -> Expr {
    konst(Complex::new(1.0, 0.0))
}

fn as_const(e: &Expr) -> Option<Complex> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

pub(super) fn add(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => konst(x + y),
        _ if a.is_zero() => b,
        _ if b.is_zero() => a,
        _ => Expr::Add(Arc::new(a), Arc::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => konst(x - y),
        _ if b.is_zero() => a,
        _ if a.is_zero() => neg(b),
        _ => Expr::Sub(Arc::new(a), Arc::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => konst(-c),
        Expr::Neg(inner) => (*inner).clone(),
        other => Expr::Neg(Arc::new(other)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => konst(x * y),
        _ if a.is_zero() || b.is_zero() => zero(),
        _ if a.is_one() => b,
        _ if b.is_one() => a,
        _ => Expr::Mul(Arc::new(a), Arc::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if a.is_zero() {
        return zero();
    }
    if b.is_one() {
        return a;
    }
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) if y != Complex::new(0.0, 0.0) => konst(x / y),
        _ => Expr::Div(Arc::new(a), Arc::new(b)),
    }
}

fn pow(a: Expr, n: i32) -> Expr {
    match n {
        0 => one(),
        1 => a,
        _ => Expr::PowInt(Arc::new(a), n),
    }
}

fn call(f: Func, a: &Arc<Expr>) -> Expr {
    Expr::Call(f, Arc::clone(a))
}

pub(super) fn derivative(e: &Expr, var: Var) -> Expr {
    match e {
        Expr::Const(_) => zero(),
        Expr::Z => {
            if var == Var::Z {
                one()
            } else {
                zero()
            }
        }
        Expr::Zbar => {
            if var == Var::Zbar {
                one()
            } else {
                zero()
            }
        }
        Expr::Neg(a) => neg(derivative(a, var)),
        Expr::Add(a, b) => add(derivative(a, var), derivative(b, var)),
        Expr::Sub(a, b) => sub(derivative(a, var), derivative(b, var)),
        Expr::Mul(a, b) => add(
            mul(derivative(a, var), (**b).clone()),
            mul((**a).clone(), derivative(b, var)),
        ),
        Expr::Div(a, b) => {
            let da = derivative(a, var);
            let db = derivative(b, var);
            if db.is_zero() {
                div(da, (**b).clone())
            } else {
                div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), 2),
                )
            }
        }
        Expr::PowInt(a, n) => {
            let da = derivative(a, var);
            if da.is_zero() || *n == 0 {
                return zero();
            }
            let coeff = konst(Complex::new(*n as f64, 0.0));
            mul(mul(coeff, pow((**a).clone(), n - 1)), da)
        }
        Expr::Call(f, a) => {
            let da = derivative(a, var);
            if da.is_zero() {
                return zero();
            }
            match f {
                Func::Exp => mul(call(Func::Exp, a), da),
                Func::Log => div(da, (**a).clone()),
                Func::Sin => mul(call(Func::Cos, a), da),
                Func::Cos => mul(neg(call(Func::Sin, a)), da),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::Expr;
    use crate::Complex;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn product_rule_against_conj() {
        assert_eq!(p("z*conj(z)").wirtinger_dzbar(), Expr::Z);
        assert_eq!(p("z*conj(z)").wirtinger_dz(), Expr::Zbar);
    }

    #[test]
    fn holomorphic_has_zero_zbar_derivative() {
        assert!(p("1/z").wirtinger_dzbar().is_zero());
        assert!(p("(z+1)/((z-0.5)*(z+0.4*i))").wirtinger_dzbar().is_zero());
        assert!(p("exp(z)/z + log(z) - sin(z)*cos(z)")
            .wirtinger_dzbar()
            .is_zero());
        assert!(p("conj(z)^3").wirtinger_dz().is_zero());
    }

    #[test]
    fn log_of_modulus_squared() {
        let d = p("log(z*conj(z))").wirtinger_dz();
        let reference = p("1/z");
        for k in 0..10 {
            let t = k as f64 * 0.6 + 0.1;
            let z = Complex::from_polar(0.3 + 0.2 * k as f64, t);
            let a = d.eval(z).unwrap();
            let b = reference.eval(z).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm());
        }
    }

    #[test]
    fn real_derivative_of_reciprocal() {
        let d = p("1/z").real_derivative();
        let x = Complex::new(0.5, 0.0);
        assert!((d.eval(x).unwrap() - Complex::new(-4.0, 0.0)).norm() < 1e-14);
    }
}
