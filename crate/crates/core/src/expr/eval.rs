use std::f64::consts::PI;

use super::{Expr, Func};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero at z = {0}")]
    DivisionByZero(Complex),
    #[error("logarithm of zero at z = {0}")]
    LogOfZero(Complex),
    #[error("non-finite value at z = {0}")]
    NonFinite(Complex),
}

impl EvalError {
    pub fn point(&self) -> Complex {
        match *self {
            EvalError::DivisionByZero(z) | EvalError::LogOfZero(z) | EvalError::NonFinite(z) => z,
        }
    }
}

/// Principal logarithm with the imaginary part normalised into `(-π, π]`.
pub fn principal_log(w: Complex) -> Complex {
    let mut arg = w.im.atan2(w.re);
    if arg == -PI {
        arg = PI;
    }
    Complex::new(w.norm().ln(), arg)
}

fn pow_int(base: Complex, n: i32) -> Complex {
    if n < 0 {
        Complex::new(1.0, 0.0) / base.powi(-n)
    } else {
        base.powi(n)
    }
}

impl Expr {
    /// Evaluates at `z`, binding `conj(z)` to the conjugate of `z`.
    pub fn eval(&self, z: Complex) -> Result<Complex, EvalError> {
        let v = self.eval_inner(z, z.conj())?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite(z))
        }
    }

    fn eval_inner(&self, z: Complex, zbar: Complex) -> Result<Complex, EvalError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Z => z,
            Expr::Zbar => zbar,
            Expr::Neg(a) => -a.eval_inner(z, zbar)?,
            Expr::Add(a, b) => a.eval_inner(z, zbar)? + b.eval_inner(z, zbar)?,
            Expr::Sub(a, b) => a.eval_inner(z, zbar)? - b.eval_inner(z, zbar)?,
            Expr::Mul(a, b) => a.eval_inner(z, zbar)? * b.eval_inner(z, zbar)?,
            Expr::Div(a, b) => {
                let num = a.eval_inner(z, zbar)?;
                let den = b.eval_inner(z, zbar)?;
                if den.re == 0.0 && den.im == 0.0 {
                    return Err(EvalError::DivisionByZero(z));
                }
                num / den
            }
            Expr::PowInt(a, n) => {
                let base = a.eval_inner(z, zbar)?;
                if *n < 0 && base.re == 0.0 && base.im == 0.0 {
                    return Err(EvalError::DivisionByZero(z));
                }
                pow_int(base, *n)
            }
            Expr::Call(func, a) => {
                let w = a.eval_inner(z, zbar)?;
                match func {
                    Func::Exp => w.exp(),
                    Func::Log => {
                        if w.re == 0.0 && w.im == 0.0 {
                            return Err(EvalError::LogOfZero(z));
                        }
                        principal_log(w)
                    }
                    Func::Sin => w.sin(),
                    Func::Cos => w.cos(),
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(s: &str, z: Complex) -> Result<Complex, EvalError> {
        Expr::parse(s).unwrap().eval(z)
    }

    #[test]
    fn modulus_squared() {
        assert_eq!(
            eval("z*conj(z)", Complex::new(3.0, 4.0)).unwrap(),
            Complex::new(25.0, 0.0)
        );
    }

    #[test]
    fn principal_branch_on_negative_axis() {
        let v = eval("log(z)", Complex::new(-1.0, 0.0)).unwrap();
        assert_eq!(v, Complex::new(0.0, PI));
        // The lower side of the cut is folded onto +π as well.
        let v = eval("log(z)", Complex::new(-1.0, -0.0)).unwrap();
        assert_eq!(v.im, PI);
        let v = eval("log(z)", Complex::new(-1.0, -1e-10)).unwrap();
        assert!((v.im + PI).abs() < 1e-9);
    }

    #[test]
    fn reciprocal() {
        assert_eq!(
            eval("1/z", Complex::new(0.0, 2.0)).unwrap(),
            Complex::new(0.0, -0.5)
        );
    }

    #[test]
    fn singular_points_are_errors() {
        let zero = Complex::new(0.0, 0.0);
        assert_eq!(eval("1/z", zero), Err(EvalError::DivisionByZero(zero)));
        assert_eq!(eval("z^-2", zero), Err(EvalError::DivisionByZero(zero)));
        assert_eq!(eval("log(z)", zero), Err(EvalError::LogOfZero(zero)));
        assert!(matches!(
            eval("exp(exp(z))", Complex::new(10.0, 0.0)),
            Err(EvalError::NonFinite(_))
        ));
    }

    #[test]
    fn evaluation_is_bit_reproducible() {
        let e = Expr::parse("sin(z)*exp(conj(z))/(z^3 + 2) - log(z*conj(z))").unwrap();
        let z = Complex::new(0.37, -1.21);
        let a = e.eval(z).unwrap();
        let b = e.eval(z).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
