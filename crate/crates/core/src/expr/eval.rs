use alloc::string::String;
use core::fmt;

use super::{BinOp, DualValue, Expr, Func};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    LogOfNonPositive,
    SqrtOfNegative,
    DivisionByZero,
    /// Non-integer power of a negative base, or a negative power of zero.
    PowDomain,
    NotDifferentiable,
    /// Overflow or another non-finite intermediate.
    NonFinite,
}

/// Evaluation failure, naming the offending subexpression.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub node: String,
}

impl EvalError {
    pub(crate) fn new(kind: EvalErrorKind, node: String) -> Self {
        Self { kind, node }
    }
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            EvalErrorKind::LogOfNonPositive => "logarithm of a non-positive value",
            EvalErrorKind::SqrtOfNegative => "square root of a negative value",
            EvalErrorKind::DivisionByZero => "division by zero",
            EvalErrorKind::PowDomain => "power outside its domain",
            EvalErrorKind::NotDifferentiable => "not differentiable here",
            EvalErrorKind::NonFinite => "non-finite result",
        };
        write!(f, "{what} in `{}`", self.node)
    }
}

impl core::error::Error for EvalError {}

pub(super) fn eval(e: &Expr, x: DualValue) -> Result<DualValue, EvalError> {
    // Value-only evaluation: derivatives are carried but never checked.
    walk(e, x, false)
}

pub(super) fn eval_dual(e: &Expr, x: f64) -> Result<DualValue, EvalError> {
    walk(e, DualValue::variable(x), true)
}

fn fail(kind: EvalErrorKind, e: &Expr) -> EvalError {
    EvalError::new(kind, alloc::format!("{e}"))
}

fn walk(e: &Expr, x: DualValue, need_deriv: bool) -> Result<DualValue, EvalError> {
    let out = match e {
        Expr::Lit(v) => DualValue::constant(*v),
        Expr::Var => x,
        Expr::Neg(inner) => -walk(inner, x, need_deriv)?,
        Expr::Call(func, arg) => {
            let a = walk(arg, x, need_deriv)?;
            apply(*func, a, need_deriv).map_err(|k| fail(k, e))?
        }
        Expr::Bin(op, lhs, rhs) => {
            let l = walk(lhs, x, need_deriv)?;
            let r = walk(rhs, x, need_deriv)?;
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r.value == 0.0 {
                        return Err(fail(EvalErrorKind::DivisionByZero, e));
                    }
                    l / r
                }
                BinOp::Pow => pow(l, r, need_deriv).map_err(|k| fail(k, e))?,
            }
        }
    };
    let finite = if need_deriv { out.is_finite() } else { out.value.is_finite() };
    if finite {
        Ok(out)
    } else {
        Err(fail(EvalErrorKind::NonFinite, e))
    }
}

fn apply(func: Func, a: DualValue, need_deriv: bool) -> Result<DualValue, EvalErrorKind> {
    Ok(match func {
        Func::Exp => {
            let v = math::exp(a.value);
            DualValue::new(v, v * a.deriv)
        }
        Func::Ln => {
            if a.value <= 0.0 {
                return Err(EvalErrorKind::LogOfNonPositive);
            }
            DualValue::new(math::ln(a.value), a.deriv / a.value)
        }
        Func::Sqrt => {
            if a.value < 0.0 {
                return Err(EvalErrorKind::SqrtOfNegative);
            }
            let v = math::sqrt(a.value);
            if v == 0.0 {
                if need_deriv && a.deriv != 0.0 {
                    return Err(EvalErrorKind::NotDifferentiable);
                }
                DualValue::constant(0.0)
            } else {
                DualValue::new(v, a.deriv / (2.0 * v))
            }
        }
        Func::Abs => {
            if a.value == 0.0 {
                if need_deriv && a.deriv != 0.0 {
                    return Err(EvalErrorKind::NotDifferentiable);
                }
                DualValue::constant(0.0)
            } else if a.value < 0.0 {
                -a
            } else {
                a
            }
        }
    })
}

/// `base ^ exponent` with the derivative
/// `b^e (e' ln b + e b'/b)`, restricted to the real domain.
fn pow(b: DualValue, e: DualValue, need_deriv: bool) -> Result<DualValue, EvalErrorKind> {
    if b.value > 0.0 {
        let v = math::pow(b.value, e.value);
        let d = if e.deriv == 0.0 {
            e.value * math::pow(b.value, e.value - 1.0) * b.deriv
        } else {
            v * (e.deriv * math::ln(b.value) + e.value * b.deriv / b.value)
        };
        return Ok(DualValue::new(v, d));
    }
    if need_deriv && e.deriv != 0.0 {
        // ln of the base is undefined.
        return Err(EvalErrorKind::NotDifferentiable);
    }
    if b.value == 0.0 {
        if e.value == 0.0 {
            return Ok(DualValue::constant(1.0));
        }
        if e.value < 0.0 {
            return Err(EvalErrorKind::PowDomain);
        }
        let d = if b.deriv == 0.0 || e.value > 1.0 {
            0.0
        } else if e.value == 1.0 {
            b.deriv
        } else if need_deriv {
            return Err(EvalErrorKind::NotDifferentiable);
        } else {
            0.0
        };
        return Ok(DualValue::new(0.0, d));
    }
    if !math::is_integer(e.value) {
        return Err(EvalErrorKind::PowDomain);
    }
    let v = math::pow(b.value, e.value);
    Ok(DualValue::new(v, e.value * math::pow(b.value, e.value - 1.0) * b.deriv))
}

/// `x^c` for the built-in power family.
pub(super) fn power_rule(x: f64, c: f64, need_deriv: bool, name: impl Fn() -> String) -> Result<DualValue, EvalError> {
    let out = pow(DualValue::variable(x), DualValue::constant(c), need_deriv).map_err(|k| EvalError::new(k, name()))?;
    let finite = if need_deriv { out.is_finite() } else { out.value.is_finite() };
    if finite {
        Ok(out)
    } else {
        Err(EvalError::new(EvalErrorKind::NonFinite, name()))
    }
}
