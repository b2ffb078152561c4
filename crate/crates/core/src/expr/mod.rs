//! Expression language for the test function ψ.
//!
//! Grammar, loosest binding first: `+ -`, then `* /`, then unary `-`, then
//! right-associative `^`. Atoms are numbers, the variable `x`, parenthesised
//! expressions and calls `exp(e)`, `ln(e)`, `sqrt(e)`, `abs(e)`,
//! `pow(base, exponent)`. `pow(a, b)` and `a ^ b` build the same node.
//!
//! Evaluation runs on [`DualValue`] so every value comes with its exact
//! first derivative.

mod dual;
mod eval;
mod parse;

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub use dual::DualValue;
pub use eval::{EvalError, EvalErrorKind};
pub use parse::{parse, ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Unary built-in functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Abstract syntax tree of a univariate real function.
///
/// Literals produced by the parser are finite and non-negative; a leading
/// minus is always a [`Expr::Neg`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Lit(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse(text)
    }

    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Self {
        Expr::Call(func, Box::new(arg))
    }

    pub fn negate(arg: Expr) -> Self {
        Expr::Neg(Box::new(arg))
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval::eval(self, DualValue::constant(x)).map(|d| d.value)
    }

    pub fn eval_dual(&self, x: f64) -> Result<DualValue, EvalError> {
        eval::eval_dual(self, x)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Lit(_) | Expr::Var | Expr::Call(..) => PREC_ATOM,
            Expr::Neg(_) => PREC_NEG,
            Expr::Bin(op, ..) => op.precedence(),
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Display for f64 is the shortest string that round-trips.
            Expr::Lit(v) => write!(f, "{v}"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                inner.fmt_child(f, inner.precedence() < PREC_NEG)
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Bin(op, lhs, rhs) => {
                let p = op.precedence();
                let lhs_parens = match op {
                    BinOp::Pow => lhs.precedence() <= p,
                    _ => lhs.precedence() < p,
                };
                let rhs_parens = match op {
                    BinOp::Pow => rhs.precedence() < PREC_NEG,
                    _ => rhs.precedence() <= p,
                };
                lhs.fmt_child(f, lhs_parens)?;
                write!(f, " {} ", op.symbol())?;
                rhs.fmt_child(f, rhs_parens)
            }
        }
    }
}

impl core::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// A test function: either a parsed expression or one of the built-in
/// families with hand-written derivative rules.
#[derive(Debug, Clone, PartialEq)]
pub enum Psi {
    Expr(Expr),
    /// `x^c`
    Power(f64),
    /// `1/x`
    Recip,
    /// `a x + b`
    Affine {
        a: f64,
        b: f64,
    },
}

impl Psi {
    /// Parses `power(c)`, `recip`, `affine(a, b)` or any expression.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let trimmed = text.trim();
        if trimmed == "recip" {
            return Ok(Psi::Recip);
        }
        if let Some(args) = family_args(trimmed, "power") {
            if let [c] = args.as_slice() {
                return Ok(Psi::Power(*c));
            }
        }
        if let Some(args) = family_args(trimmed, "affine") {
            if let [a, b] = args.as_slice() {
                return Ok(Psi::Affine { a: *a, b: *b });
            }
        }
        parse(text).map(Psi::Expr)
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            Psi::Expr(e) => e.eval(x),
            Psi::Power(c) => eval::power_rule(x, *c, false, || alloc::format!("{self}")).map(|d| d.value),
            _ => self.eval_dual(x).map(|d| d.value),
        }
    }

    pub fn eval_dual(&self, x: f64) -> Result<DualValue, EvalError> {
        match self {
            Psi::Expr(e) => e.eval_dual(x),
            Psi::Power(c) => eval::power_rule(x, *c, true, || alloc::format!("{self}")),
            Psi::Recip => {
                if x == 0.0 {
                    Err(EvalError::new(EvalErrorKind::DivisionByZero, String::from("recip")))
                } else {
                    Ok(DualValue { value: 1.0 / x, deriv: -1.0 / (x * x) })
                }
            }
            Psi::Affine { a, b } => Ok(DualValue { value: a * x + b, deriv: *a }),
        }
    }

    /// Derivative only.
    pub fn deriv(&self, x: f64) -> Result<f64, EvalError> {
        self.eval_dual(x).map(|d| d.deriv)
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psi::Expr(e) => e.fmt(f),
            Psi::Power(c) => write!(f, "power({c})"),
            Psi::Recip => f.write_str("recip"),
            Psi::Affine { a, b } => write!(f, "affine({a}, {b})"),
        }
    }
}

impl From<Expr> for Psi {
    fn from(e: Expr) -> Self {
        Psi::Expr(e)
    }
}

/// Numeric arguments of `name(n1, n2, ...)`, or `None` if `text` has a
/// different shape.
fn family_args(text: &str, name: &str) -> Option<alloc::vec::Vec<f64>> {
    let rest = text.strip_prefix(name)?.trim_start();
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|a| a.trim().parse::<f64>().ok().filter(|v| v.is_finite())).collect()
}
