//! Expression grammar for problem data (`r`, `F`, `φ`, `ψ`).
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          right-associative
//! atom   := number | 't' | 'x' | func '(' expr ')' | '(' expr ')'
//! func   := exp | sin | cos | abs
//! ```
//!
//! `^` binds tighter than unary minus, so `-2^2 = -4`; its exponent may carry
//! a sign (`2^-1 = 0.5`).

mod bounds;
mod parse;

use std::fmt;

use thiserror::Error;

pub use bounds::{Asymptotic, Interval};
pub use parse::parse_expression;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("evaluation error: {0}")]
    Eval(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn zero() -> Expr {
        Expr::Num(0.0)
    }

    /// Evaluates at `(t, x)`. Division by zero, `0^negative` and non-real
    /// results are errors.
    pub fn eval(&self, t: f64, x: f64) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::X) => x,
            Expr::Neg(e) => -e.eval(t, x)?,
            Expr::Call(f, e) => f.apply(e.eval(t, x)?),
            Expr::Bin(op, l, r) => {
                let a = l.eval(t, x)?;
                let b = r.eval(t, x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(ExprError::Eval(format!(
                                "division by zero at t = {t}, x = {x}"
                            )));
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        if a == 0.0 && b < 0.0 {
                            return Err(ExprError::Eval(format!(
                                "0 raised to negative power {b} at t = {t}, x = {x}"
                            )));
                        }
                        a.powf(b)
                    }
                }
            }
        };
        if v.is_nan() {
            return Err(ExprError::Eval(format!(
                "non-real result at t = {t}, x = {x}"
            )));
        }
        Ok(v)
    }

    /// True when the expression is the literal constant zero (possibly negated).
    pub fn is_literal_zero(&self) -> bool {
        match self {
            Expr::Num(v) => *v == 0.0,
            Expr::Neg(e) => e.is_literal_zero(),
            _ => false,
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        if self.mentions(Var::T) || self.mentions(Var::X) {
            None
        } else {
            self.eval(0.0, 0.0).ok()
        }
    }

    pub fn mentions(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(e) | Expr::Call(_, e) => e.mentions(var),
            Expr::Bin(_, l, r) => l.mentions(var) || r.mentions(var),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}

/// Fully parenthesized; numbers in shortest round-trip form.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => {
                write!(f, "(-{:?})", -v)
            }
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(Var::T) => f.write_str("t"),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Bin(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({l} {sym} {r})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evaluates_worked_examples() {
        let e = parse_expression("2*t + exp(-x)").unwrap();
        assert_eq!(e.eval(1.0, 0.0).unwrap(), 3.0);
        assert_eq!(parse_expression("sin(0)").unwrap().eval(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn evaluation_errors() {
        let e = parse_expression("1/(x-1)").unwrap();
        assert!(matches!(e.eval(0.0, 1.0), Err(ExprError::Eval(_))));
        let e = parse_expression("x^(-1)").unwrap();
        assert!(matches!(e.eval(0.0, 0.0), Err(ExprError::Eval(_))));
        let e = parse_expression("(0-2)^0.5").unwrap();
        assert!(matches!(e.eval(0.0, 0.0), Err(ExprError::Eval(_))));
    }

    #[test]
    fn literal_zero_detection() {
        assert!(parse_expression("0").unwrap().is_literal_zero());
        assert!(parse_expression("-0").unwrap().is_literal_zero());
        assert!(!parse_expression("0*x").unwrap().is_literal_zero());
        assert_eq!(parse_expression("2^3").unwrap().constant_value(), Some(8.0));
        assert_eq!(parse_expression("t").unwrap().constant_value(), None);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-5.0f64..5.0).prop_map(Expr::Num),
            Just(Expr::Var(Var::T)),
            Just(Expr::Var(Var::X)),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop_oneof![Just(Func::Exp), Just(Func::Sin), Just(Func::Cos), Just(Func::Abs)],
                    inner.clone()
                )
                    .prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div),
                        Just(BinOp::Pow)
                    ],
                    inner.clone(),
                    inner
                )
                    .prop_map(|(op, l, r)| Expr::Bin(op, Box::new(l), Box::new(r))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let back = parse_expression(&printed).unwrap();
            for i in 0..100 {
                let t = i as f64 / 99.0;
                let x = 3.0 * t;
                match (e.eval(t, x), back.eval(t, x)) {
                    (Ok(a), Ok(b)) => {
                        prop_assert!(a == b || (a - b).abs() <= 1e-15 * a.abs().max(b.abs()),
                            "{} vs {} for {}", a, b, printed);
                    }
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "{:?} vs {:?} for {}", a, b, printed),
                }
            }
        }
    }
}
