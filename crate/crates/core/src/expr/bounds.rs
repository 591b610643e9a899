//! Interval bounds and `x → ∞` behaviour of expressions, used to certify
//! suprema and decay of problem data without sampling.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{BinOp, Expr, Func, Var};

/// Closed interval with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    /// `sup |v|` over the interval.
    pub fn abs_sup(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn add(self, o: Interval) -> Option<Interval> {
        let lo = self.lo + o.lo;
        let hi = self.hi + o.hi;
        (!lo.is_nan() && !hi.is_nan()).then(|| Interval::new(lo, hi))
    }

    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    fn mul(self, o: Interval) -> Interval {
        // infinite endpoints are limits; a zero endpoint is attained, so 0·∞ = 0
        let prod = |a: f64, b: f64| {
            let p = a * b;
            if p.is_nan() {
                0.0
            } else {
                p
            }
        };
        let c = [
            prod(self.lo, o.lo),
            prod(self.lo, o.hi),
            prod(self.hi, o.lo),
            prod(self.hi, o.hi),
        ];
        Interval::new(
            c.iter().copied().fold(f64::INFINITY, f64::min),
            c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }

    fn recip(self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(1.0 / self.hi, 1.0 / self.lo))
    }

    fn exp(self) -> Interval {
        Interval::new(self.lo.exp(), self.hi.exp())
    }

    fn ln(self) -> Option<Interval> {
        (self.lo > 0.0).then(|| Interval::new(self.lo.ln(), self.hi.ln()))
    }

    fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval::new(0.0, self.abs_sup())
        }
    }

    fn sin(self) -> Interval {
        if !self.is_bounded() || self.hi - self.lo >= 2.0 * PI {
            return Interval::new(-1.0, 1.0);
        }
        let mut lo = self.lo.sin().min(self.hi.sin());
        let mut hi = self.lo.sin().max(self.hi.sin());
        // does the interval reach a crest (π/2 + 2πk) or a trough (−π/2 + 2πk)?
        let reaches = |phase: f64| {
            let k = ((self.lo - phase) / (2.0 * PI)).ceil();
            phase + 2.0 * PI * k <= self.hi
        };
        if reaches(FRAC_PI_2) {
            hi = 1.0;
        }
        if reaches(-FRAC_PI_2) {
            lo = -1.0;
        }
        Interval::new(lo, hi)
    }

    fn powi(self, n: i32) -> Option<Interval> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        if n == 0 {
            return Some(Interval::point(1.0));
        }
        let (a, b) = (self.lo.powi(n), self.hi.powi(n));
        Some(if n % 2 == 1 {
            Interval::new(a, b)
        } else if self.contains_zero() {
            Interval::new(0.0, a.max(b))
        } else {
            Interval::new(a.min(b), a.max(b))
        })
    }

    fn powf(self, c: f64) -> Option<Interval> {
        if c == c.trunc() && c.abs() <= i32::MAX as f64 {
            return self.powi(c as i32);
        }
        if self.lo < 0.0 || (c < 0.0 && self.lo == 0.0) {
            return None;
        }
        let (a, b) = (self.lo.powf(c), self.hi.powf(c));
        Some(Interval::new(a.min(b), a.max(b)))
    }
}

impl Expr {
    /// Enclosure of the values over `t ∈ t_range`, `x ∈ x_range`; `None` when
    /// an operation cannot be bounded (division through zero, undefined powers).
    pub fn bound(&self, t_range: Interval, x_range: Interval) -> Option<Interval> {
        Some(match self {
            Expr::Num(v) => Interval::point(*v),
            Expr::Var(Var::T) => t_range,
            Expr::Var(Var::X) => x_range,
            Expr::Neg(e) => e.bound(t_range, x_range)?.neg(),
            Expr::Call(f, e) => {
                let a = e.bound(t_range, x_range)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Sin => a.sin(),
                    Func::Cos => Interval::new(a.lo + FRAC_PI_2, a.hi + FRAC_PI_2).sin(),
                    Func::Abs => a.abs(),
                }
            }
            Expr::Bin(op, l, r) => {
                let a = l.bound(t_range, x_range)?;
                match op {
                    BinOp::Pow => {
                        if let Some(c) = r.constant_value() {
                            a.powf(c)?
                        } else {
                            let b = r.bound(t_range, x_range)?;
                            b.mul(a.ln()?).exp()
                        }
                    }
                    _ => {
                        let b = r.bound(t_range, x_range)?;
                        match op {
                            BinOp::Add => a.add(b)?,
                            BinOp::Sub => a.add(b.neg())?,
                            BinOp::Mul => a.mul(b),
                            BinOp::Div => a.mul(b.recip()?),
                            BinOp::Pow => unreachable!(),
                        }
                    }
                }
            }
        })
    }

    /// Behaviour as `x → ∞`, uniformly over `t ∈ t_range`.
    pub fn asymptotic(&self, t_range: Interval) -> Asymptotic {
        use Asymptotic::*;
        let whole = Interval::new(0.0, f64::INFINITY);
        match self {
            Expr::Num(v) if *v == 0.0 => Zero,
            Expr::Num(_) | Expr::Var(Var::T) => Bounded,
            Expr::Var(Var::X) => PosInf,
            Expr::Neg(e) => e.asymptotic(t_range).negate(),
            Expr::Call(f, e) => {
                let a = e.asymptotic(t_range);
                match f {
                    Func::Exp => a.exp(),
                    Func::Sin if a == Zero => Zero,
                    Func::Sin | Func::Cos => Bounded,
                    Func::Abs => match a {
                        NegInf => PosInf,
                        other => other,
                    },
                }
            }
            Expr::Bin(op, l, r) => {
                let a = l.asymptotic(t_range);
                match op {
                    BinOp::Add => a.add(r.asymptotic(t_range)),
                    BinOp::Sub => a.add(r.asymptotic(t_range).negate()),
                    BinOp::Mul => {
                        let b = r.asymptotic(t_range);
                        match (a, b) {
                            (Zero, Zero | Bounded) | (Bounded, Zero) => Zero,
                            (Bounded, Bounded) => Bounded,
                            (PosInf | NegInf, PosInf | NegInf) => {
                                if a == b {
                                    PosInf
                                } else {
                                    NegInf
                                }
                            }
                            (Bounded, inf @ (PosInf | NegInf)) => {
                                inf.scaled_by(l.bound(t_range, whole))
                            }
                            (inf @ (PosInf | NegInf), Bounded) => {
                                inf.scaled_by(r.bound(t_range, whole))
                            }
                            _ => Unknown,
                        }
                    }
                    BinOp::Div => {
                        let b = r.asymptotic(t_range);
                        match (a, b) {
                            (Zero | Bounded, PosInf | NegInf) => Zero,
                            (_, Bounded) => match r.bound(t_range, whole) {
                                Some(iv) if !iv.contains_zero() => match a {
                                    PosInf | NegInf => a.scaled_by(Some(iv)),
                                    other => other,
                                },
                                _ => Unknown,
                            },
                            _ => Unknown,
                        }
                    }
                    BinOp::Pow => {
                        if let Some(c) = r.constant_value() {
                            a.pow(c, l.bound(t_range, whole))
                        } else if let Some(b) = l.constant_value() {
                            // b^e = exp(e·ln b)
                            let e = r.asymptotic(t_range);
                            if b > 1.0 {
                                e.exp()
                            } else if b > 0.0 && b < 1.0 {
                                e.negate().exp()
                            } else if b == 1.0 {
                                Bounded
                            } else {
                                Unknown
                            }
                        } else {
                            Unknown
                        }
                    }
                }
            }
        }
    }
}

/// Limit class of an expression as `x → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Asymptotic {
    /// Tends to 0 uniformly in `t`.
    Zero,
    Bounded,
    PosInf,
    NegInf,
    Unknown,
}

impl Asymptotic {
    fn negate(self) -> Self {
        match self {
            Asymptotic::PosInf => Asymptotic::NegInf,
            Asymptotic::NegInf => Asymptotic::PosInf,
            other => other,
        }
    }

    fn exp(self) -> Self {
        match self {
            Asymptotic::NegInf => Asymptotic::Zero,
            Asymptotic::Zero | Asymptotic::Bounded => Asymptotic::Bounded,
            Asymptotic::PosInf => Asymptotic::PosInf,
            Asymptotic::Unknown => Asymptotic::Unknown,
        }
    }

    fn add(self, o: Self) -> Self {
        use Asymptotic::*;
        match (self, o) {
            (Zero, x) | (x, Zero) => x,
            (Bounded, Bounded) => Bounded,
            (PosInf, Bounded | PosInf) | (Bounded, PosInf) => PosInf,
            (NegInf, Bounded | NegInf) | (Bounded, NegInf) => NegInf,
            _ => Unknown,
        }
    }

    // an infinite class times a bounded factor of known sign
    fn scaled_by(self, factor: Option<Interval>) -> Self {
        match factor {
            Some(iv) if iv.lo > 0.0 => self,
            Some(iv) if iv.hi < 0.0 => self.negate(),
            _ => Asymptotic::Unknown,
        }
    }

    fn pow(self, c: f64, base: Option<Interval>) -> Self {
        use Asymptotic::*;
        let integer = c == c.trunc();
        match self {
            Zero if c > 0.0 => Zero,
            Zero if c == 0.0 => Bounded,
            Bounded if c >= 0.0 => match base {
                Some(iv) if iv.lo >= 0.0 || integer => Bounded,
                _ => Unknown,
            },
            Bounded => match base {
                Some(iv) if !iv.contains_zero() && (iv.lo > 0.0 || integer) => Bounded,
                _ => Unknown,
            },
            PosInf if c > 0.0 => PosInf,
            PosInf if c < 0.0 => Zero,
            PosInf => Bounded,
            NegInf if integer && c < 0.0 => Zero,
            NegInf if integer && c == 0.0 => Bounded,
            NegInf if integer && (c as i64) % 2 == 0 => PosInf,
            NegInf if integer => NegInf,
            _ => Unknown,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_expression;
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    fn sup(src: &str) -> Option<f64> {
        let e = parse_expression(src).unwrap();
        e.bound(iv(0.0, 1.0), iv(0.0, f64::INFINITY))
            .filter(Interval::is_bounded)
            .map(|b| b.abs_sup())
    }

    fn class(src: &str) -> Asymptotic {
        parse_expression(src).unwrap().asymptotic(iv(0.0, 1.0))
    }

    #[test]
    fn certified_suprema() {
        assert_eq!(sup("1"), Some(1.0));
        assert_eq!(sup("0.5*exp(-x)"), Some(0.5));
        assert_eq!(sup("sin(t)*exp(-2*x)"), Some(1.0f64.sin()));
        assert_eq!(sup("2^(-x)"), Some(1.0));
        assert_eq!(sup("1/(1+x)"), Some(1.0));
        assert_eq!(sup("x"), None);
        assert_eq!(sup("1/(x-1)"), None);
        let cos = sup("cos(t)").unwrap();
        assert_eq!(cos, 1.0);
    }

    #[test]
    fn sine_enclosure_is_tight_on_short_ranges() {
        let e = parse_expression("sin(t)").unwrap();
        let b = e.bound(iv(0.0, 1.0), iv(0.0, 1.0)).unwrap();
        assert_eq!(b.lo, 0.0);
        assert_eq!(b.hi, 1.0f64.sin());
        let b = e.bound(iv(1.0, 2.0), iv(0.0, 1.0)).unwrap();
        assert_eq!(b.hi, 1.0);
    }

    #[test]
    fn decay_classification() {
        assert_eq!(class("exp(-x)"), Asymptotic::Zero);
        assert_eq!(class("exp(-0.6931471805599453*x)"), Asymptotic::Zero);
        assert_eq!(class("2^(-x)"), Asymptotic::Zero);
        assert_eq!(class("sin(t)/(1+x)"), Asymptotic::Zero);
        assert_eq!(class("exp(-50*(x-1)^2)"), Asymptotic::Zero);
        assert_eq!(class("cos(x)*exp(-x)"), Asymptotic::Zero);
        assert_eq!(class("0"), Asymptotic::Zero);
        assert_eq!(class("1"), Asymptotic::Bounded);
        assert_eq!(class("sin(x)"), Asymptotic::Bounded);
        assert_eq!(class("x^2"), Asymptotic::PosInf);
        assert_eq!(class("x - x"), Asymptotic::Unknown);
    }
}
