//! Truncated power series of the one-parameter Mittag-Leffler function
//! `E_α(z) = Σ z^k / Γ(αk + 1)`, used as a reference solution for linear
//! scalar problems `D^α_C u = λu`.

use serde::Serialize;

use super::gamma::ln_gamma;
use super::types::FracOrder;
use crate::error::{FracError, Result};

pub const MAX_ARGUMENT: f64 = 5.0;
pub const MIN_TERMS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MittagLeffler {
    pub value: f64,
    /// Upper bound on `|Σ_{k>terms} z^k/Γ(αk+1)|`.
    pub tail_bound: f64,
}

fn term_magnitude(alpha: f64, z_abs: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if z_abs == 0.0 {
        return 0.0;
    }
    let lg = ln_gamma(alpha * k as f64 + 1.0).expect("positive argument");
    (k as f64 * z_abs.ln() - lg).exp()
}

/// Sums `k = 0..=terms`.
///
/// Refuses `|z| > 5`, fewer than 50 terms, and truncation points where the
/// term ratio has not yet dropped below one (the tail bound would not hold).
pub fn mittag_leffler(alpha: FracOrder, z: f64, terms: usize) -> Result<MittagLeffler> {
    if !z.is_finite() || z.abs() > MAX_ARGUMENT {
        return Err(FracError::Refused(format!(
            "mittag_leffler series is only used for |z| <= {MAX_ARGUMENT}, got z = {z}"
        )));
    }
    if terms < MIN_TERMS {
        return Err(FracError::Refused(format!(
            "mittag_leffler needs at least {MIN_TERMS} terms, got {terms}"
        )));
    }
    let a = alpha.value();
    let z_abs = z.abs();
    // |t_{k+1}/t_k| = |z|·Γ(αk+1)/Γ(αk+α+1) decreases in k (log-convexity of Γ),
    // so the tail is dominated by a geometric series from the first dropped term.
    let next = term_magnitude(a, z_abs, terms + 1);
    let ratio = if next == 0.0 {
        0.0
    } else {
        next / term_magnitude(a, z_abs, terms)
    };
    if ratio >= 1.0 {
        return Err(FracError::Refused(format!(
            "series for alpha = {a}, z = {z} has not entered its convergent regime after {terms} terms"
        )));
    }
    let sign = z.signum();
    let mut value = 0.0;
    for k in 0..=terms {
        let s = if sign < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        value += s * term_magnitude(a, z_abs, k);
    }
    Ok(MittagLeffler {
        value,
        tail_bound: next / (1.0 - ratio),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_is_one() {
        for &a in &[0.1, 0.5, 1.0] {
            let ml = mittag_leffler(FracOrder::new(a).unwrap(), 0.0, 50).unwrap();
            assert_eq!(ml.value, 1.0);
            assert_eq!(ml.tail_bound, 0.0);
        }
    }

    #[test]
    fn order_one_is_the_exponential() {
        for &z in &[1.0, -1.0, 2.5, -4.0] {
            let ml = mittag_leffler(FracOrder::ONE, z, 100).unwrap();
            assert!((ml.value - f64::exp(z)).abs() <= 1e-12 * f64::exp(z).max(1.0));
        }
    }

    #[test]
    fn half_order_at_minus_one_is_stable() {
        let alpha = FracOrder::new(0.5).unwrap();
        let a = mittag_leffler(alpha, -1.0, 100).unwrap();
        let b = mittag_leffler(alpha, -1.0, 300).unwrap();
        assert!((a.value - b.value).abs() < 1e-10);
        assert!(a.tail_bound < 1e-10);
        // E_{1/2}(−x) = e^{x²} erfc(x); at x = 1: e·erfc(1)
        assert!((a.value - 0.427_583_576_155_807).abs() < 1e-12);
    }

    #[test]
    fn refuses_outside_series_regime() {
        let alpha = FracOrder::new(0.5).unwrap();
        assert!(matches!(mittag_leffler(alpha, 6.0, 100), Err(FracError::Refused(_))));
        assert!(matches!(mittag_leffler(alpha, 1.0, 10), Err(FracError::Refused(_))));
        let tiny = FracOrder::new(0.05).unwrap();
        assert!(matches!(mittag_leffler(tiny, 5.0, 50), Err(FracError::Refused(_))));
    }
}
