//! Gamma function via the Lanczos approximation (g = 7, 9 terms) with the
//! reflection formula below 1/2.

use std::f64::consts::PI;

use crate::error::{FracError, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument x - 1
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else if x == x.floor() && x <= 171.0 {
        // exact factorials for integer arguments
        (1..x as u64).fold(1.0, |acc, k| acc * k as f64)
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
    }
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(FracError::Domain(format!(
            "gamma is only defined here for positive finite x, got {x}"
        )));
    }
    Ok(gamma_unchecked(x))
}

/// `ln Γ(x)` for `x > 0`; stays finite where `Γ` itself overflows.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(FracError::Domain(format!(
            "ln_gamma is only defined here for positive finite x, got {x}"
        )));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Infallible `Γ(x)` for internal use on arguments already known positive.
#[inline]
pub(crate) fn gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    gamma_unchecked(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// `Γ(1/2) = 2∫₀^∞ e^{-u²} du` by composite Simpson on [0, 12].
    fn gamma_half_by_quadrature() -> f64 {
        let n = 24_000;
        let (a, b) = (0.0, 12.0);
        let h = (b - a) / n as f64;
        let f = |u: f64| 2.0 * (-u * u).exp();
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn factorial_anchors() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        let mut fact = 1.0;
        for n in 1..30u32 {
            assert!(rel(gamma(n as f64 + 1.0).unwrap(), fact * n as f64) < 1e-14);
            fact *= n as f64;
        }
    }

    #[test]
    fn half_integer_anchor_matches_quadrature() {
        let oracle = gamma_half_by_quadrature();
        assert!((oracle - 1.772_453_850_905_516).abs() < 1e-13);
        assert!(rel(gamma(0.5).unwrap(), oracle) < 1e-12);
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let mut expected = oracle;
        for n in 1..29 {
            expected *= n as f64 - 0.5;
            assert!(rel(gamma(n as f64 + 0.5).unwrap(), expected) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn rejects_non_positive_arguments() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(ln_gamma(0.0).is_err());
    }

    #[test]
    fn ln_gamma_agrees_with_gamma() {
        for &x in &[0.1, 0.5, 1.5, 7.25, 29.9] {
            assert!((ln_gamma(x).unwrap() - gamma(x).unwrap().ln()).abs() < 1e-12);
        }
        // 200! is beyond f64 but its logarithm is not
        let ln_fact_200: f64 = (1..=200).map(|k| (k as f64).ln()).sum();
        assert!(rel(ln_gamma(201.0).unwrap(), ln_fact_200) < 1e-13);
    }

    proptest! {
        #[test]
        fn recurrence_holds(x in 0.01f64..29.0) {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-12);
        }
    }
}
