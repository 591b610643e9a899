//! Reference computations that share no code path with the solvers they
//! check: closed-form fractional integrals of Taylor series, a classical
//! Runge–Kutta integrator and composite Simpson quadrature.

use crate::frac::gamma_pos;

/// Smooth test functions with known Taylor coefficients at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFn {
    Sin,
    Cos,
    Square,
}

impl TestFn {
    pub const ALL: [TestFn; 3] = [TestFn::Sin, TestFn::Cos, TestFn::Square];

    pub fn name(self) -> &'static str {
        match self {
            TestFn::Sin => "sin t",
            TestFn::Cos => "cos t",
            TestFn::Square => "t^2",
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        match self {
            TestFn::Sin => t.sin(),
            TestFn::Cos => t.cos(),
            TestFn::Square => t * t,
        }
    }

    // (power, coefficient) pairs of the Taylor expansion at 0
    fn taylor(self) -> Vec<(u32, f64)> {
        match self {
            TestFn::Square => vec![(2, 1.0)],
            TestFn::Sin | TestFn::Cos => {
                let start = if self == TestFn::Sin { 1 } else { 0 };
                let mut out = Vec::new();
                let mut fact = 1.0;
                for k in 0..40u32 {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    if k >= start && (k - start) % 2 == 0 {
                        let sign = if ((k - start) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                        out.push((k, sign / fact));
                    }
                }
                out
            }
        }
    }

    /// `J^β f(t)` for `t ≥ 0` from `J^β t^k = k!/Γ(k+1+β)·t^{k+β}`; `β = 0`
    /// returns `f(t)`.
    pub fn rl_integral_exact(self, beta: f64, t: f64) -> f64 {
        if beta == 0.0 {
            return self.eval(t);
        }
        if t == 0.0 {
            return 0.0;
        }
        let mut fact = 1.0;
        let mut last = 0;
        self.taylor()
            .into_iter()
            .map(|(k, c)| {
                while last < k {
                    last += 1;
                    fact *= last as f64;
                }
                c * fact / gamma_pos(k as f64 + 1.0 + beta) * t.powf(k as f64 + beta)
            })
            .sum()
    }
}

/// Classical fourth-order Runge–Kutta for `y' = f(t, y)` from `t0` to `t1`
/// in `steps` equal steps; returns the states at every step.
pub fn rk4(
    f: impl Fn(f64, &[f64]) -> Vec<f64>,
    t0: f64,
    y0: &[f64],
    t1: f64,
    steps: usize,
) -> Vec<Vec<f64>> {
    let h = (t1 - t0) / steps as f64;
    let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    out.push(y.clone());
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + h / 2.0, &axpy(&y, &k1, h / 2.0));
        let k3 = f(t + h / 2.0, &axpy(&y, &k2, h / 2.0));
        let k4 = f(t + h, &axpy(&y, &k3, h));
        for j in 0..y.len() {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        out.push(y.clone());
    }
    out
}

/// Composite Simpson rule with `n` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `∫_a^t (t−s)^{β−1} g(s) ds` for smooth `g` by substituting
/// `s = t − w^{1/β}`, which removes the endpoint singularity.
pub fn singular_kernel_integral(g: impl Fn(f64) -> f64, beta: f64, a: f64, t: f64, n: usize) -> f64 {
    if t <= a {
        return 0.0;
    }
    let w_max = (t - a).powf(beta);
    simpson(|w| g(t - w.powf(1.0 / beta)) / beta, 0.0, w_max, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_order_is_the_function() {
        for f in TestFn::ALL {
            assert_eq!(f.rl_integral_exact(0.0, 0.7), f.eval(0.7));
        }
    }

    #[test]
    fn first_order_integrals_are_antiderivatives() {
        let t: f64 = 0.9;
        assert!((TestFn::Sin.rl_integral_exact(1.0, t) - (1.0 - t.cos())).abs() < 1e-15);
        assert!((TestFn::Cos.rl_integral_exact(1.0, t) - t.sin()).abs() < 1e-15);
        assert!((TestFn::Square.rl_integral_exact(1.0, t) - t.powi(3) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn series_matches_substituted_quadrature() {
        let beta: f64 = 0.4;
        let t = 0.8;
        let quad = singular_kernel_integral(f64::cos, beta, 0.0, t, 4000) / gamma_pos(beta);
        assert!((TestFn::Cos.rl_integral_exact(beta, t) - quad).abs() < 1e-10);
    }

    #[test]
    fn rk4_reproduces_exponential() {
        let ys = rk4(|_, y| vec![y[0]], 0.0, &[1.0], 1.0, 1000);
        assert!((ys[1000][0] - 1f64.exp()).abs() < 1e-12);
    }
}
