//! Picard iteration for the Volterra form of the fractional initial value
//! problem
//!
//! ```text
//! D^α_C u = f(t, u),  u(a) = u₀   ⇔   u(t) = u₀ + J^α_a[f(·, u(·))](t)
//! ```
//!
//! together with the explicit existence interval `min{δ̄, (βΓ(α+1)/M)^{1/α}}`,
//! the uniqueness interval that additionally forces `κδ^α/Γ(α+1) ≤ C`, and the
//! contraction constant itself.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::frac::{gamma_pos, FracIntegrator, FracOrder, SampledPath, StateVec, TimeGrid};

/// Right-hand side `f(t, u)`. Must be a pure function.
pub type Rhs = Arc<dyn Fn(f64, &StateVec) -> StateVec + Send + Sync>;

/// Ambient interval `[a, a+δ̄]`, ball `B(u₀, β)`, bound `M ≥ ‖f‖` on the
/// rectangle and optional Lipschitz constant `κ`.
#[derive(Clone)]
pub struct IVProblem {
    a: f64,
    bar_delta: f64,
    u0: StateVec,
    alpha: FracOrder,
    rhs: Rhs,
    beta: f64,
    bound: f64,
    kappa: Option<f64>,
}

impl fmt::Debug for IVProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IVProblem")
            .field("a", &self.a)
            .field("bar_delta", &self.bar_delta)
            .field("u0", &self.u0)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("bound", &self.bound)
            .field("kappa", &self.kappa)
            .finish_non_exhaustive()
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(FracError::Domain(format!("{name} must be positive, got {v}")))
    }
}

impl IVProblem {
    pub fn new(
        a: f64,
        bar_delta: f64,
        u0: StateVec,
        alpha: FracOrder,
        rhs: Rhs,
        beta: f64,
        bound: f64,
    ) -> Result<Self> {
        if !a.is_finite() {
            return Err(FracError::Domain("initial time must be finite".into()));
        }
        Ok(Self {
            a,
            bar_delta: positive("bar_delta", bar_delta)?,
            u0,
            alpha,
            rhs,
            beta: positive("beta", beta)?,
            bound: positive("M", bound)?,
            kappa: None,
        })
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        self.kappa = Some(positive("kappa", kappa)?);
        Ok(self)
    }

    /// Scalar problem helper: `f(t, u)` on plain numbers.
    #[allow(clippy::too_many_arguments)]
    pub fn scalar(
        a: f64,
        bar_delta: f64,
        u0: f64,
        alpha: FracOrder,
        rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        beta: f64,
        bound: f64,
    ) -> Result<Self> {
        let rhs: Rhs = Arc::new(move |t, u: &StateVec| StateVec::scalar(rhs(t, u.first())));
        Self::new(a, bar_delta, StateVec::scalar(u0), alpha, rhs, beta, bound)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn bar_delta(&self) -> f64 {
        self.bar_delta
    }

    pub fn u0(&self) -> &StateVec {
        &self.u0
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }

    pub fn rhs(&self) -> &Rhs {
        &self.rhs
    }

    pub fn eval_rhs(&self, t: f64, u: &StateVec) -> StateVec {
        (self.rhs)(t, u)
    }

    /// Existence interval length for this problem's data.
    pub fn existence_delta(&self) -> f64 {
        existence_delta(self.bar_delta, self.beta, self.bound, self.alpha)
            .expect("problem data validated at construction")
    }

    fn check_grid(&self, grid: &TimeGrid) -> Result<()> {
        let slack = 1e-12 * (1.0 + self.a.abs() + self.bar_delta);
        if (grid.start() - self.a).abs() > slack {
            return Err(FracError::Contract(format!(
                "grid starts at {} but the problem starts at {}",
                grid.start(),
                self.a
            )));
        }
        if grid.end() > self.a + self.bar_delta + slack {
            return Err(FracError::Contract(format!(
                "grid ends at {} beyond the ambient interval end {}",
                grid.end(),
                self.a + self.bar_delta
            )));
        }
        Ok(())
    }
}

/// `min{δ̄, (β·Γ(α+1)/M)^{1/α}}`.
pub fn existence_delta(bar_delta: f64, beta: f64, m: f64, alpha: FracOrder) -> Result<f64> {
    positive("bar_delta", bar_delta)?;
    positive("beta", beta)?;
    positive("M", m)?;
    let a = alpha.value();
    Ok(bar_delta.min((beta * gamma_pos(a + 1.0) / m).powf(1.0 / a)))
}

/// `min{δ̄, (β·Γ(α+1)/M)^{1/α}, (C·Γ(α+1)/κ)^{1/α}}` for `0 < C < 1`; the
/// result satisfies `κδ^α/Γ(α+1) ≤ C`.
pub fn uniqueness_delta(
    bar_delta: f64,
    beta: f64,
    m: f64,
    kappa: f64,
    c: f64,
    alpha: FracOrder,
) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(FracError::Domain(format!(
            "contraction target C must lie in (0,1), got {c}"
        )));
    }
    positive("kappa", kappa)?;
    let a = alpha.value();
    let third = (c * gamma_pos(a + 1.0) / kappa).powf(1.0 / a);
    Ok(existence_delta(bar_delta, beta, m, alpha)?.min(third))
}

/// `κ·δ^α/Γ(α+1)`.
pub fn contraction_estimate(problem: &IVProblem, delta: f64, alpha: FracOrder) -> Result<f64> {
    let kappa = problem.kappa.ok_or_else(|| {
        FracError::Contract("contraction estimate needs a Lipschitz constant kappa".into())
    })?;
    if !(delta >= 0.0) {
        return Err(FracError::Domain(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    let a = alpha.value();
    Ok(kappa * delta.powf(a) / gamma_pos(a + 1.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: SampledPath,
    pub iterations: usize,
    /// Sup-norm of the last Picard update.
    pub final_increment: f64,
    /// Largest ratio of consecutive non-zero increments (0 when fewer than two).
    pub observed_ratio: f64,
    /// Volterra residual of the returned iterate.
    pub residual: f64,
    /// Largest `‖u^{(m)}(t) − u₀‖` over all iterates and nodes.
    pub max_excursion: f64,
    /// Every increment, in order.
    pub increments: Vec<f64>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    /// Ratios of consecutive non-zero increments.
    pub fn ratios(&self) -> Vec<f64> {
        self.increments
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }
}

struct PicardOperator<'a> {
    problem: &'a IVProblem,
    integrator: FracIntegrator,
    nodes: Vec<f64>,
}

impl PicardOperator<'_> {
    fn apply(&self, u: &[StateVec]) -> Result<Vec<StateVec>> {
        let dim = self.problem.u0.len();
        let mut f = Vec::with_capacity(u.len());
        for (t, v) in self.nodes.iter().zip(u) {
            let y = self.problem.eval_rhs(*t, v);
            if y.len() != dim {
                return Err(FracError::Contract(format!(
                    "rhs returned {} components for a {dim}-component state",
                    y.len()
                )));
            }
            f.push(y);
        }
        Ok(self
            .integrator
            .apply_states(&f)
            .iter()
            .map(|j| self.problem.u0.plus(j))
            .collect())
    }
}

fn sup_dist(a: &[StateVec], b: &[StateVec]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max(x.dist(y)))
}

/// Picard iteration `u^{(m+1)} = u₀ + J^α[f(·, u^{(m)})]` from `u^{(0)} ≡ u₀`.
///
/// Terminates once the sup-norm increment is at most `tol` and the returned
/// iterate has Volterra residual at most `tol`.
pub fn picard_solve(
    problem: &IVProblem,
    grid: TimeGrid,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    positive("tol", tol)?;
    if max_iter == 0 {
        return Err(FracError::Domain("max_iter must be at least 1".into()));
    }
    problem.check_grid(&grid)?;
    let mut warnings = Vec::new();
    let delta = problem.existence_delta();
    if grid.end() - problem.a > delta * (1.0 + 1e-12) {
        warnings.push(format!(
            "grid length {} exceeds the existence interval {delta}; run is uncertified",
            grid.end() - problem.a
        ));
    }

    let op = PicardOperator {
        problem,
        integrator: FracIntegrator::new(grid, problem.alpha),
        nodes: grid.nodes().collect(),
    };
    let excursion = |u: &[StateVec]| u.iter().fold(0.0f64, |acc, v| acc.max(v.dist(&problem.u0)));
    let ball_slack = 1e-9 * problem.beta;
    let mut escaped = false;

    let mut cur = vec![problem.u0.clone(); grid.len()];
    let mut next = op.apply(&cur)?;
    let mut iterations = 1;
    let mut increments = Vec::new();
    let mut max_excursion: f64 = 0.0;
    loop {
        let inc = sup_dist(&next, &cur);
        increments.push(inc);
        let exc = excursion(&next);
        max_excursion = max_excursion.max(exc);
        if exc > problem.beta + ball_slack && !escaped {
            escaped = true;
            warnings.push(format!(
                "iterate {iterations} leaves B(u0, {}) (distance {exc}); rhs evaluated off the ball",
                problem.beta
            ));
        }
        if !inc.is_finite() {
            return Err(FracError::IterationLimit {
                iterations,
                last_increment: inc,
            });
        }
        let after = if inc <= tol {
            let after = op.apply(&next)?;
            let residual = sup_dist(&next, &after);
            if residual <= tol {
                let solution = SampledPath::new(grid, next)?;
                let observed_ratio = ratio_max(&increments);
                return Ok(SolveReport {
                    solution,
                    iterations,
                    final_increment: inc,
                    observed_ratio,
                    residual,
                    max_excursion,
                    increments,
                    warnings,
                });
            }
            Some(after)
        } else {
            None
        };
        if iterations >= max_iter {
            return Err(FracError::IterationLimit {
                iterations,
                last_increment: inc,
            });
        }
        let new_next = match after {
            Some(a) => a,
            None => op.apply(&next)?,
        };
        cur = std::mem::replace(&mut next, new_next);
        iterations += 1;
    }
}

fn ratio_max(increments: &[f64]) -> f64 {
    increments
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max)
}

/// `sup_t ‖u(t) − u₀ − J^α[f(·, u(·))](t)‖`.
pub fn volterra_residual(u: &SampledPath, problem: &IVProblem) -> Result<f64> {
    problem.check_grid(u.grid())?;
    if u.dim() != problem.u0.len() {
        return Err(FracError::Contract(format!(
            "path has {} components, problem state has {}",
            u.dim(),
            problem.u0.len()
        )));
    }
    let op = PicardOperator {
        problem,
        integrator: FracIntegrator::new(*u.grid(), problem.alpha),
        nodes: u.grid().nodes().collect(),
    };
    let image = op.apply(u.values())?;
    Ok(sup_dist(u.values(), &image))
}
