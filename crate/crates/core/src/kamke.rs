//! Kamke comparison functions `w(t, s) = h(t)·s^λ` and numerical evidence
//! for the comparison argument: the family `D^α y = w(t, y)`, `y(a) = ε`,
//! its growth in `ε`, and falsification of non-zero candidate solutions of
//! the integral inequality `u ≤ J^α[w(·, u)]`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::frac::{rl_integral, FracOrder, SampledPath, StateVec, TimeGrid};
use crate::volterra::{picard_solve, uniqueness_delta, IVProblem, Rhs, SolveReport};

/// Contraction target used when certifying superlinear comparison runs.
pub const CERTIFY_CONTRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Constant(f64),
    /// Time-varying `h(t)`, linearly interpolated between nodes.
    Path(SampledPath),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KamkeSpec {
    coefficient: Coefficient,
    lambda: f64,
    alpha: FracOrder,
    a: f64,
    b: f64,
}

impl KamkeSpec {
    /// `w(t, s) = H·s^λ` on `[a, b]`.
    pub fn constant(h: f64, lambda: f64, alpha: FracOrder, a: f64, b: f64) -> Result<Self> {
        if !(h >= 0.0 && h.is_finite()) {
            return Err(FracError::Domain(format!("H must be non-negative, got {h}")));
        }
        Self::checked(Coefficient::Constant(h), lambda, alpha, a, b)
    }

    /// `w(t, s) = h(t)·s^λ` on the grid span of `h`.
    pub fn time_varying(h: SampledPath, lambda: f64, alpha: FracOrder) -> Result<Self> {
        if h.dim() != 1 {
            return Err(FracError::Contract("coefficient path must be scalar".into()));
        }
        if let Some(v) = h.scalar_values().into_iter().find(|v| !(*v >= 0.0)) {
            return Err(FracError::Domain(format!(
                "coefficient must be non-negative, found {v}"
            )));
        }
        let (a, b) = (h.grid().start(), h.grid().end());
        Self::checked(Coefficient::Path(h), lambda, alpha, a, b)
    }

    fn checked(coefficient: Coefficient, lambda: f64, alpha: FracOrder, a: f64, b: f64) -> Result<Self> {
        if !(lambda >= 1.0 && lambda.is_finite()) {
            return Err(FracError::Domain(format!("lambda must be >= 1, got {lambda}")));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(FracError::Domain(format!("interval [{a}, {b}] is empty")));
        }
        Ok(Self {
            coefficient,
            lambda,
            alpha,
            a,
            b,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn coefficient(&self) -> &Coefficient {
        &self.coefficient
    }

    fn coefficient_at(&self, t: f64) -> f64 {
        match &self.coefficient {
            Coefficient::Constant(h) => *h,
            Coefficient::Path(p) => p.interpolate_scalar(t),
        }
    }

    fn coefficient_sup(&self) -> f64 {
        match &self.coefficient {
            Coefficient::Constant(h) => *h,
            Coefficient::Path(p) => p.scalar_values().into_iter().fold(0.0, f64::max),
        }
    }

    fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (self.b - self.a);
        t >= self.a - slack && t <= self.b + slack
    }
}

/// `h(t)·s^λ`.
pub fn eval_kamke(spec: &KamkeSpec, t: f64, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(FracError::Domain(format!(
            "Kamke functions are evaluated at s >= 0, got {s}"
        )));
    }
    if !spec.contains(t) {
        return Err(FracError::Domain(format!(
            "t = {t} lies outside [{}, {}]",
            spec.a, spec.b
        )));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(spec.coefficient_at(t) * s.powf(spec.lambda))
}

/// The comparison problem `D^α y = h(t)·max(y, 0)^λ`, `y(a) = ε`, with ball
/// radius `ε` and bound `sup h·(2ε)^λ`.
pub fn comparison_problem(spec: &KamkeSpec, eps: f64) -> Result<IVProblem> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(FracError::Domain(format!("epsilon must be positive, got {eps}")));
    }
    let s = spec.clone();
    let rhs: Rhs = Arc::new(move |t, y: &StateVec| {
        let v = y.first().max(0.0);
        StateVec::scalar(if v == 0.0 { 0.0 } else { s.coefficient_at(t) * v.powf(s.lambda) })
    });
    let bound = (spec.coefficient_sup() * (2.0 * eps).powf(spec.lambda)).max(f64::MIN_POSITIVE);
    IVProblem::new(
        spec.a,
        spec.b - spec.a,
        StateVec::scalar(eps),
        spec.alpha,
        rhs,
        eps,
        bound,
    )
}

#[derive(Debug, Clone)]
pub struct ComparisonFamily {
    pub eps: Vec<f64>,
    /// One path per ε, all on the (possibly shortened) grid.
    pub paths: Vec<SampledPath>,
    /// Per-ε solver reports; `None` for ε = 0.
    pub reports: Vec<Option<SolveReport>>,
    pub certified_end: f64,
    /// Whether the interval had to be shortened to certify the run.
    pub shrunk: bool,
}

/// Solves the comparison problem for every ε on `grid`.
///
/// Superlinear runs (`λ > 1`) are certified by requiring the contraction
/// constant of the Lipschitz bound `λ·sup h·(2ε_max)^{λ−1}` to be at most
/// one half; the grid is shortened when needed. The linear case is globally
/// Lipschitz and needs no shortening. The solver tolerance is `tol·ε`.
pub fn comparison_family(
    spec: &KamkeSpec,
    eps_list: &[f64],
    grid: TimeGrid,
    tol: f64,
    max_iter: usize,
) -> Result<ComparisonFamily> {
    if eps_list.is_empty() {
        return Err(FracError::Domain("epsilon list is empty".into()));
    }
    if let Some(e) = eps_list.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
        return Err(FracError::Domain(format!("epsilon must be non-negative, got {e}")));
    }
    if (grid.start() - spec.a).abs() > 1e-12 * (1.0 + spec.a.abs()) || !spec.contains(grid.end()) {
        return Err(FracError::Contract(format!(
            "grid [{}, {}] must start at a and stay within [{}, {}]",
            grid.start(),
            grid.end(),
            spec.a,
            spec.b
        )));
    }
    let eps_max = eps_list.iter().copied().fold(0.0, f64::max);
    let h_sup = spec.coefficient_sup();
    let mut grid = grid;
    let mut shrunk = false;
    if spec.lambda > 1.0 && h_sup > 0.0 && eps_max > 0.0 {
        let m = h_sup * (2.0 * eps_max).powf(spec.lambda);
        let kappa = spec.lambda * h_sup * (2.0 * eps_max).powf(spec.lambda - 1.0);
        let delta = uniqueness_delta(
            spec.b - spec.a,
            eps_max,
            m,
            kappa,
            CERTIFY_CONTRACTION,
            spec.alpha,
        )?;
        let length = grid.end() - grid.start();
        if delta < length * (1.0 - 1e-12) {
            let steps = (delta / grid.step() * (1.0 + 1e-12)).floor() as usize;
            if steps == 0 {
                return Err(FracError::Refused(format!(
                    "certified interval {delta} is shorter than one step {}",
                    grid.step()
                )));
            }
            grid = grid.truncated(steps)?;
            shrunk = true;
        }
    }

    let mut paths = Vec::with_capacity(eps_list.len());
    let mut reports = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if eps == 0.0 {
            paths.push(SampledPath::constant(grid, StateVec::scalar(0.0)));
            reports.push(None);
            continue;
        }
        let problem = comparison_problem(spec, eps)?;
        let report = picard_solve(&problem, grid, tol * eps, max_iter).map_err(|e| {
            FracError::ComparisonSolve {
                eps,
                source: Box::new(e),
            }
        })?;
        paths.push(report.solution.clone());
        reports.push(Some(report));
    }
    Ok(ComparisonFamily {
        eps: eps_list.to_vec(),
        paths,
        reports,
        certified_end: grid.end(),
        shrunk,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityScan {
    pub eps: Vec<f64>,
    /// `sup_t |u_ε(t)| / ε` per ε.
    pub ratios: Vec<f64>,
    pub a_hat: f64,
    pub certified_end: f64,
    pub shrunk: bool,
}

/// Empirical constant in `sup |u_ε| ≤ A·ε`.
pub fn stability_scan(
    spec: &KamkeSpec,
    eps_list: &[f64],
    grid: TimeGrid,
    tol: f64,
    max_iter: usize,
) -> Result<StabilityScan> {
    if let Some(e) = eps_list.iter().find(|e| !(**e > 0.0)) {
        return Err(FracError::Domain(format!(
            "stability scan needs positive epsilons, got {e}"
        )));
    }
    let family = comparison_family(spec, eps_list, grid, tol, max_iter)?;
    let ratios: Vec<f64> = family
        .paths
        .iter()
        .zip(eps_list)
        .map(|(p, e)| p.scalar_values().into_iter().fold(0.0f64, |m, v| m.max(v.abs())) / e)
        .collect();
    let a_hat = ratios.iter().copied().fold(0.0, f64::max);
    Ok(StabilityScan {
        eps: eps_list.to_vec(),
        ratios,
        a_hat,
        certified_end: family.certified_end,
        shrunk: family.shrunk,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateVerdict {
    /// `max_t (u(t) − J^α[w(·, u)](t))`.
    pub ineq_margin: f64,
    /// Estimate of `lim u(t)/(t−a)^α`; infinite when it grows under refinement.
    pub limit_estimate: f64,
    pub admissible: bool,
}

/// Tests a non-negative candidate against the integral inequality and the
/// vanishing-quotient condition.
///
/// The quotient `q = u(t)/(t−a)^α` is read at the first two positive nodes,
/// i.e. at scales `h` and `2h`. If it grows as the scale halves the estimate
/// is `+∞`, otherwise it is extrapolated linearly to zero scale.
pub fn candidate_violation(spec: &KamkeSpec, u: &SampledPath, tol: f64) -> Result<CandidateVerdict> {
    if u.dim() != 1 {
        return Err(FracError::Contract("candidate must be scalar".into()));
    }
    let grid = u.grid();
    if (grid.start() - spec.a).abs() > 1e-12 * (1.0 + spec.a.abs()) || !spec.contains(grid.end()) {
        return Err(FracError::Contract(format!(
            "candidate grid must start at a = {} and stay within [a, b]",
            spec.a
        )));
    }
    if grid.len() < 3 {
        return Err(FracError::GridTooSmall {
            nodes: grid.len(),
            required: 3,
        });
    }
    let values = u.scalar_values();
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
        return Err(FracError::Domain(format!(
            "candidate must be non-negative, found {v}"
        )));
    }
    let mut w = Vec::with_capacity(values.len());
    for (t, s) in grid.nodes().zip(&values) {
        w.push(eval_kamke(spec, t, *s)?);
    }
    let integral = rl_integral(&SampledPath::scalar(*grid, w)?, spec.alpha).scalar_values();
    let ineq_margin = values
        .iter()
        .zip(&integral)
        .map(|(u, i)| u - i)
        .fold(f64::NEG_INFINITY, f64::max);

    let alpha = spec.alpha.value();
    let h = grid.step();
    let q1 = values[1] / h.powf(alpha);
    let q2 = values[2] / (2.0 * h).powf(alpha);
    let limit_estimate = if q1 > q2 * (1.0 + 1e-12) && q1 > tol {
        f64::INFINITY
    } else {
        (2.0 * q1 - q2).max(0.0)
    };
    Ok(CandidateVerdict {
        ineq_margin,
        limit_estimate,
        admissible: ineq_margin <= tol && limit_estimate <= tol,
    })
}
