//! Semi-discrete fractional p-Laplacian on the half-line with unit spatial
//! step:
//!
//! ```text
//! D^α_C u_n = r_{n+1/2}(t)Φ_p(u_{n+1} − u_n) − r_{n−1/2}(t)Φ_p(u_n − u_{n−1}) + F_n(t)
//! u_0(t) = ψ(t),  u_n(0) = φ(n),  n = 1..N,  u_{N+1} := 0
//! ```
//!
//! with `Φ_p(x) = |x|^{p−2}x`, `r_{n±1/2}(t) = r(t, n ± 1/2)` and
//! `F_n(t) = F(t, n)`. The certificate bounds the data symbolically with
//! interval arithmetic on the expression trees.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::expr::{Asymptotic, Expr, Interval, Var};
use crate::frac::{FracOrder, SampledPath, StateVec, TimeGrid};
use crate::volterra::{existence_delta, picard_solve, IVProblem, Rhs, SolveReport};

/// `|x|^{p−2}·x`.
pub fn phi_p(x: f64, p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(FracError::Domain(format!("Phi_p needs p >= 2, got {p}")));
    }
    Ok(phi(x, p))
}

#[inline]
fn phi(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x
    } else {
        x.abs().powf(p - 2.0) * x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PLapProblem {
    p: f64,
    alpha: FracOrder,
    t_end: f64,
    n: usize,
    r: Expr,
    forcing: Expr,
    phi: Expr,
    psi: Expr,
    beta: f64,
}

impl PLapProblem {
    /// Problem with `r ≡ 1`, `F ≡ 0`, `ψ ≡ 0` and `β = 1`.
    pub fn new(p: f64, alpha: FracOrder, t_end: f64, n: usize, phi: Expr) -> Result<Self> {
        if !(p >= 2.0 && p.is_finite()) {
            return Err(FracError::Domain(format!("p must be >= 2, got {p}")));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(FracError::Domain(format!("T must be positive, got {t_end}")));
        }
        if n < 2 {
            return Err(FracError::Domain(format!("N must be at least 2, got {n}")));
        }
        Ok(Self {
            p,
            alpha,
            t_end,
            n,
            r: Expr::num(1.0),
            forcing: Expr::zero(),
            phi,
            psi: Expr::zero(),
            beta: 1.0,
        })
    }

    pub fn with_r(mut self, r: Expr) -> Self {
        self.r = r;
        self
    }

    pub fn with_forcing(mut self, forcing: Expr) -> Self {
        self.forcing = forcing;
        self
    }

    /// Boundary path `ψ(t)`; must not depend on `x`.
    pub fn with_boundary(mut self, psi: Expr) -> Result<Self> {
        if psi.mentions(Var::X) {
            return Err(FracError::Domain("boundary psi may depend on t only".into()));
        }
        self.psi = psi;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(FracError::Domain(format!("beta must be positive, got {beta}")));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_truncation(mut self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(FracError::Domain(format!("N must be at least 2, got {n}")));
        }
        self.n = n;
        Ok(self)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn r(&self) -> &Expr {
        &self.r
    }

    pub fn forcing(&self) -> &Expr {
        &self.forcing
    }

    pub fn phi(&self) -> &Expr {
        &self.phi
    }

    pub fn psi(&self) -> &Expr {
        &self.psi
    }

    /// `(φ(1), …, φ(N))`.
    pub fn initial_state(&self) -> Result<StateVec> {
        let mut v = Vec::with_capacity(self.n);
        for n in 1..=self.n {
            v.push(self.phi.eval(0.0, n as f64)?);
        }
        Ok(StateVec::new(v))
    }

    pub fn boundary(&self, t: f64) -> Result<f64> {
        Ok(self.psi.eval(t, 0.0)?)
    }

    // r_{n+1/2}Φ(u_{n+1} − u_n) − r_{n−1/2}Φ(u_n − u_{n−1}), u_0 = ψ, u_{N+1} = 0
    fn stencil(&self, t: f64, u: &[f64], psi_t: f64, n: usize) -> Result<f64> {
        let at = |k: usize| match k {
            0 => psi_t,
            k if k > u.len() => 0.0,
            k => u[k - 1],
        };
        let (lo, mid, hi) = (at(n - 1), at(n), at(n + 1));
        let x = n as f64;
        let r_up = self.r.eval(t, x + 0.5)?;
        let r_down = self.r.eval(t, x - 0.5)?;
        Ok(r_up * phi(hi - mid, self.p) - r_down * phi(mid - lo, self.p))
    }
}

/// The operator `Λ_nᵖ` for `1 ≤ n ≤ N−1`.
pub fn lambda_np(
    t: f64,
    u: &StateVec,
    u0_boundary: f64,
    n: usize,
    problem: &PLapProblem,
) -> Result<f64> {
    let hi = problem.n - 1;
    if n < 1 || n > hi || u.len() < n + 1 {
        return Err(FracError::Index { n, lo: 1, hi });
    }
    problem.stencil(t, u.entries(), u0_boundary, n)
}

/// Right-hand side of the truncated system, components `n = 1..N`.
#[derive(Debug, Clone)]
pub struct PLapRhs {
    problem: PLapProblem,
}

impl PLapRhs {
    pub fn eval(&self, t: f64, u: &StateVec) -> Result<StateVec> {
        let pr = &self.problem;
        if u.len() != pr.n {
            return Err(FracError::Contract(format!(
                "state has {} components, truncation is N = {}",
                u.len(),
                pr.n
            )));
        }
        let psi_t = pr.boundary(t)?;
        let mut out = Vec::with_capacity(pr.n);
        for n in 1..=pr.n {
            out.push(pr.stencil(t, u.entries(), psi_t, n)? + pr.forcing.eval(t, n as f64)?);
        }
        Ok(StateVec::new(out))
    }

    /// Solver-facing form; evaluation errors surface as NaN components,
    /// which the Picard iteration reports as non-convergence.
    pub fn into_rhs(self) -> Rhs {
        Arc::new(move |t, u: &StateVec| {
            self.eval(t, u)
                .unwrap_or_else(|_| StateVec::new(vec![f64::NAN; u.len()]))
        })
    }
}

pub fn assemble_rhs(problem: &PLapProblem) -> PLapRhs {
    PLapRhs {
        problem: problem.clone(),
    }
}

/// Constants of the existence certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub lambda: f64,
    #[serde(rename = "P")]
    pub p_bound: f64,
    #[serde(rename = "Q")]
    pub q_bound: f64,
    #[serde(rename = "M")]
    pub m_bound: f64,
    pub delta: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub k_rule: String,
    /// `sup_n |φ(n)|`.
    #[serde(skip)]
    pub phi_norm: f64,
    /// `sup r` over `[0,T]×[0,∞)`.
    #[serde(skip)]
    pub r_sup: f64,
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Certificate {
    /// Lipschitz constant on `B(u₀, β)`: `4·sup r` for `p = 2`, the
    /// mean-value bound `C₁` in general.
    pub fn kappa(&self) -> f64 {
        self.c1
    }
}

pub const K_RULE: &str = "k_1 = 1, k_n = n - 1 for n >= 2";

fn refuse(msg: String) -> FracError {
    FracError::Refused(msg)
}

fn sup_abs(e: &Expr, name: &str, t: Interval, x: Interval) -> Result<Interval> {
    match e.bound(t, x) {
        Some(iv) if iv.is_bounded() => Ok(iv),
        _ => Err(refuse(format!(
            "cannot certify a finite supremum of {name} = {e} over t in [{}, {}], x in [{}, {}]",
            t.lo, t.hi, x.lo, x.hi
        ))),
    }
}

/// Certifies `P = sup|F|`, `Q = 2ᵖ sup r`, `M = P + Q(‖φ‖+β)^{p−1}`,
/// `δ`, `C₁ = sup r·2ᵖ(p−1)(‖φ‖+β)^{p−2}` and `C₂ = 2ᵖ(‖φ‖+β)^{p−1}`.
///
/// Refuses when a supremum or the decay of `F` or `φ` in `x` cannot be
/// established from the expression, when `r` may be negative, and when
/// `M = 0`.
pub fn certify(problem: &PLapProblem) -> Result<Certificate> {
    let p = problem.p;
    let t_range = Interval::new(0.0, problem.t_end);
    let half_line = Interval::new(0.0, f64::INFINITY);

    let f_iv = sup_abs(&problem.forcing, "F", t_range, half_line)?;
    let p_bound = f_iv.abs_sup();
    let r_iv = sup_abs(&problem.r, "r", t_range, half_line)?;
    if r_iv.lo < 0.0 {
        return Err(refuse(format!(
            "r = {} is not certified non-negative (lower bound {})",
            problem.r, r_iv.lo
        )));
    }
    let r_sup = r_iv.hi;
    if problem.forcing.asymptotic(t_range) != Asymptotic::Zero {
        return Err(refuse(format!(
            "F = {} is not certified to vanish as x -> infinity",
            problem.forcing
        )));
    }
    if problem.phi.asymptotic(Interval::point(0.0)) != Asymptotic::Zero {
        return Err(refuse(format!(
            "phi = {} is not certified to vanish as x -> infinity",
            problem.phi
        )));
    }
    let head = problem
        .initial_state()?
        .entries()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tail_range = Interval::new((problem.n + 1) as f64, f64::INFINITY);
    let tail = sup_abs(&problem.phi, "phi", Interval::point(0.0), tail_range)?.abs_sup();
    let phi_norm = head.max(tail);

    let two_p = 2f64.powf(p);
    let lambda = p - 1.0;
    let radius = phi_norm + problem.beta;
    let q_bound = two_p * r_sup;
    let m_bound = p_bound + q_bound * radius.powf(lambda);
    if !(m_bound > 0.0) {
        return Err(refuse(format!(
            "degenerate bound: M = {m_bound} (F and r vanish identically), existence interval undefined"
        )));
    }
    let delta = existence_delta(problem.t_end, problem.beta, m_bound, problem.alpha)?;
    let c1 = r_sup * two_p * (p - 1.0) * radius.powf(p - 2.0);
    let c2 = two_p * radius.powf(p - 1.0);
    let mut notes = Vec::new();
    if !problem.psi.is_literal_zero() {
        notes.push(format!(
            "boundary psi = {} is not identically zero; the constants assume psi = 0 and may need extra boundary terms in P",
            problem.psi
        ));
    }
    Ok(Certificate {
        lambda,
        p_bound,
        q_bound,
        m_bound,
        delta,
        c1,
        c2,
        k_rule: K_RULE.to_string(),
        phi_norm,
        r_sup,
        notes,
    })
}

/// `p_n(t) + q_n(t)·sup_{i≥k_n}|u_i|^{p−1}` with `p_n = |F_n|`,
/// `q_n = 2ᵖ max{r_{n−1/2}, r_{n+1/2}}`, `k_1 = 1`, `k_n = n−1`.
pub fn componentwise_bound(problem: &PLapProblem, t: f64, u: &StateVec, n: usize) -> Result<f64> {
    if n < 1 || n > problem.n {
        return Err(FracError::Index {
            n,
            lo: 1,
            hi: problem.n,
        });
    }
    let x = n as f64;
    let p_n = problem.forcing.eval(t, x)?.abs();
    let q_n = 2f64.powf(problem.p) * problem.r.eval(t, x - 0.5)?.max(problem.r.eval(t, x + 0.5)?);
    let k_n = if n == 1 { 1 } else { n - 1 };
    let sup = u.entries()[k_n - 1..]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(p_n + q_n * sup.powf(problem.p - 1.0))
}

#[derive(Debug, Clone)]
pub struct PLapSolve {
    pub report: SolveReport,
    pub certificate: Option<Certificate>,
}

/// Picard solution of the truncated system on `grid` (starting at 0).
///
/// Certified runs use the certificate's `M` and `β`; when certification is
/// refused the run proceeds uncertified with a warning in the report.
pub fn solve_semidiscrete(
    problem: &PLapProblem,
    grid: TimeGrid,
    tol: f64,
    max_iter: usize,
) -> Result<PLapSolve> {
    if grid.start() != 0.0 {
        return Err(FracError::Contract(format!(
            "semi-discrete runs start at t = 0, grid starts at {}",
            grid.start()
        )));
    }
    let (certificate, bound, note) = match certify(problem) {
        Ok(c) => {
            let m = c.m_bound;
            (Some(c), m, None)
        }
        Err(FracError::Refused(why)) => (None, 1.0, Some(format!("uncertified run: {why}"))),
        Err(e) => return Err(e),
    };
    let ivp = IVProblem::new(
        0.0,
        problem.t_end,
        problem.initial_state()?,
        problem.alpha,
        assemble_rhs(problem).into_rhs(),
        problem.beta,
        bound,
    )?;
    let mut report = picard_solve(&ivp, grid, tol, max_iter)?;
    if let Some(n) = note {
        report.warnings.insert(0, n);
    }
    if let Some(c) = &certificate {
        report.warnings.extend(c.notes.iter().cloned());
    }
    Ok(PLapSolve {
        report,
        certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationRow {
    pub n_coarse: usize,
    pub n_fine: usize,
    /// `sup_t max_{n ≤ N_coarse} |u_n^{coarse}(t) − u_n^{fine}(t)|`.
    pub sup_diff: f64,
}

fn solve_each(
    problems: Vec<PLapProblem>,
    grid: &[TimeGrid],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<SampledPath>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = problems
            .iter()
            .zip(grid)
            .map(|(pr, g)| s.spawn(move || solve_semidiscrete(pr, *g, tol, max_iter)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked").map(|r| r.report.solution))
            .collect()
    })
}

/// Differences between consecutive truncation lengths on a shared grid.
pub fn truncation_study(
    problem: &PLapProblem,
    n_list: &[usize],
    grid: TimeGrid,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<TruncationRow>> {
    if n_list.len() < 2 {
        return Err(FracError::Domain("truncation study needs at least two N".into()));
    }
    if n_list.windows(2).any(|w| w[1] < w[0]) {
        return Err(FracError::Domain(format!("N list must be increasing, got {n_list:?}")));
    }
    let problems = n_list
        .iter()
        .map(|&n| problem.clone().with_truncation(n))
        .collect::<Result<Vec<_>>>()?;
    let sols = solve_each(problems, &vec![grid; n_list.len()], tol, max_iter)?;
    Ok(sols
        .windows(2)
        .zip(n_list.windows(2))
        .map(|(s, n)| {
            let sup_diff = s[0]
                .values()
                .iter()
                .zip(s[1].values())
                .map(|(c, f)| {
                    (1..=n[0]).fold(0.0f64, |m, k| m.max((c.component(k) - f.component(k)).abs()))
                })
                .fold(0.0f64, f64::max);
            TruncationRow {
                n_coarse: n[0],
                n_fine: n[1],
                sup_diff,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRow {
    pub h: f64,
    /// Sup distance to the finest run, read at this run's nodes.
    pub sup_diff: f64,
}

/// Step-size study on `[0, t_end]`; the finest step is the reference and
/// is linearly interpolated onto the coarser grids.
pub fn step_study(
    problem: &PLapProblem,
    h_list: &[f64],
    t_end: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<StepRow>> {
    if h_list.is_empty() {
        return Err(FracError::Domain("step study needs at least one h".into()));
    }
    let grids = h_list
        .iter()
        .map(|&h| TimeGrid::spanning(0.0, t_end, h))
        .collect::<Result<Vec<_>>>()?;
    let sols = solve_each(vec![problem.clone(); grids.len()], &grids, tol, max_iter)?;
    let finest = (0..grids.len())
        .min_by(|&a, &b| grids[a].step().total_cmp(&grids[b].step()))
        .expect("non-empty");
    let reference: Vec<SampledPath> = (1..=problem.n)
        .map(|k| SampledPath::scalar(grids[finest], sols[finest].component(k)))
        .collect::<Result<_>>()?;
    Ok(sols
        .iter()
        .zip(&grids)
        .map(|(s, g)| {
            let mut d: f64 = 0.0;
            for (t, v) in g.nodes().zip(s.values()) {
                for (k, r) in reference.iter().enumerate() {
                    d = d.max((v.component(k + 1) - r.interpolate_scalar(t)).abs());
                }
            }
            StepRow {
                h: g.step(),
                sup_diff: d,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::frac::rl_integral;
    use crate::oracles::rk4;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn ex(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    fn half() -> FracOrder {
        FracOrder::new(0.5).unwrap()
    }

    const FIRST_BASIS: &str = "exp(-50*(x-1)^2)";

    #[test]
    fn phi_p_examples() {
        for x in [-3.0, 0.0, 7.0] {
            assert_eq!(phi_p(x, 2.0).unwrap(), x);
        }
        assert_eq!(phi_p(-2.0, 3.0).unwrap(), -4.0);
        for p in [2.0, 2.5, 4.0] {
            assert_eq!(phi_p(0.0, p).unwrap(), 0.0);
        }
        assert!(phi_p(1.0, 1.5).is_err());
    }

    #[test]
    fn stencil_examples() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 4, ex("0")).unwrap();
        let u = StateVec::new(vec![1.0, 2.0, 4.0, 0.0]);
        assert_eq!(lambda_np(0.0, &u, 0.0, 2, &pr).unwrap(), 1.0);
        let p3 = PLapProblem::new(3.0, half(), 1.0, 4, ex("0")).unwrap();
        assert_eq!(lambda_np(0.0, &u, 0.0, 2, &p3).unwrap(), 3.0);
        let flat = StateVec::new(vec![5.0; 4]);
        assert_eq!(lambda_np(0.3, &flat, 5.0, 1, &p3).unwrap(), 0.0);
        assert!(matches!(
            lambda_np(0.0, &u, 0.0, 4, &pr),
            Err(FracError::Index { n: 4, lo: 1, hi: 3 })
        ));
        assert!(lambda_np(0.0, &u, 0.0, 0, &pr).is_err());
    }

    #[test]
    fn rhs_is_the_discrete_laplacian() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 6, ex("0")).unwrap();
        let rhs = assemble_rhs(&pr);
        assert!(rhs.eval(0.0, &StateVec::zeros(6)).unwrap().entries().iter().all(|v| *v == 0.0));
        let spike = StateVec::basis(3, 6);
        assert_eq!(rhs.eval(0.0, &spike).unwrap().entries(), &[0.0, 1.0, -2.0, 1.0, 0.0, 0.0]);
        let u = StateVec::new(vec![0.3, -1.2, 2.5, 0.7, 1.1, -0.4]);
        let f = rhs.eval(0.2, &u).unwrap();
        let e = u.entries();
        for n in 0..6 {
            let lo = if n == 0 { 0.0 } else { e[n - 1] };
            let hi = if n == 5 { 0.0 } else { e[n + 1] };
            assert!((f.entries()[n] - (hi - 2.0 * e[n] + lo)).abs() <= 1e-15 * 2.5 * 4.0);
        }
    }

    #[test]
    fn boundary_enters_first_component() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 3, ex("0"))
            .unwrap()
            .with_boundary(ex("2*t"))
            .unwrap();
        let f = assemble_rhs(&pr).eval(0.5, &StateVec::zeros(3)).unwrap();
        assert_eq!(f.entries(), &[1.0, 0.0, 0.0]);
        assert!(PLapProblem::new(2.0, half(), 1.0, 3, ex("0")).unwrap().with_boundary(ex("x")).is_err());
    }

    #[test]
    fn worked_certificate() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 16, ex(FIRST_BASIS)).unwrap();
        let c = certify(&pr).unwrap();
        assert_eq!(c.phi_norm, 1.0);
        assert_eq!((c.lambda, c.p_bound, c.q_bound, c.m_bound), (1.0, 0.0, 4.0, 8.0));
        assert!((c.delta - PI / 256.0).abs() < 1e-12);
        assert!((c.c1 - 4.0).abs() < 1e-12 && (c.c2 - 8.0).abs() < 1e-12);
        assert_eq!(c.kappa(), 4.0);
        assert!(c.notes.is_empty());
        let json = serde_json::to_value(&c).unwrap();
        let mut keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["C1", "C2", "M", "P", "Q", "delta", "k_rule", "lambda"]);
    }

    #[test]
    fn cubic_certificate() {
        let pr = PLapProblem::new(3.0, half(), 1.0, 8, ex(FIRST_BASIS))
            .unwrap()
            .with_r(ex("1/2"));
        let c = certify(&pr).unwrap();
        assert_eq!((c.q_bound, c.lambda, c.m_bound, c.c1, c.c2), (4.0, 2.0, 16.0, 16.0, 32.0));
    }

    #[test]
    fn certificate_refusals() {
        let degenerate = PLapProblem::new(2.0, half(), 1.0, 8, ex(FIRST_BASIS)).unwrap().with_r(ex("0"));
        match certify(&degenerate) {
            Err(FracError::Refused(m)) => assert!(m.contains("degenerate bound")),
            other => panic!("{other:?}"),
        }
        let growing = PLapProblem::new(2.0, half(), 1.0, 8, ex("x")).unwrap();
        assert!(matches!(certify(&growing), Err(FracError::Refused(_))));
        let unbounded_r = PLapProblem::new(2.0, half(), 1.0, 8, ex(FIRST_BASIS)).unwrap().with_r(ex("x"));
        assert!(matches!(certify(&unbounded_r), Err(FracError::Refused(_))));
        let negative_r = PLapProblem::new(2.0, half(), 1.0, 8, ex(FIRST_BASIS)).unwrap().with_r(ex("sin(x)"));
        assert!(matches!(certify(&negative_r), Err(FracError::Refused(_))));
        let steady = PLapProblem::new(2.0, half(), 1.0, 8, ex(FIRST_BASIS)).unwrap().with_forcing(ex("1"));
        assert!(matches!(certify(&steady), Err(FracError::Refused(_))));
    }

    #[test]
    fn nonzero_boundary_is_flagged() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 8, ex(FIRST_BASIS))
            .unwrap()
            .with_boundary(ex("sin(t)"))
            .unwrap();
        assert_eq!(certify(&pr).unwrap().notes.len(), 1);
    }

    #[test]
    fn forcing_and_tail_enter_the_bounds() {
        let pr = PLapProblem::new(2.0, FracOrder::ONE, 1.0, 4, ex("0.5^x"))
            .unwrap()
            .with_forcing(ex("sin(t)*exp(-x)"));
        let c = certify(&pr).unwrap();
        assert!(c.p_bound >= 1f64.sin() && c.p_bound <= 1.0);
        assert_eq!(c.phi_norm, 0.5);
    }

    #[test]
    fn zero_data_stays_zero() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 6, ex("0")).unwrap().with_r(ex("1"));
        let g = TimeGrid::spanning(0.0, 0.05, 1e-3).unwrap();
        let s = solve_semidiscrete(&pr, g, 1e-10, 50).unwrap();
        assert!(s.report.solution.values().iter().all(|v| v.entries().iter().all(|x| *x == 0.0)));
        // φ ≡ 0 decays, so only r ≡ 1 matters: M > 0
        assert!(s.certificate.is_some());
    }

    #[test]
    fn classical_limit_matches_runge_kutta() {
        let n = 12;
        let pr = PLapProblem::new(2.0, FracOrder::ONE, 1.0, n, ex(FIRST_BASIS)).unwrap();
        let delta = certify(&pr).unwrap().delta;
        let g = TimeGrid::spanning(0.0, delta, 1e-3).unwrap();
        let sol = solve_semidiscrete(&pr, g, 1e-12, 200).unwrap().report.solution;
        let rhs = assemble_rhs(&pr);
        let y0 = pr.initial_state().unwrap();
        let steps = g.n_steps() * 20;
        let reference = rk4(
            |t, y| rhs.eval(t, &StateVec::new(y.to_vec())).unwrap().entries().to_vec(),
            0.0,
            y0.entries(),
            g.end(),
            steps,
        );
        let mut err: f64 = 0.0;
        for (j, v) in sol.values().iter().enumerate() {
            let r = &reference[j * 20];
            for k in 0..n {
                err = err.max((v.entries()[k] - r[k]).abs());
            }
        }
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn certified_run_stays_in_ball() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 10, ex(FIRST_BASIS)).unwrap();
        let c = certify(&pr).unwrap();
        let g = TimeGrid::spanning(0.0, c.delta, c.delta / 100.0).unwrap();
        let s = solve_semidiscrete(&pr, g, 1e-10, 200).unwrap();
        assert!(s.report.max_excursion <= pr.beta() * (1.0 + 1e-6));
        assert!(s.report.warnings.is_empty(), "{:?}", s.report.warnings);
    }

    #[test]
    fn mass_changes_only_through_flux_and_forcing() {
        let n = 10;
        let pr = PLapProblem::new(2.0, half(), 1.0, n, ex("exp(-50*(x-3)^2)"))
            .unwrap()
            .with_forcing(ex("exp(-x)*cos(t)"));
        let g = TimeGrid::spanning(0.0, 0.2, 1e-3).unwrap();
        let sol = solve_semidiscrete(&pr, g, 1e-12, 300).unwrap().report.solution;
        let mass: Vec<f64> = sol.values().iter().map(|v| v.entries().iter().sum()).collect();
        let flux = sol.map(|t, u| {
            let e = u.entries();
            let forcing: f64 = (1..=n).map(|k| (-(k as f64)).exp() * t.cos()).sum();
            StateVec::scalar(-e[n - 1] - e[0] + forcing)
        });
        let integrated = rl_integral(&flux, half()).scalar_values();
        for j in 0..g.len() {
            assert!((mass[j] - mass[0] - integrated[j]).abs() < 1e-6);
        }
    }

    #[test]
    fn linear_half_order_decay_of_single_mode() {
        // two-site system with u_0 = u_3 = 0 has eigen-pairs (−1, (1,1)) and (−3, (1,−1))
        let pr = PLapProblem::new(2.0, half(), 1.0, 2, ex("exp(-50*(x-1)^2)+exp(-50*(x-2)^2)")).unwrap();
        let g = TimeGrid::spanning(0.0, 1.0, 1e-3).unwrap();
        let s = solve_semidiscrete(&pr, g, 1e-10, 300).unwrap();
        let u0 = pr.initial_state().unwrap().entries()[0];
        let v = s.report.solution.values().last().unwrap().entries()[0];
        let ml = crate::frac::mittag_leffler(half(), -1.0, 100).unwrap().value;
        assert!((v - u0 * ml).abs() < 1e-3, "{v} vs {}", u0 * ml);
    }

    #[test]
    fn truncation_examples() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 8, ex("0.5^x")).unwrap();
        let g = TimeGrid::spanning(0.0, 0.02, 1e-3).unwrap();
        let rows = truncation_study(&pr, &[8, 16, 32], g, 1e-12, 200).unwrap();
        assert!(rows[1].sup_diff <= rows[0].sup_diff);
        let same = truncation_study(&pr, &[8, 8], g, 1e-12, 200).unwrap();
        assert_eq!(same[0].sup_diff, 0.0);

        let compact = PLapProblem::new(2.0, half(), 1.0, 8, ex("exp(-50*(x-2)^2)")).unwrap();
        let g = TimeGrid::spanning(0.0, 1e-3, 1e-4).unwrap();
        let rows = truncation_study(&compact, &[8, 16], g, 1e-14, 200).unwrap();
        assert!(rows[0].sup_diff < 1e-6, "{}", rows[0].sup_diff);
        assert!(truncation_study(&pr, &[16, 8], g, 1e-12, 10).is_err());
    }

    #[test]
    fn step_study_reference_row_is_zero() {
        let pr = PLapProblem::new(2.0, half(), 1.0, 4, ex("0.5^x")).unwrap();
        let rows = step_study(&pr, &[4e-3, 2e-3, 1e-3], 0.02, 1e-12, 200).unwrap();
        assert_eq!(rows[2].sup_diff, 0.0);
        assert!(rows[0].sup_diff >= rows[1].sup_diff);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn growth_bound(p in 2.0f64..6.0, z in 0.0f64..10.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let (x, y) = (a * z, b * z);
            let lhs = phi(x - y, p).abs();
            let rhs = 2f64.powf(p - 1.0) * z.powf(p - 1.0);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn componentwise(
            p in 2.0f64..4.0,
            t in 0.0f64..1.0,
            u in proptest::collection::vec(-2.0f64..2.0, 6),
        ) {
            let pr = PLapProblem::new(p, half(), 1.0, 6, ex("0"))
                .unwrap()
                .with_r(ex("1 + 0.5*sin(t*x)"))
                .with_forcing(ex("cos(t)*exp(-x)"));
            let u = StateVec::new(u);
            let f = assemble_rhs(&pr).eval(t, &u).unwrap();
            for n in 1..=6 {
                let bound = componentwise_bound(&pr, t, &u, n).unwrap();
                prop_assert!(f.entries()[n - 1].abs() <= bound * (1.0 + 1e-12));
            }
        }

        #[test]
        fn stencil_is_odd_in_the_state(p in 2.0f64..5.0, u in proptest::collection::vec(-3.0f64..3.0, 5)) {
            let pr = PLapProblem::new(p, half(), 1.0, 5, ex("0")).unwrap();
            let rhs = assemble_rhs(&pr);
            let a = StateVec::new(u);
            let f = rhs.eval(0.0, &a).unwrap();
            let g = rhs.eval(0.0, &a.scaled(-1.0)).unwrap();
            for (x, y) in f.entries().iter().zip(g.entries()) {
                prop_assert!((x + y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }
}
