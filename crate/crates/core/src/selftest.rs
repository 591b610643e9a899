//! The acceptance battery: eleven checks against closed forms and
//! independent reference computations, each with a runtime budget.

use std::f64::consts::PI;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{FracError, Result};
use crate::expr::parse_expression;
use crate::frac::{
    caputo_derivative, gamma, mittag_leffler, rl_derivative, rl_integral, FracOrder, SampledPath,
    StateVec, TimeGrid,
};
use crate::kamke::{candidate_violation, comparison_family, stability_scan, KamkeSpec};
use crate::mnc::{
    axiom_suite, hausdorff_c0, kernel_integral_check, stock_corpus, Axiom, CoeffRule,
    HausdorffC0, PathFamily, SetFamily, SupNormMeasure,
};
use crate::oracles::{rk4, TestFn};
use crate::plap::{
    assemble_rhs, certify, lambda_np, phi_p, solve_semidiscrete, truncation_study, PLapProblem,
};
use crate::volterra::{
    existence_delta, picard_solve, uniqueness_delta, volterra_residual, IVProblem,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CriterionOutcome {
    /// One-line summary, e.g. `PASS  5 mittag-leffler oracle (0.12 s / 5 s): ...`.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {} ({:.2} s / {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.budget_seconds,
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, f64, Check); 11] = [
    (1, "operator identities", 10.0, operator_identities),
    (2, "closed-form fractional calculus", 5.0, closed_forms),
    (3, "volterra equivalence", 30.0, volterra_equivalence),
    (4, "contraction certificate", 5.0, contraction_certificate),
    (5, "mittag-leffler oracle", 5.0, mittag_leffler_oracle),
    (6, "existence interval arithmetic", 1.0, interval_arithmetic),
    (7, "mnc axiom suite", 1.0, mnc_suite),
    (8, "kernel inequality", 10.0, kernel_inequality),
    (9, "kamke machinery", 30.0, kamke_machinery),
    (10, "p-laplacian reductions", 60.0, plap_reductions),
    (11, "truncation behavior", 60.0, truncation_behavior),
];

/// Ids and names of every criterion.
pub fn criteria() -> Vec<(u8, &'static str)> {
    CRITERIA.iter().map(|c| (c.0, c.1)).collect()
}

/// Runs one criterion. Errors raised by the check count as failures; a
/// check that exceeds its budget fails as well.
pub fn run_criterion(id: u8) -> Result<CriterionOutcome> {
    let (id, name, budget, check) = *CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or(FracError::Index {
            n: id as usize,
            lo: 1,
            hi: CRITERIA.len(),
        })?;
    let start = Instant::now();
    let (ok, mut detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let in_time = seconds <= budget;
    if !in_time {
        detail.push_str(&format!("; over budget ({seconds:.2} s > {budget} s)"));
    }
    Ok(CriterionOutcome {
        id,
        name,
        passed: ok && in_time,
        detail,
        seconds,
        budget_seconds: budget,
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|c| run_criterion(c.0).expect("listed id"))
        .collect()
}

const ALPHAS: [f64; 3] = [0.25, 0.5, 0.75];
/// Derivative-based comparisons skip the start-up layer `[a, a + 0.05)`.
const WINDOW: f64 = 0.05;

fn order(a: f64) -> Result<FracOrder> {
    FracOrder::new(a)
}

fn sup_err(path: &SampledPath, exact: impl Fn(f64) -> f64, from: f64) -> f64 {
    path.grid()
        .nodes()
        .zip(path.scalar_values())
        .filter(|(t, _)| *t >= from - 1e-12)
        .fold(0.0, |m, (t, v)| m.max((v - exact(t)).abs()))
}

// errors at the roundoff floor cannot shrink further
fn shrinks(coarse: f64, fine: f64, factor: f64) -> bool {
    fine <= 1e-12 || coarse / fine >= factor
}

fn operator_identities() -> Result<(bool, String)> {
    let mut ok = true;
    let mut worst = [0.0f64; 3];
    let mut min_shrink = [f64::INFINITY; 3];
    let mut failures = Vec::new();
    for f in TestFn::ALL {
        for a in ALPHAS {
            let alpha = order(a)?;
            let co = alpha.complement().expect("alpha < 1");
            let mut errs = [[0.0; 2]; 3];
            for (k, h) in [1e-3, 5e-4].into_iter().enumerate() {
                let g = TimeGrid::spanning(0.0, 1.0, h)?;
                let path = SampledPath::from_fn(g, |t| f.eval(t));
                // J^α J^{1−α} f = J¹ f
                let semi = rl_integral(&rl_integral(&path, co), alpha);
                errs[0][k] = sup_err(&semi, |t| f.rl_integral_exact(1.0, t), 0.0);
                // D^α J^α f = f
                let inv = rl_derivative(&rl_integral(&path, alpha), alpha)?;
                errs[1][k] = sup_err(&inv, |t| f.eval(t), WINDOW);
                // D^{1−α} D^α J¹ f = f
                let comp = rl_derivative(
                    &rl_derivative(&rl_integral(&path, FracOrder::ONE), alpha)?,
                    co,
                )?;
                errs[2][k] = sup_err(&comp, |t| f.eval(t), WINDOW);
            }
            for (i, name) in ["semigroup", "inversion", "composite"].iter().enumerate() {
                let [e1, e2] = errs[i];
                worst[i] = worst[i].max(e1);
                let s = if e2 > 0.0 { e1 / e2 } else { f64::INFINITY };
                min_shrink[i] = min_shrink[i].min(s);
                if !(e1 <= 5e-3 && shrinks(e1, e2, 1.5)) {
                    ok = false;
                    failures.push(format!("{name} {} alpha={a}: {e1:.2e} -> {e2:.2e}", f.name()));
                }
            }
        }
    }
    let mut detail = format!(
        "max sup error semigroup {:.2e}, inversion {:.2e}, composite {:.2e}; min shrink {:.2}, {:.2}, {:.2}",
        worst[0], worst[1], worst[2], min_shrink[0], min_shrink[1], min_shrink[2]
    );
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join("; ")));
    }
    Ok((ok, detail))
}

fn closed_forms() -> Result<(bool, String)> {
    let (a, b) = (0.5, 1.5);
    let g = TimeGrid::spanning(a, b, 1e-3)?;
    let mut worst_int: f64 = 0.0;
    let mut worst_der: f64 = 0.0;
    for al in ALPHAS.into_iter().chain([1.0]) {
        let alpha = order(al)?;
        let g1 = gamma(al + 1.0)?;
        let one = rl_integral(&SampledPath::from_fn(g, |_| 1.0), alpha);
        worst_int = worst_int.max(sup_err(&one, |t| (t - a).powf(al) / g1, a));
        let g2 = gamma(2.0 - al)?;
        let d = caputo_derivative(&SampledPath::from_fn(g, |t| t - a), alpha)?;
        worst_der = worst_der.max(sup_err(&d, |t| (t - a).powf(1.0 - al) / g2, a + WINDOW));
    }
    Ok((
        worst_int <= 1e-3 && worst_der <= 1e-3,
        format!("J^a 1 sup error {worst_int:.2e}, D^a_C (t-a) sup error {worst_der:.2e}"),
    ))
}

fn equivalence_corpus() -> Result<Vec<(String, IVProblem)>> {
    Ok(vec![
        (
            "u' = -u, alpha 0.5".into(),
            IVProblem::scalar(0.0, 1.0, 1.0, order(0.5)?, |_, u| -u, 1.0, 1.0)?,
        ),
        (
            "u' = sin t - u/2, alpha 0.75".into(),
            IVProblem::scalar(0.0, 1.0, 0.5, order(0.75)?, |t, u| t.sin() - 0.5 * u, 1.0, 2.0)?,
        ),
        (
            "u' = 1 - u^2, alpha 0.3".into(),
            IVProblem::scalar(0.0, 1.0, 0.0, order(0.3)?, |_, u| 1.0 - u * u, 1.0, 1.0)?,
        ),
    ])
}

fn volterra_equivalence() -> Result<(bool, String)> {
    let tol = 1e-10;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, pr) in equivalence_corpus()? {
        let mut errs = Vec::new();
        let mut worst_res: f64 = 0.0;
        for h in [1e-3, 5e-4] {
            let g = TimeGrid::spanning(0.0, 1.0, h)?;
            let rep = picard_solve(&pr, g, tol, 500)?;
            let res = volterra_residual(&rep.solution, &pr)?;
            worst_res = worst_res.max(res);
            let d = caputo_derivative(&rep.solution, pr.alpha())?;
            let err = g
                .nodes()
                .zip(d.values().iter().zip(rep.solution.values()))
                .filter(|(t, _)| *t >= WINDOW - 1e-12)
                .fold(0.0f64, |m, (t, (dv, u))| {
                    m.max((dv.first() - pr.eval_rhs(t, u).first()).abs())
                });
            errs.push(err);
        }
        let rate = (errs[0] / errs[1]).log2();
        let pass = worst_res <= tol && (rate >= 0.5 || errs[1] <= 1e-12);
        ok &= pass;
        parts.push(format!(
            "{name}: residual {worst_res:.1e}, derivative error {:.2e} -> {:.2e} (order {rate:.2})",
            errs[0], errs[1]
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn contraction_certificate() -> Result<(bool, String)> {
    let alpha = order(0.5)?;
    let (beta, m) = (10.0, 11.0);
    let delta = uniqueness_delta(10.0, beta, m, 1.0, 0.5, alpha)?;
    let pr = IVProblem::scalar(0.0, delta, 1.0, alpha, |_, u| u, beta, m)?.with_kappa(1.0)?;
    let c = crate::volterra::contraction_estimate(&pr, delta, alpha)?;
    let g = TimeGrid::spanning(0.0, delta, delta / 1000.0)?;
    let rep = picard_solve(&pr, g, 1e-12, 200)?;
    let ratios = rep.ratios();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    Ok((
        (c - 0.5).abs() < 1e-12 && !ratios.is_empty() && worst <= 0.55,
        format!(
            "delta {delta:.6}, C {c:.6}, {} iterations, max increment ratio {worst:.4}",
            rep.iterations
        ),
    ))
}

fn mittag_leffler_oracle() -> Result<(bool, String)> {
    let alpha = order(0.5)?;
    let pr = IVProblem::scalar(0.0, 1.0, 1.0, alpha, |_, u| -u, 1.0, 1.0)?;
    let g = TimeGrid::spanning(0.0, 1.0, 1e-3)?;
    let rep = picard_solve(&pr, g, 1e-10, 300)?;
    let mut err: f64 = 0.0;
    for (t, v) in g.nodes().zip(rep.solution.scalar_values()) {
        let ml = mittag_leffler(alpha, -t.powf(0.5), 100)?.value;
        err = err.max((v - ml).abs());
    }
    Ok((err <= 1e-3, format!("sup error vs E_0.5(-t^0.5): {err:.2e}")))
}

fn interval_arithmetic() -> Result<(bool, String)> {
    let d = existence_delta(10.0, 1.0, 2.0, order(0.5)?)?;
    let pr = PLapProblem::new(2.0, order(0.5)?, 1.0, 16, parse_expression("exp(-50*(x-1)^2)")?)?;
    let c = certify(&pr)?;
    let checks = [
        (d, PI / 16.0),
        (c.phi_norm, 1.0),
        (c.m_bound, 8.0),
        (c.delta, PI / 256.0),
        (c.c1, 4.0),
        (c.c2, 8.0),
    ];
    let worst = checks.iter().fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok((
        worst <= 1e-12,
        format!(
            "existence_delta {d}, certificate M {} delta {} C1 {} C2 {}; max abs error {worst:.1e}",
            c.m_bound, c.delta, c.c1, c.c2
        ),
    ))
}

fn mnc_suite() -> Result<(bool, String)> {
    let corpus = stock_corpus();
    let h = axiom_suite(&HausdorffC0, &corpus)?;
    let s = axiom_suite(&SupNormMeasure, &corpus)?;
    let basis = hausdorff_c0(&SetFamily::unit_basis())?;
    let harmonic = hausdorff_c0(&SetFamily::scaled_basis(CoeffRule::InversePower {
        scale: 1.0,
        exponent: 1.0,
    })?)?;
    let witness = s.result(Axiom::Singleton).witness.clone();
    let ok = h.failed().is_empty()
        && s.failed() == vec![Axiom::Singleton]
        && witness.is_some()
        && basis.value == 1.0
        && !basis.upper_bound
        && harmonic.value == 0.0
        && !harmonic.upper_bound;
    let checks: usize = h.results.iter().map(|r| r.checks).sum();
    Ok((
        ok,
        format!(
            "hausdorff failed {:?} over {checks} checks; sup-norm failed {:?} (witness: {}); chi(e_j) = {}, chi(e_j/j) = {}",
            h.failed(),
            s.failed(),
            witness.unwrap_or_default(),
            basis.value,
            harmonic.value
        ),
    ))
}

/// The ten scalar profiles `g` of the kernel inequality corpus, with a flag
/// for sign changes on `[0, 1]`.
pub fn kernel_profiles() -> Vec<(&'static str, fn(f64) -> f64, bool)> {
    vec![
        ("1", |_| 1.0, false),
        ("s - 0.5", |s| s - 0.5, true),
        ("0", |_| 0.0, false),
        ("sin(2 pi s)", |s| (2.0 * PI * s).sin(), true),
        ("cos(3 s)", |s| (3.0 * s).cos(), true),
        ("s^2", |s| s * s, false),
        ("-s", |s| -s, false),
        ("exp(-s)", |s| (-s).exp(), false),
        ("(s - 0.3)(s - 0.7)", |s| (s - 0.3) * (s - 0.7), true),
        ("2 - 3 s", |s| 2.0 - 3.0 * s, true),
    ]
}

fn kernel_inequality() -> Result<(bool, String)> {
    let g = TimeGrid::spanning(0.0, 1.0, 1e-3)?;
    let mut ok = true;
    let mut n = 0;
    let mut min_gap = f64::INFINITY;
    let mut failures = Vec::new();
    for (name, f, sign_change) in kernel_profiles() {
        let fam = PathFamily::parametric(SampledPath::from_fn(g, f), SetFamily::unit_basis())?;
        for a in ALPHAS.into_iter().chain([1.0]) {
            let c = kernel_integral_check(&fam, order(a)?, 1.0)?;
            n += 1;
            let strict = !sign_change || c.rhs - c.lhs > crate::mnc::KERNEL_CHECK_TOL;
            if sign_change {
                min_gap = min_gap.min(c.rhs - c.lhs);
            }
            if !(c.holds && strict) {
                ok = false;
                failures.push(format!("g = {name}, alpha = {a}: lhs {} rhs {}", c.lhs, c.rhs));
            }
        }
    }
    let mut detail = format!("{n} combinations, smallest gap for sign-changing g {min_gap:.3e}");
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join("; ")));
    }
    Ok((ok, detail))
}

/// Non-negative candidate paths for the Kamke falsification check; only the
/// first is the zero path.
pub fn candidate_corpus(alpha: f64) -> Vec<(&'static str, Box<dyn Fn(f64) -> f64>)> {
    vec![
        ("0", Box::new(|_| 0.0)),
        ("t^(alpha/2)", Box::new(move |t: f64| t.powf(alpha / 2.0))),
        ("0.5", Box::new(|_| 0.5)),
        ("t", Box::new(|t| t)),
        ("t^alpha", Box::new(move |t: f64| t.powf(alpha))),
        ("t^2", Box::new(|t| t * t)),
        ("exp(t) - 1", Box::new(|t: f64| t.exp_m1())),
        ("sin(pi t)^2", Box::new(|t: f64| (PI * t).sin().powi(2))),
    ]
}

fn kamke_machinery() -> Result<(bool, String)> {
    let alpha = order(0.5)?;
    let lin = KamkeSpec::constant(1.0, 1.0, alpha, 0.0, 1.0)?;
    let g = TimeGrid::spanning(0.0, 1.0, 1e-3)?;
    let fam = comparison_family(&lin, &[1.0], g, 1e-10, 300)?;
    let mut ml_err: f64 = 0.0;
    for (t, v) in g.nodes().zip(fam.paths[0].scalar_values()) {
        let ml = mittag_leffler(alpha, t.sqrt(), 100)?.value;
        ml_err = ml_err.max((v - ml).abs());
    }

    let scan = stability_scan(&lin, &[1e-2, 1e-3, 1e-4, 1e-5], g, 1e-10, 300)?;
    let spread = scan
        .ratios
        .iter()
        .fold(0.0f64, |m, r| m.max((r - scan.ratios[0]).abs()));

    let spec = KamkeSpec::constant(0.1, 2.0, alpha, 0.0, 1.0)?;
    let mut screening_ok = true;
    let mut verdicts = Vec::new();
    for (name, f) in candidate_corpus(alpha.value()) {
        let v = candidate_violation(&spec, &SampledPath::from_fn(g, f), 1e-9)?;
        let expected = name == "0";
        screening_ok &= v.admissible == expected;
        verdicts.push(format!("{name}: {}", if v.admissible { "admissible" } else { "rejected" }));
    }
    Ok((
        ml_err <= 1e-3 && spread <= 1e-8 && screening_ok,
        format!(
            "comparison vs E_0.5(t^0.5) {ml_err:.2e}; ratio spread {spread:.1e} (A_hat {:.6}); {}",
            scan.a_hat,
            verdicts.join(", ")
        ),
    ))
}

fn plap_reductions() -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let n = 12;
    let p2 = PLapProblem::new(2.0, FracOrder::ONE, 1.0, n, parse_expression("exp(-50*(x-1)^2)")?)?;

    // stencil against u_{n+1} − 2u_n + u_{n−1}
    let mut stencil_rel: f64 = 0.0;
    for _ in 0..200 {
        let u = StateVec::new((0..n).map(|_| rng.gen_range(-10.0..10.0)).collect());
        let psi: f64 = rng.gen_range(-10.0..10.0);
        let scale = u.sup_norm().max(psi.abs());
        for k in 1..n {
            let e = u.entries();
            let lo = if k == 1 { psi } else { e[k - 2] };
            let lap = e[k] - 2.0 * e[k - 1] + lo;
            let v = lambda_np(0.0, &u, psi, k, &p2)?;
            stencil_rel = stencil_rel.max((v - lap).abs() / scale);
        }
    }

    // classical limit against Runge-Kutta on a 20x finer grid
    let delta = certify(&p2)?.delta;
    let g = TimeGrid::spanning(0.0, delta, 1e-3)?;
    let sol = solve_semidiscrete(&p2, g, 1e-12, 300)?.report.solution;
    let rhs = assemble_rhs(&p2);
    let fine = 20;
    let rhs_err = std::cell::RefCell::new(None);
    let reference = rk4(
        |t, y| match rhs.eval(t, &StateVec::new(y.to_vec())) {
            Ok(v) => v.entries().to_vec(),
            Err(e) => {
                rhs_err.borrow_mut().get_or_insert(e);
                vec![f64::NAN; y.len()]
            }
        },
        0.0,
        p2.initial_state()?.entries(),
        g.end(),
        g.n_steps() * fine,
    );
    if let Some(e) = rhs_err.into_inner() {
        return Err(e);
    }
    let mut ode_err: f64 = 0.0;
    for (j, v) in sol.values().iter().enumerate() {
        for (a, b) in v.entries().iter().zip(&reference[j * fine]) {
            ode_err = ode_err.max((a - b).abs());
        }
    }

    // |Φ_p(x − y)| ≤ 2^{p−1} z^{p−1} for |x|, |y| ≤ z
    let mut growth_fail = 0;
    for _ in 0..10_000 {
        let p: f64 = rng.gen_range(2.0..6.0);
        let z: f64 = rng.gen_range(0.0..10.0);
        let x = z * rng.gen_range(-1.0..=1.0);
        let y = z * rng.gen_range(-1.0..=1.0);
        let lhs = phi_p(x - y, p)?.abs();
        if lhs > 2f64.powf(p - 1.0) * z.powf(p - 1.0) * (1.0 + 1e-12) {
            growth_fail += 1;
        }
    }
    Ok((
        stencil_rel <= 1e-15 && ode_err <= 1e-3 && growth_fail == 0,
        format!(
            "stencil vs Laplacian rel {stencil_rel:.1e}; alpha=1 vs RK4 on [0, {delta:.4}] {ode_err:.2e}; growth bound violations {growth_fail}/10000"
        ),
    ))
}

fn truncation_behavior() -> Result<(bool, String)> {
    let pr = PLapProblem::new(2.0, order(0.5)?, 1.0, 8, parse_expression("2^(-x)")?)?;
    let g = TimeGrid::spanning(0.0, 1.0, 2e-3)?;
    let rows = truncation_study(&pr, &[8, 16, 32], g, 1e-10, 400)?;
    let diffs: Vec<f64> = rows.iter().map(|r| r.sup_diff).collect();
    let monotone = diffs.windows(2).all(|w| w[1] <= w[0]);
    Ok((
        monotone,
        format!(
            "sup differences N 8->16 {:.3e}, 16->32 {:.3e}",
            diffs[0], diffs[1]
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_is_an_error() {
        assert!(run_criterion(0).is_err());
        assert!(run_criterion(12).is_err());
        assert_eq!(criteria().len(), 11);
    }

    #[test]
    fn outcome_line_format() {
        let o = CriterionOutcome {
            id: 6,
            name: "x",
            passed: false,
            detail: "d".into(),
            seconds: 0.5,
            budget_seconds: 1.0,
        };
        assert_eq!(o.line(), "FAIL  6 x (0.50 s / 1 s): d");
    }

    #[test]
    fn candidate_corpus_starts_with_zero() {
        let c = candidate_corpus(0.5);
        assert_eq!(c[0].0, "0");
        assert!(c.iter().skip(1).all(|(_, f)| f(0.5) > 0.0));
    }
}
