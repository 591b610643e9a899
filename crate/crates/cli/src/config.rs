//! JSON run configuration.
//!
//! ```json
//! {
//!   "alpha": 0.5, "p": 2, "T": 1, "N": 32,
//!   "phi": "exp(-0.6931471805599453*x)",
//!   "r": "1", "F": "0", "psi": "0", "beta": 1,
//!   "h": 0.001, "tol": 1e-8, "max_iter": 200,
//!   "kamke": { "H": 1, "lambda": 1, "eps": [0.01, 0.001] },
//!   "sweep": { "N": [8, 16, 32], "h": [0.004, 0.002, 0.001] }
//! }
//! ```
//!
//! `alpha`, `p`, `T`, `N` and `phi` are required; the rest have defaults.

use fracdyn_core::expr::{parse_expression, Expr};
use fracdyn_core::frac::FracOrder;
use fracdyn_core::kamke::KamkeSpec;
use fracdyn_core::plap::PLapProblem;
use serde_json::{Map, Value};

use crate::CliError;

pub const DEFAULT_H: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_BETA: f64 = 1.0;
pub const DEFAULT_EPS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

#[derive(Debug, Clone, PartialEq)]
pub struct KamkeConfig {
    pub h_coef: f64,
    pub lambda: f64,
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub h_list: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: FracOrder,
    pub p: f64,
    pub t_end: f64,
    pub n: usize,
    pub beta: f64,
    pub r: Expr,
    pub forcing: Expr,
    pub phi: Expr,
    pub psi: Expr,
    pub h: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub kamke: KamkeConfig,
    pub sweep: SweepConfig,
}

impl RunConfig {
    pub fn problem(&self) -> Result<PLapProblem, CliError> {
        let pr = PLapProblem::new(self.p, self.alpha, self.t_end, self.n, self.phi.clone())?
            .with_r(self.r.clone())
            .with_forcing(self.forcing.clone())
            .with_boundary(self.psi.clone())?
            .with_beta(self.beta)?;
        Ok(pr)
    }

    /// Comparison spec `H·s^λ` on `[0, T]`.
    pub fn kamke_spec(&self) -> Result<KamkeSpec, CliError> {
        Ok(KamkeSpec::constant(
            self.kamke.h_coef,
            self.kamke.lambda,
            self.alpha,
            0.0,
            self.t_end,
        )?)
    }
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(msg)
}

struct Fields<'a> {
    prefix: &'static str,
    map: &'a Map<String, Value>,
}

impl<'a> Fields<'a> {
    fn path(&self, key: &str) -> String {
        format!("{}{key}", self.prefix)
    }

    fn check_known(&self, known: &[&str]) -> Result<(), CliError> {
        match self.map.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(invalid(format!("{}: unknown field", self.path(k)))),
            None => Ok(()),
        }
    }

    fn raw(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key).filter(|v| !v.is_null())
    }

    fn required<T>(&self, key: &str, get: impl Fn(&Self, &str) -> Result<Option<T>, CliError>) -> Result<T, CliError> {
        get(self, key)?.ok_or_else(|| invalid(format!("missing required field `{}`", self.path(key))))
    }

    fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.as_f64()
                    .ok_or_else(|| invalid(format!("{}: expected a number, got {v}", self.path(key))))
            })
            .transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.raw(key)
            .map(|v| {
                v.as_u64().map(|n| n as usize).ok_or_else(|| {
                    invalid(format!("{}: expected a non-negative integer, got {v}", self.path(key)))
                })
            })
            .transpose()
    }

    fn expr(&self, key: &str) -> Result<Option<Expr>, CliError> {
        self.raw(key)
            .map(|v| {
                let s = v.as_str().ok_or_else(|| {
                    invalid(format!("{}: expected an expression string, got {v}", self.path(key)))
                })?;
                parse_expression(s).map_err(|e| invalid(format!("{}: {e}", self.path(key))))
            })
            .transpose()
    }

    fn list<T>(&self, key: &str, item: impl Fn(&Value) -> Option<T>, what: &str) -> Result<Option<Vec<T>>, CliError> {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        let arr = v
            .as_array()
            .ok_or_else(|| invalid(format!("{}: expected a list of {what}", self.path(key))))?;
        if arr.is_empty() {
            return Err(invalid(format!("{}: list must not be empty", self.path(key))));
        }
        arr.iter()
            .enumerate()
            .map(|(i, x)| {
                item(x).ok_or_else(|| {
                    invalid(format!("{}[{i}]: expected {what}, got {x}", self.path(key)))
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn section(&self, key: &str, prefix: &'static str) -> Result<Option<Fields<'a>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.as_object()
                    .map(|map| Fields { prefix, map })
                    .ok_or_else(|| invalid(format!("{}: expected an object", self.path(key))))
            })
            .transpose()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg()))
    }
}

/// Parses and validates a JSON configuration, filling defaults.
pub fn parse_config(source: &str) -> Result<RunConfig, CliError> {
    let value: Value =
        serde_json::from_str(source).map_err(|e| invalid(format!("config is not valid JSON: {e}")))?;
    let map = value
        .as_object()
        .ok_or_else(|| invalid("config must be a JSON object".into()))?;
    let top = Fields { prefix: "", map };
    top.check_known(&[
        "alpha", "p", "T", "N", "beta", "r", "F", "phi", "psi", "h", "tol", "max_iter", "kamke",
        "sweep",
    ])?;

    let alpha = top.required("alpha", Fields::number)?;
    ensure(alpha > 0.0 && alpha <= 1.0, || format!("alpha: alpha must lie in (0,1], got {alpha}"))?;
    let alpha = FracOrder::new(alpha)?;
    let p = top.required("p", Fields::number)?;
    ensure(p >= 2.0, || format!("p: p must be ≥ 2, got {p}"))?;
    let t_end = top.required("T", Fields::number)?;
    ensure(t_end > 0.0, || format!("T: T must be positive, got {t_end}"))?;
    let n = top.required("N", Fields::count)?;
    ensure(n >= 2, || format!("N: N must be at least 2, got {n}"))?;
    let phi = top.required("phi", Fields::expr)?;

    let beta = top.number("beta")?.unwrap_or(DEFAULT_BETA);
    ensure(beta > 0.0, || format!("beta: beta must be positive, got {beta}"))?;
    let h = top.number("h")?.unwrap_or(DEFAULT_H);
    ensure(h > 0.0, || format!("h: h must be positive, got {h}"))?;
    let tol = top.number("tol")?.unwrap_or(DEFAULT_TOL);
    ensure(tol > 0.0, || format!("tol: tol must be positive, got {tol}"))?;
    let max_iter = top.count("max_iter")?.unwrap_or(DEFAULT_MAX_ITER);
    ensure(max_iter >= 1, || "max_iter: max_iter must be at least 1".into())?;
    let r = top.expr("r")?.unwrap_or_else(|| Expr::num(1.0));
    let forcing = top.expr("F")?.unwrap_or_else(Expr::zero);
    let psi = top.expr("psi")?.unwrap_or_else(Expr::zero);

    let kamke = match top.section("kamke", "kamke.")? {
        None => KamkeConfig {
            h_coef: 1.0,
            lambda: 1.0,
            eps: DEFAULT_EPS.to_vec(),
        },
        Some(k) => {
            k.check_known(&["H", "lambda", "eps"])?;
            let h_coef = k.number("H")?.unwrap_or(1.0);
            ensure(h_coef >= 0.0, || format!("kamke.H: H must be non-negative, got {h_coef}"))?;
            let lambda = k.number("lambda")?.unwrap_or(1.0);
            ensure(lambda >= 1.0, || format!("kamke.lambda: lambda must be ≥ 1, got {lambda}"))?;
            let eps = k
                .list("eps", |v| v.as_f64().filter(|e| *e > 0.0), "a positive number")?
                .unwrap_or_else(|| DEFAULT_EPS.to_vec());
            KamkeConfig { h_coef, lambda, eps }
        }
    };

    let sweep = match top.section("sweep", "sweep.")? {
        None => SweepConfig {
            n_list: vec![n, 2 * n, 4 * n],
            h_list: vec![4.0 * h, 2.0 * h, h],
        },
        Some(s) => {
            s.check_known(&["N", "h"])?;
            let n_list = s
                .list("N", |v| v.as_u64().map(|x| x as usize).filter(|x| *x >= 2), "an integer ≥ 2")?
                .unwrap_or_else(|| vec![n, 2 * n, 4 * n]);
            ensure(n_list.windows(2).all(|w| w[0] <= w[1]), || {
                "sweep.N: list must be non-decreasing".into()
            })?;
            let h_list = s
                .list("h", |v| v.as_f64().filter(|x| *x > 0.0), "a positive number")?
                .unwrap_or_else(|| vec![4.0 * h, 2.0 * h, h]);
            SweepConfig { n_list, h_list }
        }
    };

    Ok(RunConfig {
        alpha,
        p,
        t_end,
        n,
        beta,
        r,
        forcing,
        phi,
        psi,
        h,
        tol,
        max_iter,
        kamke,
        sweep,
    })
}
