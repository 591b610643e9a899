use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use fracdyn_core::frac::{FracOrder, SampledPath, TimeGrid};
use fracdyn_core::kamke::stability_scan;
use fracdyn_core::mnc::{axiom_suite, kernel_integral_check, stock_corpus, HausdorffC0, PathFamily, SetFamily, SupNormMeasure};
use fracdyn_core::plap::{certify, solve_semidiscrete, step_study, truncation_study};
use fracdyn_core::selftest;
use serde_json::{json, Value};

use crate::{CliError, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Certify,
    Solve,
    Sweep,
    Mnc,
    Kamke,
    Selftest,
}

impl Command {
    pub fn needs_config(self) -> bool {
        !matches!(self, Command::Mnc | Command::Selftest)
    }

    fn name(self) -> &'static str {
        match self {
            Command::Certify => "certify",
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Mnc => "mnc",
            Command::Kamke => "kamke",
            Command::Selftest => "selftest",
        }
    }
}

/// Shortest round-trip decimal.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn json_bytes(v: &impl serde::Serialize) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(format!("serializing output: {e}")))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes every artifact or none: files written before a failure are removed.
fn commit(out_dir: &Path, artifacts: Vec<(&str, Vec<u8>)>) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut written = Vec::new();
    for (name, bytes) in artifacts {
        let path = out_dir.join(name);
        if let Err(e) = fs::write(&path, bytes) {
            let _ = fs::remove_file(&path);
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(io_err(&path, e));
        }
        written.push(path);
    }
    Ok(written)
}

fn trajectory_csv(path: &SampledPath) -> String {
    let mut s = String::from("t");
    for k in 1..=path.dim() {
        let _ = write!(s, ",u_{k}");
    }
    s.push('\n');
    for (t, v) in path.grid().nodes().zip(path.values()) {
        s.push_str(&num(t));
        for x in v.entries() {
            s.push(',');
            s.push_str(&num(*x));
        }
        s.push('\n');
    }
    s
}

fn say(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Io(format!("writing to stdout: {e}")))
}

/// Executes `command`, writing artifacts into `out_dir` and progress lines
/// to `out`. Returns the artifact paths.
pub fn run(
    command: Command,
    config: Option<&RunConfig>,
    out_dir: &Path,
    out: &mut dyn Write,
) -> Result<Vec<PathBuf>, CliError> {
    let cfg = match (command.needs_config(), config) {
        (true, None) => {
            return Err(CliError::Validation(format!(
                "--config is required for {}",
                command.name()
            )))
        }
        (_, c) => c,
    };
    let artifacts: Vec<(&str, Vec<u8>)> = match command {
        Command::Certify => {
            let cfg = cfg.expect("checked");
            let cert = certify(&cfg.problem()?)?;
            for n in &cert.notes {
                say(out, &format!("warning: {n}"))?;
            }
            say(out, &format!("certified: M = {}, delta = {}", num(cert.m_bound), num(cert.delta)))?;
            vec![("certificate.json", json_bytes(&cert)?)]
        }
        Command::Solve => {
            let cfg = cfg.expect("checked");
            let grid = TimeGrid::spanning(0.0, cfg.t_end, cfg.h)?;
            let sol = solve_semidiscrete(&cfg.problem()?, grid, cfg.tol, cfg.max_iter)?;
            for w in &sol.report.warnings {
                say(out, &format!("warning: {w}"))?;
            }
            say(
                out,
                &format!(
                    "converged in {} iterations, residual {}",
                    sol.report.iterations,
                    num(sol.report.residual)
                ),
            )?;
            let mut report = serde_json::to_value(&sol.report)
                .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
            if let Value::Object(m) = &mut report {
                let within = sol
                    .certificate
                    .as_ref()
                    .is_some_and(|c| grid.end() <= c.delta * (1.0 + 1e-12));
                m.insert("certified".into(), Value::Bool(within));
                m.insert(
                    "certified_delta".into(),
                    sol.certificate.as_ref().map_or(Value::Null, |c| json!(c.delta)),
                );
            }
            vec![
                ("trajectory.csv", trajectory_csv(&sol.report.solution).into_bytes()),
                ("report.json", json_bytes(&report)?),
            ]
        }
        Command::Sweep => {
            let cfg = cfg.expect("checked");
            let pr = cfg.problem()?;
            let grid = TimeGrid::spanning(0.0, cfg.t_end, cfg.h)?;
            let trunc = truncation_study(&pr, &cfg.sweep.n_list, grid, cfg.tol, cfg.max_iter)?;
            let steps = step_study(&pr, &cfg.sweep.h_list, cfg.t_end, cfg.tol, cfg.max_iter)?;
            let mut csv = String::from("study,N,N_next,h,sup_diff\n");
            for r in &trunc {
                let _ = writeln!(csv, "truncation,{},{},{},{}", r.n_coarse, r.n_fine, num(grid.step()), num(r.sup_diff));
            }
            for r in &steps {
                let _ = writeln!(csv, "step,{},,{},{}", cfg.n, num(r.h), num(r.sup_diff));
            }
            say(out, &format!("{} truncation rows, {} step rows", trunc.len(), steps.len()))?;
            vec![("sweep.csv", csv.into_bytes())]
        }
        Command::Mnc => {
            let h = cfg.map_or(1e-3, |c| c.h);
            let corpus = stock_corpus();
            let hausdorff = axiom_suite(&HausdorffC0, &corpus)?;
            let sup_norm = axiom_suite(&SupNormMeasure, &corpus)?;
            let grid = TimeGrid::spanning(0.0, 1.0, h)?;
            let mut kernel = Vec::new();
            for (name, g, sign_change) in selftest::kernel_profiles() {
                let fam = PathFamily::parametric(SampledPath::from_fn(grid, g), SetFamily::unit_basis())?;
                for a in [0.25, 0.5, 0.75, 1.0] {
                    let c = kernel_integral_check(&fam, FracOrder::new(a)?, 1.0)?;
                    kernel.push(json!({
                        "g": name, "alpha": a, "sign_change": sign_change,
                        "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds,
                    }));
                }
            }
            say(
                out,
                &format!(
                    "hausdorff_c0 failed {:?}; sup_norm_measure failed {:?}",
                    hausdorff.failed(),
                    sup_norm.failed()
                ),
            )?;
            let report = json!({
                "corpus": corpus.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "hausdorff_c0": hausdorff,
                "sup_norm_measure": sup_norm,
                "kernel_inequality": kernel,
            });
            vec![("mnc_report.json", json_bytes(&report)?)]
        }
        Command::Kamke => {
            let cfg = cfg.expect("checked");
            let spec = cfg.kamke_spec()?;
            let grid = TimeGrid::spanning(0.0, cfg.t_end, cfg.h)?;
            let scan = stability_scan(&spec, &cfg.kamke.eps, grid, cfg.tol, cfg.max_iter)?;
            if scan.shrunk {
                say(out, &format!("warning: interval shortened to [0, {}] to certify the comparison solves", num(scan.certified_end)))?;
            }
            say(out, &format!("A_hat = {}", num(scan.a_hat)))?;
            let report = json!({
                "H": cfg.kamke.h_coef,
                "lambda": cfg.kamke.lambda,
                "alpha": cfg.alpha.value(),
                "scan": scan,
            });
            vec![("kamke.json", json_bytes(&report)?)]
        }
        Command::Selftest => {
            let outcomes = selftest::run_all();
            for o in &outcomes {
                say(out, &o.line())?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(CliError::Validation(format!(
                    "{failed} of {} acceptance criteria failed",
                    outcomes.len()
                )));
            }
            say(out, &format!("all {} criteria passed", outcomes.len()))?;
            Vec::new()
        }
    };
    if artifacts.is_empty() {
        return Ok(Vec::new());
    }
    let written = commit(out_dir, artifacts)?;
    for p in &written {
        say(out, &format!("wrote {}", p.display()))?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracdyn_core::frac::StateVec;

    #[test]
    fn csv_layout() {
        let g = TimeGrid::new(0.0, 0.5, 2).unwrap();
        let p = SampledPath::constant(g, StateVec::new(vec![0.1, 0.0]));
        assert_eq!(trajectory_csv(&p), "t,u_1,u_2\n0.0,0.1,0.0\n0.5,0.1,0.0\n1.0,0.1,0.0\n");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1e-300, 12345.678, -0.0, 2.0 / 3.0] {
            assert_eq!(num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
